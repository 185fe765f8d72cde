use serde::{Deserialize, Serialize};

/// `standard` is Okapi BM25 with idf. `paper_eq2` is the saturation term
/// `f / (k1 * (1 - b + b * l / avg) + f)` on its own, with no idf and no
/// `(k1 + 1)` numerator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScorerMode {
    #[default]
    Standard,
    PaperEq2,
}

impl std::str::FromStr for ScorerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(ScorerMode::Standard),
            "paper_eq2" => Ok(ScorerMode::PaperEq2),
            other => Err(format!("unknown scorer mode {other:?} (expected standard or paper_eq2)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoringParams {
    pub k1: f64,
    pub b: f64,
    pub scorer_mode: ScorerMode,
}

impl Default for ScoringParams {
    fn default() -> Self {
        ScoringParams { k1: 2.0, b: 0.75, scorer_mode: ScorerMode::Standard }
    }
}

/// `ln(1 + (N - df + 0.5) / (df + 0.5))`, always positive.
pub fn idf(doc_count: usize, df: usize) -> f64 {
    let (n, df) = (doc_count as f64, df as f64);
    (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
}

/// Weight of a term that occurs `tf` times in a field of length `len`.
pub fn bm25_weight(tf: u32, len: u32, avg_len: f64, df: usize, doc_count: usize, params: &ScoringParams) -> f64 {
    if tf == 0 || avg_len <= 0.0 {
        return 0.0;
    }
    let f = f64::from(tf);
    let norm = params.k1 * (1.0 - params.b + params.b * f64::from(len) / avg_len);
    match params.scorer_mode {
        ScorerMode::Standard => idf(doc_count, df) * (f * (params.k1 + 1.0)) / (f + norm),
        ScorerMode::PaperEq2 => f / (norm + f),
    }
}
