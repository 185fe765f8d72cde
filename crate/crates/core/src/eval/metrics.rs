use super::EvalError;

/// Scores at or above this count as a hit.
pub const RELEVANT: u8 = 3;

fn top(scores: &[u8], n: usize) -> &[u8] {
    &scores[..scores.len().min(n)]
}

/// Fraction of queries with at least one hit among their first `n` scores.
pub fn success_rate(per_query: &[Vec<u8>], n: usize) -> Result<f64, EvalError> {
    if per_query.is_empty() {
        return Err(EvalError::EmptySet);
    }
    let hits = per_query.iter().filter(|s| top(s, n).iter().any(|&x| x >= RELEVANT)).count();
    Ok(hits as f64 / per_query.len() as f64)
}

/// Hits among the first `n` scores of every query, over `n * queries`.
/// Missing slots count as misses.
pub fn precision_at_n(per_query: &[Vec<u8>], n: usize) -> Result<f64, EvalError> {
    if per_query.is_empty() || n == 0 {
        return Err(EvalError::EmptySet);
    }
    let hits: usize = per_query.iter().map(|s| top(s, n).iter().filter(|&&x| x >= RELEVANT).count()).sum();
    Ok(hits as f64 / (n * per_query.len()) as f64)
}

/// Per-query precision, for significance testing.
pub fn query_precisions(per_query: &[Vec<u8>], n: usize) -> Vec<f64> {
    per_query
        .iter()
        .map(|s| top(s, n).iter().filter(|&&x| x >= RELEVANT).count() as f64 / n as f64)
        .collect()
}

/// 1.0 for queries with a hit, else 0.0.
pub fn query_successes(per_query: &[Vec<u8>], n: usize) -> Vec<f64> {
    per_query.iter().map(|s| f64::from(u8::from(top(s, n).iter().any(|&x| x >= RELEVANT)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definitions() {
        assert_eq!(precision_at_n(&[vec![4, 3, 2, 1, 0]], 5).unwrap(), 0.4);
        assert_eq!(success_rate(&[vec![0; 5], vec![1, 2]], 5).unwrap(), 0.0);
        assert!(matches!(success_rate(&[], 5), Err(EvalError::EmptySet)));
        assert!(matches!(precision_at_n(&[], 5), Err(EvalError::EmptySet)));
    }

    #[test]
    fn only_top_n_count() {
        let q = vec![vec![0, 0, 4]];
        assert_eq!(success_rate(&q, 2).unwrap(), 0.0);
        assert_eq!(precision_at_n(&q, 3).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn coincide_at_one() {
        let q = vec![vec![3], vec![1], vec![4, 0], vec![]];
        assert_eq!(success_rate(&q, 1).unwrap(), precision_at_n(&q, 1).unwrap());
    }
}
