use statrs::function::erf::erfc;

use super::EvalError;

/// Combined sizes up to this use the exact permutation distribution.
pub const EXACT_MAX_TOTAL: usize = 20;

/// Midranks of `values`, doubled so that ties stay integral.
pub fn doubled_midranks(values: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0u64; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // 1-based positions i+1..=j+1, midrank (i+j+2)/2
        for &k in &order[i..=j] {
            ranks[k] = (i + j + 2) as u64;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) p-value with midranks.
///
/// Exact when `a.len() + b.len() <= 20`, otherwise the normal
/// approximation with tie and continuity corrections.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<f64, EvalError> {
    if a.is_empty() || b.is_empty() {
        return Err(EvalError::EmptySample);
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(EvalError::NotANumber);
    }
    if a.len() + b.len() <= EXACT_MAX_TOTAL {
        Ok(exact(a, b))
    } else {
        Ok(normal_approximation(a, b))
    }
}

fn pooled(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().chain(b).copied().collect()
}

/// Count, for every subset size and doubled-rank sum, the subsets reaching it.
fn exact(a: &[f64], b: &[f64]) -> f64 {
    let ranks = doubled_midranks(&pooled(a, b));
    let (na, n) = (a.len(), ranks.len());
    let total: u64 = ranks.iter().sum();
    let observed: u64 = ranks[..na].iter().sum();

    let max = total as usize;
    let mut ways = vec![vec![0u64; max + 1]; na + 1];
    ways[0][0] = 1;
    for &r in &ranks {
        let r = r as usize;
        for k in (1..=na).rev() {
            for s in (r..=max).rev() {
                ways[k][s] += ways[k - 1][s - r];
            }
        }
    }

    // |n*T - na*total| compares each subset sum to the null mean without division
    let centre = (na as u64 * total) as i128;
    let dev = |t: u64| ((n as u64 * t) as i128 - centre).abs();
    let obs_dev = dev(observed);
    let (mut extreme, mut all) = (0u64, 0u64);
    for (s, &w) in ways[na].iter().enumerate() {
        all += w;
        if w > 0 && dev(s as u64) >= obs_dev {
            extreme += w;
        }
    }
    (extreme as f64 / all as f64).min(1.0)
}

fn normal_approximation(a: &[f64], b: &[f64]) -> f64 {
    let pooled = pooled(a, b);
    let ranks = doubled_midranks(&pooled);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na + nb;
    let w: f64 = ranks[..a.len()].iter().map(|&r| r as f64 / 2.0).sum();
    let u = w - na * (na + 1.0) / 2.0;
    let mu = na * nb / 2.0;

    let mut sorted = pooled;
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((u - mu).abs() - 0.5).max(0.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midranks_with_ties() {
        assert_eq!(doubled_midranks(&[3.0, 1.0, 3.0, 2.0]), [7, 2, 7, 4]);
    }

    #[test]
    fn small_exact_cases() {
        assert_eq!(wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert!((wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[10.0, 11.0, 12.0]).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(wilcoxon_rank_sum(&[5.0; 4], &[5.0; 7]).unwrap(), 1.0);
    }

    #[test]
    fn symmetry_and_rank_invariance() {
        let a = [0.3, 1.7, 2.2, 5.0, 0.1, 9.0];
        let b = [4.0, 4.5, 6.1, 7.7, 8.2, 3.3, 10.0];
        let p = wilcoxon_rank_sum(&a, &b).unwrap();
        assert_eq!(p, wilcoxon_rank_sum(&b, &a).unwrap());
        let tr = |xs: &[f64]| xs.iter().map(|x| 3.0 * x - 7.0).collect::<Vec<_>>();
        assert_eq!(p, wilcoxon_rank_sum(&tr(&a), &tr(&b)).unwrap());
    }

    #[test]
    fn approximation_is_symmetric_and_one_when_identical() {
        let a: Vec<f64> = (0..15).map(f64::from).collect();
        assert_eq!(wilcoxon_rank_sum(&a, &a).unwrap(), 1.0);
        let b: Vec<f64> = (5..25).map(f64::from).collect();
        let p = wilcoxon_rank_sum(&a, &b).unwrap();
        assert!((p - wilcoxon_rank_sum(&b, &a).unwrap()).abs() < 1e-15);
        assert!(p > 0.0 && p < 0.05);
    }

    #[test]
    fn empty_sample() {
        assert!(matches!(wilcoxon_rank_sum(&[], &[1.0]), Err(EvalError::EmptySample)));
    }
}
