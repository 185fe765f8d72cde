use std::collections::BTreeMap;
use std::hash::Hash;

/// Each term's share of the context entropy, `-p ln p` with `p = count / total`.
///
/// The values sum to the entropy of the whole multiset.
pub fn entropy_scores<K: Ord + Clone>(counts: &BTreeMap<K, u64>) -> BTreeMap<K, f64> {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return BTreeMap::new();
    }
    let total = total as f64;
    counts
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| {
            let p = c as f64 / total;
            (k.clone(), -p * p.ln())
        })
        .collect()
}

/// Count a multiset given as a sequence of items.
pub fn multiset<K: Ord>(items: impl IntoIterator<Item = K>) -> BTreeMap<K, u64> {
    let mut out = BTreeMap::new();
    for k in items {
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

/// Order terms by score descending, key ascending.
pub fn rank_by_score<K: Ord + Clone>(scores: &BTreeMap<K, f64>) -> Vec<K> {
    let mut ranked: Vec<(&K, f64)> = scores.iter().map(|(k, &s)| (k, s)).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.into_iter().map(|(k, _)| k.clone()).collect()
}

/// Boost for 0-based rank `r` out of `n`: `4 - floor(4r / n)`.
pub fn quartile_boost(rank: usize, n: usize) -> u8 {
    debug_assert!(rank < n);
    4 - (4 * rank / n) as u8
}

/// Map an already ranked list to quartile boosts 4, 3, 2, 1.
pub fn assign_quartile_boosts<K: Eq + Hash + Clone>(ranked: &[K]) -> Vec<(K, u8)> {
    let n = ranked.len();
    ranked.iter().enumerate().map(|(r, k)| (k.clone(), quartile_boost(r, n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_arithmetic() {
        let s = entropy_scores(&multiset(["a", "a", "b", "c"]));
        let h: f64 = s.values().sum();
        assert!((s["a"] - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!((s["b"] - 0.25 * 4f64.ln()).abs() < 1e-15);
        assert!((h - 1.5 * 2f64.ln()).abs() < 1e-12);
        assert!((h - 1.0397).abs() < 1e-4);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(entropy_scores::<&str>(&BTreeMap::new()).is_empty());
        assert_eq!(entropy_scores(&multiset(["x", "x", "x"]))["x"], 0.0);
        assert!(assign_quartile_boosts::<u8>(&[]).is_empty());
    }

    #[test]
    fn quartiles() {
        let boosts = |n: usize| (0..n).map(|r| quartile_boost(r, n)).collect::<Vec<_>>();
        assert_eq!(boosts(8), [4, 4, 3, 3, 2, 2, 1, 1]);
        assert_eq!(boosts(5), [4, 4, 3, 2, 1]);
        assert_eq!(boosts(1), [4]);
    }

    #[test]
    fn ties_rank_lexicographically() {
        let s = entropy_scores(&multiset(["b", "a", "c", "c", "c", "c"]));
        assert_eq!(rank_by_score(&s), ["a", "b", "c"]);
    }
}
