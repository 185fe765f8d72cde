//! Rank terms by their entropy contribution and split them into four boost
//! tiers.

use qarec::query::{assign_quartile_boosts, entropy_scores, multiset, rank_by_score};

fn main() {
    let terms = "context route context from to route context addRoutes start main configure context"
        .split_whitespace();
    let counts = multiset(terms);
    let scores = entropy_scores(&counts);
    let ranked = rank_by_score(&scores);
    for (term, boost) in assign_quartile_boosts(&ranked) {
        println!("{term:<10} count={} -p·ln(p)={:.4} boost={boost}", counts[term], scores[term]);
    }
}
