//! Build the fielded, boosted query for a piece of context code under a few
//! flag combinations.

use qarec::eval::default_configurations;
use qarec::build_query;

const CONTEXT: &str = include_str!("../fixtures/listings/listing1.java");

fn main() {
    for config in default_configurations() {
        let query = build_query(CONTEXT, &config.flags);
        println!("== {} ({} clauses)", config.id, query.len());
        println!("{}", query.to_text());
    }
}
