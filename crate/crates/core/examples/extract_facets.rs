//! Pull the six code facets out of a fragment that does not compile on its
//! own, and show which wrapper made it parse.
//!
//! cargo run --example extract_facets [-- Snippet.java]

use qarec::codeparse::{parse_facets, FacetKind};

fn main() -> std::io::Result<()> {
    let source = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("../fixtures/listings/listing2.java").to_string(),
    };
    let (facets, outcome) = parse_facets(&source);
    println!("mode: {:?}  wrapped: {}  parsed: {}", outcome.mode_used, outcome.wrapped, outcome.parsed);
    for kind in FacetKind::ALL {
        let terms: Vec<&str> = facets.get(kind).iter().map(String::as_str).collect();
        println!("{kind:?}: {}", terms.join(", "));
    }
    Ok(())
}
