//! Turn a fragment into a compilable unit with deduced imports, using a
//! frequency-ranked table of canonical class names.

use qarec::codeparse::{augment_snippet, deduce_imports, load_canonical_table, parse_facets, DEFAULT_TABLE_TOP_N};

const SNIPPET: &str = include_str!("../fixtures/listings/listing2.java");
// Text around the snippet in its post; it breaks ties between candidates.
const CONTEXT: &str = "How to parse Java source with the Eclipse JDT ASTParser and JavaCore options";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = load_canonical_table(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/canonical_table.tsv"), DEFAULT_TABLE_TOP_N)?;
    let (facets, _) = parse_facets(SNIPPET);
    let deduction = deduce_imports(&facets, &table, CONTEXT);
    println!("deduced: {:?}", deduction.imports);
    println!("unresolved: {:?}", deduction.unresolved);
    println!("\n{}", augment_snippet(SNIPPET, &table, CONTEXT));
    Ok(())
}
