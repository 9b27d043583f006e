//! Parse a .ger document, then show how validation reports every problem
//! in a broken one.
//!
//! Run with: cargo run --example validate_schema

use ger_kit::schema::{format_schema, parse_schema};

const GOOD: &str = "\
entity e1
entity e2
attr s1(e1)
rel r1(e1.e2)
card m(e1.r1(e1.e2)) = 0
card x(e1.r1(e1.e2)) = 1
card m(e2.r1(e1.e2)) = 1
card x(e2.r1(e1.e2)) = N
";

const BROKEN: &str = "\
entity e1
entity e3
attr s2(e1)
rel r1(e1.e3)
card m(e1.r1(e1.e3)) = 5
card x(e1.r1(e1.e3)) = 2
card m(e3.r1(e1.e3)) = 0
";

fn main() {
    let schema = parse_schema(GOOD).expect("valid document");
    println!("canonical form (note the implied pk lines):\n{}", format_schema(&schema));

    println!("diagnostics for the broken document:");
    for diag in parse_schema(BROKEN).expect_err("invalid document") {
        println!("  {diag}");
    }
}
