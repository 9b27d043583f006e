//! Render a schema as DOT diagram text (pipe into `dot -Tsvg` to draw it).
//!
//! Run with: cargo run --example emit_diagram

use ger_kit::emit::emit_dot;
use ger_kit::schema::{parse_binding, parse_schema};

const SCHEMA: &str = "\
entity e1
entity e2
attr s1(e1)
attr s1(r1(e1.e2))
rel r1(e1.e2)
card m(e1.r1(e1.e2)) = 0
card x(e1.r1(e1.e2)) = 2
card m(e2.r1(e1.e2)) = 3
card x(e2.r1(e1.e2)) = 5
";

fn main() {
    let schema = parse_schema(SCHEMA).expect("valid schema");
    let binding = parse_binding("e1 = Employee\nr1(e1.e2) = WorksOn\n").expect("valid binding");
    print!("{}", emit_dot(&schema, Some(&binding)));
}
