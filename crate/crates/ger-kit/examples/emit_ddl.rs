//! Render annotated SQL DDL for a schema, symbolically and with a name
//! binding applied.
//!
//! Run with: cargo run --example emit_ddl

use ger_kit::emit::emit_sql;
use ger_kit::rds::to_rds;
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

const NAMES: &str = "\
e1 = Employee
k(e1) = Emp_No
s1(e1) = Name
e2 = Project
k(e2) = Pro_No
r1(e1.e2) = WorksOn
";

fn main() {
    let rds = to_rds(&parse_schema(SCHEMA).expect("valid schema"));

    println!("-- symbolic identifiers (mangled labels)");
    print!("{}", emit_sql(&rds, None).expect("well-formed rds"));

    let binding = parse_binding(NAMES).expect("valid binding");
    println!("\n-- bound names pass through unmangled");
    print!("{}", emit_sql(&rds, Some(&binding)).expect("binding matches"));
}
