//! Instantiate a symbolic schema to a real-world domain by binding labels
//! to names, and render every label of the schema.
//!
//! Run with: cargo run --example bind_names

use ger_kit::schema::{apply_binding, check_pk_name, parse_binding, parse_schema, validate_binding};

const SCHEMA: &str = "\
entity e1
entity e2
attr s1(e1)
attr s2(e1)
attr s3(e1)
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
s2(e1) = Address
s3(e1) = Designation
r1(e1.e2) = WorksOn
";

fn main() {
    let schema = parse_schema(SCHEMA).expect("valid schema");
    let binding = parse_binding(NAMES).expect("valid binding");
    assert!(validate_binding(&schema, &binding).is_empty());

    // Partial bindings are fine: e2 stays symbolic.
    for (label, display) in apply_binding(&schema, &binding) {
        println!("{:20} = {display}", label.to_string());
    }

    println!();
    for pk in ["Employee_No", "Emp_No", "Empye_No", "Salary_No"] {
        println!(
            "check_pk_name(\"Employee\", \"{pk}\") = {}",
            check_pk_name("Employee", pk)
        );
    }
}
