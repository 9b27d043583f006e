//! Parse a handful of labels, show their kinds, and reprint them
//! canonically.
//!
//! Run with: cargo run --example parse_labels

use ger_kit::labels::{format_label, parse_label};

fn main() {
    let inputs = [
        "e_2",
        "r_1(e_1.e_2)",
        "s_2(e_2)",
        "x(e_2.r_1(e_1.e_2))",
        "k(e_1)",
        "s_2(r_1(e_1.e_2))",
        "e1.r1(e1.e1)", // rejected: recursive relationship
        "s0(e1)",       // rejected: indices start at 1
    ];
    for input in inputs {
        match parse_label(input) {
            Ok(label) => println!(
                "{input:24} -> {:32} canonical: {}",
                label.kind(),
                format_label(&label)
            ),
            Err(err) => println!("{input:24} -> error: {err}"),
        }
    }
}
