//! The headline property: transforming a schema to its relational form and
//! back reproduces it exactly, for any valid schema.
//!
//! Run with: cargo run --example roundtrip_check

use ger_kit::genfuzz::{gen_schema, GenParams, SplitMix64};
use ger_kit::rds::{from_rds, to_rds};
use ger_kit::schema::format_schema;

fn main() {
    let count = 2000;
    let mut rng = SplitMix64::new(1);
    let mut ok = 0;
    for _ in 0..count {
        let schema = gen_schema(&GenParams::with_seed(rng.next_u64()));
        let back = from_rds(&to_rds(&schema)).expect("well-formed rds");
        assert_eq!(format_schema(&back), format_schema(&schema));
        ok += 1;
    }
    println!("{ok}/{count} exact reconstructions");
}
