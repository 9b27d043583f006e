//! Whole-schema properties driven by the seeded generator: text round
//! trips, relational round trips, label distinctness, and injectivity of
//! the transformation.

use std::collections::BTreeSet;

use ger_kit::emit::emit_rds_json;
use ger_kit::genfuzz::{gen_schema, GenParams};
use ger_kit::rds::{from_rds, to_rds};
use ger_kit::schema::{format_schema, parse_schema, reconstruct_from_labels};

#[test]
fn generated_schemas_round_trip_through_text() {
    for seed in 0..500 {
        let schema = gen_schema(&GenParams::with_seed(seed));
        let text = format_schema(&schema);
        let parsed = parse_schema(&text).unwrap_or_else(|diags| {
            panic!("seed {seed}: canonical text failed to parse: {diags:?}")
        });
        assert_eq!(parsed, schema, "seed {seed}");
        assert_eq!(format_schema(&parsed), text, "seed {seed}");
    }
}

#[test]
fn generated_schemas_round_trip_through_rds() {
    for seed in 0..500 {
        let schema = gen_schema(&GenParams::with_seed(seed));
        let back = from_rds(&to_rds(&schema))
            .unwrap_or_else(|err| panic!("seed {seed}: inversion failed: {err}"));
        assert_eq!(back, schema, "seed {seed}");
    }
}

#[test]
fn schema_labels_are_pairwise_distinct() {
    for seed in 0..200 {
        let schema = gen_schema(&GenParams::with_seed(seed));
        let labels = schema.enumerate_labels();
        let expected = schema.entities().count() * 2
            + schema
                .entities()
                .map(|e| schema.attrs_of(&ger_kit::Owner::Entity(e)).count())
                .sum::<usize>()
            + schema
                .rels()
                .map(|r| 1 + schema.attrs_of(&ger_kit::Owner::Rel(r)).count() + 6)
                .sum::<usize>();
        // Set insertion lost nothing, so no two constructs share a label.
        assert_eq!(labels.len(), expected, "seed {seed}");
    }
}

#[test]
fn label_set_determines_the_schema() {
    for seed in 0..200 {
        let schema = gen_schema(&GenParams::with_seed(seed));
        let rebuilt = reconstruct_from_labels(&schema.enumerate_labels(), schema.cards())
            .unwrap_or_else(|diags| panic!("seed {seed}: reconstruction failed: {diags:?}"));
        assert_eq!(rebuilt, schema, "seed {seed}");
    }
}

#[test]
fn distinct_schemas_yield_distinct_rds_serializations() {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut distinct_schemas = 0;
    let mut schema_texts: BTreeSet<String> = BTreeSet::new();
    for seed in 0..300 {
        let schema = gen_schema(&GenParams::with_seed(seed));
        if schema_texts.insert(format_schema(&schema)) {
            distinct_schemas += 1;
            seen.insert(emit_rds_json(&to_rds(&schema)));
        }
    }
    assert_eq!(seen.len(), distinct_schemas);
}
