//! ger-kit: a toolkit for generic entity-relationship schemas written in
//! symbolic label notation, and their lossless transformation to relational
//! database schemas.
//!
//! A generic ER schema names its constructs with symbolic labels instead of
//! real-world names: entity types `e1, e2, …`, simple attributes `s2(e1)`,
//! primary keys `k(e1)`, binary relationship types `r1(e1.e2)` with their
//! own attributes `s1(r1(e1.e2))`, and a (min, max) structural constraint
//! pair at each relationship side, `m(e1.r1(e1.e2))` / `x(e1.r1(e1.e2))`.
//! The same schema can then be instantiated to any application domain by
//! binding labels to names (`e1 = Employee`, `k(e1) = Emp_No`).
//!
//! The toolkit provides:
//!
//! - [`labels`]: the label grammar, parser, and canonical printer;
//! - [`schema`]: the validated schema model, the `.ger`/`.gerb` file
//!   formats, diagnostics, and name bindings;
//! - [`rds`]: the transformation to a provenance-annotated relational
//!   schema and its exact inverse, with a constraint ledger that keeps
//!   every (min, max) value;
//! - [`emit`]: deterministic SQL DDL, DOT diagram, and JSON renderers;
//! - [`genfuzz`]: seeded random generation of valid schemas;
//! - [`cli`]: the `ger` command-line tool built from the above.
//!
//! See the crate's `examples/` directory for one runnable example per
//! capability.

pub mod cli;
pub mod emit;
pub mod genfuzz;
pub mod labels;
pub mod rds;
pub mod schema;

pub use labels::{format_label, parse_label, Index, Label, Owner, Rel, Side};
pub use rds::{classify_relationship, from_rds, to_rds, Rds, RelClass};
pub use schema::{
    apply_binding, check_pk_name, format_schema, parse_binding, parse_schema, validate_binding,
    validate_schema, CardMax, CardPair, Diagnostic, GenericSchema, NameBinding,
};
