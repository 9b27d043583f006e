//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeSet;
use std::time::Instant;

use ger_kit::emit::{emit_dot, emit_rds_json, emit_sql};
use ger_kit::genfuzz::{gen_schema, GenParams, SplitMix64};
use ger_kit::labels::{format_label, parse_label, Index, Label, Owner, Rel, Side};
use ger_kit::rds::{
    classify_relationship, from_rds, to_rds, ColumnProvenance, RelClass, RelationProvenance,
};
use ger_kit::schema::{
    apply_binding, check_pk_name, format_schema, parse_binding, parse_schema,
    reconstruct_from_labels, validate_binding, DiagCode, GenericSchema,
};

const FIGURE5: &str = include_str!("fixtures/figure5.ger");
const COMPANY: &str = include_str!("fixtures/company.ger");
const COMPANY_NAMES: &str = include_str!("fixtures/company.gerb");

fn idx(n: u32) -> Index {
    Index::new(n).unwrap()
}

fn rel112() -> Rel {
    Rel::new(idx(1), idx(1), idx(2)).unwrap()
}

/// Criterion 1: the six published labels parse to six distinct labels of
/// the expected kinds and reprint canonically, in under a millisecond.
#[test]
fn criterion_1_label_fixture() {
    let inputs = [
        ("e_2", "entity", "e2"),
        ("r_1(e_1.e_2)", "relationship", "r1(e1.e2)"),
        ("s_2(e_2)", "simple-attribute of entity", "s2(e2)"),
        ("x(e_2.r_1(e_1.e_2))", "max constraint", "x(e2.r1(e1.e2))"),
        ("k(e_1)", "primary-key attribute", "k(e1)"),
        (
            "s_2(r_1(e_1.e_2))",
            "simple-attribute of relationship",
            "s2(r1(e1.e2))",
        ),
    ];
    let start = Instant::now();
    let mut distinct = BTreeSet::new();
    for (input, kind, canonical) in inputs {
        let label = parse_label(input).unwrap();
        assert_eq!(label.kind(), kind, "{input}");
        assert_eq!(format_label(&label), canonical, "{input}");
        distinct.insert(label);
    }
    let elapsed = start.elapsed();
    assert_eq!(distinct.len(), 6);
    assert!(
        elapsed.as_micros() < 1000,
        "took {elapsed:?}, budget is 1 ms"
    );
    println!("PASS criterion 1: published label fixture parses distinctly and canonically");
}

/// Criterion 2: the company binding renders the documented attribute and
/// PK names, and the PK naming rule accepts/rejects the documented cases.
#[test]
fn criterion_2_naming_fixture() {
    let schema = parse_schema(COMPANY).unwrap();
    let binding = parse_binding(COMPANY_NAMES).unwrap();
    assert!(validate_binding(&schema, &binding).is_empty());

    let rendered = apply_binding(&schema, &binding);
    let expect = [
        ("s1(e1)", "Name"),
        ("s2(e1)", "Address"),
        ("s3(e1)", "Designation"),
        ("k(e1)", "Emp_No"),
    ];
    for (label, name) in expect {
        assert_eq!(rendered[&parse_label(label).unwrap()], name, "{label}");
    }

    assert!(check_pk_name("Employee", "Employee_No"));
    assert!(check_pk_name("Employee", "Emp_No"));
    assert!(check_pk_name("Employee", "Empye_No"));
    assert!(!check_pk_name("Employee", "Salary_No"));
    println!("PASS criterion 2: naming fixture and PK naming rule");
}

/// Criterion 3: the reference fixture classifies many-to-many, transforms
/// to exactly the documented three-relation layout, and its DDL carries
/// exactly four annotation comments including the (3,5) side.
#[test]
fn criterion_3_reference_transformation() {
    let schema = parse_schema(FIGURE5).unwrap();
    let rel = rel112();
    assert_eq!(classify_relationship(&schema, &rel), RelClass::ManyToMany);

    let rds = to_rds(&schema);
    assert_eq!(rds.relations.len(), 3);

    let e1 = &rds.relations[0];
    assert_eq!(e1.provenance, RelationProvenance::Entity(idx(1)));
    assert_eq!(
        e1.columns.iter().map(|c| c.provenance).collect::<Vec<_>>(),
        vec![
            ColumnProvenance::Pk { entity: idx(1) },
            ColumnProvenance::Attr {
                j: idx(1),
                owner: Owner::Entity(idx(1))
            },
            ColumnProvenance::Attr {
                j: idx(2),
                owner: Owner::Entity(idx(1))
            },
        ]
    );

    let e2 = &rds.relations[1];
    assert_eq!(e2.provenance, RelationProvenance::Entity(idx(2)));
    assert_eq!(
        e2.columns.iter().map(|c| c.provenance).collect::<Vec<_>>(),
        vec![ColumnProvenance::Pk { entity: idx(2) }]
    );

    let join = &rds.relations[2];
    assert_eq!(join.provenance, RelationProvenance::Join(rel));
    assert_eq!(
        join.columns.iter().map(|c| c.provenance).collect::<Vec<_>>(),
        vec![
            ColumnProvenance::Fk {
                rel,
                target: idx(1)
            },
            ColumnProvenance::Fk {
                rel,
                target: idx(2)
            },
            ColumnProvenance::Attr {
                j: idx(1),
                owner: Owner::Rel(rel)
            },
        ]
    );
    assert_eq!(join.primary_key, vec![0, 1]);
    assert_eq!(rds.ledger.len(), 2); // two sides, each carrying min and max

    let sql = emit_sql(&rds, None).unwrap();
    assert_eq!(sql.matches("-- @ger ").count(), 4);
    assert!(sql.contains("-- @ger m(e2.r1(e1.e2)) = 3"));
    assert!(sql.contains("-- @ger x(e2.r1(e1.e2)) = 5"));
    println!("PASS criterion 3: reference fixture transformation and annotated DDL");
}

/// Criterion 4: 10,000 generated schemas reconstruct exactly from their
/// relational form, within the 60 second budget.
#[test]
fn criterion_4_bijection_property() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(1);
    let mut ok = 0u64;
    for _ in 0..10_000 {
        let params = GenParams::with_seed(rng.next_u64());
        let schema = gen_schema(&params);
        let back = from_rds(&to_rds(&schema))
            .unwrap_or_else(|err| panic!("seed {}: {err}", params.seed));
        assert_eq!(
            format_schema(&back),
            format_schema(&schema),
            "seed {}",
            params.seed
        );
        ok += 1;
    }
    let elapsed = start.elapsed();
    assert_eq!(ok, 10_000);
    assert!(elapsed.as_secs() <= 60, "took {elapsed:?}, budget is 60 s");
    println!("PASS criterion 4: 10000/10000 exact reconstructions in {elapsed:?}");
}

fn random_label(rng: &mut SplitMix64) -> Label {
    let index = |rng: &mut SplitMix64| idx(rng.between(1, 99) as u32);
    let rel = |rng: &mut SplitMix64| {
        let i = rng.between(1, 98) as u32;
        let t = rng.between(u64::from(i) + 1, 99) as u32;
        Rel::new(index(rng), idx(i), idx(t)).unwrap()
    };
    let side = |rng: &mut SplitMix64| {
        let r = rel(rng);
        let entity = if rng.chance(0.5) { r.i() } else { r.t() };
        Side::new(entity, r).unwrap()
    };
    match rng.below(7) {
        0 => Label::Entity(index(rng)),
        1 => {
            let owner = if rng.chance(0.5) {
                Owner::Entity(index(rng))
            } else {
                Owner::Rel(rel(rng))
            };
            Label::SimpleAttr {
                j: index(rng),
                owner,
            }
        }
        2 => Label::PkAttr {
            entity: index(rng),
        },
        3 => Label::Rel(rel(rng)),
        4 => Label::Side(side(rng)),
        5 => Label::MinCard(side(rng)),
        _ => Label::MaxCard(side(rng)),
    }
}

/// Criterion 5: 10,000 random labels survive format-then-parse unchanged.
#[test]
fn criterion_5_grammar_round_trip() {
    let mut rng = SplitMix64::new(5);
    for trial in 0..10_000 {
        let label = random_label(&mut rng);
        let text = format_label(&label);
        assert_eq!(
            parse_label(&text).unwrap(),
            label,
            "trial {trial}: {text}"
        );
    }
    println!("PASS criterion 5: 10000 labels round-trip through the grammar");
}

/// Criterion 6: the bare label set of a schema determines it; 1,000
/// generated schemas reconstruct exactly from their enumerated labels.
#[test]
fn criterion_6_label_set_reconstruction() {
    for seed in 0..1_000 {
        let schema = gen_schema(&GenParams::with_seed(seed));
        let rebuilt = reconstruct_from_labels(&schema.enumerate_labels(), schema.cards())
            .unwrap_or_else(|diags| panic!("seed {seed}: {diags:?}"));
        assert_eq!(rebuilt, schema, "seed {seed}");
    }
    println!("PASS criterion 6: 1000 schemas rebuilt from their bare label sets");
}

/// Criterion 7: every emitter is byte-deterministic over the fixture set.
#[test]
fn criterion_7_emitter_determinism() {
    let mut fixtures: Vec<GenericSchema> = vec![
        parse_schema(FIGURE5).unwrap(),
        parse_schema(COMPANY).unwrap(),
        parse_schema("entity e1\n").unwrap(),
    ];
    for seed in 0..50 {
        fixtures.push(gen_schema(&GenParams::with_seed(seed)));
    }
    let binding = parse_binding(COMPANY_NAMES).unwrap();
    for (pos, schema) in fixtures.iter().enumerate() {
        assert_eq!(format_schema(schema), format_schema(schema), "fixture {pos}");
        assert_eq!(
            emit_dot(schema, None),
            emit_dot(schema, None),
            "fixture {pos}"
        );
        let rds = to_rds(schema);
        let rds_again = to_rds(schema);
        assert_eq!(rds, rds_again, "fixture {pos}");
        assert_eq!(
            emit_sql(&rds, None).unwrap(),
            emit_sql(&rds_again, None).unwrap(),
            "fixture {pos}"
        );
        assert_eq!(
            emit_rds_json(&rds),
            emit_rds_json(&rds_again),
            "fixture {pos}"
        );
    }
    // Bound output is deterministic too.
    let company = parse_schema(COMPANY).unwrap();
    assert_eq!(
        emit_dot(&company, Some(&binding)),
        emit_dot(&company, Some(&binding))
    );
    println!("PASS criterion 7: all emitters byte-deterministic over the fixture set");
}

/// Criterion 8: every documented diagnostic code has a minimal fixture that
/// triggers it and only it.
#[test]
fn criterion_8_diagnostic_completeness() {
    let schema_cases: &[(DiagCode, &str)] = &[
        (DiagCode::ESyntax, "entity e1\nbogus line\n"),
        (DiagCode::EEmpty, ""),
        (DiagCode::EDupEntity, "entity e1\nentity e1\n"),
        (DiagCode::EDupAttr, "entity e1\nattr s1(e1)\nattr s1(e1)\n"),
        (
            DiagCode::EDupRel,
            "entity e1\nentity e2\nrel r1(e1.e2)\nrel r1(e1.e2)\n\
             card m(e1.r1(e1.e2)) = 0\ncard x(e1.r1(e1.e2)) = 1\n\
             card m(e2.r1(e1.e2)) = 0\ncard x(e2.r1(e1.e2)) = 1\n",
        ),
        (
            DiagCode::EDupCard,
            "entity e1\nentity e2\nrel r1(e1.e2)\n\
             card m(e1.r1(e1.e2)) = 0\ncard x(e1.r1(e1.e2)) = 1\n\
             card m(e2.r1(e1.e2)) = 0\ncard x(e2.r1(e1.e2)) = 1\n\
             card m(e1.r1(e1.e2)) = 0\n",
        ),
        (DiagCode::EGapIndex, "entity e1\nentity e3\n"),
        (DiagCode::EUndeclared, "entity e1\nattr s1(e2)\n"),
        (
            DiagCode::EMissingCard,
            "entity e1\nentity e2\nrel r1(e1.e2)\n\
             card m(e1.r1(e1.e2)) = 0\ncard x(e1.r1(e1.e2)) = 1\n\
             card m(e2.r1(e1.e2)) = 0\n",
        ),
        (
            DiagCode::EBadCard,
            "entity e1\nentity e2\nrel r1(e1.e2)\n\
             card m(e1.r1(e1.e2)) = 3\ncard x(e1.r1(e1.e2)) = 2\n\
             card m(e2.r1(e1.e2)) = 0\ncard x(e2.r1(e1.e2)) = 1\n",
        ),
        (
            DiagCode::EBadSide,
            "entity e1\nentity e2\nentity e3\nrel r1(e1.e2)\n\
             card m(e1.r1(e1.e2)) = 0\ncard x(e1.r1(e1.e2)) = 1\n\
             card m(e2.r1(e1.e2)) = 0\ncard x(e2.r1(e1.e2)) = 1\n\
             card m(e3.r1(e1.e2)) = 0\n",
        ),
        (DiagCode::ERecursiveRel, "entity e1\nrel r1(e1.e1)\n"),
    ];
    for (code, doc) in schema_cases {
        let diags = parse_schema(doc).unwrap_err();
        assert_eq!(diags.len(), 1, "{}: {diags:?}", code.as_str());
        assert_eq!(diags[0].code, *code, "{diags:?}");
    }

    let schema = parse_schema(FIGURE5).unwrap();
    let binding_cases: &[(DiagCode, &str)] = &[
        (DiagCode::EDupName, "e1 = Employee\ne2 = Employee\n"),
        (DiagCode::EPkName, "e1 = Employee\nk(e1) = Location_Id\n"),
        (DiagCode::EUnknownLabel, "e3 = Department\n"),
    ];
    for (code, doc) in binding_cases {
        let binding = parse_binding(doc).unwrap();
        let diags = validate_binding(&schema, &binding);
        assert_eq!(diags.len(), 1, "{}: {diags:?}", code.as_str());
        assert_eq!(diags[0].code, *code, "{diags:?}");
    }
    println!("PASS criterion 8: every diagnostic code has an exclusive minimal fixture");
}
