//! Transformation between a generic ER schema and a provenance-annotated
//! relational database schema (RDS), in both directions.
//!
//! Every relation and column carries the label it came from, and the
//! constraint ledger records every (min, max) pair verbatim. Together these
//! make the forward transformation exactly invertible: `from_rds(to_rds(s))`
//! reconstructs `s` for every valid schema. Cardinalities that plain
//! relational constraints cannot express (a finite max above 1, a min above
//! 1) live only in the ledger; the nullable/unique flags are derived views.

use std::collections::{BTreeMap, BTreeSet};

use crate::labels::{Index, Label, Owner, Rel, Side};
use crate::schema::{
    sides_of, CardMax, CardPair, ConstraintKind, GenericSchema, SchemaDraft,
};

/// Where a relation came from: an entity type or a many-to-many
/// relationship's join table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelationProvenance {
    Entity(Index),
    Join(Rel),
}

impl RelationProvenance {
    /// The source label, canonical form.
    pub fn label(&self) -> Label {
        match self {
            RelationProvenance::Entity(e) => Label::Entity(*e),
            RelationProvenance::Join(r) => Label::Rel(*r),
        }
    }
}

/// Where a column came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ColumnProvenance {
    /// The implicit primary-key attribute k(e).
    Pk { entity: Index },
    /// A simple attribute, of an entity or of a relationship.
    Attr { j: Index, owner: Owner },
    /// A foreign key implementing a relationship, pointing at the primary
    /// key of `target`'s relation.
    Fk { rel: Rel, target: Index },
}

impl ColumnProvenance {
    /// The source label for Pk and Attr columns. Fk columns are synthetic
    /// and have no single source label.
    pub fn label(&self) -> Option<Label> {
        match self {
            ColumnProvenance::Pk { entity } => Some(Label::PkAttr { entity: *entity }),
            ColumnProvenance::Attr { j, owner } => Some(Label::SimpleAttr {
                j: *j,
                owner: *owner,
            }),
            ColumnProvenance::Fk { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub provenance: ColumnProvenance,
    pub nullable: bool,
    pub unique: bool,
    /// Set for Fk columns only: the referenced relation and column.
    pub fk_target: Option<(RelationProvenance, ColumnProvenance)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub provenance: RelationProvenance,
    pub columns: Vec<Column>,
    /// Positions into `columns`.
    pub primary_key: Vec<usize>,
}

/// A relational schema whose every part remembers its origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rds {
    pub relations: Vec<Relation>,
    /// Every (min, max) pair of the source schema, verbatim.
    pub ledger: BTreeMap<Side, CardPair>,
}

/// How a relationship maps onto relational structure, read off its two
/// (min, max) pairs: the max of a side bounds that side's participation
/// count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelClass {
    OneToOne,
    /// Exactly one side has max = 1; that side's relation hosts the FK.
    OneToManyTowards(Side),
    ManyToMany,
}

/// Classifies a relationship by the four card values at its two sides.
pub fn classify_relationship(schema: &GenericSchema, rel: &Rel) -> RelClass {
    let [side_i, side_t] = sides_of(rel);
    let max_i = schema.card(&side_i).expect("valid schema").max;
    let max_t = schema.card(&side_t).expect("valid schema").max;
    let one_i = max_i == CardMax::Finite(1);
    let one_t = max_t == CardMax::Finite(1);
    match (one_i, one_t) {
        (true, true) => RelClass::OneToOne,
        (true, false) => RelClass::OneToManyTowards(side_i),
        (false, true) => RelClass::OneToManyTowards(side_t),
        (false, false) => RelClass::ManyToMany,
    }
}

/// Transforms a valid schema into its RDS. Deterministic: relation order is
/// entity relations by index, then join tables by (i, t, v); FK columns are
/// appended to their host relations in the same relationship order.
pub fn to_rds(schema: &GenericSchema) -> Rds {
    let mut relations: Vec<Relation> = schema
        .entities()
        .map(|entity| {
            let mut columns = vec![Column {
                provenance: ColumnProvenance::Pk { entity },
                nullable: false,
                unique: true,
                fk_target: None,
            }];
            for j in schema.attrs_of(&Owner::Entity(entity)) {
                columns.push(Column {
                    provenance: ColumnProvenance::Attr {
                        j,
                        owner: Owner::Entity(entity),
                    },
                    nullable: false,
                    unique: false,
                    fk_target: None,
                });
            }
            Relation {
                provenance: RelationProvenance::Entity(entity),
                columns,
                primary_key: vec![0],
            }
        })
        .collect();

    let mut joins = Vec::new();
    let mut ledger = BTreeMap::new();

    for rel in schema.rels() {
        for side in sides_of(&rel) {
            ledger.insert(side, schema.card(&side).expect("valid schema"));
        }
        match classify_relationship(schema, &rel) {
            RelClass::OneToOne => {
                // Host side: the side with min = 1 when exactly one side
                // has it, otherwise the lower entity index.
                let [side_i, side_t] = sides_of(&rel);
                let min_i = schema.card(&side_i).unwrap().min;
                let min_t = schema.card(&side_t).unwrap().min;
                let host = match (min_i == 1, min_t == 1) {
                    (true, false) => side_i,
                    (false, true) => side_t,
                    _ => side_i,
                };
                place_fk(&mut relations, schema, &rel, host, true);
            }
            RelClass::OneToManyTowards(host) => {
                place_fk(&mut relations, schema, &rel, host, false);
            }
            RelClass::ManyToMany => {
                let mut columns = vec![
                    fk_column(&rel, rel.i(), false, false),
                    fk_column(&rel, rel.t(), false, false),
                ];
                for j in schema.attrs_of(&Owner::Rel(rel)) {
                    columns.push(Column {
                        provenance: ColumnProvenance::Attr {
                            j,
                            owner: Owner::Rel(rel),
                        },
                        nullable: false,
                        unique: false,
                        fk_target: None,
                    });
                }
                joins.push(Relation {
                    provenance: RelationProvenance::Join(rel),
                    columns,
                    primary_key: vec![0, 1],
                });
            }
        }
    }

    relations.extend(joins);
    Rds { relations, ledger }
}

fn fk_column(rel: &Rel, target: Index, nullable: bool, unique: bool) -> Column {
    Column {
        provenance: ColumnProvenance::Fk { rel: *rel, target },
        nullable,
        unique,
        fk_target: Some((
            RelationProvenance::Entity(target),
            ColumnProvenance::Pk { entity: target },
        )),
    }
}

/// Appends a relationship's FK column and its attribute columns to the host
/// side's entity relation.
fn place_fk(
    relations: &mut [Relation],
    schema: &GenericSchema,
    rel: &Rel,
    host: Side,
    unique: bool,
) {
    let target = rel.other_endpoint(host.entity()).expect("side invariant");
    let nullable = schema.card(&host).expect("valid schema").min == 0;
    let host_relation = relations
        .iter_mut()
        .find(|r| r.provenance == RelationProvenance::Entity(host.entity()))
        .expect("host entity relation exists");
    host_relation.columns.push(fk_column(rel, target, nullable, unique));
    for j in schema.attrs_of(&Owner::Rel(*rel)) {
        host_relation.columns.push(Column {
            provenance: ColumnProvenance::Attr {
                j,
                owner: Owner::Rel(*rel),
            },
            nullable,
            unique: false,
            fk_target: None,
        });
    }
}

/// Why an RDS could not be inverted. These arise only for hand-edited or
/// foreign input; every `to_rds` image inverts cleanly.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MalformedRds {
    #[error("foreign key references a missing relation or column: {0}")]
    DanglingFk(String),
    #[error("ledger entry missing for side {0}")]
    MissingLedgerEntry(String),
    #[error("ledger entry for {0} does not belong to any relationship")]
    OrphanLedgerEntry(String),
    #[error("duplicate provenance: {0}")]
    DuplicateProvenance(String),
    #[error("relation {0} has a malformed primary key")]
    BadPrimaryKey(String),
    #[error("reconstructed schema is invalid: {0}")]
    InvalidSchema(String),
}

/// Inverts `to_rds`: reads entities, attributes, and relationships back out
/// of the provenance annotations and the cards out of the ledger.
pub fn from_rds(rds: &Rds) -> Result<GenericSchema, MalformedRds> {
    let mut draft = SchemaDraft::default();
    let mut seen_relations: BTreeSet<RelationProvenance> = BTreeSet::new();
    let mut seen_rels: BTreeSet<Rel> = BTreeSet::new();
    let mut seen_columns: BTreeSet<ColumnProvenance> = BTreeSet::new();

    let entity_relations: BTreeSet<Index> = rds
        .relations
        .iter()
        .filter_map(|r| match r.provenance {
            RelationProvenance::Entity(e) => Some(e),
            _ => None,
        })
        .collect();

    for relation in &rds.relations {
        if !seen_relations.insert(relation.provenance) {
            return Err(MalformedRds::DuplicateProvenance(format!(
                "relation {}",
                relation.provenance.label()
            )));
        }
        match relation.provenance {
            RelationProvenance::Entity(entity) => {
                draft.entities.push(entity);
                draft.pks.push(entity);
                if relation.primary_key.as_slice() != [0]
                    || relation
                        .columns
                        .first()
                        .map(|c| c.provenance != ColumnProvenance::Pk { entity })
                        .unwrap_or(true)
                {
                    return Err(MalformedRds::BadPrimaryKey(format!("e{entity}")));
                }
            }
            RelationProvenance::Join(rel) => {
                if relation.primary_key.as_slice() != [0, 1] {
                    return Err(MalformedRds::BadPrimaryKey(rel.to_string()));
                }
                if !seen_rels.insert(rel) {
                    return Err(MalformedRds::DuplicateProvenance(rel.to_string()));
                }
                draft.rels.push(rel);
            }
        }
        for column in &relation.columns {
            if !seen_columns.insert(column.provenance) {
                return Err(MalformedRds::DuplicateProvenance(format!(
                    "column in {}",
                    relation.provenance.label()
                )));
            }
            match column.provenance {
                ColumnProvenance::Pk { .. } => {}
                ColumnProvenance::Attr { j, owner } => draft.attrs.push((owner, j)),
                ColumnProvenance::Fk { rel, target } => {
                    match column.fk_target {
                        Some((
                            RelationProvenance::Entity(ref_entity),
                            ColumnProvenance::Pk { entity: ref_pk },
                        )) if ref_entity == target
                            && ref_pk == target
                            && entity_relations.contains(&target) => {}
                        _ => {
                            return Err(MalformedRds::DanglingFk(format!(
                                "{rel} -> e{target}"
                            )));
                        }
                    }
                    // A FK hosted in an entity relation stands for a 1:1 or
                    // 1:N relationship; a join table's own FKs do not
                    // re-declare the relationship.
                    if matches!(relation.provenance, RelationProvenance::Entity(_))
                        && !seen_rels.insert(rel)
                    {
                        return Err(MalformedRds::DuplicateProvenance(rel.to_string()));
                    }
                    if matches!(relation.provenance, RelationProvenance::Entity(_)) {
                        draft.rels.push(rel);
                    }
                }
            }
        }
    }

    // Cards come from the ledger, which must cover exactly the sides of the
    // reconstructed relationships.
    let mut expected_sides: BTreeSet<Side> = BTreeSet::new();
    for rel in &draft.rels {
        for side in sides_of(rel) {
            expected_sides.insert(side);
        }
    }
    for side in &expected_sides {
        let pair = rds
            .ledger
            .get(side)
            .ok_or_else(|| MalformedRds::MissingLedgerEntry(side.to_string()))?;
        draft
            .cards
            .push((ConstraintKind::Min, *side, CardMax::Finite(pair.min)));
        draft.cards.push((ConstraintKind::Max, *side, pair.max));
    }
    for side in rds.ledger.keys() {
        if !expected_sides.contains(side) {
            return Err(MalformedRds::OrphanLedgerEntry(side.to_string()));
        }
    }

    GenericSchema::from_draft(&draft).map_err(|diags| {
        let first = diags
            .first()
            .map(|d| d.to_string())
            .unwrap_or_else(|| "unknown".into());
        MalformedRds::InvalidSchema(first)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse_schema;

    fn idx(n: u32) -> Index {
        Index::new(n).unwrap()
    }

    fn rel(v: u32, i: u32, t: u32) -> Rel {
        Rel::new(idx(v), idx(i), idx(t)).unwrap()
    }

    const FIGURE5: &str = "\
entity e1
entity e2
attr s1(e1)
attr s2(e1)
attr s1(r1(e1.e2))
rel r1(e1.e2)
card m(e1.r1(e1.e2)) = 0
card x(e1.r1(e1.e2)) = 2
card m(e2.r1(e1.e2)) = 3
card x(e2.r1(e1.e2)) = 5
";

    fn rel_fixture(cards: &str) -> GenericSchema {
        let doc = format!("entity e1\nentity e2\nrel r1(e1.e2)\n{cards}");
        parse_schema(&doc).unwrap()
    }

    #[test]
    fn classifies_by_maxima() {
        let s = rel_fixture(
            "card m(e1.r1(e1.e2)) = 0\ncard x(e1.r1(e1.e2)) = 1\n\
             card m(e2.r1(e1.e2)) = 1\ncard x(e2.r1(e1.e2)) = 1\n",
        );
        assert_eq!(
            classify_relationship(&s, &rel(1, 1, 2)),
            RelClass::OneToOne
        );

        let s = parse_schema(FIGURE5).unwrap();
        assert_eq!(
            classify_relationship(&s, &rel(1, 1, 2)),
            RelClass::ManyToMany
        );

        let s = rel_fixture(
            "card m(e1.r1(e1.e2)) = 0\ncard x(e1.r1(e1.e2)) = 1\n\
             card m(e2.r1(e1.e2)) = 0\ncard x(e2.r1(e1.e2)) = N\n",
        );
        let side1 = Side::new(idx(1), rel(1, 1, 2)).unwrap();
        assert_eq!(
            classify_relationship(&s, &rel(1, 1, 2)),
            RelClass::OneToManyTowards(side1)
        );
    }

    #[test]
    fn many_to_many_builds_a_join_table() {
        let schema = parse_schema(FIGURE5).unwrap();
        let rds = to_rds(&schema);
        assert_eq!(rds.relations.len(), 3);

        let e1 = &rds.relations[0];
        assert_eq!(e1.provenance, RelationProvenance::Entity(idx(1)));
        assert_eq!(e1.columns.len(), 3);
        assert_eq!(e1.primary_key, vec![0]);

        let e2 = &rds.relations[1];
        assert_eq!(e2.columns.len(), 1);

        let join = &rds.relations[2];
        assert_eq!(join.provenance, RelationProvenance::Join(rel(1, 1, 2)));
        assert_eq!(join.columns.len(), 3);
        assert_eq!(join.primary_key, vec![0, 1]);
        assert!(join.columns[..2]
            .iter()
            .all(|c| !c.nullable && c.fk_target.is_some()));

        assert_eq!(rds.ledger.len(), 2);
    }

    #[test]
    fn one_to_many_places_fk_on_the_max_one_side() {
        let schema = rel_fixture(
            "card m(e1.r1(e1.e2)) = 1\ncard x(e1.r1(e1.e2)) = 1\n\
             card m(e2.r1(e1.e2)) = 0\ncard x(e2.r1(e1.e2)) = N\n",
        );
        let rds = to_rds(&schema);
        assert_eq!(rds.relations.len(), 2);
        let e1 = &rds.relations[0];
        let fk = &e1.columns[1];
        assert_eq!(
            fk.provenance,
            ColumnProvenance::Fk {
                rel: rel(1, 1, 2),
                target: idx(2)
            }
        );
        assert!(!fk.nullable); // host min = 1
        assert!(!fk.unique);
    }

    #[test]
    fn one_to_one_host_prefers_the_mandatory_side() {
        let schema = rel_fixture(
            "card m(e1.r1(e1.e2)) = 0\ncard x(e1.r1(e1.e2)) = 1\n\
             card m(e2.r1(e1.e2)) = 1\ncard x(e2.r1(e1.e2)) = 1\n",
        );
        let rds = to_rds(&schema);
        let e2 = &rds.relations[1];
        let fk = &e2.columns[1];
        assert!(matches!(fk.provenance, ColumnProvenance::Fk { .. }));
        assert!(!fk.nullable);
        assert!(fk.unique);
    }

    #[test]
    fn single_entity_gives_one_relation_and_empty_ledger() {
        let schema = parse_schema("entity e1\n").unwrap();
        let rds = to_rds(&schema);
        assert_eq!(rds.relations.len(), 1);
        assert!(rds.ledger.is_empty());
        assert_eq!(from_rds(&rds).unwrap(), schema);
    }

    #[test]
    fn round_trips_the_reference_fixture() {
        let schema = parse_schema(FIGURE5).unwrap();
        assert_eq!(from_rds(&to_rds(&schema)).unwrap(), schema);
    }

    #[test]
    fn missing_ledger_entry_is_malformed() {
        let schema = parse_schema(FIGURE5).unwrap();
        let mut rds = to_rds(&schema);
        let key = *rds.ledger.keys().next().unwrap();
        rds.ledger.remove(&key);
        assert!(matches!(
            from_rds(&rds),
            Err(MalformedRds::MissingLedgerEntry(_))
        ));
    }

    #[test]
    fn dangling_fk_is_malformed() {
        let schema = rel_fixture(
            "card m(e1.r1(e1.e2)) = 1\ncard x(e1.r1(e1.e2)) = 1\n\
             card m(e2.r1(e1.e2)) = 0\ncard x(e2.r1(e1.e2)) = N\n",
        );
        let mut rds = to_rds(&schema);
        rds.relations[0].columns[1].fk_target = None;
        assert!(matches!(from_rds(&rds), Err(MalformedRds::DanglingFk(_))));
    }
}
