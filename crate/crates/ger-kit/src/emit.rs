//! Deterministic renderers: dialect-neutral SQL DDL with annotation
//! comments, DOT diagram text, and canonical JSON for the RDS.
//!
//! Identifiers are mangled labels unless a name binding covers the label,
//! in which case the bound name passes through unmangled. Mangling replaces
//! `(` and `.` with `_` and deletes `)`, which is injective over valid
//! labels; FK column names join their relationship part and target-PK part
//! with `__`, which never occurs inside a single mangled label.
//!
//! Every ledger entry survives into the DDL as a comment line
//! `-- @ger <m-or-x-label> = <value>` after the table hosting its
//! relationship, so the DDL carries the full (min, max) information that
//! relational constraints alone cannot express.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::labels::{parse_label, Index, Label, Owner, Rel};
use crate::rds::{Column, ColumnProvenance, Rds, Relation, RelationProvenance};
use crate::schema::{sides_of, CardMax, CardPair, GenericSchema, NameBinding};

/// Mangles a label into a SQL/DOT-safe identifier.
pub fn mangle(label: &Label) -> String {
    label
        .to_string()
        .chars()
        .filter_map(|c| match c {
            '(' | '.' => Some('_'),
            ')' => None,
            other => Some(other),
        })
        .collect()
}

/// A binding entry that does not correspond to any provenance label of the
/// RDS being rendered.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("binding references label {label} absent from the relational schema")]
pub struct BindingMismatch {
    pub label: String,
}

/// Identifier for a label: the bound name, or the mangled form.
fn display(label: &Label, binding: Option<&NameBinding>) -> String {
    binding
        .and_then(|b| b.get(label))
        .map(str::to_string)
        .unwrap_or_else(|| mangle(label))
}

/// Human-facing text for a label: the bound name, or the symbolic form.
fn display_text(label: &Label, binding: Option<&NameBinding>) -> String {
    binding
        .and_then(|b| b.get(label))
        .map(str::to_string)
        .unwrap_or_else(|| label.to_string())
}

fn fk_column_name(rel: &Rel, target: Index, binding: Option<&NameBinding>) -> String {
    let rel_part = display(&Label::Rel(*rel), binding);
    let pk_part = display(&Label::PkAttr { entity: target }, binding);
    format!("{rel_part}__{pk_part}")
}

fn column_name(column: &Column, binding: Option<&NameBinding>) -> String {
    match column.provenance {
        ColumnProvenance::Fk { rel, target } => fk_column_name(&rel, target, binding),
        other => display(&other.label().expect("pk/attr columns carry a label"), binding),
    }
}

fn relation_name(relation: &Relation, binding: Option<&NameBinding>) -> String {
    display(&relation.provenance.label(), binding)
}

/// Checks that every binding entry names a label present in the RDS
/// provenance.
fn check_binding_against_rds(rds: &Rds, binding: &NameBinding) -> Result<(), BindingMismatch> {
    let mut known: Vec<Label> = Vec::new();
    for relation in &rds.relations {
        known.push(relation.provenance.label());
        for column in &relation.columns {
            match column.provenance {
                ColumnProvenance::Fk { rel, target } => {
                    known.push(Label::Rel(rel));
                    known.push(Label::PkAttr { entity: target });
                }
                other => known.push(other.label().unwrap()),
            }
        }
    }
    for (label, _) in binding.iter() {
        if !known.contains(label) {
            return Err(BindingMismatch {
                label: label.to_string(),
            });
        }
    }
    Ok(())
}

/// Renders the RDS as dialect-neutral DDL: one CREATE TABLE per relation in
/// RDS order, all columns typed `VARCHAR(255)`, constraint clauses from the
/// column flags, and one `@ger` annotation comment per ledger entry.
pub fn emit_sql(rds: &Rds, binding: Option<&NameBinding>) -> Result<String, BindingMismatch> {
    if let Some(b) = binding {
        check_binding_against_rds(rds, b)?;
    }

    let mut out = String::new();
    for relation in &rds.relations {
        let table = relation_name(relation, binding);
        out.push_str(&format!("CREATE TABLE {table} (\n"));

        let mut lines = Vec::new();
        for column in &relation.columns {
            let mut line = format!("    {} VARCHAR(255)", column_name(column, binding));
            if !column.nullable {
                line.push_str(" NOT NULL");
            }
            if column.unique {
                line.push_str(" UNIQUE");
            }
            lines.push(line);
        }
        let pk_cols: Vec<String> = relation
            .primary_key
            .iter()
            .map(|&pos| column_name(&relation.columns[pos], binding))
            .collect();
        lines.push(format!("    PRIMARY KEY ({})", pk_cols.join(", ")));
        for column in &relation.columns {
            if let Some((target_rel, target_col)) = &column.fk_target {
                let target_relation = rds
                    .relations
                    .iter()
                    .find(|r| r.provenance == *target_rel)
                    .expect("fk target exists in well-formed rds");
                let target_column = target_relation
                    .columns
                    .iter()
                    .find(|c| c.provenance == *target_col)
                    .expect("fk target column exists");
                lines.push(format!(
                    "    FOREIGN KEY ({}) REFERENCES {} ({})",
                    column_name(column, binding),
                    relation_name(target_relation, binding),
                    column_name(target_column, binding),
                ));
            }
        }
        out.push_str(&lines.join(",\n"));
        out.push_str("\n);\n");

        // Ledger comments for every relationship this table implements.
        for rel in rels_hosted_by(relation) {
            for side in sides_of(&rel) {
                let pair = rds.ledger.get(&side).expect("ledger covers all sides");
                out.push_str(&format!("-- @ger m({side}) = {}\n", pair.min));
                out.push_str(&format!("-- @ger x({side}) = {}\n", pair.max));
            }
        }
    }
    Ok(out)
}

/// The relationships whose structure lives in this relation: the join
/// relationship for a join table, the FK-implemented relationships for an
/// entity relation, in column order.
fn rels_hosted_by(relation: &Relation) -> Vec<Rel> {
    match relation.provenance {
        RelationProvenance::Join(rel) => vec![rel],
        RelationProvenance::Entity(_) => relation
            .columns
            .iter()
            .filter_map(|c| match c.provenance {
                ColumnProvenance::Fk { rel, .. } => Some(rel),
                _ => None,
            })
            .collect(),
    }
}

/// Renders a schema as an undirected DOT graph in the paper's diagram
/// style: boxes for entities, diamonds for relationships, ellipses for
/// attributes, underlined PK labels, and `(min,max)` edge labels.
pub fn emit_dot(schema: &GenericSchema, binding: Option<&NameBinding>) -> String {
    let mut out = String::new();
    out.push_str("graph ger {\n");

    for entity in schema.entities() {
        let e = Label::Entity(entity);
        let pk = Label::PkAttr { entity };
        out.push_str(&format!(
            "    {} [shape=box, label=\"{}\"];\n",
            mangle(&e),
            display_text(&e, binding)
        ));
        out.push_str(&format!(
            "    {} [shape=ellipse, label=<<u>{}</u>>];\n",
            mangle(&pk),
            display_text(&pk, binding)
        ));
        out.push_str(&format!("    {} -- {};\n", mangle(&e), mangle(&pk)));
        for j in schema.attrs_of(&Owner::Entity(entity)) {
            let attr = Label::SimpleAttr {
                j,
                owner: Owner::Entity(entity),
            };
            out.push_str(&format!(
                "    {} [shape=ellipse, label=\"{}\"];\n",
                mangle(&attr),
                display_text(&attr, binding)
            ));
            out.push_str(&format!("    {} -- {};\n", mangle(&e), mangle(&attr)));
        }
    }

    for rel in schema.rels() {
        let r = Label::Rel(rel);
        out.push_str(&format!(
            "    {} [shape=diamond, label=\"{}\"];\n",
            mangle(&r),
            display_text(&r, binding)
        ));
        for j in schema.attrs_of(&Owner::Rel(rel)) {
            let attr = Label::SimpleAttr {
                j,
                owner: Owner::Rel(rel),
            };
            out.push_str(&format!(
                "    {} [shape=ellipse, label=\"{}\"];\n",
                mangle(&attr),
                display_text(&attr, binding)
            ));
            out.push_str(&format!("    {} -- {};\n", mangle(&r), mangle(&attr)));
        }
        for side in sides_of(&rel) {
            let pair = schema.card(&side).expect("valid schema");
            out.push_str(&format!(
                "    {} -- {} [label=\"({},{})\"];\n",
                mangle(&Label::Entity(side.entity())),
                mangle(&r),
                pair.min,
                pair.max
            ));
        }
    }

    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// Canonical JSON for the RDS
// ---------------------------------------------------------------------------

fn provenance_json(p: &ColumnProvenance) -> Value {
    match p {
        ColumnProvenance::Fk { rel, target } => {
            json!({ "fk": { "rel": rel.to_string(), "target": format!("e{target}") } })
        }
        other => Value::String(other.label().unwrap().to_string()),
    }
}

fn max_json(max: &CardMax) -> Value {
    match max {
        CardMax::Finite(n) => json!(n),
        CardMax::Unbounded => json!("N"),
    }
}

/// Renders the RDS as canonical JSON: sorted object keys, fixed field
/// names, the ledger sorted by canonical side label. `parse_rds_json`
/// restores an equal value.
pub fn emit_rds_json(rds: &Rds) -> String {
    let relations: Vec<Value> = rds
        .relations
        .iter()
        .map(|relation| {
            let columns: Vec<Value> = relation
                .columns
                .iter()
                .map(|c| {
                    json!({
                        "provenance": provenance_json(&c.provenance),
                        "nullable": c.nullable,
                        "unique": c.unique,
                        "fk_target": c.fk_target.as_ref().map(|(r, col)| {
                            json!({
                                "relation": r.label().to_string(),
                                "column": col.label()
                                    .expect("fk targets are pk columns")
                                    .to_string(),
                            })
                        }),
                    })
                })
                .collect();
            json!({
                "provenance": relation.provenance.label().to_string(),
                "columns": columns,
                "primary_key": relation.primary_key,
            })
        })
        .collect();

    let mut ledger: Vec<(String, Value)> = rds
        .ledger
        .iter()
        .map(|(side, pair)| {
            let key = side.to_string();
            let entry = json!({
                "side": key,
                "min": pair.min,
                "max": max_json(&pair.max),
            });
            (key, entry)
        })
        .collect();
    ledger.sort_by(|(a, _), (b, _)| a.cmp(b));

    let doc = json!({
        "relations": relations,
        "ledger": ledger.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

/// Failure to read an RDS back out of JSON.
#[derive(Debug, thiserror::Error)]
pub enum RdsJsonError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed RDS document: {0}")]
    Malformed(String),
}

fn bad(msg: impl Into<String>) -> RdsJsonError {
    RdsJsonError::Malformed(msg.into())
}

fn label_from_json(value: &Value, what: &str) -> Result<Label, RdsJsonError> {
    let text = value
        .as_str()
        .ok_or_else(|| bad(format!("{what} must be a label string")))?;
    parse_label(text).map_err(|e| bad(format!("{what} '{text}': {e}")))
}

fn relation_provenance_from_json(value: &Value) -> Result<RelationProvenance, RdsJsonError> {
    match label_from_json(value, "relation provenance")? {
        Label::Entity(e) => Ok(RelationProvenance::Entity(e)),
        Label::Rel(r) => Ok(RelationProvenance::Join(r)),
        other => Err(bad(format!("'{other}' cannot name a relation"))),
    }
}

fn column_provenance_from_json(value: &Value) -> Result<ColumnProvenance, RdsJsonError> {
    if let Some(obj) = value.as_object() {
        let fk = obj
            .get("fk")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("column provenance object must contain 'fk'"))?;
        let rel = match label_from_json(fk.get("rel").unwrap_or(&Value::Null), "fk rel")? {
            Label::Rel(r) => r,
            other => return Err(bad(format!("'{other}' is not a relationship"))),
        };
        let target = match label_from_json(fk.get("target").unwrap_or(&Value::Null), "fk target")? {
            Label::Entity(e) => e,
            other => return Err(bad(format!("'{other}' is not an entity"))),
        };
        return Ok(ColumnProvenance::Fk { rel, target });
    }
    match label_from_json(value, "column provenance")? {
        Label::PkAttr { entity } => Ok(ColumnProvenance::Pk { entity }),
        Label::SimpleAttr { j, owner } => Ok(ColumnProvenance::Attr { j, owner }),
        other => Err(bad(format!("'{other}' cannot name a column"))),
    }
}

fn fk_target_from_json(
    value: &Value,
) -> Result<Option<(RelationProvenance, ColumnProvenance)>, RdsJsonError> {
    if value.is_null() {
        return Ok(None);
    }
    let obj = value
        .as_object()
        .ok_or_else(|| bad("fk_target must be null or an object"))?;
    let relation = relation_provenance_from_json(obj.get("relation").unwrap_or(&Value::Null))?;
    let column = column_provenance_from_json(obj.get("column").unwrap_or(&Value::Null))?;
    Ok(Some((relation, column)))
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value, RdsJsonError> {
    obj.get(name).ok_or_else(|| bad(format!("missing field '{name}'")))
}

/// Reads canonical RDS JSON back into an `Rds` equal to the emitted one.
pub fn parse_rds_json(text: &str) -> Result<Rds, RdsJsonError> {
    let doc: Value = serde_json::from_str(text)?;
    let doc = doc.as_object().ok_or_else(|| bad("top level must be an object"))?;

    let mut relations = Vec::new();
    for rel_value in field(doc, "relations")?
        .as_array()
        .ok_or_else(|| bad("'relations' must be an array"))?
    {
        let obj = rel_value
            .as_object()
            .ok_or_else(|| bad("relation must be an object"))?;
        let provenance = relation_provenance_from_json(field(obj, "provenance")?)?;
        let mut columns = Vec::new();
        for col_value in field(obj, "columns")?
            .as_array()
            .ok_or_else(|| bad("'columns' must be an array"))?
        {
            let col = col_value
                .as_object()
                .ok_or_else(|| bad("column must be an object"))?;
            columns.push(Column {
                provenance: column_provenance_from_json(field(col, "provenance")?)?,
                nullable: field(col, "nullable")?
                    .as_bool()
                    .ok_or_else(|| bad("'nullable' must be a boolean"))?,
                unique: field(col, "unique")?
                    .as_bool()
                    .ok_or_else(|| bad("'unique' must be a boolean"))?,
                fk_target: fk_target_from_json(field(col, "fk_target")?)?,
            });
        }
        let primary_key = field(obj, "primary_key")?
            .as_array()
            .ok_or_else(|| bad("'primary_key' must be an array"))?
            .iter()
            .map(|v| {
                v.as_u64()
                    .map(|n| n as usize)
                    .ok_or_else(|| bad("primary key positions must be integers"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        relations.push(Relation {
            provenance,
            columns,
            primary_key,
        });
    }

    let mut ledger = BTreeMap::new();
    for entry in field(doc, "ledger")?
        .as_array()
        .ok_or_else(|| bad("'ledger' must be an array"))?
    {
        let obj = entry
            .as_object()
            .ok_or_else(|| bad("ledger entry must be an object"))?;
        let side = match label_from_json(field(obj, "side")?, "ledger side")? {
            Label::Side(s) => s,
            other => return Err(bad(format!("'{other}' is not a side label"))),
        };
        let min = field(obj, "min")?
            .as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| bad("'min' must be a non-negative integer"))?;
        let max = match field(obj, "max")? {
            Value::String(s) if s == "N" => CardMax::Unbounded,
            Value::Number(n) => n
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .map(CardMax::Finite)
                .ok_or_else(|| bad("'max' out of range"))?,
            _ => return Err(bad("'max' must be an integer or \"N\"")),
        };
        ledger.insert(side, CardPair { min, max });
    }

    Ok(Rds { relations, ledger })
}
