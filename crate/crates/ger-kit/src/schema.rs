//! The validated generic ER schema, its `.ger` file format, and the
//! name-binding layer that instantiates symbolic labels with real-world
//! names.
//!
//! A schema is a pure structure: a dense set of entities `e1..en`, dense
//! attribute indices per owner, dense relationship indices per unordered
//! entity pair, and exactly one (min, max) pair at each side of every
//! relationship. Primary keys are implicit: `k(e_i)` always exists and
//! carries no degrees of freedom, so it is not stored.
//!
//! The `.ger` format is line oriented:
//!
//! ```text
//! # comment
//! entity e1
//! pk k(e1)            # optional on input, always present in canonical output
//! attr s1(e1)
//! rel r1(e1.e2)
//! card m(e1.r1(e1.e2)) = 0
//! card x(e1.r1(e1.e2)) = N
//! ```
//!
//! Declarations may appear in any order; validation is whole-document and
//! reports every problem it finds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::labels::{
    parse_label, Index, Label, Owner, ParseLabelError, Rel, Side, StructureViolation,
};

/// A (min, max) structural constraint pair for one relationship side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardPair {
    pub min: u32,
    pub max: CardMax,
}

/// The maximum of a structural constraint: a positive integer or the
/// unbounded mark, written `N` in files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CardMax {
    Finite(u32),
    Unbounded,
}

impl CardPair {
    pub fn is_valid(&self) -> bool {
        match self.max {
            CardMax::Finite(max) => max >= 1 && self.min <= max,
            CardMax::Unbounded => true,
        }
    }
}

impl fmt::Display for CardMax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardMax::Finite(n) => write!(f, "{n}"),
            CardMax::Unbounded => write!(f, "N"),
        }
    }
}

/// Which half of a (min, max) pair a `card` line declares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintKind {
    Min,
    Max,
}

/// Stable diagnostic codes. The set is closed: validation emits nothing
/// outside this list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiagCode {
    /// A line or label that does not match the grammar.
    ESyntax,
    /// The document declares no entities.
    EEmpty,
    /// The same entity is declared twice.
    EDupEntity,
    /// The same attribute (or pk line) is declared twice.
    EDupAttr,
    /// The same relationship is declared twice.
    EDupRel,
    /// The same card entry is declared twice.
    EDupCard,
    /// Indices are not dense (a gap in entity, attribute, or relationship
    /// numbering).
    EGapIndex,
    /// A reference to an entity or relationship that is not declared.
    EUndeclared,
    /// One of the four required card entries of a relationship is missing.
    EMissingCard,
    /// min > max, max < 1, or an unbounded min.
    EBadCard,
    /// A side label whose entity is not an endpoint of its relationship.
    EBadSide,
    /// A relationship with both endpoints the same entity type.
    ERecursiveRel,
    /// A binding assigns the same name where uniqueness is required.
    EDupName,
    /// A bound primary-key name that violates the PK naming rule.
    EPkName,
    /// A binding entry for a label that does not exist in the schema.
    EUnknownLabel,
}

impl DiagCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagCode::ESyntax => "E_SYNTAX",
            DiagCode::EEmpty => "E_EMPTY",
            DiagCode::EDupEntity => "E_DUP_ENTITY",
            DiagCode::EDupAttr => "E_DUP_ATTR",
            DiagCode::EDupRel => "E_DUP_REL",
            DiagCode::EDupCard => "E_DUP_CARD",
            DiagCode::EGapIndex => "E_GAP_INDEX",
            DiagCode::EUndeclared => "E_UNDECLARED",
            DiagCode::EMissingCard => "E_MISSING_CARD",
            DiagCode::EBadCard => "E_BAD_CARD",
            DiagCode::EBadSide => "E_BAD_SIDE",
            DiagCode::ERecursiveRel => "E_RECURSIVE_REL",
            DiagCode::EDupName => "E_DUP_NAME",
            DiagCode::EPkName => "E_PK_NAME",
            DiagCode::EUnknownLabel => "E_UNKNOWN_LABEL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A machine-readable validation finding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub severity: Severity,
    /// The offending label, when one exists.
    pub subject: Option<Label>,
    /// One-based source line, when the finding comes from a document.
    pub line: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn error(code: DiagCode, subject: Option<Label>, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            code,
            severity: Severity::Error,
            subject,
            line: None,
            message: message.into(),
        }
    }

    fn at_line(mut self, line: usize) -> Diagnostic {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code.as_str())?;
        if let Some(line) = self.line {
            write!(f, " (line {line})")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Raw, unvalidated schema declarations, as collected from a `.ger`
/// document or assembled programmatically.
#[derive(Debug, Clone, Default)]
pub struct SchemaDraft {
    pub entities: Vec<Index>,
    /// Entities named on explicit `pk` lines.
    pub pks: Vec<Index>,
    pub attrs: Vec<(Owner, Index)>,
    pub rels: Vec<Rel>,
    pub cards: Vec<(ConstraintKind, Side, CardMax)>,
}

/// A validated generic ER schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericSchema {
    entity_count: u32,
    attr_counts: BTreeMap<Owner, u32>,
    rel_counts: BTreeMap<(Index, Index), u32>,
    cards: BTreeMap<Side, CardPair>,
}

impl GenericSchema {
    /// Validates a draft and freezes it. All diagnostics are returned on
    /// failure; there is no partial success.
    pub fn from_draft(draft: &SchemaDraft) -> Result<GenericSchema, Vec<Diagnostic>> {
        let diags = validate_schema(draft);
        if !diags.is_empty() {
            return Err(diags);
        }

        let mut attr_counts: BTreeMap<Owner, u32> = BTreeMap::new();
        for (owner, _) in &draft.attrs {
            *attr_counts.entry(*owner).or_insert(0) += 1;
        }
        let mut rel_counts: BTreeMap<(Index, Index), u32> = BTreeMap::new();
        for rel in &draft.rels {
            *rel_counts.entry((rel.i(), rel.t())).or_insert(0) += 1;
        }
        let mut cards = BTreeMap::new();
        for side in draft.rels.iter().flat_map(sides_of) {
            let min = draft
                .cards
                .iter()
                .find(|(k, s, _)| *k == ConstraintKind::Min && *s == side)
                .map(|(_, _, v)| match v {
                    CardMax::Finite(n) => *n,
                    CardMax::Unbounded => unreachable!("rejected by validation"),
                })
                .expect("validated");
            let max = draft
                .cards
                .iter()
                .find(|(k, s, _)| *k == ConstraintKind::Max && *s == side)
                .map(|(_, _, v)| *v)
                .expect("validated");
            cards.insert(side, CardPair { min, max });
        }

        Ok(GenericSchema {
            entity_count: draft.entities.len() as u32,
            attr_counts,
            rel_counts,
            cards,
        })
    }

    pub fn entity_count(&self) -> u32 {
        self.entity_count
    }

    pub fn entities(&self) -> impl Iterator<Item = Index> + '_ {
        (1..=self.entity_count).map(|i| Index::new(i).unwrap())
    }

    pub fn attr_count(&self, owner: &Owner) -> u32 {
        self.attr_counts.get(owner).copied().unwrap_or(0)
    }

    pub fn attrs_of(&self, owner: &Owner) -> impl Iterator<Item = Index> + '_ {
        (1..=self.attr_count(owner)).map(|j| Index::new(j).unwrap())
    }

    /// All relationships in canonical (i, t, v) order.
    pub fn rels(&self) -> impl Iterator<Item = Rel> + '_ {
        self.rel_counts.iter().flat_map(|(&(i, t), &count)| {
            (1..=count).map(move |v| Rel::new(Index::new(v).unwrap(), i, t).unwrap())
        })
    }

    pub fn card(&self, side: &Side) -> Option<CardPair> {
        self.cards.get(side).copied()
    }

    pub fn cards(&self) -> &BTreeMap<Side, CardPair> {
        &self.cards
    }

    /// Every label mentionable about this schema: entities, their PKs,
    /// all attributes, relationships, sides, and min/max constraint labels.
    pub fn enumerate_labels(&self) -> BTreeSet<Label> {
        let mut labels = BTreeSet::new();
        for entity in self.entities() {
            labels.insert(Label::Entity(entity));
            labels.insert(Label::PkAttr { entity });
            for j in self.attrs_of(&Owner::Entity(entity)) {
                labels.insert(Label::SimpleAttr {
                    j,
                    owner: Owner::Entity(entity),
                });
            }
        }
        for rel in self.rels() {
            labels.insert(Label::Rel(rel));
            for j in self.attrs_of(&Owner::Rel(rel)) {
                labels.insert(Label::SimpleAttr {
                    j,
                    owner: Owner::Rel(rel),
                });
            }
            for side in sides_of(&rel) {
                labels.insert(Label::Side(side));
                labels.insert(Label::MinCard(side));
                labels.insert(Label::MaxCard(side));
            }
        }
        labels
    }
}

/// The two sides of a relationship, lower endpoint first.
pub fn sides_of(rel: &Rel) -> [Side; 2] {
    [
        Side::new(rel.i(), *rel).unwrap(),
        Side::new(rel.t(), *rel).unwrap(),
    ]
}

/// Checks every schema invariant on raw declarations and returns one
/// diagnostic per violation. Empty output means the draft freezes cleanly.
pub fn validate_schema(draft: &SchemaDraft) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    // Entities: non-empty, duplicate-free, dense 1..n.
    if draft.entities.is_empty() {
        diags.push(Diagnostic::error(
            DiagCode::EEmpty,
            None,
            "a schema must declare at least one entity",
        ));
    }
    let mut entity_set: BTreeSet<Index> = BTreeSet::new();
    for &e in &draft.entities {
        if !entity_set.insert(e) {
            diags.push(Diagnostic::error(
                DiagCode::EDupEntity,
                Some(Label::Entity(e)),
                format!("entity e{e} is declared more than once"),
            ));
        }
    }
    for gap in 1..=entity_set.len() as u32 {
        let gap = Index::new(gap).unwrap();
        if !entity_set.contains(&gap) {
            diags.push(Diagnostic::error(
                DiagCode::EGapIndex,
                Some(Label::Entity(gap)),
                format!("entity indices are not dense: e{gap} is missing"),
            ));
        }
    }

    // Explicit pk lines must name declared entities; repeats are rejected.
    let mut pk_seen: BTreeSet<Index> = BTreeSet::new();
    for &e in &draft.pks {
        if !entity_set.contains(&e) {
            diags.push(Diagnostic::error(
                DiagCode::EUndeclared,
                Some(Label::PkAttr { entity: e }),
                format!("pk line names undeclared entity e{e}"),
            ));
        } else if !pk_seen.insert(e) {
            diags.push(Diagnostic::error(
                DiagCode::EDupAttr,
                Some(Label::PkAttr { entity: e }),
                format!("duplicate pk line for e{e}"),
            ));
        }
    }

    // Relationships: endpoints declared, duplicate-free, dense v per pair.
    let mut rel_set: BTreeSet<Rel> = BTreeSet::new();
    for rel in &draft.rels {
        for endpoint in [rel.i(), rel.t()] {
            if !entity_set.contains(&endpoint) {
                diags.push(Diagnostic::error(
                    DiagCode::EUndeclared,
                    Some(Label::Rel(*rel)),
                    format!("relationship {rel} references undeclared entity e{endpoint}"),
                ));
            }
        }
        if !rel_set.insert(*rel) {
            diags.push(Diagnostic::error(
                DiagCode::EDupRel,
                Some(Label::Rel(*rel)),
                format!("relationship {rel} is declared more than once"),
            ));
        }
    }
    let mut pair_vs: BTreeMap<(Index, Index), BTreeSet<Index>> = BTreeMap::new();
    for rel in &rel_set {
        pair_vs
            .entry((rel.i(), rel.t()))
            .or_default()
            .insert(rel.v());
    }
    for ((i, t), vs) in &pair_vs {
        for v in 1..=vs.len() as u32 {
            let v = Index::new(v).unwrap();
            if !vs.contains(&v) {
                let missing = Rel::new(v, *i, *t).unwrap();
                diags.push(Diagnostic::error(
                    DiagCode::EGapIndex,
                    Some(Label::Rel(missing)),
                    format!("relationship indices between e{i} and e{t} are not dense: {missing} is missing"),
                ));
            }
        }
    }

    // Attributes: owner declared, duplicate-free, dense per owner.
    let mut attr_set: BTreeSet<(Owner, Index)> = BTreeSet::new();
    for (owner, j) in &draft.attrs {
        let label = Label::SimpleAttr {
            j: *j,
            owner: *owner,
        };
        let owner_declared = match owner {
            Owner::Entity(e) => entity_set.contains(e),
            Owner::Rel(r) => rel_set.contains(r),
        };
        if !owner_declared {
            diags.push(Diagnostic::error(
                DiagCode::EUndeclared,
                Some(label),
                format!("attribute {label} has an undeclared owner"),
            ));
        }
        if !attr_set.insert((*owner, *j)) {
            diags.push(Diagnostic::error(
                DiagCode::EDupAttr,
                Some(label),
                format!("attribute {label} is declared more than once"),
            ));
        }
    }
    let mut owner_js: BTreeMap<Owner, BTreeSet<Index>> = BTreeMap::new();
    for (owner, j) in &attr_set {
        owner_js.entry(*owner).or_default().insert(*j);
    }
    for (owner, js) in &owner_js {
        for j in 1..=js.len() as u32 {
            let j = Index::new(j).unwrap();
            if !js.contains(&j) {
                let missing = Label::SimpleAttr { j, owner: *owner };
                diags.push(Diagnostic::error(
                    DiagCode::EGapIndex,
                    Some(missing),
                    format!("attribute indices of {owner} are not dense: {missing} is missing"),
                ));
            }
        }
    }

    // Cards: rel declared, duplicate-free, valid values, all four present.
    let mut card_set: BTreeSet<(ConstraintKind, Side)> = BTreeSet::new();
    for (kind, side, value) in &draft.cards {
        let label = card_label(*kind, *side);
        if !rel_set.contains(&side.rel()) {
            diags.push(Diagnostic::error(
                DiagCode::EUndeclared,
                Some(label),
                format!("card {label} references undeclared relationship {}", side.rel()),
            ));
        }
        if !card_set.insert((*kind, *side)) {
            diags.push(Diagnostic::error(
                DiagCode::EDupCard,
                Some(label),
                format!("card {label} is declared more than once"),
            ));
        }
        match (kind, value) {
            (ConstraintKind::Min, CardMax::Unbounded) => {
                diags.push(Diagnostic::error(
                    DiagCode::EBadCard,
                    Some(label),
                    format!("min constraint {label} cannot be unbounded"),
                ));
            }
            (ConstraintKind::Max, CardMax::Finite(0)) => {
                diags.push(Diagnostic::error(
                    DiagCode::EBadCard,
                    Some(label),
                    format!("max constraint {label} must be at least 1"),
                ));
            }
            _ => {}
        }
    }
    for rel in &rel_set {
        for side in sides_of(rel) {
            let min = draft
                .cards
                .iter()
                .find(|(k, s, _)| *k == ConstraintKind::Min && *s == side);
            let max = draft
                .cards
                .iter()
                .find(|(k, s, _)| *k == ConstraintKind::Max && *s == side);
            for (kind, entry) in [(ConstraintKind::Min, min), (ConstraintKind::Max, max)] {
                if entry.is_none() {
                    let label = card_label(kind, side);
                    diags.push(Diagnostic::error(
                        DiagCode::EMissingCard,
                        Some(label),
                        format!("missing card entry {label}"),
                    ));
                }
            }
            if let (Some((_, _, CardMax::Finite(min))), Some((_, _, max))) = (min, max) {
                let pair = CardPair {
                    min: *min,
                    max: *max,
                };
                if let CardMax::Finite(m) = max {
                    if *m >= 1 && !pair.is_valid() {
                        diags.push(Diagnostic::error(
                            DiagCode::EBadCard,
                            Some(card_label(ConstraintKind::Min, side)),
                            format!("side {side} has min {min} greater than max {max}"),
                        ));
                    }
                }
            }
        }
    }

    diags
}

fn card_label(kind: ConstraintKind, side: Side) -> Label {
    match kind {
        ConstraintKind::Min => Label::MinCard(side),
        ConstraintKind::Max => Label::MaxCard(side),
    }
}

// ---------------------------------------------------------------------------
// .ger document parsing and canonical formatting
// ---------------------------------------------------------------------------

/// Parses a `.ger` document into a validated schema, or reports every
/// diagnostic found. Recovery is per line: one bad line never hides
/// problems on later lines.
pub fn parse_schema(document: &str) -> Result<GenericSchema, Vec<Diagnostic>> {
    let mut draft = SchemaDraft::default();
    let mut diags = Vec::new();

    for (lineno, raw) in document.lines().enumerate() {
        let lineno = lineno + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "entity" => match expect_label(rest, lineno, &mut diags) {
                Some(Label::Entity(e)) => draft.entities.push(e),
                Some(other) => diags.push(wrong_kind(lineno, "an entity label", other)),
                None => {}
            },
            "pk" => match expect_label(rest, lineno, &mut diags) {
                Some(Label::PkAttr { entity }) => draft.pks.push(entity),
                Some(other) => diags.push(wrong_kind(lineno, "a pk label k(e…)", other)),
                None => {}
            },
            "attr" => match expect_label(rest, lineno, &mut diags) {
                Some(Label::SimpleAttr { j, owner }) => draft.attrs.push((owner, j)),
                Some(other) => diags.push(wrong_kind(lineno, "a simple-attribute label", other)),
                None => {}
            },
            "rel" => match expect_label(rest, lineno, &mut diags) {
                Some(Label::Rel(r)) => draft.rels.push(r),
                Some(other) => diags.push(wrong_kind(lineno, "a relationship label", other)),
                None => {}
            },
            "card" => match rest.split_once('=') {
                Some((label_text, value_text)) => {
                    let label = expect_label(label_text.trim(), lineno, &mut diags);
                    let value = parse_card_value(value_text.trim(), lineno, &mut diags);
                    match (label, value) {
                        (Some(Label::MinCard(side)), Some(v)) => {
                            draft.cards.push((ConstraintKind::Min, side, v));
                        }
                        (Some(Label::MaxCard(side)), Some(v)) => {
                            draft.cards.push((ConstraintKind::Max, side, v));
                        }
                        (Some(other), _) => {
                            diags.push(wrong_kind(lineno, "an m(…) or x(…) label", other));
                        }
                        _ => {}
                    }
                }
                None => diags.push(
                    Diagnostic::error(DiagCode::ESyntax, None, "card line requires '= <value>'")
                        .at_line(lineno),
                ),
            },
            other => diags.push(
                Diagnostic::error(
                    DiagCode::ESyntax,
                    None,
                    format!("unknown declaration keyword '{other}'"),
                )
                .at_line(lineno),
            ),
        }
    }

    let mut all = diags;
    all.extend(validate_schema(&draft));
    if all.is_empty() {
        Ok(GenericSchema::from_draft(&draft).expect("validated"))
    } else {
        Err(all)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn expect_label(text: &str, lineno: usize, diags: &mut Vec<Diagnostic>) -> Option<Label> {
    match parse_label(text) {
        Ok(label) => Some(label),
        Err(err) => {
            diags.push(label_error_diag(err, text).at_line(lineno));
            None
        }
    }
}

/// Maps a label parse failure onto the document diagnostic codes. Side and
/// recursion violations keep their dedicated codes; everything else is a
/// syntax problem at this level.
fn label_error_diag(err: ParseLabelError, text: &str) -> Diagnostic {
    match err {
        ParseLabelError::Structure(StructureViolation::SideNotEndpoint { entity, rel }) => {
            Diagnostic::error(
                DiagCode::EBadSide,
                Some(Label::Rel(rel)),
                format!("e{entity} is not an endpoint of {rel}"),
            )
        }
        ParseLabelError::Structure(StructureViolation::RecursiveRel { v, endpoint }) => {
            Diagnostic::error(
                DiagCode::ERecursiveRel,
                Some(Label::Entity(endpoint)),
                format!("recursive relationship r{v}(e{endpoint}.e{endpoint}) is not supported"),
            )
        }
        other => Diagnostic::error(DiagCode::ESyntax, None, format!("'{text}': {other}")),
    }
}

fn wrong_kind(lineno: usize, wanted: &str, got: Label) -> Diagnostic {
    Diagnostic::error(
        DiagCode::ESyntax,
        Some(got),
        format!("expected {wanted}, found {} '{got}'", got.kind()),
    )
    .at_line(lineno)
}

fn parse_card_value(text: &str, lineno: usize, diags: &mut Vec<Diagnostic>) -> Option<CardMax> {
    if text == "N" {
        return Some(CardMax::Unbounded);
    }
    match text.parse::<u32>() {
        Ok(n) if !text.starts_with('+') => Some(CardMax::Finite(n)),
        _ => {
            diags.push(
                Diagnostic::error(
                    DiagCode::ESyntax,
                    None,
                    format!("'{text}' is not a card value (non-negative integer or N)"),
                )
                .at_line(lineno),
            );
            None
        }
    }
}

/// Renders the canonical `.ger` text: entities ascending with pk line and
/// attributes; then relationships by (i, t, v), each with its attributes
/// and four card lines (per side, min then max; lower endpoint first).
pub fn format_schema(schema: &GenericSchema) -> String {
    let mut out = String::new();
    for entity in schema.entities() {
        out.push_str(&format!("entity e{entity}\n"));
        out.push_str(&format!("pk k(e{entity})\n"));
        for j in schema.attrs_of(&Owner::Entity(entity)) {
            out.push_str(&format!("attr s{j}(e{entity})\n"));
        }
    }
    for rel in schema.rels() {
        out.push_str(&format!("rel {rel}\n"));
        for j in schema.attrs_of(&Owner::Rel(rel)) {
            out.push_str(&format!("attr s{j}({rel})\n"));
        }
        for side in sides_of(&rel) {
            let pair = schema.card(&side).expect("valid schema has all cards");
            out.push_str(&format!("card m({side}) = {}\n", pair.min));
            out.push_str(&format!("card x({side}) = {}\n", pair.max));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Label-set reconstruction
// ---------------------------------------------------------------------------

/// Rebuilds a schema from its bare enumerated label set. The labels alone
/// determine the full structure; the (min, max) values are the values of
/// the m/x mappings and are supplied separately, keyed by side.
pub fn reconstruct_from_labels(
    labels: &BTreeSet<Label>,
    card_values: &BTreeMap<Side, CardPair>,
) -> Result<GenericSchema, Vec<Diagnostic>> {
    let mut draft = SchemaDraft::default();
    for label in labels {
        match label {
            Label::Entity(e) => draft.entities.push(*e),
            Label::PkAttr { entity } => draft.pks.push(*entity),
            Label::SimpleAttr { j, owner } => draft.attrs.push((*owner, *j)),
            Label::Rel(r) => draft.rels.push(*r),
            Label::Side(_) => {}
            Label::MinCard(side) => {
                if let Some(pair) = card_values.get(side) {
                    draft
                        .cards
                        .push((ConstraintKind::Min, *side, CardMax::Finite(pair.min)));
                }
            }
            Label::MaxCard(side) => {
                if let Some(pair) = card_values.get(side) {
                    draft.cards.push((ConstraintKind::Max, *side, pair.max));
                }
            }
        }
    }
    GenericSchema::from_draft(&draft)
}

// ---------------------------------------------------------------------------
// Name bindings
// ---------------------------------------------------------------------------

/// A partial map from labels to real-world names, as read from a `.gerb`
/// file. Unbound labels render symbolically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameBinding {
    entries: BTreeMap<Label, String>,
}

impl NameBinding {
    pub fn new() -> NameBinding {
        NameBinding::default()
    }

    pub fn bind(&mut self, label: Label, name: impl Into<String>) {
        self.entries.insert(label, name.into());
    }

    pub fn get(&self, label: &Label) -> Option<&str> {
        self.entries.get(label).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &str)> {
        self.entries.iter().map(|(l, n)| (l, n.as_str()))
    }
}

fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a `.gerb` binding file: one `<label> = <name>` per line.
pub fn parse_binding(document: &str) -> Result<NameBinding, Vec<Diagnostic>> {
    let mut binding = NameBinding::new();
    let mut diags = Vec::new();

    for (lineno, raw) in document.lines().enumerate() {
        let lineno = lineno + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let Some((label_text, name)) = line.split_once('=') else {
            diags.push(
                Diagnostic::error(DiagCode::ESyntax, None, "binding line requires '= <name>'")
                    .at_line(lineno),
            );
            continue;
        };
        let Some(label) = expect_label(label_text.trim(), lineno, &mut diags) else {
            continue;
        };
        let name = name.trim();
        if !is_valid_name(name) {
            diags.push(
                Diagnostic::error(
                    DiagCode::ESyntax,
                    Some(label),
                    format!("'{name}' is not a valid name ([A-Za-z][A-Za-z0-9_]*)"),
                )
                .at_line(lineno),
            );
            continue;
        }
        if binding.get(&label).is_some() {
            diags.push(
                Diagnostic::error(
                    DiagCode::EDupName,
                    Some(label),
                    format!("label {label} is bound more than once"),
                )
                .at_line(lineno),
            );
            continue;
        }
        binding.bind(label, name);
    }

    if diags.is_empty() {
        Ok(binding)
    } else {
        Err(diags)
    }
}

/// Renders a binding as `.gerb` text, one entry per line in label order.
pub fn format_binding(binding: &NameBinding) -> String {
    let mut out = String::new();
    for (label, name) in binding.iter() {
        out.push_str(&format!("{label} = {name}\n"));
    }
    out
}

/// The PK naming rule: the PK name must be the entity name itself, or
/// `P_S` where `P` (at least three characters) starts with the entity
/// name's first three characters and is a character subsequence of the
/// entity name, and `S` is a non-empty alphanumeric tail. Comparison is
/// case-insensitive. Accepts `Employee_No`, `Emp_No`, and `Empye_No` for
/// `Employee`; rejects `Salary_No`.
pub fn check_pk_name(entity_name: &str, pk_name: &str) -> bool {
    let entity = entity_name.to_ascii_lowercase();
    let pk = pk_name.to_ascii_lowercase();
    if entity == pk {
        return true;
    }
    // Try every underscore split pk = P + "_" + S.
    for (pos, _) in pk.match_indices('_') {
        let prefix = &pk[..pos];
        let suffix = &pk[pos + 1..];
        if prefix.len() >= 3
            && !suffix.is_empty()
            && suffix.chars().all(|c| c.is_ascii_alphanumeric())
            && prefix.starts_with(&entity[..entity.len().min(3)])
            && is_subsequence(prefix, &entity)
        {
            return true;
        }
    }
    false
}

fn is_subsequence(needle: &str, haystack: &str) -> bool {
    let mut hay = haystack.chars();
    needle.chars().all(|c| hay.any(|h| h == c))
}

/// Checks a binding against a schema. Partial bindings are legal; what is
/// bound must exist, be nameable, and respect the uniqueness and PK rules.
pub fn validate_binding(schema: &GenericSchema, binding: &NameBinding) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let labels = schema.enumerate_labels();

    for (label, name) in binding.iter() {
        let nameable = matches!(
            label,
            Label::Entity(_) | Label::PkAttr { .. } | Label::SimpleAttr { .. } | Label::Rel(_)
        );
        if !labels.contains(label) || !nameable {
            diags.push(Diagnostic::error(
                DiagCode::EUnknownLabel,
                Some(*label),
                format!("binding names {label}, which is not a nameable construct of this schema"),
            ));
            continue;
        }
        let _ = name;
    }

    // Uniqueness: entity names among entities, relationship names among
    // relationships, attribute names within their owner. PK names must be
    // unique against every other bound name in the schema.
    let mut entity_names: BTreeMap<String, Label> = BTreeMap::new();
    let mut rel_names: BTreeMap<String, Label> = BTreeMap::new();
    let mut attr_names: BTreeMap<(Owner, String), Label> = BTreeMap::new();
    for (label, name) in binding.iter() {
        if !labels.contains(label) {
            continue;
        }
        let key = name.to_string();
        let clash = match label {
            Label::Entity(_) => entity_names.insert(key, *label),
            Label::Rel(_) => rel_names.insert(key, *label),
            Label::SimpleAttr { owner, .. } => attr_names.insert((*owner, key), *label),
            _ => None,
        };
        if let Some(previous) = clash {
            diags.push(Diagnostic::error(
                DiagCode::EDupName,
                Some(*label),
                format!("name '{name}' is already used by {previous}"),
            ));
        }
    }
    for (label, name) in binding.iter() {
        if let Label::PkAttr { entity } = label {
            if !labels.contains(label) {
                continue;
            }
            let taken = binding
                .iter()
                .any(|(other, other_name)| other != label && other_name == name);
            if taken {
                diags.push(Diagnostic::error(
                    DiagCode::EDupName,
                    Some(*label),
                    format!("PK name '{name}' must be unique across the whole schema"),
                ));
            }
            if let Some(entity_name) = binding.get(&Label::Entity(*entity)) {
                if !check_pk_name(entity_name, name) {
                    diags.push(Diagnostic::error(
                        DiagCode::EPkName,
                        Some(*label),
                        format!("PK name '{name}' is not related to entity name '{entity_name}'"),
                    ));
                }
            }
        }
    }

    diags
}

/// A total rendering of every schema label: bound labels display their
/// real-world name, unbound labels display their canonical symbolic form.
pub fn apply_binding(schema: &GenericSchema, binding: &NameBinding) -> BTreeMap<Label, String> {
    schema
        .enumerate_labels()
        .into_iter()
        .map(|label| {
            let display = binding
                .get(&label)
                .map(str::to_string)
                .unwrap_or_else(|| label.to_string());
            (label, display)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(n: u32) -> Index {
        Index::new(n).unwrap()
    }

    fn rel(v: u32, i: u32, t: u32) -> Rel {
        Rel::new(idx(v), idx(i), idx(t)).unwrap()
    }

    pub(crate) const FIGURE5: &str = "\
entity e1
entity e2
pk k(e1)
pk k(e2)
attr s1(e1)
attr s2(e1)
attr s1(r1(e1.e2))
rel r1(e1.e2)
card m(e1.r1(e1.e2)) = 0
card x(e1.r1(e1.e2)) = 2
card m(e2.r1(e1.e2)) = 3
card x(e2.r1(e1.e2)) = 5
";

    #[test]
    fn parses_the_reference_fixture() {
        let schema = parse_schema(FIGURE5).unwrap();
        assert_eq!(schema.entity_count(), 2);
        assert_eq!(schema.attr_count(&Owner::Entity(idx(1))), 2);
        assert_eq!(schema.attr_count(&Owner::Entity(idx(2))), 0);
        assert_eq!(schema.rels().collect::<Vec<_>>(), vec![rel(1, 1, 2)]);
        let side2 = Side::new(idx(2), rel(1, 1, 2)).unwrap();
        assert_eq!(
            schema.card(&side2),
            Some(CardPair {
                min: 3,
                max: CardMax::Finite(5)
            })
        );
    }

    #[test]
    fn canonical_text_round_trips() {
        let schema = parse_schema(FIGURE5).unwrap();
        let text = format_schema(&schema);
        let again = parse_schema(&text).unwrap();
        assert_eq!(schema, again);
        assert_eq!(text, format_schema(&again));
    }

    #[test]
    fn minimal_schema_formats_to_two_lines() {
        let schema = parse_schema("entity e1\n").unwrap();
        assert_eq!(format_schema(&schema), "entity e1\npk k(e1)\n");
    }

    #[test]
    fn missing_card_is_reported_by_label() {
        let doc = FIGURE5.replace("card x(e2.r1(e1.e2)) = 5\n", "");
        let diags = parse_schema(&doc).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagCode::EMissingCard);
        assert_eq!(
            diags[0].subject.unwrap().to_string(),
            "x(e2.r1(e1.e2))"
        );
    }

    #[test]
    fn gap_in_entity_indices_is_reported() {
        let diags = parse_schema("entity e1\nentity e3\n").unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagCode::EGapIndex);
    }

    #[test]
    fn min_above_max_is_reported() {
        let doc = FIGURE5.replace("card x(e2.r1(e1.e2)) = 5", "card x(e2.r1(e1.e2)) = 2");
        let diags = parse_schema(&doc).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagCode::EBadCard);
    }

    #[test]
    fn parallel_relationships_validate() {
        let doc = "\
entity e1
entity e2
entity e3
rel r1(e1.e2)
rel r2(e1.e2)
rel r1(e1.e3)
card m(e1.r1(e1.e2)) = 0
card x(e1.r1(e1.e2)) = N
card m(e2.r1(e1.e2)) = 0
card x(e2.r1(e1.e2)) = N
card m(e1.r2(e1.e2)) = 1
card x(e1.r2(e1.e2)) = 1
card m(e2.r2(e1.e2)) = 0
card x(e2.r2(e1.e2)) = N
card m(e1.r1(e1.e3)) = 0
card x(e1.r1(e1.e3)) = 1
card m(e3.r1(e1.e3)) = 0
card x(e3.r1(e1.e3)) = N
";
        let schema = parse_schema(doc).unwrap();
        assert_eq!(schema.rels().count(), 3);
    }

    #[test]
    fn labels_of_a_schema_are_distinct() {
        let schema = parse_schema(FIGURE5).unwrap();
        let labels = schema.enumerate_labels();
        // 2 entities + 2 pks + 2 entity attrs + 1 rel attr + 1 rel
        // + 2 sides + 4 card labels.
        assert_eq!(labels.len(), 14);
    }

    #[test]
    fn reconstruction_from_labels_matches() {
        let schema = parse_schema(FIGURE5).unwrap();
        let rebuilt =
            reconstruct_from_labels(&schema.enumerate_labels(), schema.cards()).unwrap();
        assert_eq!(schema, rebuilt);
    }

    #[test]
    fn pk_name_rule_matches_known_cases() {
        assert!(check_pk_name("Employee", "Employee"));
        assert!(check_pk_name("Employee", "Employee_No"));
        assert!(check_pk_name("Employee", "Emp_No"));
        assert!(check_pk_name("Employee", "Empye_No"));
        assert!(!check_pk_name("Employee", "Salary_No"));
        assert!(!check_pk_name("Employee", "Em_No"));
        assert!(!check_pk_name("Employee", "Emp_"));
    }

    #[test]
    fn binding_round_trips_and_applies() {
        let schema = parse_schema(FIGURE5).unwrap();
        let text = "\
e1 = Employee
k(e1) = Emp_No
s1(e1) = Name
s2(e1) = Address
r1(e1.e2) = WorksOn
";
        let binding = parse_binding(text).unwrap();
        assert!(validate_binding(&schema, &binding).is_empty());
        let rendered = apply_binding(&schema, &binding);
        assert_eq!(rendered[&parse_label("s1(e1)").unwrap()], "Name");
        assert_eq!(rendered[&parse_label("k(e1)").unwrap()], "Emp_No");
        // Unbound labels fall back to symbolic form.
        assert_eq!(
            rendered[&parse_label("s1(r1(e1.e2))").unwrap()],
            "s1(r1(e1.e2))"
        );
        assert_eq!(parse_binding(&format_binding(&binding)).unwrap(), binding);
    }

    #[test]
    fn duplicate_entity_name_is_reported() {
        let schema = parse_schema(FIGURE5).unwrap();
        let mut binding = NameBinding::new();
        binding.bind(Label::Entity(idx(1)), "Employee");
        binding.bind(Label::Entity(idx(2)), "Employee");
        let diags = validate_binding(&schema, &binding);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagCode::EDupName);
    }

    #[test]
    fn pk_name_violation_is_reported() {
        let schema = parse_schema(FIGURE5).unwrap();
        let mut binding = NameBinding::new();
        binding.bind(Label::Entity(idx(1)), "Employee");
        binding.bind(Label::PkAttr { entity: idx(1) }, "Location_Id");
        let diags = validate_binding(&schema, &binding);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagCode::EPkName);
    }
}
