//! The symbolic label grammar and its canonical printer.
//!
//! Labels name every construct of a generic ER schema: entity types (`e1`),
//! simple attributes (`s2(e1)`, `s1(r1(e1.e2))`), primary-key attributes
//! (`k(e1)`), binary relationship types (`r1(e1.e2)`), relationship sides
//! (`e2.r1(e1.e2)`), and the (min, max) structural constraints attached to a
//! side (`m(e1.r1(e1.e2))`, `x(e1.r1(e1.e2))`).
//!
//! Grammar (canonical ASCII form):
//!
//! ```text
//! Label      ::= Entity | SimpleAttr | PkAttr | Rel | Side | MinCard | MaxCard
//! Entity     ::= "e" Index
//! Rel        ::= "r" Index "(" Entity "." Entity ")"
//! Side       ::= Entity "." Rel
//! Owner      ::= Entity | Rel
//! SimpleAttr ::= "s" Index "(" Owner ")"
//! PkAttr     ::= "k" "(" Entity ")"
//! MinCard    ::= "m" "(" Side ")"
//! MaxCard    ::= "x" "(" Side ")"
//! Index      ::= NonZeroDigit Digit*
//! ```
//!
//! On input, a single underscore may separate a letter from its index
//! (`e_1` reads the same as `e1`) and horizontal whitespace is tolerated
//! around `(`, `)`, and `.`. Canonical output has neither.

use std::fmt;
use std::num::NonZeroU32;
use std::str::FromStr;

/// A one-based construct index. The paper's index sets are the naturals,
/// so zero is never a valid index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index(NonZeroU32);

impl Index {
    pub fn new(value: u32) -> Option<Index> {
        NonZeroU32::new(value).map(Index)
    }

    pub fn get(self) -> u32 {
        self.0.get()
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A binary relationship type `r<v>(e<i>.e<t>)`.
///
/// Endpoints are kept in canonical order `i < t`, so every relationship has
/// exactly one name. Recursive relationships (`i = t`) are rejected outright:
/// the side notation `e1.r1(e1.e1)` could not tell the two sides apart.
///
/// Field order is `(i, t, v)` so the derived ordering matches the canonical
/// relationship ordering used by schema serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rel {
    i: Index,
    t: Index,
    v: Index,
}

impl Rel {
    pub fn new(v: Index, i: Index, t: Index) -> Result<Rel, StructureViolation> {
        if i == t {
            return Err(StructureViolation::RecursiveRel { v, endpoint: i });
        }
        if i > t {
            return Err(StructureViolation::EndpointOrder { v, i, t });
        }
        Ok(Rel { i, t, v })
    }

    pub fn v(&self) -> Index {
        self.v
    }

    pub fn i(&self) -> Index {
        self.i
    }

    pub fn t(&self) -> Index {
        self.t
    }

    /// The opposite endpoint, given one endpoint of this relationship.
    pub fn other_endpoint(&self, entity: Index) -> Option<Index> {
        if entity == self.i {
            Some(self.t)
        } else if entity == self.t {
            Some(self.i)
        } else {
            None
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}(e{}.e{})", self.v, self.i, self.t)
    }
}

/// One side of a relationship, `e<entity>.r<v>(e<i>.e<t>)`; the attachment
/// point for a (min, max) structural constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Side {
    rel: Rel,
    entity: Index,
}

impl Side {
    pub fn new(entity: Index, rel: Rel) -> Result<Side, StructureViolation> {
        if entity != rel.i() && entity != rel.t() {
            return Err(StructureViolation::SideNotEndpoint { entity, rel });
        }
        Ok(Side { rel, entity })
    }

    pub fn entity(&self) -> Index {
        self.entity
    }

    pub fn rel(&self) -> Rel {
        self.rel
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}.{}", self.entity, self.rel)
    }
}

/// What a simple attribute is attached to. Attribute indices are scoped per
/// owner, so `s1(e1)` and `s1(r1(e1.e2))` are distinct attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Owner {
    Entity(Index),
    Rel(Rel),
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Entity(i) => write!(f, "e{i}"),
            Owner::Rel(r) => write!(f, "{r}"),
        }
    }
}

/// A parsed label: one of the seven construct kinds of the notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Entity(Index),
    SimpleAttr { j: Index, owner: Owner },
    PkAttr { entity: Index },
    Rel(Rel),
    Side(Side),
    MinCard(Side),
    MaxCard(Side),
}

impl Label {
    /// Short kind name used in diagnostics and CLI output.
    pub fn kind(&self) -> &'static str {
        match self {
            Label::Entity(_) => "entity",
            Label::SimpleAttr {
                owner: Owner::Entity(_),
                ..
            } => "simple-attribute of entity",
            Label::SimpleAttr {
                owner: Owner::Rel(_),
                ..
            } => "simple-attribute of relationship",
            Label::PkAttr { .. } => "primary-key attribute",
            Label::Rel(_) => "relationship",
            Label::Side(_) => "relationship side",
            Label::MinCard(_) => "min constraint",
            Label::MaxCard(_) => "max constraint",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Entity(i) => write!(f, "e{i}"),
            Label::SimpleAttr { j, owner } => write!(f, "s{j}({owner})"),
            Label::PkAttr { entity } => write!(f, "k(e{entity})"),
            Label::Rel(r) => write!(f, "{r}"),
            Label::Side(s) => write!(f, "{s}"),
            Label::MinCard(s) => write!(f, "m({s})"),
            Label::MaxCard(s) => write!(f, "x({s})"),
        }
    }
}

/// Emits the canonical ASCII form: no whitespace, no underscores.
pub fn format_label(label: &Label) -> String {
    label.to_string()
}

/// A well-formed piece of text that violates a structural invariant of the
/// label grammar.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureViolation {
    #[error("index must be at least 1")]
    ZeroIndex { position: usize },
    #[error("recursive relationship r{v}(e{endpoint}.e{endpoint}) is not representable")]
    RecursiveRel { v: Index, endpoint: Index },
    #[error("relationship endpoints not in canonical order: r{v}(e{i}.e{t}) requires i < t")]
    EndpointOrder { v: Index, i: Index, t: Index },
    #[error("e{entity} is not an endpoint of {rel}")]
    SideNotEndpoint { entity: Index, rel: Rel },
}

/// Failure to parse a label.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseLabelError {
    #[error("syntax error at byte {position}: expected {}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<&'static str>,
    },
    #[error("structure error: {0}")]
    Structure(#[from] StructureViolation),
}

/// Parses a label from text. Tolerates a single underscore between a letter
/// and its index and horizontal whitespace around punctuation; everything
/// else must match the grammar exactly.
pub fn parse_label(text: &str) -> Result<Label, ParseLabelError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let label = cur.label()?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.syntax("end of input"));
    }
    Ok(label)
}

impl FromStr for Label {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_label(s)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Cursor<'a> {
        Cursor {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn syntax(&self, expected: &'static str) -> ParseLabelError {
        ParseLabelError::Syntax {
            position: self.pos,
            expected: vec![expected],
        }
    }

    fn punct(&mut self, ch: u8, expected: &'static str) -> Result<(), ParseLabelError> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            self.skip_ws();
            Ok(())
        } else {
            Err(self.syntax(expected))
        }
    }

    /// Index after a letter: optional single underscore, then digits.
    fn index(&mut self) -> Result<Index, ParseLabelError> {
        if self.peek() == Some(b'_') {
            self.pos += 1;
        }
        let start = self.pos;
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                if matches!(self.peek(), Some(b'0'..=b'9')) {
                    // "01" is not a canonical index spelling.
                    return Err(ParseLabelError::Syntax {
                        position: start,
                        expected: vec!["nonzero digit"],
                    });
                }
                Err(StructureViolation::ZeroIndex { position: start }.into())
            }
            Some(b'1'..=b'9') => {
                let mut value: u64 = 0;
                while let Some(d @ b'0'..=b'9') = self.peek() {
                    value = value * 10 + u64::from(d - b'0');
                    if value > u64::from(u32::MAX) {
                        return Err(ParseLabelError::Syntax {
                            position: start,
                            expected: vec!["index below 2^32"],
                        });
                    }
                    self.pos += 1;
                }
                Ok(Index::new(value as u32).expect("nonzero by construction"))
            }
            _ => Err(self.syntax("digit")),
        }
    }

    fn entity(&mut self) -> Result<Index, ParseLabelError> {
        if self.peek() == Some(b'e') {
            self.pos += 1;
            self.index()
        } else {
            Err(self.syntax("'e'"))
        }
    }

    /// `r<v>(e<i>.e<t>)`, with the leading `r` already known to be next.
    fn rel(&mut self) -> Result<Rel, ParseLabelError> {
        if self.peek() != Some(b'r') {
            return Err(self.syntax("'r'"));
        }
        self.pos += 1;
        let v = self.index()?;
        self.punct(b'(', "'('")?;
        let i = self.entity()?;
        self.punct(b'.', "'.'")?;
        let t = self.entity()?;
        self.punct(b')', "')'")?;
        Ok(Rel::new(v, i, t)?)
    }

    fn side(&mut self) -> Result<Side, ParseLabelError> {
        let entity = self.entity()?;
        self.punct(b'.', "'.'")?;
        let rel = self.rel()?;
        Ok(Side::new(entity, rel)?)
    }

    fn owner(&mut self) -> Result<Owner, ParseLabelError> {
        match self.peek() {
            Some(b'e') => Ok(Owner::Entity(self.entity()?)),
            Some(b'r') => Ok(Owner::Rel(self.rel()?)),
            _ => Err(self.syntax("'e' or 'r'")),
        }
    }

    fn label(&mut self) -> Result<Label, ParseLabelError> {
        match self.peek() {
            Some(b'e') => {
                let entity = self.entity()?;
                // An entity followed by "." is the start of a side label.
                let mark = self.pos;
                self.skip_ws();
                if self.peek() == Some(b'.') {
                    self.pos += 1;
                    self.skip_ws();
                    let rel = self.rel()?;
                    Ok(Label::Side(Side::new(entity, rel)?))
                } else {
                    self.pos = mark;
                    Ok(Label::Entity(entity))
                }
            }
            Some(b'r') => Ok(Label::Rel(self.rel()?)),
            Some(b's') => {
                self.pos += 1;
                let j = self.index()?;
                self.punct(b'(', "'('")?;
                let owner = self.owner()?;
                self.punct(b')', "')'")?;
                Ok(Label::SimpleAttr { j, owner })
            }
            Some(b'k') => {
                self.pos += 1;
                self.punct(b'(', "'('")?;
                let entity = self.entity()?;
                self.punct(b')', "')'")?;
                Ok(Label::PkAttr { entity })
            }
            Some(b'm') => {
                self.pos += 1;
                self.punct(b'(', "'('")?;
                let side = self.side()?;
                self.punct(b')', "')'")?;
                Ok(Label::MinCard(side))
            }
            Some(b'x') => {
                self.pos += 1;
                self.punct(b'(', "'('")?;
                let side = self.side()?;
                self.punct(b')', "')'")?;
                Ok(Label::MaxCard(side))
            }
            _ => Err(self.syntax("one of 'e', 's', 'k', 'r', 'm', 'x'")),
        }
    }
}
