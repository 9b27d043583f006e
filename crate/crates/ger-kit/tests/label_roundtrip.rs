//! Property tests for the label grammar: parse/format round trip,
//! canonicality of the output alphabet, and underscore tolerance.

use ger_kit::labels::{format_label, parse_label, Index, Label, Owner, Rel, Side};
use proptest::prelude::*;

fn index_strategy() -> impl Strategy<Value = Index> {
    (1u32..=60).prop_map(|n| Index::new(n).unwrap())
}

fn rel_strategy() -> impl Strategy<Value = Rel> {
    (1u32..=5, 1u32..=59).prop_flat_map(|(v, i)| {
        ((i + 1)..=60).prop_map(move |t| {
            Rel::new(
                Index::new(v).unwrap(),
                Index::new(i).unwrap(),
                Index::new(t).unwrap(),
            )
            .unwrap()
        })
    })
}

fn side_strategy() -> impl Strategy<Value = Side> {
    (rel_strategy(), any::<bool>()).prop_map(|(rel, lower)| {
        let entity = if lower { rel.i() } else { rel.t() };
        Side::new(entity, rel).unwrap()
    })
}

fn owner_strategy() -> impl Strategy<Value = Owner> {
    prop_oneof![
        index_strategy().prop_map(Owner::Entity),
        rel_strategy().prop_map(Owner::Rel),
    ]
}

fn label_strategy() -> impl Strategy<Value = Label> {
    prop_oneof![
        index_strategy().prop_map(Label::Entity),
        (index_strategy(), owner_strategy())
            .prop_map(|(j, owner)| Label::SimpleAttr { j, owner }),
        index_strategy().prop_map(|entity| Label::PkAttr { entity }),
        rel_strategy().prop_map(Label::Rel),
        side_strategy().prop_map(Label::Side),
        side_strategy().prop_map(Label::MinCard),
        side_strategy().prop_map(Label::MaxCard),
    ]
}

proptest! {
    #[test]
    fn parse_inverts_format(label in label_strategy()) {
        let text = format_label(&label);
        prop_assert_eq!(parse_label(&text).unwrap(), label);
    }

    #[test]
    fn canonical_form_uses_a_small_alphabet(label in label_strategy()) {
        let text = format_label(&label);
        prop_assert!(text
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '(' || c == ')' || c == '.'));
        // Re-parsing and re-printing is byte-identical.
        prop_assert_eq!(format_label(&parse_label(&text).unwrap()), text);
    }

    #[test]
    fn underscored_spelling_parses_the_same(label in label_strategy()) {
        let canonical = format_label(&label);
        // Insert an underscore after every letter that precedes a digit.
        let mut underscored = String::new();
        let chars: Vec<char> = canonical.chars().collect();
        for (pos, c) in chars.iter().enumerate() {
            underscored.push(*c);
            if c.is_ascii_lowercase()
                && chars.get(pos + 1).is_some_and(|n| n.is_ascii_digit())
            {
                underscored.push('_');
            }
        }
        prop_assert_eq!(parse_label(&underscored).unwrap(), label);
    }
}
