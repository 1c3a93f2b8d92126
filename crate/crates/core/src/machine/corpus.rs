//! Built-in machines, addressable by name.

use std::collections::BTreeMap;

use super::{parse_spec, Machine};
use crate::codon::{parse_codec_overrides, CodecOverrides};

const SOURCES: &[(&str, &str)] = &[
    ("incrementer", include_str!("../../corpus/incrementer.spec")),
    ("parity", include_str!("../../corpus/parity.spec")),
    ("unary_adder", include_str!("../../corpus/unary_adder.spec")),
    ("utm55", include_str!("../../corpus/utm55.spec")),
];

const CODECS: &[(&str, &str)] = &[("utm55", include_str!("../../corpus/utm55.codec"))];

/// Incrementer start cells: on the first non-blank symbol (frozen in the
/// corpus) and one cell to its left.
pub const INCREMENTER_HEAD_CANDIDATES: [(&str, usize); 2] =
    [("first-symbol", 2), ("left-of-first-symbol", 1)];

/// UTM(5,5) start cells on the corpus tape that replay the traced cycle;
/// the first is frozen in the corpus.
pub const UTM55_HEAD_CANDIDATES: [(&str, usize); 2] = [("fourth-b", 14), ("fifth-b", 15)];

pub fn corpus_names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(name, _)| *name)
}

/// The spec text a corpus machine is built from.
pub fn corpus_source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn builtin_corpus() -> BTreeMap<String, Machine> {
    SOURCES
        .iter()
        .map(|(name, text)| {
            let machine = parse_spec(text).unwrap_or_else(|e| panic!("corpus `{name}`: {e}"));
            (name.to_string(), machine)
        })
        .collect()
}

/// The codon assignment a corpus machine ships with, if it has one.
pub fn builtin_codec(name: &str) -> Option<CodecOverrides> {
    CODECS.iter().find(|(n, _)| *n == name).map(|(name, text)| {
        parse_codec_overrides(text).unwrap_or_else(|e| panic!("corpus codec `{name}`: {e}"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Move, Rule};

    #[test]
    fn corpus_has_the_four_machines() {
        let corpus = builtin_corpus();
        let names: Vec<_> = corpus.keys().map(String::as_str).collect();
        assert_eq!(names, ["incrementer", "parity", "unary_adder", "utm55"]);
        let rules = |n: &str| match &corpus[n] {
            Machine::Tm(s) => s.rules.len(),
            Machine::Fsm(_) => 0,
        };
        assert_eq!((rules("incrementer"), rules("unary_adder"), rules("utm55")), (6, 6, 25));
    }

    #[test]
    fn spot_checks() {
        let corpus = builtin_corpus();
        let Machine::Tm(adder) = &corpus["unary_adder"] else { unreachable!() };
        assert_eq!(adder.rules[3], Rule::new("q2", "0", "1", Move::Left, Some("q3")));
        let Machine::Fsm(parity) = &corpus["parity"] else { unreachable!() };
        assert_eq!(parity.next_state("B", "1"), Some("A"));
        let Machine::Tm(utm) = &corpus["utm55"] else { unreachable!() };
        assert_eq!(utm.symbols, ["g", "b", "δ", "c", "d"]);
        assert_eq!(utm.rules[23], Rule::new("q5", "c", "c", Move::Halt, None));
        assert_eq!(utm.head, UTM55_HEAD_CANDIDATES[0].1);
    }

    #[test]
    fn only_utm_ships_a_codec() {
        assert!(builtin_codec("utm55").is_some());
        assert!(builtin_codec("unary_adder").is_none());
    }
}
