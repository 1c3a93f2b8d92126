//! Step 3: each rule becomes a tRNA with one or two read rows, an R/L row
//! whose hole marks a left move, and a write row.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::codon::{Codec, CodecError, Codon};
use crate::machine::{MachineSpec, Move, Rule};
use crate::tape::CodonTriple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("rule {rule_id}: {source}")]
    Codec { rule_id: usize, source: CodecError },
    #[error("rule {rule_id}: no read side requested")]
    NoSides { rule_id: usize },
}

/// Where the current state sits relative to the symbol it reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    /// Entered by a right move (or planted initially): the read1 row.
    StateOnLeft,
    /// Entered by a left move: the read2 row.
    StateOnRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompileMode {
    /// Both read rows for every rule.
    #[default]
    Dual,
    /// Only the read rows a state can actually be entered with.
    Inferred,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReadRow {
    pub side: Side,
    pub fields: CodonTriple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trna {
    /// 1-based position of the source rule.
    pub rule_id: usize,
    /// Ordered read1 before read2.
    pub reads: Vec<ReadRow>,
    /// Set for left moves.
    pub hole: bool,
    pub write: CodonTriple,
}

impl Trna {
    /// The R/L row: all ones, with the leading bit cleared for a hole.
    pub fn move_row(&self) -> CodonTriple {
        let (l, s, r) = (self.write.left.len(), self.write.symbol.len(), self.write.right.len());
        let left = if self.hole { Codon::ones(l).without_leading_bit() } else { Codon::ones(l) };
        CodonTriple::new(left, Codon::ones(s), Codon::ones(r))
    }

    pub fn read(&self, side: Side) -> Option<&ReadRow> {
        self.reads.iter().find(|r| r.side == side)
    }
}

/// Compiles one rule. `rule_id` is its 1-based position in the machine.
pub fn compile_rule(rule: &Rule, rule_id: usize, codec: &Codec, sides: &[Side]) -> Result<Trna, CompileError> {
    let err = |source| CompileError::Codec { rule_id, source };
    let sides: BTreeSet<Side> = sides.iter().copied().collect();
    if sides.is_empty() {
        return Err(CompileError::NoSides { rule_id });
    }
    let state = codec.state(&rule.state).map_err(err)?.complement();
    let symbol = codec.symbol(&rule.read_symbol).map_err(err)?.complement();
    let zeros = Codon::zeros(codec.state_len());
    let reads = sides
        .into_iter()
        .map(|side| ReadRow {
            side,
            fields: match side {
                Side::StateOnLeft => CodonTriple::new(state, symbol, zeros),
                Side::StateOnRight => CodonTriple::new(zeros, symbol, state),
            },
        })
        .collect();

    let halt = codec.halt();
    let written = codec.symbol(&rule.write_symbol).map_err(err)?;
    let next = codec.state_or_halt(rule.next_state.as_deref()).map_err(err)?;
    let write = match rule.direction {
        Move::Left => CodonTriple::new(next, written, halt),
        Move::Right => CodonTriple::new(halt, written, next),
        Move::Halt => CodonTriple::new(halt, written, halt),
    };
    Ok(Trna { rule_id, reads, hole: rule.direction == Move::Left, write })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompileWarning {
    /// A state with rules that no move enters and that is not initial.
    UnreachableState { state: String },
}

impl fmt::Display for CompileWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompileWarning::UnreachableState { state } => {
                write!(f, "state `{state}` is never entered; compiled with the state on the left")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledRules {
    pub trnas: Vec<Trna>,
    pub warnings: Vec<CompileWarning>,
}

impl CompiledRules {
    pub fn read_row_count(&self) -> usize {
        self.trnas.iter().map(|t| t.reads.len()).sum()
    }
}

/// Read sides each state can be entered with.
pub fn inferred_sides(spec: &MachineSpec) -> Vec<(String, Vec<Side>)> {
    spec.states
        .iter()
        .map(|q| {
            let entered = |m: Move| spec.rules.iter().any(|r| r.direction == m && r.next_state.as_ref() == Some(q));
            let mut sides = Vec::new();
            if *q == spec.initial_state || entered(Move::Right) {
                sides.push(Side::StateOnLeft);
            }
            if entered(Move::Left) {
                sides.push(Side::StateOnRight);
            }
            (q.clone(), sides)
        })
        .collect()
}

pub fn compile_ruleset(spec: &MachineSpec, codec: &Codec, mode: CompileMode) -> Result<CompiledRules, CompileError> {
    let both = [Side::StateOnLeft, Side::StateOnRight];
    let inferred = inferred_sides(spec);
    let mut warnings = Vec::new();
    let mut trnas = Vec::with_capacity(spec.rules.len());
    for (i, rule) in spec.rules.iter().enumerate() {
        let sides: &[Side] = match mode {
            CompileMode::Dual => &both,
            CompileMode::Inferred => {
                let sides = inferred
                    .iter()
                    .find(|(q, _)| *q == rule.state)
                    .map(|(_, s)| s.as_slice())
                    .unwrap_or(&[]);
                if sides.is_empty() {
                    let w = CompileWarning::UnreachableState { state: rule.state.clone() };
                    if !warnings.contains(&w) {
                        warnings.push(w);
                    }
                    &both[..1]
                } else {
                    sides
                }
            }
        };
        trnas.push(compile_rule(rule, i + 1, codec, sides)?);
    }
    Ok(CompiledRules { trnas, warnings })
}

/// Rows of one tRNA, one per line, without a trailing newline.
pub fn render_trna(t: &Trna) -> String {
    let mut out = String::new();
    if let [only] = t.reads.as_slice() {
        let _ = writeln!(out, "read: {}", only.fields);
    } else {
        for (n, r) in t.reads.iter().enumerate() {
            let _ = writeln!(out, "read{}: {}", n + 1, r.fields);
        }
    }
    let _ = writeln!(out, "R/L: {}", t.move_row());
    let _ = write!(out, "write: {}", t.write);
    out
}

/// Numbered listing with each rule as a header, entries separated by blank lines.
pub fn render_listing(spec: &MachineSpec, trnas: &[Trna]) -> String {
    let mut out = String::new();
    for (i, t) in trnas.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let rule = &spec.rules[t.rule_id - 1];
        let _ = writeln!(out, "{}. {}:", t.rule_id, rule);
        let _ = writeln!(out, "{}", render_trna(t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codon::build_codec;
    use crate::machine::{builtin_codec, builtin_corpus, Machine};

    fn tm(name: &str) -> (MachineSpec, Codec) {
        let Some(Machine::Tm(spec)) = builtin_corpus().remove(name) else { unreachable!() };
        let codec = build_codec(&spec, builtin_codec(name).as_ref()).unwrap();
        (spec, codec)
    }

    #[test]
    fn adder_rule_one_state_on_left() {
        let (spec, codec) = tm("unary_adder");
        let t = compile_rule(&spec.rules[0], 1, &codec, &[Side::StateOnLeft]).unwrap();
        assert_eq!(render_trna(&t), "read: 110_10_000\nR/L: 111_11_111\nwrite: 111_01_001");
    }

    #[test]
    fn adder_halt_rule_state_on_right() {
        let (spec, codec) = tm("unary_adder");
        let t = compile_rule(&spec.rules[5], 6, &codec, &[Side::StateOnRight]).unwrap();
        assert!(!t.hole);
        assert_eq!(render_trna(&t), "read: 000_10_011\nR/L: 111_11_111\nwrite: 111_01_111");
    }

    #[test]
    fn utm_rule_one_both_sides() {
        let (spec, codec) = tm("utm55");
        let t = compile_rule(&spec.rules[0], 1, &codec, &[Side::StateOnRight, Side::StateOnLeft]).unwrap();
        assert!(t.hole);
        assert_eq!(
            render_trna(&t),
            "read1: 111000_111000_000000\nread2: 000000_111000_111000\n\
             R/L: 011111_111111_111111\nwrite: 000111_001011_111111"
        );
    }

    #[test]
    fn no_sides_is_an_error() {
        let (spec, codec) = tm("unary_adder");
        assert_eq!(compile_rule(&spec.rules[0], 1, &codec, &[]), Err(CompileError::NoSides { rule_id: 1 }));
    }

    #[test]
    fn inferred_adder_sides() {
        let (spec, _) = tm("unary_adder");
        let sides = inferred_sides(&spec);
        assert_eq!(sides[0].1, [Side::StateOnLeft]);
        assert_eq!(sides[1].1, [Side::StateOnLeft]);
        assert_eq!(sides[2].1, [Side::StateOnRight]);
    }

    #[test]
    fn dual_utm_has_fifty_read_rows() {
        let (spec, codec) = tm("utm55");
        let c = compile_ruleset(&spec, &codec, CompileMode::Dual).unwrap();
        assert_eq!((c.trnas.len(), c.read_row_count()), (25, 50));
        assert!(c.warnings.is_empty());
        assert_eq!(c.trnas[3].move_row().to_string(), "011111_111111_111111");
    }

    #[test]
    fn unreachable_state_warns_and_falls_back_left() {
        let (mut spec, codec) = tm("unary_adder");
        // Nothing moves into q2 any more.
        spec.rules[1].next_state = Some("q1".into());
        spec.rules[2].next_state = Some("q1".into());
        let c = compile_ruleset(&spec, &codec, CompileMode::Inferred).unwrap();
        assert_eq!(c.warnings, [CompileWarning::UnreachableState { state: "q2".into() }]);
        assert_eq!(c.trnas[2].reads[0].side, Side::StateOnLeft);
    }

    #[test]
    fn halt_only_machine_compiles_initial_on_left() {
        let (mut spec, codec) = tm("unary_adder");
        spec.rules.clear();
        spec.rules.push(Rule::new("q1", "0", "1", Move::Halt, None));
        let c = compile_ruleset(&spec, &codec, CompileMode::Inferred).unwrap();
        assert_eq!(c.trnas[0].reads.len(), 1);
        assert_eq!(c.trnas[0].reads[0].side, Side::StateOnLeft);
    }

    #[test]
    fn right_movers_have_no_zero_in_the_move_row() {
        let (spec, codec) = tm("utm55");
        let c = compile_ruleset(&spec, &codec, CompileMode::Dual).unwrap();
        for t in &c.trnas {
            assert_eq!(t.move_row().to_string().contains('0'), t.hole, "rule {}", t.rule_id);
        }
    }
}
