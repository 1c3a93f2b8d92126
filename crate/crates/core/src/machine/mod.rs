//! Formal machine descriptions: Turing machines as ordered 5-tuple rule
//! lists and finite-state machines as total lookup tables.

mod corpus;
mod text;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;

pub use corpus::{
    builtin_codec, builtin_corpus, corpus_names, corpus_source, INCREMENTER_HEAD_CANDIDATES,
    UTM55_HEAD_CANDIDATES,
};
pub use text::{parse_fsm_spec, parse_machine_spec, parse_spec, serialize_fsm_spec, serialize_machine_spec, ParseError};

/// Spelling aliases accepted wherever a name is read from text.
pub(crate) fn normalize_name(token: &str) -> String {
    if token == "delta" {
        "δ".to_string()
    } else {
        token.to_string()
    }
}

/// Head movement of a Turing machine rule. `Halt` stands in for a move
/// and a next state at once (`H -`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Move {
    Left,
    Right,
    Halt,
}

impl Move {
    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Halt => 'H',
        }
    }

    pub fn from_letter(c: &str) -> Option<Move> {
        match c {
            "L" => Some(Move::Left),
            "R" => Some(Move::Right),
            "H" => Some(Move::Halt),
            _ => None,
        }
    }
}

/// One transition `(state, read) -> (write, move, next)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub state: String,
    pub read_symbol: String,
    pub write_symbol: String,
    pub direction: Move,
    /// Absent exactly when `direction` is [`Move::Halt`].
    pub next_state: Option<String>,
}

impl Rule {
    pub fn new(state: &str, read: &str, write: &str, direction: Move, next: Option<&str>) -> Rule {
        Rule {
            state: state.to_string(),
            read_symbol: read.to_string(),
            write_symbol: write.to_string(),
            direction,
            next_state: next.map(str::to_string),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.state,
            self.read_symbol,
            self.write_symbol,
            self.direction.letter(),
            self.next_state.as_deref().unwrap_or("-")
        )
    }
}

/// A Turing machine together with its finite input tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineSpec {
    pub symbols: Vec<String>,
    pub states: Vec<String>,
    pub rules: Vec<Rule>,
    pub default_symbol: String,
    pub initial_state: String,
    pub tape: Vec<String>,
    /// Index of the tape cell about to be read.
    pub head: usize,
}

impl MachineSpec {
    /// The rule for `(state, symbol)`, with its 1-based rule number.
    pub fn rule_for(&self, state: &str, symbol: &str) -> Option<(usize, &Rule)> {
        self.rules
            .iter()
            .enumerate()
            .find(|(_, r)| r.state == state && r.read_symbol == symbol)
            .map(|(i, r)| (i + 1, r))
    }
}

/// A finite-state machine as a lookup table `(state, symbol) -> state`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsmSpec {
    pub symbols: Vec<String>,
    pub states: Vec<String>,
    pub transitions: BTreeMap<(String, String), String>,
    pub initial_state: String,
}

impl FsmSpec {
    pub fn next_state(&self, state: &str, symbol: &str) -> Option<&str> {
        self.transitions
            .get(&(state.to_string(), symbol.to_string()))
            .map(String::as_str)
    }
}

/// Either kind of machine a spec file can describe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    Tm(MachineSpec),
    Fsm(FsmSpec),
}

/// Declared symbols and states, shared by both machine kinds.
pub trait Alphabet {
    fn symbols(&self) -> &[String];
    fn states(&self) -> &[String];
}

impl Alphabet for MachineSpec {
    fn symbols(&self) -> &[String] {
        &self.symbols
    }
    fn states(&self) -> &[String] {
        &self.states
    }
}

impl Alphabet for FsmSpec {
    fn symbols(&self) -> &[String] {
        &self.symbols
    }
    fn states(&self) -> &[String] {
        &self.states
    }
}

/// A broken invariant of a machine description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyDeclaration { what: &'static str },
    DuplicateDeclaration { what: &'static str, name: String },
    BadName { what: &'static str, name: String },
    UndeclaredSymbol { field: String, name: String },
    UndeclaredState { field: String, name: String },
    /// Two rules (1-based numbers) share a `(state, symbol)` key.
    Nondeterministic { first: usize, second: usize, state: String, symbol: String },
    HaltWithNextState { rule: usize },
    MissingNextState { rule: usize },
    HeadOutOfRange { head: usize, len: usize },
    MissingTransition { state: String, symbol: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyDeclaration { what } => write!(f, "no {what} declared"),
            Violation::DuplicateDeclaration { what, name } => {
                write!(f, "{what} `{name}` declared more than once")
            }
            Violation::BadName { what, name } => write!(f, "invalid {what} name `{name}`"),
            Violation::UndeclaredSymbol { field, name } => {
                write!(f, "{field}: undeclared symbol `{name}`")
            }
            Violation::UndeclaredState { field, name } => {
                write!(f, "{field}: undeclared state `{name}`")
            }
            Violation::Nondeterministic { first, second, state, symbol } => write!(
                f,
                "rules {first} and {second} both apply to state `{state}` reading `{symbol}`"
            ),
            Violation::HaltWithNextState { rule } => {
                write!(f, "rule {rule}: a halting rule must not name a next state")
            }
            Violation::MissingNextState { rule } => {
                write!(f, "rule {rule}: a moving rule must name a next state")
            }
            Violation::HeadOutOfRange { head, len } => {
                write!(f, "head {head} is outside the tape of length {len}")
            }
            Violation::MissingTransition { state, symbol } => {
                write!(f, "no transition for state `{state}` reading `{symbol}`")
            }
        }
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == ':')
}

fn check_declarations(
    what: &'static str,
    names: &[String],
    out: &mut Vec<Violation>,
) -> HashSet<String> {
    if names.is_empty() {
        out.push(Violation::EmptyDeclaration { what });
    }
    let mut seen = HashSet::new();
    for name in names {
        if !valid_name(name) || (what == "state" && name == "-") {
            out.push(Violation::BadName { what, name: name.clone() });
        }
        if !seen.insert(name.clone()) {
            out.push(Violation::DuplicateDeclaration { what, name: name.clone() });
        }
    }
    seen
}

/// Checks every invariant of a Turing machine description. An empty list
/// means the spec is valid.
pub fn validate(spec: &MachineSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let symbols = check_declarations("symbol", &spec.symbols, &mut out);
    let states = check_declarations("state", &spec.states, &mut out);

    let sym = |field: String, name: &str, out: &mut Vec<Violation>| {
        if !symbols.contains(name) {
            out.push(Violation::UndeclaredSymbol { field, name: name.to_string() });
        }
    };
    let st = |field: String, name: &str, out: &mut Vec<Violation>| {
        if !states.contains(name) {
            out.push(Violation::UndeclaredState { field, name: name.to_string() });
        }
    };

    let mut keys: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for (i, rule) in spec.rules.iter().enumerate() {
        let n = i + 1;
        st(format!("rule {n}"), &rule.state, &mut out);
        sym(format!("rule {n}"), &rule.read_symbol, &mut out);
        sym(format!("rule {n}"), &rule.write_symbol, &mut out);
        match (rule.direction, &rule.next_state) {
            (Move::Halt, Some(_)) => out.push(Violation::HaltWithNextState { rule: n }),
            (Move::Left | Move::Right, None) => out.push(Violation::MissingNextState { rule: n }),
            (_, Some(next)) => st(format!("rule {n}"), next, &mut out),
            (Move::Halt, None) => {}
        }
        if let Some(&first) = keys.get(&(rule.state.as_str(), rule.read_symbol.as_str())) {
            out.push(Violation::Nondeterministic {
                first,
                second: n,
                state: rule.state.clone(),
                symbol: rule.read_symbol.clone(),
            });
        } else {
            keys.insert((&rule.state, &rule.read_symbol), n);
        }
    }

    sym("default".into(), &spec.default_symbol, &mut out);
    st("initial".into(), &spec.initial_state, &mut out);
    for (i, cell) in spec.tape.iter().enumerate() {
        sym(format!("tape cell {i}"), cell, &mut out);
    }
    if spec.head >= spec.tape.len() {
        out.push(Violation::HeadOutOfRange { head: spec.head, len: spec.tape.len() });
    }
    out
}

/// Checks an FSM description, including totality of the lookup table.
pub fn validate_fsm(spec: &FsmSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let symbols = check_declarations("symbol", &spec.symbols, &mut out);
    let states = check_declarations("state", &spec.states, &mut out);
    for ((state, symbol), next) in &spec.transitions {
        for (name, is_state) in [(state, true), (symbol, false), (next, true)] {
            let field = format!("transition ({state}, {symbol})");
            if is_state && !states.contains(name) {
                out.push(Violation::UndeclaredState { field, name: name.clone() });
            } else if !is_state && !symbols.contains(name) {
                out.push(Violation::UndeclaredSymbol { field, name: name.clone() });
            }
        }
    }
    if !states.contains(&spec.initial_state) {
        out.push(Violation::UndeclaredState {
            field: "initial".into(),
            name: spec.initial_state.clone(),
        });
    }
    for state in &spec.states {
        for symbol in &spec.symbols {
            if spec.next_state(state, symbol).is_none() {
                out.push(Violation::MissingTransition {
                    state: state.clone(),
                    symbol: symbol.clone(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn incrementer() -> MachineSpec {
        match builtin_corpus().remove("incrementer") {
            Some(Machine::Tm(spec)) => spec,
            _ => unreachable!(),
        }
    }

    #[test]
    fn builtins_are_valid() {
        for (name, machine) in builtin_corpus() {
            match machine {
                Machine::Tm(spec) => assert!(validate(&spec).is_empty(), "{name}"),
                Machine::Fsm(spec) => assert!(validate_fsm(&spec).is_empty(), "{name}"),
            }
        }
    }

    #[test]
    fn halt_with_next_state_is_one_violation() {
        let mut spec = incrementer();
        spec.rules[3].next_state = Some("q1".into());
        assert_eq!(validate(&spec), vec![Violation::HaltWithNextState { rule: 4 }]);
    }

    #[test]
    fn head_past_end_is_one_violation() {
        let mut spec = incrementer();
        spec.head = spec.tape.len();
        assert_eq!(
            validate(&spec),
            vec![Violation::HeadOutOfRange { head: 6, len: 6 }]
        );
    }

    #[test]
    fn duplicate_key_is_reported_with_both_rules() {
        let mut spec = incrementer();
        spec.rules.push(Rule::new("q1", "0", "1", Move::Left, Some("q2")));
        let v = validate(&spec);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::Nondeterministic { first: 1, second: 7, .. }));
    }

    #[test]
    fn undeclared_names_are_reported() {
        let mut spec = incrementer();
        spec.rules[0].next_state = Some("q9".into());
        spec.tape[0] = "x".into();
        let v = validate(&spec);
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn partial_fsm_table_is_rejected() {
        let mut fsm = match builtin_corpus().remove("parity") {
            Some(Machine::Fsm(f)) => f,
            _ => unreachable!(),
        };
        fsm.transitions.remove(&("B".to_string(), "1".to_string()));
        assert_eq!(
            validate_fsm(&fsm),
            vec![Violation::MissingTransition { state: "B".into(), symbol: "1".into() }]
        );
    }
}
