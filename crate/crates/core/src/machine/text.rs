//! Line-oriented text format for machine descriptions.
//!
//! ```text
//! symbols: 0 1 #
//! states: q1 q2
//! rule: q1 0 0 R q1
//! rule: q2 0 1 H -
//! default: #
//! initial: q1
//! tape: ##01##
//! head: 2
//! ```
//!
//! FSM files use `fsm-rule: A 0 A` lines and omit `tape`, `head` and
//! `default`. Lines starting with `#` are comments. `delta` is accepted as an
//! alias for `δ` anywhere a name is expected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{normalize_name, validate, validate_fsm, FsmSpec, Machine, MachineSpec, Move, Rule, Violation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("missing `{directive}:` directive")]
    Missing { directive: &'static str },
    #[error("invalid machine: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("expected a {expected} description")]
    WrongKind { expected: &'static str },
}

fn join(violations: &[Violation]) -> String {
    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Whitespace-separated tokens with their 1-based character column.
fn tokens(value: &str, first_column: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, c)) in value.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((col, byte)),
            (true, Some((scol, sbyte))) => {
                out.push((first_column + scol, &value[sbyte..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((scol, sbyte)) = start {
        out.push((first_column + scol, &value[sbyte..]));
    }
    out
}

struct Line<'a> {
    number: usize,
    value_column: usize,
    value: &'a str,
}

impl Line<'_> {
    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.number, column, message: message.into() }
    }
}

#[derive(Default)]
struct Raw<'a> {
    symbols: Option<Vec<String>>,
    states: Option<Vec<String>>,
    rules: Vec<Rule>,
    fsm_rules: Vec<(usize, (String, String), String)>,
    default: Option<String>,
    initial: Option<String>,
    tape: Option<Line<'a>>,
    head: Option<usize>,
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: &Line<'_>, key: &str) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(line.error(1, format!("duplicate `{key}:` directive")));
    }
    *slot = Some(value);
    Ok(())
}

fn single(line: &Line<'_>, key: &str) -> Result<String, ParseError> {
    let toks = tokens(line.value, line.value_column);
    match toks.as_slice() {
        [(_, t)] => Ok(normalize_name(t)),
        [] => Err(line.error(line.value_column, format!("`{key}:` needs a value"))),
        [_, (col, _), ..] => Err(line.error(*col, format!("`{key}:` takes a single value"))),
    }
}

fn read_raw(text: &str) -> Result<Raw<'_>, ParseError> {
    let mut raw = Raw::default();
    for (idx, full) in text.lines().enumerate() {
        let number = idx + 1;
        let trimmed = full.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = full.chars().count() - trimmed.chars().count();
        let Some(colon) = trimmed.find(':') else {
            return Err(ParseError::Syntax {
                line: number,
                column: indent + 1,
                message: "expected `keyword: value`".into(),
            });
        };
        let key = trimmed[..colon].trim();
        let value = &trimmed[colon + 1..];
        let line = Line {
            number,
            value_column: indent + trimmed[..colon].chars().count() + 2,
            value,
        };
        match key {
            "symbols" | "states" => {
                let names: Vec<String> = tokens(value, line.value_column)
                    .into_iter()
                    .map(|(_, t)| normalize_name(t))
                    .collect();
                let slot = if key == "symbols" { &mut raw.symbols } else { &mut raw.states };
                set_once(slot, names, &line, key)?;
            }
            "rule" => {
                let toks = tokens(value, line.value_column);
                if toks.len() != 5 {
                    return Err(line.error(
                        line.value_column,
                        format!("a rule has 5 fields, found {}", toks.len()),
                    ));
                }
                let (dcol, dtok) = toks[3];
                let direction = Move::from_letter(dtok)
                    .ok_or_else(|| line.error(dcol, format!("unknown move `{dtok}`, expected L, R or H")))?;
                let next = match toks[4].1 {
                    "-" => None,
                    t => Some(normalize_name(t)),
                };
                raw.rules.push(Rule {
                    state: normalize_name(toks[0].1),
                    read_symbol: normalize_name(toks[1].1),
                    write_symbol: normalize_name(toks[2].1),
                    direction,
                    next_state: next,
                });
            }
            "fsm-rule" => {
                let toks = tokens(value, line.value_column);
                if toks.len() != 3 {
                    return Err(line.error(
                        line.value_column,
                        format!("an fsm-rule has 3 fields, found {}", toks.len()),
                    ));
                }
                raw.fsm_rules.push((
                    number,
                    (normalize_name(toks[0].1), normalize_name(toks[1].1)),
                    normalize_name(toks[2].1),
                ));
            }
            "default" => {
                let v = single(&line, key)?;
                set_once(&mut raw.default, v, &line, key)?;
            }
            "initial" => {
                let v = single(&line, key)?;
                set_once(&mut raw.initial, v, &line, key)?;
            }
            "head" => {
                let toks = tokens(value, line.value_column);
                let [(col, t)] = toks.as_slice() else {
                    return Err(line.error(line.value_column, "`head:` takes a single integer"));
                };
                let head = t
                    .parse::<usize>()
                    .map_err(|_| line.error(*col, format!("`{t}` is not a tape index")))?;
                set_once(&mut raw.head, head, &line, key)?;
            }
            "tape" => {
                if raw.tape.is_some() {
                    return Err(line.error(1, "duplicate `tape:` directive"));
                }
                raw.tape = Some(line);
            }
            other => {
                return Err(ParseError::Syntax {
                    line: number,
                    column: indent + 1,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    Ok(raw)
}

/// Splits a tape value into symbol names. Without whitespace, every
/// character is a symbol, unless the whole value is one declared name.
fn tape_cells(line: &Line<'_>, symbols: &[String]) -> Result<Vec<String>, ParseError> {
    let toks = tokens(line.value, line.value_column);
    if toks.len() != 1 {
        return Ok(toks.into_iter().map(|(_, t)| normalize_name(t)).collect());
    }
    let (col, value) = toks[0];
    let declared = |s: &str| symbols.iter().any(|d| d == s);
    let chars: Vec<String> = value.chars().map(|c| c.to_string()).collect();
    if chars.iter().all(|c| declared(c)) {
        return Ok(chars);
    }
    let whole = normalize_name(value);
    if declared(&whole) {
        return Ok(vec![whole]);
    }
    let bad = value
        .chars()
        .position(|c| !declared(&c.to_string()))
        .unwrap_or(0);
    Err(line.error(col + bad, "tape contains an undeclared symbol"))
}

/// Parses either kind of description. Files containing `fsm-rule:` lines
/// are finite-state machines.
pub fn parse_spec(text: &str) -> Result<Machine, ParseError> {
    let raw = read_raw(text)?;
    let symbols = raw.symbols.clone().ok_or(ParseError::Missing { directive: "symbols" })?;
    let states = raw.states.clone().ok_or(ParseError::Missing { directive: "states" })?;
    let initial = raw.initial.clone().ok_or(ParseError::Missing { directive: "initial" })?;

    if !raw.fsm_rules.is_empty() {
        if !raw.rules.is_empty() {
            return Err(ParseError::Syntax {
                line: raw.fsm_rules[0].0,
                column: 1,
                message: "`rule:` and `fsm-rule:` cannot be mixed".into(),
            });
        }
        let mut transitions = BTreeMap::new();
        for (line, key, next) in raw.fsm_rules {
            if transitions.insert(key.clone(), next).is_some() {
                return Err(ParseError::Syntax {
                    line,
                    column: 1,
                    message: format!("duplicate transition for ({}, {})", key.0, key.1),
                });
            }
        }
        let spec = FsmSpec { symbols, states, transitions, initial_state: initial };
        let violations = validate_fsm(&spec);
        if !violations.is_empty() {
            return Err(ParseError::Invalid(violations));
        }
        return Ok(Machine::Fsm(spec));
    }

    let default = raw.default.ok_or(ParseError::Missing { directive: "default" })?;
    let tape_line = raw.tape.ok_or(ParseError::Missing { directive: "tape" })?;
    let head = raw.head.ok_or(ParseError::Missing { directive: "head" })?;
    let tape = tape_cells(&tape_line, &symbols)?;
    let spec = MachineSpec {
        symbols,
        states,
        rules: raw.rules,
        default_symbol: default,
        initial_state: initial,
        tape,
        head,
    };
    let violations = validate(&spec);
    if !violations.is_empty() {
        return Err(ParseError::Invalid(violations));
    }
    Ok(Machine::Tm(spec))
}

pub fn parse_machine_spec(text: &str) -> Result<MachineSpec, ParseError> {
    match parse_spec(text)? {
        Machine::Tm(spec) => Ok(spec),
        Machine::Fsm(_) => Err(ParseError::WrongKind { expected: "Turing machine" }),
    }
}

pub fn parse_fsm_spec(text: &str) -> Result<FsmSpec, ParseError> {
    match parse_spec(text)? {
        Machine::Fsm(spec) => Ok(spec),
        Machine::Tm(_) => Err(ParseError::WrongKind { expected: "finite-state machine" }),
    }
}

pub fn serialize_machine_spec(spec: &MachineSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "symbols: {}", spec.symbols.join(" "));
    let _ = writeln!(out, "states: {}", spec.states.join(" "));
    for rule in &spec.rules {
        let _ = writeln!(out, "rule: {rule}");
    }
    let _ = writeln!(out, "default: {}", spec.default_symbol);
    let _ = writeln!(out, "initial: {}", spec.initial_state);
    let single_chars = spec.symbols.iter().all(|s| s.chars().count() == 1);
    let tape = if single_chars && spec.tape.len() != 1 {
        spec.tape.concat()
    } else {
        spec.tape.join(" ")
    };
    let _ = writeln!(out, "tape: {tape}");
    let _ = writeln!(out, "head: {}", spec.head);
    out
}

pub fn serialize_fsm_spec(spec: &FsmSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "symbols: {}", spec.symbols.join(" "));
    let _ = writeln!(out, "states: {}", spec.states.join(" "));
    for state in &spec.states {
        for symbol in &spec.symbols {
            if let Some(next) = spec.next_state(state, symbol) {
                let _ = writeln!(out, "fsm-rule: {state} {symbol} {next}");
            }
        }
    }
    let _ = writeln!(out, "initial: {}", spec.initial_state);
    out
}
