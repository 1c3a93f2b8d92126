//! Finite-state machines as tRNA lookup tables: read one symbol, replace
//! the state, advance one cell.

use serde::Serialize;
use thiserror::Error;

use crate::codon::{Codec, CodecError, Codon};
use crate::machine::FsmSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FsmError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("input symbol `{0}` is not declared")]
    UndeclaredSymbol(String),
    #[error("no transition for state `{state}` on `{symbol}`")]
    MissingTransition { state: String, symbol: String },
    #[error("position {position}: {count} tRNA match")]
    Match { position: usize, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FsmTrna {
    /// 1-based, in state-major declaration order.
    pub rule_id: usize,
    pub state_match: Codon,
    pub symbol_match: Codon,
    pub new_state: Codon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FsmStep {
    pub position: usize,
    pub rule_id: usize,
    /// State after this symbol.
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FsmRun {
    pub final_state: String,
    pub trace: Vec<FsmStep>,
}

pub fn compile_fsm(spec: &FsmSpec, codec: &Codec) -> Result<Vec<FsmTrna>, FsmError> {
    let mut out = Vec::with_capacity(spec.states.len() * spec.symbols.len());
    for state in &spec.states {
        for symbol in &spec.symbols {
            let next = spec.next_state(state, symbol).ok_or_else(|| FsmError::MissingTransition {
                state: state.clone(),
                symbol: symbol.clone(),
            })?;
            out.push(FsmTrna {
                rule_id: out.len() + 1,
                state_match: codec.state(state)?.complement(),
                symbol_match: codec.symbol(symbol)?.complement(),
                new_state: codec.state(next)?,
            });
        }
    }
    Ok(out)
}

fn check_declared(spec: &FsmSpec, input: &[String]) -> Result<(), FsmError> {
    match input.iter().find(|s| !spec.symbols.contains(s)) {
        Some(s) => Err(FsmError::UndeclaredSymbol(s.clone())),
        None => Ok(()),
    }
}

/// Runs the compiled table over `input`, matching codons by complement.
pub fn fsm_run(spec: &FsmSpec, input: &[String], codec: &Codec) -> Result<FsmRun, FsmError> {
    check_declared(spec, input)?;
    let trnas = compile_fsm(spec, codec)?;
    let mut state = codec.state(&spec.initial_state)?;
    let mut trace = Vec::with_capacity(input.len());
    for (position, symbol) in input.iter().enumerate() {
        let cell = codec.symbol(symbol)?;
        let hits: Vec<&FsmTrna> = trnas
            .iter()
            .filter(|t| t.state_match == state.complement() && t.symbol_match == cell.complement())
            .collect();
        let [hit] = hits.as_slice() else {
            return Err(FsmError::Match { position, count: hits.len() });
        };
        state = hit.new_state;
        let name = codec.state_name(state).unwrap_or_default().to_string();
        trace.push(FsmStep { position, rule_id: hit.rule_id, state: name });
    }
    let final_state = codec
        .state_name(state)
        .map(str::to_string)
        .ok_or(FsmError::Codec(CodecError::Uncovered { kind: "state", name: state.to_string() }))?;
    Ok(FsmRun { final_state, trace })
}

/// Walks the transition map directly.
pub fn fsm_oracle(spec: &FsmSpec, input: &[String]) -> Result<String, FsmError> {
    check_declared(spec, input)?;
    let mut state = spec.initial_state.as_str();
    for symbol in input {
        state = spec.next_state(state, symbol).ok_or_else(|| FsmError::MissingTransition {
            state: state.to_string(),
            symbol: symbol.clone(),
        })?;
    }
    Ok(state.to_string())
}

/// Splits input text into symbols: one per character when every declared
/// symbol is a single character, whitespace-separated tokens otherwise.
pub fn split_input(spec: &FsmSpec, text: &str) -> Vec<String> {
    if spec.symbols.iter().all(|s| s.chars().count() == 1) && !text.contains(char::is_whitespace) {
        text.chars().map(|c| crate::machine::normalize_name(&c.to_string())).collect()
    } else {
        text.split_whitespace().map(crate::machine::normalize_name).collect()
    }
}
