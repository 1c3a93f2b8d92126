//! The mechanical loop: find the tRNA whose read row is the complement of
//! the window, write its write row over the window, move by its hole flag,
//! and halt when nothing matches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::codon::{Codec, CodecError, Codon};
use crate::machine::MachineSpec;
use crate::tape::{decode_tape, encode_tape, CodonTriple, DecodedTape, Edge, EncodedTape, TapeError};
use crate::trna::{compile_ruleset, CompileError, CompileMode, Side, Trna};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("step {step}: rules {rule_ids:?} all match the window {window}")]
    Nondeterminism { step: usize, rule_ids: Vec<usize>, window: CodonTriple },
    #[error(transparent)]
    Tape(#[from] TapeError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// How tRNA reach the tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arrival {
    /// Scan the read rows in order; trials is the position of the match.
    #[default]
    Deterministic,
    /// Draw read rows uniformly with replacement until the match arrives.
    Stochastic { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Halted,
    StepLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    /// 1-based.
    pub step: usize,
    pub rule_id: usize,
    pub matched_side: Side,
    pub trials: u64,
    pub tape_before: String,
    pub window_before: CodonTriple,
    /// The window the head rests on after the move.
    pub window_after: CodonTriple,
    pub decoded_before: DecodedTape,
}

/// The side whose read row is the complement of `window`, trying read1 first.
pub fn match_window(t: &Trna, window: CodonTriple) -> Option<Side> {
    let key = window.complement();
    t.reads.iter().find(|r| r.fields == key).map(|r| r.side)
}

#[derive(Debug, Clone)]
pub struct SimInstance {
    tape: EncodedTape,
    trnas: Vec<Trna>,
    codec: Codec,
    blank: Codon,
    /// Every read row as (tRNA index, side): the arrival pool.
    pool: Vec<(usize, Side)>,
    rng: Option<ChaCha8Rng>,
    step_count: usize,
    trial_count: u64,
    halted: bool,
}

impl SimInstance {
    pub fn new(
        tape: EncodedTape,
        trnas: Vec<Trna>,
        codec: Codec,
        default_symbol: &str,
        arrival: Arrival,
    ) -> Result<SimInstance, SimError> {
        let blank = codec.symbol(default_symbol)?;
        let pool = trnas
            .iter()
            .enumerate()
            .flat_map(|(i, t)| t.reads.iter().map(move |r| (i, r.side)))
            .collect();
        let rng = match arrival {
            Arrival::Deterministic => None,
            Arrival::Stochastic { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Ok(SimInstance { tape, trnas, codec, blank, pool, rng, step_count: 0, trial_count: 0, halted: false })
    }

    /// Encodes, compiles and loads a machine in one go.
    pub fn from_spec(spec: &MachineSpec, codec: &Codec, mode: CompileMode, arrival: Arrival) -> Result<SimInstance, SimError> {
        let tape = encode_tape(spec, codec)?;
        let compiled = compile_ruleset(spec, codec, mode)?;
        SimInstance::new(tape, compiled.trnas, codec.clone(), &spec.default_symbol, arrival)
    }

    pub fn tape(&self) -> &EncodedTape {
        &self.tape
    }

    pub fn trnas(&self) -> &[Trna] {
        &self.trnas
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn pool_size(&self) -> usize {
        self.pool.len()
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    pub fn trial_count(&self) -> u64 {
        self.trial_count
    }

    pub fn halted(&self) -> bool {
        self.halted
    }

    pub fn decoded(&self) -> Result<DecodedTape, TapeError> {
        decode_tape(&self.tape, &self.codec)
    }

    /// Every tRNA matching the current window, by exhaustive scan.
    pub fn matches(&self) -> Vec<(usize, Side)> {
        let window = self.tape.window_fields();
        self.trnas
            .iter()
            .enumerate()
            .filter_map(|(i, t)| match_window(t, window).map(|side| (i, side)))
            .collect()
    }

    /// The unique match, `None` when nothing matches.
    pub fn unique_match(&self) -> Result<Option<(usize, Side)>, SimError> {
        match self.matches().as_slice() {
            [] => Ok(None),
            [m] => Ok(Some(*m)),
            many => Err(SimError::Nondeterminism {
                step: self.step_count + 1,
                rule_ids: many.iter().map(|(i, _)| self.trnas[*i].rule_id).collect(),
                window: self.tape.window_fields(),
            }),
        }
    }

    /// Overwrites the window with the write row and moves.
    pub fn apply(&mut self, trna_index: usize) {
        let t = &self.trnas[trna_index];
        self.tape.set_window_fields(t.write);
        let edge = if t.hole { Edge::Left } else { Edge::Right };
        self.tape.shift(edge, self.blank);
        self.step_count += 1;
    }

    fn trials_for(&mut self, target: (usize, Side)) -> u64 {
        match &mut self.rng {
            None => self.pool.iter().position(|p| *p == target).map_or(0, |p| p as u64 + 1),
            Some(rng) => {
                let mut draws = 0;
                loop {
                    draws += 1;
                    if self.pool[rng.random_range(0..self.pool.len())] == target {
                        return draws;
                    }
                }
            }
        }
    }

    /// One match-write-move cycle without building a trace event. Returns
    /// the applied tRNA index, matched side and trial count, or `None` when
    /// nothing matches (the instance is then halted).
    pub fn advance(&mut self) -> Result<Option<(usize, Side, u64)>, SimError> {
        if self.halted {
            return Ok(None);
        }
        let Some((index, side)) = self.unique_match()? else {
            self.halted = true;
            return Ok(None);
        };
        let trials = self.trials_for((index, side));
        self.trial_count += trials;
        self.apply(index);
        Ok(Some((index, side, trials)))
    }

    /// One match-write-move cycle, recorded as a trace event.
    pub fn step(&mut self) -> Result<Option<TraceEvent>, SimError> {
        if self.halted || self.unique_match()?.is_none() {
            self.halted = true;
            return Ok(None);
        }
        let decoded_before = self.decoded()?;
        let tape_before = self.tape.to_string();
        let window_before = self.tape.window_fields();
        let Some((index, side, trials)) = self.advance()? else {
            return Ok(None);
        };
        Ok(Some(TraceEvent {
            step: self.step_count,
            rule_id: self.trnas[index].rule_id,
            matched_side: side,
            trials,
            tape_before,
            window_before,
            window_after: self.tape.window_fields(),
            decoded_before,
        }))
    }

    /// Steps until no tRNA matches or `max_steps` steps have run. A machine
    /// that stops exactly at the limit with nothing left to match counts as
    /// halted.
    pub fn run(&mut self, max_steps: usize) -> Result<(Vec<TraceEvent>, Outcome), SimError> {
        let mut trace = Vec::new();
        while trace.len() < max_steps {
            match self.step()? {
                Some(e) => trace.push(e),
                None => return Ok((trace, Outcome::Halted)),
            }
        }
        if self.unique_match()?.is_none() {
            self.halted = true;
            return Ok((trace, Outcome::Halted));
        }
        Ok((trace, Outcome::StepLimit))
    }

    /// Like [`SimInstance::run`] without recording a trace.
    pub fn run_quiet(&mut self, max_steps: usize) -> Result<Outcome, SimError> {
        let start = self.step_count;
        while self.step_count - start < max_steps {
            if self.advance()?.is_none() {
                return Ok(Outcome::Halted);
            }
        }
        if self.unique_match()?.is_none() {
            self.halted = true;
            return Ok(Outcome::Halted);
        }
        Ok(Outcome::StepLimit)
    }
}
