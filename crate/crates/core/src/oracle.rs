//! Classical reference interpreter and lockstep comparison against the
//! mechanical run.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::codon::Codec;
use crate::machine::{MachineSpec, Move};
use crate::sim::{Arrival, Outcome, SimError, SimInstance};
use crate::tape::DecodedTape;
use crate::trna::CompileMode;

/// Tape, head and state of a running machine, positions absolute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalConfig {
    /// Cells that were ever set; every other position holds the default.
    pub cells: BTreeMap<i64, String>,
    /// `None` once halted.
    pub state: Option<String>,
    pub head: i64,
}

impl ClassicalConfig {
    pub fn initial(spec: &MachineSpec) -> ClassicalConfig {
        ClassicalConfig {
            cells: spec.tape.iter().enumerate().map(|(i, s)| (i as i64, s.clone())).collect(),
            state: Some(spec.initial_state.clone()),
            head: spec.head as i64,
        }
    }

    pub fn symbol_at<'a>(&'a self, pos: i64, default: &'a str) -> &'a str {
        self.cells.get(&pos).map_or(default, String::as_str)
    }

    pub fn is_halted(&self) -> bool {
        self.state.is_none()
    }

    /// Lowest and highest position ever set.
    pub fn span(&self) -> (i64, i64) {
        let lo = self.cells.keys().next().copied().unwrap_or(self.head);
        let hi = self.cells.keys().next_back().copied().unwrap_or(self.head);
        (lo, hi)
    }

    /// The symbols over `[lo, hi]`.
    pub fn window_string(&self, lo: i64, hi: i64, default: &str) -> Vec<String> {
        (lo..=hi).map(|p| self.symbol_at(p, default).to_string()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassicalStep {
    Applied { rule_id: usize },
    /// Already halted, or no rule for the current pair.
    Halted,
}

/// Applies the rule for the current state and symbol. A missing rule halts.
pub fn tm_step(spec: &MachineSpec, cfg: &mut ClassicalConfig) -> ClassicalStep {
    let Some(state) = cfg.state.as_deref() else {
        return ClassicalStep::Halted;
    };
    let symbol = cfg.symbol_at(cfg.head, &spec.default_symbol);
    let Some((rule_id, rule)) = spec.rule_for(state, symbol) else {
        cfg.state = None;
        return ClassicalStep::Halted;
    };
    cfg.cells.insert(cfg.head, rule.write_symbol.clone());
    match rule.direction {
        Move::Left => cfg.head -= 1,
        Move::Right => cfg.head += 1,
        Move::Halt => {}
    }
    cfg.state = rule.next_state.clone();
    ClassicalStep::Applied { rule_id }
}

fn next_rule(spec: &MachineSpec, cfg: &ClassicalConfig) -> Option<usize> {
    let state = cfg.state.as_deref()?;
    spec.rule_for(state, cfg.symbol_at(cfg.head, &spec.default_symbol)).map(|(id, _)| id)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalRun {
    pub config: ClassicalConfig,
    pub steps: usize,
    pub outcome: Outcome,
    pub rule_ids: Vec<usize>,
}

pub fn tm_run(spec: &MachineSpec, max_steps: usize) -> ClassicalRun {
    let mut config = ClassicalConfig::initial(spec);
    let mut rule_ids = Vec::new();
    while rule_ids.len() < max_steps {
        match tm_step(spec, &mut config) {
            ClassicalStep::Applied { rule_id } => rule_ids.push(rule_id),
            ClassicalStep::Halted => break,
        }
    }
    if next_rule(spec, &config).is_none() {
        config.state = None;
    }
    let outcome = if config.is_halted() { Outcome::Halted } else { Outcome::StepLimit };
    ClassicalRun { steps: rule_ids.len(), config, outcome, rule_ids }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Field {
    State,
    Head,
    Symbols,
    RuleId,
    Halting,
    Fault,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Field::State => "state",
            Field::Head => "head",
            Field::Symbols => "symbols",
            Field::RuleId => "rule_id",
            Field::Halting => "halting",
            Field::Fault => "fault",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    /// Steps both runs completed before the difference showed.
    pub step: usize,
    pub field: Field,
    pub classical: String,
    pub mechanical: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass { steps: usize, outcome: Outcome },
    Diverged(Divergence),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

fn show<T: fmt::Debug>(v: T) -> String {
    format!("{v:?}")
}

fn symbols_over(cls: &ClassicalConfig, mech: &DecodedTape, default: &str) -> (Vec<String>, Vec<String>) {
    let (clo, chi) = cls.span();
    let mlo = mech.origin;
    let mhi = mech.origin + mech.symbols.len() as i64 - 1;
    let (lo, hi) = (clo.min(mlo), chi.max(mhi));
    let mech_at = |p: i64| {
        if (mlo..=mhi).contains(&p) {
            mech.symbols[(p - mlo) as usize].clone()
        } else {
            default.to_string()
        }
    };
    (cls.window_string(lo, hi, default), (lo..=hi).map(mech_at).collect())
}

/// Runs `spec` classically and mechanically in lockstep.
pub fn bisimulate(spec: &MachineSpec, codec: &Codec, mode: CompileMode, max_steps: usize) -> Result<Verdict, SimError> {
    bisimulate_with(spec, spec, codec, mode, max_steps)
}

/// Like [`bisimulate`], but compiles `mechanical` while interpreting
/// `reference`, so a fault planted in one of them shows up as a divergence.
pub fn bisimulate_with(
    reference: &MachineSpec,
    mechanical: &MachineSpec,
    codec: &Codec,
    mode: CompileMode,
    max_steps: usize,
) -> Result<Verdict, SimError> {
    let default = reference.default_symbol.as_str();
    let mut cls = ClassicalConfig::initial(reference);
    let mut sim = SimInstance::from_spec(mechanical, codec, mode, Arrival::Deterministic)?;
    let diverged = |step, field, classical, mechanical| Ok(Verdict::Diverged(Divergence { step, field, classical, mechanical }));

    let mut step = 0;
    loop {
        let c_halts = next_rule(reference, &cls).is_none();
        let m_halts = match sim.unique_match() {
            Ok(m) => m.is_none(),
            Err(e) => return diverged(step, Field::Fault, String::new(), e.to_string()),
        };
        let mech = sim.decoded()?;
        if c_halts != m_halts {
            return diverged(step, Field::Halting, show(c_halts), show(m_halts));
        }
        let (cs, ms) = symbols_over(&cls, &mech, default);
        if cs != ms {
            return diverged(step, Field::Symbols, cs.join(""), ms.join(""));
        }
        if c_halts {
            return Ok(Verdict::Pass { steps: step, outcome: Outcome::Halted });
        }
        if cls.state != mech.state {
            return diverged(step, Field::State, show(&cls.state), show(&mech.state));
        }
        if Some(cls.head) != mech.head_position() {
            return diverged(step, Field::Head, show(Some(cls.head)), show(mech.head_position()));
        }
        if step == max_steps {
            return Ok(Verdict::Pass { steps: step, outcome: Outcome::StepLimit });
        }

        let c = tm_step(reference, &mut cls);
        let m = match sim.advance() {
            Ok(m) => m.map(|(index, _, _)| sim.trnas()[index].rule_id),
            Err(e) => return diverged(step, Field::Fault, String::new(), e.to_string()),
        };
        match (c, m) {
            (ClassicalStep::Applied { rule_id }, Some(m)) if rule_id != m => {
                return diverged(step, Field::RuleId, rule_id.to_string(), m.to_string());
            }
            (ClassicalStep::Applied { .. }, Some(_)) => {}
            (c, m) => return diverged(step, Field::Halting, show(c), show(m)),
        }
        step += 1;
    }
}
