//! Compiles Turing machines and finite-state machines into codon tapes and
//! tRNA rule sets, runs them under match-write-move semantics, and checks
//! the result against a classical interpreter.
//!
//! ```
//! use codon_tm::{build_codec, builtin_corpus, CompileMode, Machine, Outcome, SimInstance};
//!
//! let Machine::Tm(adder) = &builtin_corpus()["unary_adder"] else { unreachable!() };
//! let codec = build_codec(adder, None).unwrap();
//! let mut sim = SimInstance::from_spec(adder, &codec, CompileMode::Inferred, Default::default()).unwrap();
//! let (trace, outcome) = sim.run(100).unwrap();
//! assert_eq!((trace.len(), outcome), (6, Outcome::Halted));
//! assert_eq!(sim.decoded().unwrap().symbol_string(), "001110");
//! ```

pub mod codon;
pub mod fsm;
pub mod fuzz;
pub mod machine;
pub mod oracle;
pub mod sim;
pub mod tape;
pub mod trna;

pub use codon::{
    build_codec, capacity, enumerate_balanced, min_lengths, parse_codec_overrides, read_form,
    serialize_codec_overrides, trna_width, Codec, CodecError, CodecOverrides, Codon,
};
pub use fsm::{compile_fsm, fsm_oracle, fsm_run, split_input, FsmError, FsmRun, FsmStep, FsmTrna};
pub use machine::{
    builtin_codec, builtin_corpus, corpus_names, corpus_source, parse_fsm_spec, parse_machine_spec,
    parse_spec, serialize_fsm_spec, serialize_machine_spec, validate, validate_fsm, FsmSpec, Machine,
    MachineSpec, Move, ParseError, Rule, Violation,
};
pub use oracle::{
    bisimulate, bisimulate_with, tm_run, tm_step, ClassicalConfig, ClassicalRun, ClassicalStep,
    Divergence, Field, Verdict,
};
pub use sim::{match_window, Arrival, Outcome, SimError, SimInstance, TraceEvent, DEFAULT_MAX_STEPS};
pub use tape::{decode_tape, encode_tape, CodonTriple, DecodedTape, Edge, EncodedTape, TapeError};
pub use trna::{
    compile_rule, compile_ruleset, render_listing, render_trna, CompileError, CompileMode,
    CompileWarning, CompiledRules, ReadRow, Side, Trna,
};
