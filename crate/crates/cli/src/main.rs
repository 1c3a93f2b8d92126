use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use codon_tm::fuzz::random_machine;
use codon_tm::{
    bisimulate, bisimulate_with, build_codec, builtin_codec, compile_ruleset, corpus_names, corpus_source, encode_tape,
    fsm_run, parse_codec_overrides, parse_spec, render_listing, split_input, Arrival, Codec, CodecError,
    CodecOverrides, CompileError, CompileMode, Machine, MachineSpec, Outcome, SimError, SimInstance,
    TapeError, Verdict, DEFAULT_MAX_STEPS,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Version of the line-delimited structured output.
const FORMAT_VERSION: u32 = 1;

const FUZZ_MAX_STEPS: usize = 500;

#[derive(Parser)]
#[command(name = "codon-tm", version, about = "Compile and run machines as codon tapes and tRNA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the encoded tape and the tRNA listing.
    Compile {
        #[command(flatten)]
        machine: MachineArgs,
    },
    /// Run the mechanical simulation and print its trace.
    Run {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long, value_enum, default_value_t = ArrivalArg::Deterministic)]
        arrival: ArrivalArg,
        /// Seed for stochastic arrival.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Check the mechanical run against the classical interpreter.
    Verify {
        /// Spec file or corpus name; optional with --fuzz.
        #[arg(required_unless_present = "fuzz")]
        spec: Option<String>,
        #[arg(long)]
        codec: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Dual)]
        mode: ModeArg,
        /// Step bound [default: 10000, or 500 with --fuzz]
        #[arg(long)]
        max_steps: Option<usize>,
        /// Compile this spec for the mechanical run instead, keeping SPEC as
        /// the classical reference (for checking that faults are caught).
        #[arg(long, value_name = "SPEC", conflicts_with = "fuzz")]
        mechanical: Option<String>,
        /// Check this many random machines instead of a spec.
        #[arg(long, conflicts_with = "spec")]
        fuzz: Option<usize>,
        /// Seed for --fuzz.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a finite-state machine over an input string.
    Fsm {
        spec: String,
        /// Input symbols; one per character, or whitespace-separated.
        input: String,
        #[arg(long)]
        codec: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the built-in machines, or print one of them.
    Corpus {
        name: Option<String>,
        /// Print the machine's shipped codec instead of its spec.
        #[arg(long)]
        codec: bool,
    },
}

#[derive(clap::Args)]
struct MachineArgs {
    /// Spec file or corpus name.
    spec: String,
    /// Codec override file (a corpus name selects its shipped codec).
    #[arg(long)]
    codec: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Dual)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Dual,
    Inferred,
}

impl From<ModeArg> for CompileMode {
    fn from(m: ModeArg) -> CompileMode {
        match m {
            ModeArg::Dual => CompileMode::Dual,
            ModeArg::Inferred => CompileMode::Inferred,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ArrivalArg {
    Deterministic,
    Stochastic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// A failure with the exit code of its class.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Display) -> Failure {
        Failure { code: 1, message: message.to_string() }
    }

    fn codec(message: impl Display) -> Failure {
        Failure { code: 2, message: message.to_string() }
    }
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Failure {
        Failure::codec(e)
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Failure {
        Failure::codec(e)
    }
}

impl From<TapeError> for Failure {
    fn from(e: TapeError) -> Failure {
        match e {
            TapeError::Codec(_) | TapeError::UnknownCodon { .. } => Failure::codec(e),
            _ => Failure::input(e),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Failure {
        match e {
            SimError::Nondeterminism { .. } => Failure { code: 4, message: e.to_string() },
            SimError::Tape(t) => t.into(),
            SimError::Compile(c) => c.into(),
            SimError::Codec(c) => c.into(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Compile { machine } => cmd_compile(&machine),
        Command::Run { machine, arrival, seed, max_steps } => cmd_run(&machine, arrival, seed, max_steps),
        Command::Verify { spec, codec, mode, max_steps, mechanical, fuzz, seed, format } => match fuzz {
            Some(n) => cmd_fuzz(n, seed, mode.into(), max_steps.unwrap_or(FUZZ_MAX_STEPS), format),
            None => {
                let max_steps = max_steps.unwrap_or(DEFAULT_MAX_STEPS);
                let spec = spec.unwrap_or_default();
                let check = VerifyArgs { mechanical: mechanical.as_deref(), codec: codec.as_deref(), mode: mode.into() };
                cmd_verify(&spec, &check, max_steps, format)
            }
        },
        Command::Fsm { spec, input, codec, format } => cmd_fsm(&spec, &input, codec.as_deref(), format),
        Command::Corpus { name, codec } => cmd_corpus(name.as_deref(), codec),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn is_corpus_name(name: &str) -> bool {
    corpus_names().any(|n| n == name)
}

/// Loads a spec from a file, or from the corpus when no such file exists.
fn load_machine(spec: &str) -> Result<Machine, Failure> {
    let text = if !Path::new(spec).exists() && is_corpus_name(spec) {
        corpus_source(spec).unwrap_or_default().to_string()
    } else {
        fs::read_to_string(spec).map_err(|e| Failure::input(format!("{spec}: {e}")))?
    };
    parse_spec(&text).map_err(|e| Failure::input(format!("{spec}: {e}")))
}

fn load_tm(spec: &str) -> Result<MachineSpec, Failure> {
    match load_machine(spec)? {
        Machine::Tm(m) => Ok(m),
        Machine::Fsm(_) => Err(Failure::input(format!("{spec} is a finite-state machine, use `fsm`"))),
    }
}

/// An explicit codec file wins; `NAME` or `NAME.codec` for a corpus machine
/// selects its shipped codec; otherwise a corpus spec brings its own.
fn load_overrides(spec: &str, codec: Option<&str>) -> Result<Option<CodecOverrides>, Failure> {
    let Some(path) = codec else {
        return Ok(builtin_codec(spec));
    };
    if Path::new(path).exists() {
        let text = fs::read_to_string(path).map_err(|e| Failure::codec(format!("{path}: {e}")))?;
        return parse_codec_overrides(&text).map(Some).map_err(|e| Failure::codec(format!("{path}: {e}")));
    }
    let stem = PathBuf::from(path).file_stem().map(|s| s.to_string_lossy().into_owned());
    stem.as_deref()
        .and_then(builtin_codec)
        .map(Some)
        .ok_or_else(|| Failure::codec(format!("{path}: no such codec file")))
}

fn load_codec<A: codon_tm::machine::Alphabet>(machine: &A, spec: &str, codec: Option<&str>) -> Result<Codec, Failure> {
    let overrides = load_overrides(spec, codec)?;
    Ok(build_codec(machine, overrides.as_ref())?)
}

fn header(command: &str) -> Value {
    json!({ "format": "codon-tm", "version": FORMAT_VERSION, "command": command })
}

fn emit(v: &Value) {
    println!("{v}");
}

fn warn(format: Format, message: impl Display) {
    match format {
        Format::Text => eprintln!("warning: {message}"),
        Format::Structured => emit(&json!({ "type": "warning", "message": message.to_string() })),
    }
}

fn cmd_compile(args: &MachineArgs) -> CmdResult {
    let spec = load_tm(&args.spec)?;
    let codec = load_codec(&spec, &args.spec, args.codec.as_deref())?;
    let tape = encode_tape(&spec, &codec)?;
    let compiled = compile_ruleset(&spec, &codec, args.mode.into())?;
    match args.format {
        Format::Text => {
            for w in &compiled.warnings {
                warn(args.format, w);
            }
            println!("tape: {tape}");
            println!();
            print!("{}", render_listing(&spec, &compiled.trnas));
        }
        Format::Structured => {
            emit(&header("compile"));
            for w in &compiled.warnings {
                warn(args.format, w);
            }
            emit(&json!({ "type": "tape", "tape": tape.to_string(), "window": tape.window() }));
            for t in &compiled.trnas {
                let reads: Vec<Value> =
                    t.reads.iter().map(|r| json!({ "side": r.side, "fields": r.fields })).collect();
                emit(&json!({
                    "type": "trna",
                    "rule_id": t.rule_id,
                    "rule": spec.rules[t.rule_id - 1].to_string(),
                    "reads": reads,
                    "hole": t.hole,
                    "move": t.move_row(),
                    "write": t.write,
                }));
            }
        }
    }
    Ok(0)
}

fn cmd_run(args: &MachineArgs, arrival: ArrivalArg, seed: Option<u64>, max_steps: usize) -> CmdResult {
    if max_steps == 0 {
        return Err(Failure::input("--max-steps must be at least 1"));
    }
    let spec = load_tm(&args.spec)?;
    let codec = load_codec(&spec, &args.spec, args.codec.as_deref())?;
    if args.format == Format::Structured {
        emit(&header("run"));
    }
    let arrival = match (arrival, seed) {
        (ArrivalArg::Deterministic, Some(_)) => {
            warn(args.format, "--seed only applies to stochastic arrival; ignored");
            Arrival::Deterministic
        }
        (ArrivalArg::Deterministic, None) => Arrival::Deterministic,
        (ArrivalArg::Stochastic, seed) => Arrival::Stochastic { seed: seed.unwrap_or(0) },
    };
    let mut sim = SimInstance::from_spec(&spec, &codec, args.mode.into(), arrival)?;
    let (trace, outcome) = sim.run(max_steps)?;
    let decoded = sim.decoded()?;

    match args.format {
        Format::Text => {
            for e in &trace {
                let t = &sim.trnas()[e.rule_id - 1];
                let read = t.read(e.matched_side).map(|r| r.fields.to_string()).unwrap_or_default();
                println!("...{}...", e.tape_before);
                println!("  {read}");
                println!("  {}", t.move_row());
                println!("  {}", t.write);
                println!();
            }
            println!("...{}...", sim.tape());
            println!();
            println!("outcome: {}", if outcome == Outcome::Halted { "halted" } else { "step limit" });
            println!("steps: {}", sim.step_count());
            println!("trials: {}", sim.trial_count());
            println!("symbols: {}", decoded.symbol_string());
            match (&decoded.state, decoded.head_position()) {
                (Some(q), Some(h)) => println!("state: {q} at {h}"),
                _ => println!("state: halt"),
            }
        }
        Format::Structured => {
            for e in &trace {
                let mut v = serde_json::to_value(e).expect("trace events serialize");
                v["type"] = json!("step");
                emit(&v);
            }
            emit(&json!({
                "type": "result",
                "outcome": outcome,
                "steps": sim.step_count(),
                "trials": sim.trial_count(),
                "symbols": decoded.symbols,
                "origin": decoded.origin,
                "state": decoded.state,
                "head": decoded.head_position(),
            }));
        }
    }
    Ok(if outcome == Outcome::Halted { 0 } else { 3 })
}

fn report_verdict(label: &str, verdict: &Verdict, format: Format) {
    match (format, verdict) {
        (Format::Text, Verdict::Pass { steps, outcome }) => {
            let how = if *outcome == Outcome::Halted { "halted" } else { "step limit" };
            println!("{label}: PASS ({steps} steps, {how})");
        }
        (Format::Text, Verdict::Diverged(d)) => println!(
            "{label}: DIVERGED after {} steps: {} classical {} mechanical {}",
            d.step, d.field, d.classical, d.mechanical
        ),
        (Format::Structured, v) => emit(&json!({ "type": "verdict", "machine": label, "verdict": v })),
    }
}

struct VerifyArgs<'a> {
    mechanical: Option<&'a str>,
    codec: Option<&'a str>,
    mode: CompileMode,
}

fn cmd_verify(spec_arg: &str, args: &VerifyArgs<'_>, max_steps: usize, format: Format) -> CmdResult {
    let spec = load_tm(spec_arg)?;
    let codec = load_codec(&spec, spec_arg, args.codec)?;
    let mechanical = args.mechanical.map(load_tm).transpose()?;
    if format == Format::Structured {
        emit(&header("verify"));
    }
    let verdict = bisimulate_with(&spec, mechanical.as_ref().unwrap_or(&spec), &codec, args.mode, max_steps)?;
    report_verdict(spec_arg, &verdict, format);
    Ok(if verdict.is_pass() { 0 } else { 5 })
}

fn cmd_fuzz(count: usize, seed: u64, mode: CompileMode, max_steps: usize, format: Format) -> CmdResult {
    if format == Format::Structured {
        emit(&header("verify"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diverged = 0;
    for i in 0..count {
        let spec = random_machine(&mut rng);
        let codec = build_codec(&spec, None)?;
        let verdict = bisimulate(&spec, &codec, mode, max_steps)?;
        if !verdict.is_pass() {
            diverged += 1;
            report_verdict(&format!("fuzz #{i}"), &verdict, format);
            if format == Format::Text {
                print!("{}", codon_tm::serialize_machine_spec(&spec));
            }
        }
    }
    match format {
        Format::Text => println!("fuzz: {} of {count} machines passed", count - diverged),
        Format::Structured => emit(&json!({ "type": "summary", "machines": count, "diverged": diverged })),
    }
    Ok(if diverged == 0 { 0 } else { 5 })
}

fn cmd_fsm(spec_arg: &str, input: &str, codec: Option<&str>, format: Format) -> CmdResult {
    let spec = match load_machine(spec_arg)? {
        Machine::Fsm(f) => f,
        Machine::Tm(_) => return Err(Failure::input(format!("{spec_arg} is a Turing machine, use `run`"))),
    };
    let codec = load_codec(&spec, spec_arg, codec)?;
    let symbols = split_input(&spec, input);
    let run = fsm_run(&spec, &symbols, &codec).map_err(|e| match e {
        codon_tm::FsmError::Codec(c) => Failure::codec(c),
        other => Failure::input(other),
    })?;
    match format {
        Format::Text => {
            for s in &run.trace {
                println!("{}: {} rule {} -> {}", s.position, symbols[s.position], s.rule_id, s.state);
            }
            println!("final state: {}", run.final_state);
        }
        Format::Structured => {
            emit(&header("fsm"));
            for s in &run.trace {
                emit(&json!({ "type": "step", "position": s.position, "symbol": symbols[s.position],
                              "rule_id": s.rule_id, "state": s.state }));
            }
            emit(&json!({ "type": "result", "final_state": run.final_state }));
        }
    }
    Ok(0)
}

fn cmd_corpus(name: Option<&str>, codec: bool) -> CmdResult {
    let Some(name) = name else {
        for n in corpus_names() {
            let kind = match parse_spec(corpus_source(n).unwrap_or_default()) {
                Ok(Machine::Tm(m)) => format!("turing machine, {} rules", m.rules.len()),
                Ok(Machine::Fsm(f)) => format!("finite-state machine, {} transitions", f.transitions.len()),
                Err(e) => format!("unreadable: {e}"),
            };
            let shipped = if builtin_codec(n).is_some() { ", ships a codec" } else { "" };
            println!("{n}: {kind}{shipped}");
        }
        return Ok(0);
    };
    let source = corpus_source(name).ok_or_else(|| Failure::input(format!("no corpus machine `{name}`")))?;
    if codec {
        let overrides = builtin_codec(name).ok_or_else(|| Failure::codec(format!("`{name}` ships no codec")))?;
        print!("{}", codon_tm::serialize_codec_overrides(&overrides));
    } else {
        print!("{source}");
    }
    Ok(0)
}
