use std::path::PathBuf;
use std::process::{Command, Output};

fn codon_tm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codon-tm"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn compile_unary_adder_matches_golden_listing() {
    let o = codon_tm(&["compile", "unary_adder", "--mode", "inferred"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("compile_unary_adder_inferred.txt"));
}

#[test]
fn compile_utm_matches_golden_listing() {
    let o = codon_tm(&["compile", "utm55", "--mode", "dual", "--codec", "utm55.codec"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("compile_utm55_dual.txt"));
    // The shipped codec is the default for the corpus machine.
    assert_eq!(stdout(&codon_tm(&["compile", "utm55"])), golden("compile_utm55_dual.txt"));
}

#[test]
fn run_unary_adder_mirrors_the_trace() {
    let o = codon_tm(&["run", "unary_adder", "--mode", "inferred"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("run_unary_adder_inferred.txt"));
}

#[test]
fn step_limit_exits_three() {
    let o = codon_tm(&["run", "unary_adder", "--max-steps", "2"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("outcome: step limit"));
}

#[test]
fn seeded_stochastic_runs_repeat() {
    let args = ["run", "utm55", "--arrival", "stochastic", "--seed", "7", "--format", "structured"];
    let (a, b) = (codon_tm(&args), codon_tm(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let other = codon_tm(&["run", "utm55", "--arrival", "stochastic", "--seed", "8", "--format", "structured"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn structured_output_is_versioned_json_lines() {
    let o = codon_tm(&["run", "unary_adder", "--format", "structured"]);
    let lines: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).expect("one JSON record per line")).collect();
    assert_eq!(lines[0]["format"], "codon-tm");
    assert_eq!(lines[0]["version"], 1);
    let steps: Vec<_> = lines.iter().filter(|l| l["type"] == "step").collect();
    assert_eq!(steps.len(), 6);
    assert_eq!(steps[0]["rule_id"], 1);
    assert_eq!(steps[4]["matched_side"], "StateOnRight");
    let result = lines.last().unwrap();
    assert_eq!(result["outcome"], "Halted");
    assert_eq!(result["symbols"].as_array().unwrap().len(), 6);
}

#[test]
fn seed_without_stochastic_arrival_warns() {
    let o = codon_tm(&["run", "unary_adder", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn verify_corpus_machines() {
    let o = codon_tm(&["verify", "utm55", "--mode", "dual"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("utm55: PASS"));
    let o = codon_tm(&["verify", "unary_adder", "--mode", "inferred"]);
    assert_eq!(stdout(&o), "unary_adder: PASS (6 steps, halted)\n");
}

#[test]
fn verify_reports_a_planted_fault() {
    let o = codon_tm(&["verify", "unary_adder", "--mechanical", "tests/fixtures/corrupted_adder.spec"]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).contains("DIVERGED after 4 steps"), "{}", stdout(&o));

    let o = codon_tm(&[
        "verify",
        "unary_adder",
        "--mechanical",
        "tests/fixtures/corrupted_adder.spec",
        "--format",
        "structured",
    ]);
    let last: serde_json::Value = serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    assert_eq!(last["verdict"]["Diverged"]["step"], 4);
}

#[test]
fn verify_fuzz() {
    let o = codon_tm(&["verify", "--fuzz", "25", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "fuzz: 25 of 25 machines passed\n");
}

#[test]
fn fsm_parity() {
    let o = codon_tm(&["fsm", "parity", "110"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0: 1 rule 2 -> B\n1: 1 rule 4 -> A\n2: 0 rule 1 -> A\nfinal state: A\n");
    assert_eq!(stdout(&codon_tm(&["fsm", "parity", ""])), "final state: A\n");
    assert!(stdout(&codon_tm(&["fsm", "parity", "1"])).ends_with("final state: B\n"));
}

#[test]
fn fsm_rejects_undeclared_input_and_turing_machines() {
    assert_eq!(code(&codon_tm(&["fsm", "parity", "102"])), 1);
    assert_eq!(code(&codon_tm(&["fsm", "unary_adder", "01"])), 1);
    assert_eq!(code(&codon_tm(&["run", "parity"])), 1);
}

#[test]
fn input_errors_exit_one() {
    let o = codon_tm(&["compile", "tests/fixtures/bad_move.spec"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(code(&codon_tm(&["compile", "no_such_machine"])), 1);
    assert_eq!(code(&codon_tm(&["compile", "--bogus"])), 1);
}

#[test]
fn codec_errors_exit_two() {
    let o = codon_tm(&["compile", "unary_adder", "--codec", "tests/fixtures/odd_symbols.codec"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("even length"));
    assert_eq!(code(&codon_tm(&["compile", "unary_adder", "--codec", "missing.codec"])), 2);
}

#[test]
fn corpus_listing() {
    let o = codon_tm(&["corpus"]);
    assert_eq!(
        stdout(&o),
        "incrementer: turing machine, 6 rules\n\
         parity: finite-state machine, 4 transitions\n\
         unary_adder: turing machine, 6 rules\n\
         utm55: turing machine, 25 rules, ships a codec\n"
    );
    assert!(stdout(&codon_tm(&["corpus", "unary_adder"])).contains("rule: q3 0 0 H -"));
    assert!(stdout(&codon_tm(&["corpus", "utm55", "--codec"])).contains("symbol d 001110"));
    assert_eq!(code(&codon_tm(&["corpus", "nope"])), 1);
}
