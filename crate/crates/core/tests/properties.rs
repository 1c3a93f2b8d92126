use std::collections::HashSet;

use codon_tm::fuzz::random_machine;
use codon_tm::{
    bisimulate, build_codec, builtin_codec, builtin_corpus, compile_ruleset, decode_tape, encode_tape,
    enumerate_balanced, fsm_oracle, fsm_run, parse_machine_spec, read_form, serialize_machine_spec, Arrival,
    CompileMode, Codon, Edge, Machine, MachineSpec, Move, Side, SimInstance, Verdict,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn machine(seed: u64) -> MachineSpec {
    random_machine(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #[test]
    fn complement_is_an_involution(n in 1usize..=64, bits: u64) {
        let c = Codon::new(bits, n).unwrap();
        prop_assert_eq!(read_form(read_form(c)), c);
        prop_assert_eq!(c.count_ones() + read_form(c).count_ones(), n as u32);
    }

    #[test]
    fn balanced_read_forms_are_never_zero(n in 1usize..=12) {
        for c in enumerate_balanced(n).unwrap() {
            prop_assert!(read_form(c).count_ones() > 0);
            prop_assert!(!c.is_all_ones() || n == 1);
        }
    }

    #[test]
    fn spec_text_round_trips(seed: u64) {
        let spec = machine(seed);
        let text = serialize_machine_spec(&spec);
        prop_assert_eq!(parse_machine_spec(&text).unwrap(), spec);
    }

    #[test]
    fn encode_decode_round_trips(seed: u64) {
        let spec = machine(seed);
        let codec = build_codec(&spec, None).unwrap();
        let tape = encode_tape(&spec, &codec).unwrap();
        prop_assert_eq!(tape.occupied_slots(), vec![spec.head]);
        let d = decode_tape(&tape, &codec).unwrap();
        prop_assert_eq!(d.symbols, spec.tape.clone());
        prop_assert_eq!(d.state, Some(spec.initial_state.clone()));
        prop_assert_eq!(d.head, Some(spec.head));
    }

    #[test]
    fn growth_keeps_the_head_and_adds_blanks(seed: u64, edges in prop::collection::vec(any::<bool>(), 0..40)) {
        let spec = machine(seed);
        let codec = build_codec(&spec, None).unwrap();
        let blank = codec.symbol(&spec.default_symbol).unwrap();
        let mut tape = encode_tape(&spec, &codec).unwrap();
        let before = decode_tape(&tape, &codec).unwrap();
        for &left in &edges {
            tape = tape.grow(if left { Edge::Left } else { Edge::Right }, blank);
        }
        let after = decode_tape(&tape, &codec).unwrap();
        let lefts = edges.iter().filter(|l| **l).count();
        prop_assert_eq!(after.symbols.len(), before.symbols.len() + edges.len());
        prop_assert_eq!(after.origin, -(lefts as i64));
        prop_assert_eq!(after.head_position(), before.head_position());
        prop_assert_eq!(&after.symbols[lefts..lefts + before.symbols.len()], &before.symbols[..]);
        prop_assert_eq!(tape.occupied_slots().len(), 1);
    }

    #[test]
    fn read_rows_are_distinct_and_holes_mark_left_moves(seed: u64) {
        let spec = machine(seed);
        let codec = build_codec(&spec, None).unwrap();
        let compiled = compile_ruleset(&spec, &codec, CompileMode::Dual).unwrap();
        let mut seen = HashSet::new();
        for t in &compiled.trnas {
            let rule = &spec.rules[t.rule_id - 1];
            prop_assert_eq!(t.hole, rule.direction == Move::Left);
            for r in &t.reads {
                prop_assert!(seen.insert(r.fields));
                let zero = match r.side {
                    Side::StateOnLeft => r.fields.right,
                    Side::StateOnRight => r.fields.left,
                };
                prop_assert_eq!(zero.count_ones(), 0);
            }
            let halt = codec.halt();
            match rule.direction {
                Move::Left => prop_assert_eq!(t.write.right, halt),
                Move::Right => prop_assert_eq!(t.write.left, halt),
                Move::Halt => prop_assert_eq!((t.write.left, t.write.right), (halt, halt)),
            }
        }
    }

    #[test]
    fn dual_mode_bisimulates(seed: u64) {
        let spec = machine(seed);
        let codec = build_codec(&spec, None).unwrap();
        let verdict = bisimulate(&spec, &codec, CompileMode::Dual, 500).unwrap();
        prop_assert!(verdict.is_pass(), "{:?}", verdict);
    }

    #[test]
    fn arrival_mode_does_not_change_the_rule_sequence(seed: u64, rng_seed: u64) {
        let spec = machine(seed);
        let codec = build_codec(&spec, None).unwrap();
        let rules = |arrival| {
            let mut sim = SimInstance::from_spec(&spec, &codec, CompileMode::Dual, arrival).unwrap();
            let (trace, outcome) = sim.run(200).unwrap();
            (trace.iter().map(|e| e.rule_id).collect::<Vec<_>>(), outcome)
        };
        prop_assert_eq!(rules(Arrival::Deterministic), rules(Arrival::Stochastic { seed: rng_seed }));
    }

    #[test]
    fn window_moves_by_the_hole(seed: u64) {
        let spec = machine(seed);
        let codec = build_codec(&spec, None).unwrap();
        let mut sim = SimInstance::from_spec(&spec, &codec, CompileMode::Dual, Arrival::Deterministic).unwrap();
        for _ in 0..100 {
            let before = sim.tape().origin() + sim.tape().window() as i64;
            let Some(e) = sim.step().unwrap() else { break };
            let after = sim.tape().origin() + sim.tape().window() as i64;
            let hole = sim.trnas()[e.rule_id - 1].hole;
            prop_assert_eq!(after - before, if hole { -1 } else { 1 });
            prop_assert!(sim.tape().occupied_slots().len() <= 1);
        }
    }

    #[test]
    fn parity_matches_counting(input in "[01]{0,64}") {
        let Some(Machine::Fsm(spec)) = builtin_corpus().remove("parity") else { unreachable!() };
        let codec = build_codec(&spec, None).unwrap();
        let symbols: Vec<String> = input.chars().map(String::from).collect();
        let run = fsm_run(&spec, &symbols, &codec).unwrap();
        prop_assert_eq!(run.trace.len(), symbols.len());
        prop_assert_eq!(&run.final_state, &fsm_oracle(&spec, &symbols).unwrap());
        let even = input.matches('1').count() % 2 == 0;
        prop_assert_eq!(run.final_state, if even { "A" } else { "B" });
    }
}

#[test]
fn corpus_machines_bisimulate_in_both_modes() {
    for name in ["incrementer", "unary_adder", "utm55"] {
        let Some(Machine::Tm(spec)) = builtin_corpus().remove(name) else { unreachable!() };
        let codec = build_codec(&spec, builtin_codec(name).as_ref()).unwrap();
        for mode in [CompileMode::Dual, CompileMode::Inferred] {
            let verdict = bisimulate(&spec, &codec, mode, 10_000).unwrap();
            assert!(matches!(verdict, Verdict::Pass { .. }), "{name} {mode:?}: {verdict:?}");
        }
    }
}

#[test]
fn fuzz_machines_do_real_work() {
    // Guards against a generator that only produces machines halting at once.
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let steps: Vec<usize> = (0..100)
        .map(|_| {
            let spec = random_machine(&mut rng);
            let codec = build_codec(&spec, None).unwrap();
            match bisimulate(&spec, &codec, CompileMode::Dual, 500).unwrap() {
                Verdict::Pass { steps, .. } => steps,
                Verdict::Diverged(d) => panic!("{d:?}"),
            }
        })
        .collect();
    assert!(steps.iter().filter(|&&s| s >= 3).count() >= 30, "{steps:?}");
    assert!(steps.contains(&500), "no machine reached the step limit");
}
