//! Random small Turing machines for differential testing.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::machine::{MachineSpec, Move, Rule};

const SYMBOLS: [&str; 3] = ["0", "1", "2"];

/// A deterministic machine with at most 4 states and 3 symbols, a partial
/// rule table holding at least one Halt rule, and a tape of 1 to 8 cells.
pub fn random_machine<R: Rng + ?Sized>(rng: &mut R) -> MachineSpec {
    let num_states = rng.random_range(1..=4);
    let num_symbols = rng.random_range(1..=3);
    let states: Vec<String> = (1..=num_states).map(|i| format!("q{i}")).collect();
    let symbols: Vec<String> = SYMBOLS[..num_symbols].iter().map(|s| s.to_string()).collect();

    let mut rules = Vec::new();
    for q in &states {
        for s in &symbols {
            if rng.random_bool(0.15) {
                continue;
            }
            let write = symbols.choose(rng).unwrap();
            let direction = match rng.random_range(0..10) {
                0 => Move::Halt,
                1..=5 => Move::Right,
                _ => Move::Left,
            };
            let next = (direction != Move::Halt).then(|| states.choose(rng).unwrap().as_str());
            rules.push(Rule::new(q, s, write, direction, next));
        }
    }
    if !rules.iter().any(|r| r.direction == Move::Halt) {
        if rules.is_empty() {
            rules.push(Rule::new(&states[0], &symbols[0], &symbols[0], Move::Halt, None));
        } else {
            let i = rng.random_range(0..rules.len());
            rules[i].direction = Move::Halt;
            rules[i].next_state = None;
        }
    }

    let len = rng.random_range(1..=8);
    let tape: Vec<String> = (0..len).map(|_| symbols.choose(rng).unwrap().clone()).collect();
    MachineSpec {
        default_symbol: symbols.choose(rng).unwrap().clone(),
        initial_state: states[0].clone(),
        head: rng.random_range(0..len),
        symbols,
        states,
        rules,
        tape,
    }
}
