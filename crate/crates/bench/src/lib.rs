//! Shared fixtures for the benchmarks in `benches/`.

use codon_tm::{build_codec, builtin_codec, builtin_corpus, Codec, Machine, MachineSpec};

/// A corpus Turing machine with the codec it ships with (or the default one).
pub fn corpus_tm(name: &str) -> (MachineSpec, Codec) {
    let Some(Machine::Tm(spec)) = builtin_corpus().remove(name) else {
        panic!("`{name}` is not a corpus Turing machine");
    };
    let codec = build_codec(&spec, builtin_codec(name).as_ref()).expect("corpus codec builds");
    (spec, codec)
}
