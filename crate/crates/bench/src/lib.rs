//! Shared inputs for the benchmarks.

use gossip_core::designs::{load_design, projective_plane};
use gossip_core::gossip::{from_design, GossipCode, SymbolOrder};
use gossip_core::repro::FANO;
use gossip_core::traceability::{ts_from_cyclic, ts_to_gossip};
use gossip_core::tracing::{make_pirate_word, Coalition, PirateWord, Strategy, StrategyKind};

pub fn fano_code() -> GossipCode {
    from_design(&load_design(FANO, false).expect("fixture loads")).expect("Fano code")
}

pub fn cyclic21_code() -> GossipCode {
    let ts = ts_from_cyclic(&[3, 6, 7, 12, 14], 21).expect("cyclic scheme");
    ts_to_gossip(&ts, 2, SymbolOrder::Development).expect("shortest code")
}

/// The code of the projective plane of order `p`.
pub fn plane_code(p: u64) -> GossipCode {
    from_design(&projective_plane(p).expect("prime order")).expect("plane code")
}

/// A pirate word from the first `size` users.
pub fn pirate_word(code: &GossipCode, size: usize, kind: StrategyKind, seed: u64) -> PirateWord {
    let w = Coalition::new(1..=size as u32, code.m()).expect("valid coalition");
    make_pirate_word(code, &w, &mut Strategy::new(kind), seed)
        .expect("in model")
        .word
}
