//! Fixture presentations and inputs shared by the benchmarks.

use fibre_core::{canonical_setup, random_instances, Instance, Presentation, SearchBudget, Strategy, StrategyKind, StrategySpec, Word};

pub const CYCLIC: &str = "generators: a b\nrelators: b";
pub const TORSION: &str = "generators: a\nrelators: aaa";
pub const TORUS: &str = "generators: a b\nrelators: abAB";
pub const GENUS_TWO: &str = "generators: a b c d\nrelators: abABcdCD";

pub fn presentation(text: &str) -> Presentation {
    text.parse().expect("fixture presentations parse")
}

pub fn strategy(pres: &Presentation, kind: StrategyKind) -> Strategy {
    Strategy::new(pres, StrategySpec::new(kind)).expect("fixture strategies apply")
}

pub fn word(text: &str) -> Word {
    text.parse().expect("fixture words parse")
}

/// The first `n` seeded conjugacy instances over `pres`.
pub fn instances(pres: &Presentation, seed: u64, n: usize) -> Vec<Instance> {
    let setup = canonical_setup(pres);
    random_instances(&setup, &SearchBudget { seed, ..SearchBudget::default() }, 0.5).take(n).collect()
}
