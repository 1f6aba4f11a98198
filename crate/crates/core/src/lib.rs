//! Decision procedures for fibre products of free groups over a finitely
//! presented quotient, with certificates.
//!
//! Words are written over lowercase generators with uppercase inverses, and
//! `1` for the empty word.

pub mod area;
pub mod error;
pub mod oracle;
pub mod perturb;
pub mod presentation;
pub mod reference;
pub mod subdirect;
pub mod word;

pub use area::{
    area_bounded, dehn_function, evaluate_vk_product, parse_vk_product, rel_cyclics_dehn, AreaResult,
    AreaSearch, DehnValue, Factor, RelCyclicsValue, VanKampenProduct,
};
pub use error::{CoreError, PresentationParseError, WordParseError};
pub use oracle::{
    check_c16, dehn_greedy, AbelianModel, Decision, Obstruction, PowerDecision, PowerOracle, RelCyclicsBound,
    Strategy, StrategyKind, StrategySpec, WordOracle,
};
pub use perturb::{kernel_witness, minimal_q_rep, power_avoid, PerturbConfig, PerturbOutcome, PerturbResult};
pub use presentation::Presentation;
pub use reference::{
    brute_area, brute_p_conjugacy, brute_power, random_instances, random_words, BruteConjugacy, Instance,
    InstanceKind, InstanceStream, SearchBudget, VerifySummary,
};
pub use subdirect::{
    canonical_setup, p_conjugacy, p_generators, p_membership, verify_conjugator, Branch, ConjugacyResult,
    ConjugacyTrace, ConjugacyVerdict, KernelSymbol, PairElement, Side, SubdirectSetup,
};
pub use word::{cyclic_reduce, free_conjugator, free_reduce, is_proper_power, primitive_root, Letter, RootDecomposition, Word};
