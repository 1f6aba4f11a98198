//! Rewriting a word, without changing its image in `Q`, into either a short
//! exceptional word or a word that is not a proper power (so generates its
//! own centralizer in `F`).
//!
//! The word is first replaced by a shortest representative `w₀` of its
//! image. Long representatives are then multiplied by powers `ã^K` of a
//! fixed kernel element, trying `K` upwards until the product is certified
//! primitive.

use crate::area::VanKampenProduct;
use crate::error::CoreError;
use crate::oracle::{Decision, Strategy};
use crate::subdirect::SubdirectSetup;
use crate::word::{ball_size, is_proper_power, primitive_root, reduced_words, RootDecomposition, Word};

/// Largest free-group ball searched for a shortest representative.
pub const DEFAULT_MAX_BALL: u128 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbConfig {
    /// Representatives shorter than this are returned as exceptional.
    pub threshold: usize,
    pub k_start: u32,
    pub k_max: u32,
    /// Defaults to the shortlex-least shortest nonempty trivial word.
    pub kernel_witness: Option<Word>,
    pub max_ball: u128,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        PerturbConfig { threshold: 1, k_start: 1, k_max: 8, kernel_witness: None, max_ball: DEFAULT_MAX_BALL }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PerturbOutcome {
    Exceptional(Word),
    Perturbed { word: Word, k: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbResult {
    pub input: Word,
    pub representative: Word,
    pub outcome: PerturbOutcome,
    /// A product for `input · output⁻¹`.
    pub equality: VanKampenProduct,
    /// For a perturbed output, its root decomposition with exponent 1.
    pub primitivity: Option<RootDecomposition>,
}

impl PerturbResult {
    pub fn output(&self) -> &Word {
        match &self.outcome {
            PerturbOutcome::Exceptional(w) => w,
            PerturbOutcome::Perturbed { word, .. } => word,
        }
    }

    /// Checks the equality certificate and, for perturbed outputs, that the
    /// output is nonempty and not a proper power.
    pub fn verify(&self, strat: &Strategy) -> Result<(), CoreError> {
        let target = self.input.mul(&self.output().inverse());
        strat.check_decision(&target, &Decision::Yes(self.equality.clone()))?;
        if let PerturbOutcome::Perturbed { word, .. } = &self.outcome {
            if word.is_empty() || is_proper_power(word)? {
                return Err(CoreError::BadCertificate(format!("{word} is a proper power")));
            }
            match &self.primitivity {
                Some(r) if r.exponent == 1 && r.root == *word => {}
                _ => return Err(CoreError::BadCertificate("missing primitivity witness".into())),
            }
        }
        Ok(())
    }
}

fn certified_equal(u: &Word, v: &Word, strat: &Strategy) -> Result<Option<VanKampenProduct>, CoreError> {
    match strat.q_equal(u, v)? {
        Decision::Yes(p) => Ok(Some(p)),
        Decision::No(_) => Ok(None),
        Decision::Unknown(e) => Err(CoreError::Undecided(format!("{u} = {v}: {}", e.reason))),
    }
}

/// The shortlex-least shortest reduced word equal to `w` in `Q`.
pub fn minimal_q_rep(w: &Word, setup: &SubdirectSetup, strat: &Strategy) -> Result<Word, CoreError> {
    minimal_q_rep_within(w, setup, strat, DEFAULT_MAX_BALL)
}

fn minimal_q_rep_within(w: &Word, setup: &SubdirectSetup, strat: &Strategy, max_ball: u128) -> Result<Word, CoreError> {
    let gens = setup.presentation().generators();
    setup.presentation().check_word(w)?;
    let size = ball_size(gens.len(), w.len());
    if size > max_ball {
        return Err(CoreError::Undecided(format!("the ball of radius {} has {size} words", w.len())));
    }
    for len in 0..w.len() {
        for x in reduced_words(gens, len) {
            if certified_equal(&x, w, strat)?.is_some() {
                return Ok(x);
            }
        }
    }
    // nothing shorter; the least word of the same length
    for x in reduced_words(gens, w.len()) {
        if x == *w || certified_equal(&x, w, strat)?.is_some() {
            return Ok(x);
        }
    }
    unreachable!("w itself has length |w|")
}

/// The shortlex-least shortest nonempty reduced word trivial in `Q`.
pub fn kernel_witness(setup: &SubdirectSetup, strat: &Strategy) -> Result<Word, CoreError> {
    let pres = setup.presentation();
    if pres.is_free() {
        return Err(CoreError::TrivialKernel);
    }
    // every relator is trivial, so the search stops by the shortest one
    for len in 1..=pres.relators().iter().map(Word::len).min().unwrap() {
        for x in reduced_words(pres.generators(), len) {
            match strat.wp_decide(&x)? {
                Decision::Yes(_) => return Ok(x),
                Decision::No(_) => {}
                Decision::Unknown(e) => return Err(CoreError::Undecided(format!("{x}: {}", e.reason))),
            }
        }
    }
    unreachable!("relators are trivial")
}

/// Replaces `w` by `w₀ = minimal_q_rep(w)`, then returns `w₀` itself when
/// `|w₀| < N`, and otherwise the first `w₀·ã^K` that is not a proper power.
pub fn power_avoid(
    w: &Word,
    cfg: &PerturbConfig,
    setup: &SubdirectSetup,
    strat: &Strategy,
) -> Result<PerturbResult, CoreError> {
    let w0 = minimal_q_rep_within(w, setup, strat, cfg.max_ball)?;
    if w0.len() < cfg.threshold {
        let equality = certified_equal(w, &w0, strat)?.expect("w0 represents w");
        return Ok(PerturbResult {
            input: w.clone(),
            representative: w0.clone(),
            outcome: PerturbOutcome::Exceptional(w0),
            equality,
            primitivity: None,
        });
    }
    let a = match &cfg.kernel_witness {
        Some(a) => {
            if a.is_empty() || !strat.wp_decide(a)?.is_yes() {
                return Err(CoreError::InvalidPresentation(format!("{a} is not a certified nontrivial kernel element")));
            }
            a.clone()
        }
        None => kernel_witness(setup, strat)?,
    };
    for k in cfg.k_start..=cfg.k_max {
        let cand = w0.mul(&a.pow(k as i64));
        if cand.is_empty() || is_proper_power(&cand)? {
            continue;
        }
        let equality = certified_equal(w, &cand, strat)?.ok_or_else(|| {
            CoreError::BadCertificate(format!("{cand} differs from {w} in Q"))
        })?;
        let root = primitive_root(&cand)?;
        return Ok(PerturbResult {
            input: w.clone(),
            representative: w0,
            outcome: PerturbOutcome::Perturbed { word: cand, k },
            equality,
            primitivity: Some(root),
        });
    }
    Err(CoreError::PerturbationExhausted { word: w.to_string(), k_start: cfg.k_start, k_max: cfg.k_max })
}
