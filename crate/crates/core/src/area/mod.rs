//! Products of conjugates of relators, their area and noise, and minimal
//! area search.

mod dehn;
mod peel;
mod search;

pub use dehn::{dehn_function, rel_cyclics_dehn, DehnValue, RelCyclicsValue};
pub use search::{area_bounded, AreaResult, AreaSearch};

use std::fmt;

use crate::error::CoreError;
use crate::presentation::Presentation;
use crate::word::{free_reduce, Word};

/// One factor `θ⁻¹ r θ` of a product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub theta: Word,
    pub relator: Word,
}

impl Factor {
    pub fn new(theta: Word, relator: Word) -> Self {
        Factor { theta, relator }
    }

    pub fn value(&self) -> Word {
        self.relator.conjugate_by(&self.theta)
    }
}

/// `∏ θᵢ⁻¹ rᵢ θᵢ` with each `rᵢ ∈ R ∪ R⁻¹`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VanKampenProduct {
    pub factors: Vec<Factor>,
}

impl VanKampenProduct {
    pub fn new(factors: Vec<Factor>) -> Self {
        VanKampenProduct { factors }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The number of factors.
    pub fn area(&self) -> usize {
        self.factors.len()
    }

    /// `Σ |θᵢ θᵢ₊₁⁻¹|` for `i = 0..=M`, with `θ₀ = θ_{M+1} = 1`.
    pub fn noise(&self) -> usize {
        let empty = Word::empty();
        let thetas: Vec<&Word> = std::iter::once(&empty)
            .chain(self.factors.iter().map(|f| &f.theta))
            .chain(std::iter::once(&empty))
            .collect();
        thetas
            .windows(2)
            .map(|p| p[0].mul(&p[1].inverse()).len())
            .sum()
    }

    /// Reduced value of the product, without checking the relators.
    pub fn value(&self) -> Word {
        free_reduce(self.factors.iter().flat_map(|f| {
            let inv = f.theta.inverse();
            inv.into_letters()
                .into_iter()
                .chain(f.relator.letters().iter().copied())
                .chain(f.theta.letters().iter().copied())
        }))
    }

    /// Product for `u · value · u⁻¹`.
    pub fn conjugated_by_inverse(&self, u: &Word) -> VanKampenProduct {
        let u_inv = u.inverse();
        VanKampenProduct {
            factors: self
                .factors
                .iter()
                .map(|f| Factor::new(f.theta.mul(&u_inv), f.relator.clone()))
                .collect(),
        }
    }

    /// Product for `value⁻¹`.
    pub fn inverse(&self) -> VanKampenProduct {
        VanKampenProduct {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| Factor::new(f.theta.clone(), f.relator.inverse()))
                .collect(),
        }
    }

    pub fn extend(&mut self, other: VanKampenProduct) {
        self.factors.extend(other.factors);
    }
}

impl fmt::Display for VanKampenProduct {
    /// One `(theta; relator)` pair per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "({}; {})", fac.theta, fac.relator)?;
        }
        Ok(())
    }
}

/// Evaluates a product after checking every `rᵢ` against `pres`.
pub fn evaluate_vk_product(prod: &VanKampenProduct, pres: &Presentation) -> Result<Word, CoreError> {
    for (index, f) in prod.factors.iter().enumerate() {
        pres.check_word(&f.theta)?;
        if !pres.is_relator_or_inverse(&f.relator) {
            return Err(CoreError::NotARelator { index, relator: f.relator.to_string() });
        }
    }
    Ok(prod.value())
}

/// Parses the `(theta; relator)` line format written by `Display`.
pub fn parse_vk_product(text: &str) -> Result<VanKampenProduct, CoreError> {
    let mut factors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || CoreError::BadCertificate(format!("line {}: expected `(theta; relator)`", i + 1));
        let inner = line.strip_prefix('(').and_then(|l| l.strip_suffix(')')).ok_or_else(bad)?;
        let (t, r) = inner.split_once(';').ok_or_else(bad)?;
        let theta: Word = t.trim().parse().map_err(|_| bad())?;
        let relator: Word = r.trim().parse().map_err(|_| bad())?;
        factors.push(Factor::new(theta, relator));
    }
    Ok(VanKampenProduct::new(factors))
}
