//! Exact area by peeling boundary faces.
//!
//! A nonempty cyclically reduced word bounding a van Kampen diagram has a
//! boundary edge lying on a 2-cell. Removing that cell replaces the edge's
//! letter `x` by `b⁻¹`, where `x·b` is a rotation of a relator or its
//! inverse, and leaves a diagram with one cell fewer. So
//! `Area(u·x·v) ≤ k` iff some such replacement has area `≤ k − 1`.

use std::collections::HashMap;

use super::{Factor, VanKampenProduct};
use crate::presentation::Presentation;
use crate::word::{cyclic_reduce, free_reduce, Letter, Word};

pub(super) struct Peeler<'p> {
    /// `(first letter, rest⁻¹, relator, offset)` per rotation of `R ∪ R⁻¹`.
    rotations: Vec<(Letter, Vec<Letter>, Word, usize)>,
    /// Cyclic class → largest `k` known to be infeasible.
    infeasible: HashMap<Word, usize>,
    steps: u64,
    budget: Option<u64>,
    pub(super) out_of_budget: bool,
    _pres: &'p Presentation,
}

/// Least rotation of the cyclic core or of its inverse.
fn class(core: &Word) -> Word {
    let inv = core.inverse();
    (0..core.len().max(1))
        .flat_map(|k| [core.rotate(k), inv.rotate(k)])
        .min()
        .unwrap_or_default()
}

impl<'p> Peeler<'p> {
    pub(super) fn new(pres: &'p Presentation, budget: Option<u64>) -> Self {
        let mut rotations = Vec::new();
        for r in pres.symmetric_relators() {
            for k in 0..r.len() {
                let rho = r.rotate(k);
                let rest_inv = rho.suffix_from(1).inverse().into_letters();
                rotations.push((rho.letters()[0], rest_inv, r.clone(), k));
            }
        }
        Peeler { rotations, infeasible: HashMap::new(), steps: 0, budget, out_of_budget: false, _pres: pres }
    }

    pub(super) fn steps(&self) -> u64 {
        self.steps
    }

    /// A product of at most `k` factors equal to `w`, if one exists.
    pub(super) fn solve(&mut self, w: &Word, k: usize) -> Option<VanKampenProduct> {
        if w.is_empty() {
            return Some(VanKampenProduct::empty());
        }
        if k == 0 || self.out_of_budget {
            return None;
        }
        self.steps += 1;
        if self.budget.is_some_and(|b| self.steps > b) {
            self.out_of_budget = true;
            return None;
        }
        let (core, c) = cyclic_reduce(w);
        let key = class(&core);
        if self.infeasible.get(&key).is_some_and(|&m| m >= k) {
            return None;
        }
        let letters = core.letters();
        for i in 0..letters.len() {
            for ri in 0..self.rotations.len() {
                if self.rotations[ri].0 != letters[i] {
                    continue;
                }
                let next = free_reduce(
                    letters[..i]
                        .iter()
                        .chain(&self.rotations[ri].1)
                        .chain(&letters[i + 1..])
                        .copied(),
                );
                if let Some(rest) = self.solve(&next, k - 1) {
                    // core = (u ρ u⁻¹)·next with u = core[..i] and
                    // ρ = s⁻¹ r s, s = r[..offset]
                    let (_, _, r, off) = &self.rotations[ri];
                    let u = core.prefix(i);
                    let mut prod = VanKampenProduct::new(vec![Factor::new(r.prefix(*off).mul(&u.inverse()), r.clone())]);
                    prod.extend(rest);
                    // w = c⁻¹·core·c
                    return Some(prod.conjugated_by_inverse(&c.inverse()));
                }
                if self.out_of_budget {
                    return None;
                }
            }
        }
        let e = self.infeasible.entry(key).or_insert(0);
        *e = (*e).max(k);
        None
    }
}
