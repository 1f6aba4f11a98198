//! The metric small cancellation condition C′(1/6) and Dehn's algorithm.

use crate::area::{Factor, VanKampenProduct};
use crate::presentation::Presentation;
use crate::word::{free_reduce, Letter, Word};

/// Every cyclic rotation of every `r ∈ R ∪ R⁻¹`, with its source relator and
/// offset, so that `rotation = relator[offset..] · relator[..offset]`.
fn symmetrized(pres: &Presentation) -> Vec<(Word, Word, usize)> {
    let mut out = Vec::new();
    for r in pres.symmetric_relators() {
        for k in 0..r.len() {
            out.push((r.rotate(k), r.clone(), k));
        }
    }
    out
}

fn lcp(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Whether every piece is shorter than a sixth of each relator containing it.
///
/// A piece is a common prefix of two entries of the symmetrized relator list
/// at distinct indices, so a proper power (or a relator repeated up to
/// rotation and inversion) contributes a whole relator as a piece.
pub fn check_c16(pres: &Presentation) -> bool {
    let sym = symmetrized(pres);
    for i in 0..sym.len() {
        for j in 0..sym.len() {
            if i == j {
                continue;
            }
            let piece = lcp(sym[i].0.letters(), sym[j].0.letters());
            if 6 * piece >= sym[i].0.len() {
                return false;
            }
        }
    }
    true
}

/// One rewrite `w_old = u·a·v ↦ u·b⁻¹·v`, where `a·b` is `rotation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnStep {
    pub position: usize,
    pub matched: usize,
    pub rotation: Word,
    /// The element of `R ∪ R⁻¹` that `rotation` rotates, and the offset.
    pub relator: Word,
    pub offset: usize,
    pub before: Word,
    pub after: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnReduction {
    pub input: Word,
    pub result: Word,
    pub steps: Vec<DehnStep>,
}

impl DehnReduction {
    /// A product for `input · result⁻¹`.
    ///
    /// Each step satisfies `before = (u·ρ·u⁻¹)·after` with `u` the prefix
    /// before the match, and `ρ = s⁻¹·r·s` where `s = r[..offset]`.
    pub fn to_vk_product(&self) -> VanKampenProduct {
        let factors = self
            .steps
            .iter()
            .map(|st| {
                let u = st.before.prefix(st.position);
                let s = st.relator.prefix(st.offset);
                Factor::new(s.mul(&u.inverse()), st.relator.clone())
            })
            .collect();
        VanKampenProduct::new(factors)
    }

    /// Re-runs every step and checks it against the recorded words.
    pub fn replay(&self) -> bool {
        let mut cur = self.input.clone();
        for st in &self.steps {
            if st.before != cur || st.relator.rotate(st.offset) != st.rotation {
                return false;
            }
            let letters = cur.letters();
            let end = st.position + st.matched;
            if end > letters.len()
                || 2 * st.matched <= st.rotation.len()
                || letters[st.position..end] != st.rotation.letters()[..st.matched]
            {
                return false;
            }
            let b_inv = st.rotation.suffix_from(st.matched).inverse();
            let next = free_reduce(
                letters[..st.position]
                    .iter()
                    .chain(b_inv.letters())
                    .chain(&letters[end..])
                    .copied(),
            );
            if next != st.after || next.len() >= cur.len() {
                return false;
            }
            cur = next;
        }
        cur == self.result
    }
}

/// Dehn's algorithm: replace the leftmost subword that is more than half of
/// a rotation of a relator by the inverse of the rest of that rotation.
///
/// Each rewrite strictly shortens the word. Under C′(1/6) the result is
/// empty iff the input is trivial in the group.
pub fn dehn_greedy(w: &Word, pres: &Presentation) -> DehnReduction {
    let sym = symmetrized(pres);
    let mut cur = w.clone();
    let mut steps = Vec::new();
    'outer: loop {
        let letters = cur.letters();
        for i in 0..letters.len() {
            for (rho, rel, off) in &sym {
                let m = lcp(&letters[i..], rho.letters());
                if 2 * m > rho.len() {
                    let b_inv = rho.suffix_from(m).inverse();
                    let next = free_reduce(
                        letters[..i]
                            .iter()
                            .chain(b_inv.letters())
                            .chain(&letters[i + m..])
                            .copied(),
                    );
                    steps.push(DehnStep {
                        position: i,
                        matched: m,
                        rotation: rho.clone(),
                        relator: rel.clone(),
                        offset: *off,
                        before: cur.clone(),
                        after: next.clone(),
                    });
                    cur = next;
                    continue 'outer;
                }
            }
        }
        break;
    }
    DehnReduction { input: w.clone(), result: cur, steps }
}
