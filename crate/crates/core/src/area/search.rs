//! Minimal-area search over noise-bounded products.
//!
//! Areas are tried in increasing order. Each candidate area is first
//! settled exactly by peeling boundary faces; a product found that way is
//! returned when its noise is within `M·L + |w|`, and otherwise a product of
//! the same area within that bound is found by the walk search below. Some
//! minimal-area product always meets the bound, so that search succeeds.
//!
//! A product `∏ θᵢ⁻¹ rᵢ θᵢ` is read as a closed walk in the Cayley tree of
//! the free group through the points `gᵢ = θᵢ⁻¹`, reading `rᵢ` on arrival at
//! each point. Its letters are the walk steps interleaved with the relators,
//! and the noise is the length of the walk. For fixed area `M` the search
//! walks letter by letter, inserting relators, and prunes a state as soon as
//! the remaining letter budget cannot turn the reduced prefix into `w`. The
//! last factor is solved directly: it must be a conjugate of a relator, and
//! its conjugators form a coset of the relator's centralizer.

use std::collections::HashMap;

use super::peel::Peeler;
use super::{Factor, VanKampenProduct};
use crate::presentation::Presentation;
use crate::word::{free_conjugator, primitive_root, push_reduced, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaResult {
    /// Least area found, searching areas `0..=max_area` in order.
    pub value: Option<usize>,
    pub witness: Option<VanKampenProduct>,
    /// No product within the area and noise bounds evaluates to `w`.
    pub bound_exhausted: bool,
    /// The step budget ran out before the bounds were exhausted.
    pub budget_exhausted: bool,
    pub steps: u64,
}

/// Configurable area search.
#[derive(Clone, Debug)]
pub struct AreaSearch<'p> {
    pres: &'p Presentation,
    max_area: usize,
    step_budget: Option<u64>,
    min_area: usize,
}

impl<'p> AreaSearch<'p> {
    pub fn new(pres: &'p Presentation, max_area: usize) -> Self {
        AreaSearch { pres, max_area, step_budget: None, min_area: 0 }
    }

    /// Caps the number of visited search states.
    pub fn step_budget(mut self, budget: u64) -> Self {
        self.step_budget = Some(budget);
        self
    }

    /// Skips areas below `m`; the caller asserts none of them can succeed.
    pub fn start_at(mut self, m: usize) -> Self {
        self.min_area = m;
        self
    }

    pub fn run(&self, w: &Word) -> AreaResult {
        let len_bound = |m: usize| m * self.pres.max_relator_len() + w.len();
        let mut peel = Peeler::new(self.pres, self.step_budget);
        for m in self.min_area..=self.max_area {
            if m > 0 && self.pres.is_free() {
                break;
            }
            let Some(prod) = peel.solve(w, m) else {
                if peel.out_of_budget {
                    return exhausted(peel.steps());
                }
                continue;
            };
            let area = prod.area();
            if prod.noise() <= len_bound(area) {
                return found(area, prod, peel.steps());
            }
            // a product of this area within the noise bound exists
            let mut steps = peel.steps();
            let remaining = self.step_budget.map(|b| b.saturating_sub(steps));
            match self.walk_search(w, area, &mut steps, remaining) {
                Some(wit) => return found(area, wit, steps),
                None => return exhausted(steps),
            }
        }
        AreaResult { value: None, witness: None, bound_exhausted: true, budget_exhausted: false, steps: peel.steps() }
    }

    /// Depth-first search over walks for a product of exactly `m` factors
    /// with noise at most `m·L + |w|`.
    fn walk_search(&self, w: &Word, m: usize, steps: &mut u64, budget: Option<u64>) -> Option<VanKampenProduct> {
        let relators = self.pres.symmetric_relators();
        let roots: Vec<Word> = relators
            .iter()
            .map(|r| primitive_root(r).expect("relators are nonempty").root)
            .collect();
        let letters = self.pres.letters();
        let mut local = 0u64;
        let mut s = Searcher {
            target: w,
            relators: &relators,
            roots: &roots,
            letters: &letters,
            area: m,
            noise_bound: m * self.pres.max_relator_len() + w.len(),
            max_rel: self.pres.max_relator_len(),
            memo: HashMap::new(),
            stack: Vec::with_capacity(m),
            steps: &mut local,
            budget,
            out_of_budget: false,
        };
        let out = s.search();
        *steps += local;
        out
    }
}

fn found(area: usize, witness: VanKampenProduct, steps: u64) -> AreaResult {
    AreaResult { value: Some(area), witness: Some(witness), bound_exhausted: false, budget_exhausted: false, steps }
}

fn exhausted(steps: u64) -> AreaResult {
    AreaResult { value: None, witness: None, bound_exhausted: false, budget_exhausted: true, steps }
}

/// Least area of `w` among products with at most `max_area` factors and
/// noise at most `M·L + |w|`.
pub fn area_bounded(w: &Word, max_area: usize, pres: &Presentation) -> AreaResult {
    AreaSearch::new(pres, max_area).run(w)
}

struct Searcher<'a> {
    target: &'a Word,
    relators: &'a [Word],
    roots: &'a [Word],
    letters: &'a [Letter],
    area: usize,
    noise_bound: usize,
    max_rel: usize,
    /// (level, prefix, position) -> least noise at which it was expanded
    memo: HashMap<Vec<u8>, usize>,
    /// conjugators θ and relators chosen so far
    stack: Vec<(Word, Word)>,
    steps: &'a mut u64,
    budget: Option<u64>,
    out_of_budget: bool,
}

fn common_prefix(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn key(level: usize, prefix: &[Letter], pos: &[Letter]) -> Vec<u8> {
    let mut k = Vec::with_capacity(prefix.len() + pos.len() + 2);
    k.push(level as u8);
    k.extend(prefix.iter().map(|l| l.to_char() as u8));
    k.push(b'|');
    k.extend(pos.iter().map(|l| l.to_char() as u8));
    k
}

impl Searcher<'_> {
    fn search(&mut self) -> Option<VanKampenProduct> {
        if self.area == 0 {
            *self.steps += 1;
            return self.target.is_empty().then(VanKampenProduct::empty);
        }
        let mut prefix = Vec::new();
        let mut pos = Vec::new();
        if self.walk(0, &mut prefix, &mut pos, 0, None) {
            let factors = self
                .stack
                .drain(..)
                .map(|(theta, r)| Factor::new(theta, r))
                .collect();
            Some(VanKampenProduct::new(factors))
        } else {
            None
        }
    }

    fn tick(&mut self) -> bool {
        *self.steps += 1;
        if let Some(b) = self.budget {
            if *self.steps > b {
                self.out_of_budget = true;
                return false;
            }
        }
        true
    }

    /// Letters still to be appended can number at most this many.
    fn remaining_letters(&self, level: usize, noise: usize) -> usize {
        (self.noise_bound - noise) + (self.area - level) * self.max_rel
    }

    /// Explores walks at `level` (factors placed so far) from the current
    /// position `pos`, where `prefix` is the reduced word read so far.
    fn walk(
        &mut self,
        level: usize,
        prefix: &mut Vec<Letter>,
        pos: &mut Vec<Letter>,
        noise: usize,
        last: Option<Letter>,
    ) -> bool {
        if self.out_of_budget || !self.tick() {
            return false;
        }
        let t = self.target.letters();
        let distance = prefix.len() + t.len() - 2 * common_prefix(prefix, t);
        if distance > self.remaining_letters(level, noise) {
            return false;
        }
        let k = key(level, prefix, pos);
        match self.memo.get(&k) {
            Some(&n) if n <= noise => return false,
            _ => {
                self.memo.insert(k, noise);
            }
        }

        if level + 1 == self.area {
            return self.close(prefix, pos, noise);
        }

        // place factor `level` here
        let theta = Word::from_reduced_unchecked(pos.iter().rev().map(|l| l.inv()).collect());
        for ri in 0..self.relators.len() {
            let mut next = prefix.clone();
            for &l in self.relators[ri].letters() {
                push_reduced(&mut next, l);
            }
            self.stack.push((theta.clone(), self.relators[ri].clone()));
            if self.walk(level + 1, &mut next, &mut pos.clone(), noise, None) {
                return true;
            }
            self.stack.pop();
            if self.out_of_budget {
                return false;
            }
        }

        // or keep walking
        for i in 0..self.letters.len() {
            let x = self.letters[i];
            if last == Some(x.inv()) {
                continue;
            }
            let shrink = pos.last() == Some(&x.inv());
            let new_len = if shrink { pos.len() - 1 } else { pos.len() + 1 };
            if noise + 1 + new_len > self.noise_bound {
                continue;
            }
            let popped_prefix = prefix.last() == Some(&x.inv());
            push_reduced(prefix, x);
            push_reduced(pos, x);
            let found = self.walk(level, prefix, pos, noise + 1, Some(x));
            if found {
                return true;
            }
            // undo
            if shrink {
                pos.push(x.inv());
            } else {
                pos.pop();
            }
            if popped_prefix {
                prefix.push(x.inv());
            } else {
                prefix.pop();
            }
            if self.out_of_budget {
                return false;
            }
        }
        false
    }

    /// Places the final factor, whose conjugate must account for the rest of
    /// the target, then walks home.
    fn close(&mut self, prefix: &[Letter], pos: &[Letter], noise: usize) -> bool {
        let prefix_w = Word::from_reduced_unchecked(prefix.to_vec());
        let pos_inv = Word::from_reduced_unchecked(pos.iter().rev().map(|l| l.inv()).collect());
        // the product so far is prefix·pos⁻¹, so the last factor must be
        // its inverse times the target
        let needed = prefix_w.mul(&pos_inv).inverse().mul(self.target);
        let budget = self.noise_bound - noise;
        for ri in 0..self.relators.len() {
            let r = &self.relators[ri];
            if r.len() > needed.len() {
                continue;
            }
            // x⁻¹ r x = needed; the admissible points are g = x⁻¹ z^j
            let Some(x) = free_conjugator(r, &needed) else { continue };
            let x_inv = x.inverse();
            let z = &self.roots[ri];
            let mut j: i64 = 0;
            while (j as usize) * z.len() <= budget + x.len() {
                let cands: &[i64] = if j == 0 { &[0] } else { &[j, -j] };
                for &c in cands {
                    let g = x_inv.mul(&z.pow(c));
                    if pos_inv.mul(&g).len() + g.len() <= budget {
                        self.stack.push((g.inverse(), r.clone()));
                        return true;
                    }
                }
                j += 1;
            }
        }
        false
    }
}
