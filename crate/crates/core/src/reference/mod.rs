//! Brute-force reference oracles and seeded random instances.
//!
//! These share only word arithmetic with the decision procedures, so that
//! agreement between the two is evidence rather than tautology.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CoreError;
use crate::oracle::{Decision, Strategy};
use crate::presentation::Presentation;
use crate::subdirect::{PairElement, SubdirectSetup};
use crate::word::{alphabet_letters, free_reduce, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_length: usize,
    pub max_states: u64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_length: 8, max_states: 1_000_000, seed: 0 }
    }
}

/// Area by breadth-first search from `w` to the empty word.
///
/// A move inserts a cyclic rotation of a relator or inverse relator at any
/// position and freely reduces, keeping only insertions that cancel at
/// least one letter. Restricting to cancelling moves loses nothing: a
/// diagram for a nonempty word always has a cell on its boundary, and
/// removing it is such a move.
pub fn brute_area(w: &Word, pres: &Presentation, budget: &SearchBudget) -> Result<usize, CoreError> {
    let mut rotations: Vec<Vec<Letter>> = Vec::new();
    for r in pres.relators() {
        for s in [r.clone(), r.inverse()] {
            let l = s.letters();
            for k in 0..l.len() {
                let rot: Vec<Letter> = l[k..].iter().chain(&l[..k]).copied().collect();
                if !rotations.contains(&rot) {
                    rotations.push(rot);
                }
            }
        }
    }
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.clone());
    queue.push_back((w.clone(), 0usize));
    let mut states = 0u64;
    while let Some((x, d)) = queue.pop_front() {
        if x.is_empty() {
            return Ok(d);
        }
        states += 1;
        if states > budget.max_states {
            return Err(CoreError::BudgetExhausted(budget.max_states));
        }
        let xl = x.letters();
        for i in 0..=xl.len() {
            for rot in &rotations {
                let touches = (i > 0 && xl[i - 1] == rot[0].inv()) || (i < xl.len() && xl[i] == rot[rot.len() - 1].inv());
                if !touches {
                    continue;
                }
                let y = free_reduce(xl[..i].iter().chain(rot).chain(&xl[i..]).copied());
                if seen.insert(y.clone()) {
                    queue.push_back((y, d + 1));
                }
            }
        }
    }
    Err(CoreError::BadCertificate(format!("{w} is not trivial")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteConjugacy {
    Found(PairElement),
    /// Every product of at most `max_length` generators was tried.
    AbsentWithinBound,
    BudgetExhausted,
}

/// Breadth-first search over products of `P`'s generators and their
/// inverses for `γ` with `γ⁻¹·U·γ = V`.
pub fn brute_p_conjugacy(
    u: &PairElement,
    v: &PairElement,
    setup: &SubdirectSetup,
    budget: &SearchBudget,
) -> BruteConjugacy {
    let mut gens: Vec<PairElement> = Vec::new();
    for g in setup.p_generators() {
        gens.push(g.clone());
        gens.push(g.inverse());
    }
    let mut seen: HashSet<PairElement> = HashSet::new();
    let mut frontier = vec![PairElement::identity()];
    seen.insert(PairElement::identity());
    let mut states = 0u64;
    for depth in 0..=budget.max_length {
        let mut next = Vec::new();
        for g in &frontier {
            states += 1;
            if states > budget.max_states {
                return BruteConjugacy::BudgetExhausted;
            }
            if u.conjugate_by(g) == *v {
                return BruteConjugacy::Found(g.clone());
            }
            if depth < budget.max_length {
                for s in &gens {
                    let h = g.mul(s);
                    if seen.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
        }
        frontier = next;
    }
    BruteConjugacy::AbsentWithinBound
}

/// Tests `p = 0, 1, −1, 2, −2, …` with `|p| ≤ max_length` and returns the
/// first `p` with `w = u^p` in `Q`.
pub fn brute_power(w: &Word, u: &Word, strat: &Strategy, budget: &SearchBudget) -> Result<Option<i64>, CoreError> {
    let mut states = 0u64;
    for k in 0..=budget.max_length as i64 {
        for p in if k == 0 { vec![0] } else { vec![k, -k] } {
            states += 1;
            if states > budget.max_states {
                return Err(CoreError::BudgetExhausted(budget.max_states));
            }
            let mut up = Word::empty();
            for _ in 0..p.unsigned_abs() {
                up = up.mul(u);
            }
            if p < 0 {
                up = up.inverse();
            }
            match strat.q_equal(w, &up)? {
                Decision::Yes(_) => return Ok(Some(p)),
                Decision::No(_) => {}
                Decision::Unknown(e) => return Err(CoreError::Undecided(e.reason)),
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// `V = γ⁻¹·U·γ` for a random product `γ` of generators of `P`.
    Conjugate,
    /// `V` an independent random element of `P`.
    Independent,
    /// `V = (g⁻¹ u₁ g, h⁻¹ u₂ h)` for random words `g, h`; conjugate to `U`
    /// in each factor, and in `P` whenever `Q` is abelian.
    Twisted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub kind: InstanceKind,
    pub u: PairElement,
    pub v: PairElement,
    pub conjugator: Option<PairElement>,
}

/// Seeded stream of conjugacy instances.
///
/// Draw `i` is a constructed conjugate pair iff
/// `⌊(i+1)·ratio⌋ > ⌊i·ratio⌋`, so any `n` draws contain `⌊n·ratio⌋`
/// of them.
#[derive(Clone, Debug)]
pub struct InstanceStream {
    gens: Vec<PairElement>,
    letters: Vec<Letter>,
    rng: ChaCha8Rng,
    ratio: f64,
    max_component: usize,
    max_conjugator: usize,
    index: u64,
    negatives: u64,
}

pub fn random_instances(setup: &SubdirectSetup, budget: &SearchBudget, ratio: f64) -> InstanceStream {
    let mut gens = Vec::new();
    for g in setup.p_generators() {
        gens.push(g.clone());
        gens.push(g.inverse());
    }
    InstanceStream {
        gens,
        letters: alphabet_letters(setup.presentation().generators()),
        rng: ChaCha8Rng::seed_from_u64(budget.seed),
        ratio,
        max_component: 6,
        max_conjugator: 4,
        index: 0,
        negatives: 0,
    }
}

impl InstanceStream {
    /// Caps component lengths of `U` (default 6).
    pub fn max_component(mut self, n: usize) -> Self {
        self.max_component = n;
        self
    }

    /// Caps the number of generators in constructed conjugators (default 4).
    pub fn max_conjugator(mut self, n: usize) -> Self {
        self.max_conjugator = n;
        self
    }

    fn product(&mut self, len: usize) -> PairElement {
        let mut g = PairElement::identity();
        for _ in 0..len {
            let s = &self.gens[self.rng.gen_range(0..self.gens.len())];
            g = g.mul(s);
        }
        g
    }

    /// A random nontrivial element of `P` with short components.
    fn element(&mut self) -> PairElement {
        loop {
            let len = self.rng.gen_range(1..=self.max_component);
            let g = self.product(len);
            if !g.is_identity() && g.first.len() <= self.max_component && g.second.len() <= self.max_component {
                return g;
            }
        }
    }

    fn word(&mut self, max: usize) -> Word {
        let len = self.rng.gen_range(0..=max);
        free_reduce((0..len).map(|_| self.letters[self.rng.gen_range(0..self.letters.len())]))
    }
}

impl Iterator for InstanceStream {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        let i = self.index as f64;
        self.index += 1;
        let positive = ((i + 1.0) * self.ratio).floor() > (i * self.ratio).floor();
        let u = self.element();
        if positive {
            let len = self.rng.gen_range(0..=self.max_conjugator);
            let g = self.product(len);
            let v = u.conjugate_by(&g);
            return Some(Instance { kind: InstanceKind::Conjugate, u, v, conjugator: Some(g) });
        }
        self.negatives += 1;
        if self.negatives % 2 == 1 {
            let v = self.element();
            Some(Instance { kind: InstanceKind::Independent, u, v, conjugator: None })
        } else {
            let g = self.word(3);
            let h = self.word(3);
            let v = PairElement::new(u.first.conjugate_by(&g), u.second.conjugate_by(&h));
            Some(Instance { kind: InstanceKind::Twisted, u, v, conjugator: None })
        }
    }
}

/// Random reduced words of length at most `max_length`.
pub fn random_words(gens: &[u8], budget: &SearchBudget, count: usize) -> Vec<Word> {
    let letters = alphabet_letters(gens);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(0..=budget.max_length);
            let mut out: Vec<Letter> = Vec::with_capacity(len);
            while out.len() < len {
                let l = letters[rng.gen_range(0..letters.len())];
                if out.last() != Some(&l.inv()) {
                    out.push(l);
                }
            }
            Word::from_letters(out)
        })
        .collect()
}

/// Tally of a cross-check between a decision procedure and an oracle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifySummary {
    pub instances: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub unknowns: usize,
}

impl std::fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "instances={} agreements={} disagreements={} unknowns={}",
            self.instances, self.agreements, self.disagreements, self.unknowns
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{StrategyKind, StrategySpec};
    use crate::subdirect::canonical_setup;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn pair(a: &str, b: &str) -> PairElement {
        PairElement::new(w(a), w(b))
    }

    #[test]
    fn brute_area_examples() {
        let p: Presentation = "generators: a b\nrelators: abAB".parse().unwrap();
        let b = SearchBudget::default();
        assert_eq!(brute_area(&Word::empty(), &p, &b).unwrap(), 0);
        assert_eq!(brute_area(&w("abAB"), &p, &b).unwrap(), 1);
        assert_eq!(brute_area(&w("baBA"), &p, &b).unwrap(), 1);
        assert_eq!(brute_area(&w("aabbAABB"), &p, &b).unwrap(), 4);
        let p: Presentation = "generators: a\nrelators: aaa".parse().unwrap();
        assert_eq!(brute_area(&w("aaaaaa"), &p, &b).unwrap(), 2);
        let tiny = SearchBudget { max_states: 3, ..b };
        let p: Presentation = "generators: a b\nrelators: abAB".parse().unwrap();
        assert!(matches!(brute_area(&w("aabbAABB"), &p, &tiny), Err(CoreError::BudgetExhausted(3))));
    }

    #[test]
    fn brute_conjugacy_examples() {
        let pres: Presentation = "generators: a b\nrelators: b".parse().unwrap();
        let s = canonical_setup(&pres);
        let b = SearchBudget::default();
        let u = pair("b", "b");
        assert_eq!(brute_p_conjugacy(&u, &u, &s, &b), BruteConjugacy::Found(PairElement::identity()));
        assert_eq!(brute_p_conjugacy(&u, &pair("abA", "abA"), &s, &b), BruteConjugacy::Found(pair("A", "A")));
        let small = SearchBudget { max_length: 4, ..b };
        assert_eq!(brute_p_conjugacy(&u, &pair("abA", "b"), &s, &small), BruteConjugacy::AbsentWithinBound);
        let tiny = SearchBudget { max_states: 10, ..b };
        assert_eq!(brute_p_conjugacy(&u, &pair("abA", "b"), &s, &tiny), BruteConjugacy::BudgetExhausted);
    }

    #[test]
    fn brute_power_examples() {
        let b = SearchBudget::default();
        let pres: Presentation = "generators: a b\nrelators: b".parse().unwrap();
        let st = Strategy::new(&pres, StrategySpec::new(StrategyKind::Abelian)).unwrap();
        assert_eq!(brute_power(&w("aaa"), &w("a"), &st, &b).unwrap(), Some(3));
        assert_eq!(brute_power(&w("ab"), &w("ab"), &st, &b).unwrap(), Some(1));
        assert_eq!(brute_power(&w("ab"), &w("aa"), &st, &b).unwrap(), None);
        let pres: Presentation = "generators: a\nrelators: aaa".parse().unwrap();
        let st = Strategy::new(&pres, StrategySpec::new(StrategyKind::Abelian)).unwrap();
        assert_eq!(brute_power(&w("aa"), &w("a"), &st, &b).unwrap(), Some(-1));
    }

    #[test]
    fn instance_streams_are_reproducible_and_mixed() {
        let pres: Presentation = "generators: a b\nrelators: abAB".parse().unwrap();
        let s = canonical_setup(&pres);
        let b = SearchBudget { seed: 0, ..SearchBudget::default() };
        let first: Vec<Instance> = random_instances(&s, &b, 0.5).take(100).collect();
        let again: Vec<Instance> = random_instances(&s, &b, 0.5).take(100).collect();
        assert_eq!(first, again);
        let positives = first.iter().filter(|i| i.kind == InstanceKind::Conjugate).count();
        assert_eq!(positives, 50);
        for inst in first.iter().filter(|i| i.kind == InstanceKind::Conjugate) {
            let g = inst.conjugator.as_ref().unwrap();
            assert_eq!(inst.u.conjugate_by(g), inst.v);
            let found = brute_p_conjugacy(&inst.u, &inst.v, &s, &SearchBudget { max_length: 4, ..b });
            assert!(matches!(found, BruteConjugacy::Found(_)), "{inst:?}");
        }
        let other: Vec<Instance> = random_instances(&s, &SearchBudget { seed: 1, ..b }, 0.5).take(10).collect();
        assert_ne!(first[..10], other[..]);
    }
}
