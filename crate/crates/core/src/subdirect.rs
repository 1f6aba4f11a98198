//! The fibre product `P = {(g₁, g₂) : g₁ = g₂ in Q}` inside `F × F`, where
//! `F` is free on the generators of a presentation of `Q`.
//!
//! `P` is generated by the diagonal `(x, x)` together with `(r, 1)` and
//! `(1, r)` for each relator `r`. Membership is the word problem in `Q`;
//! conjugacy reduces to conjugacy in `F` plus power problems in `Q`.

use std::fmt;

use crate::error::CoreError;
use crate::oracle::{Decision, Exhausted, PowerDecision, Strategy};
use crate::presentation::Presentation;
use crate::word::{free_conjugator, primitive_root, Letter, Word};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairElement {
    pub first: Word,
    pub second: Word,
}

impl PairElement {
    pub fn new(first: Word, second: Word) -> Self {
        PairElement { first, second }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn diagonal(w: &Word) -> Self {
        PairElement::new(w.clone(), w.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.first.is_empty() && self.second.is_empty()
    }

    pub fn mul(&self, other: &PairElement) -> PairElement {
        PairElement::new(self.first.mul(&other.first), self.second.mul(&other.second))
    }

    pub fn inverse(&self) -> PairElement {
        PairElement::new(self.first.inverse(), self.second.inverse())
    }

    /// `g⁻¹ · self · g`, componentwise.
    pub fn conjugate_by(&self, g: &PairElement) -> PairElement {
        PairElement::new(self.first.conjugate_by(&g.first), self.second.conjugate_by(&g.second))
    }
}

impl fmt::Display for PairElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Which factor a kernel generator lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

/// A formal kernel generator: relator `index` placed in one factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KernelSymbol {
    pub relator: usize,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdirectSetup {
    pres: Presentation,
    kernel: Vec<KernelSymbol>,
    p_generators: Vec<PairElement>,
}

/// `G₁ = G₂ = F`, both projecting onto `Q` through the presentation.
pub fn canonical_setup(pres: &Presentation) -> SubdirectSetup {
    let mut gens: Vec<PairElement> = pres
        .generators()
        .iter()
        .map(|&g| PairElement::diagonal(&Word::letter(Letter::new(g))))
        .collect();
    let mut kernel = Vec::new();
    for (i, r) in pres.relators().iter().enumerate() {
        kernel.push(KernelSymbol { relator: i, side: Side::First });
        kernel.push(KernelSymbol { relator: i, side: Side::Second });
        gens.push(PairElement::new(r.clone(), Word::empty()));
        gens.push(PairElement::new(Word::empty(), r.clone()));
    }
    SubdirectSetup { pres: pres.clone(), kernel, p_generators: gens }
}

impl SubdirectSetup {
    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    /// `(x, x)` per generator, then `(r, 1)` and `(1, r)` per relator.
    pub fn p_generators(&self) -> &[PairElement] {
        &self.p_generators
    }

    pub fn kernel_symbols(&self) -> &[KernelSymbol] {
        &self.kernel
    }

    /// The image of a kernel symbol in `F`, in the factor `side`.
    pub fn kernel_image(&self, k: KernelSymbol, side: Side) -> Word {
        if k.side == side {
            self.pres.relators()[k.relator].clone()
        } else {
            Word::empty()
        }
    }

    pub fn check_pair(&self, pair: &PairElement) -> Result<(), CoreError> {
        self.pres.check_word(&pair.first)?;
        self.pres.check_word(&pair.second)
    }
}

pub fn p_generators(setup: &SubdirectSetup) -> &[PairElement] {
    setup.p_generators()
}

/// `Yes` iff the two components are equal in `Q`.
pub fn p_membership(pair: &PairElement, setup: &SubdirectSetup, strat: &Strategy) -> Result<Decision, CoreError> {
    setup.check_pair(pair)?;
    strat.q_equal(&pair.first, &pair.second)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyVerdict {
    /// `γ⁻¹·U·γ = V` with `γ ∈ P`.
    Yes(PairElement),
    No,
    Unknown(Exhausted),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Identical,
    /// Some `uᵢ` and `vᵢ` are not conjugate in `F`.
    FactorNotConjugate,
    /// `u₁ = v₁ = 1`: `P` projects onto the second factor.
    FirstTrivial,
    SecondTrivial,
    /// Both `u₁` and `u₂` are nontrivial.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootData {
    pub z1: Word,
    pub e1: u32,
    pub z2: Word,
    pub e2: u32,
}

/// One power query: is `target = z₂^j · w⁻¹` in `⟨z₁⟩` in `Q`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerQuery {
    pub j: u32,
    pub target: Word,
    pub answer: PowerDecision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyTrace {
    pub branch: Branch,
    /// `wᵢ⁻¹ uᵢ wᵢ = vᵢ` in `F`.
    pub factor_conjugators: Option<(Word, Word)>,
    /// `(w₂, w₂) ∈ P` conjugates `V` to a pair whose second coordinate is `u₂`.
    pub normalization: Option<Word>,
    pub roots: Option<RootData>,
    /// `w = w₁·w₂⁻¹`.
    pub w: Option<Word>,
    pub queries: Vec<PowerQuery>,
    /// Certificate that the returned conjugator lies in `P`.
    pub membership: Option<Decision>,
}

impl ConjugacyTrace {
    fn new(branch: Branch) -> Self {
        ConjugacyTrace {
            branch,
            factor_conjugators: None,
            normalization: None,
            roots: None,
            w: None,
            queries: Vec::new(),
            membership: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyResult {
    pub verdict: ConjugacyVerdict,
    pub trace: ConjugacyTrace,
}

impl ConjugacyResult {
    /// Re-derives the conjugator from the trace and re-checks every
    /// certificate it rests on.
    pub fn replay(&self, u: &PairElement, v: &PairElement, strat: &Strategy) -> Result<(), CoreError> {
        let bad = |m: &str| Err(CoreError::BadCertificate(m.into()));
        let ConjugacyVerdict::Yes(gamma) = &self.verdict else {
            return Ok(());
        };
        verify_conjugator(u, v, gamma, strat)?;
        match self.trace.membership.as_ref() {
            Some(d @ Decision::Yes(_)) => strat.check_decision(&gamma.first.mul(&gamma.second.inverse()), d)?,
            _ => return bad("missing membership certificate"),
        }
        if self.trace.branch != Branch::General {
            return Ok(());
        }
        let (Some((w1, w2)), Some(roots), Some(w)) =
            (self.trace.factor_conjugators.as_ref(), self.trace.roots.as_ref(), self.trace.w.as_ref())
        else {
            return bad("incomplete trace");
        };
        if *w != w1.mul(&w2.inverse()) {
            return bad("w is not w1·w2⁻¹");
        }
        let Some(q) = self.trace.queries.last() else {
            return bad("no power query recorded");
        };
        let PowerDecision::Yes { p, .. } = &q.answer else {
            return bad("last power query is not a Yes");
        };
        if q.target != roots.z2.pow(q.j as i64).mul(&w.inverse()) {
            return bad("query target is not z2^j·w⁻¹");
        }
        // ε·w⁻¹ ∈ ⟨z₁⟩ in Q, with ε = z₂^j
        strat.check_power_decision(&q.target, &roots.z1, &q.answer)?;
        let rebuilt = PairElement::new(roots.z1.pow(*p).mul(w1), roots.z2.pow(q.j as i64).mul(w2));
        if rebuilt != *gamma {
            return bad("conjugator does not match (z1^p·w1, z2^j·w2)");
        }
        Ok(())
    }
}

/// `γ⁻¹·U·γ = V` exactly in `F × F`, and `γ ∈ P` with a checked certificate.
pub fn verify_conjugator(
    u: &PairElement,
    v: &PairElement,
    gamma: &PairElement,
    strat: &Strategy,
) -> Result<(), CoreError> {
    if u.conjugate_by(gamma) != *v {
        return Err(CoreError::BadCertificate(format!("{gamma} does not conjugate {u} to {v}")));
    }
    let d = strat.q_equal(&gamma.first, &gamma.second)?;
    if !d.is_yes() {
        return Err(CoreError::BadCertificate(format!("{gamma} is not certified to lie in P")));
    }
    strat.check_decision(&gamma.first.mul(&gamma.second.inverse()), &d)
}

fn require_member(pair: &PairElement, setup: &SubdirectSetup, strat: &Strategy) -> Result<Option<Exhausted>, CoreError> {
    match p_membership(pair, setup, strat)? {
        Decision::Yes(_) => Ok(None),
        Decision::No(_) => Err(CoreError::NotInFibreProduct(pair.to_string())),
        Decision::Unknown(e) => Ok(Some(e)),
    }
}

/// Decides whether some `γ ∈ P` has `γ⁻¹·U·γ = V`.
///
/// The conjugators of `U` to `V` in `F × F` are `(z₁^a w₁, z₂^b w₂)` where
/// `zᵢ` is the root of `uᵢ`. Left multiplication by powers of `U ∈ P`
/// reduces `b` to `0 ≤ j < e₂`, and such a pair lies in `P` iff
/// `z₂^j · w⁻¹ = z₁^p` in `Q` for `w = w₁ w₂⁻¹`, which is a power problem.
pub fn p_conjugacy(
    u: &PairElement,
    v: &PairElement,
    setup: &SubdirectSetup,
    strat: &Strategy,
) -> Result<ConjugacyResult, CoreError> {
    for pair in [u, v] {
        if let Some(e) = require_member(pair, setup, strat)? {
            return Ok(ConjugacyResult {
                verdict: ConjugacyVerdict::Unknown(e),
                trace: ConjugacyTrace::new(Branch::General),
            });
        }
    }
    if u == v {
        let mut trace = ConjugacyTrace::new(Branch::Identical);
        trace.membership = Some(strat.wp_decide(&Word::empty())?);
        return Ok(ConjugacyResult { verdict: ConjugacyVerdict::Yes(PairElement::identity()), trace });
    }
    let (Some(w1), Some(w2)) = (free_conjugator(&u.first, &v.first), free_conjugator(&u.second, &v.second)) else {
        return Ok(ConjugacyResult { verdict: ConjugacyVerdict::No, trace: ConjugacyTrace::new(Branch::FactorNotConjugate) });
    };

    let finish = |gamma: PairElement, mut trace: ConjugacyTrace| -> Result<ConjugacyResult, CoreError> {
        verify_conjugator(u, v, &gamma, strat)?;
        trace.membership = Some(strat.q_equal(&gamma.first, &gamma.second)?);
        Ok(ConjugacyResult { verdict: ConjugacyVerdict::Yes(gamma), trace })
    };

    // the centralizer of 1 is everything, so the diagonal copy of the other
    // factor's conjugator works
    if u.first.is_empty() {
        let mut trace = ConjugacyTrace::new(Branch::FirstTrivial);
        trace.factor_conjugators = Some((w1, w2.clone()));
        return finish(PairElement::diagonal(&w2), trace);
    }
    if u.second.is_empty() {
        let mut trace = ConjugacyTrace::new(Branch::SecondTrivial);
        trace.factor_conjugators = Some((w1.clone(), w2));
        return finish(PairElement::diagonal(&w1), trace);
    }

    let r1 = primitive_root(&u.first)?;
    let r2 = primitive_root(&u.second)?;
    let w = w1.mul(&w2.inverse());
    let mut trace = ConjugacyTrace::new(Branch::General);
    trace.factor_conjugators = Some((w1.clone(), w2.clone()));
    trace.normalization = Some(w2.clone());
    trace.roots = Some(RootData { z1: r1.root.clone(), e1: r1.exponent, z2: r2.root.clone(), e2: r2.exponent });
    trace.w = Some(w.clone());

    let w_inv = w.inverse();
    let mut unknown: Option<Exhausted> = None;
    for j in 0..r2.exponent {
        let target = r2.root.pow(j as i64).mul(&w_inv);
        let answer = strat.power_decide(&target, &r1.root)?;
        let hit = match &answer {
            PowerDecision::Yes { p, .. } => Some(*p),
            PowerDecision::Unknown(e) => {
                unknown.get_or_insert_with(|| e.clone());
                None
            }
            PowerDecision::No(_) => None,
        };
        trace.queries.push(PowerQuery { j, target, answer });
        if let Some(p) = hit {
            let gamma = PairElement::new(r1.root.pow(p).mul(&w1), r2.root.pow(j as i64).mul(&w2));
            return finish(gamma, trace);
        }
    }
    let verdict = match unknown {
        Some(e) => ConjugacyVerdict::Unknown(e),
        None => ConjugacyVerdict::No,
    };
    Ok(ConjugacyResult { verdict, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{StrategyKind, StrategySpec};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn pair(a: &str, b: &str) -> PairElement {
        PairElement::new(w(a), w(b))
    }

    fn abelian(p: &str) -> (SubdirectSetup, Strategy) {
        let pres: Presentation = p.parse().unwrap();
        let s = Strategy::new(&pres, StrategySpec::new(StrategyKind::Abelian)).unwrap();
        (canonical_setup(&pres), s)
    }

    #[test]
    fn generator_lists() {
        let (s, _) = abelian("generators: a b\nrelators: b");
        assert_eq!(s.p_generators(), &[pair("a", "a"), pair("b", "b"), pair("b", "1"), pair("1", "b")]);
        let (s, _) = abelian("generators: a\nrelators: aaa");
        assert_eq!(s.p_generators(), &[pair("a", "a"), pair("aaa", "1"), pair("1", "aaa")]);
        let s = canonical_setup(&"generators: a b".parse().unwrap());
        assert_eq!(p_generators(&s), &[pair("a", "a"), pair("b", "b")]);
        let (s, _) = abelian("generators: a b\nrelators: abAB");
        assert_eq!(s.kernel_symbols().len(), 2);
        assert_eq!(s.kernel_image(s.kernel_symbols()[0], Side::First), w("abAB"));
        assert_eq!(s.kernel_image(s.kernel_symbols()[0], Side::Second), Word::empty());
    }

    #[test]
    fn membership_examples() {
        let (s, st) = abelian("generators: a b\nrelators: b");
        assert!(p_membership(&pair("b", "1"), &s, &st).unwrap().is_yes());
        assert!(p_membership(&pair("a", "b"), &s, &st).unwrap().is_no());
        assert!(p_membership(&pair("abAba", "abAba"), &s, &st).unwrap().is_yes());
    }

    #[test]
    fn conjugacy_examples() {
        let (s, st) = abelian("generators: a b\nrelators: b");
        let u = pair("b", "b");
        let v = pair("abA", "abA");
        let r = p_conjugacy(&u, &v, &s, &st).unwrap();
        match &r.verdict {
            ConjugacyVerdict::Yes(g) => assert_eq!(*g, pair("A", "A")),
            other => panic!("{other:?}"),
        }
        r.replay(&u, &v, &st).unwrap();

        let r = p_conjugacy(&u, &pair("abA", "b"), &s, &st).unwrap();
        assert_eq!(r.verdict, ConjugacyVerdict::No);
        assert_eq!(r.trace.queries.len(), 1);

        let r = p_conjugacy(&u, &u, &s, &st).unwrap();
        assert_eq!(r.verdict, ConjugacyVerdict::Yes(PairElement::identity()));
    }

    #[test]
    fn degenerate_branches() {
        let (s, st) = abelian("generators: a b\nrelators: b");
        let r = p_conjugacy(&pair("1", "b"), &pair("1", "abA"), &s, &st).unwrap();
        assert!(matches!(r.verdict, ConjugacyVerdict::Yes(_)));
        assert_eq!(r.trace.branch, Branch::FirstTrivial);
        r.replay(&pair("1", "b"), &pair("1", "abA"), &st).unwrap();
        let r = p_conjugacy(&pair("1", "b"), &pair("b", "1"), &s, &st).unwrap();
        assert_eq!(r.verdict, ConjugacyVerdict::No);
        assert!(matches!(
            p_conjugacy(&pair("a", "b"), &pair("a", "a"), &s, &st),
            Err(CoreError::NotInFibreProduct(_))
        ));
    }

    #[test]
    fn powers_of_roots_need_a_twist() {
        let (s, st) = abelian("generators: a\nrelators: aaa");
        let u = pair("aa", "aaaaa");
        let g = pair("aaa", "1");
        let v = u.conjugate_by(&g);
        let r = p_conjugacy(&u, &v, &s, &st).unwrap();
        assert!(matches!(r.verdict, ConjugacyVerdict::Yes(_)));
        r.replay(&u, &v, &st).unwrap();
    }
}
