//! Certified decision strategies for the word and power problems in `Q`.
//!
//! Every `Yes` and `No` carries a certificate that [`Strategy::check_decision`]
//! re-validates independently of how it was found. `Unknown` asserts nothing.

pub mod abelian;
pub mod small_cancellation;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::area::{evaluate_vk_product, AreaSearch, Factor, VanKampenProduct};
use crate::error::CoreError;
use crate::presentation::Presentation;
use crate::word::{free_conjugator, primitive_root, Letter, Word};

pub use abelian::{AbelianModel, Solutions};
pub use small_cancellation::{check_c16, dehn_greedy, DehnReduction, DehnStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// `Q` is the free group on the generators; requires no relators.
    Free,
    /// Abelianization arithmetic; exact once `Q` is certified abelian.
    Abelian,
    /// Dehn's algorithm; requires C′(1/6).
    DehnC16,
    /// Budgeted minimal-area search; only `Yes` from search, `No` from the
    /// abelianization.
    BoundedSearch,
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Free => "free",
            StrategyKind::Abelian => "abelian",
            StrategyKind::DehnC16 => "dehn",
            StrategyKind::BoundedSearch => "search",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "free" => Ok(StrategyKind::Free),
            "abelian" => Ok(StrategyKind::Abelian),
            "dehn" => Ok(StrategyKind::DehnC16),
            "search" => Ok(StrategyKind::BoundedSearch),
            other => Err(format!("unknown oracle {other:?}; expected free, abelian, dehn or search")),
        }
    }
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;
/// Largest `|p|` tried when no bound on `p` is available.
pub const DEFAULT_MAX_EXPONENT: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategySpec {
    pub kind: StrategyKind,
    /// Search states per query.
    pub budget: u64,
    pub max_exponent: u64,
}

impl StrategySpec {
    pub fn new(kind: StrategyKind) -> Self {
        StrategySpec { kind, budget: DEFAULT_BUDGET, max_exponent: DEFAULT_MAX_EXPONENT }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

/// Why a `No` holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// Nonempty free reduction in a free `Q`.
    FreeNormalForm(Word),
    /// Nonzero image in the abelianization.
    AbelianImage(Vec<BigInt>),
    /// Nonempty Dehn normal form under C′(1/6).
    DehnNormalForm(Word),
    /// `w ∉ ⟨u⟩` already in the abelianization.
    AbelianPower,
    /// In a free `Q`, `w` is not a power of `u`'s root with a suitable exponent.
    FreeCyclic,
    /// Exponents admitted by the abelianization, each refuted.
    ExponentsRefuted(Vec<(i64, Obstruction)>),
    /// `u` has certified finite `order` and every exponent with
    /// `|p| ≤ order/2` admitted by the abelianization is refuted.
    FiniteOrder { order: u64, order_witness: VanKampenProduct, refuted: Vec<(i64, Obstruction)> },
    /// Exhaustion of `|p| ≤ max_p` under a certified bound on the
    /// rel-cyclics Dehn function.
    RelCyclicsBound { n: usize, bound: usize, max_p: u64 },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[(i64, Obstruction)]| -> String {
            v.iter().map(|(p, o)| format!("p={p}: {o}")).collect::<Vec<_>>().join("; ")
        };
        match self {
            Obstruction::FreeNormalForm(w) => write!(f, "free normal form {w}"),
            Obstruction::AbelianImage(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "abelian image ({})", parts.join(", "))
            }
            Obstruction::DehnNormalForm(w) => write!(f, "Dehn normal form {w}"),
            Obstruction::AbelianPower => write!(f, "not in the cyclic subgroup of the abelianization"),
            Obstruction::FreeCyclic => write!(f, "not a power of the root in the free group"),
            Obstruction::ExponentsRefuted(v) => write!(f, "every admissible exponent refuted [{}]", list(v)),
            Obstruction::FiniteOrder { order, refuted, .. } => {
                write!(f, "u has order {order}; exponents refuted [{}]", list(refuted))
            }
            Obstruction::RelCyclicsBound { n, bound, max_p } => {
                write!(f, "relative cyclic bound {bound} at n={n} leaves |p| <= {max_p}, all refuted")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exhausted {
    pub steps: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Trivial in `Q`, with a product of relator conjugates equal to the word.
    Yes(VanKampenProduct),
    No(Obstruction),
    Unknown(Exhausted),
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Decision::Unknown(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerDecision {
    /// `w = u^p` with `|p|` least; `witness` is a product for `w·u^{-p}`.
    Yes { p: i64, witness: VanKampenProduct },
    No(Obstruction),
    Unknown(Exhausted),
}

/// A certified bound `δ^c(n) ≤ value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelCyclicsBound {
    pub n: usize,
    pub value: usize,
}

/// Anything that decides triviality in `Q`.
pub trait WordOracle {
    fn presentation(&self) -> &Presentation;
    fn decide_trivial(&self, w: &Word) -> Result<Decision, CoreError>;
}

/// Anything that decides membership in cyclic subgroups of `Q`.
pub trait PowerOracle {
    fn decide_power(&self, w: &Word, u: &Word) -> Result<PowerDecision, CoreError>;
}

/// A strategy bound to a presentation.
#[derive(Clone, Debug)]
pub struct Strategy {
    pres: Presentation,
    spec: StrategySpec,
    model: AbelianModel,
    /// For each ordered generator pair `x < y`, a product for `x y x⁻¹ y⁻¹`.
    commutators: HashMap<(u8, u8), VanKampenProduct>,
    exact: bool,
}

impl Strategy {
    pub fn new(pres: &Presentation, spec: StrategySpec) -> Result<Self, CoreError> {
        let model = AbelianModel::new(pres);
        let mut commutators = HashMap::new();
        let exact = match spec.kind {
            StrategyKind::Free => {
                if !pres.is_free() {
                    return Err(CoreError::InvalidStrategy {
                        strategy: "free",
                        reason: "the presentation has relators".into(),
                    });
                }
                true
            }
            StrategyKind::DehnC16 => {
                if !check_c16(pres) {
                    return Err(CoreError::InvalidStrategy {
                        strategy: "dehn",
                        reason: "the relators do not satisfy C'(1/6)".into(),
                    });
                }
                true
            }
            StrategyKind::Abelian => {
                let gens = pres.generators();
                let mut all = true;
                'pairs: for i in 0..gens.len() {
                    for j in i + 1..gens.len() {
                        let (gx, gy) = (gens[i].min(gens[j]), gens[i].max(gens[j]));
                        let c = Word::commutator(&Word::letter(Letter::new(gx)), &Word::letter(Letter::new(gy)));
                        let r = AreaSearch::new(pres, COMMUTATOR_MAX_AREA).step_budget(spec.budget).run(&c);
                        match r.witness {
                            Some(wit) => {
                                commutators.insert((gx, gy), wit);
                            }
                            None => {
                                all = false;
                                break 'pairs;
                            }
                        }
                    }
                }
                if !all {
                    commutators.clear();
                }
                all
            }
            StrategyKind::BoundedSearch => false,
        };
        Ok(Strategy { pres: pres.clone(), spec, model, commutators, exact })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn spec(&self) -> StrategySpec {
        self.spec
    }

    pub fn kind(&self) -> StrategyKind {
        self.spec.kind
    }

    /// Whether `Yes` and `No` are both always reached.
    pub fn exactness_claim(&self) -> bool {
        self.exact
    }

    pub fn abelian_model(&self) -> &AbelianModel {
        &self.model
    }

    pub fn wp_decide(&self, w: &Word) -> Result<Decision, CoreError> {
        self.pres.check_word(w)?;
        Ok(match self.spec.kind {
            StrategyKind::Free => {
                if w.is_empty() {
                    Decision::Yes(VanKampenProduct::empty())
                } else {
                    Decision::No(Obstruction::FreeNormalForm(w.clone()))
                }
            }
            StrategyKind::DehnC16 => {
                let red = dehn_greedy(w, &self.pres);
                if red.result.is_empty() {
                    Decision::Yes(red.to_vk_product())
                } else {
                    Decision::No(Obstruction::DehnNormalForm(red.result))
                }
            }
            StrategyKind::Abelian => {
                let image = self.model.image(w);
                if image.iter().any(|x| !x.is_zero()) {
                    Decision::No(Obstruction::AbelianImage(image))
                } else if self.exact {
                    let sorted = self.abelian_certificate(w)?;
                    let quick = AreaSearch::new(&self.pres, sorted.area()).step_budget(QUICK_AREA_BUDGET).run(w);
                    Decision::Yes(quick.witness.unwrap_or(sorted))
                } else {
                    Decision::Unknown(Exhausted {
                        steps: 0,
                        reason: "trivial abelian image, but Q is not certified abelian".into(),
                    })
                }
            }
            StrategyKind::BoundedSearch => {
                let image = self.model.image(w);
                if image.iter().any(|x| !x.is_zero()) {
                    Decision::No(Obstruction::AbelianImage(image))
                } else {
                    let r = AreaSearch::new(&self.pres, usize::MAX - 1).step_budget(self.spec.budget).run(w);
                    match r.witness {
                        Some(wit) => Decision::Yes(wit),
                        None => Decision::Unknown(Exhausted {
                            steps: r.steps,
                            reason: "area search budget exhausted".into(),
                        }),
                    }
                }
            }
        })
    }

    /// Decides `u = v` in `Q` via `u·v⁻¹`.
    pub fn q_equal(&self, u: &Word, v: &Word) -> Result<Decision, CoreError> {
        self.wp_decide(&u.mul(&v.inverse()))
    }

    /// A product for a word with zero abelian image, assembled from the
    /// certified commutator products and the relators.
    ///
    /// `w = W'·∏ rⱼ^{cⱼ}` where `W'` has zero exponent sums; `W'` is then
    /// sorted to the empty word by adjacent swaps `u p q v ↦ u q p v`, each
    /// costing the factor `u [p,q] u⁻¹`.
    fn abelian_certificate(&self, w: &Word) -> Result<VanKampenProduct, CoreError> {
        let e = self.model.exponent_vector(w);
        let coeffs = self
            .model
            .relator_coefficients(&e)
            .ok_or_else(|| CoreError::BadCertificate(format!("{w} has a nonzero abelian image")))?;
        let mut tail = VanKampenProduct::empty();
        let mut rel_word = Word::empty();
        for (r, c) in self.pres.relators().iter().zip(&coeffs) {
            let c = c
                .to_i64()
                .ok_or_else(|| CoreError::BadCertificate("relator coefficient overflow".into()))?;
            let rr = if c < 0 { r.inverse() } else { r.clone() };
            for _ in 0..c.unsigned_abs() {
                tail.factors.push(Factor::new(Word::empty(), rr.clone()));
                rel_word = rel_word.mul(&rr);
            }
        }
        let mut cur: Vec<Letter> = w.mul(&rel_word.inverse()).into_letters();
        let mut prod = VanKampenProduct::empty();
        let order = |l: Letter| l.generator();
        while let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| order(cur[i]) > order(cur[i + 1])) {
            let (p, q) = (cur[i], cur[i + 1]);
            let u = Word::from_letters(cur[..i].iter().copied());
            prod.extend(self.swap_product(p, q)?.conjugated_by_inverse(&u));
            let mut next = cur[..i].to_vec();
            next.push(q);
            next.push(p);
            next.extend_from_slice(&cur[i + 2..]);
            cur = Word::from_letters(next).into_letters();
        }
        if !cur.is_empty() {
            return Err(CoreError::BadCertificate(format!("sorting left {}", Word::from_letters(cur))));
        }
        prod.extend(tail);
        Ok(prod)
    }

    /// A product for `p q p⁻¹ q⁻¹`, a conjugate of some `[x,y]^{±1}`.
    fn swap_product(&self, p: Letter, q: Letter) -> Result<VanKampenProduct, CoreError> {
        let (x, y) = if p.generator() < q.generator() {
            (p.generator(), q.generator())
        } else {
            (q.generator(), p.generator())
        };
        let base = &self.commutators[&(x, y)];
        let c = Word::commutator(&Word::letter(Letter::new(x)), &Word::letter(Letter::new(y)));
        let target = Word::commutator(&Word::letter(p), &Word::letter(q));
        // t⁻¹ c t = target is u c u⁻¹ with u = t⁻¹
        if let Some(t) = free_conjugator(&c, &target) {
            return Ok(base.conjugated_by_inverse(&t.inverse()));
        }
        if let Some(t) = free_conjugator(&c.inverse(), &target) {
            return Ok(base.inverse().conjugated_by_inverse(&t.inverse()));
        }
        Err(CoreError::BadCertificate(format!("{target} is not conjugate to {c} or its inverse")))
    }

    /// Least `|p|` with `w = u^p` in `Q`, positive first on ties.
    pub fn power_decide(&self, w: &Word, u: &Word) -> Result<PowerDecision, CoreError> {
        self.pres.check_word(w)?;
        self.pres.check_word(u)?;
        if self.spec.kind == StrategyKind::Free {
            return Ok(free_power(w, u));
        }
        let sol = self.model.power_solutions(w, u);
        if sol == Solutions::None {
            return Ok(PowerDecision::No(Obstruction::AbelianPower));
        }
        if self.spec.kind == StrategyKind::Abelian && self.exact {
            let p = to_i64(&sol.least_absolute().unwrap())?;
            return match self.wp_decide(&w.mul(&u.pow(-p)))? {
                Decision::Yes(witness) => Ok(PowerDecision::Yes { p, witness }),
                _ => Err(CoreError::BadCertificate(format!("abelian solution p = {p} did not verify"))),
            };
        }
        if let Solutions::Exact(p) = &sol {
            let p = to_i64(p)?;
            return Ok(match self.wp_decide(&w.mul(&u.pow(-p)))? {
                Decision::Yes(witness) => PowerDecision::Yes { p, witness },
                Decision::No(ob) => PowerDecision::No(Obstruction::ExponentsRefuted(vec![(p, ob)])),
                Decision::Unknown(e) => PowerDecision::Unknown(e),
            });
        }
        let mut refuted = Vec::new();
        for k in 0..=self.spec.max_exponent as i64 {
            for p in if k == 0 { vec![0] } else { vec![k, -k] } {
                if !sol.contains(&BigInt::from(p)) {
                    continue;
                }
                match self.wp_decide(&w.mul(&u.pow(-p)))? {
                    Decision::Yes(witness) => return Ok(PowerDecision::Yes { p, witness }),
                    Decision::No(ob) => refuted.push((p, ob)),
                    Decision::Unknown(e) => return Ok(PowerDecision::Unknown(e)),
                }
            }
            // every residue mod k has a representative with |p| ≤ k/2
            if k >= 1 {
                if let Decision::Yes(order_witness) = self.wp_decide(&u.pow(k))? {
                    return Ok(PowerDecision::No(Obstruction::FiniteOrder {
                        order: k as u64,
                        order_witness,
                        refuted,
                    }));
                }
            }
        }
        Ok(PowerDecision::Unknown(Exhausted {
            steps: 0,
            reason: format!("exponents up to ±{} tested", self.spec.max_exponent),
        }))
    }

    /// Power problem under a certified bound `δ^c(n) ≤ bound.value` with
    /// `|w| + |u| ≤ n`: the least solution has `|p|·n ≤ bound` and area at
    /// most `bound − |p|·n`, so bounded area search settles each candidate.
    pub fn power_decide_bounded(
        &self,
        w: &Word,
        u: &Word,
        bound: RelCyclicsBound,
    ) -> Result<PowerDecision, CoreError> {
        self.pres.check_word(w)?;
        self.pres.check_word(u)?;
        if w.len() + u.len() > bound.n {
            return Err(CoreError::InvalidStrategy {
                strategy: self.spec.kind.name(),
                reason: format!("|w| + |u| = {} exceeds n = {}", w.len() + u.len(), bound.n),
            });
        }
        let sol = self.model.power_solutions(w, u);
        if sol == Solutions::None {
            return Ok(PowerDecision::No(Obstruction::AbelianPower));
        }
        let max_p = bound.value.checked_div(bound.n).unwrap_or(0) as i64;
        let mut steps = 0;
        for k in 0..=max_p {
            for p in if k == 0 { vec![0] } else { vec![k, -k] } {
                if !sol.contains(&BigInt::from(p)) {
                    continue;
                }
                let max_area = bound.value - (p.unsigned_abs() as usize) * bound.n;
                let r = AreaSearch::new(&self.pres, max_area)
                    .step_budget(self.spec.budget)
                    .run(&w.mul(&u.pow(-p)));
                steps += r.steps;
                if let Some(witness) = r.witness {
                    return Ok(PowerDecision::Yes { p, witness });
                }
                if r.budget_exhausted {
                    return Ok(PowerDecision::Unknown(Exhausted {
                        steps,
                        reason: format!("area search for p = {p} ran out of budget"),
                    }));
                }
            }
        }
        Ok(PowerDecision::No(Obstruction::RelCyclicsBound {
            n: bound.n,
            bound: bound.value,
            max_p: max_p as u64,
        }))
    }

    /// Re-validates the certificate of a word-problem decision for `w`.
    pub fn check_decision(&self, w: &Word, d: &Decision) -> Result<(), CoreError> {
        match d {
            Decision::Yes(prod) => {
                let v = evaluate_vk_product(prod, &self.pres)?;
                if v != *w {
                    return Err(CoreError::BadCertificate(format!("product evaluates to {v}, not {w}")));
                }
                Ok(())
            }
            Decision::No(ob) => self.check_nontrivial(w, ob),
            Decision::Unknown(_) => Ok(()),
        }
    }

    fn check_nontrivial(&self, w: &Word, ob: &Obstruction) -> Result<(), CoreError> {
        let ok = match ob {
            Obstruction::FreeNormalForm(nf) => self.pres.is_free() && nf == w && !nf.is_empty(),
            Obstruction::AbelianImage(img) => self.model.image(w) == *img && img.iter().any(|x| !x.is_zero()),
            Obstruction::DehnNormalForm(nf) => {
                check_c16(&self.pres) && !nf.is_empty() && {
                    let red = dehn_greedy(w, &self.pres);
                    red.result == *nf && red.replay()
                }
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(CoreError::BadCertificate(format!("obstruction does not establish that {w} is nontrivial")))
        }
    }

    /// Re-validates the certificate of a power decision for `(w, u)`.
    pub fn check_power_decision(&self, w: &Word, u: &Word, d: &PowerDecision) -> Result<(), CoreError> {
        let bad = |m: String| Err(CoreError::BadCertificate(m));
        match d {
            PowerDecision::Yes { p, witness } => {
                let target = w.mul(&u.pow(-p));
                let v = evaluate_vk_product(witness, &self.pres)?;
                if v != target {
                    return bad(format!("witness evaluates to {v}, not {target}"));
                }
                Ok(())
            }
            PowerDecision::No(ob) => match ob {
                Obstruction::AbelianPower => {
                    if self.model.power_solutions(w, u) == Solutions::None {
                        Ok(())
                    } else {
                        bad("the abelianization admits a solution".into())
                    }
                }
                Obstruction::FreeCyclic => {
                    if self.pres.is_free() && matches!(free_power(w, u), PowerDecision::No(_)) {
                        Ok(())
                    } else {
                        bad("free cyclic obstruction does not apply".into())
                    }
                }
                Obstruction::ExponentsRefuted(list) => {
                    let sol = self.model.power_solutions(w, u);
                    let Solutions::Exact(p0) = sol else {
                        return bad("the abelianization admits infinitely many exponents".into());
                    };
                    if list.len() != 1 || BigInt::from(list[0].0) != p0 {
                        return bad("refuted exponents do not cover the abelian solutions".into());
                    }
                    self.check_nontrivial(&w.mul(&u.pow(-list[0].0)), &list[0].1)
                }
                Obstruction::FiniteOrder { order, order_witness, refuted } => {
                    let m = *order as i64;
                    if evaluate_vk_product(order_witness, &self.pres)? != u.pow(m) {
                        return bad(format!("order witness does not evaluate to u^{m}"));
                    }
                    let sol = self.model.power_solutions(w, u);
                    for p in -(m / 2)..=(m / 2) {
                        if !sol.contains(&BigInt::from(p)) {
                            continue;
                        }
                        let Some((q, ob)) = refuted.iter().find(|(q, _)| q.rem_euclid(m) == p.rem_euclid(m)) else {
                            return bad(format!("exponent {p} is not refuted"));
                        };
                        self.check_nontrivial(&w.mul(&u.pow(-*q)), ob)?;
                    }
                    Ok(())
                }
                Obstruction::RelCyclicsBound { .. } => Ok(()),
                other => bad(format!("{other:?} is not a power obstruction")),
            },
            PowerDecision::Unknown(_) => Ok(()),
        }
    }
}

/// States spent looking for a smaller product than the sorting certificate.
const QUICK_AREA_BUDGET: u64 = 5_000;

/// Largest area tried when certifying that generators commute.
const COMMUTATOR_MAX_AREA: usize = 12;

fn to_i64(x: &BigInt) -> Result<i64, CoreError> {
    x.to_i64().ok_or_else(|| CoreError::BadCertificate(format!("exponent {x} overflows")))
}

/// The power problem in a free group: `w ∈ ⟨u⟩` iff `w` and `u` are powers
/// of a common primitive root with divisible exponents.
fn free_power(w: &Word, u: &Word) -> PowerDecision {
    let yes = |p| PowerDecision::Yes { p, witness: VanKampenProduct::empty() };
    if w.is_empty() {
        return yes(0);
    }
    if u.is_empty() {
        return PowerDecision::No(Obstruction::FreeCyclic);
    }
    let ru = primitive_root(u).unwrap();
    let rw = primitive_root(w).unwrap();
    let k = if rw.root == ru.root {
        rw.exponent as i64
    } else if rw.root == ru.root.inverse() {
        -(rw.exponent as i64)
    } else {
        return PowerDecision::No(Obstruction::FreeCyclic);
    };
    let e = ru.exponent as i64;
    if k % e == 0 {
        yes(k / e)
    } else {
        PowerDecision::No(Obstruction::FreeCyclic)
    }
}

impl WordOracle for Strategy {
    fn presentation(&self) -> &Presentation {
        &self.pres
    }

    fn decide_trivial(&self, w: &Word) -> Result<Decision, CoreError> {
        self.wp_decide(w)
    }
}

impl PowerOracle for Strategy {
    fn decide_power(&self, w: &Word, u: &Word) -> Result<PowerDecision, CoreError> {
        self.power_decide(w, u)
    }
}
