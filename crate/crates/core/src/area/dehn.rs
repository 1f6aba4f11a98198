//! Finite values of the Dehn function and the rel-cyclics Dehn function.

use std::collections::HashMap;

use super::{AreaSearch, VanKampenProduct};
use crate::error::CoreError;
use crate::oracle::{Decision, PowerDecision, PowerOracle, WordOracle};
use crate::presentation::Presentation;
use crate::word::{cyclic_reduce, reduced_words, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnValue {
    pub n: usize,
    pub value: usize,
    /// A word of length at most `n` with area `value`.
    pub word: Word,
    pub witness: VanKampenProduct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelCyclicsValue {
    pub n: usize,
    pub value: usize,
    pub w: Word,
    pub u: Word,
    /// Least `|p|` with `w = u^p`, signed.
    pub p: i64,
    /// Area of `w·u^{-p}`.
    pub area: usize,
}

/// Area is a conjugacy invariant and is preserved by inversion, so it only
/// depends on the cyclic word of the cyclic core up to inversion.
fn cyclic_class(w: &Word) -> Word {
    let (core, _) = cyclic_reduce(w);
    let inv = core.inverse();
    (0..core.len().max(1))
        .flat_map(|k| [core.rotate(k), inv.rotate(k)])
        .min()
        .unwrap_or_default()
}

/// Memoized exact area, given a product certifying an upper bound.
struct AreaCache<'p> {
    pres: &'p Presentation,
    known: HashMap<Word, usize>,
}

impl<'p> AreaCache<'p> {
    fn new(pres: &'p Presentation) -> Self {
        AreaCache { pres, known: HashMap::new() }
    }

    fn area(&mut self, w: &Word, upper: &VanKampenProduct) -> Result<(usize, VanKampenProduct), CoreError> {
        let class = cyclic_class(w);
        let start = self.known.get(&class).copied().unwrap_or(0);
        // a minimal-area product exists within the noise bound, so searching
        // up to the certificate's area always succeeds
        let r = AreaSearch::new(self.pres, upper.area().max(start)).start_at(start).run(w);
        match (r.value, r.witness) {
            (Some(a), Some(wit)) => {
                self.known.insert(class, a);
                Ok((a, wit))
            }
            _ => Err(CoreError::BadCertificate(format!(
                "no product of area at most {} found for {w}",
                upper.area()
            ))),
        }
    }
}

fn undecided(w: &Word, reason: &str) -> CoreError {
    CoreError::Undecided(format!("{w}: {reason}"))
}

/// `max { Area(w) : |w| ≤ n, w = 1 in Q }`, over freely reduced `w`.
pub fn dehn_function(n: usize, pres: &Presentation, wp: &impl WordOracle) -> Result<DehnValue, CoreError> {
    let mut best = DehnValue { n, value: 0, word: Word::empty(), witness: VanKampenProduct::empty() };
    let mut cache = AreaCache::new(pres);
    for len in 1..=n {
        for w in reduced_words(pres.generators(), len) {
            match wp.decide_trivial(&w)? {
                Decision::Yes(cert) => {
                    let (a, wit) = cache.area(&w, &cert)?;
                    if a > best.value {
                        best = DehnValue { n, value: a, word: w, witness: wit };
                    }
                }
                Decision::No(_) => {}
                Decision::Unknown(e) => return Err(undecided(&w, &e.reason)),
            }
        }
    }
    Ok(best)
}

/// `max { Area(w·u^{-p}) + |p|·n }` over reduced pairs with `|w| + |u| ≤ n`
/// and `w ∈ ⟨u⟩` in `Q`, where `p` has least absolute value.
///
/// `pp` decides membership; the least `|p|` is then located with `wp` by
/// testing `p = 0, 1, −1, …` up to the exponent `pp` returned.
pub fn rel_cyclics_dehn(
    n: usize,
    pres: &Presentation,
    pp: &impl PowerOracle,
    wp: &impl WordOracle,
) -> Result<RelCyclicsValue, CoreError> {
    let mut best = RelCyclicsValue { n, value: 0, w: Word::empty(), u: Word::empty(), p: 0, area: 0 };
    let mut cache = AreaCache::new(pres);
    let words: Vec<Vec<Word>> = (0..=n).map(|k| reduced_words(pres.generators(), k)).collect();
    for total in 0..=n {
        for lw in 0..=total {
            for w in &words[lw] {
                for u in &words[total - lw] {
                    let bound = match pp.decide_power(w, u)? {
                        PowerDecision::Yes { p, .. } => p.unsigned_abs() as i64,
                        PowerDecision::No(_) => continue,
                        PowerDecision::Unknown(e) => return Err(undecided(w, &e.reason)),
                    };
                    let mut found = None;
                    'search: for k in 0..=bound {
                        for p in if k == 0 { vec![0] } else { vec![k, -k] } {
                            let x = w.mul(&u.pow(-p));
                            match wp.decide_trivial(&x)? {
                                Decision::Yes(cert) => {
                                    found = Some((p, x, cert));
                                    break 'search;
                                }
                                Decision::No(_) => {}
                                Decision::Unknown(e) => return Err(undecided(&x, &e.reason)),
                            }
                        }
                    }
                    let (p, x, cert) = found.ok_or_else(|| {
                        CoreError::BadCertificate(format!("the word oracle refutes every exponent for ({w}, {u})"))
                    })?;
                    let (area, _) = cache.area(&x, &cert)?;
                    let value = area + p.unsigned_abs() as usize * n;
                    if value > best.value {
                        best = RelCyclicsValue { n, value, w: w.clone(), u: u.clone(), p, area };
                    }
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Strategy, StrategyKind, StrategySpec};

    fn setup(p: &str) -> (Presentation, Strategy) {
        let pres: Presentation = p.parse().unwrap();
        let s = Strategy::new(&pres, StrategySpec::new(StrategyKind::Abelian)).unwrap();
        (pres, s)
    }

    #[test]
    fn dehn_small_values() {
        let (p, s) = setup("generators: a b\nrelators: abAB");
        assert_eq!(dehn_function(0, &p, &s).unwrap().value, 0);
        assert_eq!(dehn_function(3, &p, &s).unwrap().value, 0);
        let d4 = dehn_function(4, &p, &s).unwrap();
        assert_eq!(d4.value, 1);
        assert_eq!(d4.word.len(), 4);
    }

    #[test]
    fn rel_cyclics_small_values() {
        let (p, s) = setup("generators: a b\nrelators: b");
        assert_eq!(rel_cyclics_dehn(0, &p, &s, &s).unwrap().value, 0);
        let v = rel_cyclics_dehn(4, &p, &s, &s).unwrap();
        assert_eq!(v.value, 12);
        assert_eq!(v.p.unsigned_abs(), 3);

        let (p, s) = setup("generators: a\nrelators: aaa");
        let v = rel_cyclics_dehn(3, &p, &s, &s).unwrap();
        // (aa, a) contributes Area(aaa) + 1·3
        assert!(v.value >= 4);
    }

    #[test]
    fn cyclic_class_is_conjugation_invariant() {
        let w: Word = "abAB".parse().unwrap();
        let c = w.conjugate_by(&"ba".parse().unwrap());
        assert_eq!(cyclic_class(&w), cyclic_class(&c));
        assert_eq!(cyclic_class(&w), cyclic_class(&w.inverse()));
    }
}
