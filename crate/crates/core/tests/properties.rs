use fibre_core::word::reduced_words;
use fibre_core::*;
use proptest::prelude::*;
use proptest::strategy::Strategy as Gen;
use fibre_core::Strategy;

fn pres(text: &str) -> Presentation {
    text.parse().unwrap()
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn abelian(p: &Presentation) -> Strategy {
    Strategy::new(p, StrategySpec::new(StrategyKind::Abelian)).unwrap()
}

fn raw_letters(gens: &'static str, max: usize) -> impl Gen<Value = Vec<Letter>> {
    let letters: Vec<Letter> = gens.chars().flat_map(|c| [c, c.to_ascii_uppercase()]).map(|c| Letter::from_char(c).unwrap()).collect();
    prop::collection::vec(prop::sample::select(letters), 0..=max)
}

fn word(gens: &'static str, max: usize) -> impl Gen<Value = Word> {
    raw_letters(gens, max).prop_map(free_reduce)
}

fn nonempty(gens: &'static str, max: usize) -> impl Gen<Value = Word> {
    word(gens, max).prop_filter("nonempty", |x| !x.is_empty())
}

/// Exhaustive root oracle: the largest `e` and matching `z` with
/// `z^e = w`, trying every reduced `z` shorter than `w`.
fn exhaustive_root(x: &Word) -> (Word, i64) {
    let mut best = (x.clone(), 1);
    for len in 1..x.len() {
        for z in reduced_words(b"ab", len) {
            if z.first() != x.first() {
                continue;
            }
            let mut e = 2;
            loop {
                let p = z.pow(e);
                if p.len() > x.len() {
                    break;
                }
                if p == *x && e > best.1 {
                    best = (z.clone(), e);
                }
                e += 1;
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn free_reduce_is_idempotent_and_shortening(raw in raw_letters("abc", 16)) {
        let r = free_reduce(raw.clone());
        prop_assert!(r.len() <= raw.len());
        prop_assert_eq!(free_reduce(r.letters().iter().copied()), r.clone());
        prop_assert!(r.mul(&r.inverse()).is_empty());
    }

    #[test]
    fn cyclic_reduce_round_trips(x in word("ab", 12)) {
        let (core, c) = cyclic_reduce(&x);
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(core.conjugate_by(&c), x);
    }

    #[test]
    fn conjugator_witness_is_exact(u in word("ab", 8), x in word("ab", 5), k in 0usize..8) {
        let (core, c) = cyclic_reduce(&u.conjugate_by(&x));
        let v = core.rotate(k % core.len().max(1)).conjugate_by(&c);
        let found = free_conjugator(&u, &v).expect("v is conjugate to u by construction");
        prop_assert_eq!(u.conjugate_by(&found), v);
    }

    #[test]
    fn conjugacy_is_symmetric(u in word("ab", 6), v in word("ab", 6)) {
        let there = free_conjugator(&u, &v);
        let back = free_conjugator(&v, &u);
        prop_assert_eq!(there.is_some(), back.is_some());
        if let Some(x) = there {
            prop_assert_eq!(u.conjugate_by(&x), v.clone());
        }
    }

    #[test]
    fn proper_powers_are_detected(z in nonempty("ab", 5), e in 2i64..4) {
        let (core, _) = cyclic_reduce(&z);
        prop_assume!(!core.is_empty());
        prop_assert!(is_proper_power(&z.pow(e)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn primitive_root_matches_exhaustive_search(x in nonempty("ab", 10)) {
        let r = primitive_root(&x).unwrap();
        prop_assert_eq!(r.root.pow(r.exponent as i64), x.clone());
        prop_assert!(!is_proper_power(&r.root).unwrap());
        let (z, e) = exhaustive_root(&x);
        prop_assert_eq!(r.root.len(), z.len());
        prop_assert_eq!(r.exponent as i64, e);
        prop_assert_eq!(is_proper_power(&x).unwrap(), e >= 2);
    }

    #[test]
    fn area_witness_noise_is_bounded(x in word("ab", 3), y in word("ab", 3), pick in 0usize..2) {
        let p = pres("generators: a b\nrelators: abAB");
        let r = [w("abAB"), w("baBA")][pick].clone();
        let target = r.conjugate_by(&x).mul(&r.inverse().conjugate_by(&y).inverse());
        let res = area_bounded(&target, 4, &p);
        let a = res.value.expect("area at most 2");
        let wit = res.witness.unwrap();
        prop_assert_eq!(evaluate_vk_product(&wit, &p).unwrap(), target.clone());
        prop_assert_eq!(wit.area(), a);
        prop_assert!(wit.noise() <= a * p.max_relator_len() + target.len());
    }

    #[test]
    fn area_is_subadditive(x in word("ab", 2), y in word("ab", 2), i in 0usize..3, j in 0usize..3) {
        let p = pres("generators: a b\nrelators: abAB");
        let rels = [w("abAB"), w("baBA"), w("abbABB")];
        let w1 = rels[i].conjugate_by(&x);
        let w2 = rels[j].conjugate_by(&y);
        let st = abelian(&p);
        prop_assume!(st.wp_decide(&w1).unwrap().is_yes() && st.wp_decide(&w2).unwrap().is_yes());
        let a1 = area_bounded(&w1, 8, &p).value.unwrap();
        let a2 = area_bounded(&w2, 8, &p).value.unwrap();
        let a12 = area_bounded(&w1.mul(&w2), a1 + a2, &p).value;
        prop_assert!(a12.is_some_and(|a| a <= a1 + a2));
    }

    #[test]
    fn abelian_certificates_check(x in word("ab", 12)) {
        let p = pres("generators: a b\nrelators: abAB");
        let st = abelian(&p);
        let d = st.wp_decide(&x).unwrap();
        let zero = x.exponent_sums(b"ab").iter().all(|&e| e == 0);
        prop_assert_eq!(d.is_yes(), zero);
        prop_assert!(!d.is_unknown());
        st.check_decision(&x, &d).unwrap();
    }

    #[test]
    fn dehn_rewrites_shorten(x in word("abcd", 16)) {
        let p = pres("generators: a b c d\nrelators: abABcdCD");
        let red = dehn_greedy(&x, &p);
        prop_assert!(red.steps.len() <= x.len());
        for s in &red.steps {
            prop_assert!(s.after.len() < s.before.len());
        }
        prop_assert!(red.replay());
        prop_assert_eq!(evaluate_vk_product(&red.to_vk_product(), &p).unwrap(), x.mul(&red.result.inverse()));
    }

    #[test]
    fn power_decide_is_minimal(x in word("ab", 4), u in word("ab", 3)) {
        for text in ["generators: a b\nrelators: b", "generators: a b\nrelators: abAB"] {
            let p = pres(text);
            let st = abelian(&p);
            let d = st.power_decide(&x, &u).unwrap();
            st.check_power_decision(&x, &u, &d).unwrap();
            let brute = brute_power(&x, &u, &st, &SearchBudget { max_length: 6, ..SearchBudget::default() }).unwrap();
            match d {
                PowerDecision::Yes { p, .. } => prop_assert_eq!(brute.map(i64::abs), Some(p.abs())),
                PowerDecision::No(_) => prop_assert_eq!(brute, None),
                PowerDecision::Unknown(_) => prop_assert!(false, "abelian power problem is exact"),
            }
        }
    }
}

fn pair_strategy(gens: &'static str, max: usize) -> impl Gen<Value = (Word, Word)> {
    (word(gens, max), word(gens, max))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn conjugacy_is_invariant_under_generators((a, b) in pair_strategy("ab", 3), k in 0usize..4, seed in 0u64..1000) {
        let p = pres("generators: a b\nrelators: b");
        let setup = canonical_setup(&p);
        let st = abelian(&p);
        let u = PairElement::new(a.clone(), a.mul(&w("b").pow((seed % 3) as i64)));
        let gens = setup.p_generators();
        let g = gens[k % gens.len()].clone();
        let v = u.conjugate_by(&gens[(k + 1) % gens.len()]);
        let before = p_conjugacy(&u, &v, &setup, &st).unwrap().verdict;
        let after = p_conjugacy(&u.conjugate_by(&g), &v.conjugate_by(&g), &setup, &st).unwrap().verdict;
        prop_assert!(matches!(before, ConjugacyVerdict::Yes(_)));
        prop_assert!(matches!(after, ConjugacyVerdict::Yes(_)));
        let _ = b;
    }

    #[test]
    fn conjugacy_verdicts_are_verified((a1, a2) in pair_strategy("ab", 4), (b1, b2) in pair_strategy("ab", 4)) {
        let p = pres("generators: a b\nrelators: abAB");
        let setup = canonical_setup(&p);
        let st = abelian(&p);
        let u = PairElement::new(a1.clone(), a1.mul(&w("abAB").pow(a2.len() as i64 % 2)));
        let v = PairElement::new(b1.clone(), b1.mul(&w("baBA").pow(b2.len() as i64 % 2)));
        let res = p_conjugacy(&u, &v, &setup, &st).unwrap();
        let factorwise = free_conjugator(&u.first, &v.first).is_some() && free_conjugator(&u.second, &v.second).is_some();
        match &res.verdict {
            ConjugacyVerdict::Yes(g) => {
                verify_conjugator(&u, &v, g, &st).unwrap();
                res.replay(&u, &v, &st).unwrap();
                prop_assert!(factorwise);
            }
            ConjugacyVerdict::No => {
                let brute = brute_p_conjugacy(&u, &v, &setup, &SearchBudget { max_length: 3, ..SearchBudget::default() });
                prop_assert!(!matches!(brute, BruteConjugacy::Found(_)));
            }
            ConjugacyVerdict::Unknown(_) => {}
        }
    }

    /// With no relators `P` is the diagonal, so conjugacy in `P` is
    /// simultaneous conjugacy in `F`.
    #[test]
    fn diagonal_conjugacy_is_simultaneous(u in nonempty("ab", 4), x in word("ab", 4), y in word("ab", 3), twist in any::<bool>()) {
        let p = pres("generators: a b\nrelators:");
        let setup = canonical_setup(&p);
        let st = Strategy::new(&p, StrategySpec::new(StrategyKind::Free)).unwrap();
        let uu = PairElement::diagonal(&u);
        let v = if twist {
            PairElement::new(u.conjugate_by(&x), u.conjugate_by(&y))
        } else {
            PairElement::diagonal(&u.conjugate_by(&x))
        };
        prop_assume!(v.first == v.second);
        let res = p_conjugacy(&uu, &v, &setup, &st).unwrap();
        // the solutions of z⁻¹uz = v₁ are ⟨root(u)⟩·x, all of which also
        // conjugate u to v₂ = v₁
        match res.verdict {
            ConjugacyVerdict::Yes(g) => {
                prop_assert_eq!(&g.first, &g.second);
                prop_assert_eq!(u.conjugate_by(&g.first), v.first);
            }
            other => prop_assert!(false, "expected Yes, got {other:?}"),
        }
    }

    #[test]
    fn simultaneous_conjugacy_oracle(u1 in nonempty("ab", 3), u2 in nonempty("ab", 3), x in word("ab", 3), y in word("ab", 3)) {
        let p = pres("generators: a b\nrelators:");
        let setup = canonical_setup(&p);
        let st = Strategy::new(&p, StrategySpec::new(StrategyKind::Free)).unwrap();
        // elements of the diagonal
        let u = PairElement::diagonal(&u1.mul(&u2));
        let v = PairElement::new(u.first.conjugate_by(&x), u.first.conjugate_by(&y));
        prop_assume!(v.first == v.second || free_conjugator(&v.first, &v.second).is_some());
        if v.first != v.second {
            // v is not in P, so the question is ill-posed
            prop_assert!(p_conjugacy(&u, &v, &setup, &st).is_err());
            return Ok(());
        }
        let expected = (0..=6).any(|len| reduced_words(b"ab", len).iter().any(|z| u.first.conjugate_by(z) == v.first));
        let got = matches!(p_conjugacy(&u, &v, &setup, &st).unwrap().verdict, ConjugacyVerdict::Yes(_));
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn perturbation_preserves_the_image(x in word("ab", 5)) {
        let p = pres("generators: a b\nrelators: b");
        let setup = canonical_setup(&p);
        let st = abelian(&p);
        let cfg = PerturbConfig::default();
        let r = power_avoid(&x, &cfg, &setup, &st).unwrap();
        r.verify(&st).unwrap();
        prop_assert_eq!(power_avoid(&x, &cfg, &setup, &st).unwrap(), r);
    }
}

#[test]
fn area_agrees_with_breadth_first_search() {
    for (text, max) in [("generators: a b\nrelators: abAB", 6), ("generators: a\nrelators: aaa", 9)] {
        let p = pres(text);
        let st = abelian(&p);
        for len in 0..=max {
            for x in reduced_words(p.generators(), len) {
                if st.wp_decide(&x).unwrap().is_yes() {
                    let a = area_bounded(&x, 8, &p).value.unwrap();
                    assert_eq!(brute_area(&x, &p, &SearchBudget::default()).unwrap(), a, "{x}");
                }
            }
        }
    }
}

#[test]
fn dehn_function_is_monotone() {
    let p = pres("generators: a b\nrelators: b");
    let st = abelian(&p);
    let mut prev = 0;
    for n in 0..=4 {
        let d = dehn_function(n, &p, &st).unwrap().value;
        let c = rel_cyclics_dehn(n, &p, &st, &st).unwrap().value;
        assert!(d >= prev && c >= d, "n = {n}: δ = {d}, δᶜ = {c}");
        prev = d;
    }
}

#[test]
fn decisions_are_deterministic() {
    let p = pres("generators: a b\nrelators: abAB");
    let setup = canonical_setup(&p);
    let st = abelian(&p);
    let b = SearchBudget { seed: 7, ..SearchBudget::default() };
    let run = || -> Vec<ConjugacyResult> {
        random_instances(&setup, &b, 0.5).take(20).map(|i| p_conjugacy(&i.u, &i.v, &setup, &st).unwrap()).collect()
    };
    assert_eq!(run(), run());
}
