//! Invariant suites: randomized and property-based checks of the algebraic
//! contracts, with seeded generators so failures reproduce.

mod common;

use common::*;
use monoconj::gln::decide_by_filters_and_search;
use monoconj::{
    classify, conjugate_2x2, degree_growth, dynamical_degrees, enumerate_reduced, lls_period,
    parse_map, print_map, realize, reduce, search_conjugator, verify_certificate,
    ConjugacyVerdict, IntMatrix, LLSPeriod, MonomialMap, Order, SpectrumClass,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn m2(p: i64, r: i64, q: i64, s: i64) -> IntMatrix {
    IntMatrix::from_rows(&[vec![p, r], vec![q, s]]).unwrap()
}

proptest! {
    #[test]
    fn det_is_multiplicative(a in prop::collection::vec(-5i64..=5, 9), b in prop::collection::vec(-5i64..=5, 9)) {
        let ma = IntMatrix::new(3, a.into_iter().map(BigInt::from).collect()).unwrap();
        let mb = IntMatrix::new(3, b.into_iter().map(BigInt::from).collect()).unwrap();
        prop_assert_eq!(ma.mul(&mb).unwrap().det(), ma.det() * mb.det());
    }

    #[test]
    fn smith_form_verifies(entries in prop::collection::vec(-9i64..=9, 16)) {
        let m = IntMatrix::new(4, entries.into_iter().map(BigInt::from).collect()).unwrap();
        let s = m.smith_normal_form();
        prop_assert!(s.verify(&m));
    }

    #[test]
    fn composition_degree_is_submultiplicative(seed in 0u64..5000) {
        let mut generator = rng(seed);
        let f = MonomialMap::new(random_unimodular(&mut generator, 3, 6, 60)).unwrap();
        let g = MonomialMap::new(random_unimodular(&mut generator, 3, 6, 60)).unwrap();
        let fg = f.compose(&g).unwrap();
        prop_assert!(fg.projective_degree() >= BigInt::one());
        prop_assert!(fg.projective_degree() <= f.projective_degree() * g.projective_degree());
    }
}

#[test]
fn permutation_maps_have_degree_one() {
    // Coordinate permutations are linear, so their projective degree is 1;
    // anything with an exponent of size >= 2 is not.
    for rows in [
        vec![vec![1i64, 0], vec![0, 1]],
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
    ] {
        let f = MonomialMap::new(IntMatrix::from_rows(&rows).unwrap()).unwrap();
        assert_eq!(f.projective_degree(), BigInt::one());
    }
    let f = parse_map("x*y^2, x*y").unwrap();
    assert!(f.projective_degree() > BigInt::one());
}

#[test]
fn char_poly_is_conjugation_invariant() {
    let mut generator = rng(11);
    for _ in 0..50 {
        let a = random_unimodular(&mut generator, 4, 8, 200);
        let p = random_unimodular(&mut generator, 4, 8, 200);
        let b = p
            .mul(&a)
            .unwrap()
            .mul(&p.inverse_unimodular().unwrap())
            .unwrap();
        assert_eq!(a.char_poly(), b.char_poly());
    }
}

#[test]
fn exterior_power_is_functorial() {
    let mut generator = rng(12);
    for _ in 0..25 {
        let a = random_unimodular(&mut generator, 4, 6, 100);
        let b = random_unimodular(&mut generator, 4, 6, 100);
        let ab = a.mul(&b).unwrap();
        for k in 1..=4 {
            let lhs = ab.exterior_power(k).unwrap();
            let rhs = a
                .exterior_power(k)
                .unwrap()
                .mul(&b.exterior_power(k).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn parse_print_round_trip_on_random_maps() {
    let mut generator = rng(13);
    for _ in 0..100 {
        let n = generator.gen_range(2..=5usize);
        let f = MonomialMap::new(random_unimodular(&mut generator, n, 10, 50)).unwrap();
        let text = print_map(&f);
        let back = parse_map(&text).unwrap();
        assert_eq!(back, f, "round trip through {text}");
    }
}

#[test]
fn composition_is_matrix_multiplication() {
    let mut generator = rng(14);
    for _ in 0..50 {
        let f = MonomialMap::new(random_unimodular(&mut generator, 3, 8, 100)).unwrap();
        let g = MonomialMap::new(random_unimodular(&mut generator, 3, 8, 100)).unwrap();
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.matrix(), &f.matrix().mul(g.matrix()).unwrap());
        assert!(f.compose(&f.inverse()).unwrap().matrix().is_identity());
    }
}

#[test]
fn finite_order_iff_cyclotomic_spectrum() {
    // Finite order needs every eigenvalue to be a root of unity; the shear
    // has unit eigenvalues but infinite order, so the power check matters.
    assert_eq!(parse_map("x*y, y").unwrap().order(), Order::Infinite);
    let mut generator = rng(15);
    for _ in 0..50 {
        let f = MonomialMap::new(random_unimodular(&mut generator, 3, 6, 40)).unwrap();
        match f.order() {
            Order::Finite(k) => {
                assert!(f.pow(k).matrix().is_identity());
                for d in 1..k {
                    assert!(!f.pow(d).matrix().is_identity(), "order {k} is not minimal");
                }
            }
            Order::Infinite => {
                for d in 1..=12u64 {
                    assert!(!f.pow(d).matrix().is_identity());
                }
            }
        }
    }
}

#[test]
fn dynamical_degrees_are_conjugation_invariant() {
    // Conjugate matrices have identical exterior-power characteristic
    // polynomials, which is the exact statement behind invariance.
    let mut generator = rng(16);
    for _ in 0..25 {
        let a = random_unimodular(&mut generator, 3, 8, 100);
        let p = random_unimodular(&mut generator, 3, 8, 100);
        let b = p
            .mul(&a)
            .unwrap()
            .mul(&p.inverse_unimodular().unwrap())
            .unwrap();
        for k in 1..=3 {
            assert_eq!(
                a.exterior_power(k).unwrap().char_poly(),
                b.exterior_power(k).unwrap().char_poly()
            );
        }
    }
}

#[test]
fn degree_growth_estimates_first_degree() {
    // The L-th root estimator carries a bias C^(1/L) from the leading
    // coefficient of the degree sequence; on moderately sized shear products
    // (lambda between 2.6 and 5.9) it sits within 1e-1 of lambda_1 at L = 20.
    let lower = |k: i64| IntMatrix::from_rows(&[vec![1, 0], vec![k, 1]]).unwrap();
    let upper = |k: i64| IntMatrix::from_rows(&[vec![1, k], vec![0, 1]]).unwrap();
    for a in 1..=2i64 {
        for b in 1..=2i64 {
            let m = lower(a).mul(&upper(b)).unwrap();
            let f = MonomialMap::new(m).unwrap();
            let profile = dynamical_degrees(&f, 1e-9).unwrap();
            assert!(profile.lambdas[0] >= 1.2);
            let (_, rate) = degree_growth(&f, 20).unwrap();
            assert!(
                (rate - profile.lambdas[0]).abs() < 1e-1,
                "rate {rate} vs lambda {} for a={a}, b={b}",
                profile.lambdas[0]
            );
        }
    }
}

#[test]
fn reduction_output_is_reduced_and_certified() {
    let mut generator = rng(18);
    for _ in 0..200 {
        let m = random_hyperbolic(&mut generator, true);
        let r = reduce(&m).unwrap();
        let (p, q, s) = (r.reduced.get(0, 0), r.reduced.get(1, 0), r.reduced.get(1, 1));
        assert!(s > q && q > p && !p.is_negative(), "not reduced: {}", r.reduced);
        assert!(r.conjugator.det().is_one());
        let base = if r.sign < 0 { m.neg() } else { m.clone() };
        let lhs = r.conjugator.mul(&base).unwrap();
        let rhs = r.reduced.mul(&r.conjugator).unwrap();
        assert_eq!(lhs, rhs);
        // The reduced matrix realizes its own period.
        assert_eq!(realize(&lls_period(&r.reduced).unwrap()), r.reduced);
    }
}

#[test]
fn enumeration_count_matches_minimal_period() {
    let mut generator = rng(19);
    for _ in 0..100 {
        let m = random_hyperbolic(&mut generator, false);
        let period = lls_period(&m).unwrap();
        let reduced = enumerate_reduced(&m).unwrap();
        assert_eq!(reduced.len(), period.minimal_period().len());
        assert!(reduced.contains(&reduce(&m).unwrap().reduced));
    }
}

#[test]
fn complex_spectrum_classes_are_exhaustive_for_small_entries() {
    // Every determinant-one matrix with |trace| <= 1 has complex spectrum and
    // classifies to one of exactly three representatives with orders 6, 4, 3.
    let reps = [
        (m2(1, 1, -1, 0), 6u64),
        (m2(0, 1, -1, 0), 4),
        (m2(0, 1, -1, -1), 3),
    ];
    let mut seen = 0;
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            for c in -4i64..=4 {
                for d in -4i64..=4 {
                    if a * d - b * c != 1 || (a + d).abs() > 1 {
                        continue;
                    }
                    seen += 1;
                    let m = m2(a, b, c, d);
                    match classify(&m).unwrap() {
                        SpectrumClass::ComplexSpectrum { representative, order } => {
                            assert!(reps.iter().any(|(r, o)| *r == representative && *o == order));
                        }
                        other => panic!("classify({m}) gave {other:?}"),
                    }
                }
            }
        }
    }
    // Determinant 1 with |trace| <= 1 is a tight constraint: the sweep finds
    // a few dozen matrices, all of which must classify to the three classes.
    assert!(seen >= 30, "the sweep should cover the small matrices, saw {seen}");
}

#[test]
fn classify_equality_matches_brute_force_conjugacy_on_small_instances() {
    // In the finite-order and parabolic branches, equal classes must mean
    // conjugate and unequal classes must mean non-conjugate; cross-checked
    // against an exhaustive conjugator search with small entries.
    let mut small: Vec<IntMatrix> = Vec::new();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                for d in -2i64..=2 {
                    if a * d - b * c != 1 || (a + d).abs() > 2 {
                        continue;
                    }
                    small.push(m2(a, b, c, d));
                }
            }
        }
    }
    let classes: Vec<_> = small.iter().map(|m| classify(m).unwrap()).collect();
    for i in 0..small.len() {
        for j in (i + 1)..small.len().min(i + 40) {
            let same_class = classes[i] == classes[j];
            let brute = brute_conjugator(&small[i], &small[j], 6).is_some();
            match conjugate_2x2(&small[i], &small[j]).unwrap() {
                ConjugacyVerdict::Conjugate { certificate } => {
                    assert!(same_class);
                    assert!(verify_certificate(&small[i], &small[j], &certificate));
                }
                ConjugacyVerdict::NotConjugate { .. } => {
                    assert!(!same_class);
                    assert!(
                        !brute,
                        "{} vs {} declared non-conjugate but a conjugator exists",
                        small[i], small[j]
                    );
                }
                ConjugacyVerdict::Undecided { .. } => panic!("2x2 det 1 must be decided"),
            }
        }
    }
}

#[test]
fn generic_search_agrees_with_complete_route_on_2x2() {
    let mut generator = rng(20);
    let mut decided = 0;
    for sample in 0..200 {
        let a = random_hyperbolic(&mut generator, false);
        let b = if sample % 2 == 0 {
            let p = random_sl2_word(&mut generator, 6);
            p.mul(&a).unwrap().mul(&p.inverse_unimodular().unwrap()).unwrap()
        } else {
            random_hyperbolic(&mut generator, false)
        };
        let complete = conjugate_2x2(&a, &b).unwrap();
        let searched = decide_by_filters_and_search(&a, &b, 30).unwrap();
        match (&complete, &searched) {
            (ConjugacyVerdict::Conjugate { .. }, ConjugacyVerdict::Conjugate { certificate }) => {
                assert!(verify_certificate(&a, &b, certificate));
                decided += 1;
            }
            (ConjugacyVerdict::NotConjugate { .. }, ConjugacyVerdict::NotConjugate { .. }) => {
                decided += 1;
            }
            (_, ConjugacyVerdict::Undecided { .. }) => {}
            (c, s) => panic!("complete route {c:?} vs search {s:?} for {a} vs {b}"),
        }
    }
    assert!(decided >= 100, "search decided only {decided} of 200 pairs");
}

#[test]
fn verdicts_are_monotone_in_the_bound() {
    let mut generator = rng(21);
    for _ in 0..10 {
        let m = random_unimodular(&mut generator, 3, 6, 30);
        let p = random_unimodular(&mut generator, 3, 4, 3);
        let n = p
            .mul(&m)
            .unwrap()
            .mul(&p.inverse_unimodular().unwrap())
            .unwrap();
        let mut conjugate_seen_at: Option<u64> = None;
        for bound in [1u64, 2, 5, 10, 20] {
            match search_conjugator(&m, &n, bound).unwrap() {
                ConjugacyVerdict::Conjugate { .. } => {
                    conjugate_seen_at.get_or_insert(bound);
                }
                ConjugacyVerdict::Undecided { .. } => {
                    assert!(
                        conjugate_seen_at.is_none(),
                        "Undecided at bound {bound} after Conjugate at {conjugate_seen_at:?}"
                    );
                }
                ConjugacyVerdict::NotConjugate { .. } => {
                    panic!("the bounded search never returns NotConjugate")
                }
            }
        }
    }
}

#[test]
fn negative_witnesses_revalidate() {
    use monoconj::Witness;
    // Each witness carries the data needed to recompute the mismatch.
    let cases = [
        (m2(1, 1, -1, 0), m2(0, 1, -1, 0)),   // different char polys
        (m2(1, 1, 0, 1), m2(1, 2, 0, 1)),     // different Smith forms of M - I
        (m2(1, 2, 2, 5), m2(0, -1, 1, 6)),    // different LLS periods
        (m2(1, 0, 0, 1), m2(-1, 0, 0, -1)),   // different double-root signs
    ];
    for (a, b) in &cases {
        let verdict = monoconj::integral_conjugacy(a, b, 10).unwrap();
        let ConjugacyVerdict::NotConjugate { witness } = verdict else {
            panic!("expected NotConjugate for {a} vs {b}");
        };
        // Recompute the named invariant on the canonically ordered pair.
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        match witness {
            Witness::CharPoly { left, right } => {
                assert_ne!(left, right);
                assert!(
                    (x.char_poly(), y.char_poly()) == (left.clone(), right.clone())
                        || (y.char_poly(), x.char_poly()) == (left, right)
                );
            }
            Witness::Trace { left, right } => {
                assert_ne!(left, right);
                let traces = (x.trace(), y.trace());
                assert!(traces == (left.clone(), right.clone()) || traces == (right, left));
            }
            Witness::Determinant { left, right } => {
                assert_ne!(left, right);
            }
            Witness::ShiftedSmithForm { shift, left, right } => {
                assert_ne!(left, right);
                let s = IntMatrix::identity(2).scale(&BigInt::from(shift));
                let dx = x.sub(&s).unwrap().smith_normal_form().diagonal;
                let dy = y.sub(&s).unwrap().smith_normal_form().diagonal;
                assert!((dx.clone(), dy.clone()) == (left.clone(), right.clone()) || (dy, dx) == (left, right));
            }
            Witness::LlsPeriods { left, right, .. } => {
                let lp = LLSPeriod::new(left).unwrap();
                let rp = LLSPeriod::new(right).unwrap();
                assert!(!lp.cyclically_equal(&rp));
                let px = lls_period(x).unwrap();
                let py = lls_period(y).unwrap();
                assert!(lp.cyclically_equal(&px) || lp.cyclically_equal(&py));
                assert!(rp.cyclically_equal(&px) || rp.cyclically_equal(&py));
            }
            Witness::SpectrumClass { left, right } => {
                assert_ne!(left, right);
                // The descriptors must match a fresh classification.
                let cx = classify(x).unwrap();
                let cy = classify(y).unwrap();
                assert_ne!(cx, cy);
            }
            Witness::InvariantFactors { left, right } => {
                assert_ne!(left, right);
            }
        }
    }
}

#[test]
fn certificates_compose_transitively() {
    let mut generator = rng(22);
    for _ in 0..20 {
        let a = random_hyperbolic(&mut generator, false);
        let p = random_sl2_word(&mut generator, 8);
        let q = random_sl2_word(&mut generator, 8);
        let b = p.mul(&a).unwrap().mul(&p.inverse_unimodular().unwrap()).unwrap();
        let c = q.mul(&b).unwrap().mul(&q.inverse_unimodular().unwrap()).unwrap();
        let ab = match conjugate_2x2(&a, &b).unwrap() {
            ConjugacyVerdict::Conjugate { certificate } => certificate,
            other => panic!("{other:?}"),
        };
        let bc = match conjugate_2x2(&b, &c).unwrap() {
            ConjugacyVerdict::Conjugate { certificate } => certificate,
            other => panic!("{other:?}"),
        };
        let composed = bc.mul(&ab).unwrap();
        assert!(verify_certificate(&a, &c, &composed));
    }
}

#[test]
fn shifted_smith_filter_separates_parabolic_indices() {
    // (xy, y) and (xy^2, y) share the characteristic polynomial (t-1)^2 but
    // differ in the Smith form of M - I.
    let a = m2(1, 1, 0, 1);
    let b = m2(1, 2, 0, 1);
    match monoconj::invariant_filter(&a, &b).unwrap() {
        Some(monoconj::Witness::ShiftedSmithForm { shift, left, right }) => {
            assert_eq!(shift, 1);
            assert_eq!(left, vec![BigInt::from(1), BigInt::zero()]);
            assert_eq!(right, vec![BigInt::from(2), BigInt::zero()]);
        }
        other => panic!("expected Smith witness, got {other:?}"),
    }
}

proptest! {
    #[test]
    fn parser_never_panics(text in ".{0,40}") {
        // Arbitrary input must produce a value or an error, never a panic.
        let _ = parse_map(&text);
    }

    #[test]
    fn parser_never_panics_on_grammar_like_input(
        text in "[xyzw*^,/()0-9 -]{0,30}"
    ) {
        let _ = parse_map(&text);
    }
}

#[test]
fn hyperbolic_decisions_agree_with_brute_force() {
    let mut generator = rng(23);
    for sample in 0..60 {
        let a = random_hyperbolic_bounded(&mut generator, 6);
        let b = if sample % 3 == 0 {
            let p = random_sl2_word(&mut generator, 4);
            p.mul(&a).unwrap().mul(&p.inverse_unimodular().unwrap()).unwrap()
        } else {
            random_hyperbolic_bounded(&mut generator, 6)
        };
        if !entries_bounded(&b, 8) {
            continue;
        }
        let brute = brute_conjugator(&a, &b, 10);
        match conjugate_2x2(&a, &b).unwrap() {
            ConjugacyVerdict::Conjugate { certificate } => {
                assert!(verify_certificate(&a, &b, &certificate));
            }
            ConjugacyVerdict::NotConjugate { .. } => {
                assert!(
                    brute.is_none(),
                    "{a} vs {b}: declared non-conjugate, but {} conjugates them",
                    brute.unwrap()
                );
            }
            ConjugacyVerdict::Undecided { .. } => panic!("2x2 det 1 must be decided"),
        }
        if let Some(p) = brute_conjugator(&a, &b, 6) {
            assert!(
                matches!(conjugate_2x2(&a, &b).unwrap(), ConjugacyVerdict::Conjugate { .. }),
                "{a} vs {b}: {p} conjugates them but the verdict is negative"
            );
        }
    }
}

proptest! {
    #[test]
    fn lls_round_trip_random_sequences(
        entries in prop::collection::vec(1u64..=9, 1..=4)
    ) {
        // Double the half-sequence to get an even length in 2..=8.
        let mut doubled: Vec<u64> = Vec::with_capacity(entries.len() * 2);
        for pair in entries.chunks(1) {
            doubled.push(pair[0]);
            doubled.push(pair[0].rotate_left(1) % 9 + 1);
        }
        let period = LLSPeriod::from_u64(&doubled).unwrap();
        let m = realize(&period);
        prop_assert!(lls_period(&m).unwrap().cyclically_equal(&period));
    }
}
