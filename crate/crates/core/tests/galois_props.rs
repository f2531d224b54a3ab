//! Galois-side invariants: containment linearity, root-search oracle,
//! level-2 groups against Frobenius sampling, and certificate replay.

use num_traits::Zero;
use proptest::prelude::*;

use arboreal::galois::{
    ab_dimension, classify_abelian, contained_in_mv, frobenius_sample, good_primes, level2_galois,
    survey, AbelianVerdict,
};
use arboreal::rational::{exact_sqrt, rat};
use arboreal::{GroupId, IndexVector, QuadPair, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn nondegenerate_pair() -> impl Strategy<Value = QuadPair> {
    (small_rational(), small_rational())
        .prop_map(|(c, b)| QuadPair::normal(c, b))
        .prop_filter("nondegenerate", |p| {
            arboreal::dynamics::adjusted_orbit(p, 6).degenerate_at.is_none()
        })
}

fn vector() -> impl Strategy<Value = IndexVector> {
    proptest::collection::btree_set(1u64..=6, 0..=4).prop_map(IndexVector::from_indices)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn containment_is_linear(p in nondegenerate_pair(), v in vector(), w in vector()) {
        let (a, b) = (contained_in_mv(&p, &v).unwrap(), contained_in_mv(&p, &w).unwrap());
        if a && b {
            prop_assert!(contained_in_mv(&p, &v.add(&w)).unwrap());
        }
    }

    #[test]
    fn first_level_containment_is_a_rational_root(p in nondegenerate_pair()) {
        // f(x) = alpha has a rational root iff beta - c is a square.
        let (c, beta) = p.normal_form();
        let root = exact_sqrt(&(&beta - &c));
        if let Some(r) = &root {
            prop_assert_eq!(p.f(r), p.alpha.clone());
        }
        let v: IndexVector = "{1}".parse().unwrap();
        prop_assert_eq!(contained_in_mv(&p, &v).unwrap(), root.is_some());
    }

    #[test]
    fn dihedral_iff_two_dimensional(p in nondegenerate_pair()) {
        let g = level2_galois(&p).unwrap().group;
        prop_assert_eq!(g == GroupId::D8, ab_dimension(&p, 2).unwrap() == 2);
    }

    #[test]
    fn ab_dimension_is_monotone(p in nondegenerate_pair()) {
        let dims: Vec<usize> = (1..=5).map(|n| ab_dimension(&p, n).unwrap()).collect();
        prop_assert!(dims.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn level2_agrees_with_frobenius_sampling() {
    let mut checked = 0;
    for c in -4..=4 {
        for b in -6..=6 {
            let p = QuadPair::normal(rat(c, 1), rat(b, 1));
            let Ok(l2) = level2_galois(&p) else {
                continue;
            };
            let sample = frobenius_sample(&p, 2, &good_primes(&p, 2, 100)).unwrap();
            assert!(
                sample.is_compatible(l2.signature()),
                "{p}: exact {} vs sampled {:?}",
                l2.signature(),
                sample.compatible
            );
            checked += 1;
        }
    }
    assert!(checked > 80);
}

#[test]
fn abelian_pairs_have_small_invariants() {
    for e in survey(2).entries {
        if !e.verdict.is_abelian() {
            continue;
        }
        let p = QuadPair::normal(e.c.clone(), e.beta.clone());
        if let Ok(l2) = level2_galois(&p) {
            assert!(l2.group.is_abelian(), "{p}");
        }
        if let Ok(d) = ab_dimension(&p, 12) {
            assert!(d <= 2, "{p}");
        }
    }
}

#[test]
fn every_certificate_replays() {
    let report = survey(3);
    let mut replayed = 0;
    for e in &report.entries {
        let p = QuadPair::normal(e.c.clone(), e.beta.clone());
        assert!(e.verdict.replay(&p).unwrap(), "{p}");
        if e.verdict.certificate().is_some() {
            replayed += 1;
        }
    }
    assert!(replayed > 0);
    assert!(report.uncertified.iter().all(|e| e.c.is_zero() || e.c == rat(-2, 1)));
}

#[test]
fn degenerate_pairs_are_still_classified() {
    for s in ["-1,0", "-1,-1", "1,2"] {
        let v = classify_abelian(&s.parse().unwrap());
        assert!(matches!(v, AbelianVerdict::NonAbelian { certificate: Some(_) }), "{s}: {v:?}");
    }
}
