//! Index-set invariants.

use proptest::prelude::*;

use arboreal::index_sets::{
    bertrand_family, is_coprimality_witness, is_progression, m_coprime_witness, naive_is_witness,
    IndexFamily,
};
use arboreal::IndexVector;

fn vector() -> impl Strategy<Value = IndexVector> {
    proptest::collection::btree_set(1u64..=40, 1..=8).prop_map(IndexVector::from_indices)
}

proptest! {
    #[test]
    fn witness_matches_gcd_scan(v in vector(), m in 0u64..10) {
        for i in v.iter() {
            prop_assert_eq!(is_coprimality_witness(&v, i, m), naive_is_witness(&v, i, m));
        }
    }

    #[test]
    fn witnesses_stay_valid_for_larger_thresholds(v in vector(), m in 0u64..10, extra in 0u64..10) {
        let fam = IndexFamily::new(vec![v.clone()]).unwrap();
        if let Some(i) = m_coprime_witness(&fam, m).witnesses[0] {
            let m2 = m + extra;
            if i > m2 {
                prop_assert!(is_coprimality_witness(&v, i, m2));
            }
        }
    }

    #[test]
    fn singletons_are_progressions(i in 1u64..1000, k in 1u64..10) {
        prop_assert!(is_progression(&IndexVector::from_indices([i]), k, 1));
    }

    #[test]
    fn progression_supports_have_length_l(s in 1u64..50, k in 1u64..6, l in 1u64..8) {
        let v = IndexVector::from_indices((0..l).map(|j| s + j * k));
        prop_assert!(is_progression(&v, k, l));
        prop_assert_eq!(v.len(), l);
        prop_assert!(!is_progression(&v, k, l + 1));
    }

    #[test]
    fn addition_is_symmetric_difference(a in vector(), b in vector()) {
        let sa: std::collections::BTreeSet<u64> = a.iter().collect();
        let sb: std::collections::BTreeSet<u64> = b.iter().collect();
        let expected: Vec<u64> = sa.symmetric_difference(&sb).copied().collect();
        prop_assert_eq!(a.add(&b).iter().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn display_round_trips(v in vector()) {
        prop_assert_eq!(v.to_string().parse::<IndexVector>().unwrap(), v);
    }
}

#[test]
fn bertrand_families_are_coprime() {
    for a in [vec![1, 2, 3, 4, 5], vec![2, 4, 8, 16, 32, 64], (1..=300).step_by(7).collect()] {
        let fam = bertrand_family(&a).unwrap();
        let r = m_coprime_witness(&fam.family, 0);
        assert!(r.holds);
        assert_eq!(r.witnesses, fam.witnesses.iter().map(|&w| Some(w)).collect::<Vec<_>>());
    }
}
