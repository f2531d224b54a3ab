//! GCD-free (coprime) bases: square classes of huge integers without
//! factoring them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::f2::{F2Vector, Label};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeBase {
    /// Pairwise coprime integers `> 1`, sorted.
    pub base: Vec<BigUint>,
    /// For each input value, `Sign` plus `Base(i)` for every non-square base
    /// element `base[i]` occurring to an odd power.
    pub vectors: Vec<F2Vector>,
}

/// Refines `values` into a pairwise coprime base by repeated gcd splitting.
///
/// Every input equals `+-` a product of powers of base elements. Base
/// elements that are perfect squares never contribute a label.
pub fn coprime_base(values: &[BigInt]) -> CoprimeBase {
    assert!(values.iter().all(|v| !v.is_zero()), "values must be nonzero");
    let mut pool: Vec<BigUint> = values
        .iter()
        .map(|v| v.magnitude().clone())
        .filter(|m| !m.is_one())
        .collect();
    pool.sort();
    pool.dedup();

    let mut base: Vec<BigUint> = Vec::new();
    while let Some(x) = pool.pop() {
        // Merge x into the current coprime base.
        let mut pending = vec![x];
        while let Some(mut y) = pending.pop() {
            if y.is_one() {
                continue;
            }
            let mut i = 0;
            while i < base.len() {
                let g = base[i].gcd(&y);
                if g.is_one() {
                    i += 1;
                    continue;
                }
                let b = base.swap_remove(i);
                let bg = &b / &g;
                y = &y / &g;
                pending.push(bg);
                pending.push(g);
                if y.is_one() {
                    break;
                }
                i = 0;
            }
            if !y.is_one() {
                if base.contains(&y) {
                    continue;
                }
                base.push(y);
            }
        }
        // Duplicates can arise when a split produces an existing element.
        base.sort();
        base.dedup();
    }
    base.sort();

    let square: Vec<bool> = base.iter().map(is_square_uint).collect();
    let vectors = values
        .iter()
        .map(|v| {
            let mut vec = F2Vector::zero();
            if v.is_negative() {
                vec.toggle(Label::Sign);
            }
            let mut m = v.magnitude().clone();
            for (i, b) in base.iter().enumerate() {
                let mut e = 0u32;
                loop {
                    let (q, r) = m.div_rem(b);
                    if !r.is_zero() {
                        break;
                    }
                    m = q;
                    e += 1;
                }
                if e % 2 == 1 && !square[i] {
                    vec.toggle(Label::Base(i));
                }
            }
            debug_assert!(m.is_one(), "value not covered by the coprime base");
            vec
        })
        .collect();
    CoprimeBase { base, vectors }
}

fn is_square_uint(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Convenience for tests and callers holding signed machine integers.
pub fn coprime_base_i64(values: &[i64]) -> CoprimeBase {
    let vs: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    coprime_base(&vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::rank;
    use proptest::prelude::*;

    fn labels_as_values(cb: &CoprimeBase, i: usize) -> Vec<u64> {
        cb.vectors[i]
            .support()
            .iter()
            .filter_map(|l| match l {
                Label::Base(j) => Some(u64::try_from(&cb.base[*j]).unwrap()),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn splits_shared_factors() {
        let cb = coprime_base_i64(&[6, 10]);
        let base: Vec<u64> = cb.base.iter().map(|b| u64::try_from(b).unwrap()).collect();
        assert_eq!(base, vec![2, 3, 5]);
        assert_eq!(labels_as_values(&cb, 0), vec![2, 3]);
        assert_eq!(labels_as_values(&cb, 1), vec![2, 5]);
    }

    #[test]
    fn squares_and_signs() {
        assert!(coprime_base_i64(&[4]).vectors[0].is_zero());
        assert_eq!(
            coprime_base_i64(&[-1]).vectors[0],
            F2Vector::from_labels([Label::Sign])
        );
        // 12 = 4 * 3 and 18 = 2 * 9 share a base that resolves 2 and 3.
        let cb = coprime_base_i64(&[12, 18, 27]);
        assert_eq!(rank(&cb.vectors), 2);
    }

    proptest! {
        #[test]
        fn base_is_pairwise_coprime(vals in prop::collection::vec(1i64..5000, 1..8)) {
            let cb = coprime_base_i64(&vals);
            for i in 0..cb.base.len() {
                prop_assert!(cb.base[i] > BigUint::one());
                for j in i + 1..cb.base.len() {
                    prop_assert!(cb.base[i].gcd(&cb.base[j]).is_one());
                }
            }
        }
    }
}
