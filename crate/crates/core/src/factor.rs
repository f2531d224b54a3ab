//! Integer factorization with an explicit operation budget.
//!
//! Trial division by all primes below 10^6, then Miller-Rabin and Brent's
//! variant of Pollard rho with a caller-supplied seed. Every trial division
//! and every rho iteration costs one unit of budget.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::primes_up_to;

pub const TRIAL_LIMIT: u64 = 1_000_000;
pub const DEFAULT_BUDGET: u64 = 2_000_000;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Tracks spent operations against a fixed limit.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    spent: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self { limit, spent: 0 }
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    fn charge(&mut self, ops: u64) -> Result<()> {
        self.spent += ops;
        if self.spent > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

const MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve primes as bases: deterministic below
/// 3.3 * 10^24, a strong probable-prime test above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u8) {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of an odd composite `n`.
fn brent_rho(n: &BigUint, rng: &mut ChaCha8Rng, budget: &mut Budget) -> Result<BigUint> {
    let one = BigUint::one();
    loop {
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_range(&BigUint::zero(), n);
        let m = 128u64;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let step = |v: &BigUint| (v * v + &c) % n;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            budget.charge(r)?;
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = m.min(r - k);
                for _ in 0..lim {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * diff) % n;
                }
                budget.charge(lim)?;
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            // Backtrack one step at a time from the last saved point.
            loop {
                ys = step(&ys);
                budget.charge(1)?;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Ok(g);
        }
    }
}

/// Prime factorization of `n >= 1` as a map prime -> exponent.
pub fn factorize(n: &BigUint, limit: u64, seed: u64) -> Result<BTreeMap<BigUint, u32>> {
    let mut budget = Budget::new(limit);
    factorize_with(n, &mut budget, seed)
}

pub fn factorize_with(
    n: &BigUint,
    budget: &mut Budget,
    seed: u64,
) -> Result<BTreeMap<BigUint, u32>> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out = BTreeMap::new();
    let mut m = n.clone();
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        if let Some(mu) = m.to_u64() {
            if p.saturating_mul(p) > mu {
                break;
            }
        }
        budget.charge(1)?;
        let pb = BigUint::from(p);
        while (&m % &pb).is_zero() {
            m /= &pb;
            *out.entry(pb.clone()).or_insert(0) += 1;
        }
    }
    if m.is_one() {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        // Every prime factor of a remaining cofactor exceeds the trial limit,
        // so a cofactor below its square is prime.
        let trial_sq = BigUint::from(TRIAL_LIMIT) * BigUint::from(TRIAL_LIMIT);
        if x < trial_sq || is_probable_prime(&x) {
            *out.entry(x).or_insert(0) += 1;
            continue;
        }
        let d = brent_rho(&x, &mut rng, budget)?;
        let e = &x / &d;
        stack.push(d);
        stack.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u128) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&b(2)));
        assert!(is_probable_prime(&b(1_000_000_007)));
        assert!(!is_probable_prime(&b(561)));
        assert!(!is_probable_prime(&b(1)));
        assert!(is_probable_prime(&b(18_446_744_073_709_551_557)));
    }

    #[test]
    fn small_factorizations() {
        let f = factorize(&b(458_330), DEFAULT_BUDGET, 0).unwrap();
        let expected: BTreeMap<BigUint, u32> =
            [(b(2), 1), (b(5), 1), (b(45_833), 1)].into_iter().collect();
        assert_eq!(f, expected);
        assert!(factorize(&b(1), 10, 0).unwrap().is_empty());
    }

    #[test]
    fn rho_splits_semiprime_beyond_trial_range() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        let f = factorize(&b(p * q * q), DEFAULT_BUDGET, 7).unwrap();
        assert_eq!(f.get(&b(p)), Some(&1));
        assert_eq!(f.get(&b(q)), Some(&2));
    }

    #[test]
    fn budget_is_enforced() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        let err = factorize(&b(p * q), 100, 0).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { budget: 100 });
    }

    #[test]
    fn seeds_are_reproducible() {
        let n = b(1_000_000_007u128 * 1_000_000_009);
        let mut b1 = Budget::new(DEFAULT_BUDGET);
        let mut b2 = Budget::new(DEFAULT_BUDGET);
        factorize_with(&n, &mut b1, 3).unwrap();
        factorize_with(&n, &mut b2, 3).unwrap();
        assert_eq!(b1.spent(), b2.spent());
    }
}
