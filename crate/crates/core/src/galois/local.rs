use serde::Serialize;

use num_traits::Zero;

use crate::dynamics::{orbit_hit, QuadPair};
use crate::error::{Error, Result};
use crate::rational::{exact_sqrt, is_prime_u64, mul_mod, reduce_mod, valuation, Rational};

pub const DEFAULT_PRIME_BOUND: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// The basepoint has negative valuation.
    A,
    /// `0` is periodic modulo `p`, the basepoint reduces onto its orbit but
    /// is not on the orbit of `0` itself.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "condition")]
pub enum PoonenOutcome {
    InfinitelyRamified(Condition),
    Inconclusive,
}

/// Where the local test was applied: at the basepoint itself, or at
/// `sqrt(c_{1,beta})` over `Q(sqrt(c_{1,beta}))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Base,
    Preimage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PoonenHit {
    pub prime: u64,
    pub condition: Condition,
    pub variant: Variant,
}

fn check_prime(c: &Rational, p: u64) -> Result<()> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    if valuation(c, p).is_some_and(|v| v < 0) {
        return Err(Error::NonIntegral(p.to_string()));
    }
    Ok(())
}

/// Residues of the orbit of `0` under `x^2 + c` modulo `p`, when `0` is
/// periodic.
fn periodic_orbit_mod(c: u64, p: u64) -> Option<Vec<u64>> {
    let mut orbit = vec![0u64];
    let mut z = 0u64;
    for _ in 0..p {
        z = (mul_mod(z, z, p) + c) % p;
        if z == 0 {
            return Some(orbit);
        }
        orbit.push(z);
    }
    None
}

/// The local ramification criterion for `(x^2 + c, alpha)` at an odd prime
/// `p` with `v_p(c) >= 0`.
pub fn poonen_check(c: &Rational, alpha: &Rational, p: u64) -> Result<PoonenOutcome> {
    check_prime(c, p)?;
    let Some(a) = reduce_mod(alpha, p) else {
        return Ok(PoonenOutcome::InfinitelyRamified(Condition::A));
    };
    let cm = reduce_mod(c, p).expect("integral at p");
    let Some(orbit) = periodic_orbit_mod(cm, p) else {
        return Ok(PoonenOutcome::Inconclusive);
    };
    if orbit.contains(&a) && orbit_hit(c, &Rational::zero(), alpha)?.is_none() {
        return Ok(PoonenOutcome::InfinitelyRamified(Condition::B));
    }
    Ok(PoonenOutcome::Inconclusive)
}

/// The same criterion at the irrational preimage `sqrt(delta)`,
/// `delta = beta - c`, over a prime of `Q(sqrt(delta))` above `p`.
/// Irrationality puts `sqrt(delta)` outside the rational orbit of `0`.
pub fn poonen_preimage_check(c: &Rational, beta: &Rational, p: u64) -> Result<PoonenOutcome> {
    check_prime(c, p)?;
    let delta = beta - c;
    if delta.is_zero() || exact_sqrt(&delta).is_some() {
        return Ok(PoonenOutcome::Inconclusive);
    }
    let Some(dm) = reduce_mod(&delta, p) else {
        return Ok(PoonenOutcome::InfinitelyRamified(Condition::A));
    };
    let cm = reduce_mod(c, p).expect("integral at p");
    let Some(orbit) = periodic_orbit_mod(cm, p) else {
        return Ok(PoonenOutcome::Inconclusive);
    };
    if orbit.iter().any(|&z| mul_mod(z, z, p) == dm) {
        return Ok(PoonenOutcome::InfinitelyRamified(Condition::B));
    }
    Ok(PoonenOutcome::Inconclusive)
}

/// First odd prime `p <= bound` at which the criterion fires for the
/// basepoint, or failing that for its preimage `sqrt(c_{1,beta})`; primes
/// dividing the denominator of `c` are skipped.
pub fn nonabelian_prime_search(pair: &QuadPair, bound: u64) -> Result<Option<PoonenHit>> {
    let (c, beta) = pair.normal_form();
    for p in (3..=bound).filter(|&p| is_prime_u64(p)) {
        if valuation(&c, p).is_some_and(|v| v < 0) {
            continue;
        }
        for (variant, outcome) in [
            (Variant::Base, poonen_check(&c, &beta, p)?),
            (Variant::Preimage, poonen_preimage_check(&c, &beta, p)?),
        ] {
            if let PoonenOutcome::InfinitelyRamified(condition) = outcome {
                return Ok(Some(PoonenHit {
                    prime: p,
                    condition,
                    variant,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn poonen_examples() {
        assert_eq!(
            poonen_check(&int(-1), &rat(1, 3), 3).unwrap(),
            PoonenOutcome::InfinitelyRamified(Condition::A)
        );
        assert_eq!(
            poonen_check(&int(-1), &int(2), 3).unwrap(),
            PoonenOutcome::InfinitelyRamified(Condition::B)
        );
        assert_eq!(poonen_check(&int(1), &int(5), 3).unwrap(), PoonenOutcome::Inconclusive);
        // -1 lies on the global orbit of 0.
        assert_eq!(poonen_check(&int(-1), &int(-1), 3).unwrap(), PoonenOutcome::Inconclusive);
        assert!(matches!(poonen_check(&int(1), &int(1), 2), Err(Error::NotOddPrime(_))));
        assert!(matches!(poonen_check(&int(1), &int(1), 9), Err(Error::NotOddPrime(_))));
        assert!(matches!(poonen_check(&rat(1, 3), &int(1), 3), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn prime_search_examples() {
        let hit = |s: &str| nonabelian_prime_search(&s.parse().unwrap(), DEFAULT_PRIME_BOUND).unwrap();
        assert_eq!(
            hit("-1,1/3"),
            Some(PoonenHit { prime: 3, condition: Condition::A, variant: Variant::Base })
        );
        assert_eq!(
            hit("-5,5"),
            Some(PoonenHit { prime: 5, condition: Condition::B, variant: Variant::Base })
        );
        assert_eq!(hit("-2,1"), None);
        for s in ["0,1", "0,-1", "-2,0", "-2,-1", "-2,2", "-2,-2"] {
            assert_eq!(hit(s), None, "{s}");
        }
        // 8 = -1 mod 3, and -1 is on the orbit of 0.
        assert_eq!(
            hit("-1,8"),
            Some(PoonenHit { prime: 3, condition: Condition::B, variant: Variant::Base })
        );
    }

    #[test]
    fn preimage_variant() {
        // sqrt(3) reduces to 0 above 3.
        assert_eq!(
            poonen_preimage_check(&int(-1), &int(2), 3).unwrap(),
            PoonenOutcome::InfinitelyRamified(Condition::B)
        );
        assert_eq!(
            poonen_preimage_check(&int(-1), &rat(1, 3), 3).unwrap(),
            PoonenOutcome::InfinitelyRamified(Condition::A)
        );
        // Rational preimages are left to the base test.
        assert_eq!(poonen_preimage_check(&int(-1), &int(0), 3).unwrap(), PoonenOutcome::Inconclusive);
    }
}
