use std::collections::BTreeMap;

use serde::Serialize;

use super::GroupId;
use crate::dynamics::QuadPair;
use crate::error::{Error, Result};
use crate::rational::is_prime_u64;

/// Cycle-type densities of the transitive and intransitive subgroups of
/// `Omega_2` acting on the four leaves.
pub struct Signature {
    pub name: &'static str,
    pub group: GroupId,
    pub densities: &'static [(&'static str, f64)],
}

pub const SIGNATURES: &[Signature] = &[
    Signature {
        name: "D8",
        group: GroupId::D8,
        densities: &[("1+1+1+1", 0.125), ("1+1+2", 0.25), ("2+2", 0.375), ("4", 0.25)],
    },
    Signature {
        name: "C4",
        group: GroupId::C4,
        densities: &[("1+1+1+1", 0.25), ("2+2", 0.25), ("4", 0.5)],
    },
    Signature {
        name: "V4 (transitive)",
        group: GroupId::V4,
        densities: &[("1+1+1+1", 0.25), ("2+2", 0.75)],
    },
    Signature {
        name: "V4 (intransitive)",
        group: GroupId::V4,
        densities: &[("1+1+1+1", 0.25), ("1+1+2", 0.5), ("2+2", 0.25)],
    },
    Signature {
        name: "C2 (1+1+2)",
        group: GroupId::C2,
        densities: &[("1+1+1+1", 0.5), ("1+1+2", 0.5)],
    },
    Signature {
        name: "C2 (2+2)",
        group: GroupId::C2,
        densities: &[("1+1+1+1", 0.5), ("2+2", 0.5)],
    },
    Signature {
        name: "C1",
        group: GroupId::C1,
        densities: &[("1+1+1+1", 1.0)],
    },
];

/// A signature is excluded when an observed cycle type is impossible for
/// it, or when a type it expects at least this many times never shows up.
pub const MIN_EXPECTED: f64 = 10.0;

#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusSample {
    pub level: usize,
    pub primes_used: usize,
    pub skipped: Vec<u64>,
    pub cycle_types: BTreeMap<String, usize>,
    /// Level-2 signatures consistent with the counts; not modelled at level 3.
    pub compatible: Option<Vec<&'static str>>,
}

impl FrobeniusSample {
    pub fn is_compatible(&self, name: &str) -> bool {
        self.compatible.as_ref().is_some_and(|c| c.contains(&name))
    }
}

fn cycle_type(mut degrees: Vec<usize>) -> String {
    degrees.sort_unstable();
    degrees
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("+")
}

/// Factorization pattern of `f^level - alpha` modulo `p`, when `p` is odd,
/// coprime to all denominators and the reduction stays squarefree.
fn pattern_mod(p: &QuadPair, level: usize, prime: u64) -> Option<String> {
    if prime == 2 {
        return None;
    }
    let poly = p.to_normal().iterate_poly(level).reduce(prime)?;
    if poly.degree() != Some(1 << level) || !poly.is_squarefree() {
        return None;
    }
    Some(cycle_type(poly.factor_degrees()))
}

/// The first `count` odd primes of good reduction for `f^level - alpha`.
pub fn good_primes(p: &QuadPair, level: usize, count: usize) -> Vec<u64> {
    (3u64..)
        .filter(|&q| is_prime_u64(q) && pattern_mod(p, level, q).is_some())
        .take(count)
        .collect()
}

pub fn frobenius_sample(p: &QuadPair, level: usize, primes: &[u64]) -> Result<FrobeniusSample> {
    if !(2..=3).contains(&level) {
        return Err(Error::Precondition("level must be 2 or 3".into()));
    }
    let mut cycle_types = BTreeMap::new();
    let mut skipped = Vec::new();
    for &q in primes {
        match is_prime_u64(q).then(|| pattern_mod(p, level, q)).flatten() {
            Some(t) => *cycle_types.entry(t).or_insert(0) += 1,
            None => skipped.push(q),
        }
    }
    let used: usize = cycle_types.values().sum();
    if used == 0 {
        return Err(Error::NoGoodPrimes);
    }
    let compatible = (level == 2).then(|| {
        SIGNATURES
            .iter()
            .filter(|s| {
                let allowed = |t: &str| s.densities.iter().any(|(u, _)| *u == t);
                cycle_types.keys().all(|t| allowed(t))
                    && s.densities.iter().all(|(t, d)| {
                        d * (used as f64) < MIN_EXPECTED || cycle_types.contains_key(*t)
                    })
            })
            .map(|s| s.name)
            .collect()
    });
    Ok(FrobeniusSample {
        level,
        primes_used: used,
        skipped,
        cycle_types,
        compatible,
    })
}
