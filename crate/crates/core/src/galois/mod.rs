//! Finite-level Galois data of quadratic pairs: maximal-subgroup
//! containment, abelianization dimension, exact level-2 groups, Frobenius
//! sampling, local ramification and the abelian classifier.

mod classify;
mod frobenius;
mod level2;
mod local;

pub use classify::{
    classify_abelian, survey, survey_grid, AbelianVerdict, Certificate, Rule, SurveyEntry, SurveyReport,
    ABELIAN_LIST,
};
pub use frobenius::{frobenius_sample, good_primes, FrobeniusSample, SIGNATURES};
pub use level2::{level2_galois, Level2Group};
pub use local::{
    nonabelian_prime_search, poonen_check, poonen_preimage_check, Condition, PoonenHit,
    PoonenOutcome, Variant, DEFAULT_PRIME_BOUND,
};

use serde::Serialize;

use crate::dynamics::{adjusted_orbit, QuadPair};
use crate::error::{Error, Result};
use crate::factor::DEFAULT_BUDGET;
use crate::index_sets::IndexVector;
use crate::rational::Rational;
use crate::square::{is_perfect_square, span_dimension};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GroupId {
    C1,
    C2,
    V4,
    C4,
    D8,
}

impl GroupId {
    pub fn order(self) -> usize {
        match self {
            GroupId::C1 => 1,
            GroupId::C2 => 2,
            GroupId::V4 | GroupId::C4 => 4,
            GroupId::D8 => 8,
        }
    }

    pub fn is_abelian(self) -> bool {
        self != GroupId::D8
    }
}

/// Adjusted orbit values `c_{1,alpha}, ..., c_{n,alpha}`, refusing a
/// vanishing value.
pub fn orbit_values(p: &QuadPair, n: usize) -> Result<Vec<Rational>> {
    let o = adjusted_orbit(p, n);
    match o.degenerate_at {
        Some(index) => Err(Error::Degenerate { index }),
        None => Ok(o.adjusted),
    }
}

/// Whether the image of the arboreal representation lies in `M_v`, i.e.
/// the product of `c_{i,alpha}` over the support of `v` is a square.
pub fn contained_in_mv(p: &QuadPair, v: &IndexVector) -> Result<bool> {
    let Some(top) = v.max() else {
        return Ok(true);
    };
    let vals = orbit_values(p, top as usize)?;
    let prod = v
        .iter()
        .fold(Rational::from_integer(1.into()), |acc, i| acc * &vals[i as usize - 1]);
    Ok(is_perfect_square(&prod))
}

/// `dim <c_{1,alpha}, ..., c_{n,alpha}>` in `Q*/Q*^2`.
pub fn ab_dimension(p: &QuadPair, n: usize) -> Result<usize> {
    span_dimension(&orbit_values(p, n)?, DEFAULT_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(s: &str) -> QuadPair {
        s.parse().unwrap()
    }

    fn iv(s: &str) -> IndexVector {
        s.parse().unwrap()
    }

    #[test]
    fn containment_examples() {
        assert!(contained_in_mv(&pair("-2,0"), &iv("{1,2}")).unwrap());
        assert!(!contained_in_mv(&pair("-1,1"), &iv("{1}")).unwrap());
        assert!(contained_in_mv(&pair("-1,0"), &IndexVector::zero()).unwrap());
        assert_eq!(
            contained_in_mv(&pair("-1,0"), &iv("{2}")),
            Err(Error::Degenerate { index: 2 })
        );
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(ab_dimension(&pair("-2,0"), 10).unwrap(), 1);
        assert_eq!(ab_dimension(&pair("-1,-1/2"), 3).unwrap(), 2);
        assert_eq!(ab_dimension(&pair("1,0"), 6).unwrap(), 6);
    }

    #[test]
    fn group_ids() {
        assert_eq!(GroupId::D8.order(), 8);
        assert!(!GroupId::D8.is_abelian());
        assert!(GroupId::C4.is_abelian());
    }
}
