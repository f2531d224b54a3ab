//! Square classes of nonzero rationals: the reduction map Q* -> Q*/Q*^2.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::coprime::coprime_base;
use crate::error::{Error, Result};
use crate::f2::{rank, F2Vector, Label};
use crate::factor::{factorize_with, Budget};
use crate::rational::{exact_sqrt, Rational};

/// A sign and the square-free prime support of a rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SquareClass {
    pub sign: i8,
    pub primes: BTreeSet<BigUint>,
}

impl SquareClass {
    pub fn one() -> Self {
        Self {
            sign: 1,
            primes: BTreeSet::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.sign == 1 && self.primes.is_empty()
    }

    pub fn to_vector(&self) -> F2Vector {
        let mut v = F2Vector::from_labels(self.primes.iter().cloned().map(Label::Prime));
        if self.sign < 0 {
            v.toggle(Label::Sign);
        }
        v
    }

    pub fn from_vector(v: &F2Vector) -> Self {
        let mut c = Self::one();
        for l in v.support() {
            match l {
                Label::Sign => c.sign = -1,
                Label::Prime(p) => {
                    c.primes.insert(p.clone());
                }
                _ => panic!("not a square-class vector: {v}"),
            }
        }
        c
    }

    /// The square-free rational representative `+-prod p`.
    pub fn representative(&self) -> BigInt {
        let mut r = BigInt::from(self.sign);
        for p in &self.primes {
            r *= BigInt::from(p.clone());
        }
        r
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        SquareClass::from_vector(&self.to_vector().add(&other.to_vector()))
    }
}

/// Class of `q` in Q*/Q*^2, factoring numerator and denominator within
/// `budget` operations.
pub fn square_class(q: &Rational, budget: u64) -> Result<SquareClass> {
    let mut b = Budget::new(budget);
    square_class_with(q, &mut b, 0)
}

pub fn square_class_with(q: &Rational, budget: &mut Budget, seed: u64) -> Result<SquareClass> {
    if q.is_zero() {
        return Err(Error::Zero);
    }
    let mut class = SquareClass::one();
    if q.is_negative() {
        class.sign = -1;
    }
    for part in [q.numer(), q.denom()] {
        for (p, e) in factorize_with(part.magnitude(), budget, seed)? {
            if e % 2 == 1 {
                class.primes.insert(p);
            }
        }
    }
    Ok(class)
}

/// Outcome of an exact square test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareTest {
    Square(Rational),
    NonSquare,
    /// The input was zero; callers treat this as a vanishing orbit value,
    /// not as a square.
    Zero,
}

pub fn square_test(q: &Rational) -> SquareTest {
    if q.is_zero() {
        return SquareTest::Zero;
    }
    match exact_sqrt(q) {
        Some(r) => SquareTest::Square(r),
        None => SquareTest::NonSquare,
    }
}

/// `q == r^2` for some rational `r`, by integer square roots of the reduced
/// numerator and denominator. Zero counts as a square; use [`square_test`]
/// to see the degeneracy.
pub fn is_perfect_square(q: &Rational) -> bool {
    !matches!(square_test(q), SquareTest::NonSquare)
}

/// Every `p`-adic valuation of `q` is even, i.e. the square-free part is `+-1`.
pub fn all_valuations_even(q: &Rational) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::Zero);
    }
    Ok(exact_sqrt(&q.abs()).is_some())
}

/// Dimension of the span of `values` in Q*/Q*^2 by prime factorization.
pub fn span_dimension_by_factoring(values: &[Rational], budget: u64) -> Result<usize> {
    let mut b = Budget::new(budget);
    let mut vs = Vec::with_capacity(values.len());
    for q in values {
        vs.push(square_class_with(q, &mut b, 0)?.to_vector());
    }
    Ok(rank(&vs))
}

/// Same dimension through a coprime base of all numerators and denominators.
pub fn span_dimension_by_coprime_base(values: &[Rational]) -> Result<usize> {
    if values.iter().any(Zero::is_zero) {
        return Err(Error::Zero);
    }
    Ok(rank(&coprime_vectors(values)))
}

/// Per-value vectors over `Sign`/`Base` labels of one shared coprime base.
pub fn coprime_vectors(values: &[Rational]) -> Vec<F2Vector> {
    let mut ints = Vec::with_capacity(2 * values.len());
    for q in values {
        ints.push(q.numer().clone());
        ints.push(q.denom().clone());
    }
    let cb = coprime_base(&ints);
    cb.vectors
        .chunks(2)
        .map(|pair| pair[0].add(&pair[1]))
        .collect()
}

/// Dimension of the span of `values` in Q*/Q*^2: factoring within budget,
/// falling back to the coprime base when the budget runs out.
pub fn span_dimension(values: &[Rational], budget: u64) -> Result<usize> {
    match span_dimension_by_factoring(values, budget) {
        Err(Error::BudgetExceeded { .. }) => span_dimension_by_coprime_base(values),
        other => other,
    }
}
