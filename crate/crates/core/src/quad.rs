//! Elements `a + b*sqrt(d)` of a quadratic field and their square classes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factor::{factorize, DEFAULT_BUDGET};
use crate::rational::{exact_sqrt, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElement {
    pub a: Rational,
    pub b: Rational,
    pub d: BigInt,
}

impl QuadElement {
    /// `a + b*sqrt(d)`; `d` must be square-free and different from 0 and 1.
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Result<Self> {
        check_field(&d)?;
        Ok(Self { a, b, d })
    }

    pub fn rational(a: Rational, d: &BigInt) -> Self {
        Self {
            a,
            b: Rational::zero(),
            d: d.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.d.clone()) * &self.b * &self.b
    }

    pub fn mul(&self, o: &QuadElement) -> QuadElement {
        assert_eq!(self.d, o.d, "elements of different fields");
        let d = Rational::from_integer(self.d.clone());
        QuadElement {
            a: &self.a * &o.a + d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d.clone(),
        }
    }

    pub fn square(&self) -> QuadElement {
        self.mul(self)
    }

    pub fn add_rational(&self, q: &Rational) -> QuadElement {
        QuadElement {
            a: &self.a + q,
            ..self.clone()
        }
    }

    pub fn neg(&self) -> QuadElement {
        QuadElement {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let mag = self.b.abs();
        let coef = if mag.is_one() { String::new() } else { format!("{mag}*") };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coef}sqrt({})", self.d)
        } else {
            write!(f, "{} {sign} {coef}sqrt({})", self.a, self.d)
        }
    }
}

impl Serialize for QuadElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn check_field(d: &BigInt) -> Result<()> {
    if d.is_zero() || d.is_one() {
        return Err(Error::BadField(format!("d = {d}")));
    }
    let f = factorize(d.magnitude(), DEFAULT_BUDGET, 0)?;
    if f.values().any(|&e| e > 1) {
        return Err(Error::BadField(format!("{d} is not square-free")));
    }
    Ok(())
}

/// Writes a nonzero non-square rational as `r^2 * d` with `d` square-free,
/// so that `sqrt(q) = r * sqrt(d)`. Returns `None` for rational squares.
pub fn sqrt_in_quadratic_field(q: &Rational) -> Result<Option<QuadElement>> {
    if q.is_zero() {
        return Err(Error::Zero);
    }
    if exact_sqrt(q).is_some() {
        return Ok(None);
    }
    // q = n/m = n*m / m^2.
    let nm = q.numer() * q.denom();
    let f = factorize(nm.magnitude(), DEFAULT_BUDGET, 0)?;
    let mut d = BigInt::one();
    let mut r = BigInt::one();
    for (p, e) in f {
        let p = BigInt::from(p);
        if e % 2 == 1 {
            d *= &p;
        }
        r *= num_traits::pow(p, (e / 2) as usize);
    }
    if nm.is_negative() {
        d = -d;
    }
    let coef = Rational::new(r, q.denom().clone());
    Ok(Some(QuadElement {
        a: Rational::zero(),
        b: coef,
        d,
    }))
}

/// A witness `(u, v)` with `(u + v*sqrt(d))^2 = x`, when `x` is a square in
/// `Q(sqrt(d))`.
pub fn is_square_in_quad(x: &QuadElement) -> Option<(Rational, Rational)> {
    if x.is_zero() {
        return None;
    }
    let d = Rational::from_integer(x.d.clone());
    if x.b.is_zero() {
        if let Some(u) = exact_sqrt(&x.a) {
            return Some((u, Rational::zero()));
        }
        // a = d * v^2.
        return exact_sqrt(&(&x.a / &d)).map(|v| (Rational::zero(), v));
    }
    let n = exact_sqrt(&x.norm())?;
    let two = Rational::from_integer(2.into());
    for cand in [(&x.a + &n) / &two, (&x.a - &n) / &two] {
        if cand.is_zero() {
            continue;
        }
        if let Some(u) = exact_sqrt(&cand) {
            let v = &x.b / (&two * &u);
            return Some((u, v));
        }
    }
    None
}

/// Dimension of the span of `xs` in `K*/K*^2`, `K = Q(sqrt(d))`, by testing
/// every subset product for squareness. Intended for at most ten elements.
pub fn quad_independent(xs: &[QuadElement]) -> Result<usize> {
    if xs.is_empty() {
        return Ok(0);
    }
    let d = &xs[0].d;
    if xs.iter().any(|x| &x.d != d) {
        return Err(Error::Precondition("elements from different fields".into()));
    }
    if xs.iter().any(QuadElement::is_zero) {
        return Err(Error::Zero);
    }
    if xs.len() > 16 {
        return Err(Error::Precondition("too many elements for subset enumeration".into()));
    }
    let m = xs.len();
    // The square subsets form the kernel of GF(2)^m -> K*/K*^2.
    let mut kernel = 0usize;
    for mask in 0u32..(1 << m) {
        let mut prod = QuadElement::rational(Rational::one(), d);
        for (i, x) in xs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                prod = prod.mul(x);
            }
        }
        if is_square_in_quad(&prod).is_some() {
            kernel += 1;
        }
    }
    debug_assert!(kernel.is_power_of_two());
    Ok(m - kernel.trailing_zeros() as usize)
}
