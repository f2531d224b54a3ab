//! Quadratic pairs `(f, alpha)` with `f = (x - a)^2 - b`, their normal forms
//! and adjusted post-critical orbits.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::rational::{format_rational, is_integral, is_prime_u64, parse_rational, valuation, Rational};

/// Iteration cap for orbit-membership searches.
pub const MAX_ORBIT_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadPair {
    pub a: Rational,
    pub b: Rational,
    pub alpha: Rational,
}

impl QuadPair {
    pub fn new(a: Rational, b: Rational, alpha: Rational) -> Self {
        Self { a, b, alpha }
    }

    /// The pair `(x^2 + c, beta)`.
    pub fn normal(c: Rational, beta: Rational) -> Self {
        Self {
            a: Rational::zero(),
            b: -c,
            alpha: beta,
        }
    }

    pub fn f(&self, x: &Rational) -> Rational {
        let t = x - &self.a;
        &t * &t - &self.b
    }

    pub fn iterate(&self, x: &Rational, n: usize) -> Rational {
        (0..n).fold(x.clone(), |z, _| self.f(&z))
    }

    pub fn critical_point(&self) -> &Rational {
        &self.a
    }

    /// `(c, beta)` such that `(x^2 + c, beta)` is conjugate to the pair by
    /// `x -> x + a`.
    pub fn normal_form(&self) -> (Rational, Rational) {
        (-(&self.a + &self.b), &self.alpha - &self.a)
    }

    pub fn to_normal(&self) -> QuadPair {
        let (c, beta) = self.normal_form();
        QuadPair::normal(c, beta)
    }

    pub fn is_normal(&self) -> bool {
        self.a.is_zero()
    }

    /// The `n`-th iterate minus the basepoint, as a polynomial.
    pub fn iterate_poly(&self, n: usize) -> QPoly {
        let shift = QPoly::constant(-self.a.clone());
        let mb = QPoly::constant(-self.b.clone());
        let mut p = QPoly::x();
        for _ in 0..n {
            let t = p.add(&shift);
            p = t.mul(&t).add(&mb);
        }
        p.add(&QPoly::constant(-self.alpha.clone()))
    }
}

impl fmt::Display for QuadPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.alpha)
        )
    }
}

impl FromStr for QuadPair {
    type Err = Error;

    /// `"a,b,alpha"` for `((x-a)^2 - b, alpha)` or `"c,alpha"` for
    /// `(x^2 + c, alpha)`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        match parts.as_slice() {
            [a, b, alpha] => Ok(QuadPair::new(
                parse_rational(a)?,
                parse_rational(b)?,
                parse_rational(alpha)?,
            )),
            [c, alpha] => Ok(QuadPair::normal(parse_rational(c)?, parse_rational(alpha)?)),
            _ => Err(Error::Parse(format!(
                "expected \"a,b,alpha\" or \"c,alpha\", got {s:?}"
            ))),
        }
    }
}

impl Serialize for QuadPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (c, beta) = self.normal_form();
        let mut st = s.serialize_struct("QuadPair", 5)?;
        st.serialize_field("a", &format_rational(&self.a))?;
        st.serialize_field("b", &format_rational(&self.b))?;
        st.serialize_field("alpha", &format_rational(&self.alpha))?;
        st.serialize_field("c", &format_rational(&c))?;
        st.serialize_field("beta", &format_rational(&beta))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustedOrbit {
    /// `c_1 = b`, `c_n = f^n(a)` for `n >= 2`.
    pub raw: Vec<Rational>,
    /// `c_{1,alpha} = c_1 + alpha`, `c_{n,alpha} = c_n - alpha`.
    pub adjusted: Vec<Rational>,
    /// Least `n` with `c_{n,alpha} = 0`.
    pub degenerate_at: Option<usize>,
}

impl AdjustedOrbit {
    /// `c_{n,alpha}` for 1-based `n`.
    pub fn get(&self, n: usize) -> &Rational {
        &self.adjusted[n - 1]
    }
}

impl Serialize for AdjustedOrbit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let f = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        let mut st = s.serialize_struct("AdjustedOrbit", 3)?;
        st.serialize_field("raw", &f(&self.raw))?;
        st.serialize_field("adjusted", &f(&self.adjusted))?;
        st.serialize_field("degenerate_at", &self.degenerate_at)?;
        st.end()
    }
}

pub fn adjusted_orbit(p: &QuadPair, n: usize) -> AdjustedOrbit {
    assert!(n >= 1);
    let mut raw = vec![p.b.clone()];
    let mut adjusted = vec![&p.b + &p.alpha];
    let mut z = p.f(&p.a);
    for _ in 2..=n {
        z = p.f(&z);
        adjusted.push(&z - &p.alpha);
        raw.push(z.clone());
    }
    let degenerate_at = adjusted.iter().position(Zero::is_zero).map(|i| i + 1);
    AdjustedOrbit {
        raw,
        adjusted,
        degenerate_at,
    }
}

/// First `n >= 0` with `g^n(start) = target` for `g = x^2 + c`.
///
/// The search stops early once the orbit provably cannot return: after a
/// repeated value, after archimedean escape beyond `max(|c|, 2, |target|)`
/// (past which `|z|` strictly increases), or once some prime `p` has
/// `2 v_p(z) < v_p(c)` and `v_p(z) < v_p(target)` (past which `v_p(z)`
/// strictly decreases).
pub fn orbit_hit(c: &Rational, start: &Rational, target: &Rational) -> Result<Option<usize>> {
    let two = Rational::from_integer(BigInt::from(2));
    let bound = c.abs().max(two).max(target.abs());
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut z = start.clone();
    for n in 0..=MAX_ORBIT_STEPS {
        if &z == target {
            return Ok(Some(n));
        }
        if seen.insert(z.clone(), n).is_some() || z.abs() > bound || adic_escape(&z, c, target) {
            return Ok(None);
        }
        z = &z * &z + c;
    }
    Err(Error::BudgetExceeded {
        budget: MAX_ORBIT_STEPS as u64,
    })
}

fn adic_escape(z: &Rational, c: &Rational, target: &Rational) -> bool {
    // g collects primes with 2 v_p(den z) > v_p(den c), h those with
    // v_p(den z) > v_p(den t); a shared prime proves escape.
    let dz = z.denom();
    if dz.is_one() {
        return false;
    }
    let dz2 = dz * dz;
    let g = &dz2 / dz2.gcd(c.denom());
    let h = dz / dz.gcd(target.denom());
    !g.gcd(&h).is_one()
}

/// Whether `alpha = f^n(a)` for some `n >= 1`, i.e. some `c_{n,alpha}`
/// vanishes.
pub fn in_post_critical_orbit(p: &QuadPair) -> Result<bool> {
    Ok(post_critical_hit(p)?.is_some())
}

/// Least `n >= 1` with `c_{n,alpha} = 0`.
pub fn post_critical_hit(p: &QuadPair) -> Result<Option<usize>> {
    let (c, beta) = p.normal_form();
    orbit_hit(&c, &c, &beta).map(|o| o.map(|n| n + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PciWitness {
    /// `v_p(c_1) < 0`, so every `c_n` has a growing denominator.
    Denominator { n: usize, prime: String },
    /// `|f^n(0)|` exceeds `max(|c|, 2)`.
    Escape { n: usize, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum PcfVerdict {
    #[serde(rename = "PCF")]
    Pcf { preperiod: usize, period: usize },
    #[serde(rename = "PCI")]
    Pci { witness: PciWitness },
}

impl PcfVerdict {
    pub fn is_pcf(&self) -> bool {
        matches!(self, PcfVerdict::Pcf { .. })
    }
}

/// Decides whether the critical orbit of `x^2 + c` is finite.
pub fn is_pcf(c: &Rational) -> PcfVerdict {
    if !is_integral(c) {
        return PcfVerdict::Pci {
            witness: PciWitness::Denominator {
                n: 1,
                prime: smallest_prime_factor(c.denom()).to_string(),
            },
        };
    }
    let bound = c.abs().max(Rational::from_integer(BigInt::from(2)));
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut z = Rational::zero();
    let mut n = 0;
    loop {
        if let Some(&first) = seen.get(&z) {
            return PcfVerdict::Pcf {
                preperiod: first,
                period: n - first,
            };
        }
        if z.abs() > bound {
            let next = &z * &z + c;
            debug_assert!(next.abs() > z.abs());
            return PcfVerdict::Pci {
                witness: PciWitness::Escape {
                    n,
                    value: format_rational(&z),
                },
            };
        }
        seen.insert(z.clone(), n);
        z = &z * &z + c;
        n += 1;
    }
}

fn smallest_prime_factor(n: &BigInt) -> BigInt {
    let mut p = BigInt::from(2);
    loop {
        if (&p * &p) > *n {
            return n.clone();
        }
        if n.is_multiple_of(&p) {
            return p;
        }
        p += 1;
    }
}

/// The pair is exceptional exactly when its normal form is `(x^2, 0)`: a
/// finite backward orbit forces `beta` to be the critical value `c` with a
/// single preimage, and then `c` must equal its own unique preimage `0`.
pub fn is_exceptional(p: &QuadPair) -> bool {
    let (c, beta) = p.normal_form();
    c.is_zero() && beta.is_zero()
}

/// Number of distinct complex roots of `f^n - alpha` for `n = 1..=depth`.
pub fn preimage_counts(p: &QuadPair, depth: usize) -> Vec<usize> {
    (1..=depth)
        .map(|n| p.iterate_poly(n).distinct_root_count())
        .collect()
}

/// A `p`-adic valuation, with `None` standing for the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Val(pub Option<i64>);

impl Serialize for Val {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str("inf"),
        }
    }
}

impl Val {
    fn positive(self) -> bool {
        self.0.is_none_or(|v| v > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum DivisibilityPattern {
    /// `v(c_1) < 0` and `v(c_n) = 2^(n-1) v(c_1)`.
    Denominator,
    /// `n` is the first index with `v(c_n) > 0`; `v(c_m) = v(c_n)` iff
    /// `n | m`, and `v(c_m) = 0` otherwise.
    Divisibility { first_positive: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitValuations {
    pub c: String,
    pub prime: u64,
    pub valuations: Vec<Val>,
    pub pattern: DivisibilityPattern,
    pub conforms: bool,
    pub mismatches: Vec<usize>,
}

/// `v_p(c_n)` for `n = 1..=n_max` on `x^2 + c`, with `c_1 = -c` and
/// `c_n = f^n(0)`, checked against the divisibility pattern.
pub fn orbit_valuations(c: &Rational, p: u64, n_max: usize) -> Result<OrbitValuations> {
    if !is_prime_u64(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let pair = QuadPair::normal(c.clone(), Rational::zero());
    let orbit = adjusted_orbit(&pair, n_max);
    let vals: Vec<Val> = orbit.raw.iter().map(|x| Val(valuation(x, p))).collect();
    let (pattern, expected): (_, Vec<Val>) = match vals[0].0 {
        Some(v1) if v1 < 0 => (
            DivisibilityPattern::Denominator,
            (0..n_max).map(|i| Val(v1.checked_mul(1i64 << i.min(62)))).collect(),
        ),
        _ => {
            let first = vals.iter().position(|v| v.positive());
            let expected = (1..=n_max)
                .map(|m| match first {
                    Some(i) if m % (i + 1) == 0 => vals[i],
                    _ => Val(Some(0)),
                })
                .collect();
            (
                DivisibilityPattern::Divisibility {
                    first_positive: first.map(|i| i + 1),
                },
                expected,
            )
        }
    };
    let mismatches: Vec<usize> = (0..n_max)
        .filter(|&i| vals[i] != expected[i])
        .map(|i| i + 1)
        .collect();
    Ok(OrbitValuations {
        c: format_rational(c),
        prime: p,
        valuations: vals,
        pattern,
        conforms: mismatches.is_empty(),
        mismatches,
    })
}
