//! Exact rationals and the small amount of arithmetic glue the rest of the
//! crate needs on top of `num`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`; surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"` in lowest terms, `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// `max(|p|, q)` for `p/q` in lowest terms.
pub fn height(q: &Rational) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    n.max(d)
}

/// All rationals of height at most `h`, sorted increasingly.
pub fn rationals_of_height(h: u64) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    for den in 1..=h {
        for num in 1..=h {
            if num.gcd(&den) == 1 {
                let q = rat(num as i64, den as i64);
                out.push(q.clone());
                out.push(-q);
            }
        }
    }
    out.sort();
    out
}

/// `v_p(n)` for a nonzero integer; `None` for zero.
pub fn int_valuation(n: &BigInt, p: &BigUint) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// `v_p(q)`; `None` stands for `+infinity` at `q = 0`.
pub fn valuation(q: &Rational, p: u64) -> Option<i64> {
    let p = BigUint::from(p);
    let vn = int_valuation(q.numer(), &p)?;
    let vd = int_valuation(q.denom(), &p).expect("denominator is nonzero");
    Some(vn - vd)
}

/// Exact integer square root of a nonnegative integer, if it exists.
pub fn exact_sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact rational square root with nonnegative sign, if it exists.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    let n = exact_sqrt_int(q.numer())?;
    let d = exact_sqrt_int(q.denom())?;
    Some(Rational::new(n, d))
}

/// Reduces `q` modulo an odd prime `p`; `None` when `p` divides the denominator.
pub fn reduce_mod(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    let n = q.numer().mod_floor(&pb).to_u64()?;
    Some(mul_mod(n, inv_mod(d, p), p))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime, by Fermat.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn is_integral(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    crate::factor::is_probable_prime(&BigUint::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(1, 3), 3), Some(-1));
        assert_eq!(valuation(&int(18), 3), Some(2));
        assert_eq!(valuation(&int(18), 5), Some(0));
        assert_eq!(valuation(&int(0), 5), None);
    }

    #[test]
    fn heights() {
        // 0, and +-p/q for the 19 coprime pairs in [1,5]^2.
        assert_eq!(rationals_of_height(5).len(), 39);
        assert_eq!(rationals_of_height(1).len(), 3);
        assert_eq!(rationals_of_height(0).len(), 1);
        assert_eq!(height(&rat(-5, 3)), BigInt::from(5));
    }

    #[test]
    fn modular_reduction() {
        assert_eq!(reduce_mod(&rat(-1, 2), 3), Some(1));
        assert_eq!(reduce_mod(&rat(1, 3), 3), None);
        assert_eq!(reduce_mod(&int(-1), 5), Some(4));
    }

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }
}
