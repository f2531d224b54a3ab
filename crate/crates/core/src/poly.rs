//! Dense univariate polynomials over Q and over GF(p), just enough for
//! iterate construction, separability checks and distinct-degree
//! factorization.

use num_traits::{One, Zero};

use crate::rational::{inv_mod, mul_mod, reduce_mod, Rational};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly(pub Vec<Rational>);

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> QPoly {
        QPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let lead = d.0[dd].clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let q = r.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        QPoly::new(r)
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.0.last().cloned() {
            Some(l) => a.scale(&(Rational::one() / l)),
            None => a,
        }
    }

    /// Number of distinct complex roots: `deg p - deg gcd(p, p')`.
    pub fn distinct_root_count(&self) -> usize {
        let d = self.degree().unwrap_or(0);
        let g = self.gcd(&self.derivative());
        d - g.degree().unwrap_or(0)
    }

    /// Reduction modulo an odd prime; `None` if a denominator vanishes.
    pub fn reduce(&self, p: u64) -> Option<FpPoly> {
        let c: Option<Vec<u64>> = self.0.iter().map(|c| reduce_mod(c, p)).collect();
        Some(FpPoly::new(c?, p))
    }
}

/// Polynomial over GF(p), constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    pub c: Vec<u64>,
    pub p: u64,
}

impl FpPoly {
    pub fn new(mut c: Vec<u64>, p: u64) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { c, p }
    }

    pub fn x(p: u64) -> Self {
        Self::new(vec![0, 1], p)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        FpPoly::new(
            (0..n)
                .map(|i| {
                    let a = *self.c.get(i).unwrap_or(&0);
                    let b = *o.c.get(i).unwrap_or(&0);
                    (a + p - b) % p
                })
                .collect(),
            p,
        )
    }

    fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(Vec::new(), self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        FpPoly::new(out, p)
    }

    fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = d.c.len() - 1;
        let inv = inv_mod(d.c[dd], p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = mul_mod(*r.last().unwrap(), inv, p);
            q[k] = f;
            for (i, &c) in d.c.iter().enumerate() {
                r[k + i] = (r[k + i] + p - mul_mod(f, c, p)) % p;
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        (FpPoly::new(q, p), FpPoly::new(r, p))
    }

    fn rem(&self, d: &FpPoly) -> FpPoly {
        self.divrem(d).1
    }

    fn monic(&self) -> FpPoly {
        match self.c.last() {
            Some(&l) => {
                let inv = inv_mod(l, self.p);
                FpPoly::new(self.c.iter().map(|&c| mul_mod(c, inv, self.p)).collect(), self.p)
            }
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
            p,
        )
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    fn powmod(&self, mut e: u64, m: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::new(vec![1], self.p);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem(m);
            }
            b = b.mul(&b).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, sorted
    /// in decreasing order (the Frobenius cycle type).
    pub fn factor_degrees(&self) -> Vec<usize> {
        assert!(self.is_squarefree(), "distinct-degree factorization needs a squarefree input");
        let p = self.p;
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = FpPoly::x(p);
        let mut h = x.clone();
        let mut i = 1;
        while f.degree().unwrap_or(0) >= 2 * i {
            h = h.powmod(p, &f);
            let g = h.sub(&x).gcd(&f);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 {
                out.extend(std::iter::repeat_n(i, gd / i));
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
            i += 1;
        }
        if let Some(d) = f.degree() {
            if d > 0 {
                out.push(d);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn qp(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn distinct_roots() {
        // x^2 (x^2 - 2)
        assert_eq!(qp(&[0, 0, -2, 0, 1]).distinct_root_count(), 3);
        assert_eq!(qp(&[-1, 0, 1]).distinct_root_count(), 2);
        assert_eq!(qp(&[0, 0, 0, 0, 1]).distinct_root_count(), 1);
    }

    #[test]
    fn factor_degrees_mod_p() {
        // x^4 + 1 splits into quadratics mod 3, fully mod 17.
        let f = qp(&[1, 0, 0, 0, 1]);
        assert_eq!(f.reduce(3).unwrap().factor_degrees(), vec![2, 2]);
        assert_eq!(f.reduce(17).unwrap().factor_degrees(), vec![1, 1, 1, 1]);
        // x^2 + 1 is irreducible mod 7.
        assert_eq!(qp(&[1, 0, 1]).reduce(7).unwrap().factor_degrees(), vec![2]);
        // (x - 1)(x^3 - 2) mod 7: 2 is not a cube mod 7.
        let g = qp(&[-1, 1]).mul(&qp(&[-2, 0, 0, 1]));
        assert_eq!(g.reduce(7).unwrap().factor_degrees(), vec![3, 1]);
    }

    #[test]
    fn brute_force_root_counts_agree() {
        // Number of linear factors equals the number of roots in GF(p).
        let f = qp(&[2, 0, -4, 0, 1]);
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let fp = f.reduce(p).unwrap();
            if !fp.is_squarefree() {
                continue;
            }
            let roots = (0..p)
                .filter(|&x| {
                    let v = fp.c.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p);
                    v == 0
                })
                .count();
            let linear = fp.factor_degrees().iter().filter(|&&d| d == 1).count();
            assert_eq!(roots, linear, "p = {p}");
        }
    }
}
