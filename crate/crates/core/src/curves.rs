//! The curves `y^2 = prod_{j=1..l} (f^(kj+i0)(x) - alpha)` attached to a
//! quadratic pair, and their rational points of small height.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::dynamics::{adjusted_orbit, QuadPair};
use crate::error::{Error, Result};
use crate::index_sets::{is_progression, IndexVector};
use crate::rational::{exact_sqrt, format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSpec {
    pub pair: QuadPair,
    pub k: usize,
    pub l: usize,
    pub i0: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurvePoint {
    pub x: Rational,
    pub y: Rational,
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [format_rational(&self.x), format_rational(&self.y)].serialize(s)
    }
}

impl CurveSpec {
    pub fn new(pair: QuadPair, k: usize, l: usize, i0: usize) -> Result<Self> {
        if k == 0 || l == 0 || i0 == 0 {
            return Err(Error::Precondition("k, l and i0 must be positive".into()));
        }
        Ok(Self { pair, k, l, i0 })
    }

    /// Iterate exponents `k j + i0` for `j = 1..=l`.
    pub fn exponents(&self) -> Vec<usize> {
        (1..=self.l).map(|j| self.k * j + self.i0).collect()
    }

    pub fn degree(&self) -> usize {
        self.exponents().iter().map(|&e| 1usize << e).sum()
    }

    pub fn rhs_eval(&self, x: &Rational) -> Rational {
        let p = &self.pair;
        let mut z = x.clone();
        let mut done = 0;
        let mut acc = Rational::one();
        for e in self.exponents() {
            z = p.iterate(&z, e - done);
            done = e;
            acc *= &z - &p.alpha;
        }
        acc
    }

    /// Each factor is separable when no `c_{n,alpha}` vanishes up to the
    /// largest exponent, and two factors `f^m - alpha`, `f^(m + kt) - alpha`
    /// share a root exactly when `f^(kt)(alpha) = alpha`.
    pub fn is_smooth(&self) -> bool {
        let top = *self.exponents().last().expect("l >= 1");
        if adjusted_orbit(&self.pair, top).degenerate_at.is_some() {
            return false;
        }
        let a = &self.pair.alpha;
        (1..self.l).all(|t| &self.pair.iterate(a, self.k * t) != a)
    }

    /// Genus of the smooth model when the right-hand side is squarefree.
    pub fn genus(&self) -> Option<usize> {
        self.is_smooth().then(|| (self.degree() - 1) / 2)
    }

    /// Rational points with `x = p/q` in lowest terms, `|p| <= h`,
    /// `1 <= q <= h`; both signs of `y` are listed.
    pub fn naive_point_search(&self, h: u64) -> Vec<CurvePoint> {
        let mut out = Vec::new();
        if h == 0 {
            return out;
        }
        let h = h as i64;
        for q in 1..=h {
            for p in -h..=h {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let x = Rational::new(BigInt::from(p), BigInt::from(q));
                let r = self.rhs_eval(&x);
                if let Some(y) = exact_sqrt(&r) {
                    if !y.is_zero() {
                        out.push(CurvePoint { x: x.clone(), y: -y.clone() });
                    }
                    out.push(CurvePoint { x, y });
                }
            }
        }
        out.sort();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructedPoint {
    pub curve: CurveSpec,
    pub point: CurvePoint,
    /// Product of `c_{i,alpha}` over the support of `v`.
    pub product: String,
}

/// For `v` with support `{s, s+k, ..., s+(l-1)k}`, returns the point
/// `(f^(s-k-i0)(a), sqrt(prod c_{i,alpha}))` on the curve with parameters
/// `(k, l, i0)` when the product is a square.
pub fn construct_point(
    p: &QuadPair,
    v: &IndexVector,
    k: usize,
    i0: usize,
) -> Result<Option<ConstructedPoint>> {
    let l = v.len() as usize;
    let s = v.min().ok_or_else(|| Error::Precondition("v is zero".into()))? as usize;
    if !is_progression(v, k as u64, l as u64) {
        return Err(Error::Precondition(format!("{v} is not a progression of step {k}")));
    }
    if s < 2 || s < k + i0 {
        return Err(Error::Precondition(format!(
            "need min support >= 2 and s - k - i0 >= 0, got s = {s}"
        )));
    }
    let curve = CurveSpec::new(p.clone(), k, l, i0)?;
    let orbit = adjusted_orbit(p, v.max().expect("nonzero") as usize);
    let product = v
        .iter()
        .fold(Rational::one(), |acc, i| acc * orbit.get(i as usize));
    let Some(y) = exact_sqrt(&product) else {
        return Ok(None);
    };
    let x = p.iterate(p.critical_point(), s - k - i0);
    let rhs = curve.rhs_eval(&x);
    assert_eq!(rhs, product, "orbit identity failed at {p}");
    Ok(Some(ConstructedPoint {
        curve,
        point: CurvePoint { x, y },
        product: format_rational(&product),
    }))
}
