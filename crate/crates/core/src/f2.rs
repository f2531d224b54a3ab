//! Sparse vectors over GF(2) with tagged labels, plus Gaussian elimination.
//!
//! One elimination kernel serves both square-class spans (labels `Sign`,
//! `Prime`, `Base`) and spans of index vectors (labels `Index`). Pivots are
//! always the smallest label of a row under the derived total order
//! `Sign < Prime(2) < Prime(3) < ... < Base(..) < Index(1) < ...`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// The class of -1.
    Sign,
    Prime(BigUint),
    /// Element `i` of a coprime base; meaningful only relative to that base.
    Base(usize),
    /// Coordinate `i >= 1` of the direct sum of copies of GF(2).
    Index(u64),
}

impl Label {
    fn kind(&self) -> u8 {
        match self {
            Label::Sign => 0,
            Label::Prime(_) => 1,
            Label::Base(_) => 2,
            Label::Index(_) => 3,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Sign => write!(f, "-1"),
            Label::Prime(p) => write!(f, "{p}"),
            Label::Base(b) => write!(f, "b{b}"),
            Label::Index(i) => write!(f, "e{i}"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct F2Vector {
    support: BTreeSet<Label>,
}

impl F2Vector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a vector from labels; a label listed twice cancels.
    pub fn from_labels<I: IntoIterator<Item = Label>>(labels: I) -> Self {
        let mut v = Self::zero();
        for l in labels {
            v.toggle(l);
        }
        v
    }

    pub fn primes<I: IntoIterator<Item = u64>>(ps: I) -> Self {
        Self::from_labels(ps.into_iter().map(|p| Label::Prime(BigUint::from(p))))
    }

    pub fn indices<I: IntoIterator<Item = u64>>(is: I) -> Self {
        Self::from_labels(is.into_iter().map(Label::Index))
    }

    pub fn toggle(&mut self, l: Label) {
        if !self.support.remove(&l) {
            self.support.insert(l);
        }
    }

    pub fn support(&self) -> &BTreeSet<Label> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.support.contains(l)
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn pivot(&self) -> Option<&Label> {
        self.support.first()
    }

    /// Sum in characteristic two: the symmetric difference of supports.
    pub fn add(&self, other: &F2Vector) -> F2Vector {
        F2Vector {
            support: self
                .support
                .symmetric_difference(&other.support)
                .cloned()
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &F2Vector) {
        for l in &other.support {
            self.toggle(l.clone());
        }
    }

    /// Labels are of one kind, except that `Sign` may sit beside `Prime` or
    /// `Base` labels.
    pub fn is_homogeneous(&self) -> bool {
        let kinds: BTreeSet<u8> = self
            .support
            .iter()
            .filter(|l| **l != Label::Sign)
            .map(Label::kind)
            .collect();
        match kinds.len() {
            0 => true,
            1 => !(self.contains(&Label::Sign) && kinds.contains(&3)),
            _ => false,
        }
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// Incremental row-echelon basis. Each stored row remembers which of the
/// inserted vectors it is the sum of.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: BTreeMap<Label, (F2Vector, BTreeSet<usize>)>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the residue and the set of
    /// inserted vectors that were added to `v` along the way.
    fn reduce(&self, v: &F2Vector) -> (F2Vector, BTreeSet<usize>) {
        let mut v = v.clone();
        let mut combo = BTreeSet::new();
        // Each step removes the current pivot and adds only larger labels.
        while let Some(p) = v.pivot().cloned() {
            match self.rows.get(&p) {
                Some((row, rc)) => {
                    v.add_assign(row);
                    combo = combo.symmetric_difference(rc).copied().collect();
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Inserts `v` and returns whether it raised the rank.
    pub fn insert(&mut self, v: &F2Vector) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (residue, mut combo) = self.reduce(v);
        let Some(pivot) = residue.pivot().cloned() else {
            return false;
        };
        combo.insert(id);
        self.rows.insert(pivot, (residue, combo));
        true
    }

    /// Indices of inserted vectors summing to `v`, when `v` is in the span.
    pub fn certificate(&self, v: &F2Vector) -> Option<BTreeSet<usize>> {
        // A nonzero combination of rows has the smallest involved pivot as its
        // minimum label, so a residue whose pivot is not a row pivot is
        // outside the span.
        let (residue, combo) = self.reduce(v);
        residue.is_zero().then_some(combo)
    }
}

pub fn add(u: &F2Vector, v: &F2Vector) -> F2Vector {
    u.add(v)
}

/// Dimension of the span of `vs`.
pub fn rank(vs: &[F2Vector]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v);
    }
    e.rank()
}

/// When `v` lies in the span of `vs`, the positions of a subset of `vs`
/// summing to `v` (empty for the zero vector).
pub fn in_span(v: &F2Vector, vs: &[F2Vector]) -> Option<Vec<usize>> {
    let mut e = Echelon::new();
    for w in vs {
        e.insert(w);
    }
    e.certificate(v).map(|s| s.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(ps: &[u64]) -> F2Vector {
        F2Vector::primes(ps.iter().copied())
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(&p(&[2, 3]), &p(&[3, 5])), p(&[2, 5]));
        let v = p(&[7, 11]);
        assert!(add(&v, &v).is_zero());
        assert_eq!(add(&F2Vector::zero(), &v), v);
    }

    #[test]
    fn rank_examples() {
        let sign = F2Vector::from_labels([Label::Sign]);
        let two = p(&[2]);
        let both = add(&sign, &two);
        assert_eq!(rank(&[sign, two, both]), 2);
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[p(&[2]), p(&[5]), p(&[2, 13]), p(&[677])]), 4);
    }

    #[test]
    fn span_examples() {
        let vs = [p(&[2]), p(&[5])];
        assert_eq!(in_span(&p(&[2, 5]), &vs), Some(vec![0, 1]));
        assert_eq!(in_span(&p(&[3]), &[p(&[2])]), None);
        assert_eq!(in_span(&F2Vector::zero(), &vs), Some(vec![]));
        assert_eq!(in_span(&F2Vector::zero(), &[]), Some(vec![]));
    }

    #[test]
    fn label_order() {
        let mut ls = [Label::Index(1),
            Label::Base(0),
            Label::Prime(BigUint::from(3u8)),
            Label::Sign,
            Label::Prime(BigUint::from(2u8))];
        ls.sort();
        assert_eq!(ls[0], Label::Sign);
        assert_eq!(ls[1], Label::Prime(BigUint::from(2u8)));
        assert_eq!(ls[3], Label::Base(0));
        assert_eq!(ls[4], Label::Index(1));
    }

    #[test]
    fn homogeneity() {
        assert!(F2Vector::from_labels([Label::Sign, Label::Base(2)]).is_homogeneous());
        assert!(!F2Vector::from_labels([Label::Sign, Label::Index(2)]).is_homogeneous());
        assert!(!F2Vector::from_labels([Label::Prime(2u8.into()), Label::Base(2)]).is_homogeneous());
    }

    fn arb_vec() -> impl Strategy<Value = F2Vector> {
        prop::collection::vec(0u64..12, 0..6).prop_map(F2Vector::indices)
    }

    proptest! {
        #[test]
        fn add_laws(a in arb_vec(), b in arb_vec(), c in arb_vec()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert!(a.add(&a).is_zero());
        }

        #[test]
        fn rank_bounded_and_order_free(vs in prop::collection::vec(arb_vec(), 0..8), seed in any::<u64>()) {
            let r = rank(&vs);
            prop_assert!(r <= vs.len());
            let mut shuffled = vs.clone();
            let n = shuffled.len();
            if n > 1 {
                let k = (seed as usize) % n;
                shuffled.rotate_left(k);
                shuffled.reverse();
            }
            prop_assert_eq!(rank(&shuffled), r);
        }

        #[test]
        fn certificates_resum(v in arb_vec(), vs in prop::collection::vec(arb_vec(), 0..8)) {
            if let Some(cert) = in_span(&v, &vs) {
                let mut sum = F2Vector::zero();
                for i in cert {
                    sum.add_assign(&vs[i]);
                }
                prop_assert_eq!(sum, v);
            } else {
                let mut with = vs.clone();
                with.push(v);
                prop_assert_eq!(rank(&with), rank(&vs) + 1);
            }
        }
    }
}
