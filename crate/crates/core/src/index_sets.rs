//! Finite-support vectors of `⊕ F_2` indexed by positive integers, finite
//! families of them, and the progression and coprimality predicates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::f2::{self, F2Vector, Label};
use crate::rational::is_prime_u64;

/// Support stored as sorted, disjoint, non-adjacent inclusive intervals, so
/// that vectors like `{1..10000}` stay small.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexVector {
    runs: Vec<(u64, u64)>,
}

impl IndexVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_indices<I: IntoIterator<Item = u64>>(is: I) -> Self {
        let set: BTreeSet<u64> = is.into_iter().collect();
        let mut v = Self::zero();
        for i in set {
            assert!(i >= 1, "indices are positive");
            match v.runs.last_mut() {
                Some((_, hi)) if *hi + 1 == i => *hi = i,
                _ => v.runs.push((i, i)),
            }
        }
        v
    }

    /// Support `{lo..=hi}`.
    pub fn range(lo: u64, hi: u64) -> Self {
        assert!(lo >= 1 && lo <= hi);
        IndexVector {
            runs: vec![(lo, hi)],
        }
    }

    pub fn runs(&self) -> &[(u64, u64)] {
        &self.runs
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = u64> + '_ {
        self.runs.iter().flat_map(|&(lo, hi)| lo..=hi)
    }

    pub fn len(&self) -> u64 {
        self.runs.iter().map(|&(lo, hi)| hi - lo + 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn contains(&self, i: u64) -> bool {
        self.runs.iter().any(|&(lo, hi)| lo <= i && i <= hi)
    }

    pub fn min(&self) -> Option<u64> {
        self.runs.first().map(|r| r.0)
    }

    pub fn max(&self) -> Option<u64> {
        self.runs.last().map(|r| r.1)
    }

    /// Sum in `⊕ F_2`, i.e. symmetric difference of supports.
    pub fn add(&self, o: &IndexVector) -> IndexVector {
        let mut events: Vec<u64> = Vec::new();
        for &(lo, hi) in self.runs.iter().chain(&o.runs) {
            events.push(lo);
            events.push(hi + 1);
        }
        events.sort_unstable();
        // Boundaries appearing an even number of times cancel.
        let mut bounds = Vec::new();
        let mut i = 0;
        while i < events.len() {
            let mut j = i;
            while j < events.len() && events[j] == events[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                bounds.push(events[i]);
            }
            i = j;
        }
        let runs = bounds.chunks(2).map(|c| (c[0], c[1] - 1)).collect();
        IndexVector { runs }
    }

    pub fn to_f2(&self) -> F2Vector {
        F2Vector::indices(self.iter())
    }

    pub fn from_f2(v: &F2Vector) -> Result<Self> {
        let mut is = Vec::new();
        for l in v.support() {
            match l {
                Label::Index(i) => is.push(*i),
                other => {
                    return Err(Error::Precondition(format!(
                        "label {other} is not an index"
                    )))
                }
            }
        }
        Ok(Self::from_indices(is))
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .runs
            .iter()
            .flat_map(|&(lo, hi)| match hi - lo {
                0 => vec![lo.to_string()],
                1 => vec![lo.to_string(), hi.to_string()],
                _ => vec![format!("{lo}..{hi}")],
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for IndexVector {
    type Err = Error;

    /// Accepts `{1,4,5}`, bare `1,4,5`, and ranges `a..b`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('{').unwrap_or(t);
        let t = t.strip_suffix('}').unwrap_or(t).trim();
        let bad = || Error::Parse(format!("bad index vector {s:?}"));
        let mut v = IndexVector::zero();
        if t.is_empty() {
            return Ok(v);
        }
        for part in t.split(',') {
            let part = part.trim();
            let (lo, hi) = match part.split_once("..") {
                Some((a, b)) => (a.trim().parse::<u64>(), b.trim().parse::<u64>()),
                None => (part.parse::<u64>(), part.parse::<u64>()),
            };
            let (lo, hi) = (lo.map_err(|_| bad())?, hi.map_err(|_| bad())?);
            if lo == 0 || lo > hi {
                return Err(bad());
            }
            let piece = IndexVector::range(lo, hi);
            if v.runs.iter().any(|&(a, b)| a <= hi && lo <= b) {
                return Err(Error::Parse(format!("repeated index in {s:?}")));
            }
            v = v.add(&piece);
        }
        Ok(v)
    }
}

impl Serialize for IndexVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A finite stand-in for an infinite family of index vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexFamily {
    members: Vec<IndexVector>,
}

impl IndexFamily {
    pub fn new(members: Vec<IndexVector>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for m in &members {
            if !seen.insert(m) {
                return Err(Error::Precondition(format!("repeated member {m}")));
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[IndexVector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Parses a JSON array of vector strings or one vector per line.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let strings: Vec<String> = if t.starts_with('[') {
            serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            t.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect()
        };
        Self::new(strings.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }
}

/// Whether the support is `{s, s+k, ..., s+(l-1)k}` for some `s >= 1`.
pub fn is_progression(v: &IndexVector, k: u64, l: u64) -> bool {
    assert!(k >= 1 && l >= 1);
    if v.len() != l {
        return false;
    }
    let mut it = v.iter();
    let Some(mut prev) = it.next() else {
        return false;
    };
    for i in it {
        if i - prev != k {
            return false;
        }
        prev = i;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgressingReport {
    pub holds: bool,
    pub checked: usize,
    pub offenders: Vec<usize>,
}

pub fn progressing_witness(fam: &IndexFamily, k: u64, l: u64) -> ProgressingReport {
    let offenders: Vec<usize> = fam
        .members
        .iter()
        .enumerate()
        .filter(|(_, v)| !is_progression(v, k, l))
        .map(|(i, _)| i)
        .collect();
    ProgressingReport {
        holds: offenders.is_empty(),
        checked: fam.len(),
        offenders,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub target: IndexVector,
    /// Member positions summing to the target, when it lies in the span.
    pub combination: Option<Vec<usize>>,
    pub progression: bool,
}

/// Checks a requested element of the span of the family.
pub fn progressing_in_span(fam: &IndexFamily, target: &IndexVector, k: u64, l: u64) -> SpanReport {
    let vs: Vec<F2Vector> = fam.members.iter().map(IndexVector::to_f2).collect();
    let combination = f2::in_span(&target.to_f2(), &vs);
    SpanReport {
        target: target.clone(),
        progression: combination.is_some() && is_progression(target, k, l),
        combination,
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn multiples_in(q: u64, lo: u64, hi: u64) -> u64 {
    hi / q - (lo - 1) / q
}

/// Whether `i` is coprime to every other support index above `m`.
pub fn is_coprimality_witness(v: &IndexVector, i: u64, m: u64) -> bool {
    if i <= m || !v.contains(i) {
        return false;
    }
    prime_factors(i).into_iter().all(|q| {
        let count: u64 = v
            .runs
            .iter()
            .filter(|&&(_, hi)| hi > m)
            .map(|&(lo, hi)| multiples_in(q, lo.max(m + 1), hi))
            .sum();
        count == 1
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoprimeReport {
    pub holds: bool,
    pub threshold: u64,
    /// Largest valid witness per member.
    pub witnesses: Vec<Option<u64>>,
    /// Running maximum of the witnesses along the family.
    pub running_max: Vec<u64>,
    /// The running maximum still grows over the second half of the family.
    pub unbounded: bool,
}

pub fn m_coprime_witness(fam: &IndexFamily, m: u64) -> CoprimeReport {
    let witnesses: Vec<Option<u64>> = fam
        .members
        .iter()
        .map(|v| v.iter().rev().take_while(|&i| i > m).find(|&i| is_coprimality_witness(v, i, m)))
        .collect();
    let mut running_max = Vec::with_capacity(witnesses.len());
    let mut cur = 0;
    for w in &witnesses {
        cur = cur.max(w.unwrap_or(0));
        running_max.push(cur);
    }
    let unbounded = match running_max.len() {
        0 | 1 => false,
        n => running_max[n - 1] > running_max[(n - 1) / 2],
    };
    CoprimeReport {
        holds: witnesses.iter().all(Option::is_some),
        threshold: m,
        witnesses,
        running_max,
        unbounded,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BertrandFamily {
    pub family: IndexFamily,
    pub witnesses: Vec<u64>,
}

pub fn largest_prime_at_most(n: u64) -> Option<u64> {
    (2..=n).rev().find(|&p| is_prime_u64(p))
}

/// Members `{1..a_n}` with witnesses `1` for `a_n = 1` and otherwise the
/// largest prime `p_n <= a_n`, which satisfies `2 p_n > a_n`.
pub fn bertrand_family(a: &[u64]) -> Result<BertrandFamily> {
    if a.first().is_some_and(|&x| x < 1) || a.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "sequence must be strictly increasing positive integers".into(),
        ));
    }
    let mut members = Vec::with_capacity(a.len());
    let mut witnesses = Vec::with_capacity(a.len());
    for &an in a {
        members.push(IndexVector::range(1, an));
        let w = if an == 1 {
            1
        } else {
            let p = largest_prime_at_most(an).expect("an >= 2");
            assert!(2 * p > an, "Bertrand bound failed at {an}");
            p
        };
        witnesses.push(w);
    }
    Ok(BertrandFamily {
        family: IndexFamily::new(members)?,
        witnesses,
    })
}

/// Brute-force witness test used as an oracle in tests.
pub fn naive_is_witness(v: &IndexVector, i: u64, m: u64) -> bool {
    i > m && v.contains(i) && v.iter().filter(|&j| j > m && j != i).all(|j| i.gcd(&j) == 1)
}
