use std::collections::{BTreeMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::local::{
    nonabelian_prime_search, poonen_check, poonen_preimage_check, Condition, PoonenOutcome,
    Variant, DEFAULT_PRIME_BOUND,
};
use super::{level2_galois, orbit_values, GroupId};
use crate::dynamics::{in_post_critical_orbit, is_exceptional, is_pcf, PcfVerdict, PciWitness, QuadPair};
use crate::error::{Error, Result};
use crate::quad::{quad_independent, sqrt_in_quadratic_field, QuadElement};
use crate::rational::{exact_sqrt, format_rational, int, rationals_of_height, Rational};
use crate::square::{is_perfect_square, span_dimension_by_coprime_base};

/// Normal forms `(c, beta)` of the pairs with abelian iterated Galois group.
pub const ABELIAN_LIST: [(i64, i64); 7] = [(0, 1), (0, -1), (-2, 0), (-2, 1), (-2, -1), (-2, 2), (-2, -2)];

/// Depth of the search through rational preimages of the basepoint.
const DESCENT_DEPTH: usize = 3;
/// Longest orbit prefix tried for the faithful-node rule.
const FAITHFUL_MAX_N: usize = 6;

fn ser_rat<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_rational(q))
}

fn ser_rats<S: Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(format_rational))
}

fn poly_name(c: &Rational) -> String {
    if c.is_zero() {
        "x^2".into()
    } else if c.is_negative() {
        format!("x^2-{}", format_rational(&-c))
    } else {
        format!("x^2+{}", format_rational(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule")]
pub enum Rule {
    /// `Gal(f^2 - gamma)` is dihedral of order 8.
    Level2D8 {
        #[serde(serialize_with = "ser_rat")]
        c1: Rational,
        #[serde(serialize_with = "ser_rat")]
        c2: Rational,
    },
    /// Infinite local ramification at an odd prime.
    PoonenPrime {
        prime: u64,
        condition: Condition,
        variant: Variant,
    },
    /// `c_{1,gamma}` is not a square, so the root is a faithful node, while
    /// the orbit values span at least two dimensions modulo squares.
    FaithfulNode2Dim {
        #[serde(serialize_with = "ser_rats")]
        values: Vec<Rational>,
        dimension: usize,
    },
    /// Over `Q(sqrt(c_{1,gamma}))`, the basepoint `sqrt(c_{1,gamma})` has
    /// independent `c_1`, `c_2`, so its level-2 group is dihedral.
    QuadFieldD8 { c1: QuadElement, c2: QuadElement },
    /// The critical orbit is infinite, which no abelian image allows.
    PostCriticallyInfinite { witness: PciWitness },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Level2D8 { .. } => "Level2D8",
            Rule::PoonenPrime { .. } => "PoonenPrime",
            Rule::FaithfulNode2Dim { .. } => "FaithfulNode2Dim",
            Rule::QuadFieldD8 { .. } => "QuadFieldD8",
            Rule::PostCriticallyInfinite { .. } => "PostCriticallyInfinite",
        }
    }
}

/// A non-abelian certificate for `(x^2 + c, beta)`: a chain of rational
/// basepoints `beta = chain[0]`, each the image of the next, and a rule
/// applied at the last one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(serialize_with = "ser_rat")]
    pub c: Rational,
    #[serde(serialize_with = "ser_rats")]
    pub chain: Vec<Rational>,
    #[serde(flatten)]
    pub rule: Rule,
}

impl Certificate {
    pub fn node(&self) -> &Rational {
        self.chain.last().expect("nonempty chain")
    }

    /// Recomputes every primitive fact the certificate relies on.
    pub fn replay(&self, pair: &QuadPair) -> Result<bool> {
        let (c, beta) = pair.normal_form();
        if c != self.c || self.chain.first() != Some(&beta) {
            return Ok(false);
        }
        let g = QuadPair::normal(c.clone(), int(0));
        if self.chain.windows(2).any(|w| g.f(&w[1]) != w[0]) {
            return Ok(false);
        }
        let gamma = self.node();
        let fresh = match &self.rule {
            Rule::Level2D8 { .. } => level2_d8(&c, gamma)?,
            Rule::PoonenPrime {
                prime,
                condition,
                variant,
            } => {
                let out = match variant {
                    Variant::Base => poonen_check(&c, gamma, *prime)?,
                    Variant::Preimage => poonen_preimage_check(&c, gamma, *prime)?,
                };
                return Ok(out == PoonenOutcome::InfinitelyRamified(*condition));
            }
            Rule::FaithfulNode2Dim { values, .. } => faithful_node(&c, gamma, values.len())?,
            Rule::QuadFieldD8 { .. } => quad_field_d8(&c, gamma)?,
            Rule::PostCriticallyInfinite { .. } => match is_pcf(&c) {
                PcfVerdict::Pci { witness } => Some(Rule::PostCriticallyInfinite { witness }),
                PcfVerdict::Pcf { .. } => None,
            },
        };
        Ok(fresh.as_ref() == Some(&self.rule))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum AbelianVerdict {
    Abelian {
        conjugate_to: String,
    },
    /// `certificate` is absent when the verdict rests only on the pair not
    /// being in the abelian list.
    NonAbelian {
        certificate: Option<Box<Certificate>>,
    },
    NotApplicable {
        reason: String,
    },
}

impl AbelianVerdict {
    pub fn is_abelian(&self) -> bool {
        matches!(self, AbelianVerdict::Abelian { .. })
    }

    pub fn status(&self) -> &'static str {
        match self {
            AbelianVerdict::Abelian { .. } => "Abelian",
            AbelianVerdict::NonAbelian { .. } => "NonAbelian",
            AbelianVerdict::NotApplicable { .. } => "NotApplicable",
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            AbelianVerdict::NonAbelian { certificate } => certificate.as_deref(),
            _ => None,
        }
    }

    /// Replays the certificate; verdicts without one replay trivially.
    pub fn replay(&self, pair: &QuadPair) -> Result<bool> {
        match self.certificate() {
            Some(cert) => cert.replay(pair),
            None => Ok(true),
        }
    }
}

fn level2_d8(c: &Rational, gamma: &Rational) -> Result<Option<Rule>> {
    let p = QuadPair::normal(c.clone(), gamma.clone());
    let l2 = level2_galois(&p)?;
    if l2.group != GroupId::D8 {
        return Ok(None);
    }
    let vals = orbit_values(&p, 2)?;
    Ok(Some(Rule::Level2D8 {
        c1: vals[0].clone(),
        c2: vals[1].clone(),
    }))
}

fn faithful_node(c: &Rational, gamma: &Rational, max_n: usize) -> Result<Option<Rule>> {
    let p = QuadPair::normal(c.clone(), gamma.clone());
    if in_post_critical_orbit(&p)? {
        return Ok(None);
    }
    let vals = orbit_values(&p, max_n)?;
    if is_perfect_square(&vals[0]) {
        return Ok(None);
    }
    for n in 2..=max_n {
        let dimension = span_dimension_by_coprime_base(&vals[..n])?;
        if dimension >= 2 {
            return Ok(Some(Rule::FaithfulNode2Dim {
                values: vals[..n].to_vec(),
                dimension,
            }));
        }
    }
    Ok(None)
}

fn quad_field_d8(c: &Rational, gamma: &Rational) -> Result<Option<Rule>> {
    let delta = gamma - c;
    if delta.is_zero() {
        return Ok(None);
    }
    let Some(root) = sqrt_in_quadratic_field(&delta)? else {
        return Ok(None);
    };
    // c_{1,r} = r - c and c_{2,r} = c^2 + c - r at r = sqrt(delta).
    let c1 = root.add_rational(&-c);
    let c2 = root.neg().add_rational(&(c * c + c));
    if quad_independent(&[c1.clone(), c2.clone()])? == 2 {
        return Ok(Some(Rule::QuadFieldD8 { c1, c2 }));
    }
    Ok(None)
}

fn rules_at_node(c: &Rational, gamma: &Rational) -> Option<Rule> {
    let p = QuadPair::normal(c.clone(), gamma.clone());
    if let Ok(Some(r)) = level2_d8(c, gamma) {
        return Some(r);
    }
    if let Ok(Some(hit)) = nonabelian_prime_search(&p, DEFAULT_PRIME_BOUND) {
        return Some(Rule::PoonenPrime {
            prime: hit.prime,
            condition: hit.condition,
            variant: hit.variant,
        });
    }
    faithful_node(c, gamma, FAITHFUL_MAX_N).ok().flatten()
}

/// Chains from `beta` through rational preimages, breadth first.
fn rational_chains(c: &Rational, beta: &Rational, depth: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    let mut seen = HashSet::from([beta.clone()]);
    let mut queue = VecDeque::from([vec![beta.clone()]]);
    while let Some(chain) = queue.pop_front() {
        let gamma = chain.last().expect("nonempty");
        if chain.len() <= depth {
            if let Some(r) = exact_sqrt(&(gamma - c)) {
                for child in [r.clone(), -r] {
                    if seen.insert(child.clone()) {
                        let mut next = chain.clone();
                        next.push(child);
                        queue.push_back(next);
                    }
                }
            }
        }
        out.push(chain);
    }
    out
}

fn search_certificate(c: &Rational, beta: &Rational) -> Option<Certificate> {
    let cert = |rule, chain: &[Rational]| Certificate {
        c: c.clone(),
        chain: chain.to_vec(),
        rule,
    };
    let root = [beta.clone()];
    if let Some(rule) = rules_at_node(c, beta) {
        return Some(cert(rule, &root));
    }
    let chains = rational_chains(c, beta, DESCENT_DEPTH);
    for chain in &chains {
        if let Ok(Some(rule)) = quad_field_d8(c, chain.last().expect("nonempty")) {
            return Some(cert(rule, chain));
        }
    }
    for chain in chains.iter().skip(1) {
        if let Some(rule) = rules_at_node(c, chain.last().expect("nonempty")) {
            return Some(cert(rule, chain));
        }
    }
    match is_pcf(c) {
        PcfVerdict::Pci { witness } => Some(cert(Rule::PostCriticallyInfinite { witness }, &root)),
        PcfVerdict::Pcf { .. } => None,
    }
}

/// Decides whether the iterated Galois group of the pair is abelian; the
/// non-abelian answer carries the first certificate found, trying at the
/// basepoint the level-2, local and faithful-node rules, then the quadratic
/// field rule below rational preimages, then the first three rules at those
/// preimages, then the infinite critical orbit.
pub fn classify_abelian(p: &QuadPair) -> AbelianVerdict {
    if is_exceptional(p) {
        return AbelianVerdict::NotApplicable {
            reason: "exceptional basepoint: conjugate to (x^2, 0)".into(),
        };
    }
    let (c, beta) = p.normal_form();
    if ABELIAN_LIST.iter().any(|&(lc, lb)| c == int(lc) && beta == int(lb)) {
        return AbelianVerdict::Abelian {
            conjugate_to: format!("({}, {})", poly_name(&c), format_rational(&beta)),
        };
    }
    AbelianVerdict::NonAbelian {
        certificate: search_certificate(&c, &beta).map(Box::new),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyEntry {
    #[serde(serialize_with = "ser_rat")]
    pub c: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub beta: Rational,
    pub verdict: AbelianVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    pub c_height: u64,
    pub beta_height: u64,
    pub pairs: usize,
    pub status_counts: BTreeMap<&'static str, usize>,
    pub rule_counts: BTreeMap<&'static str, usize>,
    pub abelian: Vec<SurveyEntry>,
    pub uncertified: Vec<SurveyEntry>,
    #[serde(skip)]
    pub entries: Vec<SurveyEntry>,
}

/// Classifies every normal form `(x^2 + c, beta)` with `c`, `beta` of height
/// at most `h`.
pub fn survey(h: u64) -> SurveyReport {
    survey_grid(h, h)
}

pub fn survey_grid(c_height: u64, beta_height: u64) -> SurveyReport {
    let cs = rationals_of_height(c_height);
    let betas = rationals_of_height(beta_height);
    let mut entries = Vec::with_capacity(cs.len() * betas.len());
    for c in &cs {
        for beta in &betas {
            let verdict = classify_abelian(&QuadPair::normal(c.clone(), beta.clone()));
            entries.push(SurveyEntry {
                c: c.clone(),
                beta: beta.clone(),
                verdict,
            });
        }
    }
    let mut status_counts = BTreeMap::new();
    let mut rule_counts = BTreeMap::new();
    for e in &entries {
        *status_counts.entry(e.verdict.status()).or_insert(0) += 1;
        if let Some(cert) = e.verdict.certificate() {
            *rule_counts.entry(cert.rule.name()).or_insert(0) += 1;
        }
    }
    let pick = |f: &dyn Fn(&AbelianVerdict) -> bool| {
        entries.iter().filter(|e| f(&e.verdict)).cloned().collect::<Vec<_>>()
    };
    let abelian = pick(&AbelianVerdict::is_abelian);
    let uncertified = pick(&|v| matches!(v, AbelianVerdict::NonAbelian { certificate: None }));
    SurveyReport {
        c_height,
        beta_height,
        pairs: entries.len(),
        status_counts,
        rule_counts,
        abelian,
        uncertified,
        entries,
    }
}

impl From<Error> for AbelianVerdict {
    fn from(e: Error) -> Self {
        AbelianVerdict::NotApplicable {
            reason: e.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn classify(s: &str) -> AbelianVerdict {
        classify_abelian(&s.parse().unwrap())
    }

    fn rule(s: &str) -> &'static str {
        let v = classify(s);
        let cert = v.certificate().unwrap_or_else(|| panic!("{s}: {v:?}"));
        assert!(cert.replay(&s.parse().unwrap()).unwrap(), "{s}");
        cert.rule.name()
    }

    #[test]
    fn abelian_list() {
        for (c, b) in ABELIAN_LIST {
            assert!(classify(&format!("{c},{b}")).is_abelian());
        }
        // (x - 1)^2 - 1 at 2 is conjugate to (x^2 - 2, 1).
        assert!(classify("1,1,2").is_abelian());
        assert_eq!(classify("0,0").status(), "NotApplicable");
    }

    #[test]
    fn known_certificates() {
        assert_eq!(rule("-1,1"), "Level2D8");
        assert_eq!(rule("-1,-2"), "Level2D8");
        assert_eq!(rule("-1,-1/2"), "FaithfulNode2Dim");
        assert_eq!(rule("-1,1/3"), "Level2D8");
        assert_eq!(rule("-1,8"), "PoonenPrime");
        let v = classify("-1,0");
        let cert = v.certificate().unwrap();
        assert_eq!(cert.chain, vec![int(0), int(1)]);
        match &cert.rule {
            Rule::QuadFieldD8 { c1, c2 } => {
                assert_eq!((c1.a.clone(), c1.b.clone()), (int(1), int(1)));
                assert_eq!((c2.a.clone(), c2.b.clone()), (int(0), int(-1)));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(rule("-1,-1"), "QuadFieldD8");
    }

    #[test]
    fn tampered_certificates_fail() {
        let p: QuadPair = "-1,-1/2".parse().unwrap();
        let mut cert = classify_abelian(&p).certificate().unwrap().clone();
        if let Rule::FaithfulNode2Dim { values, .. } = &mut cert.rule {
            values[0] = rat(1, 3);
        }
        assert!(!cert.replay(&p).unwrap());
        let mut cert = classify_abelian(&p).certificate().unwrap().clone();
        cert.chain.push(int(5));
        assert!(!cert.replay(&p).unwrap());
    }

    #[test]
    fn post_critically_infinite_maps() {
        let v = classify("1/2,0");
        assert!(v.certificate().is_some());
        assert!(v.replay(&"1/2,0".parse().unwrap()).unwrap());
    }
}
