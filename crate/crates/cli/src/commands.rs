//! One function per subcommand. Each turns its arguments into records and
//! leaves formatting and exit codes to the caller.

use serde::Serialize;
use serde_json::{json, Map, Value};

use arboreal::curves::{construct_point, CurveSpec};
use arboreal::dynamics::{
    adjusted_orbit, is_exceptional, is_pcf, orbit_valuations, post_critical_hit, PcfVerdict,
    PciWitness,
};
use arboreal::galois::{
    classify_abelian, contained_in_mv, frobenius_sample, good_primes, level2_galois,
    nonabelian_prime_search, orbit_values, poonen_check, poonen_preimage_check, survey_grid,
    AbelianVerdict, PoonenOutcome,
};
use arboreal::index_sets::{
    bertrand_family, m_coprime_witness, progressing_in_span, progressing_witness, IndexFamily,
};
use arboreal::rational::{format_rational, rationals_of_height};
use arboreal::square::{span_dimension_by_coprime_base, span_dimension_by_factoring};
use arboreal::tree::{verify_noncommutation, verify_noncommutation_sampled};
use arboreal::{Error, IndexVector, QuadPair, Rational};

use crate::{input, CliError, Config};

#[derive(Debug, Default)]
pub struct Report {
    pub records: Vec<Value>,
    pub summary: Option<Value>,
    /// Set when some record could not be decided.
    pub inconclusive: Option<String>,
}

impl Report {
    fn push(&mut self, v: Value) {
        self.records.push(v);
    }

    fn undecided(&mut self, why: String) {
        self.inconclusive.get_or_insert(why);
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Merges the fields of `extra` into `base`; both must be objects.
fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn head(p: &QuadPair) -> Value {
    let (c, beta) = p.normal_form();
    json!({
        "pair": p.to_string(),
        "c": format_rational(&c),
        "beta": format_rational(&beta),
    })
}

fn pcf_provenance(v: &PcfVerdict) -> &'static str {
    match v {
        PcfVerdict::Pcf { .. } => "critical orbit cycle",
        PcfVerdict::Pci { witness: PciWitness::Escape { .. } } => "archimedean escape of critical orbit",
        PcfVerdict::Pci { witness: PciWitness::Denominator { .. } } => "non-integral parameter",
    }
}

fn abelian_provenance(v: &AbelianVerdict) -> String {
    match v {
        AbelianVerdict::Abelian { .. } => "abelian classification list".into(),
        AbelianVerdict::NotApplicable { .. } => "exceptional pair".into(),
        AbelianVerdict::NonAbelian { certificate: Some(c) } => format!("certificate {}", c.rule.name()),
        AbelianVerdict::NonAbelian { certificate: None } => "post-critically infinite, no certificate".into(),
    }
}

/// Dimension and the method that produced it. Factoring runs within the
/// budget; past it the coprime base gives the same dimension without primes.
fn ab_dimension(p: &QuadPair, cfg: &Config) -> Result<(usize, &'static str), Error> {
    let values = orbit_values(p, cfg.orbit_len as usize)?;
    match span_dimension_by_factoring(&values, cfg.budget) {
        Err(Error::BudgetExceeded { .. }) => Ok((span_dimension_by_coprime_base(&values)?, "coprime base")),
        other => Ok((other?, "factoring")),
    }
}

fn error_value(e: &Error) -> Value {
    json!({ "error": e.to_string() })
}

pub fn cmd_classify(pairs: &[QuadPair], cfg: &Config) -> Result<Report, CliError> {
    let mut report = Report::default();
    for p in pairs {
        let (c, _) = p.normal_form();
        let pcf = is_pcf(&c);
        let verdict = classify_abelian(p);
        if matches!(verdict, AbelianVerdict::NonAbelian { certificate: None }) {
            report.undecided(format!("{p}: no certificate"));
        }
        let abdim = match ab_dimension(p, cfg) {
            Ok((d, _)) => json!(d),
            Err(e) => error_value(&e),
        };
        let level2 = match level2_galois(p) {
            Ok(g) => json!(g.signature()),
            Err(e) => error_value(&e),
        };
        report.push(merge(
            head(p),
            json!({
                "pcf": pcf.is_pcf(),
                "pcf_verdict": pcf,
                "exceptional": is_exceptional(p),
                "abelian": verdict.is_abelian(),
                "verdict": verdict,
                "ab_dimension": abdim,
                "orbit_len": cfg.orbit_len,
                "level2": level2,
                "provenance": abelian_provenance(&verdict),
            }),
        ));
    }
    Ok(report)
}

pub fn cmd_survey(c_height: u64, alpha_height: u64, all: bool) -> Result<Report, CliError> {
    let s = survey_grid(c_height, alpha_height);
    let mut report = Report::default();
    let listed = if all {
        &s.entries
    } else {
        // The abelian and uncertified lists are disjoint.
        &s.abelian.iter().chain(&s.uncertified).cloned().collect()
    };
    let mut listed: Vec<_> = listed.iter().collect();
    listed.sort_by(|a, b| (&a.c, &a.beta).cmp(&(&b.c, &b.beta)));
    for e in listed {
        report.push(json!({
            "c": format_rational(&e.c),
            "beta": format_rational(&e.beta),
            "status": e.verdict.status(),
            "rule": e.verdict.certificate().map(|c| c.rule.name()),
            "provenance": abelian_provenance(&e.verdict),
        }));
    }
    if !s.uncertified.is_empty() {
        report.undecided(format!("{} pairs without certificate", s.uncertified.len()));
    }
    report.summary = Some(json!({
        "c_height": c_height,
        "alpha_height": alpha_height,
        "pairs": s.pairs,
        "abelian": s.abelian.len(),
        "uncertified": s.uncertified.len(),
        "status_counts": s.status_counts,
        "rule_counts": s.rule_counts,
    }));
    Ok(report)
}

pub fn cmd_orbit(pairs: &[QuadPair], cfg: &Config) -> Result<Report, CliError> {
    let mut report = Report::default();
    for p in pairs {
        let o = adjusted_orbit(p, cfg.orbit_len as usize);
        let hit = match post_critical_hit(p) {
            Ok(h) => json!(h),
            Err(e) => error_value(&e),
        };
        report.push(merge(
            merge(head(p), to_value(&o)),
            json!({ "post_critical_hit": hit, "provenance": "adjusted orbit" }),
        ));
    }
    Ok(report)
}

pub fn cmd_pcf(params: &[String], height: Option<u64>) -> Result<Report, CliError> {
    let mut cs: Vec<Rational> = params.iter().map(|s| input::rational(s)).collect::<Result<_, _>>()?;
    if let Some(h) = height {
        cs.extend(rationals_of_height(h));
    }
    if cs.is_empty() {
        return Err(CliError::Input("no parameters given".into()));
    }
    let mut report = Report::default();
    let mut pcf = Vec::new();
    for c in &cs {
        let v = is_pcf(c);
        if v.is_pcf() {
            pcf.push(format_rational(c));
        }
        report.push(merge(
            json!({ "c": format_rational(c), "pcf": v.is_pcf() }),
            merge(to_value(&v), json!({ "provenance": pcf_provenance(&v) })),
        ));
    }
    if height.is_some() {
        report.summary = Some(json!({ "checked": cs.len(), "pcf": pcf }));
    }
    Ok(report)
}

pub fn cmd_contain(p: &QuadPair, vectors: &[String]) -> Result<Report, CliError> {
    let mut report = Report::default();
    for s in vectors {
        let v = input::vector(s)?;
        let contained = contained_in_mv(p, &v)?;
        report.push(merge(
            head(p),
            json!({
                "v": v,
                "contained": contained,
                "provenance": "square test on product of adjusted orbit values",
            }),
        ));
    }
    Ok(report)
}

pub fn cmd_abdim(pairs: &[QuadPair], cfg: &Config) -> Result<Report, CliError> {
    let mut report = Report::default();
    for p in pairs {
        let (d, method) = ab_dimension(p, cfg)?;
        report.push(merge(
            head(p),
            json!({
                "n": cfg.orbit_len,
                "dimension": d,
                "method": method,
                "provenance": "F2-rank of square classes of adjusted orbit",
            }),
        ));
    }
    Ok(report)
}

pub fn cmd_group2(pairs: &[QuadPair], frobenius: usize) -> Result<Report, CliError> {
    let mut report = Report::default();
    for p in pairs {
        let g = level2_galois(p)?;
        let mut rec = merge(head(p), to_value(&g));
        let mut extra = Map::new();
        extra.insert("signature".into(), json!(g.signature()));
        extra.insert("provenance".into(), json!("level-2 splitting field over Q(sqrt delta)"));
        if frobenius > 0 {
            let sample = frobenius_sample(p, 2, &good_primes(p, 2, frobenius))?;
            extra.insert("frobenius_agrees".into(), json!(sample.is_compatible(g.signature())));
            extra.insert("frobenius".into(), to_value(&sample));
        }
        rec = merge(rec, Value::Object(extra));
        report.push(rec);
    }
    Ok(report)
}

pub fn cmd_valuations(c: &Rational, p: u64, cfg: &Config) -> Result<Report, CliError> {
    let r = orbit_valuations(c, p, cfg.orbit_len as usize)?;
    let mut report = Report::default();
    report.push(merge(to_value(&r), json!({ "provenance": "valuations of critical orbit" })));
    Ok(report)
}

fn outcome_name(o: &PoonenOutcome) -> Value {
    to_value(o)
}

pub fn cmd_poonen(pair: &QuadPair, prime: Option<u64>, cfg: &Config) -> Result<Report, CliError> {
    let (c, beta) = pair.normal_form();
    let mut report = Report::default();
    match prime {
        Some(p) => {
            let base = poonen_check(&c, &beta, p)?;
            let pre = poonen_preimage_check(&c, &beta, p)?;
            if base == PoonenOutcome::Inconclusive && pre == PoonenOutcome::Inconclusive {
                report.undecided(format!("{pair}: both tests inconclusive at {p}"));
            }
            report.push(merge(
                head(pair),
                json!({
                    "prime": p,
                    "base": outcome_name(&base),
                    "preimage": outcome_name(&pre),
                    "provenance": "local infinite ramification test",
                }),
            ));
        }
        None => {
            let hit = nonabelian_prime_search(pair, cfg.prime_bound)?;
            if hit.is_none() {
                report.undecided(format!("{pair}: no prime up to {}", cfg.prime_bound));
            }
            report.push(merge(
                head(pair),
                json!({
                    "prime_bound": cfg.prime_bound,
                    "hit": hit,
                    "provenance": "local infinite ramification search",
                }),
            ));
        }
    }
    Ok(report)
}

pub fn cmd_indexset(
    fam: &IndexFamily,
    kl: Option<(u64, u64)>,
    m: u64,
    target: Option<&IndexVector>,
) -> Result<Report, CliError> {
    let mut rec = json!({
        "members": fam.len(),
        "coprime": m_coprime_witness(fam, m),
        "provenance": "index-set combinatorics",
    });
    if let Some((k, l)) = kl {
        rec = merge(rec, json!({ "k": k, "l": l, "progressing": progressing_witness(fam, k, l) }));
    }
    if let Some(t) = target {
        let (k, l) = kl.ok_or_else(|| CliError::Input("--target needs --k and --l".into()))?;
        rec = merge(rec, json!({ "span": progressing_in_span(fam, t, k, l) }));
    }
    let mut report = Report::default();
    report.push(rec);
    Ok(report)
}

pub fn cmd_bertrand(a: &[u64]) -> Result<Report, CliError> {
    let b = bertrand_family(a)?;
    let check = m_coprime_witness(&b.family, 0);
    let mut report = Report::default();
    for (i, (v, w)) in b.family.members().iter().zip(&b.witnesses).enumerate() {
        report.push(json!({
            "n": i + 1,
            "a": a[i],
            "v": v,
            "witness": w,
            "provenance": "largest prime at most a_n",
        }));
    }
    report.summary = Some(json!({
        "members": b.family.len(),
        "coprime": check.holds,
        "unbounded": check.unbounded,
    }));
    Ok(report)
}

pub fn cmd_tree_verify(depth: usize, samples: u64, cfg: &Config) -> Result<Report, CliError> {
    let r = if depth <= 3 {
        verify_noncommutation(depth)?
    } else {
        verify_noncommutation_sampled(depth, samples, cfg.seed)
    };
    let result = if r.counterexamples.is_empty() {
        format!("no counterexamples ({} pairs)", r.pairs_checked)
    } else {
        format!("{} counterexamples ({} pairs)", r.counterexamples.len(), r.pairs_checked)
    };
    let mut report = Report::default();
    report.push(merge(
        to_value(&r),
        json!({ "result": result, "provenance": if r.exhaustive { "exhaustive enumeration" } else { "seeded sampling" } }),
    ));
    Ok(report)
}

pub fn cmd_curve(
    p: &QuadPair,
    k: usize,
    l: usize,
    i0: usize,
    search: Option<u64>,
    construct: Option<&IndexVector>,
) -> Result<Report, CliError> {
    let curve = CurveSpec::new(p.clone(), k, l, i0)?;
    let mut rec = merge(
        head(p),
        json!({
            "k": k,
            "l": l,
            "i0": i0,
            "exponents": curve.exponents(),
            "degree": curve.degree(),
            "smooth": curve.is_smooth(),
            "genus": curve.genus(),
            "provenance": "hyperelliptic curve of a progression",
        }),
    );
    if let Some(h) = search {
        rec = merge(rec, json!({ "search_height": h, "points": curve.naive_point_search(h) }));
    }
    if let Some(v) = construct {
        let built = construct_point(p, v, k, i0)?;
        rec = merge(rec, json!({ "constructed": built }));
    }
    let mut report = Report::default();
    report.push(rec);
    Ok(report)
}
