//! Exhaustive small-expression corpora and the invariant suite run over them.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, Reason, Verdict};
use crate::error::{Error, Result};
use crate::expr::{Axis, TangleExpr};
use crate::fraction::Fraction;
use crate::parse::parse_tangle;
use crate::rewrite::{max_q_unchecked, normalize, qsplit_unchecked};
use crate::validate::is_valid;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    /// All binary trees with `k` leaves, in a fixed order.
    fn all(k: usize) -> Vec<Shape> {
        if k == 1 {
            return vec![Shape::Leaf];
        }
        let mut out = Vec::new();
        for left in 1..k {
            for l in Shape::all(left) {
                for r in Shape::all(k - left) {
                    out.push(Shape::Node(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        out
    }

    /// Fills internal nodes from `ops` (true = sum) and leaves from `leaves`,
    /// both in pre-order.
    fn build(
        &self,
        ops: &mut impl Iterator<Item = bool>,
        leaves: &mut impl Iterator<Item = Fraction>,
    ) -> TangleExpr {
        match self {
            Shape::Leaf => TangleExpr::rational(leaves.next().expect("enough leaves")),
            Shape::Node(l, r) => {
                let is_sum = ops.next().expect("enough ops");
                let a = l.build(ops, leaves);
                let b = r.build(ops, leaves);
                if is_sum {
                    TangleExpr::sum(a, b)
                } else {
                    TangleExpr::product(a, b)
                }
            }
        }
    }
}

/// Every valid expression with exactly `k` leaves of this shape, paired with
/// its normal form, in canonical order.
fn shape_expressions(
    shape: &Shape,
    k: usize,
    alphabet: &[Fraction],
) -> Vec<(TangleExpr, TangleExpr)> {
    let mut out = Vec::new();
    let combos = alphabet.len().pow(k as u32);
    for mask in 0..1usize << (k - 1) {
        for mut code in 0..combos {
            let mut digits = vec![0; k];
            for d in digits.iter_mut().rev() {
                *d = code % alphabet.len();
                code /= alphabet.len();
            }
            let e = shape.build(
                &mut (0..k - 1).map(|i| mask >> (k - 2 - i) & 1 == 1),
                &mut digits.into_iter().map(|d| alphabet[d].clone()),
            );
            if let Ok(nf) = normalize(&e) {
                out.push((e, nf.expr));
            }
        }
    }
    out
}

/// All valid Sum/Product expressions with at most `max_leaves` leaves over
/// `alphabet`, one per normal form, in deterministic order: by leaf count,
/// then shape, then operators, then leaves. `jobs` bounds the worker threads
/// (0 means the rayon default); it never changes the result.
pub fn enumerate(max_leaves: usize, alphabet: &[Fraction], jobs: usize) -> Vec<TangleExpr> {
    let mut alphabet = alphabet.to_vec();
    let mut seen_leaf = HashSet::new();
    alphabet.retain(|f| seen_leaf.insert(f.clone()));
    if alphabet.is_empty() || max_leaves == 0 {
        return Vec::new();
    }
    let items: Vec<(usize, Shape)> = (1..=max_leaves)
        .flat_map(|k| Shape::all(k).into_iter().map(move |s| (k, s)))
        .collect();
    let run = || -> Vec<Vec<(TangleExpr, TangleExpr)>> {
        items
            .par_iter()
            .map(|(k, s)| shape_expressions(s, *k, &alphabet))
            .collect()
    };
    let batches = with_jobs(jobs, run);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (e, nf) in batches.into_iter().flatten() {
        if seen.insert(nf) {
            out.push(e);
        }
    }
    out
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub disk: bool,
    pub annuli: usize,
    pub tori: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CheckCount {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub expr: String,
    pub normal_form: String,
    pub status: String,
    pub reasons: Vec<serde_json::Value>,
    pub census: CensusSummary,
    pub checks: CheckCount,
}

fn status_text(v: &Verdict) -> String {
    serde_json::to_value(v.status)
        .ok()
        .and_then(|s| s.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn reasons_json(v: &Verdict) -> Vec<serde_json::Value> {
    v.reasons
        .iter()
        .map(|r| serde_json::to_value(r).expect("reasons serialize"))
        .collect()
}

impl CorpusRecord {
    pub fn new(e: &TangleExpr) -> Result<CorpusRecord> {
        let v = classify(e)?;
        let mut checks = CheckCount::default();
        for (_, ok) in invariant_checks(e) {
            if ok {
                checks.passed += 1;
            } else {
                checks.failed += 1;
            }
        }
        Ok(CorpusRecord {
            expr: e.to_string(),
            normal_form: v.normal_form.to_string(),
            status: status_text(&v),
            reasons: reasons_json(&v),
            census: CensusSummary {
                disk: v.census.disk.is_some(),
                annuli: v.census.annuli.len(),
                tori: v.census.tori.len(),
            },
            checks,
        })
    }
}

/// Records for `exprs`, in order, computed on up to `jobs` threads.
pub fn build_records(exprs: &[TangleExpr], jobs: usize) -> Result<Vec<CorpusRecord>> {
    with_jobs(jobs, || exprs.par_iter().map(CorpusRecord::new).collect())
}

pub fn write_jsonl(records: &[CorpusRecord], mut out: impl Write) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_jsonl(input: impl BufRead) -> Result<Vec<CorpusRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::CorruptCorpus {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| Error::CorruptCorpus {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

fn kinds(v: &Verdict) -> Vec<&'static str> {
    let mut k: Vec<_> = v.reasons.iter().map(Reason::kind).collect();
    k.sort_unstable();
    k
}

fn same_verdict(a: &Result<Verdict>, b: &Result<Verdict>) -> bool {
    match (a, b) {
        (Ok(a), Ok(b)) => a.status == b.status && kinds(a) == kinds(b),
        _ => false,
    }
}

/// Invariants every valid expression must satisfy, by name.
pub fn invariant_checks(e: &TangleExpr) -> Vec<(&'static str, bool)> {
    let mut out = Vec::new();
    out.push(("round_trip", parse_tangle(&e.to_string()).as_ref() == Ok(e)));

    let Ok(nf) = normalize(e).map(|n| n.expr) else {
        out.push(("valid", false));
        return out;
    };
    out.push((
        "idempotence",
        normalize(&nf).map(|n| n.expr).as_ref() == Ok(&nf),
    ));
    out.push((
        "rotation_equivariance",
        normalize(&e.rotated()).map(|n| n.expr) == Ok(nf.rotated()),
    ));

    let v = classify(e);
    out.push((
        "rotation_invariance",
        same_verdict(&v, &classify(&e.rotated())),
    ));
    out.push((
        "mirror_invariance",
        same_verdict(&v, &classify(&e.mirrored())),
    ));

    let mq = max_q_unchecked(&nf);
    let mq_rot = normalize(&e.rotated()).map(|n| max_q_unchecked(&n.expr));
    let mq_mir = normalize(&e.mirrored()).map(|n| max_q_unchecked(&n.expr));
    out.push(("max_q_invariance", mq_rot == Ok(mq) && mq_mir == Ok(mq)));

    let sound = Axis::BOTH.into_iter().all(|axis| {
        let s = qsplit_unchecked(&nf, axis);
        qsplit_unchecked(&s.remainder, axis).m == 0
            && normalize(&s.reassemble()).map(|n| n.expr).as_ref() == Ok(&nf)
    });
    out.push(("qsplit_soundness", sound));

    let aligned = v.as_ref().is_ok_and(|v| {
        let has = |k: &str| v.reasons.iter().any(|r| r.kind() == k);
        let c = &v.census;
        c.disk.is_some() == has("rational")
            && !c.annuli.is_empty() == has("q_product")
            && !c.tori.is_empty() == has("contains_q")
            && c.spheres.is_empty()
    });
    out.push(("census_alignment", aligned));
    out
}

/// Re-derives a stored record and runs the invariants on its expression.
pub fn record_checks(rec: &CorpusRecord) -> std::result::Result<Vec<(&'static str, bool)>, String> {
    let e = parse_tangle(&rec.expr).map_err(|e| e.to_string())?;
    if !is_valid(&e) {
        return Err(format!("{} fails validation", rec.expr));
    }
    let mut out = invariant_checks(&e);
    let stored = CorpusRecord::new(&e).map_err(|e| e.to_string())?;
    out.push((
        "stored_verdict",
        stored.normal_form == rec.normal_form
            && stored.status == rec.status
            && stored.reasons == rec.reasons
            && stored.census == rec.census,
    ));
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub records: usize,
    pub checks: BTreeMap<&'static str, CheckCount>,
}

impl SuiteReport {
    pub fn failed(&self) -> usize {
        self.checks.values().map(|c| c.failed).sum()
    }

    pub fn passed(&self) -> usize {
        self.checks.values().map(|c| c.passed).sum()
    }
}

/// Runs the invariant suite over a corpus.
pub fn run_invariant_suite(records: &[CorpusRecord], jobs: usize) -> Result<SuiteReport> {
    let results: Vec<_> = with_jobs(jobs, || {
        records.par_iter().map(record_checks).collect::<Vec<_>>()
    });
    let mut report = SuiteReport {
        records: records.len(),
        ..SuiteReport::default()
    };
    for (i, r) in results.into_iter().enumerate() {
        let checks = r.map_err(|msg| Error::CorruptCorpus { line: i + 1, msg })?;
        for (name, ok) in checks {
            let c = report.checks.entry(name).or_default();
            if ok {
                c.passed += 1;
            } else {
                c.failed += 1;
            }
        }
    }
    Ok(report)
}
