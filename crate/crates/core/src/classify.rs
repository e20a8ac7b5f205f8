//! Hyperbolicity of tangle complements and their essential surfaces.
//!
//! The complement of an arborescent tangle is hyperbolic unless the tangle
//! is rational, splits off a `Q_m` factor (`T = Q_m * T'`, `m ≥ 1`), or
//! contains some `Q_n` with `n ≥ 2`. The essential surfaces are exactly the
//! ones these conditions exhibit: the disk separating the strings of a
//! rational tangle, the standard annuli of a `Q_m` prefix and the standard
//! tori of a `Q_n` run.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expr::{Axis, Path, TangleExpr};
use crate::rewrite::{normalize, q_count, qsplit_unchecked, TraceStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Hyperbolic,
    NonHyperbolic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    Rational,
    /// `T = Q_m * T'` along `axis`.
    QProduct {
        m: u64,
        axis: Axis,
    },
    /// A maximal run of `m ≥ 2` Q circles at `path`.
    ContainsQ {
        m: u64,
        path: Path,
        axis: Axis,
    },
}

impl Reason {
    pub fn kind(&self) -> &'static str {
        match self {
            Reason::Rational => "rational",
            Reason::QProduct { .. } => "q_product",
            Reason::ContainsQ { .. } => "contains_q",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disk {
    pub separates_strings: bool,
}

/// One standard annulus or torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceRecord {
    pub path: Path,
    pub axis: Axis,
    pub m: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceCensus {
    pub disk: Option<Disk>,
    pub annuli: Vec<SurfaceRecord>,
    pub tori: Vec<SurfaceRecord>,
    /// Arborescent tangle complements are irreducible, so this is always empty.
    pub spheres: Vec<SurfaceRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    #[serde(serialize_with = "as_text")]
    pub input: TangleExpr,
    #[serde(serialize_with = "as_text")]
    pub normal_form: TangleExpr,
    pub status: Status,
    pub reasons: Vec<Reason>,
    pub census: SurfaceCensus,
    pub irreducible: bool,
    pub trace: Vec<TraceStep>,
}

impl Verdict {
    pub fn is_hyperbolic(&self) -> bool {
        self.status == Status::Hyperbolic
    }
}

fn as_text<S: Serializer>(e: &TangleExpr, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(e)
}

pub fn classify(e: &TangleExpr) -> Result<Verdict> {
    let nf = normalize(e)?;
    let (reasons, census) = analyze(&nf.expr)?;
    Ok(Verdict {
        input: e.clone(),
        normal_form: nf.expr,
        status: if reasons.is_empty() {
            Status::Hyperbolic
        } else {
            Status::NonHyperbolic
        },
        reasons,
        census,
        irreducible: true,
        trace: nf.trace,
    })
}

pub fn census(e: &TangleExpr) -> Result<SurfaceCensus> {
    let nf = normalize(e)?;
    Ok(analyze(&nf.expr)?.1)
}

/// Positions of the Conway disks: every sum and product node of the normal
/// form glues two nontrivial tangles along an essential disk.
pub fn conway_disks(e: &TangleExpr) -> Result<Vec<Path>> {
    let nf = normalize(e)?;
    let mut out = Vec::new();
    nf.expr.walk(&mut |path, node| {
        if matches!(node, TangleExpr::Sum { .. } | TangleExpr::Product { .. }) {
            out.push(path.clone());
        }
    });
    Ok(out)
}

/// Maximal Q runs of a normal expression: nodes whose count on an axis is at
/// least 2 and differs from the parent's count on that axis.
pub(crate) fn q_runs(nf: &TangleExpr) -> Vec<SurfaceRecord> {
    let mut out = Vec::new();
    visit(nf, &Path::root(), [0, 0], &mut out);
    out
}

fn visit(e: &TangleExpr, path: &Path, parent: [u64; 2], out: &mut Vec<SurfaceRecord>) {
    let mut here = [0; 2];
    for (i, axis) in Axis::BOTH.into_iter().enumerate() {
        here[i] = q_count(e, axis);
        if here[i] >= 2 && here[i] != parent[i] {
            out.push(SurfaceRecord {
                path: path.clone(),
                axis,
                m: here[i],
            });
        }
    }
    for (step, child) in e.children() {
        visit(child, &path.child(step), here, out);
    }
}

/// Most annuli plus tori a census will list.
pub const MAX_CENSUS: u64 = 1 << 16;

fn analyze(nf: &TangleExpr) -> Result<(Vec<Reason>, SurfaceCensus)> {
    let prefix: u64 = Axis::BOTH
        .into_iter()
        .map(|axis| qsplit_unchecked(nf, axis).m)
        .fold(0, u64::saturating_add);
    let size = q_runs(nf)
        .iter()
        .map(|r| r.m - 1)
        .fold(prefix, u64::saturating_add);
    if size > MAX_CENSUS {
        return Err(Error::CensusTooLarge(size, MAX_CENSUS));
    }
    let mut reasons = Vec::new();
    let mut census = SurfaceCensus {
        disk: None,
        annuli: Vec::new(),
        tori: Vec::new(),
        spheres: Vec::new(),
    };
    if nf.is_rational_leaf() {
        reasons.push(Reason::Rational);
        census.disk = Some(Disk {
            separates_strings: true,
        });
    }
    for axis in Axis::BOTH {
        let m = qsplit_unchecked(nf, axis).m;
        if m >= 1 {
            reasons.push(Reason::QProduct { m, axis });
            census.annuli.extend((1..=m).map(|k| SurfaceRecord {
                path: Path::root(),
                axis,
                m: k,
            }));
        }
    }
    for run in q_runs(nf) {
        census.tori.extend((2..=run.m).map(|k| SurfaceRecord {
            path: run.path.clone(),
            axis: run.axis,
            m: k,
        }));
        reasons.push(Reason::ContainsQ {
            m: run.m,
            path: run.path,
            axis: run.axis,
        });
    }
    Ok((reasons, census))
}
