//! Hyperbolicity of arborescent links.
//!
//! Small links are two-bridge or Montesinos. A Montesinos link is hyperbolic
//! unless it is a torus link (in the sense that allows cores of the solid
//! tori) or one of four exceptional links up to mirror image. A large link
//! glued from two non-rational tangles is hyperbolic iff it contains `Q_2`,
//! and is always prime and non-split.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::classify::Status;
use crate::error::{Error, Result};
use crate::expr::{GluingMap, LinkExpr, TangleExpr};
use crate::fraction::{frac, serialize_bigint, Fraction, TwoBridgeForm};
use crate::rewrite::{max_q_unchecked, normalize, qsplit_unchecked};

/// `L(r1, ..., rn)` up to cyclic rotation and reversal of the entries and
/// moving integers between them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MontesinosForm {
    /// Fractional parts in `(0, 1)`, lexicographically least among all
    /// rotations and reversals.
    pub parts: Vec<Fraction>,
    /// `Σ ri`.
    pub e: Fraction,
    #[serde(skip)]
    pub n: usize,
}

impl MontesinosForm {
    pub fn mirrored(&self) -> MontesinosForm {
        let one = Fraction::integer(1);
        let parts: Vec<Fraction> = self.parts.iter().map(|p| &one - p).collect();
        MontesinosForm {
            n: parts.len(),
            parts: dihedral_min(parts),
            e: self.e.mirror(),
        }
    }

    /// Entries `r1, ..., rn` with these parts and total `e`.
    pub fn entries(&self) -> Vec<Fraction> {
        let mut out = self.parts.clone();
        let sum = out.iter().fold(Fraction::zero(), |acc, p| &acc + p);
        let offset = &self.e - &sum;
        match out.first_mut() {
            Some(first) => *first = &*first + &offset,
            None => out.push(offset),
        }
        out
    }
}

pub fn canon_montesinos(rs: &[Fraction]) -> Result<MontesinosForm> {
    if let Some(bad) = rs.iter().find(|r| r.is_infinite()) {
        return Err(Error::MontesinosDenominator(bad.to_string()));
    }
    let e = rs.iter().fold(Fraction::zero(), |acc, r| &acc + r);
    let parts: Vec<Fraction> = rs
        .iter()
        .filter(|r| !r.is_integral())
        .map(Fraction::fractional_part)
        .collect();
    Ok(MontesinosForm {
        n: parts.len(),
        parts: dihedral_min(parts),
        e,
    })
}

fn cmp_seq(a: &[Fraction], b: &[Fraction]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.cmp_simplest_first(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

fn dihedral_min(parts: Vec<Fraction>) -> Vec<Fraction> {
    let n = parts.len();
    let mut best = parts.clone();
    let reversed: Vec<Fraction> = parts.iter().rev().cloned().collect();
    for seq in [parts, reversed] {
        for k in 0..n {
            let cand: Vec<Fraction> = seq[k..].iter().chain(&seq[..k]).cloned().collect();
            if cmp_seq(&cand, &best).is_lt() {
                best = cand;
            }
        }
    }
    best
}

/// Fraction `F` with `N(T[r1] + T[r2]) = N(T[F])`.
///
/// The twists of `T[r2]` slide through the closure onto `T[r1]`: horizontal
/// twists add to `F`, vertical ones act as `F ↦ F/(1 + nF)`.
pub fn two_bridge_fraction(r1: &Fraction, r2: &Fraction) -> Fraction {
    let mut f = r1.clone();
    let mut x = r2.clone();
    loop {
        if x.is_infinite() {
            return f.rotate();
        }
        let n = x.floor();
        f = f.add_integer(&n);
        x = x.fractional_part();
        if x.is_zero() {
            return f;
        }
        // x = 1/z with z > 1
        let z = Fraction::new(x.denom().clone(), x.numer().clone()).expect("x is nonzero");
        let m = z.floor();
        f = f.add_vertical_twists(&m);
        let w = z.fractional_part();
        x = Fraction::new(w.denom().clone(), w.numer().clone()).expect("w is finite");
    }
}

/// Two-bridge form of a Montesinos link with at most two non-integral entries.
pub fn montesinos_two_bridge(form: &MontesinosForm) -> Option<TwoBridgeForm> {
    let entries = form.entries();
    match entries.as_slice() {
        [r] => Some(r.two_bridge()),
        [r1, r2] => Some(two_bridge_fraction(r1, r2).two_bridge()),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TorusFamily {
    /// `L(1/2, -1/2, 1/q)`.
    FamilyA { q: i64 },
    /// `L(1/4, -1/2, 1/3)`: the trefoil together with its axis.
    TrefoilWithAxis { mirror: bool },
    /// `L(-1/3, -1/2, 1/3)`.
    TorusKnot34 { mirror: bool },
    /// `L(-1/5, 1/2, -1/3)`.
    TorusKnot35 { mirror: bool },
    TwoBridge {
        #[serde(serialize_with = "serialize_bigint")]
        p: BigInt,
        #[serde(serialize_with = "serialize_bigint")]
        q: BigInt,
    },
}

fn canon(rs: &[(i64, i64)]) -> MontesinosForm {
    let rs: Vec<Fraction> = rs.iter().map(|&(p, q)| frac(p, q)).collect();
    canon_montesinos(&rs).expect("finite entries")
}

fn same(a: &MontesinosForm, b: &MontesinosForm) -> bool {
    a.parts == b.parts && a.e == b.e
}

/// Matches `f` against the torus links among Montesinos links.
pub fn is_torus_montesinos(f: &MontesinosForm) -> Option<TorusFamily> {
    if !f.e.is_infinite() && f.e.numer().abs().is_one() {
        if let Some(q) = (f.e.denom() * f.e.numer()).to_i64() {
            if same(f, &canon(&[(1, 2), (-1, 2), (1, q)])) {
                return Some(TorusFamily::FamilyA { q });
            }
        }
    }
    type Sporadic = (&'static [(i64, i64)], fn(bool) -> TorusFamily);
    let sporadic: [Sporadic; 3] = [
        (&[(1, 4), (-1, 2), (1, 3)], |mirror| {
            TorusFamily::TrefoilWithAxis { mirror }
        }),
        (&[(-1, 3), (-1, 2), (1, 3)], |mirror| {
            TorusFamily::TorusKnot34 { mirror }
        }),
        (&[(-1, 5), (1, 2), (-1, 3)], |mirror| {
            TorusFamily::TorusKnot35 { mirror }
        }),
    ];
    for (rs, family) in sporadic {
        let c = canon(rs);
        if same(f, &c) {
            return Some(family(false));
        }
        if same(f, &c.mirrored()) {
            return Some(family(true));
        }
    }
    let tb = montesinos_two_bridge(f)?;
    tb.torus
        .then_some(TorusFamily::TwoBridge { p: tb.p, q: tb.q })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OertelLink {
    #[serde(rename = "L(1/2,1/2,-1/2,-1/2)")]
    HalvesFour,
    #[serde(rename = "L(2/3,-1/3,-1/3)")]
    Thirds,
    #[serde(rename = "L(1/2,-1/4,-1/4)")]
    Quarters,
    #[serde(rename = "L(1/2,-1/3,-1/6)")]
    HalfThirdSixth,
}

impl OertelLink {
    pub const ALL: [OertelLink; 4] = [
        OertelLink::HalvesFour,
        OertelLink::Thirds,
        OertelLink::Quarters,
        OertelLink::HalfThirdSixth,
    ];

    pub fn entries(self) -> Vec<Fraction> {
        let rs: &[(i64, i64)] = match self {
            OertelLink::HalvesFour => &[(1, 2), (1, 2), (-1, 2), (-1, 2)],
            OertelLink::Thirds => &[(2, 3), (-1, 3), (-1, 3)],
            OertelLink::Quarters => &[(1, 2), (-1, 4), (-1, 4)],
            OertelLink::HalfThirdSixth => &[(1, 2), (-1, 3), (-1, 6)],
        };
        rs.iter().map(|&(p, q)| frac(p, q)).collect()
    }
}

pub fn oertel_exception(f: &MontesinosForm) -> Option<(OertelLink, bool)> {
    OertelLink::ALL.into_iter().find_map(|which| {
        let c = canon_montesinos(&which.entries()).expect("finite entries");
        if same(f, &c) {
            Some((which, false))
        } else if same(f, &c.mirrored()) {
            Some((which, true))
        } else {
            None
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    First,
    Second,
    AcrossSphere,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkReason {
    TwoBridgeTorus {
        #[serde(serialize_with = "serialize_bigint")]
        p: BigInt,
        #[serde(serialize_with = "serialize_bigint")]
        q: BigInt,
    },
    MontesinosTorus {
        #[serde(flatten)]
        family: TorusFamily,
    },
    OertelException {
        which: OertelLink,
        mirror: bool,
    },
    ContainsQ2 {
        location: Location,
        m: u64,
    },
    Split,
    Unknot,
}

impl LinkReason {
    pub fn kind(&self) -> &'static str {
        match self {
            LinkReason::TwoBridgeTorus { .. } => "two_bridge_torus",
            LinkReason::MontesinosTorus { .. } => "montesinos_torus",
            LinkReason::OertelException { .. } => "oertel_exception",
            LinkReason::ContainsQ2 { .. } => "contains_q2",
            LinkReason::Split => "split",
            LinkReason::Unknot => "unknot",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub status: Status,
    pub reasons: Vec<LinkReason>,
    pub prime: bool,
    pub split: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_montesinos: Option<MontesinosForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_bridge: Option<TwoBridgeForm>,
}

impl LinkReport {
    fn new(reasons: Vec<LinkReason>, prime: bool, split: bool) -> LinkReport {
        LinkReport {
            status: if reasons.is_empty() {
                Status::Hyperbolic
            } else {
                Status::NonHyperbolic
            },
            reasons,
            prime,
            split,
            canonical_montesinos: None,
            two_bridge: None,
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.status == Status::Hyperbolic
    }
}

/// The closure `N(T[f])`.
pub fn classify_two_bridge(f: &Fraction) -> LinkReport {
    two_bridge_report(f.two_bridge())
}

fn two_bridge_report(tb: TwoBridgeForm) -> LinkReport {
    let mut reasons = Vec::new();
    if tb.is_unknot() {
        reasons.push(LinkReason::Unknot);
    } else if tb.is_split() {
        reasons.push(LinkReason::Split);
    } else if tb.torus {
        reasons.push(LinkReason::TwoBridgeTorus {
            p: tb.p.clone(),
            q: tb.q.clone(),
        });
    }
    let trivial = tb.is_unknot() || tb.is_split();
    let mut report = LinkReport::new(reasons, !trivial, tb.is_split());
    report.two_bridge = Some(tb);
    report
}

pub fn classify_montesinos(rs: &[Fraction]) -> Result<LinkReport> {
    let form = canon_montesinos(rs)?;
    let mut report = match is_torus_montesinos(&form) {
        Some(TorusFamily::TwoBridge { .. }) | None if form.n <= 2 => {
            two_bridge_report(montesinos_two_bridge(&form).expect("at most two parts"))
        }
        Some(family) => LinkReport::new(vec![LinkReason::MontesinosTorus { family }], true, false),
        None => {
            let reasons = oertel_exception(&form)
                .map(|(which, mirror)| LinkReason::OertelException { which, mirror })
                .into_iter()
                .collect();
            LinkReport::new(reasons, true, false)
        }
    };
    if form.n <= 2 && report.two_bridge.is_none() {
        report.two_bridge = montesinos_two_bridge(&form);
    }
    report.canonical_montesinos = Some(form);
    Ok(report)
}

pub fn classify_large_link(t1: &TangleExpr, t2: &TangleExpr, g: GluingMap) -> Result<LinkReport> {
    let n1 = normalize(t1)?.expr;
    let t2 = if g.mirror_second {
        t2.mirrored()
    } else {
        t2.clone()
    };
    let n2 = normalize(&t2)?.expr;
    for (orig, nf) in [(t1, &n1), (&t2, &n2)] {
        if nf.is_rational_leaf() {
            return Err(Error::NotLargeLink(orig.to_string()));
        }
    }
    let mut reasons = Vec::new();
    for (nf, location) in [(&n1, Location::First), (&n2, Location::Second)] {
        let m = max_q_unchecked(nf);
        if m >= 2 {
            reasons.push(LinkReason::ContainsQ2 { location, m });
        }
    }
    for (a1, a2) in g.matched_axes() {
        let m = qsplit_unchecked(&n1, a1)
            .m
            .saturating_add(qsplit_unchecked(&n2, a2).m);
        if m >= 2 {
            reasons.push(LinkReason::ContainsQ2 {
                location: Location::AcrossSphere,
                m,
            });
        }
    }
    Ok(LinkReport::new(reasons, true, false))
}

/// Entries of a sum of rational leaves, if `e` is one.
fn sum_of_rationals(e: &TangleExpr) -> Option<Vec<Fraction>> {
    fn go(e: &TangleExpr, out: &mut Vec<Fraction>) -> bool {
        match e {
            TangleExpr::Sum { left, right } => go(left, out) && go(right, out),
            TangleExpr::Rational { fraction } => {
                out.push(fraction.clone());
                true
            }
            _ => false,
        }
    }
    let mut out = Vec::new();
    go(&e.without_rot(), &mut out).then_some(out)
}

pub fn classify_link(l: &LinkExpr) -> Result<LinkReport> {
    match l {
        LinkExpr::Numerator { tangle } => {
            let nf = normalize(tangle)?.expr;
            if let Some(f) = nf.as_rational() {
                return Ok(classify_two_bridge(f));
            }
            match sum_of_rationals(tangle) {
                Some(rs) => classify_montesinos(&rs),
                None => Err(Error::UnsupportedClosure(tangle.to_string())),
            }
        }
        LinkExpr::Montesinos { fractions } => classify_montesinos(fractions),
        LinkExpr::Glue {
            first,
            second,
            gluing,
        } => classify_large_link(first, second, *gluing),
    }
}
