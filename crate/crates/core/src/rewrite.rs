//! Normalization by the tangle identities, Q-prefix extraction and Q-run
//! detection.
//!
//! Rules, in priority order, applied innermost-first until nothing changes:
//!
//! * `identity`: `T[0]` in a sum and `T[∞]` in a product are dropped.
//! * `rational_collapse`: an integral leaf next to a rational leaf in a sum
//!   is added to it; dually `T[p/q] * T[1/n] = T[p/(q+np)]` in a product.
//! * `half_sum`: `T[p/2] + T[p'/2]` (odd `p, p'`) is `Q1`; dually
//!   `T[2/k] * T[2/k']` (odd `k, k'`) is `Q1h`.
//! * `q_merge`: vertical Q leaves in a product chain switch to the front and
//!   merge, `Qm * Qn = Q(m+n)`; dually for horizontal Q leaves in sums.
//! * `q0`: `Q0` is `T[∞]`.
//!
//! Sums and products are associative, so chains are flattened before the
//! rules run. The product rules are the sum rules conjugated by a quarter
//! turn, which keeps normalization rotation-equivariant.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::RngCore;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Axis, Path, Step, TangleExpr};
use crate::fraction::Fraction;
use crate::validate::validate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Identity,
    RationalCollapse,
    HalfSum,
    QMerge,
    Q0,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Identity => "identity",
            Rule::RationalCollapse => "rational_collapse",
            Rule::HalfSum => "half_sum",
            Rule::QMerge => "q_merge",
            Rule::Q0 => "q0",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: Rule,
    /// Chain position in the rotation-free form of the input.
    pub position: Path,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub expr: TangleExpr,
    pub trace: Vec<TraceStep>,
}

/// Normalizes a valid expression.
pub fn normalize(e: &TangleExpr) -> Result<NormalForm> {
    validate(e).map_err(Error::ValidationFailed)?;
    Ok(normalize_unchecked(e))
}

/// Normalizes without validating first. Invalid input still terminates.
pub fn normalize_unchecked(e: &TangleExpr) -> NormalForm {
    let mut ctx = Ctx {
        trace: Vec::new(),
        rng: None,
    };
    let expr = norm(&e.without_rot(), &Path::root(), &mut ctx);
    NormalForm {
        expr,
        trace: ctx.trace,
    }
}

/// Normalizes with randomized operand order and redex contraction order.
/// The result must not depend on `rng`.
pub fn normalize_shuffled(e: &TangleExpr, rng: &mut dyn RngCore) -> NormalForm {
    let mut ctx = Ctx {
        trace: Vec::new(),
        rng: Some(rng),
    };
    let expr = norm(&e.without_rot(), &Path::root(), &mut ctx);
    NormalForm {
        expr,
        trace: ctx.trace,
    }
}

pub fn is_normal(e: &TangleExpr) -> bool {
    normalize_unchecked(e).expr == *e
}

struct Ctx<'r> {
    trace: Vec<TraceStep>,
    rng: Option<&'r mut dyn RngCore>,
}

impl Ctx<'_> {
    fn record(&mut self, rule: Rule, position: &Path) {
        self.trace.push(TraceStep {
            rule,
            position: position.clone(),
        });
    }

    fn shuffle<T>(&mut self, v: &mut [T]) {
        if let Some(rng) = self.rng.as_deref_mut() {
            v.shuffle(rng);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Sum,
    Product,
}

impl Op {
    fn of(e: &TangleExpr) -> Option<(Op, &TangleExpr, &TangleExpr)> {
        match e {
            TangleExpr::Sum { left, right } => Some((Op::Sum, left, right)),
            TangleExpr::Product { top, bottom } => Some((Op::Product, top, bottom)),
            _ => None,
        }
    }

    fn steps(self) -> [Step; 2] {
        match self {
            Op::Sum => [Step::Left, Step::Right],
            Op::Product => [Step::Top, Step::Bottom],
        }
    }

    fn build(self, a: TangleExpr, b: TangleExpr) -> TangleExpr {
        match self {
            Op::Sum => TangleExpr::sum(a, b),
            Op::Product => TangleExpr::product(a, b),
        }
    }

    fn is_identity(self, f: &Fraction) -> bool {
        match self {
            Op::Sum => f.is_zero(),
            Op::Product => f.is_infinite(),
        }
    }

    fn identity(self) -> Fraction {
        match self {
            Op::Sum => Fraction::zero(),
            Op::Product => Fraction::infinity(),
        }
    }

    /// The twist index `n` of `T[n]` (sum) or `T[1/n]` (product).
    fn unit_index(self, f: &Fraction) -> Option<BigInt> {
        match self {
            Op::Sum if f.is_integral() => Some(f.numer().clone()),
            Op::Sum => None,
            Op::Product => f.unit_index(),
        }
    }

    fn unit(self, n: BigInt) -> Fraction {
        match self {
            Op::Sum => Fraction::integer(n),
            Op::Product => Fraction::reciprocal_integer(n),
        }
    }

    fn absorb(self, f: &Fraction, n: &BigInt) -> Fraction {
        match self {
            Op::Sum => f.add_integer(n),
            Op::Product => f.add_vertical_twists(n),
        }
    }

    fn is_half(self, f: &Fraction) -> bool {
        match self {
            Op::Sum => f.is_half_integral(),
            Op::Product => !f.is_infinite() && *f.numer().magnitude() == 2u32.into(),
        }
    }

    /// Axis of the Q1 produced by two halves.
    fn half_axis(self) -> Axis {
        match self {
            Op::Sum => Axis::Vertical,
            Op::Product => Axis::Horizontal,
        }
    }

    /// Axis of the Q leaves that switch freely through this chain.
    fn switching_axis(self) -> Axis {
        match self {
            Op::Sum => Axis::Horizontal,
            Op::Product => Axis::Vertical,
        }
    }
}

/// Normal form of a leaf.
pub(crate) fn leaf_normal_form(e: &TangleExpr) -> TangleExpr {
    match e {
        TangleExpr::Q { n: 0, .. } => TangleExpr::infinity(),
        _ => e.clone(),
    }
}

/// Normal form of `a + b` (`is_sum`) or `a * b`, given normal operands.
pub(crate) fn combine(is_sum: bool, a: TangleExpr, b: TangleExpr) -> TangleExpr {
    let op = if is_sum { Op::Sum } else { Op::Product };
    let mut elems = Vec::new();
    push_chain(op, a, &mut elems);
    push_chain(op, b, &mut elems);
    let mut ctx = Ctx {
        trace: Vec::new(),
        rng: None,
    };
    reduce_chain(op, elems, &Path::root(), &mut ctx)
}

fn norm(e: &TangleExpr, path: &Path, ctx: &mut Ctx) -> TangleExpr {
    let Some((op, _, _)) = Op::of(e) else {
        if let TangleExpr::Q { n: 0, .. } = e {
            ctx.record(Rule::Q0, path);
        }
        if let TangleExpr::Rot { inner } = e {
            return norm(&inner.rotated(), path, ctx);
        }
        return leaf_normal_form(e);
    };

    let mut operands = Vec::new();
    collect_operands(op, e, path, &mut operands);
    let mut order: Vec<usize> = (0..operands.len()).collect();
    ctx.shuffle(&mut order);
    let mut normalized: Vec<Option<TangleExpr>> = vec![None; operands.len()];
    for i in order {
        let (p, sub) = &operands[i];
        normalized[i] = Some(norm(sub, p, ctx));
    }
    let mut elems = Vec::with_capacity(normalized.len());
    for nf in normalized.into_iter().flatten() {
        push_chain(op, nf, &mut elems);
    }
    reduce_chain(op, elems, path, ctx)
}

/// Flattens the raw `op`-tree rooted at `e` into its non-`op` operands.
fn collect_operands<'a>(
    op: Op,
    e: &'a TangleExpr,
    path: &Path,
    out: &mut Vec<(Path, &'a TangleExpr)>,
) {
    match Op::of(e) {
        Some((o, a, b)) if o == op => {
            let [sa, sb] = op.steps();
            collect_operands(op, a, &path.child(sa), out);
            collect_operands(op, b, &path.child(sb), out);
        }
        _ => out.push((path.clone(), e)),
    }
}

/// Appends the chain elements of a normal expression.
fn push_chain(op: Op, e: TangleExpr, out: &mut Vec<TangleExpr>) {
    match e {
        TangleExpr::Sum { left, right } if op == Op::Sum => {
            push_chain(op, *left, out);
            push_chain(op, *right, out);
        }
        TangleExpr::Product { top, bottom } if op == Op::Product => {
            push_chain(op, *top, out);
            push_chain(op, *bottom, out);
        }
        other => out.push(other),
    }
}

fn chain_elements(op: Op, e: &TangleExpr) -> Vec<&TangleExpr> {
    fn go<'a>(op: Op, e: &'a TangleExpr, out: &mut Vec<&'a TangleExpr>) {
        match Op::of(e) {
            Some((o, a, b)) if o == op => {
                go(op, a, out);
                go(op, b, out);
            }
            _ => out.push(e),
        }
    }
    let mut out = Vec::new();
    go(op, e, &mut out);
    out
}

fn rational(e: &TangleExpr) -> Option<&Fraction> {
    e.as_rational()
}

fn reduce_chain(op: Op, mut v: Vec<TangleExpr>, path: &Path, ctx: &mut Ctx) -> TangleExpr {
    while let Some(rule) = step_chain(op, &mut v, ctx) {
        ctx.record(rule, path);
    }
    let mut it = v.into_iter();
    let first = it
        .next()
        .unwrap_or_else(|| TangleExpr::rational(op.identity()));
    it.fold(first, |acc, e| op.build(acc, e))
}

/// Applies the highest-priority rule that has a redex. Returns `None` at a
/// fixed point.
fn step_chain(op: Op, v: &mut Vec<TangleExpr>, ctx: &mut Ctx) -> Option<Rule> {
    // identity
    if v.len() > 1 {
        let before = v.len();
        v.retain(|e| !rational(e).is_some_and(|f| op.is_identity(f)));
        if v.is_empty() {
            v.push(TangleExpr::rational(op.identity()));
        }
        if v.len() != before {
            return Some(Rule::Identity);
        }
    }

    let unit = |e: &TangleExpr| rational(e).and_then(|f| op.unit_index(f));

    // rational_collapse, part 1: runs of adjacent units combine.
    let mut runs = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && unit(&v[j]).is_some() {
            j += 1;
        }
        if j - i >= 2 {
            runs.push((i, j));
        }
        i = j.max(i + 1);
    }
    if !runs.is_empty() {
        ctx.shuffle(&mut runs);
        let mut slots: Vec<Option<TangleExpr>> = v.drain(..).map(Some).collect();
        for (i, j) in runs {
            let total = (i..j)
                .map(|k| unit(slots[k].as_ref().unwrap()).unwrap())
                .fold(BigInt::zero(), |a, b| a + b);
            for slot in &mut slots[i + 1..j] {
                *slot = None;
            }
            slots[i] = Some(TangleExpr::rational(op.unit(total)));
        }
        v.extend(slots.into_iter().flatten());
        return Some(Rule::RationalCollapse);
    }

    // rational_collapse, part 2: a unit joins an adjacent non-unit rational
    // leaf, preferring the one on its left.
    let absorber = |e: &TangleExpr| rational(e).is_some() && unit(e).is_none();
    let mut moves = Vec::new();
    for (i, e) in v.iter().enumerate() {
        if unit(e).is_none() {
            continue;
        }
        if i > 0 && absorber(&v[i - 1]) {
            moves.push((i, i - 1));
        } else if i + 1 < v.len() && absorber(&v[i + 1]) {
            moves.push((i, i + 1));
        }
    }
    if !moves.is_empty() {
        ctx.shuffle(&mut moves);
        let mut removed = vec![false; v.len()];
        for (from, to) in moves {
            let n = unit(&v[from]).unwrap();
            let f = op.absorb(rational(&v[to]).unwrap(), &n);
            v[to] = TangleExpr::rational(f);
            removed[from] = true;
        }
        let mut k = 0;
        v.retain(|_| {
            k += 1;
            !removed[k - 1]
        });
        return Some(Rule::RationalCollapse);
    }

    // half_sum: leftmost-greedy pairs of adjacent halves.
    let half = |e: &TangleExpr| rational(e).is_some_and(|f| op.is_half(f));
    let mut pairs = Vec::new();
    let mut i = 0;
    while i + 1 < v.len() {
        if half(&v[i]) && half(&v[i + 1]) {
            pairs.push(i);
            i += 2;
        } else {
            i += 1;
        }
    }
    if !pairs.is_empty() {
        ctx.shuffle(&mut pairs);
        let mut slots: Vec<Option<TangleExpr>> = v.drain(..).map(Some).collect();
        for i in pairs {
            slots[i] = Some(TangleExpr::q(1, op.half_axis()));
            slots[i + 1] = None;
        }
        v.extend(slots.into_iter().flatten());
        return Some(Rule::HalfSum);
    }

    // q_merge: switching Q leaves move to the front and merge.
    let axis = op.switching_axis();
    let switching = |e: &TangleExpr| matches!(e, TangleExpr::Q { axis: a, .. } if *a == axis);
    let positions: Vec<usize> = (0..v.len()).filter(|&i| switching(&v[i])).collect();
    if positions.len() > 1 || positions.first().is_some_and(|&i| i != 0) {
        let mut total = 0u64;
        v.retain(|e| match e {
            TangleExpr::Q { n, axis: a } if *a == axis => {
                total = total.saturating_add(*n);
                false
            }
            _ => true,
        });
        v.insert(0, TangleExpr::q(total, axis));
        return Some(Rule::QMerge);
    }

    None
}

/// `T = Q_m * T'` along an axis, with `T'` free of a Q prefix on that axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QSplit {
    pub m: u64,
    pub remainder: TangleExpr,
    pub axis: Axis,
}

impl QSplit {
    /// `Q_m * T'` for the vertical axis, `Q_m h + T'` for the horizontal one.
    pub fn reassemble(&self) -> TangleExpr {
        if self.m == 0 {
            return self.remainder.clone();
        }
        let q = TangleExpr::q(self.m, self.axis);
        match self.axis {
            Axis::Vertical => TangleExpr::product(q, self.remainder.clone()),
            Axis::Horizontal => TangleExpr::sum(q, self.remainder.clone()),
        }
    }
}

/// Extracts the Q prefix of a normal expression along `axis`.
pub fn qsplit(e: &TangleExpr, axis: Axis) -> Result<QSplit> {
    if !is_normal(e) {
        return Err(Error::NotNormalized);
    }
    Ok(qsplit_unchecked(e, axis))
}

pub(crate) fn qsplit_unchecked(e: &TangleExpr, axis: Axis) -> QSplit {
    match axis {
        Axis::Vertical => qsplit_vertical(e),
        Axis::Horizontal => {
            let s = qsplit_vertical(&e.rotated());
            QSplit {
                m: s.m,
                remainder: s.remainder.rotated(),
                axis: Axis::Horizontal,
            }
        }
    }
}

fn qsplit_vertical(e: &TangleExpr) -> QSplit {
    let (m, remainder) = match e {
        TangleExpr::Q {
            n,
            axis: Axis::Vertical,
        } => (*n, TangleExpr::infinity()),
        TangleExpr::Product { .. } => {
            let mut m = 0u64;
            let mut rest = Vec::new();
            for member in chain_elements(Op::Product, e) {
                match member {
                    TangleExpr::Q {
                        n,
                        axis: Axis::Vertical,
                    } => m = m.saturating_add(*n),
                    other => rest.push(other.clone()),
                }
            }
            let remainder = rest
                .into_iter()
                .reduce(TangleExpr::product)
                .unwrap_or_else(TangleExpr::infinity);
            (m, remainder)
        }
        // A sum whose gluing curve is transverse to the Q circles carries a
        // Q prefix only as T[1/2] + T[1/2], which half_sum already rewrote.
        _ => (0, e.clone()),
    };
    QSplit {
        m,
        remainder,
        axis: Axis::Vertical,
    }
}

/// Size of the Q prefix of a normal node along `axis`, without rotating.
pub(crate) fn q_count(e: &TangleExpr, axis: Axis) -> u64 {
    let op = match axis {
        Axis::Vertical => Op::Product,
        Axis::Horizontal => Op::Sum,
    };
    chain_elements(op, e)
        .into_iter()
        .map(|m| match m {
            TangleExpr::Q { n, axis: a } if *a == axis => *n,
            _ => 0,
        })
        .fold(0, u64::saturating_add)
}

/// Largest Q count at any node, on either axis, of a normal expression.
pub fn max_q(e: &TangleExpr) -> Result<u64> {
    if !is_normal(e) {
        return Err(Error::NotNormalized);
    }
    Ok(max_q_unchecked(e))
}

pub(crate) fn max_q_unchecked(e: &TangleExpr) -> u64 {
    let mut best = 0;
    e.walk(&mut |_, node| {
        for axis in Axis::BOTH {
            best = best.max(q_count(node, axis));
        }
    });
    best
}

/// True iff `e` normalizes to a single rational leaf.
pub fn is_rational_expr(e: &TangleExpr) -> bool {
    normalize_unchecked(e).expr.is_rational_leaf()
}

/// Upper bound on the length: rational leaves of the normal form plus two
/// per Q circle.
pub fn length_estimate(e: &TangleExpr) -> u64 {
    let nf = normalize_unchecked(e).expr;
    let mut total = 0u64;
    nf.walk(&mut |_, node| match node {
        TangleExpr::Rational { .. } => total = total.saturating_add(1),
        TangleExpr::Q { n, .. } => total = total.saturating_add(n.saturating_mul(2)),
        _ => {}
    });
    total
}
