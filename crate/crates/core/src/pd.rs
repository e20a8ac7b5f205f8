//! Planar diagram codes for closed arborescent links.
//!
//! Rational tangles are drawn from their twist sequences, sums and products
//! wire their boundary points together and closures join the remaining ends.
//! Crossing slots are numbered counterclockwise from the north-east: `0 = NE`,
//! `1 = NW`, `2 = SW`, `3 = SE`; a strand runs from slot `k` to slot `k + 2`.
//!
//! Each crossing is written `[a, b, c, d]`: the arc entering on the
//! understrand first, then the others counterclockwise. Arcs are numbered
//! from 1 along each component in turn. A crossing is positive when the
//! overstrand crosses the understrand from right to left; positive twist
//! entries produce positive crossings in `N(T[n])` for odd `n`.

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Axis, AxisMatch, Expr, LinkExpr, TangleExpr};
use crate::fraction::Fraction;

/// Largest diagram `export_pd` will build.
pub const MAX_CROSSINGS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PdCode {
    pub crossings: Vec<[usize; 4]>,
    /// `+1` or `-1` per crossing.
    pub signs: Vec<i8>,
    pub components: usize,
    /// Components without crossings; they have no arcs.
    #[serde(skip_serializing_if = "is_zero")]
    pub free_loops: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

pub fn export_pd(l: &LinkExpr) -> Result<PdCode> {
    let count = crossing_count(l);
    if count > MAX_CROSSINGS {
        return Err(Error::DiagramTooLarge(l.to_string(), MAX_CROSSINGS));
    }
    let mut d = Diagram::default();
    let ends = match l {
        LinkExpr::Numerator { tangle } => d.tangle(&tangle.without_rot()),
        LinkExpr::Montesinos { fractions } => {
            let mut it = fractions.iter();
            let first = d.leaf(it.next().unwrap_or(&Fraction::zero()));
            it.fold(first, |acc, f| {
                let y = d.leaf(f);
                d.sum(acc, y)
            })
        }
        LinkExpr::Glue {
            first,
            second,
            gluing,
        } => {
            let x = d.tangle(&first.without_rot());
            let y = d.tangle(&glued_second(
                second,
                gluing.axis_match,
                gluing.mirror_second,
            ));
            d.sum(x, y)
        }
    };
    d.link(ends.nw, ends.ne);
    d.link(ends.sw, ends.se);
    Ok(d.code())
}

/// Rejects open tangles; closes links.
pub fn export_pd_expr(e: &Expr) -> Result<PdCode> {
    match e {
        Expr::Link(l) => export_pd(l),
        Expr::Tangle(t) => Err(Error::OpenStrands(t.to_string())),
    }
}

fn glued_second(t: &TangleExpr, axis_match: AxisMatch, mirror: bool) -> TangleExpr {
    let t = match axis_match {
        AxisMatch::Identity => t.without_rot(),
        AxisMatch::Quarter => t.rotated(),
    };
    if mirror {
        t.mirrored()
    } else {
        t
    }
}

fn leaf_crossings(f: &Fraction) -> usize {
    match f.twist_sequence() {
        Ok(seq) => seq
            .iter()
            .map(|a| a.abs().to_usize().unwrap_or(usize::MAX))
            .fold(0, usize::saturating_add),
        Err(_) => 0,
    }
}

fn tangle_crossings(e: &TangleExpr) -> usize {
    match e {
        TangleExpr::Rational { fraction } => leaf_crossings(fraction),
        TangleExpr::Q { n, .. } => usize::try_from(*n).unwrap_or(usize::MAX).saturating_mul(4),
        TangleExpr::Sum { left: a, right: b } | TangleExpr::Product { top: a, bottom: b } => {
            tangle_crossings(a).saturating_add(tangle_crossings(b))
        }
        TangleExpr::Rot { inner } => tangle_crossings(inner),
    }
}

/// Number of crossings `export_pd` draws for `l`.
pub fn crossing_count(l: &LinkExpr) -> usize {
    match l {
        LinkExpr::Numerator { tangle } => tangle_crossings(tangle),
        LinkExpr::Montesinos { fractions } => fractions
            .iter()
            .map(leaf_crossings)
            .fold(0, usize::saturating_add),
        LinkExpr::Glue { first, second, .. } => {
            tangle_crossings(first).saturating_add(tangle_crossings(second))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Port {
    Slot(usize, usize),
    Wire(usize, usize),
}

#[derive(Clone, Copy)]
struct Ends {
    nw: Port,
    ne: Port,
    sw: Port,
    se: Port,
}

#[derive(Default)]
struct Diagram {
    /// Whether the strand through slots 0 and 2 is over.
    slash_over: Vec<bool>,
    slots: Vec<[Option<Port>; 4]>,
    wires: Vec<[Option<Port>; 2]>,
}

impl Diagram {
    fn partner(&self, p: Port) -> Option<Port> {
        match p {
            Port::Slot(c, k) => self.slots[c][k],
            Port::Wire(w, i) => self.wires[w][i],
        }
    }

    fn set(&mut self, p: Port, to: Port) {
        match p {
            Port::Slot(c, k) => self.slots[c][k] = Some(to),
            Port::Wire(w, i) => self.wires[w][i] = Some(to),
        }
    }

    fn link(&mut self, a: Port, b: Port) {
        self.set(a, b);
        self.set(b, a);
    }

    /// A plain arc; returns its two free ends.
    fn arc(&mut self) -> (Port, Port) {
        let w = self.wires.len();
        self.wires.push([None; 2]);
        self.wires.push([None; 2]);
        self.link(Port::Wire(w, 1), Port::Wire(w + 1, 0));
        (Port::Wire(w, 0), Port::Wire(w + 1, 1))
    }

    fn crossing(&mut self, slash_over: bool) -> usize {
        self.slash_over.push(slash_over);
        self.slots.push([None; 4]);
        self.slots.len() - 1
    }

    fn zero(&mut self) -> Ends {
        let (nw, ne) = self.arc();
        let (sw, se) = self.arc();
        Ends { nw, ne, sw, se }
    }

    fn infinity(&mut self) -> Ends {
        let (nw, sw) = self.arc();
        let (ne, se) = self.arc();
        Ends { nw, ne, sw, se }
    }

    fn horizontal_twist(&mut self, mut x: Ends, n: i64) -> Ends {
        for _ in 0..n.unsigned_abs() {
            let c = self.crossing(n < 0);
            self.link(x.ne, Port::Slot(c, 1));
            self.link(x.se, Port::Slot(c, 2));
            x.ne = Port::Slot(c, 0);
            x.se = Port::Slot(c, 3);
        }
        x
    }

    fn vertical_twist(&mut self, mut x: Ends, n: i64) -> Ends {
        for _ in 0..n.unsigned_abs() {
            let c = self.crossing(n < 0);
            self.link(x.sw, Port::Slot(c, 1));
            self.link(x.se, Port::Slot(c, 0));
            x.sw = Port::Slot(c, 2);
            x.se = Port::Slot(c, 3);
        }
        x
    }

    fn leaf(&mut self, f: &Fraction) -> Ends {
        let Ok(seq) = f.twist_sequence() else {
            return self.infinity();
        };
        let seq: Vec<i64> = seq
            .iter()
            .map(|a| a.to_i64().expect("size checked"))
            .collect();
        let k = seq.len() - 1;
        let mut x = if k.is_multiple_of(2) {
            self.zero()
        } else {
            self.infinity()
        };
        for (i, &a) in seq.iter().enumerate().rev() {
            x = if i % 2 == 0 {
                self.horizontal_twist(x, a)
            } else {
                self.vertical_twist(x, a)
            };
        }
        x
    }

    fn sum(&mut self, x: Ends, y: Ends) -> Ends {
        self.link(x.ne, y.nw);
        self.link(x.se, y.sw);
        Ends {
            nw: x.nw,
            ne: y.ne,
            sw: x.sw,
            se: y.se,
        }
    }

    fn product(&mut self, x: Ends, y: Ends) -> Ends {
        self.link(x.sw, y.nw);
        self.link(x.se, y.ne);
        Ends {
            nw: x.nw,
            ne: x.ne,
            sw: y.sw,
            se: y.se,
        }
    }

    fn q(&mut self, n: u64, axis: Axis) -> Ends {
        let half = Fraction::new(1, 2).expect("1/2");
        let one = |d: &mut Diagram| match axis {
            Axis::Vertical => {
                let a = d.leaf(&half);
                let b = d.leaf(&half.mirror());
                d.sum(a, b)
            }
            Axis::Horizontal => {
                let a = d.leaf(&half.rotate());
                let b = d.leaf(&half.mirror().rotate());
                d.product(a, b)
            }
        };
        let mut x = one(self);
        for _ in 1..n {
            let y = one(self);
            x = match axis {
                Axis::Vertical => self.product(x, y),
                Axis::Horizontal => self.sum(x, y),
            };
        }
        x
    }

    fn tangle(&mut self, e: &TangleExpr) -> Ends {
        match e {
            TangleExpr::Rational { fraction } => self.leaf(fraction),
            TangleExpr::Q { n: 0, .. } => self.infinity(),
            TangleExpr::Q { n, axis } => self.q(*n, *axis),
            TangleExpr::Sum { left, right } => {
                let x = self.tangle(left);
                let y = self.tangle(right);
                self.sum(x, y)
            }
            TangleExpr::Product { top, bottom } => {
                let x = self.tangle(top);
                let y = self.tangle(bottom);
                self.product(x, y)
            }
            TangleExpr::Rot { inner } => self.tangle(&inner.rotated()),
        }
    }

    /// Follows wires from a slot to the slot at the other end of its arc.
    fn arc_end(&self, c: usize, k: usize, seen: &mut [bool]) -> (usize, usize) {
        let mut p = self.partner(Port::Slot(c, k)).expect("closed diagram");
        loop {
            match p {
                Port::Slot(c, k) => return (c, k),
                Port::Wire(w, i) => {
                    seen[w] = true;
                    p = self.partner(Port::Wire(w, 1 - i)).expect("closed diagram");
                }
            }
        }
    }

    fn code(&self) -> PdCode {
        let n = self.slots.len();
        let mut wire_seen = vec![false; self.wires.len()];
        let other: Vec<[(usize, usize); 4]> = (0..n)
            .map(|c| [0, 1, 2, 3].map(|k| self.arc_end(c, k, &mut wire_seen)))
            .collect();

        let mut label = vec![[0usize; 4]; n];
        let mut incoming = vec![[false; 4]; n];
        let mut next = 1;
        let mut components = 0;
        for c0 in 0..n {
            for k0 in 0..4 {
                if label[c0][k0] != 0 {
                    continue;
                }
                components += 1;
                let (mut c, mut k) = (c0, k0);
                while label[c][k] == 0 {
                    let (c2, k2) = other[c][k];
                    label[c][k] = next;
                    label[c2][k2] = next;
                    incoming[c2][k2] = true;
                    next += 1;
                    c = c2;
                    k = (k2 + 2) % 4;
                }
            }
        }

        let mut free_loops = 0;
        for w in 0..self.wires.len() {
            if wire_seen[w] {
                continue;
            }
            free_loops += 1;
            let mut p = Port::Wire(w, 0);
            while let Port::Wire(v, i) = p {
                if wire_seen[v] {
                    break;
                }
                wire_seen[v] = true;
                p = self.partner(Port::Wire(v, 1 - i)).expect("closed diagram");
            }
        }

        let mut crossings = Vec::with_capacity(n);
        let mut signs = Vec::with_capacity(n);
        for c in 0..n {
            let (u, o) = if self.slash_over[c] { (1, 0) } else { (0, 1) };
            let u_in = if incoming[c][u] { u } else { u + 2 };
            let o_in = if incoming[c][o] { o } else { o + 2 };
            crossings.push([0, 1, 2, 3].map(|i| label[c][(u_in + i) % 4]));
            signs.push(if o_in == (u_in + 3) % 4 { 1 } else { -1 });
        }
        PdCode {
            crossings,
            signs,
            components: components + free_loops,
            free_loops,
        }
    }
}
