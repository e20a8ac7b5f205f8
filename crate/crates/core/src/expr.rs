//! Tangle and link expression trees.
//!
//! `Sum` glues two tangles along an east/west disk, `Product` stacks the
//! first tangle on top of the second. `Q { n, axis: Vertical }` is the tangle
//! with two vertical strings and `n` horizontal circles; the horizontal
//! variant is its quarter-turn rotation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fraction::Fraction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Vertical,
    Horizontal,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Vertical => Axis::Horizontal,
            Axis::Horizontal => Axis::Vertical,
        }
    }

    pub const BOTH: [Axis; 2] = [Axis::Vertical, Axis::Horizontal];
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Vertical => "vertical",
            Axis::Horizontal => "horizontal",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TangleExpr {
    Rational {
        fraction: Fraction,
    },
    /// `n ≥ 1`; `n = 0` is rewritten to `T[∞]` during normalization.
    Q {
        n: u64,
        axis: Axis,
    },
    Sum {
        left: Box<TangleExpr>,
        right: Box<TangleExpr>,
    },
    Product {
        top: Box<TangleExpr>,
        bottom: Box<TangleExpr>,
    },
    /// Quarter-turn rotation of `inner`. Never survives normalization.
    Rot {
        inner: Box<TangleExpr>,
    },
}

impl TangleExpr {
    pub fn rational(fraction: Fraction) -> Self {
        TangleExpr::Rational { fraction }
    }

    pub fn infinity() -> Self {
        Self::rational(Fraction::infinity())
    }

    /// `Q_n`; `Q_0` is the trivial tangle `T[∞]`.
    pub fn q(n: u64, axis: Axis) -> Self {
        if n == 0 {
            return Self::infinity();
        }
        TangleExpr::Q { n, axis }
    }

    pub fn sum(left: TangleExpr, right: TangleExpr) -> Self {
        TangleExpr::Sum {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn product(top: TangleExpr, bottom: TangleExpr) -> Self {
        TangleExpr::Product {
            top: Box::new(top),
            bottom: Box::new(bottom),
        }
    }

    pub fn rot(inner: TangleExpr) -> Self {
        TangleExpr::Rot {
            inner: Box::new(inner),
        }
    }

    /// Left-nested sum `T(r1, ..., rn)`.
    pub fn montesinos(fractions: impl IntoIterator<Item = Fraction>) -> Option<Self> {
        fractions.into_iter().map(Self::rational).reduce(Self::sum)
    }

    pub fn as_rational(&self) -> Option<&Fraction> {
        match self {
            TangleExpr::Rational { fraction } => Some(fraction),
            _ => None,
        }
    }

    pub fn is_rational_leaf(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Structural quarter-turn rotation. Swaps `Sum` and `Product`, rotates
    /// leaf fractions by `f ↦ −1/f`, toggles Q axes and eliminates `Rot`.
    pub fn rotated(&self) -> TangleExpr {
        match self {
            TangleExpr::Rational { fraction } => Self::rational(fraction.rotate()),
            TangleExpr::Q { n, axis } => Self::q(*n, axis.other()),
            TangleExpr::Sum { left, right } => Self::product(left.rotated(), right.rotated()),
            TangleExpr::Product { top, bottom } => Self::sum(top.rotated(), bottom.rotated()),
            TangleExpr::Rot { inner } => inner.without_rot(),
        }
    }

    /// Negates every rational leaf. Q leaves are fixed.
    pub fn mirrored(&self) -> TangleExpr {
        match self {
            TangleExpr::Rational { fraction } => Self::rational(fraction.mirror()),
            TangleExpr::Q { .. } => self.clone(),
            TangleExpr::Sum { left, right } => Self::sum(left.mirrored(), right.mirrored()),
            TangleExpr::Product { top, bottom } => Self::product(top.mirrored(), bottom.mirrored()),
            TangleExpr::Rot { inner } => Self::rot(inner.mirrored()),
        }
    }

    /// The same tangle with every `Rot` wrapper applied.
    pub fn without_rot(&self) -> TangleExpr {
        match self {
            TangleExpr::Rational { .. } | TangleExpr::Q { .. } => self.clone(),
            TangleExpr::Sum { left, right } => Self::sum(left.without_rot(), right.without_rot()),
            TangleExpr::Product { top, bottom } => {
                Self::product(top.without_rot(), bottom.without_rot())
            }
            TangleExpr::Rot { inner } => inner.rotated(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TangleExpr::Rational { .. } | TangleExpr::Q { .. } => 1,
            TangleExpr::Sum { left: a, right: b } | TangleExpr::Product { top: a, bottom: b } => {
                a.leaf_count() + b.leaf_count()
            }
            TangleExpr::Rot { inner } => inner.leaf_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TangleExpr::Rational { .. } | TangleExpr::Q { .. } => 1,
            TangleExpr::Sum { left: a, right: b } | TangleExpr::Product { top: a, bottom: b } => {
                1 + a.depth().max(b.depth())
            }
            TangleExpr::Rot { inner } => 1 + inner.depth(),
        }
    }

    /// Visits every node with its path, parents before children.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&Path, &'a TangleExpr)) {
        fn go<'a>(e: &'a TangleExpr, path: &mut Path, f: &mut impl FnMut(&Path, &'a TangleExpr)) {
            f(path, e);
            for (step, child) in e.children() {
                path.0.push(step);
                go(child, path, f);
                path.0.pop();
            }
        }
        go(self, &mut Path::root(), f)
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self, 1)];
        while let Some((e, d)) = stack.pop() {
            best = best.max(d);
            stack.extend(e.children().into_iter().map(|(_, c)| (c, d + 1)));
        }
        best
    }

    pub fn children(&self) -> Vec<(Step, &TangleExpr)> {
        match self {
            TangleExpr::Rational { .. } | TangleExpr::Q { .. } => vec![],
            TangleExpr::Sum { left, right } => vec![(Step::Left, left), (Step::Right, right)],
            TangleExpr::Product { top, bottom } => vec![(Step::Top, top), (Step::Bottom, bottom)],
            TangleExpr::Rot { inner } => vec![(Step::Inner, inner)],
        }
    }

    pub fn at(&self, path: &Path) -> Option<&TangleExpr> {
        path.0.iter().try_fold(self, |e, step| {
            e.children()
                .into_iter()
                .find(|(s, _)| s == step)
                .map(|(_, c)| c)
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            TangleExpr::Product { .. } => 0,
            TangleExpr::Sum { .. } => 1,
            _ => 2,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            TangleExpr::Rational { fraction } => write!(f, "T[{fraction}]"),
            TangleExpr::Q {
                n,
                axis: Axis::Vertical,
            } => write!(f, "Q{n}"),
            TangleExpr::Q {
                n,
                axis: Axis::Horizontal,
            } => write!(f, "Q{n}h"),
            TangleExpr::Sum { left, right } => {
                left.write_at(f, 1)?;
                f.write_str(" + ")?;
                right.write_at(f, 2)
            }
            // Sum factors are parenthesized even though "+" binds tighter.
            TangleExpr::Product { top, bottom } => {
                match **top {
                    TangleExpr::Sum { .. } => top.write_at(f, 2)?,
                    _ => top.write_at(f, 0)?,
                }
                f.write_str(" * ")?;
                bottom.write_at(f, 2)
            }
            TangleExpr::Rot { inner } => {
                f.write_str("rot(")?;
                inner.write_at(f, 0)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Debug for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisMatch {
    /// Vertical circles of one side meet vertical circles of the other.
    #[default]
    Identity,
    /// Vertical circles meet horizontal circles.
    Quarter,
}

/// Identification of the two boundary spheres of a large link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GluingMap {
    pub axis_match: AxisMatch,
    pub mirror_second: bool,
}

impl GluingMap {
    /// Axis pairs `(first, second)` whose circles are identified.
    pub fn matched_axes(&self) -> [(Axis, Axis); 2] {
        match self.axis_match {
            AxisMatch::Identity => [
                (Axis::Vertical, Axis::Vertical),
                (Axis::Horizontal, Axis::Horizontal),
            ],
            AxisMatch::Quarter => [
                (Axis::Vertical, Axis::Horizontal),
                (Axis::Horizontal, Axis::Vertical),
            ],
        }
    }
}

impl fmt::Display for GluingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.axis_match {
            AxisMatch::Identity => "id",
            AxisMatch::Quarter => "quarter",
        })?;
        if self.mirror_second {
            f.write_str(" mirror")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkExpr {
    /// Numerator closure: north endpoints joined, south endpoints joined.
    Numerator { tangle: TangleExpr },
    /// `L(r1, ..., rn)`.
    Montesinos { fractions: Vec<Fraction> },
    /// Two tangles glued along their boundary spheres.
    Glue {
        first: TangleExpr,
        second: TangleExpr,
        #[serde(default)]
        gluing: GluingMap,
    },
}

impl LinkExpr {
    pub fn mirrored(&self) -> LinkExpr {
        match self {
            LinkExpr::Numerator { tangle } => LinkExpr::Numerator {
                tangle: tangle.mirrored(),
            },
            LinkExpr::Montesinos { fractions } => LinkExpr::Montesinos {
                fractions: fractions.iter().map(Fraction::mirror).collect(),
            },
            LinkExpr::Glue {
                first,
                second,
                gluing,
            } => LinkExpr::Glue {
                first: first.mirrored(),
                second: second.mirrored(),
                gluing: *gluing,
            },
        }
    }
}

impl fmt::Display for LinkExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkExpr::Numerator { tangle } => write!(f, "N({tangle})"),
            LinkExpr::Montesinos { fractions } => {
                f.write_str("M(")?;
                for (i, r) in fractions.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{r}")?;
                }
                f.write_str(")")
            }
            LinkExpr::Glue {
                first,
                second,
                gluing,
            } => {
                write!(f, "glue({first}; {second}")?;
                if *gluing != GluingMap::default() {
                    write!(f, "; {gluing}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for LinkExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Either kind of parsed input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expr {
    Link(LinkExpr),
    Tangle(TangleExpr),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Tangle(t) => t.fmt(f),
            Expr::Link(l) => l.fmt(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Left,
    Right,
    Top,
    Bottom,
    Inner,
}

/// Position of a node, printed as `root`, `root.left.top`, ...
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<Step>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, step: Step) -> Path {
        let mut v = self.0.clone();
        v.push(step);
        Path(v)
    }

    pub fn parent(&self) -> Option<Path> {
        let (_, init) = self.0.split_last()?;
        Some(Path(init.to_vec()))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for s in &self.0 {
            f.write_str(match s {
                Step::Left => ".left",
                Step::Right => ".right",
                Step::Top => ".top",
                Step::Bottom => ".bottom",
                Step::Inner => ".inner",
            })?;
        }
        Ok(())
    }
}

impl Serialize for Path {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
