//! Nontriviality checks on sums and products.

use std::fmt;

use serde::Serialize;

use crate::expr::{Path, Step, TangleExpr};
use crate::rewrite::{combine, leaf_normal_form};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A sum operand is `T[∞]`.
    TrivialSum,
    /// A product operand is `T[0]`, which caps off the other factor.
    TrivialProduct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Operand position in the rotation-free form of the input.
    pub path: Path,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::TrivialSum => "sum operand reduces to T[inf]",
            ViolationKind::TrivialProduct => "product operand reduces to T[0]",
        };
        write!(f, "{what} at {}", self.path)
    }
}

/// Returns every operand that makes a sum or product trivial.
///
/// `T[0]` sum operands and `T[∞]` product operands are identities and are
/// accepted; normalization removes them.
pub fn validate(e: &TangleExpr) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    check(&e.without_rot(), &mut Path::root(), &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

pub fn is_valid(e: &TangleExpr) -> bool {
    validate(e).is_ok()
}

/// Validates bottom-up and returns the normal form of `e`.
fn check(e: &TangleExpr, path: &mut Path, out: &mut Vec<Violation>) -> TangleExpr {
    let (a, b, steps, is_sum) = match e {
        TangleExpr::Sum { left, right } => (left, right, [Step::Left, Step::Right], true),
        TangleExpr::Product { top, bottom } => (top, bottom, [Step::Top, Step::Bottom], false),
        TangleExpr::Rot { inner } => return check(&inner.rotated(), path, out),
        leaf => return leaf_normal_form(leaf),
    };
    let mut operands = Vec::with_capacity(2);
    for (child, step) in [a, b].into_iter().zip(steps) {
        path.0.push(step);
        let nf = check(child, path, out);
        let bad = match nf.as_rational() {
            Some(f) if is_sum => f.is_infinite(),
            Some(f) => f.is_zero(),
            None => false,
        };
        if bad {
            out.push(Violation {
                kind: if is_sum {
                    ViolationKind::TrivialSum
                } else {
                    ViolationKind::TrivialProduct
                },
                path: path.clone(),
            });
        }
        path.0.pop();
        operands.push(nf);
    }
    let b = operands.pop().unwrap();
    let a = operands.pop().unwrap();
    combine(is_sum, a, b)
}
