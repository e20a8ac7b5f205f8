//! Recursive-descent parser for tangle and link expressions.
//!
//! ```text
//! expr := prod
//! prod := sum ("*" sum)*
//! sum  := atom ("+" atom)*
//! atom := "T[" frac "]" | "Q" nat ["h" | "v"] | "T(" frac {"," frac} ")"
//!       | "rot(" expr ")" | "(" expr ")"
//! link := "N(" expr ")" | "M(" frac {"," frac} ")"
//!       | "glue(" expr ";" expr [";" gluing] ")"
//! gluing := ("id" | "quarter") ["mirror"]
//! frac := "inf" | int ["/" int]
//! ```
//!
//! `+` binds tighter than `*`; both associate to the left.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::expr::{Axis, AxisMatch, Expr, GluingMap, LinkExpr, TangleExpr};
use crate::fraction::Fraction;

const MAX_NESTING: usize = 256;
/// Tallest expression tree the parser accepts.
pub const MAX_HEIGHT: usize = 2048;

fn check_height(e: &TangleExpr) -> Result<()> {
    let h = e.height();
    if h > MAX_HEIGHT {
        return Err(Error::TooDeep(h, MAX_HEIGHT));
    }
    Ok(())
}

fn check_link_height(l: &LinkExpr) -> Result<()> {
    match l {
        LinkExpr::Numerator { tangle } => check_height(tangle),
        LinkExpr::Montesinos { .. } => Ok(()),
        LinkExpr::Glue { first, second, .. } => {
            check_height(first)?;
            check_height(second)
        }
    }
}

/// Parses either a link (`N(..)`, `M(..)`, `glue(..)`) or a tangle expression.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text);
    p.skip_ws();
    let out = if p.at_keyword("N(") || p.at_keyword("M(") || p.at_keyword("glue(") {
        Expr::Link(p.link()?)
    } else {
        Expr::Tangle(p.expr()?)
    };
    p.finish()?;
    match &out {
        Expr::Tangle(t) => check_height(t)?,
        Expr::Link(l) => check_link_height(l)?,
    }
    Ok(out)
}

pub fn parse_tangle(text: &str) -> Result<TangleExpr> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.finish()?;
    check_height(&e)?;
    Ok(e)
}

pub fn parse_link(text: &str) -> Result<LinkExpr> {
    let mut p = Parser::new(text);
    p.skip_ws();
    let l = p.link()?;
    p.finish()?;
    check_link_height(&l)?;
    Ok(l)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            depth: 0,
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn at_keyword(&self, kw: &str) -> bool {
        self.rest().starts_with(kw)
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        if self.depth >= MAX_NESTING {
            return self.err("expression nested too deeply");
        }
        self.depth += 1;
        let out = f(self);
        self.depth -= 1;
        out
    }

    fn expr(&mut self) -> Result<TangleExpr> {
        self.nested(|p| {
            let mut acc = p.sum()?;
            while p.eat("*") {
                acc = TangleExpr::product(acc, p.sum()?);
            }
            Ok(acc)
        })
    }

    fn sum(&mut self) -> Result<TangleExpr> {
        let mut acc = self.atom()?;
        while self.eat("+") {
            acc = TangleExpr::sum(acc, self.atom()?);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<TangleExpr> {
        self.skip_ws();
        if self.eat("T[") {
            let f = self.fraction()?;
            self.expect("]")?;
            Ok(TangleExpr::rational(f))
        } else if self.eat("T(") {
            let fs = self.fraction_list()?;
            Ok(TangleExpr::montesinos(fs).expect("fraction_list is nonempty"))
        } else if self.eat("rot(") {
            let inner = self.expr()?;
            self.expect(")")?;
            Ok(TangleExpr::rot(inner))
        } else if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            Ok(inner)
        } else if self.eat("Q") {
            self.q_literal()
        } else if self.rest().is_empty() {
            self.err("unexpected end of input")
        } else {
            self.err("expected a tangle: `T[..]`, `T(..)`, `Qn`, `rot(..)` or `(..)`")
        }
    }

    fn q_literal(&mut self) -> Result<TangleExpr> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected a natural number after `Q`");
        }
        let n: u64 = match self.rest()[..digits].parse() {
            Ok(n) if n <= u64::from(u32::MAX) => n,
            _ => return self.err("Q index out of range"),
        };
        self.pos += digits;
        let axis = if self.rest().starts_with('h') {
            self.pos += 1;
            Axis::Horizontal
        } else {
            if self.rest().starts_with('v') {
                self.pos += 1;
            }
            Axis::Vertical
        };
        if n == 0 {
            // Q0 is the trivial tangle T[inf]; its rotation is T[0].
            let t = TangleExpr::infinity();
            return Ok(match axis {
                Axis::Vertical => t,
                Axis::Horizontal => t.rotated(),
            });
        }
        Ok(TangleExpr::q(n, axis))
    }

    fn fraction(&mut self) -> Result<Fraction> {
        self.skip_ws();
        if self.rest().starts_with("inf") {
            self.pos += 3;
            return Ok(Fraction::infinity());
        }
        let p = self.integer()?;
        if self.eat("/") {
            let q = self.integer()?;
            Fraction::new(p, q)
        } else {
            Ok(Fraction::integer(p))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.rest().starts_with('-') {
            self.pos += 1;
        }
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            self.pos = start;
            return self.err("expected an integer");
        }
        self.pos += digits;
        Ok(self.src[start..self.pos]
            .parse()
            .expect("sign and ASCII digits always parse"))
    }

    /// `frac {"," frac} ")"`, after the opening parenthesis.
    fn fraction_list(&mut self) -> Result<Vec<Fraction>> {
        let mut out = vec![self.fraction()?];
        while self.eat(",") {
            out.push(self.fraction()?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn link(&mut self) -> Result<LinkExpr> {
        if self.eat("N(") {
            let tangle = self.expr()?;
            self.expect(")")?;
            Ok(LinkExpr::Numerator { tangle })
        } else if self.eat("M(") {
            let start = self.pos;
            let fractions = self.fraction_list()?;
            if let Some(bad) = fractions.iter().find(|f| f.is_infinite()) {
                self.pos = start;
                return Err(Error::MontesinosDenominator(bad.to_string()));
            }
            Ok(LinkExpr::Montesinos { fractions })
        } else if self.eat("glue(") {
            let first = self.expr()?;
            self.expect(";")?;
            let second = self.expr()?;
            let gluing = if self.eat(";") {
                self.gluing()?
            } else {
                GluingMap::default()
            };
            self.expect(")")?;
            Ok(LinkExpr::Glue {
                first,
                second,
                gluing,
            })
        } else {
            self.err("expected a link: `N(..)`, `M(..)` or `glue(..)`")
        }
    }

    fn gluing(&mut self) -> Result<GluingMap> {
        let axis_match = if self.eat("id") {
            AxisMatch::Identity
        } else if self.eat("quarter") {
            AxisMatch::Quarter
        } else {
            return self.err("expected `id` or `quarter`");
        };
        let mirror_second = self.eat("mirror");
        Ok(GluingMap {
            axis_match,
            mirror_second,
        })
    }
}
