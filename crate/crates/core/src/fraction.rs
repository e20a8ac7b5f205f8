//! Exact tangle fractions.
//!
//! A [`Fraction`] is a reduced `p/q` with the sign carried by the numerator,
//! plus the point at infinity `1/0`. Every rational tangle `T[p/q]` is named
//! by one of these.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction `p/q`, or `∞ = 1/0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    p: BigInt,
    q: BigInt,
}

impl Fraction {
    /// Reduces `p/q` to canonical form. Any `q = 0` maps to `∞`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(Error::ZeroZero);
        }
        if q.is_zero() {
            return Ok(Self::infinity());
        }
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        let g = p.gcd(&q);
        if !g.is_one() {
            p /= &g;
            q /= &g;
        }
        Ok(Fraction { p, q })
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Fraction {
            p: n.into(),
            q: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn infinity() -> Self {
        Fraction {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    /// `1/n`, which is `∞` for `n = 0`.
    pub fn reciprocal_integer(n: impl Into<BigInt>) -> Self {
        Self::new(1, n).expect("1/n is never 0/0")
    }

    pub fn numer(&self) -> &BigInt {
        &self.p
    }

    pub fn denom(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.q.is_one()
    }

    /// Finite with numerator `±1`, i.e. `T[1/n]` for some integer `n ≠ 0`.
    pub fn is_unit_numerator(&self) -> bool {
        !self.is_infinite() && self.p.abs().is_one()
    }

    /// `p/2` with `p` odd.
    pub fn is_half_integral(&self) -> bool {
        self.q == BigInt::from(2)
    }

    /// True iff `self − other ∈ ℤ`, or both are `∞`.
    pub fn marked_equivalent(&self, other: &Fraction) -> bool {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => true,
            (false, false) => self.q == other.q && (&self.p - &other.p).is_multiple_of(&self.q),
            _ => false,
        }
    }

    /// Quarter-turn rotation `f ↦ −1/f`; swaps `0` and `∞`.
    pub fn rotate(&self) -> Fraction {
        if self.is_infinite() {
            return Self::zero();
        }
        Self::new(-&self.q, self.p.clone()).expect("p and q are never both zero")
    }

    /// Mirror image `f ↦ −f`; fixes `∞`.
    pub fn mirror(&self) -> Fraction {
        if self.is_infinite() {
            return self.clone();
        }
        Fraction {
            p: -&self.p,
            q: self.q.clone(),
        }
    }

    /// Sum with the integral tangle `T[n]`: `(p + nq)/q`, and `∞ + n = ∞`.
    pub fn add_integer(&self, n: &BigInt) -> Fraction {
        if self.is_infinite() {
            return self.clone();
        }
        Fraction {
            p: &self.p + n * &self.q,
            q: self.q.clone(),
        }
    }

    /// Product with the vertical twist `T[1/n]`: `p/(q + np)`.
    pub fn add_vertical_twists(&self, n: &BigInt) -> Fraction {
        Self::new(self.p.clone(), &self.q + n * &self.p).expect("p and q are never both zero")
    }

    /// For a unit-numerator fraction `±1/k` returns the `n` with `self = 1/n`.
    pub(crate) fn unit_index(&self) -> Option<BigInt> {
        if !self.is_unit_numerator() {
            return None;
        }
        Some(&self.q * &self.p)
    }

    /// Euclidean continued fraction `[a0; a1, ..., ak]` with `ai ≥ 1` for `i ≥ 1`.
    pub fn continued_fraction(&self) -> Result<Vec<BigInt>> {
        if self.is_infinite() {
            return Err(Error::InfiniteInput);
        }
        let (mut p, mut q) = (self.p.clone(), self.q.clone());
        let mut out = Vec::new();
        while !q.is_zero() {
            let (a, r) = p.div_mod_floor(&q);
            out.push(a);
            p = q;
            q = r;
        }
        Ok(out)
    }

    /// Entries whose twist realization draws `T[self]` with the fewest
    /// crossings: the continued fraction of `|self|`, negated for negative input.
    pub fn twist_sequence(&self) -> Result<Vec<BigInt>> {
        let mut entries = self.abs().continued_fraction()?;
        if self.p.is_negative() {
            for a in &mut entries {
                *a = -a.clone();
            }
        }
        Ok(entries)
    }

    /// `2q`: the minimal intersection of a compressing disk boundary for
    /// `∂B − T[p/q]` with a vertical circle.
    pub fn compressing_disk_intersections(&self) -> Result<BigInt> {
        if self.is_infinite() {
            return Err(Error::InfiniteInput);
        }
        Ok(&self.q * 2)
    }

    pub fn abs(&self) -> Fraction {
        Fraction {
            p: self.p.abs(),
            q: self.q.clone(),
        }
    }

    /// `floor(self)`, for finite input.
    pub fn floor(&self) -> BigInt {
        self.p.div_floor(&self.q)
    }

    /// `self − floor(self)`, in `[0, 1)`, for finite input.
    pub fn fractional_part(&self) -> Fraction {
        Fraction {
            p: self.p.mod_floor(&self.q),
            q: self.q.clone(),
        }
    }

    /// Numerator closure `N(T[p/q])` as a two-bridge link.
    pub fn two_bridge(&self) -> TwoBridgeForm {
        TwoBridgeForm::of_numerator_closure(self)
    }

    /// Ordering used for canonical sequences: denominator first, then numerator.
    pub fn cmp_simplest_first(&self, other: &Fraction) -> Ordering {
        self.q.cmp(&other.q).then_with(|| self.p.cmp(&other.p))
    }
}

impl Add for &Fraction {
    type Output = Fraction;

    /// Exact sum; `∞` absorbs.
    fn add(self, rhs: &Fraction) -> Fraction {
        if self.is_infinite() || rhs.is_infinite() {
            return Fraction::infinity();
        }
        Fraction::new(&self.p * &rhs.q + &rhs.p * &self.q, &self.q * &rhs.q)
            .expect("denominator is nonzero")
    }
}

impl Sub for &Fraction {
    type Output = Fraction;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: &Fraction) -> Fraction {
        self + &rhs.mirror()
    }
}

impl Neg for &Fraction {
    type Output = Fraction;

    fn neg(self) -> Fraction {
        self.mirror()
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else if self.is_integral() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Fraction::infinity());
        }
        let bad = || Error::BadFraction(s.to_string());
        let parse_int = |t: &str| -> Result<BigInt> {
            let t = t.trim();
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        match s.split_once('/') {
            Some((p, q)) => Fraction::new(parse_int(p)?, parse_int(q)?),
            None => Ok(Fraction::integer(parse_int(s)?)),
        }
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// What the numerator closure of a rational tangle is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoBridgeKind {
    /// `p = 0`: two split unknotted circles.
    TwoComponentUnlink,
    /// `|p| = 1`.
    Unknot,
    /// `b(p, q)` with `p ≥ 2`.
    Link,
}

/// Schubert form `b(p, q)` of a two-bridge link, `0 ≤ q < p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoBridgeForm {
    #[serde(serialize_with = "serialize_bigint")]
    pub p: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub q: BigInt,
    pub kind: TwoBridgeKind,
    pub torus: bool,
}

impl TwoBridgeForm {
    pub fn of_numerator_closure(f: &Fraction) -> TwoBridgeForm {
        let p = f.p.abs();
        if p.is_zero() {
            return TwoBridgeForm {
                p,
                q: BigInt::one(),
                kind: TwoBridgeKind::TwoComponentUnlink,
                torus: false,
            };
        }
        if p.is_one() {
            return TwoBridgeForm {
                p,
                q: BigInt::zero(),
                kind: TwoBridgeKind::Unknot,
                torus: false,
            };
        }
        let q = f.q.mod_floor(&p);
        let torus = q.is_one() || q == &p - 1u32;
        TwoBridgeForm {
            p,
            q,
            kind: TwoBridgeKind::Link,
            torus,
        }
    }

    pub fn is_split(&self) -> bool {
        self.kind == TwoBridgeKind::TwoComponentUnlink
    }

    pub fn is_unknot(&self) -> bool {
        self.kind == TwoBridgeKind::Unknot
    }

    /// Number of link components: one for odd `p`, two for even `p`.
    pub fn components(&self) -> usize {
        if self.p.is_even() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for TwoBridgeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TwoBridgeKind::TwoComponentUnlink => f.write_str("two-component unlink"),
            TwoBridgeKind::Unknot => f.write_str("unknot"),
            TwoBridgeKind::Link => write!(f, "b({},{})", self.p, self.q),
        }
    }
}

/// Small helper for tests and the CLI: `p/q` from machine integers.
pub fn frac(p: i64, q: i64) -> Fraction {
    Fraction::new(p, q).expect("frac(0, 0)")
}

/// Writes a `BigInt` as a JSON number when it fits in `i64`, else as a string.
pub(crate) fn serialize_bigint<S: Serializer>(
    n: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&n| BigInt::from(n)).collect()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(frac(2, 4), frac(1, 2));
        assert_eq!(frac(2, 4).to_string(), "1/2");
        assert!(frac(3, 0).is_infinite());
        assert_eq!(frac(3, 0), Fraction::infinity());
        assert_eq!(frac(-3, 0), Fraction::infinity());
        assert_eq!(frac(-2, -4), frac(1, 2));
        assert_eq!(frac(2, -4).to_string(), "-1/2");
        assert!(matches!(Fraction::new(0, 0), Err(Error::ZeroZero)));
    }

    #[test]
    fn marked_equivalence_examples() {
        assert!(frac(1, 2).marked_equivalent(&frac(-1, 2)));
        assert!(Fraction::infinity().marked_equivalent(&Fraction::infinity()));
        assert!(!frac(1, 3).marked_equivalent(&frac(1, 2)));
        assert!(!Fraction::infinity().marked_equivalent(&frac(1, 2)));
        assert!(frac(7, 3).marked_equivalent(&frac(1, 3)));
    }

    #[test]
    fn rotation_and_mirror_examples() {
        assert_eq!(Fraction::zero().rotate(), Fraction::infinity());
        assert_eq!(Fraction::infinity().rotate(), Fraction::zero());
        assert_eq!(frac(1, 2).rotate(), frac(-2, 1));
        assert_eq!(frac(2, 3).rotate(), frac(-3, 2));
        assert_eq!(frac(1, 2).mirror(), frac(-1, 2));
        assert_eq!(Fraction::infinity().mirror(), Fraction::infinity());
        assert_eq!(frac(2, 3).mirror(), frac(-2, 3));
    }

    #[test]
    fn add_integer_examples() {
        assert_eq!(frac(1, 3).add_integer(&1.into()), frac(4, 3));
        assert_eq!(Fraction::zero().add_integer(&2.into()), frac(2, 1));
        assert_eq!(
            Fraction::infinity().add_integer(&5.into()),
            Fraction::infinity()
        );
    }

    #[test]
    fn vertical_twists() {
        // T[1/2] * T[1/3] = T[1/5]
        assert_eq!(frac(1, 2).add_vertical_twists(&3.into()), frac(1, 5));
        assert_eq!(
            frac(1, 1).add_vertical_twists(&(-1).into()),
            Fraction::infinity()
        );
    }

    #[test]
    fn continued_fraction_examples() {
        assert_eq!(frac(2, 3).continued_fraction().unwrap(), ints(&[0, 1, 2]));
        assert_eq!(frac(5, 1).continued_fraction().unwrap(), ints(&[5]));
        assert_eq!(frac(5, 2).continued_fraction().unwrap(), ints(&[2, 2]));
        assert_eq!(frac(-2, 3).continued_fraction().unwrap(), ints(&[-1, 3]));
        assert_eq!(frac(-2, 3).twist_sequence().unwrap(), ints(&[0, -1, -2]));
        assert!(matches!(
            Fraction::infinity().continued_fraction(),
            Err(Error::InfiniteInput)
        ));
    }

    #[test]
    fn compressing_disk_examples() {
        assert_eq!(
            frac(2, 3).compressing_disk_intersections().unwrap(),
            6.into()
        );
        assert_eq!(
            frac(0, 1).compressing_disk_intersections().unwrap(),
            2.into()
        );
        assert_eq!(
            frac(1, 2).compressing_disk_intersections().unwrap(),
            4.into()
        );
        assert!(Fraction::infinity()
            .compressing_disk_intersections()
            .is_err());
    }

    #[test]
    fn two_bridge_examples() {
        let trefoil = frac(3, 1).two_bridge();
        assert_eq!((trefoil.p.clone(), trefoil.q.clone()), (3.into(), 1.into()));
        assert!(trefoil.torus);
        let eight = frac(5, 2).two_bridge();
        assert_eq!((eight.p.clone(), eight.q.clone()), (5.into(), 2.into()));
        assert!(!eight.torus);
        let unlink = Fraction::zero().two_bridge();
        assert!(unlink.is_split());
        assert!(frac(1, 7).two_bridge().is_unknot());
        assert!(Fraction::infinity().two_bridge().is_unknot());
        assert_eq!(frac(-3, 1).two_bridge().torus, trefoil.torus);
    }

    #[test]
    fn text_round_trip() {
        for s in ["1/2", "-1/2", "inf", "0", "7", "-12345678901234567890123/7"] {
            assert_eq!(s.parse::<Fraction>().unwrap().to_string(), s);
        }
        assert_eq!("4/2".parse::<Fraction>().unwrap().to_string(), "2");
        assert_eq!("3/0".parse::<Fraction>().unwrap(), Fraction::infinity());
        assert!(matches!("0/0".parse::<Fraction>(), Err(Error::ZeroZero)));
        for bad in ["", "-", "1/", "/2", "1.5", "+1", "1/-"] {
            assert!(bad.parse::<Fraction>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn fractional_parts() {
        assert_eq!(frac(-1, 3).fractional_part(), frac(2, 3));
        assert_eq!(frac(7, 3).fractional_part(), frac(1, 3));
        assert_eq!(frac(-7, 2).floor(), BigInt::from(-4));
    }
}
