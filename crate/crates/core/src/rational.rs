//! Exact rational scalars and vectors.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar. Always stored in reduced form with a positive denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rat::new(n, d)
        }
        None => Rat::from_integer(
            BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?,
        ),
    };
    Ok(parsed)
}

/// Canonical `"num/den"` form, used for every serialized rational.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact conversion of a finite float.
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

/// Rounds `x` to the nearest multiple of `2^-bits`.
pub fn rat_from_f64_snapped(x: f64, bits: u32) -> Rat {
    let scale = (bits as f64).exp2();
    let n = (x * scale).round();
    Rat::new(BigInt::from(n as i128), BigInt::one() << bits)
}

/// The rational with the smallest denominator (then numerator) in `[lo, hi]`,
/// for `0 ≤ lo ≤ hi`.
pub fn simplest_in(lo: &Rat, hi: &Rat) -> Rat {
    assert!(!lo.is_negative() && lo <= hi, "simplest_in needs 0 <= lo <= hi");
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rat::one();
    if &next <= hi {
        return next;
    }
    fl.clone() + simplest_in(&(hi - &fl).recip(), &(lo - &fl).recip()).recip()
}

pub fn floor_to_i64(r: &Rat) -> i64 {
    r.floor().to_integer().to_i64().expect("coordinate fits in i64")
}

pub fn ceil_to_i64(r: &Rat) -> i64 {
    r.ceil().to_integer().to_i64().expect("coordinate fits in i64")
}

/// Serde adapter writing a rational as a `"num/den"` string.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_rat(&v).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for an optional rational.
pub mod serde_opt_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rat(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rat>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        v.map(|v| value_to_rat(&v).map_err(serde::de::Error::custom)).transpose()
    }
}

/// Accepts JSON strings (`"p/q"`) and integer literals.
pub fn value_to_rat(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::String(s) => parse_rat(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else {
                Err(Error::Parse(format!("non-integer numeric literal {n}; use a \"p/q\" string")))
            }
        }
        other => Err(Error::Parse(format!("expected rational, found {other}"))),
    }
}

/// A point of ℚⁿ, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RatVec(pub Vec<Rat>);

impl RatVec {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVec(coords)
    }

    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Rat::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RatVec(v.iter().map(|&x| int(x)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rat::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Dot product with a float vector.
    pub fn dot_f64(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(a, b)| rat_to_f64(a) * b).sum()
    }

    pub fn sum(&self) -> Rat {
        self.0.iter().fold(Rat::zero(), |acc, a| acc + a)
    }

    pub fn scale(&self, s: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|a| a.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rat_to_f64).collect()
    }

    /// Integer coordinates; panics when a coordinate is fractional or out of range.
    pub fn to_i64(&self) -> Vec<i64> {
        self.0
            .iter()
            .map(|a| {
                assert!(a.is_integer(), "non-integral coordinate {a}");
                a.to_integer().to_i64().expect("coordinate fits in i64")
            })
            .collect()
    }

    /// The positive multiple of `self` that is a primitive integer vector.
    /// Returns `self` unchanged when it is zero.
    pub fn primitive(&self) -> RatVec {
        if self.is_zero() {
            return self.clone();
        }
        let ints = primitive_integer(&self.0);
        RatVec(ints.into_iter().map(Rat::from_integer).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> RatVec {
        RatVec(perm.iter().map(|&i| self.0[i].clone()).collect())
    }
}

/// Scales a rational vector by a positive factor to a primitive integer vector.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let ints: Vec<BigInt> = v.iter().map(|a| (a * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|a| a / &g).collect()
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Rat> for &RatVec {
    type Output = RatVec;
    fn mul(self, rhs: &Rat) -> RatVec {
        self.scale(rhs)
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for RatVec {
    type Err = Error;

    /// Comma-separated coordinates, e.g. `"0,1/2,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        s.split(',').map(parse_rat).collect::<Result<Vec<_>>>().map(RatVec)
    }
}

impl Serialize for RatVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.0.iter().map(format_rat).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let vals = Vec::<serde_json::Value>::deserialize(d)?;
        vals.iter()
            .map(value_to_rat)
            .collect::<Result<Vec<_>>>()
            .map(RatVec)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplest_rational_in_bracket() {
        assert_eq!(simplest_in(&rat(1, 3), &rat(1, 2)), rat(1, 2));
        assert_eq!(simplest_in(&rat(3, 10), &rat(2, 5)), rat(1, 3));
        assert_eq!(simplest_in(&int(2), &int(3)), int(2));
        let eps = Rat::new(BigInt::one(), BigInt::one() << 40);
        let target = rat(355, 113);
        assert_eq!(simplest_in(&(&target - &eps), &(&target + &eps)), target);
        assert_eq!(simplest_in(&(&target - &eps), &target), target);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-3").unwrap(), int(-3));
        assert_eq!(format_rat(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rat(&int(8)), "8/1");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = RatVec(vec![rat(1, 2), rat(3, 4), int(0)]);
        assert_eq!(v.primitive(), RatVec::from_ints(&[2, 3, 0]));
        let w = RatVec::from_ints(&[-4, 6]);
        assert_eq!(w.primitive(), RatVec::from_ints(&[-2, 3]));
    }

    #[test]
    fn vec_from_str_and_json() {
        let v: RatVec = "0, 1/2,3".parse().unwrap();
        assert_eq!(v, RatVec(vec![int(0), rat(1, 2), int(3)]));
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["0/1","1/2","3/1"]"#);
        let back: RatVec = serde_json::from_str(r#"["0", "1/2", 3]"#).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn snapping() {
        let r = rat_from_f64_snapped(0.1, 10);
        assert_eq!(r, rat(102, 1024));
    }
}
