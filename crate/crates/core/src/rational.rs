//! Exact rationals and rational vectors.
//!
//! Everything outside the Chebyshev estimator works over [`Rat`]; nothing in
//! this module ever rounds.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

pub type Rat = BigRational;

/// Integer rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num / den` in lowest terms. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Parses `"3"`, `"-2/5"` or a decimal like `"0.25"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((whole, fracpart)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fracpart);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fracpart.len());
        let r = Rat::new(n, d);
        return Some(if neg { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(Rat::from_integer)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// The zero vector maps to itself.
pub fn primitive(v: &[Rat]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * big(&den)).to_integer()).collect();
    primitive_int(ints)
}

pub fn primitive_int(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

/// Exact vector of rationals with a fixed dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rat::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rat::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RatVector(xs.iter().map(|&x| int(x)).collect())
    }

    pub fn from_bigints(xs: &[BigInt]) -> Self {
        RatVector(xs.iter().map(big).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, s: &Rat) -> RatVector {
        RatVector(self.0.iter().map(|x| x * s).collect())
    }

    /// Primitive integer vector on the same ray.
    pub fn primitive(&self) -> RatVector {
        RatVector::from_bigints(&primitive(&self.0))
    }

    /// Integer coordinates; `None` if some coordinate is fractional.
    pub fn to_bigints(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.to_bigints()?.iter().map(|x| x.to_i64()).collect()
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Appends `x` to the front: `(x, self)`.
    pub fn prepend(&self, x: Rat) -> RatVector {
        let mut c = Vec::with_capacity(self.dim() + 1);
        c.push(x);
        c.extend(self.0.iter().cloned());
        RatVector(c)
    }
}

impl Index<usize> for RatVector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl From<Vec<Rat>> for RatVector {
    fn from(v: Vec<Rat>) -> Self {
        RatVector(v)
    }
}

impl<'a> Add<&'a RatVector> for &'a RatVector {
    type Output = RatVector;
    fn add(self, rhs: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a RatVector> for &'a RatVector {
    type Output = RatVector;
    fn sub(self, rhs: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for RatVector {
    type Output = RatVector;
    fn add(self, rhs: RatVector) -> RatVector {
        &self + &rhs
    }
}

impl Sub for RatVector {
    type Output = RatVector;
    fn sub(self, rhs: RatVector) -> RatVector {
        &self - &rhs
    }
}

impl Neg for &RatVector {
    type Output = RatVector;
    fn neg(self) -> RatVector {
        RatVector(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for RatVector {
    type Output = RatVector;
    fn neg(self) -> RatVector {
        -&self
    }
}

impl Mul<&Rat> for &RatVector {
    type Output = RatVector;
    fn mul(self, s: &Rat) -> RatVector {
        self.scale(s)
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `[numerator, denominator]` with the denominator positive and in lowest
/// terms. Integers that do not fit in an `i64` are written as decimal strings.
pub fn rat_to_json(x: &Rat) -> serde_json::Value {
    serde_json::Value::Array(vec![bigint_to_json(x.numer()), bigint_to_json(x.denom())])
}

fn bigint_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

pub fn rat_from_json(v: &serde_json::Value) -> Option<Rat> {
    fn part(v: &serde_json::Value) -> Option<BigInt> {
        match v {
            serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
            serde_json::Value::String(s) => s.parse().ok(),
            _ => None,
        }
    }
    match v {
        serde_json::Value::Array(a) if a.len() == 2 => {
            let n = part(&a[0])?;
            let d = part(&a[1])?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        serde_json::Value::Number(_) => part(v).map(Rat::from_integer),
        serde_json::Value::String(s) => parse_rat(s),
        _ => None,
    }
}

pub fn vector_to_json(v: &RatVector) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(rat_to_json).collect())
}

/// Serde adapter for a single [`Rat`] as `[num, den]`.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        rat_to_json(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        rat_from_json(&v).ok_or_else(|| de::Error::custom(format!("not a rational: {v}")))
    }
}

/// Serde adapter for a list of rationals.
pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        RatVector(v.to_vec()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        Ok(RatVector::deserialize(d)?.0)
    }
}

/// Serde adapter for a rational matrix as nested `[num, den]` arrays.
pub mod serde_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<RatVector> = m.iter().map(|r| RatVector(r.clone())).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let rows = Vec::<RatVector>::deserialize(d)?;
        Ok(rows.into_iter().map(|r| r.0).collect())
    }
}

impl Serialize for RatVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for x in &self.0 {
            seq.serialize_element(&rat_to_json(x))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RatVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<serde_json::Value>::deserialize(d)?;
        items
            .iter()
            .map(|v| {
                rat_from_json(v).ok_or_else(|| de::Error::custom(format!("not a rational: {v}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(RatVector)
    }
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("3"), Some(int(3)));
        assert_eq!(parse_rat("-2/4"), Some(frac(-1, 2)));
        assert_eq!(parse_rat("0.25"), Some(frac(1, 4)));
        assert_eq!(parse_rat("-1.5"), Some(frac(-3, 2)));
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn json_is_lowest_terms_positive_denominator() {
        let x = Rat::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(rat_to_json(&x), serde_json::json!([-3, 2]));
        assert_eq!(
            rat_from_json(&serde_json::json!([6, -4])),
            Some(frac(-3, 2))
        );
    }

    #[test]
    fn primitive_scaling() {
        let v = RatVector::new(vec![frac(1, 2), frac(-3, 4), int(0)]);
        assert_eq!(v.primitive(), RatVector::from_ints(&[2, -3, 0]));
        assert_eq!(RatVector::zeros(2).primitive(), RatVector::zeros(2));
    }
}
