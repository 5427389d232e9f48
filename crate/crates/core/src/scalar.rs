//! Exact arithmetic in the quadratic field ℚ(√2).
//!
//! [`Rational`] stores small fractions inline as reduced `i64` pairs and
//! promotes to [`BigRational`] when a result no longer fits. Every value has a
//! single canonical representation, so equality and hashing are structural.
//! [`Scalar`] is the field element `a + b·√2` with rational `a` and `b`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Numerator and denominator both fit in `i64` and exclude `i64::MIN`.
    Small(i64, i64),
    /// Anything larger.
    Big(BigRational),
}

fn fits(x: i128) -> bool {
    x > i64::MIN as i128 && x <= i64::MAX as i128
}

impl Rational {
    /// The rational number zero.
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    /// The rational number one.
    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    /// The integer `n`.
    pub fn from_integer(n: i64) -> Self {
        Self::from_i128(n as i128, 1)
    }

    /// The fraction `n / d`; fails when `d` is zero.
    pub fn new(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_i128(n as i128, d as i128))
    }

    fn from_i128(n: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if fits(n) && fits(d) {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d))))
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational arithmetic keeps values reduced with a positive denominator.
        match (r.numer().to_i128(), r.denom().to_i128()) {
            (Some(n), Some(d)) if fits(n) && fits(d) => Rational(Repr::Small(n as i64, d as i64)),
            _ => Rational(Repr::Big(r)),
        }
    }

    /// Converts to an arbitrary-precision rational.
    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    /// Numerator in lowest terms.
    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    /// Positive denominator in lowest terms.
    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    /// True when the value is zero.
    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    /// True when the denominator is one.
    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// Sign as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(r) => Self::from_big(r.recip()),
        })
    }

    /// Exact quotient; fails when `other` is zero.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// Display as `p/q` even for integers.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational::from_big(r)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128(a * d + c * b, b * d)
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            // Small values never hold i64::MIN, so negation cannot overflow.
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(r) => Rational::from_big(-r),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        &self + &rhs
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        &self - &rhs
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        &self * &rhs
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `p` or `p/q` with decimal integers.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseScalar(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

/// An element `a + b·√2` of ℚ(√2).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: Rational,
    b: Rational,
}

impl Scalar {
    /// Builds `a + b·√2`.
    pub fn new(a: Rational, b: Rational) -> Self {
        Scalar { a, b }
    }

    /// The additive identity.
    pub fn zero() -> Self {
        Scalar::default()
    }

    /// The multiplicative identity.
    pub fn one() -> Self {
        Scalar::from_integer(1)
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        Scalar::new(Rational::zero(), Rational::one())
    }

    /// The integer `n` as a scalar.
    pub fn from_integer(n: i64) -> Self {
        Scalar::new(Rational::from_integer(n), Rational::zero())
    }

    /// The rational `r` as a scalar.
    pub fn from_rational(r: Rational) -> Self {
        Scalar::new(r, Rational::zero())
    }

    /// The fraction `n / d`; fails when `d` is zero.
    pub fn fraction(n: i64, d: i64) -> Result<Self> {
        Ok(Scalar::from_rational(Rational::new(n, d)?))
    }

    /// Rational part `a`.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient `b` of √2.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the √2 part vanishes.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conjugate(&self) -> Self {
        Scalar::new(self.a.clone(), -&self.b)
    }

    /// Field norm `a² − 2b²`, which vanishes only at zero.
    pub fn norm(&self) -> Rational {
        let two = Rational::from_integer(2);
        &(&self.a * &self.a) - &(&two * &(&self.b * &self.b))
    }

    /// Multiplies by an integer.
    pub fn mul_int(&self, k: i64) -> Self {
        match k {
            0 => Scalar::zero(),
            1 => self.clone(),
            -1 => -self,
            _ => {
                let k = Rational::from_integer(k);
                Scalar::new(&self.a * &k, &self.b * &k)
            }
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conjugate();
        Ok(Scalar::new(c.a.checked_div(&n)?, c.b.checked_div(&n)?))
    }

    /// Exact quotient; fails when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Sign of the real number `a + b·√2` as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let (sa, sb) = (self.a.signum(), self.b.signum());
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a² with 2b².
        let a2 = &self.a * &self.a;
        let b2 = &Rational::from_integer(2) * &(&self.b * &self.b);
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Absolute value.
    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// `(a+b√2)(c+d√2) = (ac+2bd) + (ad+bc)√2`.
    fn mul(self, rhs: &Scalar) -> Scalar {
        let (a, b, c, d) = (&self.a, &self.b, &rhs.a, &rhs.b);
        if b.is_zero() && d.is_zero() {
            return Scalar::from_rational(a * c);
        }
        let bd = b * d;
        let real = &(a * c) + &(&bd + &bd);
        let surd = &(a * d) + &(b * c);
        Scalar::new(real, surd)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.a, -&self.b)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.a = &self.a + &rhs.a;
        self.b = &self.b + &rhs.b;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.a = &self.a - &rhs.a;
        self.b = &self.b - &rhs.b;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// The order of the real numbers the two scalars denote.
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl Serialize for Rational {
    /// Encodes as the display string, `"p"` or `"p/q"`.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(de::Error::custom)
    }
}

impl fmt::Display for Scalar {
    /// Renders `3/2`, `1+1√2`, `-1/2√2` and so on, with no floating point.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}√2", self.b);
        }
        if self.b.signum() < 0 {
            write!(f, "{}{}√2", self.a, self.b)
        } else {
            write!(f, "{}+{}√2", self.a, self.b)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("√2") else {
            return Ok(Scalar::from_rational(s.parse()?));
        };
        // The √2 coefficient starts at the last sign that is not leading.
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        match split {
            Some(i) => {
                let a: Rational = body[..i].parse()?;
                let b = body[i..].strip_prefix('+').unwrap_or(&body[i..]);
                Ok(Scalar::new(a, b.parse()?))
            }
            None => Ok(Scalar::new(Rational::zero(), body.parse()?)),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Scalar", 2)?;
        st.serialize_field("a", &self.a.to_fraction_string())?;
        st.serialize_field("b", &self.b.to_fraction_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            a: String,
            b: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let a = raw.a.parse().map_err(de::Error::custom)?;
        let b = raw.b.parse().map_err(de::Error::custom)?;
        Ok(Scalar::new(a, b))
    }
}

/// Shorthand for the integer scalar `n`.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(n)
}

/// Shorthand for `a + b·√2` with integer parts.
pub fn surd(a: i64, b: i64) -> Scalar {
    Scalar::new(Rational::from_integer(a), Rational::from_integer(b))
}

/// Shorthand for the rational scalar `n / d`.
///
/// # Panics
/// Panics when `d` is zero.
pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::fraction(n, d).expect("nonzero denominator")
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_of_one_plus_root_two() {
        assert_eq!(&surd(1, 1) * &surd(1, 1), surd(3, 2));
    }

    #[test]
    fn root_two_squared_is_two() {
        assert_eq!(&Scalar::sqrt2() * &Scalar::sqrt2(), int(2));
    }

    #[test]
    fn division_by_conjugate() {
        let q = surd(3, 2).checked_div(&surd(1, 1)).unwrap();
        assert_eq!(q, surd(1, 1));
        assert_eq!(&q * &surd(1, 1), surd(3, 2));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(int(1).checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
        assert_eq!(Rational::new(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_fractions() {
        assert_eq!(Rational::new(2, -4).unwrap(), Rational::new(-1, 2).unwrap());
        assert_eq!(Rational::new(6, 3).unwrap().to_string(), "2");
        assert_eq!(frac(3, 2).to_string(), "3/2");
        assert_eq!(surd(1, 1).to_string(), "1+1√2");
        assert_eq!(surd(1, -1).to_string(), "1-1√2");
        assert_eq!(
            Scalar::new(Rational::zero(), Rational::new(-1, 2).unwrap()).to_string(),
            "-1/2√2"
        );
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "3/2", "-7", "1+1√2", "1-1√2", "-1/2√2", "5/3-2/7√2", "1√2"] {
            let x: Scalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
    }

    #[test]
    fn json_encoding() {
        let x = Scalar::new(Rational::new(3, 2).unwrap(), Rational::from_integer(-1));
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"a":"3/2","b":"-1/1"}"#);
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
        let short: Scalar = serde_json::from_str(r#"{"a":"2","b":"0"}"#).unwrap();
        assert_eq!(short, int(2));
    }

    #[test]
    fn promotion_to_big_and_back() {
        let big = Rational::from_integer(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = sq.checked_div(&big).unwrap();
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(_, _)));
        let min_like = &Rational::from_integer(-i64::MAX) - &Rational::one();
        assert!(matches!(min_like.0, Repr::Big(_)));
        assert_eq!(&min_like + &Rational::one(), Rational::from_integer(-i64::MAX));
    }

    #[test]
    fn ordering_of_surds() {
        assert!(surd(-1, 1) > Scalar::zero()); // √2 − 1 > 0
        assert!(surd(2, -1) > Scalar::zero());
        assert!(surd(1, -1) < Scalar::zero());
        assert!(surd(-3, 2) < Scalar::zero()); // 2√2 ≈ 2.83 < 3
        assert_eq!(surd(1, -1).abs(), surd(-1, 1));
        assert!(surd(0, 1) < frac(3, 2));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n, d).unwrap())
    }

    fn scalar() -> impl Strategy<Value = Scalar> {
        (small_rational(), small_rational()).prop_map(|(a, b)| Scalar::new(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 1000, rng_seed: proptest::test_runner::RngSeed::Fixed(17), ..ProptestConfig::default() })]

        #[test]
        fn field_laws(x in scalar(), y in scalar(), z in scalar()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), Scalar::one());
            }
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
        }

        #[test]
        fn order_is_compatible_with_addition(x in scalar(), y in scalar(), z in scalar()) {
            prop_assert_eq!(x.cmp(&y), (&x + &z).cmp(&(&y + &z)));
            prop_assert_eq!((&x * &x).signum() >= 0, true);
        }

        #[test]
        fn text_round_trip(x in scalar()) {
            let parsed: Scalar = x.to_string().parse().unwrap();
            prop_assert_eq!(parsed, x);
        }
    }
}
