//! Exact rational numbers.
//!
//! Values that fit in a pair of machine words stay on a fast path; anything
//! larger is promoted to an arbitrary-precision representation. The
//! representation is canonical, so structural equality and hashing agree
//! with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced fraction with `den > 0`; `i64::MIN` never appears so that
    /// negation cannot overflow.
    Small { num: i64, den: i64 },
    /// Only used when the reduced value does not fit `Small`.
    Big(BigRational),
}

/// Error returned when parsing a rational literal fails.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: &'static str,
}

fn small_from_i128(num: i128, den: i128) -> Rational {
    debug_assert!(den != 0);
    let g = num.gcd(&den);
    let (mut n, mut d) = (num / g, den / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n64), Ok(d64)) if n64 != i64::MIN && d64 != i64::MIN => Rational(Repr::Small { num: n64, den: d64 }),
        _ => Rational(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
    }
}

fn from_big(r: BigRational) -> Rational {
    // `r` must already be reduced with a positive denominator.
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        if n != i64::MIN && d != i64::MIN {
            return Rational(Repr::Small { num: n, den: d });
        }
    }
    Rational(Repr::Big(r))
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Rational(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_integer(n: i64) -> Self {
        if n == i64::MIN {
            Rational(Repr::Big(BigRational::from_integer(BigInt::from(n))))
        } else {
            Rational(Repr::Small { num: n, den: 1 })
        }
    }

    /// Builds `num / den`. Panics when `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        small_from_i128(num as i128, den as i128)
    }

    pub fn from_bigs(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        from_big(BigRational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small { num, den: 1 } => Some(*num),
            _ => None,
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => {
                assert!(*num != 0, "reciprocal of zero");
                small_from_i128(*den as i128, *num as i128)
            }
            Repr::Big(r) => from_big(r.recip()),
        }
    }

    /// `self * a + b` without an intermediate clone when possible.
    pub fn mul_add(&self, a: &Rational, b: &Rational) -> Rational {
        &(self * a) + b
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

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<u32> for Rational {
    fn from(n: u32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        from_big(r)
    }
}

fn add_impl(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small { num: an, den: 1 }, Repr::Small { num: bn, den: 1 }) => {
            Rational::from_integer_i128(*an as i128 + *bn as i128)
        }
        (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
            let (an, ad, bn, bd) = (*an as i128, *ad as i128, *bn as i128, *bd as i128);
            small_from_i128(an * bd + bn * ad, ad * bd)
        }
        _ => from_big(a.to_big() + b.to_big()),
    }
}

fn mul_impl(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small { num: an, den: 1 }, Repr::Small { num: bn, den: 1 }) => {
            Rational::from_integer_i128(*an as i128 * *bn as i128)
        }
        (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
            small_from_i128(*an as i128 * *bn as i128, *ad as i128 * *bd as i128)
        }
        _ => from_big(a.to_big() * b.to_big()),
    }
}

fn div_impl(a: &Rational, b: &Rational) -> Rational {
    assert!(!b.is_zero(), "division by zero");
    match (&a.0, &b.0) {
        (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
            small_from_i128(*an as i128 * *bd as i128, *ad as i128 * *bn as i128)
        }
        _ => from_big(a.to_big() / b.to_big()),
    }
}

impl Rational {
    fn from_integer_i128(n: i128) -> Rational {
        match i64::try_from(n) {
            Ok(v) if v != i64::MIN => Rational(Repr::Small { num: v, den: 1 }),
            _ => Rational(Repr::Big(BigRational::from_integer(BigInt::from(n)))),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => Rational(Repr::Small { num: -num, den: *den }),
            Repr::Big(r) => from_big(-r.clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $imp:expr) => {
        impl $Trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $imp(self, rhs)
            }
        }
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $imp(&self, &rhs)
            }
        }
        impl $Trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $imp(&self, rhs)
            }
        }
        impl $Trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $imp(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, |a: &Rational, b: &Rational| add_impl(a, &-b));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = add_impl(self, rhs);
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = add_impl(self, &rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = add_impl(self, &-rhs);
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = mul_impl(self, rhs);
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
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
            (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
                (*an as i128 * *bd as i128).cmp(&(*bn as i128 * *ad as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
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

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `"p"` or `"p/q"` with an optional leading minus on `p`.
    /// Decimal points, exponents, whitespace and signs on `q` are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseRationalError { literal: s.to_string(), reason };
        let (num_part, den_part) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let unsigned = num_part.strip_prefix('-').unwrap_or(num_part);
        if !is_digits(unsigned) {
            if s.contains('.') || s.contains('e') || s.contains('E') {
                return Err(err("floating-point literals are not accepted"));
            }
            return Err(err("numerator must be an integer"));
        }
        let num: BigInt = num_part.parse().map_err(|_| err("numerator must be an integer"))?;
        let den: BigInt = match den_part {
            None => BigInt::one(),
            Some(d) if is_digits(d) => d.parse().map_err(|_| err("denominator must be a positive integer"))?,
            Some(_) => return Err(err("denominator must be a positive integer")),
        };
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        Ok(Rational::from_bigs(num, den))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a string holding an exact rational such as \"3\" or \"-1/2\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
                Err(E::custom(format!("floating-point literal {v} is not accepted; quote an exact rational")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Err(E::custom(format!("bare number {v} is not accepted; quote it as \"{v}\"")))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Err(E::custom(format!("bare number {v} is not accepted; quote it as \"{v}\"")))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(q("3/6").to_string(), "1/2");
        assert_eq!(q("-4/2").to_string(), "-2");
        assert_eq!(q("0/7"), Rational::zero());
        assert!("1.5".parse::<Rational>().is_err());
        assert!("1e3".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!(" 1".parse::<Rational>().is_err());
        assert!("+1".parse::<Rational>().is_err());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.to_string(), "85070591730234615847396907784232501249");
        let back = &sq / &big;
        assert_eq!(back, big);
        assert_eq!(back.to_i64(), Some(i64::MAX));
        let min = Rational::from_integer(i64::MIN);
        assert_eq!((-&min).to_string(), "9223372036854775808");
        assert_eq!(&min + &Rational::one(), Rational::from_integer(i64::MIN + 1));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        assert_eq!(q("1/2") - q("1/2"), Rational::zero());
        assert_eq!(q("2/3") * q("3/4"), q("1/2"));
        assert_eq!(q("2/3") / q("4/3"), q("1/2"));
        assert_eq!(q("-2/3").recip(), q("-3/2"));
        assert!(q("-1/2") < q("1/3"));
    }

    #[test]
    fn serde_rejects_numbers() {
        let r: Rational = serde_json::from_str("\"-7/21\"").unwrap();
        assert_eq!(r, q("-1/3"));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-1/3\"");
        assert!(serde_json::from_str::<Rational>("0.5").is_err());
        assert!(serde_json::from_str::<Rational>("2").is_err());
    }
}
