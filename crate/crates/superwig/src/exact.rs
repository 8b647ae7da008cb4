//! Exact scalar arithmetic.
//!
//! Every number produced by this crate is exact.  Two scalar types cover all
//! needs:
//!
//! * [`Rational`] — an arbitrary-precision rational number.  It is a thin
//!   newtype over [`num_rational::BigRational`] with a canonical textual form
//!   `"p/q"` (always reduced, denominator always positive and always printed,
//!   so `2` renders as `"2/1"`).  Serde serializes it as that string.
//! * [`CoefficientValue`] — a value of the form `sign · sqrt(radicand)` with
//!   `sign ∈ {-1, 0, +1}` and a rational radicand.  Wigner coefficients are
//!   square roots of rationals up to sign, and this type represents them
//!   exactly without ever introducing floating point.  No radical
//!   simplification is performed: the radicand is kept as the exact rational
//!   it was built from (only reduced as a fraction).  Equality of two
//!   `CoefficientValue`s is therefore structural *and* semantic: for
//!   `sign·sqrt(r)` with reduced `r` the representation is canonical.
//!
//! A negative radicand is permitted (it encodes a formally imaginary
//! coefficient, which arises for non-unitarizable representations); the
//! invariant maintained at all times is `sign == 0 ⇔ radicand == 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// An arbitrary-precision rational number with canonical `"p/q"` rendering.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Build `num / den`.  Panics if `den == 0`.
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    /// The integer `n` as a rational.
    pub fn from_int<N: Into<BigInt>>(n: N) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// `0/1`.
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    /// `1/1`.
    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// `-1`, `0` or `+1` as an `i8`.
    pub fn signum(&self) -> i8 {
        match self.0.cmp(&BigRational::zero()) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` when `self` is zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Numerator of the reduced fraction (sign lives here).
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator of the reduced fraction (always positive).
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// `self * self`.
    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    /// Integer power with negative exponents allowed.  Panics on `0^-k`.
    pub fn pow(&self, exp: i32) -> Self {
        if exp >= 0 {
            Rational(self.0.pow(exp))
        } else {
            Rational(
                self.inverse()
                    .expect("zero has no negative powers")
                    .0
                    .pow(-exp),
            )
        }
    }

    /// Access the underlying `BigRational`.
    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Rational {
    fn mul_assign(&mut self, rhs: Rational) {
        self.0 *= rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

impl fmt::Display for Rational {
    /// Canonical form `p/q`: reduced, `q > 0`, denominator always printed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Error from parsing a [`Rational`] out of text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {text:?}: expected `p` or `p/q` with integer p, q and q != 0")]
pub struct ParseRationalError {
    text: String,
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRationalError {
            text: s.to_string(),
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((num, den)) => {
                let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::new(num, den))
            }
            None => {
                let num = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(Rational::from_int(num))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rational::from_str(&s).map_err(D::Error::custom)
    }
}

/// An exact coefficient `sign · sqrt(radicand)`.
///
/// * `sign ∈ {-1, 0, +1}`, `radicand` an exact [`Rational`];
/// * invariant: `sign == 0` if and only if `radicand == 0`;
/// * the radicand may be negative (formally imaginary value); the square of
///   the coefficient is then that negative rational;
/// * no radical simplification is performed — products simply multiply
///   radicands, so `sqrt(2)·sqrt(2)` is stored as `+sqrt(4/1)`, which equals
///   `2` as a value and compares equal to `CoefficientValue::from_rational(2)`.
///
/// Serialization is a two-field JSON object in fixed order:
/// `{"sign": -1|0|1, "radicand": "p/q"}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoefficientValue {
    sign: i8,
    radicand: Rational,
}

impl CoefficientValue {
    /// The zero coefficient.
    pub fn zero() -> Self {
        CoefficientValue {
            sign: 0,
            radicand: Rational::zero(),
        }
    }

    /// The coefficient `+1`.
    pub fn one() -> Self {
        CoefficientValue {
            sign: 1,
            radicand: Rational::one(),
        }
    }

    /// The positive square root `+sqrt(radicand)`; zero when the radicand is
    /// zero.  A negative radicand yields the formal value `+sqrt(r)` with
    /// `r < 0`.
    pub fn sqrt(radicand: Rational) -> Self {
        Self::with_sign(1, radicand)
    }

    /// `sign · sqrt(radicand)`, normalizing the invariant: a zero radicand
    /// forces sign `0`, and a zero sign forces radicand `0`.
    pub fn with_sign(sign: i8, radicand: Rational) -> Self {
        assert!(matches!(sign, -1 | 0 | 1), "sign must be -1, 0 or 1");
        if sign == 0 || radicand.is_zero() {
            Self::zero()
        } else {
            CoefficientValue { sign, radicand }
        }
    }

    /// Embed an exact rational `q` as the coefficient with value `q`
    /// (i.e. `sign(q) · sqrt(q²)`).
    pub fn from_rational(q: Rational) -> Self {
        Self::with_sign(q.signum(), q.square())
    }

    /// The quotient `q / sqrt(normsq)` as an exact coefficient:
    /// `sign(q)·sign(normsq)... ` — concretely `sign(q) · sqrt(q² / normsq)`.
    /// Panics when `normsq` is zero.
    pub fn rational_over_sqrt(q: Rational, normsq: Rational) -> Self {
        assert!(!normsq.is_zero(), "vanishing norm square");
        Self::with_sign(q.signum(), q.square() / normsq)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The exact square of the value (equals the radicand, by the invariant).
    pub fn square(&self) -> Rational {
        self.radicand.clone()
    }

    /// Flip the sign.
    pub fn negate(&self) -> Self {
        CoefficientValue {
            sign: -self.sign,
            radicand: self.radicand.clone(),
        }
    }

    /// Multiply by `-1` raised to `exponent`.
    pub fn mul_sign_power(&self, exponent: u32) -> Self {
        if exponent % 2 == 0 {
            self.clone()
        } else {
            self.negate()
        }
    }

    /// Exact product: signs multiply, radicands multiply.
    pub fn mul(&self, other: &Self) -> Self {
        Self::with_sign(self.sign * other.sign, &self.radicand * &other.radicand)
    }

    /// Exact quotient; `None` when `other` is zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        Some(Self::with_sign(
            self.sign * other.sign,
            &self.radicand / &other.radicand,
        ))
    }

    /// True when the value is a real number `>= 0` (sign `+` or zero) —
    /// meaningful only for non-negative radicands.
    pub fn is_nonnegative_real(&self) -> bool {
        !self.radicand.is_negative() && self.sign >= 0
    }
}

impl fmt::Display for CoefficientValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "sqrt({})", self.radicand),
            _ => write!(f, "-sqrt({})", self.radicand),
        }
    }
}

impl fmt::Debug for CoefficientValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Product for CoefficientValue {
    fn product<I: Iterator<Item = CoefficientValue>>(iter: I) -> CoefficientValue {
        iter.fold(CoefficientValue::one(), |a, b| a.mul(&b))
    }
}

/// Convenience: build a `Rational` from an `i64` pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_display_always_shows_denominator() {
        assert_eq!(rat(1, 2).to_string(), "1/2");
        assert_eq!(rat(2, 1).to_string(), "2/1");
        assert_eq!(rat(-4, 6).to_string(), "-2/3");
        assert_eq!(Rational::zero().to_string(), "0/1");
        assert_eq!(rat(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn rational_parse_round_trip() {
        for text in ["1/2", "-7/3", "0/1", "5/1", "123456789123456789/2"] {
            let r: Rational = text.parse().unwrap();
            assert_eq!(r.to_string(), text);
        }
        let bare: Rational = "17".parse().unwrap();
        assert_eq!(bare, rat(17, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
    }

    #[test]
    fn rational_serde_as_string() {
        let r = rat(-5, 8);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "\"-5/8\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rational_arithmetic() {
        let a = rat(1, 2);
        let b = rat(1, 3);
        assert_eq!(&a + &b, rat(5, 6));
        assert_eq!(&a - &b, rat(1, 6));
        assert_eq!(&a * &b, rat(1, 6));
        assert_eq!(&a / &b, rat(3, 2));
        assert_eq!(a.pow(-2), rat(4, 1));
        assert_eq!(rat(-2, 3).signum(), -1);
        assert_eq!(Rational::zero().signum(), 0);
        assert_eq!(rat(-2, 3).abs(), rat(2, 3));
        assert!(Rational::zero().inverse().is_none());
    }

    #[test]
    fn coefficient_invariant_and_serde() {
        let c = CoefficientValue::sqrt(rat(1, 2));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            "{\"sign\":1,\"radicand\":\"1/2\"}"
        );
        let z = CoefficientValue::with_sign(1, Rational::zero());
        assert!(z.is_zero());
        assert_eq!(z.sign(), 0);
        assert_eq!(
            serde_json::to_string(&z).unwrap(),
            "{\"sign\":0,\"radicand\":\"0/1\"}"
        );
        let back: CoefficientValue = serde_json::from_str("{\"sign\":-1,\"radicand\":\"3/4\"}").unwrap();
        assert_eq!(back, CoefficientValue::with_sign(-1, rat(3, 4)));
    }

    #[test]
    fn coefficient_products_do_not_simplify_radicals() {
        let s = CoefficientValue::sqrt(rat(2, 1));
        let p = s.mul(&s);
        // sqrt(2)·sqrt(2) is stored with radicand 4, the canonical encoding of 2.
        assert_eq!(p, CoefficientValue::from_rational(rat(2, 1)));
        assert_eq!(p.radicand(), &rat(4, 1));
    }

    #[test]
    fn coefficient_negative_radicand() {
        // A formally imaginary value: +sqrt(-1); its square is -1.
        let c = CoefficientValue::sqrt(rat(-1, 1));
        assert_eq!(c.square(), rat(-1, 1));
        assert!(!c.is_zero());
        let d = c.mul(&c);
        assert_eq!(d, CoefficientValue::with_sign(1, rat(1, 1)));
    }

    #[test]
    fn coefficient_division() {
        let a = CoefficientValue::with_sign(-1, rat(3, 2));
        let b = CoefficientValue::sqrt(rat(1, 2));
        let q = a.div(&b).unwrap();
        assert_eq!(q, CoefficientValue::with_sign(-1, rat(3, 1)));
        assert!(a.div(&CoefficientValue::zero()).is_none());
    }

    #[test]
    fn rational_embedding_is_canonical() {
        // 1/2 embeds as +sqrt(1/4); the same object arises from sqrt(1/4).
        assert_eq!(
            CoefficientValue::from_rational(rat(1, 2)),
            CoefficientValue::sqrt(rat(1, 4))
        );
        assert_eq!(
            CoefficientValue::rational_over_sqrt(rat(-1, 1), rat(2, 1)),
            CoefficientValue::with_sign(-1, rat(1, 2))
        );
    }
}
