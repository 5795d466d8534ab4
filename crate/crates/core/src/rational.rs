//! Arbitrary-precision rational numbers, the value type for every exact
//! probability and moment in this crate.
//!
//! `ExactRational` wraps [`num_rational::BigRational`] and guarantees the
//! canonical form (positive denominator, fully reduced) after every
//! operation. Values render as `p/q` decimal strings (`p` alone when the
//! denominator is one) and parse back losslessly; serde uses the same
//! string form so JSON stays exact regardless of magnitude.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("invalid rational literal `{0}`")]
    Parse(String),
}

/// An exact rational in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, RationalError> {
        if denom.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Self(BigRational::new(numer, denom)))
    }

    /// Construct from parts already known to be coprime with a positive
    /// denominator, skipping the (potentially expensive) reduction.
    ///
    /// Debug builds verify the claim on small inputs.
    pub(crate) fn from_coprime_parts(numer: BigInt, denom: BigInt) -> Self {
        debug_assert!(denom.is_positive());
        debug_assert!(
            denom.bits() > 4096
                || numer.bits() > 4096
                || num_integer::Integer::gcd(&numer, &denom).is_one()
        );
        Self(BigRational::new_raw(numer, denom))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn recip(&self) -> Result<Self, RationalError> {
        if self.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(self.0.pow(exp as i32))
    }

    /// Nearest `f64`, correct to within a few ulps even when numerator and
    /// denominator are far outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        ratio_parts_to_f64(self.0.numer(), self.0.denom())
    }

    /// Largest `f64` that is `<=` the exact value.
    pub fn to_f64_floor(&self) -> f64 {
        parts_to_f64_floor(self.0.numer(), self.0.denom())
    }

    /// Smallest `f64` that is `>=` the exact value.
    pub fn to_f64_ceil(&self) -> f64 {
        parts_to_f64_ceil(self.0.numer(), self.0.denom())
    }

    /// Exact dyadic representation of a finite `f64`.
    pub fn from_f64_exact(f: f64) -> Option<Self> {
        BigRational::from_float(f).map(Self)
    }
}

/// Compare a finite `f64` against `num/den` (`den > 0`) without rounding.
fn cmp_f64_parts(f: f64, num: &BigInt, den: &BigInt) -> Ordering {
    debug_assert!(den.is_positive());
    let dy = BigRational::from_float(f).expect("finite float");
    // Cross-multiply so huge operands cost one big-by-small multiply.
    let lhs = dy.numer() * den;
    let rhs = num * dy.denom();
    lhs.cmp(&rhs)
}

/// Largest `f64` `<=` `num/den` exactly; operands may be unreduced and far
/// outside the float range.
pub(crate) fn parts_to_f64_floor(num: &BigInt, den: &BigInt) -> f64 {
    let mut f = ratio_parts_to_f64(num, den);
    if !f.is_finite() {
        return if f == f64::INFINITY { f64::MAX } else { f };
    }
    while cmp_f64_parts(f, num, den) == Ordering::Greater {
        f = next_down(f);
    }
    // ratio_parts_to_f64 is accurate to a few ulps, so step back up while
    // the next float is still not above the exact value.
    while cmp_f64_parts(next_up(f), num, den) != Ordering::Greater {
        f = next_up(f);
    }
    f
}

/// Smallest `f64` `>=` `num/den` exactly.
pub(crate) fn parts_to_f64_ceil(num: &BigInt, den: &BigInt) -> f64 {
    let mut f = ratio_parts_to_f64(num, den);
    if !f.is_finite() {
        return if f == f64::NEG_INFINITY { f64::MIN } else { f };
    }
    while cmp_f64_parts(f, num, den) == Ordering::Less {
        f = next_up(f);
    }
    while cmp_f64_parts(next_down(f), num, den) != Ordering::Less {
        f = next_down(f);
    }
    f
}

pub(crate) fn next_up(f: f64) -> f64 {
    if f.is_nan() || f == f64::INFINITY {
        return f;
    }
    if f == 0.0 {
        return f64::from_bits(1);
    }
    let bits = f.to_bits();
    if f > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

pub(crate) fn next_down(f: f64) -> f64 {
    -next_up(-f)
}

/// `f64` conversion that stays accurate for ratios whose parts overflow the
/// float range: both parts are truncated to their top 96 bits and the lost
/// scale is reapplied as a power of two.
fn ratio_parts_to_f64(numer: &BigInt, denom: &BigInt) -> f64 {
    debug_assert!(denom.is_positive());
    if numer.is_zero() {
        return 0.0;
    }
    let sign = if numer.is_negative() { -1.0 } else { 1.0 };
    let n = numer.abs();
    let nb = n.bits() as i64;
    let db = denom.bits() as i64;

    const KEEP: i64 = 96;
    let n_shift = (nb - KEEP).max(0);
    let d_shift = (db - KEEP).max(0);
    let n_hi = (&n >> n_shift as u64).to_f64().unwrap_or(f64::INFINITY);
    let d_hi = (denom >> d_shift as u64).to_f64().unwrap_or(f64::INFINITY);

    let exp = n_shift - d_shift;
    if exp > 2000 {
        return sign * f64::INFINITY;
    }
    if exp < -2000 {
        return sign * 0.0;
    }
    sign * libm_ldexp(n_hi / d_hi, exp as i32)
}

fn libm_ldexp(x: f64, exp: i32) -> f64 {
    // Split the scaling so intermediate powers of two stay normal.
    if exp.abs() <= 1000 {
        x * (exp as f64).exp2()
    } else {
        let half = exp / 2;
        x * (half as f64).exp2() * ((exp - half) as f64).exp2()
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Debug mirrors Display; a reduced `p/q` is already the full state.
impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for ExactRational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt, RationalError> {
            t.parse::<BigInt>()
                .map_err(|_| RationalError::Parse(s.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Self(BigRational::from_integer(parse_int(s)?))),
            Some((p, q)) => {
                let denom = parse_int(q)?;
                if denom.is_zero() {
                    return Err(RationalError::ZeroDenominator);
                }
                Ok(Self(BigRational::new(parse_int(p)?, denom)))
            }
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! impl_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for ExactRational {
            fn from(v: $t) -> Self {
                Self(BigRational::from_integer(BigInt::from(v)))
            }
        }
    )*};
}
impl_from_int!(u8, u16, u32, u64, u128, i8, i16, i32, i64, i128);

impl From<BigInt> for ExactRational {
    fn from(v: BigInt) -> Self {
        Self(BigRational::from_integer(v))
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((self.0).$method(rhs.0))
            }
        }
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl AddAssign<&ExactRational> for ExactRational {
    fn add_assign(&mut self, rhs: &ExactRational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for ExactRational {
    fn add_assign(&mut self, rhs: ExactRational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&ExactRational> for ExactRational {
    fn sub_assign(&mut self, rhs: &ExactRational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactRational> for ExactRational {
    fn mul_assign(&mut self, rhs: &ExactRational) {
        self.0 *= &rhs.0;
    }
}

impl MulAssign for ExactRational {
    fn mul_assign(&mut self, rhs: ExactRational) {
        self.0 *= rhs.0;
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_after_construction() {
        let r = ExactRational::new(BigInt::from(6), BigInt::from(-9)).unwrap();
        assert_eq!(r.to_string(), "-2/3");
        assert!(r.denom().is_positive());
    }

    #[test]
    fn string_round_trip() {
        for s in ["0", "1", "-7", "2/3", "-355/113", "1000000001"] {
            assert_eq!(q(s).to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<ExactRational>().is_err());
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("a/b".parse::<ExactRational>().is_err());
        assert!("1/2/3".parse::<ExactRational>().is_err());
    }

    #[test]
    fn arithmetic_reduces() {
        let x = q("1/6") + q("1/3");
        assert_eq!(x, q("1/2"));
        let y = q("2/3") * q("9/4");
        assert_eq!(y, q("3/2"));
        let z = q("1/2") - q("1/2");
        assert!(z.is_zero());
    }

    #[test]
    fn to_f64_small() {
        assert_eq!(q("1/2").to_f64(), 0.5);
        assert_eq!(q("-3/4").to_f64(), -0.75);
        assert!((q("1/3").to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn to_f64_huge_parts() {
        // (2^400 + 1) / 2^401 is ~0.5 but both parts overflow f64.
        let n = (BigInt::from(1) << 400) + 1;
        let d = BigInt::from(1) << 401;
        let r = ExactRational::new(n, d).unwrap();
        assert!((r.to_f64() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn directed_rounding_brackets_value() {
        for s in ["1/3", "2/3", "-1/3", "355/113", "693147/1000000"] {
            let r = q(s);
            let lo = r.to_f64_floor();
            let hi = r.to_f64_ceil();
            assert!(lo <= hi);
            assert!(cmp_f64_parts(lo, r.numer(), r.denom()) != Ordering::Greater, "{s}");
            assert!(cmp_f64_parts(hi, r.numer(), r.denom()) != Ordering::Less, "{s}");
            assert!(hi - lo <= f64::EPSILON * r.to_f64().abs().max(1.0));
        }
        // Exactly representable values floor/ceil to themselves.
        assert_eq!(q("3/4").to_f64_floor(), 0.75);
        assert_eq!(q("3/4").to_f64_ceil(), 0.75);
    }

    #[test]
    fn serde_json_as_string() {
        let r = q("22/7");
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(js, "\"22/7\"");
        let back: ExactRational = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
    }
}
