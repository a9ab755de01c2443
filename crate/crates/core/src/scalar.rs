//! Exact rational scalars.
//!
//! Every coordinate, coefficient and distance in the crate is a [`Scalar`]:
//! an arbitrary-precision rational. Comparisons are exact, so questions such
//! as "is this distance sum equal to the optimum" have a definite answer.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::Parse(format!("zero denominator in {numer}/{denom}")));
        }
        Ok(Scalar(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self, Error> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Scalar(BigRational::new(numer, denom)))
    }

    /// Exact value of a finite `f64` (every finite double is a dyadic rational).
    pub fn from_f64_exact(x: f64) -> Result<Self, Error> {
        BigRational::from_float(x)
            .map(Scalar)
            .ok_or_else(|| Error::NonFinite(x.to_string()))
    }

    /// `x` rounded half-away-from-zero to `digits` decimal places, as an exact rational.
    pub fn from_f64_rounded(x: f64, digits: u32) -> Result<Self, Error> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x.to_string()));
        }
        let exact = BigRational::from_float(x).expect("finite");
        let scale = BigRational::from_integer(BigInt::from(10u8).pow(digits));
        let scaled = (exact * &scale).round();
        Ok(Scalar(scaled / scale))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with at most `places` fractional digits (rounded).
    pub fn to_decimal_string(&self, places: u32) -> String {
        let scale = BigInt::from(10u8).pow(places);
        let scaled = (&self.0 * BigRational::from_integer(scale.clone())).round();
        let int = scaled.to_integer();
        let negative = int.is_negative();
        let digits = int.abs().to_string();
        let places = places as usize;
        let (whole, frac) = if places == 0 {
            (digits, String::new())
        } else if digits.len() > places {
            let (w, f) = digits.split_at(digits.len() - places);
            (w.to_string(), f.to_string())
        } else {
            ("0".to_string(), format!("{digits:0>places$}"))
        };
        let frac = frac.trim_end_matches('0');
        let sign = if negative { "-" } else { "" };
        if frac.is_empty() {
            format!("{sign}{whole}")
        } else {
            format!("{sign}{whole}.{frac}")
        }
    }
}

impl fmt::Display for Scalar {
    /// `p` for integers, `p/q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
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

    /// Accepts integers, decimals with optional exponent (`-1.25`, `3e-2`)
    /// and fractions `p/q` whose parts are themselves decimals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = parse_decimal(p.trim()).ok_or_else(|| Error::Parse(s.to_string()))?;
            let q = parse_decimal(q.trim()).ok_or_else(|| Error::Parse(s.to_string()))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            return Ok(Scalar(p / q));
        }
        parse_decimal(s)
            .map(Scalar)
            .ok_or_else(|| Error::Parse(s.to_string()))
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        return None;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(idx) => (&s[..idx], s[idx + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = if shift >= 0 {
        BigRational::from_integer(numer * ten.pow(shift as u32))
    } else {
        BigRational::new(numer, ten.pow(shift.unsigned_abs()))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar(BigRational::from_integer(v.into()))
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::from(v as i64)
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar(BigRational::from_integer(v))
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    #[test]
    fn parses_integers_decimals_and_fractions() {
        assert_eq!(s("3"), Scalar::from(3));
        assert_eq!(s("-644"), Scalar::from(-644));
        assert_eq!(s("3.3"), Scalar::from_ratio(33, 10).unwrap());
        assert_eq!(s("33/10"), Scalar::from_ratio(33, 10).unwrap());
        assert_eq!(s("-0.5"), Scalar::from_ratio(-1, 2).unwrap());
        assert_eq!(s(".25"), Scalar::from_ratio(1, 4).unwrap());
        assert_eq!(s("1e3"), Scalar::from(1000));
        assert_eq!(s("2.5E-1"), Scalar::from_ratio(1, 4).unwrap());
        assert_eq!(s("1.5/0.5"), Scalar::from(3));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "1/", "inf", "NaN"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad} parsed");
        }
    }

    #[test]
    fn display_round_trips() {
        for v in ["0", "-7", "33/10", "-1/3", "123456789012345678901234567890"] {
            assert_eq!(s(v).to_string(), v);
            assert_eq!(s(&s(v).to_string()), s(v));
        }
    }

    #[test]
    fn rounding_to_decimal_places() {
        let x = Scalar::from_f64_rounded(1.23456789, 3).unwrap();
        assert_eq!(x, Scalar::from_ratio(1235, 1000).unwrap());
        let y = Scalar::from_f64_rounded(-2.5, 0).unwrap();
        assert_eq!(y, Scalar::from(-3));
        assert!(Scalar::from_f64_rounded(f64::NAN, 3).is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(s("33/10").to_decimal_string(6), "3.3");
        assert_eq!(s("-1/3").to_decimal_string(4), "-0.3333");
        assert_eq!(s("2/3").to_decimal_string(2), "0.67");
        assert_eq!(s("-644").to_decimal_string(6), "-644");
        assert_eq!(s("1/200").to_decimal_string(3), "0.005");
    }
}
