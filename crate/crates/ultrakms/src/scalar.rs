//! Dual-mode arithmetic: exact rationals whenever possible, `f64` otherwise.
//!
//! Every quantity in the library (weights, measure values, state values) is a
//! [`Scalar`]. Arithmetic stays exact as long as both operands are exact;
//! mixing an exact value with a float, or applying an operation with no
//! rational result (non-integer powers), demotes to `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => *f,
        }
    }

    /// Exact integer value, if this is an exact rational with denominator 1.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Exact(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(f) => Scalar::Float(f.abs()),
        }
    }

    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                assert!(!r.is_zero(), "division by zero");
                Scalar::Exact(r.recip())
            }
            Scalar::Float(f) => Scalar::Float(1.0 / f),
        }
    }

    /// `self^exp` for an integer exponent. Exact stays exact.
    pub fn powi(&self, exp: i64) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                if exp >= 0 {
                    Scalar::Exact(r.pow(exp as i32))
                } else {
                    assert!(!r.is_zero(), "zero to a negative power");
                    Scalar::Exact(r.pow(exp as i32))
                }
            }
            Scalar::Float(f) => Scalar::Float(f.powi(exp as i32)),
        }
    }

    /// `self^exp` for a scalar exponent. Stays exact only when `exp` is an
    /// exact integer that fits in an `i64`.
    pub fn pow(&self, exp: &Scalar) -> Scalar {
        if let Some(n) = exp.as_integer() {
            if let Some(n) = n.to_i64() {
                return self.powi(n);
            }
        }
        Scalar::Float(self.to_f64().powf(exp.to_f64()))
    }

    /// |self - other| <= tol, exact comparison when both sides are exact and
    /// tol is zero.
    pub fn close_to(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) if tol == 0.0 => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.$method(b)),
                    _ => Scalar::Float(self.to_f64().$method(rhs.to_f64())),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);
scalar_binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

/// Rationals print as `p/q` (integers without the `/q`); floats print with 12
/// significant digits so reports are diffable.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.to_integer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(x) => write!(f, "{}", format_sig(*x, 12)),
        }
    }
}

pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0.000000000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let dec = (digits as i32 - 1 - mag).max(0) as usize;
    format!("{x:.dec$}")
}

#[derive(Debug, thiserror::Error)]
#[error("cannot parse number `{0}`")]
pub struct ParseScalarError(String);

/// Accepts `p/q`, integers, and finite decimals (parsed exactly).
impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| ParseScalarError(s.into()))?;
            let q: BigInt = q.trim().parse().map_err(|_| ParseScalarError(s.into()))?;
            if q.is_zero() {
                return Err(ParseScalarError(s.into()));
            }
            return Ok(Scalar::Exact(BigRational::new(p, q)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int: BigInt = if int.is_empty() || int == "-" {
                BigInt::zero()
            } else {
                int.parse().map_err(|_| ParseScalarError(s.into()))?
            };
            if !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(ParseScalarError(s.into()));
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_int: BigInt = if frac.is_empty() {
                BigInt::zero()
            } else {
                frac.parse().map_err(|_| ParseScalarError(s.into()))?
            };
            let signed_frac = if neg { -frac_int } else { frac_int };
            return Ok(Scalar::Exact(BigRational::new(
                int * &scale + signed_frac,
                scale,
            )));
        }
        if let Ok(n) = s.parse::<BigInt>() {
            return Ok(Scalar::Exact(BigRational::from_integer(n)));
        }
        Err(ParseScalarError(s.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        let sum = &a + &b;
        assert!(sum.is_exact());
        assert_eq!(sum, Scalar::ratio(1, 2));
    }

    #[test]
    fn float_contaminates() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::Float(0.5);
        assert!(!(&a * &b).is_exact());
    }

    #[test]
    fn integer_power_exact() {
        let two = Scalar::from_int(2);
        assert_eq!(two.pow(&Scalar::from_int(-2)), Scalar::ratio(1, 4));
        assert!(!two.pow(&Scalar::ratio(1, 2)).is_exact());
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/4".parse::<Scalar>().unwrap(), Scalar::ratio(3, 4));
        assert_eq!("0.25".parse::<Scalar>().unwrap(), Scalar::ratio(1, 4));
        assert_eq!("-1.5".parse::<Scalar>().unwrap(), Scalar::ratio(-3, 2));
        assert_eq!("7".parse::<Scalar>().unwrap(), Scalar::from_int(7));
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(Scalar::ratio(3, 4).to_string(), "3/4");
        assert_eq!(Scalar::from_int(5).to_string(), "5");
        assert_eq!(Scalar::Float(0.5).to_string(), "0.500000000000");
    }
}
