//! Exact rational scalars.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// Panics if `den` is zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Scalar(BigRational::new(num, den))
    }

    /// Exact binary value of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Scalar)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Scalar(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar(r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts `p`, `-p`, `p/q`, `-p/q` with `q > 0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let ok = |x: &str| {
            let digits = x.strip_prefix('-').unwrap_or(x);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !ok(num) || !ok(den) || den.starts_with('-') {
            return Err(err());
        }
        let n: BigInt = num.parse().map_err(|_| err())?;
        let d: BigInt = den.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Scalar(BigRational::new(n, d)))
    }
}

/// Canonical `num/den` rendering; integers keep the `/1`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(Scalar::from_int(n)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
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

impl AddAssign<Scalar> for Scalar {
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

    #[test]
    fn lowest_terms() {
        let x = Scalar::ratio(6, -4);
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(Scalar::zero().to_string(), "0/1");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3".parse::<Scalar>().unwrap(), Scalar::from_int(3));
        assert_eq!("-2/4".parse::<Scalar>().unwrap(), Scalar::ratio(-1, 2));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1/-2".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
    }

    #[test]
    fn serde_accepts_int_and_string() {
        let v: Vec<Scalar> = serde_json::from_str(r#"[3, "1/2"]"#).unwrap();
        assert_eq!(v, vec![Scalar::from_int(3), Scalar::ratio(1, 2)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["3/1","1/2"]"#);
    }
}
