//! Arbitrary-precision rational numbers with a `p/q` text form.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number.  Always stored reduced with a positive
/// denominator; the text form is the reduced `p/q` string, so `1/2`, `0/1`
/// and `-3/4` are canonical spellings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    /// `j / 2^level`.
    pub fn dyadic(j: u64, level: u32) -> Rat {
        Rat(BigRational::new(
            BigInt::from(j),
            BigInt::from(BigUint::one() << level),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Largest integer `<= self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// The denominator as `u64` when it fits.
    pub fn denom_u64(&self) -> Option<u64> {
        self.0.denom().to_u64()
    }

    /// The value as `u64` when it is a non-negative integer that fits.
    pub fn to_u64(&self) -> Option<u64> {
        if !self.0.is_integer() {
            return None;
        }
        self.0.numer().to_u64()
    }

    /// Exact division by a positive integer.
    pub fn div_int(&self, n: u64) -> Rat {
        assert!(n != 0);
        Rat(&self.0 / BigRational::from_integer(BigInt::from(n)))
    }

    pub fn mul_int(&self, n: u64) -> Rat {
        Rat(&self.0 * BigRational::from_integer(BigInt::from(n)))
    }

    /// When the denominator is a power of two, returns the exponent.
    pub fn dyadic_level(&self) -> Option<u32> {
        let den = self.0.denom().magnitude().clone();
        let bits = den.bits();
        if den == BigUint::one() << (bits - 1) {
            Some((bits - 1) as u32)
        } else {
            None
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Error from parsing a `p/q` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseRatError(pub String);

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational: {}", self.0)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `p/q` or a bare integer `p`.  The denominator must be
    /// positive and the fraction need not be reduced; the stored value
    /// always is.
    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        use alloc::string::ToString;
        let s = s.trim();
        let (np, dp) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num: BigInt = np
            .parse()
            .map_err(|_| ParseRatError(s.to_string()))?;
        let den: BigInt = match dp {
            Some(d) => d.parse().map_err(|_| ParseRatError(s.to_string()))?,
            None => BigInt::one(),
        };
        if den <= BigInt::zero() {
            return Err(ParseRatError(s.to_string()));
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl Rat {
    /// Parses the strict canonical form: reduced, positive denominator,
    /// spelled `p/q`.  Used by file-format readers that must reject
    /// non-canonical input.
    pub fn parse_canonical(s: &str) -> Result<Rat, ParseRatError> {
        let r: Rat = s.parse()?;
        if alloc::format!("{}", r) != s {
            return Err(ParseRatError(alloc::format!(
                "{} is not in reduced p/q form",
                s
            )));
        }
        Ok(r)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl<'a> Neg for &'a Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(r("2/4"), Rat::new(1, 2));
        assert_eq!(r("2/4").to_string(), "1/2");
        assert_eq!(r("0/7").to_string(), "0/1");
        assert_eq!(r("3").to_string(), "3/1");
        assert_eq!(r("-6/4").to_string(), "-3/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("1/0".parse::<Rat>().is_err());
        assert!("1/-2".parse::<Rat>().is_err());
        assert!("a/2".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
    }

    #[test]
    fn canonical_parse_is_strict() {
        assert!(Rat::parse_canonical("1/2").is_ok());
        assert!(Rat::parse_canonical("2/4").is_err());
        assert!(Rat::parse_canonical("1").is_err());
        assert!(Rat::parse_canonical(" 1/2").is_err());
    }

    #[test]
    fn arithmetic_and_order() {
        assert_eq!(Rat::new(1, 3) + Rat::new(1, 6), Rat::new(1, 2));
        assert_eq!(Rat::new(1, 2) - Rat::new(3, 4), Rat::new(-1, 4));
        assert_eq!(Rat::new(2, 3) * Rat::new(3, 4), Rat::new(1, 2));
        assert_eq!(Rat::new(1, 2) / Rat::new(1, 4), Rat::from_int(2));
        assert!(Rat::new(1, 3) < Rat::new(1, 2));
        assert_eq!(Rat::dyadic(3, 2), Rat::new(3, 4));
    }

    #[test]
    fn dyadic_level_detection() {
        assert_eq!(Rat::new(3, 8).dyadic_level(), Some(3));
        assert_eq!(Rat::from_int(1).dyadic_level(), Some(0));
        assert_eq!(Rat::new(1, 6).dyadic_level(), None);
    }

    #[test]
    fn floor_and_div() {
        assert_eq!(Rat::new(7, 2).floor_int(), 3.into());
        assert_eq!(Rat::new(-1, 2).floor_int(), (-1).into());
        assert_eq!(Rat::new(1, 2).div_int(3), Rat::new(1, 6));
    }
}
