//! Exact nonnegative rational amounts.
//!
//! Every capital value and every betting coefficient is a `Capital`.
//! Arithmetic never rounds. The serialized form is `numerator/denominator`
//! in decimal, always in lowest terms with a positive denominator.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CapitalError {
    #[error("capital must be nonnegative, got {0}")]
    Negative(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational {0:?}")]
    Malformed(String),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Capital(BigRational);

impl Capital {
    pub fn zero() -> Self {
        Capital(BigRational::zero())
    }

    pub fn one() -> Self {
        Capital(BigRational::one())
    }

    pub fn from_integer(n: u64) -> Self {
        Capital(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Capital(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `2^k`.
    pub fn pow2(k: usize) -> Self {
        Capital(BigRational::from_integer(BigInt::one() << k))
    }

    pub fn try_from_rational(r: BigRational) -> Result<Self, CapitalError> {
        if r.is_negative() {
            Err(CapitalError::Negative(r.to_string()))
        } else {
            Ok(Capital(r))
        }
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
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

    /// `self - rhs`, or `None` if the result would be negative.
    pub fn checked_sub(&self, rhs: &Capital) -> Option<Capital> {
        let d = &self.0 - &rhs.0;
        if d.is_negative() {
            None
        } else {
            Some(Capital(d))
        }
    }

    /// Division by a strictly positive amount.
    pub fn div(&self, rhs: &Capital) -> Capital {
        assert!(!rhs.is_zero(), "division by zero capital");
        Capital(&self.0 / &rhs.0)
    }

    pub fn half(&self) -> Capital {
        self.div_pow2(1)
    }

    pub fn mul_pow2(&self, k: usize) -> Capital {
        Capital(&self.0 * BigRational::from_integer(BigInt::one() << k))
    }

    pub fn div_pow2(&self, k: usize) -> Capital {
        Capital(&self.0 / BigRational::from_integer(BigInt::one() << k))
    }

    pub fn max<'a>(&'a self, other: &'a Capital) -> &'a Capital {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Floor of the value as an unsigned integer.
    pub fn floor_uint(&self) -> BigUint {
        let (q, _) = self.0.numer().div_rem(self.0.denom());
        q.to_biguint().expect("nonnegative")
    }
}

impl fmt::Display for Capital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Capital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Capital {
    type Err = CapitalError;

    /// Accepts `n`, `n/d`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = n.trim().parse().map_err(|_| CapitalError::Malformed(s.to_string()))?;
        let den: BigInt = d.trim().parse().map_err(|_| CapitalError::Malformed(s.to_string()))?;
        if den.is_zero() {
            return Err(CapitalError::ZeroDenominator);
        }
        Capital::try_from_rational(BigRational::new(num, den))
    }
}

impl Add for Capital {
    type Output = Capital;
    fn add(self, rhs: Capital) -> Capital {
        Capital(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Capital> for &'a Capital {
    type Output = Capital;
    fn add(self, rhs: &'a Capital) -> Capital {
        Capital(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Capital> for Capital {
    fn add_assign(&mut self, rhs: &Capital) {
        self.0 += &rhs.0;
    }
}

impl Mul for Capital {
    type Output = Capital;
    fn mul(self, rhs: Capital) -> Capital {
        Capital(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Capital> for &'a Capital {
    type Output = Capital;
    fn mul(self, rhs: &'a Capital) -> Capital {
        Capital(&self.0 * &rhs.0)
    }
}

impl Sum for Capital {
    fn sum<I: Iterator<Item = Capital>>(iter: I) -> Capital {
        iter.fold(Capital::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Capital> for Capital {
    fn sum<I: Iterator<Item = &'a Capital>>(iter: I) -> Capital {
        iter.fold(Capital::zero(), |a, b| &a + b)
    }
}

/// Parse a capital literal, panicking on malformed input.
pub fn cap(s: &str) -> Capital {
    s.parse().expect("valid capital literal")
}
