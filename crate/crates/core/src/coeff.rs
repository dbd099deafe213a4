//! The arithmetic interface shared by every coefficient type in the engine.

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// A commutative ring with partial inversion.
///
/// Implemented by exact rationals, jets, ε-series scalars and complex floats, so
/// that series arithmetic, linear solves and the Lagrange formulas are written once.
pub trait Coeff:
    Clone
    + Debug
    + Zero
    + One
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    fn try_recip(&self) -> Result<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    /// Pivot preference for elimination: smaller is better, `None` is unusable.
    fn pivot_rank(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(0)
        }
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.clone() * &rhs.try_recip()?)
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Coeff for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn try_recip(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

impl Coeff for Complex64 {
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(crate::exact::to_f64(r), 0.0)
    }
    fn try_recip(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Complex64::new(1.0, 0.0) / self)
        }
    }
}
