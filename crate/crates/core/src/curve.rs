//! The hyperelliptic curve `y² = x^(2g+1) + p₁x^(2g) + … + p_(2g+1)` near `x = ∞`.

use alloc::vec::Vec;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exact::Rational;
use num_traits::Zero;
use crate::laurent::{series_inverse, series_mul, series_sqrt_unit, LaurentSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    pub genus: usize,
    /// `p₁ … p_(2g+1)`.
    pub p: Vec<Rational>,
}

impl CurveSpec {
    pub fn new(genus: usize, p: Vec<Rational>) -> Result<CurveSpec> {
        if genus < 1 {
            return Err(Error::UnsupportedGenus(genus));
        }
        if p.len() != 2 * genus + 1 {
            return Err(Error::InvalidInput("curve needs 2g+1 coefficients"));
        }
        Ok(CurveSpec { genus, p })
    }

    /// All `p_i = 0`.
    pub fn bare(genus: usize) -> CurveSpec {
        CurveSpec { genus, p: (0..2 * genus + 1).map(|_| Rational::zero()).collect() }
    }

    pub fn degree(&self) -> usize {
        2 * self.genus + 1
    }

    /// `P(x)`.
    pub fn eval<C: Coeff>(&self, x: &C) -> C {
        let mut acc = C::one();
        for p in &self.p {
            acc = acc * x + &C::from_rational(p);
        }
        acc
    }

    /// `P'(x)`.
    pub fn eval_derivative<C: Coeff>(&self, x: &C) -> C {
        let n = self.degree();
        let mut acc = C::from_i64(n as i64);
        for (i, p) in self.p.iter().enumerate().take(n - 1) {
            let c = Rational::from_integer(((n - 1 - i) as i64).into()) * p;
            acc = acc * x + &C::from_rational(&c);
        }
        acc
    }

    pub fn p_coeffs<C: Coeff>(&self) -> Vec<C> {
        self.p.iter().map(C::from_rational).collect()
    }
}

/// `b² − P(a)`.
pub fn on_curve_defect<C: Coeff>(c: &CurveSpec, a: &C, b: &C) -> C {
    b.clone() * b - &c.eval(a)
}

/// `y = z^-(2g+1) √(1 + p₁z² + … + p_(2g+1) z^(4g+2))`, known through `z^(−(2g+1)+order)`.
pub fn y_series<C: Coeff>(genus: usize, p: &[C], order: u32) -> Result<LaurentSeries<C>> {
    let mut u: Vec<C> = Vec::with_capacity(2 * p.len() + 1);
    u.push(C::one());
    for c in p {
        u.push(C::zero());
        u.push(c.clone());
    }
    let unit = LaurentSeries::new(0, u, order as i32);
    Ok(series_sqrt_unit(&unit)?.shift(-(2 * genus as i32 + 1)))
}

/// `dx/y = (−1/z³)(1/y)`, starting at `z^(2g−2)` and known to the same relative order.
pub fn weight_series<C: Coeff>(genus: usize, p: &[C], order: u32) -> Result<LaurentSeries<C>> {
    let y = y_series(genus, p, order)?;
    let inv = series_inverse(&y)?;
    series_mul(&LaurentSeries::monomial(-C::one(), -3), &inv)
}

/// `y_series` for a concrete curve.
pub fn curve_y_series<C: Coeff>(c: &CurveSpec, order: u32) -> Result<LaurentSeries<C>> {
    y_series(c.genus, &c.p_coeffs::<C>(), order)
}

pub fn curve_weight_series<C: Coeff>(c: &CurveSpec, order: u32) -> Result<LaurentSeries<C>> {
    weight_series(c.genus, &c.p_coeffs::<C>(), order)
}
