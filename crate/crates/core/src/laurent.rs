//! Truncated Laurent series in the local parameter `z`.

use alloc::vec::Vec;
use core::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// `valid_up_to` of a series known to all orders (a Laurent polynomial).
pub const EXACT_Z: i32 = i32::MAX / 4;

/// Terms kept when an exact, non-monomial series is inverted.
pub const DEFAULT_INVERSE_TERMS: usize = 16;

fn sat(a: i32, b: i32) -> i32 {
    (a as i64 + b as i64).clamp(-(EXACT_Z as i64), EXACT_Z as i64) as i32
}

impl<C: Coeff> Default for LaurentSeries<C> {
    fn default() -> Self {
        Self::zero()
    }
}

/// `Σ coeffs[k] z^(min_exp+k)`, with every exponent up to `valid_up_to` known.
/// Stored coefficients stop at the last nonzero one.
#[derive(Clone, PartialEq)]
pub struct LaurentSeries<C> {
    min_exp: i32,
    coeffs: Vec<C>,
    valid_up_to: i32,
}

impl<C: Coeff> LaurentSeries<C> {
    pub fn new(min_exp: i32, coeffs: Vec<C>, valid_up_to: i32) -> Self {
        LaurentSeries { min_exp, coeffs, valid_up_to }.normalize()
    }

    pub fn polynomial(min_exp: i32, coeffs: Vec<C>) -> Self {
        Self::new(min_exp, coeffs, EXACT_Z)
    }

    pub fn monomial(c: C, exp: i32) -> Self {
        Self::polynomial(exp, alloc::vec![c])
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn zero() -> Self {
        LaurentSeries { min_exp: 0, coeffs: Vec::new(), valid_up_to: EXACT_Z }
    }

    pub fn min_exp(&self) -> i32 {
        self.min_exp
    }

    pub fn valid_up_to(&self) -> i32 {
        self.valid_up_to
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^e`; exponents past the window are reported as an error.
    pub fn coeff(&self, e: i32) -> Result<C> {
        if e > self.valid_up_to {
            return Err(Error::PrecisionExhausted);
        }
        if e < self.min_exp {
            return Ok(C::zero());
        }
        Ok(self.coeffs.get((e - self.min_exp) as usize).cloned().unwrap_or_else(C::zero))
    }

    fn ord(&self) -> i32 {
        if self.coeffs.is_empty() {
            sat(self.valid_up_to, 1)
        } else {
            self.min_exp
        }
    }

    fn normalize(mut self) -> Self {
        if self.valid_up_to < EXACT_Z {
            let keep = (self.valid_up_to as i64 - self.min_exp as i64 + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i32;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
        self
    }

    /// Drops everything above `z^valid`.
    pub fn truncate(&self, valid: i32) -> Self {
        Self::new(self.min_exp, self.coeffs.clone(), valid.min(self.valid_up_to))
    }

    pub fn shift(&self, k: i32) -> Self {
        LaurentSeries {
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
            valid_up_to: sat(self.valid_up_to, k),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.min_exp, self.coeffs.iter().map(|x| x.clone() * c).collect(), self.valid_up_to)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().cloned().map(|x| -x).collect(),
            valid_up_to: self.valid_up_to,
        }
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Self {
        let valid = self.valid_up_to.min(rhs.valid_up_to);
        if rhs.coeffs.is_empty() {
            return self.truncate(valid);
        }
        if self.coeffs.is_empty() {
            let r = if negate { rhs.neg() } else { rhs.clone() };
            return r.truncate(valid);
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = (self.min_exp + self.coeffs.len() as i32).max(rhs.min_exp + rhs.coeffs.len() as i32);
        let mut out: Vec<C> = (lo..hi).map(|_| C::zero()).collect();
        for (k, c) in self.coeffs.iter().enumerate() {
            out[(self.min_exp - lo) as usize + k] = c.clone();
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            let slot = &mut out[(rhs.min_exp - lo) as usize + k];
            let cur = core::mem::replace(slot, C::zero());
            *slot = if negate { cur - c } else { cur + c };
        }
        Self::new(lo, out, valid)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }
}

/// Exact convolution with `valid = min(a.valid + ord b, b.valid + ord a)`.
pub fn series_mul<C: Coeff>(a: &LaurentSeries<C>, b: &LaurentSeries<C>) -> Result<LaurentSeries<C>> {
    let valid = sat(a.valid_up_to, b.ord()).min(sat(b.valid_up_to, a.ord()));
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        return Ok(LaurentSeries { min_exp: 0, coeffs: Vec::new(), valid_up_to: valid });
    }
    let min_exp = a.min_exp + b.min_exp;
    if valid < min_exp {
        return Err(Error::PrecisionExhausted);
    }
    let full = a.coeffs.len() + b.coeffs.len() - 1;
    let len = if valid >= EXACT_Z { full } else { full.min((valid - min_exp + 1) as usize) };
    let mut out: Vec<C> = (0..len).map(|_| C::zero()).collect();
    for (i, x) in a.coeffs.iter().enumerate().take(len) {
        for (j, y) in b.coeffs.iter().enumerate() {
            if i + j >= len {
                break;
            }
            let cur = core::mem::replace(&mut out[i + j], C::zero());
            out[i + j] = cur + &(x.clone() * y);
        }
    }
    Ok(LaurentSeries::new(min_exp, out, valid))
}

/// `1/a`, with `valid = a.valid − 2·ord a`.
pub fn series_inverse<C: Coeff>(a: &LaurentSeries<C>) -> Result<LaurentSeries<C>> {
    let lead = a.coeffs.first().ok_or(Error::NotInvertible)?;
    let inv0 = lead.try_recip().map_err(|_| Error::NotInvertible)?;
    let m = a.min_exp;
    if a.valid_up_to >= EXACT_Z && a.coeffs.len() == 1 {
        return Ok(LaurentSeries::polynomial(-m, alloc::vec![inv0]));
    }
    let n = if a.valid_up_to >= EXACT_Z {
        DEFAULT_INVERSE_TERMS.max(a.coeffs.len())
    } else {
        (a.valid_up_to - m + 1) as usize
    };
    let mut w: Vec<C> = Vec::with_capacity(n);
    w.push(inv0.clone());
    for k in 1..n {
        let mut acc = C::zero();
        for j in 1..=k.min(a.coeffs.len() - 1) {
            acc = acc + &(a.coeffs[j].clone() * &w[k - j]);
        }
        w.push(-(acc * &inv0));
    }
    Ok(LaurentSeries::new(-m, w, -m + n as i32 - 1))
}

/// Square root of a series `1 + c₁z + c₂z² + …`.
pub fn series_sqrt_unit<C: Coeff>(a: &LaurentSeries<C>) -> Result<LaurentSeries<C>> {
    let unit = a.min_exp == 0 && a.coeffs.first().is_some_and(|c| (c.clone() - &C::one()).is_zero());
    if !unit {
        return Err(Error::NotUnitConstant);
    }
    let half = C::from_rational(&Rational::new(1.into(), 2.into()));
    let n = if a.valid_up_to >= EXACT_Z {
        DEFAULT_INVERSE_TERMS.max(2 * a.coeffs.len())
    } else {
        (a.valid_up_to + 1) as usize
    };
    let mut s: Vec<C> = Vec::with_capacity(n);
    s.push(C::one());
    for k in 1..n {
        let mut acc = a.coeffs.get(k).cloned().unwrap_or_else(C::zero);
        for i in 1..k {
            acc = acc - &(s[i].clone() * &s[k - i]);
        }
        s.push(acc * &half);
    }
    let valid = if a.valid_up_to >= EXACT_Z { n as i32 - 1 } else { a.valid_up_to };
    Ok(LaurentSeries::new(0, s, valid))
}

/// Coefficient of `z⁻¹`.
pub fn residue<C: Coeff>(a: &LaurentSeries<C>) -> Result<C> {
    a.coeff(-1)
}

fn dump<C>(s: &LaurentSeries<C>, f: &mut fmt::Formatter<'_>, show: impl Fn(&C, &mut fmt::Formatter<'_>) -> fmt::Result) -> fmt::Result {
    write!(f, "[")?;
    for (k, c) in s.coeffs.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "({}, ", s.min_exp + k as i32)?;
        show(c, f)?;
        write!(f, ")")?;
    }
    write!(f, "]")?;
    if s.valid_up_to < EXACT_Z {
        write!(f, " + O(z^{})", s.valid_up_to + 1)?;
    }
    Ok(())
}

/// Listing as `(exp, coeff)` pairs in ascending order.
impl<C: fmt::Display> fmt::Display for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        dump(self, f, |c, f| write!(f, "{c}"))
    }
}

impl<C: fmt::Debug> fmt::Debug for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        dump(self, f, |c, f| write!(f, "{c:?}"))
    }
}
