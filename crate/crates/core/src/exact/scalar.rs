use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Jet, Rational, VarId};
use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Truncation order of a Scalar that is exact in ε (a Laurent polynomial).
pub const EXACT: i32 = i32::MAX / 4;

/// Number of ε-coefficients kept when an exact Scalar has to be inverted.
pub const DEFAULT_EPS_TERMS: u32 = 4;

fn sat(a: i32, b: i32) -> i32 {
    (a as i64 + b as i64).clamp(-(EXACT as i64), EXACT as i64) as i32
}

/// Truncated Laurent series in ε with jet coefficients:
/// `Σ coeffs[k] ε^(order+k) + O(ε^trunc)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    order: i32,
    coeffs: Vec<Jet>,
    trunc: i32,
    terms: u32,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar { order: EXACT, coeffs: Vec::new(), trunc: EXACT, terms: DEFAULT_EPS_TERMS }
    }
}

impl Scalar {
    pub fn new(order: i32, coeffs: Vec<Jet>, trunc: i32) -> Scalar {
        Scalar { order, coeffs, trunc, terms: DEFAULT_EPS_TERMS }.normalize()
    }

    pub fn from_jet(j: Jet) -> Scalar {
        Scalar::new(0, alloc::vec![j], EXACT)
    }

    pub fn rational(r: Rational) -> Scalar {
        Scalar::from_jet(Jet::constant(r))
    }

    pub fn var(id: VarId, value: Rational) -> Scalar {
        Scalar::from_jet(Jet::var(id, value))
    }

    /// The bare parameter `ε`.
    pub fn eps() -> Scalar {
        Scalar::new(1, alloc::vec![Jet::constant(Rational::one())], EXACT)
    }

    /// A variable pinned to `ε` but still seeded for differentiation.
    pub fn eps_var(id: VarId) -> Scalar {
        Scalar::new(0, alloc::vec![Jet::var(id, Rational::zero()), Jet::constant(Rational::one())], EXACT)
    }

    /// Sets how many ε-terms an inversion of an exact value retains.
    pub fn with_terms(mut self, terms: u32) -> Scalar {
        self.terms = terms.max(1);
        self
    }

    pub fn terms(&self) -> u32 {
        self.terms
    }

    pub fn eps_order(&self) -> i32 {
        self.order
    }

    pub fn trunc_order(&self) -> i32 {
        self.trunc
    }

    pub fn coeffs(&self) -> &[Jet] {
        &self.coeffs
    }

    pub fn is_exact(&self) -> bool {
        self.trunc >= EXACT
    }

    /// Coefficient of `ε^k` (zero outside the stored range).
    pub fn coeff(&self, k: i32) -> Jet {
        if self.coeffs.is_empty() || k < self.order {
            return Jet::default();
        }
        self.coeffs.get((k - self.order) as usize).cloned().unwrap_or_default()
    }

    /// Lowest exponent with a nonzero coefficient, or the truncation order.
    fn ord(&self) -> i32 {
        if self.coeffs.is_empty() {
            self.trunc
        } else {
            self.order
        }
    }

    fn normalize(mut self) -> Scalar {
        if self.trunc < EXACT {
            let keep = (self.trunc as i64 - self.order as i64).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().take_while(|j| j.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.order += lead as i32;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.order = self.trunc;
        }
        self
    }

    /// The value parts of every coefficient.
    pub fn value_part(&self) -> Scalar {
        Scalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(Jet::value_part).collect(),
            trunc: self.trunc,
            terms: self.terms,
        }
        .normalize()
    }

    fn value_valuation(&self) -> Option<i32> {
        self.coeffs.iter().position(|j| !j.value.is_zero()).map(|r| self.order + r as i32)
    }

    /// The `ε⁰` coefficient, provided no negative power survives.
    pub fn take_limit(&self) -> Result<Jet> {
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = self.order + k as i32;
            if e >= 0 {
                break;
            }
            if !c.is_zero() {
                return Err(Error::LimitDoesNotExist { order: e });
            }
        }
        if self.trunc <= 0 {
            return Err(Error::PrecisionExhausted);
        }
        Ok(self.coeff(0))
    }

    /// Exact rational value, if this Scalar is a plain constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.is_empty() {
            return if self.is_exact() { Some(Rational::zero()) } else { None };
        }
        if self.order == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_constant() && self.is_exact() {
            Some(self.coeffs[0].value.clone())
        } else {
            None
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let e = self.order + k as i32;
            if e == 0 {
                write!(f, "({c:?})")?;
            } else {
                write!(f, "({c:?})ε^{e}")?;
            }
        }
        if !self.is_exact() {
            write!(f, " + O(ε^{})", self.trunc)?;
        }
        Ok(())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn add_impl(a: Scalar, b: &Scalar, negate: bool) -> Scalar {
    let trunc = a.trunc.min(b.trunc);
    let terms = a.terms.max(b.terms);
    if b.coeffs.is_empty() {
        return Scalar { trunc, terms, ..a }.normalize();
    }
    if a.coeffs.is_empty() {
        let b = if negate { -b.clone() } else { b.clone() };
        return Scalar { trunc, terms, ..b }.normalize();
    }
    let lo = a.order.min(b.order);
    let hi = (a.order + a.coeffs.len() as i32).max(b.order + b.coeffs.len() as i32).min(trunc);
    if hi <= lo {
        return Scalar { order: trunc, coeffs: Vec::new(), trunc, terms };
    }
    let mut out: Vec<Jet> = alloc::vec![Jet::default(); (hi - lo) as usize];
    for (k, c) in a.coeffs.into_iter().enumerate() {
        let e = a.order + k as i32;
        if e < hi {
            out[(e - lo) as usize] = c;
        }
    }
    for (k, c) in b.coeffs.iter().enumerate() {
        let e = b.order + k as i32;
        if e < hi {
            let slot = &mut out[(e - lo) as usize];
            let cur = core::mem::take(slot);
            *slot = if negate { cur - c } else { cur + c };
        }
    }
    Scalar { order: lo, coeffs: out, trunc, terms }.normalize()
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        add_impl(self, rhs, false)
    }
}

impl<'a> Sub<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        add_impl(self, rhs, true)
    }
}

impl<'a> Mul<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let trunc = sat(self.trunc, rhs.ord()).min(sat(rhs.trunc, self.ord()));
        let terms = self.terms.max(rhs.terms);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Scalar { order: trunc, coeffs: Vec::new(), trunc, terms };
        }
        let order = self.order + rhs.order;
        let full = self.coeffs.len() + rhs.coeffs.len() - 1;
        let len = if trunc >= EXACT { full } else { full.min((trunc as i64 - order as i64).max(0) as usize) };
        let mut out: Vec<Jet> = alloc::vec![Jet::default(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                let slot = &mut out[i + j];
                let cur = core::mem::take(slot);
                *slot = cur + &(x.clone() * y);
            }
        }
        Scalar { order, coeffs: out, trunc, terms }.normalize()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { coeffs: self.coeffs.into_iter().map(Neg::neg).collect(), ..self }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self + &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self * &rhs
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    /// Zero on its whole ε-window.
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::rational(Rational::one())
    }
}

impl Coeff for Scalar {
    fn from_rational(r: &Rational) -> Self {
        Scalar::rational(r.clone())
    }

    /// `1/(V+N) = W − W²N` with `W = 1/V`, where `V` collects the value parts and
    /// `N` the gradients (so `N² = 0`). Only the value part needs a unit.
    fn try_recip(&self) -> Result<Self> {
        let m = match self.value_valuation() {
            Some(m) => m,
            None if self.is_exact() => return Err(Error::DivisionByZero),
            None => return Err(Error::PrecisionExhausted),
        };
        let r = (m - self.order) as usize;
        let u: Vec<Rational> = self.coeffs[r..].iter().map(|j| j.value.clone()).collect();
        let monomial = u[1..].iter().all(Zero::is_zero);
        let w = if self.is_exact() && monomial {
            Scalar {
                order: -m,
                coeffs: alloc::vec![Jet::constant(u[0].recip())],
                trunc: EXACT,
                terms: self.terms,
            }
        } else {
            let n = if self.is_exact() { self.terms as usize } else { (self.trunc - m) as usize };
            let u0 = u[0].recip();
            let mut ws: Vec<Rational> = Vec::with_capacity(n);
            ws.push(u0.clone());
            for k in 1..n {
                let mut acc = Rational::zero();
                for j in 1..=k.min(u.len() - 1) {
                    acc += &u[j] * &ws[k - j];
                }
                ws.push(-acc * &u0);
            }
            Scalar {
                order: -m,
                coeffs: ws.into_iter().map(Jet::constant).collect(),
                trunc: -m + n as i32,
                terms: self.terms,
            }
            .normalize()
        };
        let nil = Scalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(Jet::nilpotent_part).collect(),
            trunc: self.trunc,
            terms: self.terms,
        }
        .normalize();
        if nil.coeffs.is_empty() {
            return Ok(w);
        }
        let w2n = w.clone() * &w * &nil;
        Ok(w - &w2n)
    }

    fn pivot_rank(&self) -> Option<i64> {
        self.value_valuation().map(i64::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::rational(rat(n, d))
    }

    #[test]
    fn rational_addition() {
        assert_eq!((r(1, 2) + &r(1, 3)).as_rational(), Some(rat(5, 6)));
    }

    #[test]
    fn eps_over_eps() {
        let q = Scalar::eps().try_div(&Scalar::eps()).unwrap();
        assert_eq!(q.eps_order(), 0);
        assert_eq!(q.take_limit().unwrap(), Jet::constant(rat(1, 1)));
    }

    #[test]
    fn jet_square() {
        let x = Scalar::var(VarId::A(1), rat(3, 2));
        let y = x.clone() * &x;
        let j = y.take_limit().unwrap();
        assert_eq!(j.value, rat(9, 4));
        assert_eq!(j.partial(VarId::A(1)), rat(3, 1));
    }

    #[test]
    fn limits() {
        let s = r(2, 1) + &(Scalar::eps() * &r(3, 1));
        assert_eq!(s.take_limit().unwrap().value, rat(2, 1));
        let five_eps = Scalar::eps() * &r(5, 1);
        assert_eq!(five_eps.try_div(&Scalar::eps()).unwrap().take_limit().unwrap().value, rat(5, 1));
        let inv = Scalar::eps().try_recip().unwrap();
        assert_eq!(inv.take_limit(), Err(Error::LimitDoesNotExist { order: -1 }));
    }

    #[test]
    fn division_by_exact_zero() {
        assert_eq!(r(1, 1).try_div(&Scalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_of_truncated_series() {
        // 1/(1 + ε) = 1 − ε + ε² − ε³ + O(ε⁴)
        let s = r(1, 1) + &Scalar::eps();
        let inv = s.try_recip().unwrap();
        assert_eq!(inv.trunc_order(), 4);
        assert_eq!(inv.coeff(3).value, rat(-1, 1));
        let back = inv * &s;
        assert_eq!(back.coeff(0).value, rat(1, 1));
        for k in 1..4 {
            assert!(back.coeff(k).is_zero());
        }
    }

    #[test]
    fn inverse_uses_value_valuation() {
        // x = ε + dα with the value part of order 1: 1/x = ε⁻¹ − ε⁻² dα
        let x = Scalar::eps_var(VarId::Alpha(2, 2));
        let inv = x.try_recip().unwrap();
        assert_eq!(inv.eps_order(), -2);
        assert_eq!(inv.coeff(-2).partial(VarId::Alpha(2, 2)), rat(-1, 1));
        assert_eq!(inv.coeff(-1).value, rat(1, 1));
        let one = inv * &x;
        let lim = one.take_limit().unwrap();
        assert_eq!(lim, Jet::constant(rat(1, 1)));
    }

    #[test]
    fn window_rule_for_products() {
        let a = Scalar::new(0, alloc::vec![Jet::constant(rat(1, 1))], 3);
        let b = Scalar::new(-1, alloc::vec![Jet::constant(rat(1, 1))], 2);
        let p = a * &b;
        assert_eq!(p.trunc_order(), 2);
        assert_eq!(p.eps_order(), -1);
    }
}
