use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Rational, VarId};
use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// First-order jet: a value and its exact partials, with `dxᵢ·dxⱼ = 0`.
///
/// The gradient is stored as a list sorted by `VarId` with no zero entries.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Jet {
    pub value: Rational,
    grad: Vec<(VarId, Rational)>,
}

fn merge(
    a: &[(VarId, Rational)],
    ca: &Rational,
    b: &[(VarId, Rational)],
    cb: &Rational,
) -> Vec<(VarId, Rational)> {
    let scale = |c: &Rational, x: &Rational| if c.is_one() { x.clone() } else { c * x };
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => core::cmp::Ordering::Less,
            _ => core::cmp::Ordering::Greater,
        };
        match take {
            core::cmp::Ordering::Less => {
                if !ca.is_zero() {
                    out.push((a[i].0, scale(ca, &a[i].1)));
                }
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                if !cb.is_zero() {
                    out.push((b[j].0, scale(cb, &b[j].1)));
                }
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let v = scale(ca, &a[i].1) + scale(cb, &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl Jet {
    pub fn constant(value: Rational) -> Jet {
        Jet { value, grad: Vec::new() }
    }

    /// A seeded variable: `∂/∂id = 1`.
    pub fn var(id: VarId, value: Rational) -> Jet {
        Jet { value, grad: alloc::vec![(id, Rational::one())] }
    }

    pub fn from_parts(value: Rational, grad: impl IntoIterator<Item = (VarId, Rational)>) -> Jet {
        let mut g: Vec<_> = grad.into_iter().filter(|(_, r)| !r.is_zero()).collect();
        g.sort_by_key(|x| x.0);
        let mut out: Vec<(VarId, Rational)> = Vec::with_capacity(g.len());
        for (id, r) in g {
            match out.last_mut() {
                Some(last) if last.0 == id => last.1 += r,
                _ => out.push((id, r)),
            }
        }
        out.retain(|(_, r)| !r.is_zero());
        Jet { value, grad: out }
    }

    pub fn partial(&self, id: VarId) -> Rational {
        match self.grad.binary_search_by(|x| x.0.cmp(&id)) {
            Ok(i) => self.grad[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn grad(&self) -> &[(VarId, Rational)] {
        &self.grad
    }

    pub fn value_part(&self) -> Jet {
        Jet::constant(self.value.clone())
    }

    /// The gradient alone, without the value.
    pub fn nilpotent_part(&self) -> Jet {
        Jet { value: Rational::zero(), grad: self.grad.clone() }
    }

    pub fn is_constant(&self) -> bool {
        self.grad.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Jet {
        if c.is_zero() {
            return Jet::default();
        }
        Jet {
            value: &self.value * c,
            grad: self.grad.iter().map(|(id, r)| (*id, r * c)).collect(),
        }
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        for (id, r) in &self.grad {
            write!(f, " + {r}·d{id}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Add<&'a Jet> for Jet {
    type Output = Jet;
    fn add(self, rhs: &'a Jet) -> Jet {
        let one = Rational::one();
        Jet { value: self.value + &rhs.value, grad: merge(&self.grad, &one, &rhs.grad, &one) }
    }
}

impl<'a> Sub<&'a Jet> for Jet {
    type Output = Jet;
    fn sub(self, rhs: &'a Jet) -> Jet {
        let one = Rational::one();
        Jet { value: self.value - &rhs.value, grad: merge(&self.grad, &one, &rhs.grad, &-one.clone()) }
    }
}

impl<'a> Mul<&'a Jet> for Jet {
    type Output = Jet;
    fn mul(self, rhs: &'a Jet) -> Jet {
        let grad = merge(&self.grad, &rhs.value, &rhs.grad, &self.value);
        Jet { value: self.value * &rhs.value, grad }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { value: -self.value, grad: self.grad.into_iter().map(|(id, r)| (id, -r)).collect() }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self + &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self * &rhs
    }
}

impl Zero for Jet {
    fn zero() -> Self {
        Jet::default()
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.grad.is_empty()
    }
}

impl One for Jet {
    fn one() -> Self {
        Jet::constant(Rational::one())
    }
}

impl Coeff for Jet {
    fn from_rational(r: &Rational) -> Self {
        Jet::constant(r.clone())
    }
    fn try_recip(&self) -> Result<Self> {
        if self.value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = self.value.recip();
        let d = -(&inv * &inv);
        Ok(Jet { value: inv, grad: self.grad.iter().map(|(id, r)| (*id, r * &d)).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn square_of_seeded_variable() {
        let x = Jet::var(VarId::A(1), rat(3, 2));
        let y = x.clone() * &x;
        assert_eq!(y.value, rat(9, 4));
        assert_eq!(y.partial(VarId::A(1)), rat(3, 1));
    }

    #[test]
    fn reciprocal_partial() {
        let x = Jet::var(VarId::A(1), rat(2, 1));
        let r = x.try_recip().unwrap();
        assert_eq!(r.value, rat(1, 2));
        assert_eq!(r.partial(VarId::A(1)), rat(-1, 4));
        assert_eq!(Jet::var(VarId::A(1), rat(0, 1)).try_recip(), Err(Error::DivisionByZero));
    }

    #[test]
    fn cancellation_drops_entries() {
        let x = Jet::var(VarId::A(1), rat(1, 1));
        let z = x.clone() - &x;
        assert!(z.is_zero());
        assert!(z.grad().is_empty());
    }
}
