//! Rationals, variable names, jets and the ε-series scalar.

mod jet;
mod sample;
mod scalar;

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub use jet::Jet;
pub use sample::{sample_curve, sample_phase_point, sample_rational, Sampler, DEFAULT_BOUND};
pub use scalar::{Scalar, DEFAULT_EPS_TERMS, EXACT};

/// Exact rational in lowest terms.
pub type Rational = num_rational::BigRational;

/// Values for a set of named variables.
pub type Assignment = BTreeMap<VarId, Rational>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Name of a phase-space coordinate or curve coefficient. Indices are 1-based:
/// `Alpha(i, s)` is component `i` of the vector attached to point `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    A(u8),
    B(u8),
    Kappa(u8),
    Alpha(u8, u8),
    Beta(u8, u8),
    P(u8),
}

impl VarId {
    /// Canonical conjugate, with positions `a`, `α` paired to momenta `κ`, `β`.
    pub fn conjugate(self) -> Option<VarId> {
        match self {
            VarId::A(s) => Some(VarId::Kappa(s)),
            VarId::Kappa(s) => Some(VarId::A(s)),
            VarId::Alpha(i, s) => Some(VarId::Beta(i, s)),
            VarId::Beta(i, s) => Some(VarId::Alpha(i, s)),
            _ => None,
        }
    }

    pub fn is_position(self) -> bool {
        matches!(self, VarId::A(_) | VarId::Alpha(..))
    }

    pub fn parse(s: &str) -> Option<VarId> {
        let idx = |t: &str| t.parse::<u8>().ok();
        let two = |t: &str| {
            let b = t.as_bytes();
            if b.len() == 2 && b[0].is_ascii_digit() && b[1].is_ascii_digit() {
                Some((b[0] - b'0', b[1] - b'0'))
            } else {
                None
            }
        };
        if let Some(t) = s.strip_prefix("kappa") {
            return idx(t).map(VarId::Kappa);
        }
        if let Some(t) = s.strip_prefix("alpha") {
            return two(t).map(|(i, j)| VarId::Alpha(i, j));
        }
        if let Some(t) = s.strip_prefix("beta") {
            return two(t).map(|(i, j)| VarId::Beta(i, j));
        }
        if let Some(t) = s.strip_prefix('a') {
            return idx(t).map(VarId::A);
        }
        if let Some(t) = s.strip_prefix('b') {
            return idx(t).map(VarId::B);
        }
        if let Some(t) = s.strip_prefix('p') {
            return idx(t).map(VarId::P);
        }
        None
    }

    pub fn name(self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::A(s) => write!(f, "a{s}"),
            VarId::B(s) => write!(f, "b{s}"),
            VarId::Kappa(s) => write!(f, "kappa{s}"),
            VarId::Alpha(i, s) => write!(f, "alpha{i}{s}"),
            VarId::Beta(i, s) => write!(f, "beta{i}{s}"),
            VarId::P(i) => write!(f, "p{i}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn varid_order_is_total_and_names_roundtrip() {
        let ids = [
            VarId::A(1),
            VarId::B(2),
            VarId::Kappa(3),
            VarId::Alpha(2, 1),
            VarId::Beta(1, 4),
            VarId::P(5),
        ];
        for id in ids {
            assert_eq!(VarId::parse(&id.name()), Some(id));
        }
        let mut sorted: Vec<_> = ids.to_vec();
        sorted.sort();
        assert_eq!(sorted.len(), 6);
    }

    #[test]
    fn conjugates() {
        assert_eq!(VarId::A(2).conjugate(), Some(VarId::Kappa(2)));
        assert_eq!(VarId::Beta(1, 3).conjugate(), Some(VarId::Alpha(1, 3)));
        assert_eq!(VarId::B(1).conjugate(), None);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-4"), Some(int(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(alloc::format!("{}", rat(6, 3)), "2");
        assert_eq!(alloc::format!("{}", rat(-2, 6)), "-1/3");
    }
}
