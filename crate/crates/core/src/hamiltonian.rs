//! Spectral Hamiltonians `H = sign · res_(z=0) z^w tr L(z)^k dx/y` and their vector fields.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::coeff::Coeff;

use crate::curve::{curve_weight_series, curve_y_series};
use crate::error::{Error, Result};
use crate::exact::{Jet, Rational, Scalar, VarId};
use crate::laurent::{residue, series_mul, LaurentSeries};
use crate::lax::{lax_series, phase_variables, solve_lax_coeffs, PhasePoint, SeriesMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HamiltonianSpec {
    pub k: u32,
    pub w: i32,
    pub sign: i32,
    /// Multiplies the result; `2` corresponds to `dx = −2 dz/z³`.
    pub dx_factor: i64,
}

impl Default for HamiltonianSpec {
    fn default() -> Self {
        HamiltonianSpec { k: 2, w: -1, sign: -1, dx_factor: 1 }
    }
}

impl HamiltonianSpec {
    pub fn with_kw(k: u32, w: i32) -> Self {
        HamiltonianSpec { k, w, ..Default::default() }
    }
}

/// Relative order of `y` that makes the residue fully determined.
pub fn required_order(genus: usize, spec: &HamiltonianSpec) -> u32 {
    let g = genus as i64;
    let need = spec.k as i64 * (2 * g - 1) - 2 * g - spec.w as i64 + 1;
    need.max(0) as u32
}

fn mat_mul(a: &SeriesMatrix, b: &SeriesMatrix) -> Result<SeriesMatrix> {
    let mut out: SeriesMatrix = Default::default();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = series_mul(&a[i][0], &b[0][j])?.add(&series_mul(&a[i][1], &b[1][j])?);
        }
    }
    Ok(out)
}

/// `tr L^k`.
pub fn trace_power(l: &SeriesMatrix, k: u32) -> Result<LaurentSeries<Scalar>> {
    match k {
        0 => Ok(LaurentSeries::constant(Scalar::from_i64(2))),
        1 => Ok(l[0][0].add(&l[1][1])),
        2 => {
            let d = series_mul(&l[0][0], &l[0][0])?.add(&series_mul(&l[1][1], &l[1][1])?);
            let off = series_mul(&l[0][1], &l[1][0])?;
            Ok(d.add(&off).add(&off))
        }
        _ => {
            let mut m = l.clone();
            for _ in 1..k {
                m = mat_mul(&m, l)?;
            }
            Ok(m[0][0].add(&m[1][1]))
        }
    }
}

fn value_at_order(p: &PhasePoint, spec: &HamiltonianSpec, order: u32) -> Result<Scalar> {
    let y = curve_y_series::<Scalar>(&p.curve, order)?;
    let weight = curve_weight_series::<Scalar>(&p.curve, order)?;
    let coeffs = solve_lax_coeffs(p)?;
    let l = lax_series(p, &coeffs, &y)?;
    let t = trace_power(&l, spec.k)?;
    let integrand = series_mul(&t.shift(spec.w), &weight)?;
    let r = residue(&integrand)?;
    Ok(r * &Scalar::from_i64(spec.sign as i64 * spec.dx_factor))
}

/// `H` at a point. The z-order is derived from `(g, k, w)`; the residue call
/// itself rejects an insufficient window.
pub fn hamiltonian_value(p: &PhasePoint, spec: &HamiltonianSpec) -> Result<Scalar> {
    value_at_order(p, spec, required_order(p.genus(), spec))
}

/// Runs `f` with ε-truncation `4, 8, 16, …` until it stops reporting exhaustion.
pub fn with_eps_retry<T>(start: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let mut terms = start.max(1);
    loop {
        match f(terms) {
            Err(Error::PrecisionExhausted) if terms < 256 => terms *= 2,
            other => return other,
        }
    }
}

/// `ε → 0` limit of `H` with its gradient.
pub fn hamiltonian_jet(p: &PhasePoint, spec: &HamiltonianSpec) -> Result<Jet> {
    hamiltonian_value(p, spec)?.take_limit()
}

/// Time derivatives of every dynamical coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    pub components: BTreeMap<VarId, Rational>,
}

impl VectorField {
    pub fn get(&self, id: VarId) -> Rational {
        self.components.get(&id).cloned().unwrap_or_else(Rational::zero)
    }
}

/// `ȧ = ∂H/∂κ`, `κ̇ = −∂H/∂a`, `α̇ = ∂H/∂β`, `β̇ = −∂H/∂α`. Partners fixed by the
/// gauge contribute zero.
pub fn vector_field_from_jet(genus: usize, h: &Jet) -> VectorField {
    let mut components = BTreeMap::new();
    for v in phase_variables(genus) {
        let c = v.conjugate().expect("dynamical variable");
        let d = h.partial(c);
        components.insert(v, if v.is_position() { d } else { -d });
    }
    VectorField { components }
}

pub fn hamiltonian_vector_field(p: &PhasePoint, spec: &HamiltonianSpec) -> Result<VectorField> {
    Ok(vector_field_from_jet(p.genus(), &hamiltonian_jet(p, spec)?))
}

/// `{f, g} = Σ (∂f/∂q ∂g/∂p − ∂g/∂q ∂f/∂p)` over `(a_s, κ_s)` and `(α, β)`.
pub fn poisson_bracket(f: &Jet, g: &Jet) -> Rational {
    let mut positions: Vec<VarId> =
        f.grad().iter().chain(g.grad()).map(|(id, _)| *id).filter(|id| id.is_position()).collect();
    positions.sort();
    positions.dedup();
    let mut acc = Rational::zero();
    for q in positions {
        let p = q.conjugate().expect("position has a momentum");
        acc += f.partial(q) * g.partial(p) - g.partial(q) * f.partial(p);
    }
    acc
}

/// Bracket of two functions of a seeded point.
pub fn poisson_bracket_at(
    p: &PhasePoint,
    f: impl Fn(&PhasePoint) -> Result<Scalar>,
    g: impl Fn(&PhasePoint) -> Result<Scalar>,
) -> Result<Rational> {
    Ok(poisson_bracket(&f(p)?.take_limit()?, &g(p)?.take_limit()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveSpec;
    use crate::exact::{int, rat, sample_phase_point};

    #[test]
    fn default_orders() {
        let s = HamiltonianSpec::default();
        assert_eq!(required_order(2, &s), 4);
        assert_eq!(required_order(3, &s), 6);
    }

    #[test]
    fn insufficient_order_is_rejected() {
        let values = sample_phase_point(2, 1, 30);
        let p = PhasePoint::constant(&CurveSpec::bare(2), &values).unwrap();
        let spec = HamiltonianSpec::default();
        assert_eq!(value_at_order(&p, &spec, 3), Err(Error::PrecisionExhausted));
        let a = value_at_order(&p, &spec, 4).unwrap();
        let b = value_at_order(&p, &spec, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bracket_of_coordinates() {
        let a = Jet::var(VarId::A(1), int(2));
        let k = Jet::var(VarId::Kappa(1), int(3));
        assert_eq!(poisson_bracket(&a, &k), int(1));
        assert_eq!(poisson_bracket(&k, &a), int(-1));
        let al = Jet::var(VarId::Alpha(2, 1), rat(1, 2));
        let be = Jet::var(VarId::Beta(2, 1), rat(1, 3));
        assert_eq!(poisson_bracket(&al, &be), int(1));
        assert_eq!(poisson_bracket(&a, &be), int(0));
    }

    #[test]
    fn hamiltonian_is_b_independent_in_value_but_not_in_general() {
        let mut values = sample_phase_point(2, 2, 30);
        let c = CurveSpec::bare(2);
        let spec = HamiltonianSpec::default();
        let h1 = hamiltonian_value(&PhasePoint::constant(&c, &values).unwrap(), &spec).unwrap();
        values.insert(VarId::B(1), rat(99, 7));
        let h2 = hamiltonian_value(&PhasePoint::constant(&c, &values).unwrap(), &spec).unwrap();
        assert_ne!(h1, h2);
    }
}
