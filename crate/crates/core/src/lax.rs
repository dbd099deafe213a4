//! The Tyurin-parametrized Lax operator
//! `L(x, y) = Σ_{i<g} L_i xⁱ + Σ_s α_s β_sᵀ (y + b_s)/(x − a_s)`
//! and the eigenvector conditions `L(a_s, b_s) α_s = κ_s α_s` that fix the `L_i`.
//!
//! Points are indexed `s = 1..=2g`. The last two carry the gauge
//! `α_(2g−1) = (1, 0)`, `α_(2g) = (0, 1)`, `β_(2g−1) = (0, β_(2,2g−1))`, `β_(2g) = (β_(1,2g), 0)`.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::exact::{Assignment, Rational, Scalar, VarId};
use crate::laurent::{series_mul, LaurentSeries};
use crate::linsolve::solve;
use crate::reduction::ConstraintSet;

fn idx(s: usize) -> u8 {
    s as u8
}

pub fn is_gauge_point(genus: usize, s: usize) -> bool {
    s + 1 >= 2 * genus
}

pub fn is_free_alpha(genus: usize, _i: usize, s: usize) -> bool {
    !is_gauge_point(genus, s)
}

pub fn is_free_beta(genus: usize, i: usize, s: usize) -> bool {
    !is_gauge_point(genus, s) || (s == 2 * genus - 1 && i == 2) || (s == 2 * genus && i == 1)
}

/// Gauge-fixed value of `α_(i,s)`, if any.
pub fn gauge_alpha(genus: usize, i: usize, s: usize) -> Option<Rational> {
    if !is_gauge_point(genus, s) {
        return None;
    }
    let one = (s == 2 * genus - 1 && i == 1) || (s == 2 * genus && i == 2);
    Some(if one { Rational::one() } else { Rational::zero() })
}

/// Dynamical coordinates `a_s, κ_s` and the free `α, β`, in `VarId` order.
pub fn phase_variables(genus: usize) -> Vec<VarId> {
    let n = 2 * genus;
    let mut v = Vec::new();
    for s in 1..=n {
        v.push(VarId::A(idx(s)));
    }
    for s in 1..=n {
        v.push(VarId::Kappa(idx(s)));
    }
    for i in 1..=2 {
        for s in 1..=n {
            if is_free_alpha(genus, i, s) {
                v.push(VarId::Alpha(i as u8, idx(s)));
            }
        }
    }
    for i in 1..=2 {
        for s in 1..=n {
            if is_free_beta(genus, i, s) {
                v.push(VarId::Beta(i as u8, idx(s)));
            }
        }
    }
    v.sort();
    v
}

/// A phase-space point over the scalar tower. Vectors are 0-based in `s`.
#[derive(Debug, Clone)]
pub struct PhasePoint {
    pub curve: CurveSpec,
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
    pub alpha: Vec<[Scalar; 2]>,
    pub beta: Vec<[Scalar; 2]>,
    pub kappa: Vec<Scalar>,
}

impl PhasePoint {
    pub fn genus(&self) -> usize {
        self.curve.genus
    }

    /// Builds a point from values. With `seeded`, every dynamical coordinate carries
    /// its own jet direction; `b_s` and gauge entries stay constant. Constrained
    /// coordinates are replaced by `0` or `ε` but stay seeded.
    pub fn build(
        curve: &CurveSpec,
        values: &Assignment,
        constraints: Option<&ConstraintSet>,
        seeded: bool,
        eps_terms: u32,
    ) -> Result<PhasePoint> {
        let g = curve.genus;
        let n = 2 * g;
        let get = |id: VarId| -> Result<Rational> {
            values.get(&id).cloned().ok_or(Error::InvalidInput("missing phase-space value"))
        };
        let coord = |id: VarId| -> Result<Scalar> {
            let s = match constraints {
                Some(c) if c.limit_vars.contains(&id) => {
                    if seeded {
                        Scalar::eps_var(id)
                    } else {
                        Scalar::eps()
                    }
                }
                Some(c) if c.hard_zeros.contains(&id) => {
                    if seeded {
                        Scalar::var(id, Rational::zero())
                    } else {
                        Scalar::default()
                    }
                }
                _ => {
                    let v = get(id)?;
                    if seeded {
                        Scalar::var(id, v)
                    } else {
                        Scalar::rational(v)
                    }
                }
            };
            Ok(s.with_terms(eps_terms))
        };
        let mut p = PhasePoint {
            curve: curve.clone(),
            a: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
            alpha: Vec::with_capacity(n),
            beta: Vec::with_capacity(n),
            kappa: Vec::with_capacity(n),
        };
        for s in 1..=n {
            p.a.push(coord(VarId::A(idx(s)))?);
            p.kappa.push(coord(VarId::Kappa(idx(s)))?);
            p.b.push(Scalar::rational(get(VarId::B(idx(s)))?).with_terms(eps_terms));
            let mut al: [Scalar; 2] = Default::default();
            let mut be: [Scalar; 2] = Default::default();
            for i in 1..=2 {
                al[i - 1] = match gauge_alpha(g, i, s) {
                    Some(v) => Scalar::rational(v).with_terms(eps_terms),
                    None => coord(VarId::Alpha(i as u8, idx(s)))?,
                };
                be[i - 1] = if is_free_beta(g, i, s) {
                    coord(VarId::Beta(i as u8, idx(s)))?
                } else {
                    Scalar::default()
                };
            }
            p.alpha.push(al);
            p.beta.push(be);
        }
        for i in 0..n {
            for j in 0..i {
                if p.a[i].value_part() == p.a[j].value_part() {
                    return Err(Error::DuplicateNodes);
                }
            }
        }
        Ok(p)
    }

    pub fn seeded(curve: &CurveSpec, values: &Assignment) -> Result<PhasePoint> {
        PhasePoint::build(curve, values, None, true, crate::exact::DEFAULT_EPS_TERMS)
    }

    pub fn constant(curve: &CurveSpec, values: &Assignment) -> Result<PhasePoint> {
        PhasePoint::build(curve, values, None, false, crate::exact::DEFAULT_EPS_TERMS)
    }
}

/// `L_0 … L_(g−1)`, each a 2×2 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxCoeffs(pub Vec<[[Scalar; 2]; 2]>);

/// `Σ coeffs[u] · unknown_u + constant`.
#[derive(Debug, Clone)]
pub struct AffineForm {
    pub coeffs: Vec<Scalar>,
    pub constant: Scalar,
}

/// Position of `(L_k)_(ij)` among the `4g` unknowns: row `i` occupies a contiguous block.
pub fn unknown_index(genus: usize, k: usize, i: usize, j: usize) -> usize {
    i * 2 * genus + 2 * k + j
}

fn pole_factor(p: &PhasePoint, s: usize, t: usize) -> Result<Scalar> {
    let dot = p.beta[t][0].clone() * &p.alpha[s][0] + &(p.beta[t][1].clone() * &p.alpha[s][1]);
    if dot.is_zero() {
        return Ok(Scalar::default());
    }
    let num = dot * &(p.b[s].clone() + &p.b[t]);
    num.try_div(&(p.a[s].clone() - &p.a[t]))
}

/// Both components of `L(a_s, b_s) α_s − κ_s α_s` as affine forms in the unknown
/// `L_i` entries. The pole of `L` at `a_s` itself is left out.
pub fn eval_lax_at_point(p: &PhasePoint, s: usize) -> Result<[AffineForm; 2]> {
    let g = p.genus();
    let n = 2 * g;
    let factors: Vec<Scalar> =
        (0..n).map(|t| if t == s { Ok(Scalar::default()) } else { pole_factor(p, s, t) }).collect::<Result<_>>()?;
    let powers: Vec<Scalar> = (0..g).map(|k| p.a[s].pow(k as u32)).collect();
    let mut out: [AffineForm; 2] = core::array::from_fn(|_| AffineForm {
        coeffs: alloc::vec![Scalar::default(); 4 * g],
        constant: Scalar::default(),
    });
    for (i, form) in out.iter_mut().enumerate() {
        for (k, pw) in powers.iter().enumerate() {
            for j in 0..2 {
                form.coeffs[unknown_index(g, k, i, j)] = pw.clone() * &p.alpha[s][j];
            }
        }
        let mut c = -(p.kappa[s].clone() * &p.alpha[s][i]);
        for (t, f) in factors.iter().enumerate() {
            if !f.is_zero() {
                c = c + &(p.alpha[t][i].clone() * f);
            }
        }
        form.constant = c;
    }
    Ok(out)
}

fn assemble(g: usize, x: &[Scalar]) -> LaxCoeffs {
    LaxCoeffs(
        (0..g)
            .map(|k| core::array::from_fn(|i| core::array::from_fn(|j| x[unknown_index(g, k, i, j)].clone())))
            .collect(),
    )
}

/// Solves the `4g` eigenvector conditions as two decoupled `2g × 2g` systems, one per row of `L`.
pub fn solve_lax_coeffs(p: &PhasePoint) -> Result<LaxCoeffs> {
    let g = p.genus();
    let n = 2 * g;
    let forms: Vec<[AffineForm; 2]> = (0..n).map(|s| eval_lax_at_point(p, s)).collect::<Result<_>>()?;
    let mut x = alloc::vec![Scalar::default(); 4 * g];
    for i in 0..2 {
        let base = i * n;
        let m: Vec<Vec<Scalar>> = forms.iter().map(|f| f[i].coeffs[base..base + n].to_vec()).collect();
        let rhs: Vec<Scalar> = forms.iter().map(|f| -f[i].constant.clone()).collect();
        let sol = solve(m, rhs)?;
        x[base..base + n].clone_from_slice(&sol);
    }
    Ok(assemble(g, &x))
}

/// The same conditions solved as one `4g × 4g` system.
pub fn solve_lax_coeffs_joint(p: &PhasePoint) -> Result<LaxCoeffs> {
    let g = p.genus();
    let n = 2 * g;
    let mut m = Vec::with_capacity(2 * n);
    let mut rhs = Vec::with_capacity(2 * n);
    for s in 0..n {
        for f in eval_lax_at_point(p, s)? {
            m.push(f.coeffs);
            rhs.push(-f.constant);
        }
    }
    Ok(assemble(g, &solve(m, rhs)?))
}

pub type SeriesMatrix = [[LaurentSeries<Scalar>; 2]; 2];

/// `L(z)` with `x = z⁻²` and `y` given as a series, valid through `y.valid_up_to() + 2`.
pub fn lax_series(p: &PhasePoint, coeffs: &LaxCoeffs, y: &LaurentSeries<Scalar>) -> Result<SeriesMatrix> {
    let g = p.genus();
    let valid = y.valid_up_to() + 2;
    let mut out: SeriesMatrix = Default::default();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            let poly: Vec<Scalar> = (0..g).rev().flat_map(|k| [coeffs.0[k][i][j].clone(), Scalar::default()]).collect();
            *e = LaurentSeries::new(-2 * (g as i32 - 1), poly, valid);
        }
    }
    for s in 0..2 * g {
        // (y + b_s) z² / (1 − a_s z²)
        let geo_valid = valid - y.min_exp();
        let geo_len = (geo_valid / 2).max(1) as usize;
        let mut geo = Vec::with_capacity(2 * geo_len);
        let mut pw = Scalar::one();
        for _ in 0..geo_len {
            geo.push(pw.clone());
            geo.push(Scalar::default());
            pw = pw * &p.a[s];
        }
        let geo = LaurentSeries::new(2, geo, geo_valid);
        let shifted = y.add(&LaurentSeries::constant(p.b[s].clone()));
        let g_s = series_mul(&shifted, &geo)?;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let c = p.alpha[s][i].clone() * &p.beta[s][j];
                if !c.is_zero() {
                    *e = e.add(&g_s.scale(&c));
                }
            }
        }
    }
    Ok(out)
}

/// Evaluates `L(x, y)` at a point away from the poles.
pub fn lax_value(p: &PhasePoint, coeffs: &LaxCoeffs, x: &Scalar, y: &Scalar) -> Result<[[Scalar; 2]; 2]> {
    let g = p.genus();
    let mut out: [[Scalar; 2]; 2] = Default::default();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            let mut acc = Scalar::default();
            for k in (0..g).rev() {
                acc = acc * x + &coeffs.0[k][i][j];
            }
            *e = acc;
        }
    }
    for s in 0..2 * g {
        let f = (y.clone() + &p.b[s]).try_div(&(x.clone() - &p.a[s]))?;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = e.clone() + &(p.alpha[s][i].clone() * &p.beta[s][j] * &f);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, sample_phase_point};

    fn point(g: usize, seed: u64) -> PhasePoint {
        let values = sample_phase_point(g, seed, 50);
        PhasePoint::constant(&CurveSpec::bare(g), &values).unwrap()
    }

    #[test]
    fn variable_counts() {
        assert_eq!(phase_variables(2).len(), 18);
        assert_eq!(phase_variables(3).len(), 30);
    }

    #[test]
    fn eigen_conditions_hold_after_solve() {
        for g in [2, 3] {
            let p = point(g, 3);
            let c = solve_lax_coeffs(&p).unwrap();
            let mut x = alloc::vec![Scalar::default(); 4 * g];
            for k in 0..g {
                for i in 0..2 {
                    for j in 0..2 {
                        x[unknown_index(g, k, i, j)] = c.0[k][i][j].clone();
                    }
                }
            }
            for s in 0..2 * g {
                for f in eval_lax_at_point(&p, s).unwrap() {
                    let mut acc = f.constant.clone();
                    for (u, cu) in f.coeffs.iter().enumerate() {
                        acc = acc + &(cu.clone() * &x[u]);
                    }
                    assert!(acc.is_zero());
                }
            }
        }
    }

    #[test]
    fn split_and_joint_solves_agree() {
        for g in [2, 3] {
            let p = point(g, 9);
            assert_eq!(solve_lax_coeffs(&p).unwrap(), solve_lax_coeffs_joint(&p).unwrap());
        }
    }

    #[test]
    fn row_one_system_touches_only_row_one() {
        let p = point(2, 4);
        for s in 0..4 {
            let [f1, f2] = eval_lax_at_point(&p, s).unwrap();
            assert!(f1.coeffs[4..].iter().all(Zero::is_zero));
            assert!(f2.coeffs[..4].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn series_matches_pointwise_value() {
        // Compare the z-series of a matrix entry with a direct evaluation of L(x, y)
        // along x = z⁻² using the same truncated y.
        let g = 2;
        let p = point(g, 5);
        let c = solve_lax_coeffs(&p).unwrap();
        let y = crate::curve::curve_y_series::<Scalar>(&p.curve, 10).unwrap();
        let l = lax_series(&p, &c, &y).unwrap();
        // leading term of entry (0,0) is the L_1 coefficient times z⁻²,
        // plus Σ α β at z⁻³ from y ~ z⁻⁵
        let mut lead = Scalar::default();
        for s in 0..4 {
            lead = lead + &(p.alpha[s][0].clone() * &p.beta[s][0]);
        }
        assert_eq!(l[0][0].coeff(-3).unwrap(), lead);
        assert_eq!(l[0][0].coeff(-4).unwrap(), Scalar::default());
        let _ = lax_value(&p, &c, &Scalar::rational(int(100)), &Scalar::rational(rat(7, 3))).unwrap();
    }
}
