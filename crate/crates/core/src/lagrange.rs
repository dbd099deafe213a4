//! The Lagrange interpolation system: `F(x) = Σ F_i xⁱ` through `(a_s, κ_s)`,
//! the multipliers `M_k` with `∂F_i/∂a_k = M_k ∂F_i/∂κ_k`, and exact checks of
//! involutivity and of the gradient relations.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exact::{Jet, Rational, Sampler, Scalar, VarId, DEFAULT_BOUND};
use crate::hamiltonian::poisson_bracket;
use crate::report::{CheckReport, Failure};

/// Interpolation data: distinct nodes `a` and values `kappa`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeData<C> {
    pub a: Vec<C>,
    pub kappa: Vec<C>,
}

impl<C: Coeff> NodeData<C> {
    pub fn new(a: Vec<C>, kappa: Vec<C>) -> Result<Self> {
        if a.len() != kappa.len() || a.is_empty() {
            return Err(Error::InvalidInput("nodes and values must have equal nonzero length"));
        }
        check_distinct(&a)?;
        Ok(NodeData { a, kappa })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }
}

fn check_distinct<C: Coeff>(a: &[C]) -> Result<()> {
    for i in 0..a.len() {
        for j in 0..i {
            if (a[i].clone() - &a[j]).is_zero() {
                return Err(Error::DuplicateNodes);
            }
        }
    }
    Ok(())
}

/// Coefficients (ascending) of `Π_{j≠s} (x − a_j)`.
fn numerator<C: Coeff>(a: &[C], s: usize) -> Vec<C> {
    let mut poly = alloc::vec![C::one()];
    for (j, aj) in a.iter().enumerate() {
        if j == s {
            continue;
        }
        let mut next = alloc::vec![C::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + c;
            next[i] = next[i].clone() - &(c.clone() * aj);
        }
        poly = next;
    }
    poly
}

/// `basis[s][i]`: coefficient of `xⁱ` in `f_s(x) = Π_{j≠s} (x − a_j)/(a_s − a_j)`.
pub fn basis_coeffs<C: Coeff>(a: &[C]) -> Result<Vec<Vec<C>>> {
    check_distinct(a)?;
    (0..a.len())
        .map(|s| {
            let mut den = C::one();
            for (j, aj) in a.iter().enumerate() {
                if j != s {
                    den = den * &(a[s].clone() - aj);
                }
            }
            let inv = den.try_recip()?;
            Ok(numerator(a, s).into_iter().map(|c| c * &inv).collect())
        })
        .collect()
}

/// `F_0 … F_(n−1)`.
pub fn lagrange_coeffs<C: Coeff>(d: &NodeData<C>) -> Result<Vec<C>> {
    let basis = basis_coeffs(&d.a)?;
    let n = d.n();
    let mut f = alloc::vec![C::zero(); n];
    for (s, row) in basis.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            f[i] = f[i].clone() + &(c.clone() * &d.kappa[s]);
        }
    }
    Ok(f)
}

/// `Σ F_i xⁱ`.
pub fn eval_poly<C: Coeff>(f: &[C], x: &C) -> C {
    f.iter().rev().fold(C::zero(), |acc, c| acc * x + c)
}

/// `M_k` (0-based `k`).
pub fn multiplier<C: Coeff>(d: &NodeData<C>, k: usize) -> Result<C> {
    let a = &d.a;
    let n = d.n();
    if k >= n {
        return Err(Error::InvalidInput("multiplier index out of range"));
    }
    check_distinct(a)?;
    let mut first = C::zero();
    let mut pk = C::one();
    for j in 0..n {
        if j != k {
            let diff = a[k].clone() - &a[j];
            first = first + &diff.try_recip()?;
            pk = pk * &diff;
        }
    }
    let mut m = -(d.kappa[k].clone() * &first);
    for s in 0..n {
        if s == k {
            continue;
        }
        let dsk = a[s].clone() - &a[k];
        let mut den = dsk.clone() * &dsk;
        for j in 0..n {
            if j != s && j != k {
                den = den * &(a[s].clone() - &a[j]);
            }
        }
        m = m + &(d.kappa[s].clone() * &pk * &den.try_recip()?);
    }
    Ok(m)
}

/// Flow of `H(F)` on the nodes: `ȧ_k = Σ_i ∂H/∂F_i · ∂F_i/∂κ_k`, `κ̇_k = −M_k ȧ_k`.
/// `dh` holds `∂H/∂F_i` evaluated at the current coefficients.
pub fn lagrange_flow<C: Coeff>(d: &NodeData<C>, dh: &[C]) -> Result<(Vec<C>, Vec<C>)> {
    let basis = basis_coeffs(&d.a)?;
    let mut adot = Vec::with_capacity(d.n());
    let mut kdot = Vec::with_capacity(d.n());
    for (k, row) in basis.iter().enumerate() {
        let v = row.iter().zip(dh).fold(C::zero(), |acc, (c, h)| acc + &(c.clone() * h));
        kdot.push(-(multiplier(d, k)? * &v));
        adot.push(v);
    }
    Ok((adot, kdot))
}

fn seeded_nodes(n: usize, sampler: &mut Sampler) -> NodeData<Scalar> {
    let a = sampler.distinct(n);
    let a = a.into_iter().enumerate().map(|(k, v)| Scalar::var(VarId::A(k as u8 + 1), v)).collect();
    let kappa = (0..n).map(|k| Scalar::var(VarId::Kappa(k as u8 + 1), sampler.rational())).collect();
    NodeData { a, kappa }
}

fn jets(v: &[Scalar]) -> Result<Vec<Jet>> {
    v.iter().map(Scalar::take_limit).collect()
}

fn node_values(d: &NodeData<Scalar>) -> String {
    let show = |v: &[Scalar]| {
        v.iter()
            .map(|s| format!("{}", s.take_limit().map(|j| j.value).unwrap_or_default()))
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!("a = [{}], kappa = [{}]", show(&d.a), show(&d.kappa))
}

/// `{F_i, F_j} = 0` for all `i < j`. With `perturb`, `F_1` is replaced by `F_1 + a_1`
/// (a control that must fail).
pub fn involution_check_with(n: usize, trials: usize, seed: u64, perturb: bool) -> Result<CheckReport> {
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidInput("n must lie in 2..=8"));
    }
    let mut rep = CheckReport::new(&format!("lagrange-involution-n{n}"), 0, trials);
    rep.notes.push(format!("n = {n}"));
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        rep.seeds.push(s);
        let mut sampler = Sampler::new(s, DEFAULT_BOUND);
        let d = seeded_nodes(n, &mut sampler);
        let mut f = jets(&lagrange_coeffs(&d)?)?;
        if perturb {
            f[1] = f[1].clone() + &d.a[0].take_limit()?;
        }
        for i in 0..n {
            for j in i + 1..n {
                let b = poisson_bracket(&f[i], &f[j]);
                rep.record(&format!("{{F{i},F{j}}}"), &b);
                if !b.is_zero() {
                    rep.fail(Failure::new(t, s, format!("{{F{i},F{j}}}"), format!("{b} at {}", node_values(&d))));
                }
            }
        }
    }
    Ok(rep.finish())
}

pub fn involution_check(n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    involution_check_with(n, trials, seed, false)
}

/// Random polynomial in `F_0 … F_(n−1)` of total degree ≤ 3, as `(coeff, exponents)`.
fn random_polynomial(n: usize, sampler: &mut Sampler) -> Vec<(Rational, Vec<u32>)> {
    let mut terms = Vec::new();
    for _ in 0..4 {
        let mut e = alloc::vec![0u32; n];
        let mut deg = 0;
        for slot in e.iter_mut() {
            let pick = (sampler.index(4) as u32).min(3 - deg);
            *slot = pick;
            deg += pick;
        }
        terms.push((sampler.signed_rational(), e));
    }
    terms
}

fn eval_monomials(terms: &[(Rational, Vec<u32>)], f: &[Scalar]) -> Scalar {
    let mut acc = Scalar::default();
    for (c, e) in terms {
        let mut m = Scalar::rational(c.clone());
        for (x, k) in f.iter().zip(e) {
            m = m * &x.pow(*k);
        }
        acc = acc + &m;
    }
    acc
}

/// Multiplier relation `∂F_i/∂a_k = M_k ∂F_i/∂κ_k` for all `i, k`, its extension to five
/// random polynomials `H(F)`, and `κ̇_k = −M_k ȧ_k` for the flow of each `H`.
pub fn gradient_relation_check(n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidInput("n must lie in 2..=8"));
    }
    let mut rep = CheckReport::new(&format!("lagrange-gradient-n{n}"), 0, trials);
    rep.notes.push(format!("n = {n}"));
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        rep.seeds.push(s);
        let mut sampler = Sampler::new(s, DEFAULT_BOUND);
        let d = seeded_nodes(n, &mut sampler);
        let f = lagrange_coeffs(&d)?;
        let fj = jets(&f)?;
        let plain = NodeData {
            a: d.a.iter().map(|x| Ok(x.take_limit()?.value)).collect::<Result<Vec<Rational>>>()?,
            kappa: d.kappa.iter().map(|x| Ok(x.take_limit()?.value)).collect::<Result<Vec<Rational>>>()?,
        };
        let m: Vec<Rational> = (0..n).map(|k| multiplier(&plain, k)).collect::<Result<_>>()?;
        let check = |rep: &mut CheckReport, label: String, h: &Jet| {
            for (k, mk) in m.iter().enumerate() {
                let (ak, kk) = (VarId::A(k as u8 + 1), VarId::Kappa(k as u8 + 1));
                let defect = h.partial(ak) - mk * h.partial(kk);
                rep.record(&label, &defect);
                if !defect.is_zero() {
                    rep.fail(Failure::new(t, s, format!("{label}, k={}", k + 1), format!("{defect}")));
                }
                // ȧ_k = ∂H/∂κ_k, κ̇_k = −∂H/∂a_k
                let flow = -h.partial(ak) + mk * h.partial(kk);
                if !flow.is_zero() {
                    rep.fail(Failure::new(t, s, format!("{label} flow, k={}", k + 1), format!("{flow}")));
                }
            }
        };
        for (i, fi) in fj.iter().enumerate() {
            check(&mut rep, format!("multiplier F{i}"), fi);
        }
        for p in 0..5 {
            let poly = random_polynomial(n, &mut sampler);
            let h = eval_monomials(&poly, &f).take_limit()?;
            check(&mut rep, format!("polynomial H{p}"), &h);
        }
    }
    Ok(rep.finish())
}

/// One-point summary used in reports.
pub fn describe<C: core::fmt::Display>(a: &[C], kappa: &[C]) -> String {
    let join = |v: &[C]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ");
    format!("a = [{}], kappa = [{}]", join(a), join(kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use alloc::vec;

    fn nd(a: &[i64], k: &[i64]) -> NodeData<Rational> {
        NodeData::new(a.iter().map(|&x| int(x)).collect(), k.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(lagrange_coeffs(&nd(&[7], &[5])).unwrap(), vec![int(5)]);
        assert_eq!(lagrange_coeffs(&nd(&[1, 2], &[3, 5])).unwrap(), vec![int(1), int(2)]);
        assert_eq!(lagrange_coeffs(&nd(&[0, 1, 2], &[0, 1, 4])).unwrap(), vec![int(0), int(0), int(1)]);
    }

    #[test]
    fn duplicate_nodes() {
        assert_eq!(NodeData::new(vec![int(1), int(1)], vec![int(0), int(2)]), Err(Error::DuplicateNodes));
    }

    #[test]
    fn two_node_multiplier() {
        let d = nd(&[1, 2], &[3, 5]);
        assert_eq!(multiplier(&d, 0).unwrap(), int(-2));
        // ∂F₁/∂a₁ = −(κ₁−κ₂)/(a₁−a₂)² = 2 and M₁·∂F₁/∂κ₁ = −2·1/(a₁−a₂) = 2
        let f1_da1 = -(int(3) - int(5)) / ((int(1) - int(2)) * (int(1) - int(2)));
        let f1_dk1 = int(1) / (int(1) - int(2));
        assert_eq!(f1_da1, multiplier(&d, 0).unwrap() * f1_dk1);
        let d = nd(&[3, -4], &[1, 9]);
        assert_eq!(multiplier(&d, 0).unwrap(), (int(9) - int(1)) / (int(3) - int(-4)));
    }

    #[test]
    fn reconstruction_and_permutation() {
        let d = NodeData::new(vec![rat(1, 3), int(2), rat(-5, 2), int(7)], vec![int(4), rat(1, 9), int(0), int(-3)]).unwrap();
        let f = lagrange_coeffs(&d).unwrap();
        for (a, k) in d.a.iter().zip(&d.kappa) {
            assert_eq!(eval_poly(&f, a), *k);
        }
        let p = NodeData::new(vec![d.a[2].clone(), d.a[0].clone(), d.a[3].clone(), d.a[1].clone()], vec![d.kappa[2].clone(), d.kappa[0].clone(), d.kappa[3].clone(), d.kappa[1].clone()]).unwrap();
        assert_eq!(lagrange_coeffs(&p).unwrap(), f);
    }

    #[test]
    fn involution_small() {
        assert!(involution_check(3, 5, 1).unwrap().passed);
        assert!(!involution_check_with(3, 2, 1, true).unwrap().passed);
        assert!(involution_check(1, 1, 1).is_err());
    }

    #[test]
    fn gradient_relations_small() {
        let r = gradient_relation_check(3, 3, 4).unwrap();
        assert!(r.passed, "{:?}", r.failures);
    }

    #[test]
    fn flow_matches_gradient_of_product() {
        // H = F₀F₁ on two nodes, ∂H/∂F = (F₁, F₀)
        let d = nd(&[1, 2], &[3, 5]);
        let f = lagrange_coeffs(&d).unwrap();
        let (adot, kdot) = lagrange_flow(&d, &[f[1].clone(), f[0].clone()]).unwrap();
        // F₀ = (a₁κ₂ − a₂κ₁)/(a₁−a₂), F₁ = (κ₁−κ₂)/(a₁−a₂); ∂H/∂κ₁ at (1,2,3,5)
        let (a1, a2, k1, k2) = (int(1), int(2), int(3), int(5));
        let d = a1.clone() - &a2;
        let df0 = -a2.clone() / &d;
        let df1 = int(1) / &d;
        assert_eq!(adot[0], df0 * &f[1] + df1 * &f[0]);
        let _ = (k1, k2);
        assert_eq!(kdot[0], -(multiplier(&nd(&[1, 2], &[3, 5]), 0).unwrap() * &adot[0]));
    }
}
