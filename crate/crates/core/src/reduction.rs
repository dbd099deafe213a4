//! Constraint loci, admissibility of reductions and the checks of the reduced systems.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::closed_form as cf;
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::exact::{int, rat, sample_curve, sample_phase_point, Assignment, Jet, Rational, Sampler, VarId, DEFAULT_BOUND, DEFAULT_EPS_TERMS};
use crate::hamiltonian::{hamiltonian_jet, vector_field_from_jet, with_eps_retry, HamiltonianSpec, VectorField};
use crate::lagrange::{lagrange_coeffs, NodeData};
use crate::lax::{is_free_beta, PhasePoint};
use crate::linsolve::solve;
use crate::report::{CheckReport, Failure};

/// Coordinates pinned to `0` and coordinates sent to `0` through `ε`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSet {
    pub hard_zeros: BTreeSet<VarId>,
    pub limit_vars: BTreeSet<VarId>,
    pub label: String,
}

impl ConstraintSet {
    pub fn constrained(&self) -> impl Iterator<Item = &VarId> {
        self.hard_zeros.iter().chain(self.limit_vars.iter())
    }
}

/// Which component of `α_s` survives on a locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `α_s = (α_1s, 0)`
    First,
    /// `α_s = (0, α_2s)`
    Second,
}

/// Orientation of the non-gauge points in the standard loci: odd points keep the
/// second component, even points the first.
pub fn standard_pattern(genus: usize) -> Vec<Orientation> {
    (1..=2 * genus - 2).map(|s| if s % 2 == 1 { Orientation::Second } else { Orientation::First }).collect()
}

/// The pattern with points `2k−1` and `2k` exchanged.
pub fn mirror_pattern(genus: usize) -> Vec<Orientation> {
    standard_pattern(genus)
        .into_iter()
        .map(|o| if o == Orientation::First { Orientation::Second } else { Orientation::First })
        .collect()
}

/// Locus of a pattern: the vanishing α-components and all free β are zero. The
/// vanishing component of the lowest-index `First` point is taken through `ε`.
pub fn pattern_constraints(genus: usize, pattern: &[Orientation], label: &str) -> Result<ConstraintSet> {
    if pattern.len() != 2 * genus - 2 {
        return Err(Error::InvalidInput("pattern must orient every non-gauge point"));
    }
    let firsts = pattern.iter().filter(|o| **o == Orientation::First).count();
    if firsts != genus - 1 {
        return Err(Error::InvalidInput("pattern must split points evenly"));
    }
    let mut cs = ConstraintSet { label: label.into(), ..Default::default() };
    let mut limit_taken = false;
    for (k, o) in pattern.iter().enumerate() {
        let s = k as u8 + 1;
        let id = match o {
            Orientation::First => VarId::Alpha(2, s),
            Orientation::Second => VarId::Alpha(1, s),
        };
        if *o == Orientation::First && !limit_taken {
            cs.limit_vars.insert(id);
            limit_taken = true;
        } else {
            cs.hard_zeros.insert(id);
        }
    }
    for s in 1..=2 * genus {
        for i in 1..=2 {
            if is_free_beta(genus, i, s) {
                cs.hard_zeros.insert(VarId::Beta(i as u8, s as u8));
            }
        }
    }
    Ok(cs)
}

/// 0-based point groups `(second-component points, first-component points)`, gauge points included.
pub fn pattern_groups(genus: usize, pattern: &[Orientation]) -> [Vec<usize>; 2] {
    let mut second: Vec<usize> = Vec::new();
    let mut first: Vec<usize> = Vec::new();
    for (k, o) in pattern.iter().enumerate() {
        match o {
            Orientation::First => first.push(k),
            Orientation::Second => second.push(k),
        }
    }
    first.push(2 * genus - 2);
    second.push(2 * genus - 1);
    [second, first]
}

pub fn canonical_reduction(genus: usize) -> Result<ConstraintSet> {
    if !(2..=3).contains(&genus) {
        return Err(Error::UnsupportedGenus(genus));
    }
    pattern_constraints(genus, &standard_pattern(genus), "canonical")
}

pub fn mirror_reduction(genus: usize) -> Result<ConstraintSet> {
    if !(2..=3).contains(&genus) {
        return Err(Error::UnsupportedGenus(genus));
    }
    pattern_constraints(genus, &mirror_pattern(genus), "mirror")
}

/// The standard reduction and its mirror image.
pub fn builtin_reductions(genus: usize) -> Result<Vec<ConstraintSet>> {
    Ok(alloc::vec![canonical_reduction(genus)?, mirror_reduction(genus)?])
}

/// Point permutation carrying the canonical locus to the mirror locus (0-based).
pub fn mirror_permutation(genus: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..2 * genus).collect();
    for k in 0..genus - 1 {
        p.swap(2 * k, 2 * k + 1);
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// `b_s` are independent random values.
    Free,
    /// Curve coefficients (except those held fixed) are fitted so that `b_s² = P(a_s)`.
    OnCurve,
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub trials: usize,
    pub seed: u64,
    pub bound: u64,
    pub eps_terms: u32,
    pub sampling: SamplingMode,
    pub spec: HamiltonianSpec,
    /// `p₁` for genus 2.
    pub p1: Rational,
}

impl CheckConfig {
    pub fn new(genus: usize) -> CheckConfig {
        CheckConfig {
            trials: if genus == 2 { 20 } else { 10 },
            seed: 0,
            bound: DEFAULT_BOUND,
            eps_terms: DEFAULT_EPS_TERMS,
            sampling: SamplingMode::Free,
            spec: HamiltonianSpec::default(),
            p1: Rational::zero(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }
}

/// Curve coefficients held fixed: `p₁` in genus 2, `p₁ … p_g` = 0 otherwise.
fn fixed_coefficients(genus: usize, p1: &Rational) -> BTreeMap<usize, Rational> {
    let mut m = BTreeMap::new();
    if genus == 2 {
        m.insert(1, p1.clone());
    } else {
        for i in 1..=genus {
            m.insert(i, Rational::zero());
        }
    }
    m
}

/// The curve through all `(a_s, b_s)` with `p₁` given; `p₂ … p_(2g+1)` solve a Vandermonde system.
pub fn fit_curve(genus: usize, p1: &Rational, values: &Assignment) -> Result<CurveSpec> {
    let n = 2 * genus;
    let deg = 2 * genus + 1;
    let mut m = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for s in 1..=n {
        let a = values.get(&VarId::A(s as u8)).ok_or(Error::InvalidInput("missing a"))?;
        let b = values.get(&VarId::B(s as u8)).ok_or(Error::InvalidInput("missing b"))?;
        let pw = |k: usize| (0..k).fold(Rational::one(), |acc, _| acc * a);
        m.push((2..=deg).map(|i| pw(deg - i)).collect::<Vec<_>>());
        rhs.push(b * b - pw(deg) - p1 * pw(deg - 1));
    }
    let sol = solve(m, rhs)?;
    let mut p = alloc::vec![p1.clone()];
    p.extend(sol);
    CurveSpec::new(genus, p)
}

/// Seeded sample for one trial: `(seed, curve, values)`.
pub fn sample_trial(genus: usize, cfg: &CheckConfig, trial: usize) -> Result<(u64, CurveSpec, Assignment)> {
    let seed = cfg.seed.wrapping_add(trial as u64);
    let values = sample_phase_point(genus, seed, cfg.bound);
    let mut cs = Sampler::new(seed ^ 0x9e37_79b9_7f4a_7c15, cfg.bound);
    let curve = match cfg.sampling {
        SamplingMode::Free => sample_curve(genus, &mut cs, &fixed_coefficients(genus, &cfg.p1)),
        SamplingMode::OnCurve => {
            let p1 = if genus == 2 { cfg.p1.clone() } else { Rational::zero() };
            fit_curve(genus, &p1, &values)?
        }
    };
    Ok((seed, curve, values))
}

/// `H` with its gradient at a locus point, retrying with more ε-terms if needed.
pub fn locus_jet(cs: &ConstraintSet, curve: &CurveSpec, values: &Assignment, cfg: &CheckConfig) -> Result<Jet> {
    with_eps_retry(cfg.eps_terms, |terms| {
        let p = PhasePoint::build(curve, values, Some(cs), true, terms)?;
        hamiltonian_jet(&p, &cfg.spec)
    })
}

pub fn locus_vector_field(cs: &ConstraintSet, curve: &CurveSpec, values: &Assignment, cfg: &CheckConfig) -> Result<VectorField> {
    Ok(vector_field_from_jet(curve.genus, &locus_jet(cs, curve, values, cfg)?))
}

/// Values seen by the closed forms: constrained coordinates are zero.
fn restrict(values: &Assignment, cs: &ConstraintSet) -> Assignment {
    let mut v = values.clone();
    for id in cs.constrained() {
        v.insert(*id, Rational::zero());
    }
    v
}

fn trial_loop(
    rep: &mut CheckReport,
    genus: usize,
    cfg: &CheckConfig,
    mut body: impl FnMut(&mut CheckReport, usize, u64, &CurveSpec, &Assignment) -> Result<()>,
) {
    for t in 0..cfg.trials {
        let (seed, curve, values) = match sample_trial(genus, cfg, t) {
            Ok(x) => x,
            Err(e) => {
                rep.fail(Failure::new(t, cfg.seed.wrapping_add(t as u64), "sampling".into(), e.to_string()));
                continue;
            }
        };
        rep.seeds.push(seed);
        if let Err(e) = body(rep, t, seed, &curve, &values) {
            rep.fail(Failure::new(t, seed, "evaluation".into(), e.to_string()).at(&curve, &values));
        }
    }
}

fn check_zero(rep: &mut CheckReport, t: usize, seed: u64, item: &str, defect: Rational, curve: &CurveSpec, values: &Assignment) {
    rep.record(item, &defect);
    if !defect.is_zero() {
        rep.fail(Failure::new(t, seed, item.into(), format!("defect {defect}")).at(curve, values));
    }
}

fn sign_of(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Requires `engine = σ·display` with `σ ∈ {±1}` shared by every observation.
fn check_signed(
    rep: &mut CheckReport,
    slot: &mut Option<i32>,
    t: usize,
    seed: u64,
    item: &str,
    engine: &Rational,
    display: &Rational,
    curve: &CurveSpec,
    values: &Assignment,
) {
    if display.is_zero() {
        check_zero(rep, t, seed, item, engine.clone(), curve, values);
        return;
    }
    let ratio = engine / display;
    let ok_magnitude = ratio.abs().is_one();
    let s = sign_of(&ratio);
    if !ok_magnitude {
        rep.record(item, &(engine.abs() - display.abs()));
        rep.fail(Failure::new(t, seed, item.into(), format!("engine {engine}, display {display}")).at(curve, values));
        return;
    }
    rep.record(item, &Rational::zero());
    if !CheckReport::observe_sign(slot, s) {
        rep.fail(Failure::new(t, seed, item.into(), format!("sign flipped to {s}")).at(curve, values));
    }
}

/// Time derivative of a coordinate under the canonical pairing.
fn derivative(h: &Jet, v: VarId) -> Rational {
    let d = h.partial(v.conjugate().expect("dynamical variable"));
    if v.is_position() {
        d
    } else {
        -d
    }
}

/// Every constrained coordinate, and the gauge-fixed `β` components, must have zero
/// time derivative at every sampled locus point.
pub fn check_admissibility(genus: usize, cs: &ConstraintSet, cfg: &CheckConfig) -> CheckReport {
    let mut rep = CheckReport::new("admissibility", genus, cfg.trials);
    rep.notes.push(format!("reduction: {}", cs.label));
    let mut items: Vec<VarId> = cs.constrained().copied().collect();
    items.push(VarId::Beta(1, (2 * genus - 1) as u8));
    items.push(VarId::Beta(2, (2 * genus) as u8));
    items.sort();
    trial_loop(&mut rep, genus, cfg, |rep, t, seed, curve, values| {
        let h = locus_jet(cs, curve, values, cfg)?;
        for v in &items {
            check_zero(rep, t, seed, &v.name(), derivative(&h, *v), curve, values);
        }
        Ok(())
    });
    rep.finish()
}

fn slice(values: &Assignment, f: impl Fn(u8) -> VarId, n: usize) -> Vec<Rational> {
    (1..=n).map(|s| values.get(&f(s as u8)).cloned().unwrap_or_default()).collect()
}

fn permuted(v: &[Rational], perm: &[usize]) -> Vec<Rational> {
    perm.iter().map(|&i| v[i].clone()).collect()
}

fn reference_hamiltonian(genus: usize, a: &[Rational], k: &[Rational]) -> Result<Rational> {
    match genus {
        2 => cf::g2_reduced_hamiltonian(a, k),
        3 => cf::g3_reduced_hamiltonian(a, k),
        g => Err(Error::UnsupportedGenus(g)),
    }
}

/// Engine `H` on the canonical locus against the closed-form reduced Hamiltonian;
/// `σ_H = engine/display` must be one sign throughout.
pub fn reduced_hamiltonian_check(genus: usize, cfg: &CheckConfig) -> CheckReport {
    let mut rep = CheckReport::new("reduced-hamiltonian", genus, cfg.trials);
    let cs = match canonical_reduction(genus) {
        Ok(c) => c,
        Err(e) => {
            rep.fail(Failure::new(0, cfg.seed, "setup".into(), e.to_string()));
            return rep.finish();
        }
    };
    let mut sigma_h = None;
    trial_loop(&mut rep, genus, cfg, |rep, t, seed, curve, values| {
        let h = locus_jet(&cs, curve, values, cfg)?;
        let n = 2 * genus;
        let (a, k) = (slice(values, VarId::A, n), slice(values, VarId::Kappa, n));
        let display = reference_hamiltonian(genus, &a, &k)?;
        check_signed(rep, &mut sigma_h, t, seed, "H", &h.value, &display, curve, values);
        Ok(())
    });
    rep.sigma_h = sigma_h;
    rep.finish()
}

/// The mirror locus passes admissibility and its `H` equals the closed form
/// with the points permuted, with the same `σ_H`.
pub fn mirror_check(genus: usize, cfg: &CheckConfig) -> CheckReport {
    let mut rep = CheckReport::new("mirror", genus, cfg.trials);
    let cs = match mirror_reduction(genus) {
        Ok(c) => c,
        Err(e) => {
            rep.fail(Failure::new(0, cfg.seed, "setup".into(), e.to_string()));
            return rep.finish();
        }
    };
    rep.merge(check_admissibility(genus, &cs, cfg));
    let perm = mirror_permutation(genus);
    let mut sigma_h = None;
    trial_loop(&mut rep, genus, cfg, |rep, t, seed, curve, values| {
        let h = locus_jet(&cs, curve, values, cfg)?;
        let n = 2 * genus;
        let (a, k) = (slice(values, VarId::A, n), slice(values, VarId::Kappa, n));
        let display = reference_hamiltonian(genus, &permuted(&a, &perm), &permuted(&k, &perm))?;
        check_signed(rep, &mut sigma_h, t, seed, "H (permuted)", &h.value, &display, curve, values);
        Ok(())
    });
    rep.sigma_h = sigma_h;
    rep.finish()
}

/// Interpolation coefficients of a group of points.
fn group_integrals(values: &Assignment, group: &[usize]) -> Result<Vec<Rational>> {
    let a = group.iter().map(|&s| values[&VarId::A(s as u8 + 1)].clone()).collect();
    let k = group.iter().map(|&s| values[&VarId::Kappa(s as u8 + 1)].clone()).collect();
    lagrange_coeffs(&NodeData::new(a, k)?)
}

/// `Σ_{i+j=g−1} F_i F_j`.
fn convolution_form(f: &[Rational], genus: usize) -> Rational {
    (0..genus).map(|i| &f[i] * &f[genus - 1 - i]).sum()
}

/// Closed form of a group's reduced Hamiltonian in terms of its integrals, for curve coefficient `p₁`.
pub fn integral_form(genus: usize, f: &[Rational], p1: &Rational) -> Rational {
    if genus == 2 {
        int(2) * (&f[0] + p1 * &f[1]) * &f[1]
    } else {
        convolution_form(f, genus)
    }
}

/// The form the engine realises in genus 2 with `p₁ ≠ 0`: `2F₀F₁ − (p₁/2)F₁²`.
pub fn g2_observed_form(f: &[Rational], p1: &Rational) -> Rational {
    int(2) * &f[0] * &f[1] - p1 * rat(1, 2) * &f[1] * &f[1]
}

/// Points whose `κ` are set equal so that all but `keep` groups carry no dynamics.
fn isolate(values: &Assignment, groups: &[Vec<usize>], keep: usize) -> Assignment {
    let mut v = values.clone();
    for (gi, g) in groups.iter().enumerate() {
        if gi == keep {
            continue;
        }
        let k0 = v[&VarId::Kappa(g[0] as u8 + 1)].clone();
        for &s in &g[1..] {
            v.insert(VarId::Kappa(s as u8 + 1), k0.clone());
        }
    }
    v
}

/// The reduced Hamiltonian expressed through the interpolation integrals of each
/// group, per group and summed. `sigma_h` is the sign from the closed-form
/// comparison: the display-normalised value `σ_H·H` is compared with `σ_H·Φ`.
pub fn factorization_check(genus: usize, cfg: &CheckConfig, sigma_h: i32) -> CheckReport {
    let mut rep = CheckReport::new("factorization", genus, cfg.trials);
    rep.sigma_h = Some(sigma_h);
    let p1 = if genus == 2 { cfg.p1.clone() } else { Rational::zero() };
    rep.notes.push(format!("p1 = {p1}"));
    let cs = match canonical_reduction(genus) {
        Ok(c) => c,
        Err(e) => {
            rep.fail(Failure::new(0, cfg.seed, "setup".into(), e.to_string()));
            return rep.finish();
        }
    };
    let groups = pattern_groups(genus, &standard_pattern(genus));
    let s = int(sigma_h as i64);
    let mut observed_holds = true;
    trial_loop(&mut rep, genus, cfg, |rep, t, seed, curve, values| {
        let mut cases: Vec<(String, Assignment)> = alloc::vec![("sum".to_string(), values.clone())];
        for g in 0..groups.len() {
            cases.push((format!("group {}", g + 1), isolate(values, &groups, g)));
        }
        for (label, v) in cases {
            let h = locus_jet(&cs, curve, &v, cfg)?.value;
            let mut phi = Rational::zero();
            let mut observed = Rational::zero();
            for g in &groups {
                let f = group_integrals(&v, g)?;
                phi += integral_form(genus, &f, &p1);
                observed += if genus == 2 { g2_observed_form(&f, &p1) } else { convolution_form(&f, genus) };
            }
            let scaled = &s * &h;
            check_zero(rep, t, seed, &label, scaled - &s * &phi, curve, &v);
            observed_holds &= h == observed;
        }
        Ok(())
    });
    if genus == 2 {
        rep.notes.push(format!("engine H equals Σ(2F0F1 − (p1/2)F1²) at every point: {observed_holds}"));
    }
    rep.finish()
}

/// The genus-2 vector field on the locus against the reference expressions.
pub fn reference_vector_field_check(cfg: &CheckConfig) -> CheckReport {
    let genus = 2;
    let mut rep = CheckReport::new("reference-vector-field", genus, cfg.trials);
    let cs = canonical_reduction(genus).expect("genus 2");
    let ids = [
        VarId::A(1),
        VarId::A(2),
        VarId::A(3),
        VarId::A(4),
        VarId::Kappa(1),
        VarId::Kappa(2),
        VarId::Kappa(3),
        VarId::Kappa(4),
        VarId::Alpha(1, 2),
        VarId::Alpha(2, 1),
    ];
    trial_loop(&mut rep, genus, cfg, |rep, t, seed, curve, values| {
        let vf = locus_vector_field(&cs, curve, values, cfg)?;
        let (a, b, k) = (slice(values, VarId::A, 4), slice(values, VarId::B, 4), slice(values, VarId::Kappa, 4));
        let reference = cf::g2_reference_vector_field(&a, &b, &k, &values[&VarId::Alpha(1, 2)], &values[&VarId::Alpha(2, 1)])?;
        for (id, p) in ids.iter().zip(reference.iter()) {
            check_zero(rep, t, seed, &format!("d{id}"), vf.get(*id) - p, curve, values);
        }
        Ok(())
    });
    rep.finish()
}

fn g2_relations(rep: &mut CheckReport, cfg: &CheckConfig) {
    let cs = canonical_reduction(2).expect("genus 2");
    let mut sigma = None;
    trial_loop(rep, 2, cfg, |rep, t, seed, curve, values| {
        let vf = locus_vector_field(&cs, curve, values, cfg)?;
        let (a, b, k) = (slice(values, VarId::A, 4), slice(values, VarId::B, 4), slice(values, VarId::Kappa, 4));
        let adot: Vec<Rational> = (1..=4).map(|s| vf.get(VarId::A(s))).collect();
        let kdot: Vec<Rational> = (1..=4).map(|s| vf.get(VarId::Kappa(s))).collect();
        let partner = [3usize, 2, 1, 0];
        for s in 0..4 {
            let (p, q) = (s.min(partner[s]), s.max(partner[s]));
            // κ̇_s (a_p − a_q) − (κ_p − κ_q) ȧ_s
            let defect = &kdot[s] * (&a[p] - &a[q]) - (&k[p] - &k[q]) * &adot[s];
            check_zero(rep, t, seed, &format!("kappa{} ratio", s + 1), defect, curve, values);
        }
        let al12 = &values[&VarId::Alpha(1, 2)];
        let al21 = &values[&VarId::Alpha(2, 1)];
        let d12 = vf.get(VarId::Alpha(1, 2)) * (&a[1] - &a[2]) - al12 * (&b[1] + &b[2]) * &adot[2];
        check_zero(rep, t, seed, "alpha12 flow", d12, curve, values);
        let d21 = vf.get(VarId::Alpha(2, 1)) * (&a[0] - &a[3]) - al21 * (&b[0] + &b[3]) * &adot[3];
        check_zero(rep, t, seed, "alpha21 flow", d21, curve, values);
        let shown = cf::g2_reference_adot(&a, &k)?;
        for s in 0..4 {
            check_signed(rep, &mut sigma, t, seed, &format!("a{} orientation", s + 1), &adot[s], &shown[s], curve, values);
        }
        Ok(())
    });
    rep.sigma = sigma;
}

fn g3_relations(rep: &mut CheckReport, cfg: &CheckConfig) {
    let cs = canonical_reduction(3).expect("genus 3");
    let mut sigma = None;
    let mut sigma_eq = None;
    trial_loop(rep, 3, cfg, |rep, t, seed, curve, values| {
        let vf = locus_vector_field(&cs, curve, values, cfg)?;
        let (a, k) = (slice(values, VarId::A, 6), slice(values, VarId::Kappa, 6));
        let adot: Vec<Rational> = (1..=6).map(|s| vf.get(VarId::A(s))).collect();
        let kdot: Vec<Rational> = (1..=6).map(|s| vf.get(VarId::Kappa(s))).collect();
        for (ti, tr) in cf::G3_TRIPLES.iter().enumerate() {
            let [i, j, l] = *tr;
            let delta = cf::g3_delta(&a[i], &a[j], &a[l]);
            let nums = cf::g3_kappa_numerators(&a[i], &a[j], &a[l], &k[i], &k[j], &k[l]);
            for (r, n) in [i, j, l].iter().zip(nums.iter()) {
                let defect = &kdot[*r] * &delta - n * &adot[*r];
                check_zero(rep, t, seed, &format!("triple {} kappa{} ratio", ti + 1, r + 1), defect, curve, values);
            }
            let sum = (&adot[i] + &adot[j] + &adot[l]) * &delta;
            let rhs = cf::g3_sum_rule_numerator(&a[i], &a[j], &a[l], &k[i], &k[j], &k[l]);
            check_signed(rep, &mut sigma, t, seed, &format!("triple {} sum rule", ti + 1), &sum, &rhs, curve, values);
        }
        // κ₁ = κ₃ = κ₆ = K
        let mut eq = values.clone();
        let kk = values[&VarId::Kappa(1)].clone();
        eq.insert(VarId::Kappa(3), kk.clone());
        eq.insert(VarId::Kappa(6), kk.clone());
        let vf = locus_vector_field(&cs, curve, &eq, cfg)?;
        let (a1, a3, a6) = (&a[0], &a[2], &a[5]);
        let b = slice(values, VarId::B, 6);
        let shown = cf::g3_equal_kappa_adot(a1, a3, a6, &kk)?;
        for (idx, s) in [1u8, 3, 6].iter().enumerate() {
            check_signed(rep, &mut sigma_eq, t, seed, &format!("equal-kappa a{s}"), &vf.get(VarId::A(*s)), &shown[idx], curve, &eq);
        }
        let total = vf.get(VarId::A(1)) + vf.get(VarId::A(3)) + vf.get(VarId::A(6));
        check_zero(rep, t, seed, "equal-kappa sum", total, curve, &eq);
        for s in [1u8, 3, 6] {
            check_zero(rep, t, seed, &format!("equal-kappa kappa{s}"), vf.get(VarId::Kappa(s)), curve, &eq);
        }
        let (r21, r23) = cf::g3_equal_kappa_alpha_rates(a1, a3, a6, &b[0], &b[2], &b[5], &kk)?;
        let d1 = cf::g3_delta(a1, a3, a6);
        let span = &d1 * &d1;
        let al21 = &values[&VarId::Alpha(2, 1)];
        let al23 = &values[&VarId::Alpha(2, 3)];
        let s = int(sigma_eq.unwrap_or(1) as i64);
        check_zero(rep, t, seed, "equal-kappa alpha21", (vf.get(VarId::Alpha(2, 1)) - &s * al21 * r21) * &span, curve, &eq);
        check_zero(rep, t, seed, "equal-kappa alpha23", (vf.get(VarId::Alpha(2, 3)) - &s * al23 * r23) * &span, curve, &eq);
        Ok(())
    });
    if sigma != sigma_eq {
        rep.fail(Failure::new(0, cfg.seed, "orientation".into(), format!("sum rule {sigma:?}, equal-kappa {sigma_eq:?}")));
    }
    rep.sigma = sigma;
}

/// Ratio relations `κ̇/ȧ`, the α-flows, the genus-3 sum rule and the equal-κ system,
/// in cleared-denominator form. `σ` records the orientation of the closed-form flows.
pub fn relation_checks(genus: usize, cfg: &CheckConfig) -> CheckReport {
    let mut rep = CheckReport::new("relations", genus, cfg.trials);
    match genus {
        2 => g2_relations(&mut rep, cfg),
        3 => g3_relations(&mut rep, cfg),
        g => rep.fail(Failure::new(0, cfg.seed, "setup".into(), Error::UnsupportedGenus(g).to_string())),
    }
    rep.finish()
}

/// Admissibility of the locus of `pattern` and factorization of `H` through the
/// interpolation integrals of its two groups. Informational.
pub fn conjecture_probe(genus: usize, pattern: &[Orientation], cfg: &CheckConfig) -> CheckReport {
    let mut rep = CheckReport::new("conjecture", genus, cfg.trials);
    rep.informational = true;
    let cs = match pattern_constraints(genus, pattern, "probe") {
        Ok(c) => c,
        Err(e) => {
            rep.fail(Failure::new(0, cfg.seed, "setup".into(), e.to_string()));
            return rep.finish();
        }
    };
    let groups = pattern_groups(genus, pattern);
    rep.notes.push(format!("groups (1-based): {:?}", groups.iter().map(|g| g.iter().map(|s| s + 1).collect::<Vec<_>>()).collect::<Vec<_>>()));
    let mut cfg = cfg.clone();
    cfg.p1 = Rational::zero();
    rep.merge(check_admissibility(genus, &cs, &cfg));
    trial_loop(&mut rep, genus, &cfg, |rep, t, seed, curve, values| {
        let h = locus_jet(&cs, curve, values, &cfg)?.value;
        let mut phi = Rational::zero();
        for g in &groups {
            phi += convolution_form(&group_integrals(values, g)?, genus);
        }
        check_zero(rep, t, seed, "H - sum F_i F_j", h - phi, curve, values);
        Ok(())
    });
    rep.finish()
}

/// Closed-form integrals against `lagrange_coeffs` on the same nodes.
pub fn reference_integrals_check(genus: usize, trials: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("integrals-closed-form", genus, trials);
    let mut flipped = true;
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        rep.seeds.push(s);
        let v = sample_phase_point(genus, s, DEFAULT_BOUND);
        let n = 2 * genus;
        let (a, k) = (slice(&v, VarId::A, n), slice(&v, VarId::Kappa, n));
        let res: Result<()> = (|| {
            let (nodes, shown): (Vec<usize>, Vec<Rational>) = if genus == 2 {
                let (f0, f1) = cf::g2_integrals(&a[0], &a[3], &k[0], &k[3])?;
                (alloc::vec![0, 3], alloc::vec![f0, f1])
            } else {
                let (f0, f1, f2) = cf::g3_integrals(&a[0], &a[2], &a[5], &k[0], &k[2], &k[5])?;
                (alloc::vec![0, 2, 5], alloc::vec![f0, f1, f2])
            };
            let f = group_integrals(&v, &nodes)?;
            for (i, (x, y)) in f.iter().zip(shown.iter()).enumerate() {
                let item = format!("F{i}");
                rep.record(&item, &(x - y));
                if x != y {
                    flipped &= *x == -y.clone();
                    rep.fail(Failure::new(t, s, item, format!("interpolation {x}, display {y}")));
                }
            }
            Ok(())
        })();
        if let Err(e) = res {
            rep.fail(Failure::new(t, s, "evaluation".into(), e.to_string()));
        }
    }
    if !rep.passed && flipped {
        rep.notes.push("every mismatch is an exact sign flip of the closed-form coefficient".into());
    }
    rep.finish()
}

/// Value of `H` restricted to a locus, by closed form, for replay and tests.
pub fn restricted_values(values: &Assignment, cs: &ConstraintSet) -> Assignment {
    restrict(values, cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(genus: usize) -> CheckConfig {
        CheckConfig::new(genus).with_trials(2).with_seed(5)
    }

    #[test]
    fn builtin_sets() {
        let g2 = builtin_reductions(2).unwrap();
        assert_eq!(g2.len(), 2);
        let c = &g2[0];
        assert!(c.limit_vars.contains(&VarId::Alpha(2, 2)));
        assert!(c.hard_zeros.contains(&VarId::Alpha(1, 1)));
        assert_eq!(c.hard_zeros.len(), 7);
        let m = &g2[1];
        assert!(m.limit_vars.contains(&VarId::Alpha(2, 1)));
        assert!(m.hard_zeros.contains(&VarId::Alpha(1, 2)));
        let g3 = canonical_reduction(3).unwrap();
        for id in [VarId::Alpha(1, 1), VarId::Alpha(1, 3), VarId::Alpha(2, 4)] {
            assert!(g3.hard_zeros.contains(&id));
        }
        assert!(g3.limit_vars.contains(&VarId::Alpha(2, 2)));
        assert_eq!(g3.hard_zeros.len(), 3 + 10);
        assert_eq!(builtin_reductions(4), Err(Error::UnsupportedGenus(4)));
        assert!(c.hard_zeros.is_disjoint(&c.limit_vars));
    }

    #[test]
    fn groups_of_standard_pattern() {
        assert_eq!(pattern_groups(2, &standard_pattern(2)), [alloc::vec![0, 3], alloc::vec![1, 2]]);
        assert_eq!(pattern_groups(3, &standard_pattern(3)), [alloc::vec![0, 2, 5], alloc::vec![1, 3, 4]]);
    }

    #[test]
    fn admissible_canonical_genus_two() {
        let r = check_admissibility(2, &canonical_reduction(2).unwrap(), &quick(2));
        assert!(r.passed, "{:?}", r.failures);
    }

    #[test]
    fn sabotaged_locus_is_not_admissible() {
        let mut cs = ConstraintSet { label: "beta11 only".into(), ..Default::default() };
        cs.hard_zeros.insert(VarId::Beta(1, 1));
        let r = check_admissibility(2, &cs, &quick(2));
        assert!(!r.passed);
    }

    #[test]
    fn fitted_curve_passes_through_points() {
        let v = sample_phase_point(3, 2, 40);
        let c = fit_curve(3, &Rational::zero(), &v).unwrap();
        for s in 1..=6u8 {
            assert!(crate::curve::on_curve_defect(&c, &v[&VarId::A(s)], &v[&VarId::B(s)]).is_zero());
        }
    }

    #[test]
    fn spec_example_point() {
        // (a₁,a₄,κ₁,κ₄) = (1,2,3,5), (a₂,a₃,κ₂,κ₃) = (3,4,1,1)
        let mut v = sample_phase_point(2, 1, 10);
        for (id, x) in [
            (VarId::A(1), 1),
            (VarId::A(4), 2),
            (VarId::Kappa(1), 3),
            (VarId::Kappa(4), 5),
            (VarId::A(2), 3),
            (VarId::A(3), 4),
            (VarId::Kappa(2), 1),
            (VarId::Kappa(3), 1),
        ] {
            v.insert(id, int(x));
        }
        let cfg = CheckConfig::new(2);
        let h = locus_jet(&canonical_reduction(2).unwrap(), &CurveSpec::bare(2), &v, &cfg).unwrap();
        assert_eq!(h.value, int(4));
        let a = slice(&v, VarId::A, 4);
        let k = slice(&v, VarId::Kappa, 4);
        assert_eq!(cf::g2_reduced_hamiltonian(&a, &k).unwrap(), int(-4));
    }
}
