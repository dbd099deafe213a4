//! Complex-float integration of the reduced systems.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::closed_form as cf;
use crate::curve::CurveSpec;
use crate::error::Error;
use crate::exact::{sample_phase_point, to_f64, Assignment, Rational, VarId};
use crate::lagrange::{lagrange_coeffs, lagrange_flow, NodeData};
use crate::reduction::{canonical_reduction, locus_vector_field, CheckConfig};

/// Denominators below this magnitude stop an integration.
pub const SINGULAR_TOL: f64 = 1e-9;

/// Engine `ȧ` over closed-form `ȧ` in genus 2.
pub const ORIENTATION_G2: i32 = -1;
/// Engine `ȧ` over closed-form `ȧ` in genus 3.
pub const ORIENTATION_G3: i32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ScenarioId {
    G2Generic,
    G2LinearKappa,
    G3Generic,
    G3EqualKappa,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 4] = [ScenarioId::G2Generic, ScenarioId::G2LinearKappa, ScenarioId::G3Generic, ScenarioId::G3EqualKappa];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::G2Generic => "g2-generic",
            ScenarioId::G2LinearKappa => "g2-linear-kappa",
            ScenarioId::G3Generic => "g3-generic",
            ScenarioId::G3EqualKappa => "g3-equal-kappa",
        }
    }

    pub fn parse(s: &str) -> Option<ScenarioId> {
        ScenarioId::ALL.into_iter().find(|id| id.name() == s)
    }

    pub fn genus(self) -> usize {
        match self {
            ScenarioId::G2Generic | ScenarioId::G2LinearKappa => 2,
            _ => 3,
        }
    }

    /// State variable names, in state order.
    pub fn labels(self) -> Vec<String> {
        let names = |p: &str, idx: &[u8]| idx.iter().map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        match self {
            ScenarioId::G2Generic | ScenarioId::G2LinearKappa => {
                let mut v = names("a", &[1, 2, 3, 4]);
                v.extend(names("kappa", &[1, 2, 3, 4]));
                v.push("alpha12".into());
                v.push("alpha21".into());
                v.extend(names("b", &[1, 2, 3, 4]));
                v
            }
            ScenarioId::G3Generic => {
                let mut v = names("a", &[1, 2, 3, 4, 5, 6]);
                v.extend(names("kappa", &[1, 2, 3, 4, 5, 6]));
                v
            }
            ScenarioId::G3EqualKappa => {
                let mut v = names("a", &[1, 3, 6]);
                v.push("alpha21".into());
                v.push("alpha23".into());
                v.extend(names("b", &[1, 3, 6]));
                v
            }
        }
    }

    /// Names of the conserved quantities recorded along a trajectory.
    pub fn integral_labels(self) -> Vec<String> {
        match self {
            ScenarioId::G2Generic | ScenarioId::G2LinearKappa => vec!["F0_14".into(), "F1_14".into(), "F0_23".into(), "F1_23".into()],
            ScenarioId::G3Generic => ["136", "245"].iter().flat_map(|g| (0..3).map(move |i| format!("F{i}_{g}"))).collect(),
            ScenarioId::G3EqualKappa => (0..3).map(|i| format!("F{i}_136")).collect(),
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowScenario {
    pub id: ScenarioId,
    pub params: BTreeMap<String, Complex64>,
    pub initial: Vec<Complex64>,
    /// Time orientation applied to the closed-form right-hand sides.
    pub sigma: i32,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn omega(branch: i32) -> Complex64 {
    Complex64::from_polar(1.0, branch.signum() as f64 * 2.0 * PI / 3.0)
}

fn monomial_b(a: Complex64, degree: i32) -> Complex64 {
    a.powi(degree).sqrt()
}

impl FlowScenario {
    pub fn new(id: ScenarioId, initial: Vec<Complex64>) -> Result<FlowScenario, FlowError> {
        if initial.len() != id.labels().len() {
            return Err(FlowError::InvalidInput("state length does not match scenario"));
        }
        let sigma = if id.genus() == 2 { ORIENTATION_G2 } else { ORIENTATION_G3 };
        let sc = FlowScenario { id, params: BTreeMap::new(), initial, sigma };
        sc.validate()?;
        Ok(sc)
    }

    fn validate(&self) -> Result<(), FlowError> {
        let a = positions(self.id, &self.initial);
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if (a[i] - a[j]).norm() < SINGULAR_TOL {
                    return Err(FlowError::InvalidInput("initial a's must be pairwise distinct"));
                }
            }
        }
        rhs(self, &self.initial).map(|_| ()).map_err(|_| FlowError::InvalidInput("right-hand side singular at t0"))
    }

    /// Default scenario of each kind.
    pub fn preset(id: ScenarioId) -> FlowScenario {
        match id {
            ScenarioId::G2Generic => {
                let a = [1.0, -2.0, -4.0, 3.0];
                let k = [1.0, 0.5, -1.0, 2.0];
                let mut s: Vec<Complex64> = a.iter().chain(k.iter()).map(|&x| re(x)).collect();
                s.push(re(1.0));
                s.push(re(1.0));
                s.extend(a.iter().map(|&x| monomial_b(re(x), 5)));
                FlowScenario::new(id, s).expect("preset is regular")
            }
            ScenarioId::G2LinearKappa => FlowScenario::g2_linear_kappa(1.0, [0.5, 6.0, -7.0, -3.5]),
            ScenarioId::G3Generic => {
                let a = [1.0, -1.0, 2.5, 3.0, -2.5, -3.5];
                let k = [0.5, 1.0, -0.5, 0.25, 1.5, 1.0];
                FlowScenario::new(id, a.iter().chain(k.iter()).map(|&x| re(x)).collect()).expect("preset is regular")
            }
            ScenarioId::G3EqualKappa => FlowScenario::g3_equal_kappa(1.0, re(1.0), 1),
        }
    }

    /// `κ_s = c(a_s + 1)` for every point, so `c₁ = c₂ = c₃ = c` on both pairs.
    pub fn g2_linear_kappa(c: f64, a: [f64; 4]) -> FlowScenario {
        let mut s: Vec<Complex64> = a.iter().map(|&x| re(x)).collect();
        s.extend(a.iter().map(|&x| re(c * (x + 1.0))));
        s.push(re(1.0));
        s.push(re(1.0));
        s.extend(a.iter().map(|&x| monomial_b(re(x), 5)));
        let mut sc = FlowScenario::new(ScenarioId::G2LinearKappa, s).expect("linear-kappa state is regular");
        for name in ["c1", "c2", "c3"] {
            sc.params.insert(name.into(), re(c));
        }
        sc
    }

    /// `κ₁ = κ₃ = κ₆ = K` with `a₁ = C₂^{1/3}`, `a₃ = e^{±2πi/3}a₁`, `a₆ = −a₁ − a₃` (so `C₁ = 0`).
    pub fn g3_equal_kappa(k: f64, c2: Complex64, branch: i32) -> FlowScenario {
        let a1 = c2.cbrt();
        let a3 = omega(branch) * a1;
        let a6 = -a1 - a3;
        let mut s = vec![a1, a3, a6, re(1.0), re(1.0)];
        s.extend([a1, a3, a6].iter().map(|&x| monomial_b(x, 7)));
        let mut sc = FlowScenario::new(ScenarioId::G3EqualKappa, s).expect("equal-kappa state is regular");
        sc.params.insert("K".into(), re(k));
        sc.params.insert("C1".into(), Complex64::zero());
        sc.params.insert("C2".into(), c2);
        sc.params.insert("branch".into(), re(branch.signum() as f64));
        sc
    }

    pub fn param(&self, name: &str) -> Complex64 {
        self.params.get(name).copied().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub conserved: Vec<Vec<Complex64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("singularity approached at t = {t}")]
    SingularityApproached { t: f64, partial: Box<Trajectory> },
    #[error("branch tracking lost at t = {t}")]
    BranchTrackingLost { t: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error(transparent)]
    Engine(#[from] Error),
}

struct Singular;

fn guard(d: Complex64) -> Result<Complex64, Singular> {
    if d.norm() < SINGULAR_TOL || !d.is_finite() {
        Err(Singular)
    } else {
        Ok(d)
    }
}

fn positions(id: ScenarioId, s: &[Complex64]) -> Vec<Complex64> {
    match id {
        ScenarioId::G2Generic | ScenarioId::G2LinearKappa => s[0..4].to_vec(),
        ScenarioId::G3Generic => s[0..6].to_vec(),
        ScenarioId::G3EqualKappa => s[0..3].to_vec(),
    }
}

/// `ḃ = P′(a)ȧ/(2b)` for `P = x^degree`.
fn b_rate(a: Complex64, b: Complex64, adot: Complex64, degree: i32) -> Result<Complex64, Singular> {
    Ok(re(degree as f64) * a.powi(degree - 1) * adot / (re(2.0) * guard(b)?))
}

fn g2_rhs(sigma: f64, s: &[Complex64]) -> Result<Vec<Complex64>, Singular> {
    let (a, k) = (&s[0..4], &s[4..8]);
    let (al12, al21, b) = (s[8], s[9], &s[10..14]);
    let d14 = guard(a[0] - a[3])?;
    let d23 = guard(a[1] - a[2])?;
    let shown = cf::g2_reference_adot(a, k).map_err(|_| Singular)?;
    let adot: Vec<Complex64> = shown.iter().map(|x| re(sigma) * x).collect();
    let r14 = (k[0] - k[3]) / d14;
    let r23 = (k[1] - k[2]) / d23;
    let kdot = [r14 * adot[0], r23 * adot[1], r23 * adot[2], r14 * adot[3]];
    let mut out = adot.clone();
    out.extend(kdot);
    out.push(al12 * (b[1] + b[2]) / d23 * adot[2]);
    out.push(al21 * (b[0] + b[3]) / d14 * adot[3]);
    for i in 0..4 {
        out.push(b_rate(a[i], b[i], adot[i], 5)?);
    }
    Ok(out)
}

fn triple_flow(sigma: f64, a: [Complex64; 3], k: [Complex64; 3]) -> Result<(Vec<Complex64>, Vec<Complex64>), Singular> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        guard(a[i] - a[j])?;
    }
    let d = NodeData::new(a.to_vec(), k.to_vec()).map_err(|_| Singular)?;
    let f = lagrange_coeffs(&d).map_err(|_| Singular)?;
    let s2 = re(2.0 * sigma);
    let dh = [s2 * f[2], s2 * f[1], s2 * f[0]];
    lagrange_flow(&d, &dh).map_err(|_| Singular)
}

fn g3_generic_rhs(sigma: f64, s: &[Complex64]) -> Result<Vec<Complex64>, Singular> {
    let mut out = vec![Complex64::zero(); 12];
    for t in cf::G3_TRIPLES {
        let (ad, kd) = triple_flow(sigma, t.map(|i| s[i]), t.map(|i| s[6 + i]))?;
        for (slot, &i) in t.iter().enumerate() {
            out[i] = ad[slot];
            out[6 + i] = kd[slot];
        }
    }
    Ok(out)
}

fn g3_equal_rhs(sigma: f64, kk: Complex64, s: &[Complex64]) -> Result<Vec<Complex64>, Singular> {
    let (a1, a3, a6) = (s[0], s[1], s[2]);
    guard(a1 - a3)?;
    guard(a1 - a6)?;
    guard(a3 - a6)?;
    let shown = cf::g3_equal_kappa_adot(&a1, &a3, &a6, &kk).map_err(|_| Singular)?;
    let (r21, r23) = cf::g3_equal_kappa_alpha_rates(&a1, &a3, &a6, &s[5], &s[6], &s[7], &kk).map_err(|_| Singular)?;
    let sg = re(sigma);
    let adot: Vec<Complex64> = shown.iter().map(|x| sg * x).collect();
    let mut out = adot.clone();
    out.push(sg * r21 * s[3]);
    out.push(sg * r23 * s[4]);
    for i in 0..3 {
        out.push(b_rate(s[i], s[5 + i], adot[i], 7)?);
    }
    Ok(out)
}

fn rhs(sc: &FlowScenario, s: &[Complex64]) -> Result<Vec<Complex64>, Singular> {
    let sigma = sc.sigma as f64;
    match sc.id {
        ScenarioId::G2Generic | ScenarioId::G2LinearKappa => g2_rhs(sigma, s),
        ScenarioId::G3Generic => g3_generic_rhs(sigma, s),
        ScenarioId::G3EqualKappa => g3_equal_rhs(sigma, sc.param("K"), s),
    }
}

/// Right-hand side at a state, `None` near a singularity.
pub fn vector_field(sc: &FlowScenario, state: &[Complex64]) -> Option<Vec<Complex64>> {
    rhs(sc, state).ok()
}

fn integrals_of(nodes: &[usize], ks: &[Complex64], s: &[Complex64]) -> Vec<Complex64> {
    let a = nodes.iter().map(|&i| s[i]).collect();
    match NodeData::new(a, ks.to_vec()).and_then(|d| lagrange_coeffs(&d)) {
        Ok(f) => f,
        Err(_) => vec![Complex64::new(f64::NAN, f64::NAN); nodes.len()],
    }
}

/// Interpolation coefficients of each group at a state.
pub fn conserved_quantities(sc: &FlowScenario, s: &[Complex64]) -> Vec<Complex64> {
    match sc.id {
        ScenarioId::G2Generic | ScenarioId::G2LinearKappa => {
            let mut v = integrals_of(&[0, 3], &[s[4], s[7]], s);
            v.extend(integrals_of(&[1, 2], &[s[5], s[6]], s));
            v
        }
        ScenarioId::G3Generic => cf::G3_TRIPLES
            .iter()
            .flat_map(|t| integrals_of(t, &t.map(|i| s[6 + i]), s))
            .collect(),
        ScenarioId::G3EqualKappa => {
            let k = sc.param("K");
            integrals_of(&[0, 1, 2], &[k, k, k], s)
        }
    }
}

fn axpy(y: &[Complex64], h: f64, k: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(k).map(|(a, b)| a + b * h).collect()
}

/// Fixed-step classical RK4 from `t = 0` to `t1`.
pub fn integrate(sc: &FlowScenario, t1: f64, steps: usize) -> Result<Trajectory, FlowError> {
    if steps == 0 {
        return Err(FlowError::InvalidInput("steps must be at least 1"));
    }
    if !(t1.is_finite() && t1 > 0.0) {
        return Err(FlowError::InvalidInput("t1 must be positive"));
    }
    let h = t1 / steps as f64;
    let mut tr = Trajectory::default();
    let mut y = sc.initial.clone();
    tr.times.push(0.0);
    tr.conserved.push(conserved_quantities(sc, &y));
    tr.states.push(y.clone());
    for n in 0..steps {
        let t = n as f64 * h;
        let step = || -> Result<Vec<Complex64>, Singular> {
            let k1 = rhs(sc, &y)?;
            let k2 = rhs(sc, &axpy(&y, h / 2.0, &k1))?;
            let k3 = rhs(sc, &axpy(&y, h / 2.0, &k2))?;
            let k4 = rhs(sc, &axpy(&y, h, &k3))?;
            Ok(y.iter()
                .enumerate()
                .map(|(i, v)| v + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
                .collect())
        };
        match step() {
            Ok(next) if next.iter().all(|c| c.is_finite()) => y = next,
            _ => return Err(FlowError::SingularityApproached { t, partial: Box::new(tr) }),
        }
        tr.times.push((n + 1) as f64 * h);
        tr.conserved.push(conserved_quantities(sc, &y));
        tr.states.push(y.clone());
    }
    Ok(tr)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub labels: Vec<String>,
    pub initial: Vec<Complex64>,
    /// `max_t |F_i(t) − F_i(0)|`
    pub drift: Vec<f64>,
}

impl ConservationReport {
    /// Every drift within `rel·(1 + |F_i(0)|)`.
    pub fn within(&self, rel: f64) -> bool {
        self.drift.iter().zip(&self.initial).all(|(d, f0)| *d <= rel * (1.0 + f0.norm()))
    }

    pub fn max_drift(&self) -> f64 {
        self.drift.iter().copied().fold(0.0, f64::max)
    }
}

pub fn conservation_report(tr: &Trajectory, id: ScenarioId) -> ConservationReport {
    let initial = tr.conserved.first().cloned().unwrap_or_default();
    let mut drift = vec![0.0; initial.len()];
    for c in &tr.conserved {
        for (i, v) in c.iter().enumerate() {
            drift[i] = f64::max(drift[i], (v - initial[i]).norm());
        }
    }
    ConservationReport { labels: id.integral_labels(), initial, drift }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RichardsonReport {
    pub steps: usize,
    /// Largest integral drift at `steps` and `2·steps`.
    pub drift: [f64; 2],
    pub drift_ratio: f64,
    /// `|y_h − y_{h/2}| / |y_{h/2} − y_{h/4}|` at `t1`.
    pub state_ratio: f64,
}

fn endpoint_gap(a: &Trajectory, b: &Trajectory) -> f64 {
    let (x, y) = (a.states.last().expect("nonempty"), b.states.last().expect("nonempty"));
    x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

/// Step-halving study at `steps`, `2·steps` and `4·steps`.
pub fn richardson(sc: &FlowScenario, t1: f64, steps: usize) -> Result<RichardsonReport, FlowError> {
    let t_h = integrate(sc, t1, steps)?;
    let t_h2 = integrate(sc, t1, 2 * steps)?;
    let t_h4 = integrate(sc, t1, 4 * steps)?;
    let d1 = conservation_report(&t_h, sc.id).max_drift();
    let d2 = conservation_report(&t_h2, sc.id).max_drift();
    Ok(RichardsonReport {
        steps,
        drift: [d1, d2],
        drift_ratio: d1 / d2,
        state_ratio: endpoint_gap(&t_h, &t_h2) / endpoint_gap(&t_h2, &t_h4),
    })
}

/// Continuous branch of `z^{1/3}` or `ln z` by nearest continuation.
struct BranchTracker {
    prev_arg: Option<f64>,
}

impl BranchTracker {
    fn new() -> Self {
        BranchTracker { prev_arg: None }
    }

    /// Unwrapped argument of `z`, continuing from the previous call.
    fn unwrap(&mut self, t: f64, z: Complex64, max_jump: f64) -> Result<f64, FlowError> {
        let raw = z.arg();
        let arg = match self.prev_arg {
            None => raw,
            Some(p) => {
                let k = Float::round((p - raw) / (2.0 * PI));
                let cand = raw + 2.0 * PI * k;
                if (cand - p).abs() > max_jump {
                    return Err(FlowError::BranchTrackingLost { t });
                }
                cand
            }
        };
        self.prev_arg = Some(arg);
        Ok(arg)
    }
}

/// Cube root of `w` on the branch nearest `near`.
fn nearest_cbrt(w: Complex64, near: Complex64) -> Complex64 {
    let r = w.cbrt();
    [r, r * omega(1), r * omega(-1)]
        .into_iter()
        .min_by(|x, y| (x - near).norm().partial_cmp(&(y - near).norm()).expect("finite"))
        .expect("three candidates")
}

/// Tracked cube root: the branch starts nearest `start`, then follows by continuity;
/// a jump of the root's argument above `π/2` between samples loses the branch.
fn tracked_cbrt(times: &[f64], w: impl Fn(f64) -> Complex64, start: Complex64) -> Result<Vec<Complex64>, FlowError> {
    let mut out = Vec::with_capacity(times.len());
    let mut prev = start;
    let mut tracker = BranchTracker::new();
    for &t in times {
        let r = nearest_cbrt(w(t), prev);
        tracker.unwrap(t, r, PI / 2.0)?;
        out.push(r);
        prev = r;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClosedFormReport {
    /// Named maximum residuals over the trajectory.
    pub residuals: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl ClosedFormReport {
    pub fn get(&self, name: &str) -> f64 {
        self.residuals.get(name).copied().unwrap_or(f64::NAN)
    }

    fn put(&mut self, name: &str, v: f64) {
        self.residuals.insert(name.into(), v);
    }
}

/// Max residual of a least-squares line through `(t, u)`.
pub fn affine_residual(t: &[f64], u: &[Complex64]) -> f64 {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let um = u.iter().sum::<Complex64>() / n;
    let stt: f64 = t.iter().map(|x| (x - tm) * (x - tm)).sum();
    let stu: Complex64 = t.iter().zip(u).map(|(x, y)| (y - um) * (x - tm)).sum();
    let slope = if stt > 0.0 { stu / stt } else { Complex64::zero() };
    t.iter().zip(u).map(|(x, y)| (y - (um + slope * (x - tm))).norm()).fold(0.0, f64::max)
}

fn spread(u: &[Complex64]) -> f64 {
    u.iter().map(|v| (v - u[0]).norm()).fold(0.0, f64::max)
}

/// Residuals of the closed-form particular solutions along a trajectory.
pub fn closed_form_compare(tr: &Trajectory, sc: &FlowScenario) -> Result<ClosedFormReport, FlowError> {
    if tr.is_empty() {
        return Err(FlowError::InvalidInput("empty trajectory"));
    }
    let mut rep = ClosedFormReport::default();
    match sc.id {
        ScenarioId::G3EqualKappa => {
            let s0 = &tr.states[0];
            if (s0[0] + s0[1] + s0[2]).norm() > 1e-12 {
                return Err(FlowError::InvalidInput("closed form covers C1 = 0 only"));
            }
            let k = sc.param("K");
            let c2 = sc.param("C2");
            let sigma = sc.sigma as f64;
            let w = omega(sc.param("branch").re as i32);
            let a1: Vec<Complex64> = tr.states.iter().map(|s| s[0]).collect();
            let shown = tracked_cbrt(&tr.times, |t| c2 - k * (2.0 * sigma * t), a1[0])?;
            let other = tracked_cbrt(&tr.times, |t| c2 + k * (2.0 * sigma * t), a1[0])?;
            let max_err = |r: &[Complex64]| a1.iter().zip(r).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            rep.put("cube-root", max_err(&shown));
            rep.put("cube-root-reversed", max_err(&other));
            let mut sum = 0.0f64;
            let mut rot = 0.0f64;
            let mut ode = 0.0f64;
            for s in &tr.states {
                sum = sum.max((s[0] + s[1] + s[2]).norm());
                rot = rot.max((s[1] - w * s[0]).norm());
                if let Some(v) = vector_field(sc, s) {
                    let lhs = (s[0] - s[1]) * (s[0] - s[2]) * v[0];
                    ode = ode.max((lhs - k * (2.0 * sigma)).norm());
                }
            }
            rep.put("sum", sum);
            rep.put("rotation", rot);
            rep.put("equal-kappa-ode", ode);
            rep.notes.push("cube-root compares with (-2σKt+C2)^(1/3); cube-root-reversed with (2σKt+C2)^(1/3)".into());
        }
        ScenarioId::G2LinearKappa => {
            let mut tracker = BranchTracker::new();
            let mut u = Vec::with_capacity(tr.len());
            let mut v = Vec::with_capacity(tr.len());
            let mut sum = Vec::with_capacity(tr.len());
            let mut quad = Vec::with_capacity(tr.len());
            for (t, s) in tr.times.iter().zip(&tr.states) {
                let (a1, a4) = (s[0], s[3]);
                let z = a1 + a4;
                let arg = tracker.unwrap(*t, z, PI / 2.0)?;
                let ln = Complex64::new(Float::ln(z.norm()), arg);
                u.push(a1 + a4 + a4 * a4 * 2.0);
                v.push(a4 * 2.0 + ln);
                sum.push(z);
                quad.push((a1 * a1 + a4 * a4) * 0.5 - z);
            }
            rep.put("affine a1+a4+2a4^2", affine_residual(&tr.times, &u));
            rep.put("constant 2a4+ln(a1+a4)", spread(&v));
            rep.put("affine a1+a4", affine_residual(&tr.times, &sum));
            rep.put("constant (a1^2+a4^2)/2-(a1+a4)", spread(&quad));
        }
        _ => return Err(FlowError::InvalidInput("scenario has no closed form")),
    }
    Ok(rep)
}

/// Largest `|ȧ₁+ȧ₃+ȧ₆ − σ·2F₂|` for both triples along a genus-3 trajectory.
pub fn sum_rule_residual(tr: &Trajectory, sc: &FlowScenario) -> Result<f64, FlowError> {
    if sc.id != ScenarioId::G3Generic {
        return Err(FlowError::InvalidInput("sum rule is stated for g3-generic"));
    }
    let mut worst = 0.0f64;
    for s in &tr.states {
        let v = vector_field(sc, s).ok_or(FlowError::InvalidInput("singular state"))?;
        for [i, j, l] in cf::G3_TRIPLES {
            let d = cf::g3_delta(&s[i], &s[j], &s[l]);
            let n = cf::g3_sum_rule_numerator(&s[i], &s[j], &s[l], &s[6 + i], &s[6 + j], &s[6 + l]);
            worst = worst.max((v[i] + v[j] + v[l] - n / d * sc.sigma as f64).norm());
        }
    }
    Ok(worst)
}

fn cplx(r: &Rational) -> Complex64 {
    re(to_f64(r))
}

/// Float state of a scenario from an exact assignment, and the exact components it is compared on.
fn exact_state(id: ScenarioId, v: &Assignment) -> (Vec<Complex64>, Vec<(usize, VarId)>) {
    let mut state = Vec::new();
    let mut compare = Vec::new();
    for (i, name) in id.labels().iter().enumerate() {
        let var = VarId::parse(name).expect("scenario labels are variable names");
        state.push(cplx(&v[&var]));
        if !matches!(var, VarId::B(_)) {
            compare.push((i, var));
        }
    }
    (state, compare)
}

/// Largest relative gap between the float right-hand side and the exact locus vector field
/// at `points` seeded rational states.
pub fn cross_layer_check(id: ScenarioId, points: usize, seed: u64) -> Result<f64, FlowError> {
    let genus = id.genus();
    let cs = canonical_reduction(genus)?;
    let cfg = CheckConfig::new(genus);
    let curve = CurveSpec::bare(genus);
    let mut worst = 0.0f64;
    for p in 0..points {
        let mut v = sample_phase_point(genus, seed.wrapping_add(p as u64), 50);
        if id == ScenarioId::G2LinearKappa {
            for s in 1..=4u8 {
                v.insert(VarId::Kappa(s), &v[&VarId::A(s)] + Rational::from_integer(1.into()));
            }
        }
        if id == ScenarioId::G3EqualKappa {
            let k = v[&VarId::Kappa(1)].clone();
            v.insert(VarId::Kappa(3), k.clone());
            v.insert(VarId::Kappa(6), k);
        }
        let vf = locus_vector_field(&cs, &curve, &v, &cfg)?;
        let (state, compare) = exact_state(id, &v);
        let mut sc = FlowScenario {
            id,
            params: BTreeMap::new(),
            initial: state.clone(),
            sigma: if genus == 2 { ORIENTATION_G2 } else { ORIENTATION_G3 },
        };
        sc.params.insert("K".into(), cplx(&v[&VarId::Kappa(1)]));
        let f = vector_field(&sc, &state).ok_or(FlowError::InvalidInput("singular sample"))?;
        for (i, var) in compare {
            let exact = to_f64(&vf.get(var));
            let gap = (f[i] - re(exact)).norm() / (1.0 + exact.abs());
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}

impl fmt::Display for ClosedFormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residuals.iter().map(|(k, v)| format!("{k}: {v:.3e}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_match_state() {
        for id in ScenarioId::ALL {
            assert_eq!(FlowScenario::preset(id).initial.len(), id.labels().len());
            assert_eq!(ScenarioId::parse(id.name()), Some(id));
        }
    }

    #[test]
    fn zero_k_is_constant() {
        let sc = FlowScenario::g3_equal_kappa(0.0, re(1.0), 1);
        let tr = integrate(&sc, 1.0, 10).unwrap();
        assert_eq!(tr.states.first(), tr.states.last());
        assert_eq!(conservation_report(&tr, sc.id).max_drift(), 0.0);
    }

    #[test]
    fn equal_pair_kappas_freeze_kappa() {
        let a = [1.0, -2.0, -4.0, 3.0];
        let k = [1.5, -0.5, -0.5, 1.5];
        let mut s: Vec<Complex64> = a.iter().chain(k.iter()).map(|&x| re(x)).collect();
        s.extend([re(1.0), re(1.0)]);
        s.extend(a.iter().map(|&x| monomial_b(re(x), 5)));
        let sc = FlowScenario::new(ScenarioId::G2Generic, s).unwrap();
        let tr = integrate(&sc, 0.2, 200).unwrap();
        for st in &tr.states {
            let v = vector_field(&sc, st).unwrap();
            for kd in &v[4..8] {
                assert!(kd.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coincident_points_are_rejected() {
        let mut s = FlowScenario::preset(ScenarioId::G3Generic).initial;
        s[1] = s[0];
        assert!(matches!(FlowScenario::new(ScenarioId::G3Generic, s), Err(FlowError::InvalidInput(_))));
    }

    #[test]
    fn collision_stops_with_partial_trajectory() {
        let mut sc = FlowScenario::g3_equal_kappa(1.0, re(1.0), 1);
        sc.initial[1] = sc.initial[0] + re(1e-10);
        match integrate(&sc, 1.0, 100) {
            Err(FlowError::SingularityApproached { t, partial }) => {
                assert_eq!(t, 0.0);
                assert_eq!(partial.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rk4_steps_through_integrable_collision() {
        // a₁³ = 1 − 2t vanishes at t = 1/2; no stage state comes within the guard
        let sc = FlowScenario::g3_equal_kappa(-1.0, re(1.0), 1);
        let tr = integrate(&sc, 1.0, 2000).unwrap();
        let end = tr.states.last().unwrap()[0];
        assert!((end - re(-1.0)).norm() < 1e-2, "{end}");
    }

    #[test]
    fn cube_root_branch_follows_rotation() {
        let times = [0.0, 0.1, 0.2];
        let r = tracked_cbrt(&times, |t| re(1.0 + t), omega(1)).unwrap();
        assert!((r[0] - omega(1)).norm() < 1e-12);
        assert!((r[2] - omega(1) * re(1.2f64.cbrt())).norm() < 1e-12);
    }

    #[test]
    fn branch_jump_is_detected() {
        let mut b = BranchTracker::new();
        b.unwrap(0.0, re(1.0), PI / 2.0).unwrap();
        assert!(matches!(b.unwrap(1.0, re(-1.0), PI / 2.0), Err(FlowError::BranchTrackingLost { .. })));
    }

    #[test]
    fn affine_residual_of_line_is_zero() {
        let t = [0.0, 0.5, 1.0, 2.0];
        let u: Vec<Complex64> = t.iter().map(|x| Complex64::new(3.0 * x - 1.0, -x)).collect();
        assert!(affine_residual(&t, &u) < 1e-14);
    }

    #[test]
    fn rejects_zero_steps() {
        let sc = FlowScenario::preset(ScenarioId::G2Generic);
        assert_eq!(integrate(&sc, 1.0, 0), Err(FlowError::InvalidInput("steps must be at least 1")));
    }
}
