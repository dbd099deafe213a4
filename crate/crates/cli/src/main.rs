mod csv;
mod json;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hitchin_core::exact::{parse_rational, Rational, DEFAULT_BOUND, DEFAULT_EPS_TERMS};
use hitchin_core::flows::{closed_form_compare, conservation_report, integrate, FlowError, FlowScenario, ScenarioId};
use hitchin_core::hamiltonian::{hamiltonian_jet, with_eps_retry, HamiltonianSpec};
use hitchin_core::lax::{phase_variables, PhasePoint};
use hitchin_core::reduction::{builtin_reductions, SamplingMode};
use serde_json::json;

use crate::verify::{Target, VerifyOptions};

#[derive(Parser)]
#[command(name = "hitchin", version, about = "Exact checks and flows of reduced rank-2 Hitchin systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification checks and write a JSON report.
    Verify(VerifyArgs),
    /// Evaluate the spectral Hamiltonian at a point read from JSON.
    Hamiltonian(HamiltonianArgs),
    /// Integrate a reduced system with fixed-step RK4 and write CSV.
    Integrate(IntegrateArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: Target,
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Curve coefficient p1 in genus 2, as `p/q`.
    #[arg(long, value_parser = rational_arg)]
    p1: Option<Rational>,
    /// Number of interpolation nodes for `lagrange`; all of 2..=6 when absent.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: u64,
    #[arg(long, default_value_t = DEFAULT_EPS_TERMS)]
    eps_terms: u32,
    #[arg(long, default_value_t = 1)]
    dx_factor: i64,
    /// Fit the curve through the sampled points instead of sampling b freely.
    #[arg(long)]
    on_curve: bool,
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionArg {
    Canonical,
    Mirror,
}

#[derive(Args)]
struct HamiltonianArgs {
    #[arg(long)]
    point: PathBuf,
    /// Expected genus; checked against the file.
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    w: i32,
    #[arg(long, default_value_t = 1)]
    dx_factor: i64,
    #[arg(long, default_value_t = DEFAULT_EPS_TERMS)]
    eps_terms: u32,
    /// Print the gradient as well.
    #[arg(long)]
    grad: bool,
    /// Evaluate on a reduction locus.
    #[arg(long, value_enum)]
    reduction: Option<ReductionArg>,
}

#[derive(Args)]
struct IntegrateArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 1.0)]
    t1: f64,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational: {s}"))
}

/// A failed precondition on the command line.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn seed_override(seed: u64) -> Result<u64> {
    match std::env::var("HITCHIN_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("HITCHIN_SEED is not an integer: {v}"))),
        Err(_) => Ok(seed),
    }
}

fn run_verify(a: VerifyArgs) -> Result<bool> {
    if let Some(n) = a.n {
        if n == 0 {
            bail!(usage("--n must be at least 1"));
        }
    }
    if let Some(g) = a.genus {
        if g < 2 {
            bail!(usage("--genus must be at least 2"));
        }
    }
    if a.trials == Some(0) {
        bail!(usage("--trials must be at least 1"));
    }
    let opts = VerifyOptions {
        genus: a.genus,
        trials: a.trials,
        seed: seed_override(a.seed)?,
        p1: a.p1,
        n: a.n,
        bound: a.bound,
        eps_terms: a.eps_terms,
        dx_factor: a.dx_factor,
        sampling: if a.on_curve { SamplingMode::OnCurve } else { SamplingMode::Free },
    };
    let reports = verify::run(a.target, &opts).map_err(|e| usage(e.to_string()))?;
    let passed = reports.iter().all(|r| r.passed || r.informational);
    for r in &reports {
        let tag = match (r.passed, r.informational) {
            (true, _) => "pass",
            (false, true) => "info",
            (false, false) => "FAIL",
        };
        if r.genus == 0 {
            println!("{tag:>4}  {} ({} trials)", r.check, r.trials);
        } else {
            println!("{tag:>4}  {} g{} ({} trials)", r.check, r.genus, r.trials);
        }
    }
    let doc = json::verify_document(a.target.name(), &opts, &reports, passed);
    fs::write(&a.out, json::to_pretty(&doc)).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(passed)
}

fn run_hamiltonian(a: HamiltonianArgs) -> Result<bool> {
    let text = fs::read_to_string(&a.point).with_context(|| format!("reading {}", a.point.display()))?;
    let (curve, values) = json::parse_point(&text).map_err(|e| usage(format!("{}: {e}", a.point.display())))?;
    if let Some(g) = a.genus {
        if g != curve.genus {
            bail!(usage(format!("point has genus {}, --genus {g}", curve.genus)));
        }
    }
    let spec = HamiltonianSpec { k: a.k, w: a.w, dx_factor: a.dx_factor, ..Default::default() };
    let cs = match a.reduction {
        None => None,
        Some(r) => {
            let all = builtin_reductions(curve.genus).map_err(|e| usage(e.to_string()))?;
            Some(all[matches!(r, ReductionArg::Mirror) as usize].clone())
        }
    };
    let h = with_eps_retry(a.eps_terms, |terms| {
        let p = PhasePoint::build(&curve, &values, cs.as_ref(), true, terms)?;
        hamiltonian_jet(&p, &spec)
    })?;
    let mut doc = json!({ "schema": 1, "genus": curve.genus, "k": a.k, "w": a.w, "H": h.value.to_string() });
    if a.grad {
        let grad: serde_json::Map<String, serde_json::Value> =
            phase_variables(curve.genus).into_iter().map(|id| (id.name(), json!(h.partial(id).to_string()))).collect();
        doc["gradient"] = serde_json::Value::Object(grad);
    }
    println!("{}", json::to_pretty(&doc));
    Ok(true)
}

fn run_integrate(a: IntegrateArgs) -> Result<bool> {
    let id = ScenarioId::parse(&a.scenario).ok_or_else(|| usage(format!("unknown scenario {}", a.scenario)))?;
    if a.steps == 0 || !(a.t1 > 0.0) {
        bail!(usage("--steps must be at least 1 and --t1 positive"));
    }
    let sc = FlowScenario::preset(id);
    let (tr, ok) = match integrate(&sc, a.t1, a.steps) {
        Ok(tr) => (tr, true),
        Err(FlowError::SingularityApproached { t, partial }) => {
            eprintln!("singularity approached at t = {t}; writing partial trajectory");
            (*partial, false)
        }
        Err(e) => bail!(usage(e.to_string())),
    };
    let text = csv::trajectory_csv(id, &tr);
    match &a.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    let cons = conservation_report(&tr, id);
    let mut summary = json!({
        "scenario": id.name(),
        "rows": tr.len(),
        "completed": ok,
        "max_drift": cons.labels.iter().zip(&cons.drift).map(|(l, d)| (l.clone(), json!(d))).collect::<serde_json::Map<_, _>>(),
    });
    if let Ok(cf) = closed_form_compare(&tr, &sc) {
        summary["closed_form"] = json!(cf.residuals);
    }
    if a.out.is_some() {
        println!("{}", json::to_pretty(&summary));
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Hamiltonian(a) => run_hamiltonian(a),
        Command::Integrate(a) => run_integrate(a),
    };
    match out {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
