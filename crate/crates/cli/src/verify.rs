use anyhow::{bail, Result};
use clap::ValueEnum;
use hitchin_core::exact::Rational;
use hitchin_core::hamiltonian::HamiltonianSpec;
use hitchin_core::lagrange::{gradient_relation_check, involution_check};
use hitchin_core::reduction::{
    builtin_reductions, check_admissibility, conjecture_probe, reference_integrals_check, factorization_check, mirror_check,
    reduced_hamiltonian_check, relation_checks, reference_vector_field_check, standard_pattern, CheckConfig, SamplingMode,
};
use hitchin_core::report::CheckReport;
use rayon::prelude::*;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Lagrange,
    Admissibility,
    ReducedHamiltonian,
    Factorization,
    Relations,
    Conjecture,
    Integrals,
    All,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Lagrange => "lagrange",
            Target::Admissibility => "admissibility",
            Target::ReducedHamiltonian => "reduced-hamiltonian",
            Target::Factorization => "factorization",
            Target::Relations => "relations",
            Target::Conjecture => "conjecture",
            Target::Integrals => "integrals",
            Target::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub genus: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub p1: Option<Rational>,
    pub n: Option<usize>,
    pub bound: u64,
    pub eps_terms: u32,
    pub dx_factor: i64,
    pub sampling: SamplingMode,
}

impl VerifyOptions {
    fn config(&self, genus: usize) -> CheckConfig {
        let mut c = CheckConfig::new(genus).with_seed(self.seed);
        if let Some(t) = self.trials {
            c.trials = t;
        }
        c.bound = self.bound;
        c.eps_terms = self.eps_terms;
        c.sampling = self.sampling;
        c.spec = HamiltonianSpec { dx_factor: self.dx_factor, ..Default::default() };
        if let Some(p) = &self.p1 {
            c.p1 = p.clone();
        }
        c
    }

    fn genera(&self) -> Vec<usize> {
        self.genus.map(|g| vec![g]).unwrap_or_else(|| vec![2, 3])
    }
}

/// Runs a check one trial at a time in parallel and joins the parts in trial order.
fn per_trial(cfg: &CheckConfig, f: impl Fn(&CheckConfig) -> CheckReport + Sync) -> CheckReport {
    let parts: Vec<CheckReport> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| f(&cfg.clone().with_trials(1).with_seed(cfg.seed.wrapping_add(i as u64))))
        .collect();
    CheckReport::combine(parts).expect("at least one trial")
}

fn supported(genus: usize) -> Result<()> {
    if !(2..=3).contains(&genus) {
        bail!("genus {genus} is supported by `verify conjecture` only");
    }
    Ok(())
}

fn lagrange(opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    let ns: Vec<usize> = opts.n.map(|n| vec![n]).unwrap_or_else(|| (2..=6).collect());
    let trials = opts.trials.unwrap_or(50);
    let runs: Vec<Result<Vec<CheckReport>>> = ns
        .par_iter()
        .map(|&n| Ok(vec![involution_check(n, trials, opts.seed)?, gradient_relation_check(n, trials, opts.seed)?]))
        .collect();
    let mut out = Vec::new();
    for r in runs {
        out.extend(r?);
    }
    Ok(out)
}

fn admissibility(opts: &VerifyOptions, g: usize) -> Result<Vec<CheckReport>> {
    supported(g)?;
    let cfg = opts.config(g);
    Ok(builtin_reductions(g)?.iter().map(|cs| per_trial(&cfg, |c| check_admissibility(g, cs, c))).collect())
}

fn hamiltonian_and_factorization(opts: &VerifyOptions, g: usize, with_factorization: bool) -> Result<Vec<CheckReport>> {
    supported(g)?;
    let cfg = opts.config(g);
    let h = per_trial(&cfg, |c| reduced_hamiltonian_check(g, c));
    let sigma_h = h.sigma_h.unwrap_or(1);
    let mut out = Vec::new();
    if with_factorization {
        out.push(per_trial(&cfg, |c| factorization_check(g, c, sigma_h)));
    } else {
        out.push(h);
        out.push(per_trial(&cfg, |c| mirror_check(g, c)));
    }
    Ok(out)
}

fn relations(opts: &VerifyOptions, g: usize) -> Result<Vec<CheckReport>> {
    supported(g)?;
    let cfg = opts.config(g);
    let mut out = vec![per_trial(&cfg, |c| relation_checks(g, c))];
    if g == 2 {
        out.push(per_trial(&cfg, reference_vector_field_check));
    }
    Ok(out)
}

fn conjecture(opts: &VerifyOptions, genera: &[usize]) -> Vec<CheckReport> {
    genera
        .iter()
        .map(|&g| {
            let mut cfg = opts.config(g);
            if g >= 4 && opts.trials.is_none() {
                cfg.trials = 2;
            }
            per_trial(&cfg, |c| conjecture_probe(g, &standard_pattern(g), c))
        })
        .collect()
}

fn integrals(opts: &VerifyOptions, g: usize) -> Result<Vec<CheckReport>> {
    supported(g)?;
    Ok(vec![reference_integrals_check(g, opts.trials.unwrap_or(20), opts.seed)])
}

pub fn run(target: Target, opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let genera = opts.genera();
    match target {
        Target::Lagrange => out.extend(lagrange(opts)?),
        Target::Admissibility => {
            for &g in &genera {
                out.extend(admissibility(opts, g)?);
            }
        }
        Target::ReducedHamiltonian => {
            for &g in &genera {
                out.extend(hamiltonian_and_factorization(opts, g, false)?);
            }
        }
        Target::Factorization => {
            for &g in &genera {
                out.extend(hamiltonian_and_factorization(opts, g, true)?);
            }
        }
        Target::Relations => {
            for &g in &genera {
                out.extend(relations(opts, g)?);
            }
        }
        Target::Conjecture => {
            let gs = opts.genus.map(|g| vec![g]).unwrap_or_else(|| vec![2, 3, 4]);
            out.extend(conjecture(opts, &gs));
        }
        Target::Integrals => {
            for &g in &genera {
                out.extend(integrals(opts, g)?);
            }
        }
        Target::All => {
            for t in [Target::Lagrange, Target::Admissibility, Target::ReducedHamiltonian, Target::Factorization, Target::Relations, Target::Conjecture] {
                out.extend(run(t, opts)?);
            }
        }
    }
    Ok(out)
}
