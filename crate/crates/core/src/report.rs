//! Outcome records shared by every check.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::curve::CurveSpec;
use crate::exact::{Assignment, Rational};

/// One failing item, with enough data to replay the point.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub item: String,
    pub detail: String,
    pub curve: Option<CurveSpec>,
    pub point: Option<Assignment>,
}

impl Failure {
    pub fn new(trial: usize, seed: u64, item: String, detail: String) -> Failure {
        Failure { trial, seed, item, detail, curve: None, point: None }
    }

    pub fn at(mut self, curve: &CurveSpec, point: &Assignment) -> Failure {
        self.curve = Some(curve.clone());
        self.point = Some(point.clone());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub genus: usize,
    pub trials: usize,
    pub seeds: Vec<u64>,
    pub passed: bool,
    /// Time orientation relating closed-form equations to the engine flow.
    pub sigma: Option<i32>,
    /// Sign relating the engine Hamiltonian to a closed form.
    pub sigma_h: Option<i32>,
    /// Largest `|defect|` seen per item, in first-seen order.
    pub max_defect: Vec<(String, Rational)>,
    pub notes: Vec<String>,
    pub failures: Vec<Failure>,
    pub informational: bool,
}

impl CheckReport {
    pub fn new(check: &str, genus: usize, trials: usize) -> CheckReport {
        CheckReport {
            check: check.into(),
            genus,
            trials,
            seeds: Vec::new(),
            passed: true,
            sigma: None,
            sigma_h: None,
            max_defect: Vec::new(),
            notes: Vec::new(),
            failures: Vec::new(),
            informational: false,
        }
    }

    pub fn record(&mut self, item: &str, defect: &Rational) {
        let d = defect.abs();
        match self.max_defect.iter_mut().find(|(k, _)| k == item) {
            Some((_, m)) => {
                if d > *m {
                    *m = d;
                }
            }
            None => self.max_defect.push((item.into(), d)),
        }
    }

    pub fn fail(&mut self, f: Failure) {
        self.passed = false;
        if self.failures.len() < 32 {
            self.failures.push(f);
        }
    }

    /// Records a sign observation; a second, different value fails the report.
    pub fn observe_sign(slot: &mut Option<i32>, value: i32) -> bool {
        match slot {
            None => {
                *slot = Some(value);
                true
            }
            Some(v) => *v == value,
        }
    }

    pub fn finish(mut self) -> CheckReport {
        self.passed = self.failures.is_empty() && self.passed;
        self
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.passed &= other.passed;
        for (k, v) in other.max_defect {
            self.record(&k, &v);
        }
        self.notes.extend(other.notes);
        for f in other.failures {
            self.fail(f);
        }
    }

    /// Joins reports of consecutive single-trial runs, in order. Sign slots must agree.
    pub fn combine(parts: Vec<CheckReport>) -> Option<CheckReport> {
        let mut it = parts.into_iter();
        let mut out = it.next()?;
        let mut offset = out.seeds.len().max(1);
        for part in it {
            for slot in [(&mut out.sigma, part.sigma), (&mut out.sigma_h, part.sigma_h)] {
                if let Some(v) = slot.1 {
                    if !CheckReport::observe_sign(slot.0, v) {
                        out.passed = false;
                    }
                }
            }
            out.trials += part.trials;
            out.passed &= part.passed;
            out.seeds.extend(part.seeds.iter().copied());
            for (k, v) in &part.max_defect {
                out.record(k, v);
            }
            for n in part.notes {
                if !out.notes.contains(&n) {
                    out.notes.push(n);
                }
            }
            for mut f in part.failures {
                f.trial += offset;
                out.fail(f);
            }
            offset += part.seeds.len().max(1);
        }
        Some(out)
    }
}
