use hitchin_core::exact::{rat, VarId};
use hitchin_core::reduction::*;

fn cfg(genus: usize, trials: usize) -> CheckConfig {
    CheckConfig::new(genus).with_trials(trials).with_seed(11)
}

#[test]
fn both_reductions_are_admissible() {
    for g in [2, 3] {
        for cs in builtin_reductions(g).unwrap() {
            let r = check_admissibility(g, &cs, &cfg(g, 3));
            assert!(r.passed, "g{g} {}: {:?}", cs.label, r.failures);
        }
    }
}

#[test]
fn on_curve_sampling_is_admissible_too() {
    let mut c = cfg(3, 2);
    c.sampling = SamplingMode::OnCurve;
    assert!(check_admissibility(3, &canonical_reduction(3).unwrap(), &c).passed);
}

#[test]
fn dropping_the_alpha_constraints_breaks_admissibility() {
    let mut cs = canonical_reduction(2).unwrap();
    cs.hard_zeros.remove(&VarId::Alpha(1, 1));
    cs.limit_vars.clear();
    let r = check_admissibility(2, &cs, &cfg(2, 2));
    assert!(!r.passed);
    assert!(r.failures.iter().all(|f| f.point.is_some()));
}

#[test]
fn signs_are_per_genus_constants() {
    let h2 = reduced_hamiltonian_check(2, &cfg(2, 4));
    let h3 = reduced_hamiltonian_check(3, &cfg(3, 2));
    assert_eq!((h2.passed, h2.sigma_h), (true, Some(-1)));
    assert_eq!((h3.passed, h3.sigma_h), (true, Some(1)));
    let m2 = mirror_check(2, &cfg(2, 2));
    assert!(m2.passed && m2.sigma_h == Some(-1));
}

#[test]
fn relations_hold_with_recorded_orientation() {
    let r2 = relation_checks(2, &cfg(2, 3));
    assert!(r2.passed, "{:?}", r2.failures);
    assert_eq!(r2.sigma, Some(-1));
    let r3 = relation_checks(3, &cfg(3, 2));
    assert!(r3.passed, "{:?}", r3.failures);
    assert_eq!(r3.sigma, Some(1));
}

#[test]
fn factorization_at_vanishing_p1() {
    assert!(factorization_check(2, &cfg(2, 3), -1).passed);
    assert!(factorization_check(3, &cfg(3, 2), 1).passed);
}

#[test]
fn p1_correction_differs_from_observed_form() {
    let mut c = cfg(2, 2);
    c.p1 = rat(3, 2);
    let r = factorization_check(2, &c, -1);
    assert!(!r.passed);
    assert!(r.notes.iter().any(|n| n.ends_with("true")));
}

#[test]
fn reference_expressions_match() {
    assert!(reference_vector_field_check(&cfg(2, 3)).passed);
}

#[test]
fn genus_four_probe_runs() {
    let r = conjecture_probe(4, &standard_pattern(4), &CheckConfig::new(4).with_trials(1));
    assert!(r.informational);
    assert!(r.passed, "{:?}", r.failures);
}

#[test]
fn reports_are_deterministic() {
    let a = relation_checks(2, &cfg(2, 2));
    let b = relation_checks(2, &cfg(2, 2));
    assert_eq!(a, b);
}
