use hitchin_core::coeff::Coeff;
use hitchin_core::curve::{y_series, CurveSpec};
use hitchin_core::exact::{int, rat, sample_phase_point, to_f64, Jet, Rational, Scalar, VarId};
use hitchin_core::hamiltonian::{hamiltonian_jet, poisson_bracket, vector_field_from_jet, HamiltonianSpec};
use hitchin_core::lagrange::{eval_poly, lagrange_coeffs, NodeData};
use hitchin_core::laurent::{series_inverse, series_mul, series_sqrt_unit, LaurentSeries};
use hitchin_core::lax::{phase_variables, PhasePoint};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn series(max_len: usize) -> impl Strategy<Value = LaurentSeries<Rational>> {
    (-3i32..=1, prop::collection::vec(rational(), 1..=max_len), 0i32..=6)
        .prop_map(|(m, c, extra)| {
            let n = c.len() as i32;
            LaurentSeries::new(m, c, m + n + extra)
        })
}

fn unit_series() -> impl Strategy<Value = LaurentSeries<Rational>> {
    (prop::collection::vec(rational(), 0..=5), 2i32..=8).prop_map(|(mut c, valid)| {
        c.insert(0, Rational::one());
        LaurentSeries::new(0, c, valid)
    })
}

fn agree(a: &LaurentSeries<Rational>, b: &LaurentSeries<Rational>, lo: i32, hi: i32) -> bool {
    (lo..=hi).all(|e| a.coeff(e).ok() == b.coeff(e).ok())
}

fn d(n: i64) -> Rational {
    int(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_polynomial_derivative(coeffs in prop::collection::vec(rational(), 1..6), x in rational()) {
        let id = VarId::A(1);
        let j = coeffs.iter().rev().fold(Jet::zero(), |acc, c| acc * &Jet::var(id, x.clone()) + &Jet::constant(c.clone()));
        let value = eval_poly(&coeffs, &x);
        let deriv: Rational = coeffs.iter().enumerate().skip(1).map(|(k, c)| c * d(k as i64) * x.pow_k(k - 1)).sum();
        prop_assert_eq!(j.value.clone(), value);
        prop_assert_eq!(j.partial(id), deriv);
    }

    #[test]
    fn jet_reciprocal_chain_rule(c0 in nonzero_rational(), c1 in rational(), x in rational()) {
        let id = VarId::Kappa(2);
        let j = Jet::constant(c0.clone()) + &(Jet::var(id, x.clone()) * &Jet::constant(c1.clone()));
        prop_assume!(!j.value.is_zero());
        let r = j.try_recip().unwrap();
        prop_assert_eq!(r.value.clone(), Rational::one() / &j.value);
        prop_assert_eq!(r.partial(id), -c1 / (&j.value * &j.value));
    }

    #[test]
    fn series_product_commutes(a in series(5), b in series(5)) {
        let ab = series_mul(&a, &b).unwrap();
        let ba = series_mul(&b, &a).unwrap();
        prop_assert_eq!(ab.valid_up_to(), ba.valid_up_to());
        prop_assert!(agree(&ab, &ba, ab.min_exp().min(ba.min_exp()), ab.valid_up_to()));
    }

    #[test]
    fn series_product_associates(a in series(4), b in series(4), c in series(4)) {
        let l = series_mul(&series_mul(&a, &b).unwrap(), &c).unwrap();
        let r = series_mul(&a, &series_mul(&b, &c).unwrap()).unwrap();
        let hi = l.valid_up_to().min(r.valid_up_to());
        prop_assert!(agree(&l, &r, -12, hi));
    }

    #[test]
    fn inverse_times_series_is_one(a in series(5)) {
        prop_assume!(!a.is_zero() && a.coeffs()[0] != Rational::zero());
        let inv = series_inverse(&a).unwrap();
        let p = series_mul(&a, &inv).unwrap();
        prop_assert!(agree(&p, &LaurentSeries::constant(Rational::one()), -12, p.valid_up_to()));
    }

    #[test]
    fn sqrt_squares_back(a in unit_series()) {
        let s = series_sqrt_unit(&a).unwrap();
        let sq = series_mul(&s, &s).unwrap();
        prop_assert!(agree(&sq, &a, 0, sq.valid_up_to()));
    }

    #[test]
    fn truncation_window_is_sound(a in series(5), b in series(5), cut in 0i32..4) {
        // products of truncated inputs agree with the full product on the reported window
        let full = series_mul(&a, &b).unwrap();
        let ta = a.truncate(a.valid_up_to() - cut);
        let part = series_mul(&ta, &b).unwrap();
        prop_assert!(part.valid_up_to() <= full.valid_up_to());
        prop_assert!(agree(&part, &full, -12, part.valid_up_to()));
    }

    #[test]
    fn eps_limit_is_multiplicative(x0 in rational(), x1 in rational(), y0 in rational(), y1 in rational()) {
        let e = Scalar::eps();
        let x = Scalar::rational(x0.clone()) + &(e.clone() * &Scalar::rational(x1));
        let y = Scalar::rational(y0.clone()) + &(e * &Scalar::rational(y1));
        let lim = (x * &y).take_limit().unwrap();
        prop_assert_eq!(lim.value, x0 * y0);
    }

    #[test]
    fn eps_limit_of_quotient(v in nonzero_rational(), w in nonzero_rational()) {
        // (vε)/(wε) → v/w, the pattern of every limit coordinate
        let e = Scalar::eps();
        let q = (e.clone() * &Scalar::rational(v.clone())).try_div(&(e * &Scalar::rational(w.clone()))).unwrap();
        prop_assert_eq!(q.take_limit().unwrap().value, v / w);
    }

    #[test]
    fn bracket_antisymmetry_and_leibniz(values in prop::collection::vec(rational(), 12)) {
        let vars = [VarId::A(1), VarId::Kappa(1), VarId::A(2), VarId::Kappa(2), VarId::Alpha(1, 1), VarId::Beta(1, 1)];
        let mk = |off: usize| {
            Jet::from_parts(values[off].clone(), vars.iter().enumerate().map(|(i, v)| (*v, values[(off + i + 1) % 12].clone())))
        };
        let (f, g, h) = (mk(0), mk(3), mk(7));
        prop_assert_eq!(poisson_bracket(&f, &g), -poisson_bracket(&g, &f));
        let gh = g.clone() * &h;
        let rhs = poisson_bracket(&f, &g) * &h.value + &g.value * poisson_bracket(&f, &h);
        prop_assert_eq!(poisson_bracket(&f, &gh), rhs);
    }

    #[test]
    fn lagrange_reconstructs_nodes(seed in 0u64..500, n in 2usize..6) {
        let v = sample_phase_point(3, seed, 40);
        let a: Vec<Rational> = (1..=n as u8).map(|s| v[&VarId::A(s)].clone()).collect();
        let k: Vec<Rational> = (1..=n as u8).map(|s| v[&VarId::Kappa(s)].clone()).collect();
        let f = lagrange_coeffs(&NodeData::new(a.clone(), k.clone()).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&k) {
            prop_assert_eq!(&eval_poly(&f, x), y);
        }
        let mut ar = a.clone();
        let mut kr = k.clone();
        ar.reverse();
        kr.reverse();
        prop_assert_eq!(lagrange_coeffs(&NodeData::new(ar, kr).unwrap()).unwrap(), f);
    }
}

trait PowK {
    fn pow_k(&self, k: usize) -> Rational;
}

impl PowK for Rational {
    fn pow_k(&self, k: usize) -> Rational {
        (0..k).fold(Rational::one(), |acc, _| acc * self)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn energy_is_conserved_along_its_field(seed in 0u64..10_000) {
        let v = sample_phase_point(2, seed, 200);
        let p = PhasePoint::seeded(&CurveSpec::bare(2), &v).unwrap();
        let h = hamiltonian_jet(&p, &HamiltonianSpec::default()).unwrap();
        let vf = vector_field_from_jet(2, &h);
        let total: Rational = phase_variables(2).into_iter().map(|id| h.partial(id) * vf.get(id)).sum();
        prop_assert!(total.is_zero());
    }

    #[test]
    fn gradient_matches_central_difference(seed in 0u64..10_000, pick in 0usize..18) {
        let v = sample_phase_point(2, seed, 50);
        let curve = CurveSpec::bare(2);
        let id = phase_variables(2)[pick];
        let p = PhasePoint::seeded(&curve, &v).unwrap();
        let jet = hamiltonian_jet(&p, &HamiltonianSpec::default()).unwrap().partial(id);
        let h = rat(1, 1_000_000);
        let eval = |delta: &Rational| {
            let mut w = v.clone();
            *w.get_mut(&id).unwrap() += delta;
            hamiltonian_jet(&PhasePoint::constant(&curve, &w).unwrap(), &HamiltonianSpec::default()).unwrap().value
        };
        let fd = (eval(&h) - eval(&-h.clone())) / (int(2) * &h);
        let (j, f) = (to_f64(&jet), to_f64(&fd));
        prop_assert!((j - f).abs() <= 1e-6 * (1.0 + j.abs()), "{} {}: jet {} fd {}", id, seed, j, f);
    }

    #[test]
    fn curve_series_window_is_sound(p in prop::collection::vec(rational(), 5), r in 2u32..6) {
        let lo = y_series(2, &p, r).unwrap();
        let hi = y_series(2, &p, r + 3).unwrap();
        prop_assert!(agree(&lo, &hi, lo.min_exp(), lo.valid_up_to()));
        let sq = series_mul(&hi, &hi).unwrap();
        let mut poly = vec![Rational::one()];
        poly.extend(p.iter().flat_map(|c| [Rational::zero(), c.clone()]));
        let curve = LaurentSeries::polynomial(-10, poly);
        prop_assert!(agree(&sq, &curve, -10, sq.valid_up_to()));
    }
}
