use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Assignment, Rational, VarId};
use crate::curve::CurveSpec;
use crate::lax::phase_variables;

pub const DEFAULT_BOUND: u64 = 1000;
const MAX_DENOMINATOR: u64 = 10;

/// Deterministic source of random rationals `n/d`, `n ∈ 1..=bound`, `d ∈ 1..=10`.
pub struct Sampler {
    rng: ChaCha8Rng,
    bound: u64,
}

impl Sampler {
    pub fn new(seed: u64, bound: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), bound: bound.max(1) }
    }

    pub fn rational(&mut self) -> Rational {
        let n = self.rng.random_range(1..=self.bound);
        let d = self.rng.random_range(1..=MAX_DENOMINATOR);
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Uniform in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n.max(1))
    }

    /// A rational with a random sign.
    pub fn signed_rational(&mut self) -> Rational {
        let r = self.rational();
        if self.rng.random_bool(0.5) {
            -r
        } else {
            r
        }
    }

    /// `count` pairwise distinct rationals.
    pub fn distinct(&mut self, count: usize) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::with_capacity(count);
        while out.len() < count {
            let r = self.rational();
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }
}

pub fn sample_rational(seed: u64, bound: u64) -> Rational {
    Sampler::new(seed, bound).rational()
}

/// Random values for every phase-space coordinate of genus `genus`, including the
/// free `b_s`. The `a_s` are pairwise distinct.
pub fn sample_phase_point(genus: usize, seed: u64, bound: u64) -> Assignment {
    let mut s = Sampler::new(seed, bound);
    let n = 2 * genus;
    let mut out = BTreeMap::new();
    for (k, a) in s.distinct(n).into_iter().enumerate() {
        out.insert(VarId::A(k as u8 + 1), a);
    }
    for id in phase_variables(genus) {
        if !matches!(id, VarId::A(_)) {
            out.insert(id, s.rational());
        }
    }
    for k in 1..=n {
        out.insert(VarId::B(k as u8), s.rational());
    }
    out
}

/// Random curve coefficients, with `fixed` entries (1-based index) held.
pub fn sample_curve(
    genus: usize,
    sampler: &mut Sampler,
    fixed: &BTreeMap<usize, Rational>,
) -> CurveSpec {
    let p = (1..=2 * genus + 1)
        .map(|i| fixed.get(&i).cloned().unwrap_or_else(|| sampler.signed_rational()))
        .collect();
    CurveSpec::new(genus, p).expect("sampled curve has the right length")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn distinct_a(x: &Assignment, genus: usize) -> bool {
        let a: Vec<_> = (1..=2 * genus).map(|s| x[&VarId::A(s as u8)].clone()).collect();
        (0..a.len()).all(|i| (i + 1..a.len()).all(|j| a[i] != a[j]))
    }

    #[test]
    fn genus_two_point() {
        let x = sample_phase_point(2, 7, 100);
        assert_eq!(x.len(), 22);
        assert!(distinct_a(&x, 2));
        for r in x.values() {
            assert!(*r.numer() <= BigInt::from(100));
            assert!(*r.denom() <= BigInt::from(10));
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(sample_phase_point(3, 11, 100), sample_phase_point(3, 11, 100));
        assert_ne!(sample_phase_point(3, 11, 100), sample_phase_point(3, 12, 100));
    }

    #[test]
    fn tiny_bound_still_distinct() {
        let x = sample_phase_point(2, 8, 2);
        assert!(distinct_a(&x, 2));
        let y = sample_phase_point(3, 8, 1);
        assert!(distinct_a(&y, 3));
    }
}
