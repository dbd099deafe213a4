//! Explicit formulas for the reduced systems, written out term by term so the
//! engine can be compared against them. Arguments follow the point labels of the
//! genus-2 pair `(a₁, a₄)` and the genus-3 triple `(a₁, a₃, a₆)`; other pairs and
//! triples are obtained by relabeling.

use crate::coeff::Coeff;
use crate::error::Result;

fn c<C: Coeff>(n: i64) -> C {
    C::from_i64(n)
}

fn sq<C: Coeff>(x: &C) -> C {
    x.clone() * x
}

/// Genus-2 integrals of the pair `(a₁, κ₁), (a₄, κ₄)`: `(F₀, F₁)`.
pub fn g2_integrals<C: Coeff>(a1: &C, a4: &C, k1: &C, k4: &C) -> Result<(C, C)> {
    let d = a1.clone() - a4;
    let f0 = (a1.clone() * k4 - &(a4.clone() * k1)).try_div(&d)?;
    let f1 = (k1.clone() - k4).try_div(&d)?;
    Ok((f0, f1))
}

/// One pair term of the closed-form genus-2 reduced Hamiltonian:
/// `2(κ₁−κ₄)(a₄κ₁−a₁κ₄)/(a₁−a₄)²`.
pub fn g2_pair_hamiltonian<C: Coeff>(a1: &C, a4: &C, k1: &C, k4: &C) -> Result<C> {
    let num = c::<C>(2) * &(k1.clone() - k4) * &(a4.clone() * k1 - &(a1.clone() * k4));
    num.try_div(&sq(&(a1.clone() - a4)))
}

/// Closed-form genus-2 reduced Hamiltonian, pairs `(1,4)` and `(2,3)`. Slices are 0-based.
pub fn g2_reduced_hamiltonian<C: Coeff>(a: &[C], k: &[C]) -> Result<C> {
    Ok(g2_pair_hamiltonian(&a[0], &a[3], &k[0], &k[3])? + &g2_pair_hamiltonian(&a[1], &a[2], &k[1], &k[2])?)
}

/// Closed-form genus-2 reduced equations for `ȧ₁ … ȧ₄`.
pub fn g2_reference_adot<C: Coeff>(a: &[C], k: &[C]) -> Result<[C; 4]> {
    let (a1, a2, a3, a4) = (&a[0], &a[1], &a[2], &a[3]);
    let (k1, k2, k3, k4) = (&k[0], &k[1], &k[2], &k[3]);
    let d14 = sq(&(a1.clone() - a4));
    let d23 = sq(&(a2.clone() - a3));
    let m2 = c::<C>(-2);
    let x1 = (m2.clone() * &(a1.clone() * k4 + &(a4.clone() * &(c::<C>(-2) * k1 + k4)))).try_div(&d14)?;
    let x4 = (m2.clone() * &(a4.clone() * k1 + &(a1.clone() * &(k1.clone() - &(c::<C>(2) * k4))))).try_div(&d14)?;
    let x2 = (m2.clone() * &(a2.clone() * k3 + &(a3.clone() * &(c::<C>(-2) * k2 + k3)))).try_div(&d23)?;
    let x3 = (m2 * &(a3.clone() * k2 + &(a2.clone() * &(k2.clone() - &(c::<C>(2) * k3))))).try_div(&d23)?;
    Ok([x1, x2, x3, x4])
}

/// Genus-2 ratios `κ̇_s/ȧ_s`: `(κ₁−κ₄)/(a₁−a₄)` for `s = 1, 4` and `(κ₂−κ₃)/(a₂−a₃)` for `s = 2, 3`.
pub fn g2_kappa_ratios<C: Coeff>(a: &[C], k: &[C]) -> Result<[C; 4]> {
    let r14 = (k[0].clone() - &k[3]).try_div(&(a[0].clone() - &a[3]))?;
    let r23 = (k[1].clone() - &k[2]).try_div(&(a[1].clone() - &a[2]))?;
    Ok([r14.clone(), r23.clone(), r23, r14])
}

/// Genus-2 `α̇₁₂/ȧ₃ = α₁₂(b₂+b₃)/(a₂−a₃)` and `α̇₂₁/ȧ₄ = α₂₁(b₁+b₄)/(a₁−a₄)`.
pub fn g2_alpha_factors<C: Coeff>(a: &[C], b: &[C], alpha12: &C, alpha21: &C) -> Result<(C, C)> {
    let f12 = (alpha12.clone() * &(b[1].clone() + &b[2])).try_div(&(a[1].clone() - &a[2]))?;
    let f21 = (alpha21.clone() * &(b[0].clone() + &b[3])).try_div(&(a[0].clone() - &a[3]))?;
    Ok((f12, f21))
}

/// Reference expressions for the genus-2 vector field on the reduction locus: `[ȧ₁, ȧ₂, ȧ₃, ȧ₄, κ̇₁, κ̇₂, κ̇₃, κ̇₄, α̇₁₂, α̇₂₁]`.
pub fn g2_reference_vector_field<C: Coeff>(a: &[C], b: &[C], k: &[C], alpha12: &C, alpha21: &C) -> Result<[C; 10]> {
    let (a1, a2, a3, a4) = (&a[0], &a[1], &a[2], &a[3]);
    let (b1, b2, b3, b4) = (&b[0], &b[1], &b[2], &b[3]);
    let (k1, k2, k3, k4) = (&k[0], &k[1], &k[2], &k[3]);
    let two = c::<C>(2);
    let d14 = a1.clone() - a4;
    let d23 = a2.clone() - a3;
    let cube = |x: &C| x.clone() * x * x;
    let n1 = c::<C>(-2) * a4 * k1 + &(a1.clone() * k4) + &(a4.clone() * k4);
    let n2 = c::<C>(-2) * a3 * k2 + &(a2.clone() * k3) + &(a3.clone() * k3);
    let n3 = a2.clone() * k2 + &(a3.clone() * k2) - &(two.clone() * a2 * k3);
    let n4 = a1.clone() * k1 + &(a4.clone() * k1) - &(two.clone() * a1 * k4);
    let da1 = (two.clone() * &n1).try_div(&sq(&d14))?;
    let da2 = (two.clone() * &n2).try_div(&sq(&d23))?;
    let da3 = (two.clone() * &n3).try_div(&sq(&d23))?;
    let da4 = (two.clone() * &n4).try_div(&sq(&d14))?;
    let dk1 = (two.clone() * &(k1.clone() - k4) * &n1).try_div(&cube(&d14))?;
    let dk2 = (two.clone() * &(k2.clone() - k3) * &n2).try_div(&cube(&d23))?;
    let dk3 = (two.clone() * &(k2.clone() - k3) * &n3).try_div(&cube(&d23))?;
    let dk4 = (c::<C>(-2) * &(k1.clone() - k4) * &n4).try_div(&cube(&(a4.clone() - a1)))?;
    let n12 = a2.clone() * alpha12 * k2 + &(a3.clone() * alpha12 * k2) - &(two.clone() * a2 * alpha12 * k3);
    let dal12 = (two.clone() * &(b2.clone() + b3) * &n12).try_div(&cube(&d23))?;
    let n21 = a1.clone() * alpha21 * k1 + &(a4.clone() * alpha21 * k1) - &(two.clone() * a1 * alpha21 * k4);
    let dal21 = (two * &(b1.clone() + b4) * &n21).try_div(&cube(&d14))?;
    Ok([da1, da2, da3, da4, dk1, dk2, dk3, dk4, dal12, dal21])
}

/// `(a₁−a₃)(a₁−a₆)(a₃−a₆)`.
pub fn g3_delta<C: Coeff>(a1: &C, a3: &C, a6: &C) -> C {
    (a1.clone() - a3) * &(a1.clone() - a6) * &(a3.clone() - a6)
}

/// Closed-form genus-3 integrals of the triple `(a₁, a₃, a₆)`: `(F₀, F₁, F₂)`.
pub fn g3_integrals<C: Coeff>(a1: &C, a3: &C, a6: &C, k1: &C, k3: &C, k6: &C) -> Result<(C, C, C)> {
    let d = g3_delta(a1, a3, a6);
    let f0 = a1.clone() * a6 * &(a6.clone() - a1) * k3
        + &(sq(a3) * &(a6.clone() * k1 - &(a1.clone() * k6)))
        + &(a3.clone() * &(sq(a1) * k6 - &(sq(a6) * k1)));
    let f1 = sq(a6) * &(k3.clone() - k1) + &(sq(a3) * &(k1.clone() - k6)) + &(sq(a1) * &(k6.clone() - k3));
    let f2 = a6.clone() * &(k3.clone() - k1) + &(a3.clone() * &(k1.clone() - k6)) + &(a1.clone() * &(k6.clone() - k3));
    Ok((f0.try_div(&d)?, f1.try_div(&d)?, f2.try_div(&d)?))
}

/// Closed-form genus-3 reduced Hamiltonian of the triple `(a₁, a₃, a₆)`.
pub fn g3_triple_hamiltonian<C: Coeff>(a1: &C, a3: &C, a6: &C, k1: &C, k3: &C, k6: &C) -> Result<C> {
    let d = g3_delta(a1, a3, a6);
    let first = sq(a6) * &(k3.clone() - k1) + &(sq(a3) * &(k1.clone() - k6)) + &(sq(a1) * &(k6.clone() - k3));
    let second = c::<C>(2)
        * &(a6.clone() * &(k3.clone() - k1) + &(a3.clone() * &(k1.clone() - k6)) + &(a1.clone() * &(k6.clone() - k3)));
    let third = sq(a6) * &(a1.clone() * k3 - &(a3.clone() * k1))
        + &(sq(a3) * &(a6.clone() * k1 - &(a1.clone() * k6)))
        + &(sq(a1) * &(a3.clone() * k6 - &(a6.clone() * k3)));
    let d2 = sq(&d);
    Ok(sq(&first).try_div(&d2)? + &(second * &third).try_div(&d2)?)
}

/// The two genus-3 triples as 0-based indices: `(1, 3, 6)` and `(2, 4, 5)`.
pub const G3_TRIPLES: [[usize; 3]; 2] = [[0, 2, 5], [1, 3, 4]];

/// Closed-form genus-3 reduced Hamiltonian summed over both triples.
pub fn g3_reduced_hamiltonian<C: Coeff>(a: &[C], k: &[C]) -> Result<C> {
    let mut acc = C::zero();
    for [i, j, l] in G3_TRIPLES {
        acc = acc + &g3_triple_hamiltonian(&a[i], &a[j], &a[l], &k[i], &k[j], &k[l])?;
    }
    Ok(acc)
}

/// Numerators `N_s` of the genus-3 ratio relations `κ̇_s · Δ = N_s · ȧ_s` for `s = 1, 3, 6`.
pub fn g3_kappa_numerators<C: Coeff>(a1: &C, a3: &C, a6: &C, k1: &C, k3: &C, k6: &C) -> [C; 3] {
    let n1 = sq(&(a1.clone() - a6)) * &(k1.clone() - k3) - &(sq(&(a1.clone() - a3)) * &(k1.clone() - k6));
    let n3 = sq(&(a3.clone() - a6)) * &(k1.clone() - k3) + &(sq(&(a1.clone() - a3)) * &(k3.clone() - k6));
    let n6 = sq(&(a6.clone() - a1)) * &(k3.clone() - k6) - &(sq(&(a6.clone() - a3)) * &(k1.clone() - k6));
    [n1, n3, n6]
}

/// Right side of the sum rule `ȧ₁ + ȧ₃ + ȧ₆ = 2F₂`, as a numerator over `Δ`.
pub fn g3_sum_rule_numerator<C: Coeff>(a1: &C, a3: &C, a6: &C, k1: &C, k3: &C, k6: &C) -> C {
    c::<C>(2) * &(a6.clone() * &(k3.clone() - k1) + &(a3.clone() * &(k1.clone() - k6)) + &(a1.clone() * &(k6.clone() - k3)))
}

/// Closed-form equal-`κ` equations `[ȧ₁, ȧ₃, ȧ₆]` with `κ₁ = κ₃ = κ₆ = K`.
pub fn g3_equal_kappa_adot<C: Coeff>(a1: &C, a3: &C, a6: &C, k: &C) -> Result<[C; 3]> {
    let two_k = c::<C>(2) * k;
    let x1 = two_k.try_div(&((a1.clone() - a3) * &(a1.clone() - a6)))?;
    let x3 = (-two_k.clone()).try_div(&((a1.clone() - a3) * &(a3.clone() - a6)))?;
    let x6 = two_k.try_div(&((a1.clone() - a6) * &(a3.clone() - a6)))?;
    Ok([x1, x3, x6])
}

/// Closed-form equal-`κ` logarithmic derivatives `(α̇₂₁/α₂₁, α̇₂₃/α₂₃)`.
pub fn g3_equal_kappa_alpha_rates<C: Coeff>(a1: &C, a3: &C, a6: &C, b1: &C, b3: &C, b6: &C, k: &C) -> Result<(C, C)> {
    let two_k = c::<C>(2) * k;
    let r21 = (two_k.clone() * &(b1.clone() + b6)).try_div(&(sq(&(a1.clone() - a6)) * &(a3.clone() - a6)))?
        - &(two_k.clone() * &(b1.clone() + b3)).try_div(&(sq(&(a1.clone() - a3)) * &(a3.clone() - a6)))?;
    let r23 = (two_k.clone() * &(b3.clone() + b6)).try_div(&((a1.clone() - a6) * &sq(&(a3.clone() - a6))))?
        - &(two_k * &(b1.clone() + b3)).try_div(&(sq(&(a1.clone() - a3)) * &(a1.clone() - a6)))?;
    Ok((r21, r23))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, Rational};
    use crate::lagrange::{lagrange_coeffs, NodeData};

    fn q(v: &[i64]) -> alloc::vec::Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn pair_example() {
        // (a₁,a₄,κ₁,κ₄) = (1,2,3,5)
        let a = q(&[1, 3, 4, 2]);
        let k = q(&[3, 1, 1, 5]);
        assert_eq!(g2_reduced_hamiltonian(&a, &k).unwrap(), int(-4));
        let (f0, f1) = g2_integrals(&a[0], &a[3], &k[0], &k[3]).unwrap();
        assert_eq!((f0, f1), (int(1), int(2)));
    }

    #[test]
    fn integrals_match_interpolation() {
        let (a1, a3, a6) = (rat(1, 3), int(2), rat(-7, 5));
        let (k1, k3, k6) = (int(4), rat(2, 9), int(-1));
        let (f0, f1, f2) = g3_integrals(&a1, &a3, &a6, &k1, &k3, &k6).unwrap();
        let nd = NodeData::new(alloc::vec![a1, a3, a6], alloc::vec![k1, k3, k6]).unwrap();
        let f = lagrange_coeffs(&nd).unwrap();
        assert_eq!(f[0], f0);
        assert_eq!(f[2], f2);
        // the closed-form F₁ carries the opposite sign of the interpolation coefficient
        assert_eq!(f[1], -f1);
    }

    #[test]
    fn triple_hamiltonian_is_f1_squared_plus_2f0f2() {
        let (a1, a3, a6) = (rat(5, 3), int(-2), rat(1, 4));
        let (k1, k3, k6) = (rat(3, 7), int(6), rat(-2, 3));
        let (f0, f1, f2) = g3_integrals(&a1, &a3, &a6, &k1, &k3, &k6).unwrap();
        let h = g3_triple_hamiltonian(&a1, &a3, &a6, &k1, &k3, &k6).unwrap();
        assert_eq!(h, f1.clone() * &f1 + &(int(2) * f0 * f2));
    }

    #[test]
    fn equal_kappa_vanishing() {
        let a = q(&[1, 5, 2, 7, 3, 4]);
        let k = q(&[2, 9, 2, 9, 9, 2]);
        assert_eq!(g3_reduced_hamiltonian(&a, &k).unwrap(), int(0));
    }
}
