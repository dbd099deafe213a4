//! Gaussian elimination over any `Coeff`.
//!
//! Pivots are chosen by `Coeff::pivot_rank`, which for ε-scalars prefers the entry
//! whose value part has the lowest ε-valuation.

use alloc::vec::Vec;

use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Solves `m · x = rhs` for square `m`.
pub fn solve<C: Coeff>(mut m: Vec<Vec<C>>, mut rhs: Vec<C>) -> Result<Vec<C>> {
    let n = m.len();
    if rhs.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("linear system must be square"));
    }
    for col in 0..n {
        let pivot = (col..n)
            .filter_map(|r| m[r][col].pivot_rank().map(|k| (k, r)))
            .min()
            .map(|(_, r)| r)
            .ok_or(Error::SingularSystem)?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].try_recip().map_err(|_| Error::SingularSystem)?;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() * &inv;
            for c in col..n {
                if m[col][c].is_zero() {
                    continue;
                }
                let t = f.clone() * &m[col][c];
                let cur = core::mem::replace(&mut m[r][c], C::zero());
                m[r][c] = cur - &t;
            }
            let t = f * &rhs[col];
            let cur = core::mem::replace(&mut rhs[r], C::zero());
            rhs[r] = cur - &t;
        }
    }
    Ok((0..n)
        .map(|i| rhs[i].clone() * &m[i][i].try_recip().expect("pivot checked"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, Rational};
    use alloc::vec;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn needs_a_row_swap() {
        let m = q(&[&[0, 1], &[2, 1]]);
        let x = solve(m, vec![int(3), int(5)]).unwrap();
        assert_eq!(x, vec![int(1), int(3)]);
    }

    #[test]
    fn three_by_three() {
        let m = q(&[&[2, 1, -1], &[-3, -1, 2], &[-2, 1, 2]]);
        let x = solve(m, vec![int(8), int(-11), int(-3)]).unwrap();
        assert_eq!(x, vec![int(2), int(3), int(-1)]);
    }

    #[test]
    fn singular() {
        let m = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(m, vec![int(1), int(2)]), Err(Error::SingularSystem));
    }

    #[test]
    fn rational_entries() {
        let m = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 5)]];
        let x = solve(m.clone(), vec![int(1), int(1)]).unwrap();
        for row in 0..2 {
            let lhs = m[row][0].clone() * &x[0] + &(m[row][1].clone() * &x[1]);
            assert_eq!(lhs, int(1));
        }
    }
}
