//! Dense linear algebra over the rationals.

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Solves `sum_j x_j * cols[j] = rhs`. Every column and `rhs` must have the
/// same length.
pub fn solve_columns(cols: &[Vec<BigRational>], rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    let k = cols.len();
    let m = rhs.len();
    // augmented matrix, row-major
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else {
            return Err(Error::DependentBasis);
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row][col..].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (src, dst) = if r < row {
                    let (lo, hi) = a.split_at_mut(row);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[row], &mut hi[0])
                };
                for c in col..=k {
                    if !src[c].is_zero() {
                        dst[c] -= &f * &src[c];
                    }
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[k].is_zero()) {
        return Err(Error::NotInSpan);
    }
    Ok(pivots.into_iter().map(|r| a[r][k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn solves_and_reports() {
        let cols = vec![vec![q(1), q(1), q(0)], vec![q(1), q(-1), q(0)]];
        let x = solve_columns(&cols, &[q(3), q(1), q(0)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert_eq!(solve_columns(&cols, &[q(0), q(0), q(1)]), Err(Error::NotInSpan));
        let dep = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(solve_columns(&dep, &[q(1), q(2)]), Err(Error::DependentBasis));
    }
}
