//! Small exact linear algebra over ℚ: determinants, inverses, products.

use super::Rational;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![Rational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(r, x)| r * x).sum())
        .collect()
}

pub fn mat_add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// Exact determinant by Gaussian elimination with partial pivoting on nonzero entries.
pub fn det(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut result = Rational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return Rational::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            result = -result;
        }
        let pv = a[col][col].clone();
        result *= &pv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pv;
            for c in col..n {
                let v = &a[r][c] - &factor * &a[col][c];
                a[r][c] = v;
            }
        }
    }
    result
}

/// Exact inverse; None when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let pv = a[col][col].clone();
        for c in 0..n {
            a[col][c] = &a[col][c] / &pv;
            inv[col][c] = &inv[col][c] / &pv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let va = &a[r][c] - &factor * &a[col][c];
                a[r][c] = va;
                let vi = &inv[r][c] - &factor * &inv[col][c];
                inv[r][c] = vi;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn det_and_inverse_agree() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let d = det(&a);
        assert_eq!(d, rat_int(18));
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(det(&a).is_zero());
        assert!(inverse(&a).is_none());
    }
}
