//! Row Hermite normal form over Z with the unimodular transform.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Result of [`row_hnf`]: `transform · input = hnf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub hnf: IntMatrix,
    pub transform: IntMatrix,
    pub rank: usize,
}

impl Hnf {
    /// Rows of the transform that annihilate the input.
    pub fn kernel_rows(&self) -> &[Vec<BigInt>] {
        &self.transform[self.rank..]
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// `row[dst] -= q·row[src]` on both matrices.
fn sub_row(h: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for m in [h, u] {
        let src_row = m[src].clone();
        for (d, s) in m[dst].iter_mut().zip(src_row.iter()) {
            *d -= q * s;
        }
    }
}

fn negate_row(h: &mut IntMatrix, u: &mut IntMatrix, i: usize) {
    for m in [h, u] {
        for v in m[i].iter_mut() {
            *v = -v.clone();
        }
    }
}

/// Computes the row-style Hermite normal form of an `m × n` integer matrix.
///
/// Nonzero rows come first, pivots are positive and entries above each
/// pivot lie in `[0, pivot)`.
pub fn row_hnf(a: &IntMatrix) -> Hnf {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut h = a.clone();
    let mut u = identity(rows);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        loop {
            let best = (pivot_row..rows)
                .filter(|&i| !h[i][col].is_zero())
                .min_by_key(|&i| h[i][col].abs());
            let Some(best) = best else { break };
            h.swap(pivot_row, best);
            u.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[pivot_row][col]);
                sub_row(&mut h, &mut u, i, pivot_row, &q);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            negate_row(&mut h, &mut u, pivot_row);
        }
        for i in 0..pivot_row {
            let q = h[i][col].div_floor(&h[pivot_row][col]);
            if !q.is_zero() {
                sub_row(&mut h, &mut u, i, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    Hnf {
        hnf: h,
        transform: u,
        rank: pivot_row,
    }
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn hnf_of_small_matrix() {
        let a = mat(&[&[2, 4], &[3, 5], &[4, 6]]);
        let res = row_hnf(&a);
        assert_eq!(res.rank, 2);
        assert_eq!(mat_mul(&res.transform, &a), res.hnf);
        assert_eq!(res.hnf, mat(&[&[1, 1], &[0, 2], &[0, 0]]));
        let det = determinant(&res.transform);
        assert!(det == BigInt::one() || det == -BigInt::one());
        for k in res.kernel_rows() {
            assert_eq!(mat_mul(&vec![k.clone()], &a), mat(&[&[0, 0]]));
        }
    }

    #[test]
    fn rank_deficient_input() {
        let a = mat(&[&[2, 4], &[1, 2], &[-3, -6]]);
        let res = row_hnf(&a);
        assert_eq!(res.rank, 1);
        assert_eq!(res.hnf[0], vec![BigInt::from(1), BigInt::from(2)]);
        assert_eq!(res.kernel_rows().len(), 2);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&mat(&[&[1, 2], &[3, 4]])), BigInt::from(-2));
        assert_eq!(
            determinant(&mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])),
            BigInt::from(-5)
        );
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }
}
