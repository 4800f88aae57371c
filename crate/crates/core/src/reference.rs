//! Independent dense linear algebra used to cross-check the sparse kernel.
//!
//! Deliberately written in a different style from `matrix`: row-major dense
//! storage, textbook row echelon form, no shared code paths. Slow, simple,
//! and only used as an oracle in tests and internal consistency checks.

use crate::field::{Field, Scalar};
use crate::matrix::SparseMatrix;

pub type DenseMatrix = Vec<Vec<Scalar>>;

pub fn to_dense(m: &SparseMatrix) -> DenseMatrix {
    let mut out = vec![vec![m.field.zero(); m.ncols()]; m.rows];
    for (j, col) in m.cols.iter().enumerate() {
        for (i, c) in col.iter() {
            out[i][j] = c.clone();
        }
    }
    out
}

/// Row echelon form in place; returns the rank.
fn echelon(field: &Field, a: &mut DenseMatrix) -> usize {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(src) = (pivot_row..rows).find(|&i| !field.is_zero(&a[i][col])) else {
            continue;
        };
        a.swap(pivot_row, src);
        let inv = field.inv(&a[pivot_row][col]);
        for c in col..cols {
            a[pivot_row][c] = field.mul(&a[pivot_row][c], &inv);
        }
        for i in 0..rows {
            if i != pivot_row && !field.is_zero(&a[i][col]) {
                let factor = a[i][col].clone();
                for c in col..cols {
                    let delta = field.mul(&factor, &a[pivot_row][c]);
                    a[i][c] = field.sub(&a[i][c], &delta);
                }
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

pub fn dense_rank(field: &Field, a: &DenseMatrix) -> usize {
    let mut work = a.clone();
    echelon(field, &mut work)
}

pub fn dense_kernel_dim(field: &Field, a: &DenseMatrix) -> usize {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    cols - dense_rank(field, a)
}

/// Whether b is a combination of the columns of a.
pub fn dense_solvable(field: &Field, a: &DenseMatrix, b: &[Scalar]) -> bool {
    let mut augmented = a.clone();
    if augmented.is_empty() {
        return b.iter().all(|c| field.is_zero(c));
    }
    assert_eq!(augmented.len(), b.len(), "rhs length mismatch");
    for (row, extra) in augmented.iter_mut().zip(b) {
        row.push(extra.clone());
    }
    dense_rank(field, a) == {
        let mut work = augmented;
        echelon(field, &mut work)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_sparse_agree_on_small_cases() {
        let cases = [
            SparseMatrix::from_triples(Field::Q, 2, 2, &[(0, 0, 1), (0, 1, 1)]),
            SparseMatrix::from_triples(
                Field::Q,
                3,
                3,
                &[(0, 0, 2), (1, 1, 3), (2, 2, 5), (0, 2, 1)],
            ),
            SparseMatrix::zero(Field::Q, 4, 3),
            SparseMatrix::identity(Field::gf(5).unwrap(), 4),
        ];
        for m in &cases {
            let dense = to_dense(m);
            assert_eq!(dense_rank(&m.field, &dense), m.rank());
            assert_eq!(dense_kernel_dim(&m.field, &dense), m.kernel().len());
        }
    }

    #[test]
    fn solvability_matches_membership() {
        let m = SparseMatrix::from_triples(Field::Q, 3, 2, &[(0, 0, 1), (1, 1, 1)]);
        let dense = to_dense(&m);
        let f = Field::Q;
        let yes = vec![f.from_i64(2), f.from_i64(-3), f.zero()];
        let no = vec![f.zero(), f.zero(), f.one()];
        assert!(dense_solvable(&f, &dense, &yes));
        assert!(!dense_solvable(&f, &dense, &no));
    }
}
