//! Hermite and Smith normal forms over the integers, with transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// Column-style Hermite normal form `h = m * transform`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hermite {
    pub h: IntMatrix,
    pub transform: IntMatrix,
    /// Number of nonzero (pivot) columns; they come first in `h`.
    pub rank: usize,
}

/// Smith normal form `left * m * right = diagonal`, with `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl Smith {
    /// The diagonal entries `d_1, ..., d_min(rows, cols)`.
    pub fn divisors(&self) -> Vec<BigInt> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).map(|i| self.diagonal[(i, i)].clone()).collect()
    }
}

fn smallest_nonzero_in_row(m: &IntMatrix, row: usize, from_col: usize) -> Option<usize> {
    (from_col..m.cols())
        .filter(|&j| !m[(row, j)].is_zero())
        .min_by(|&a, &b| m[(row, a)].abs().cmp(&m[(row, b)].abs()))
}

/// Column-style Hermite normal form.
///
/// Rows are scanned top to bottom; each pivot is positive and every entry to
/// the left of a pivot is reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> Hermite {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols());
    let mut pc = 0;
    for i in 0..m.rows() {
        if pc == m.cols() {
            break;
        }
        while let Some(jmin) = smallest_nonzero_in_row(&h, i, pc) {
            h.swap_cols(pc, jmin);
            u.swap_cols(pc, jmin);
            let mut reduced = true;
            for j in pc + 1..m.cols() {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -h[(i, j)].div_floor(&h[(i, pc)]);
                h.add_col_multiple(j, pc, &q);
                u.add_col_multiple(j, pc, &q);
                if !h[(i, j)].is_zero() {
                    reduced = false;
                }
            }
            if reduced {
                break;
            }
        }
        if h[(i, pc)].is_zero() {
            continue;
        }
        if h[(i, pc)].is_negative() {
            h.negate_col(pc);
            u.negate_col(pc);
        }
        for j in 0..pc {
            let q = -h[(i, j)].div_floor(&h[(i, pc)]);
            h.add_col_multiple(j, pc, &q);
            u.add_col_multiple(j, pc, &q);
        }
        pc += 1;
    }
    Hermite {
        h,
        transform: u,
        rank: pc,
    }
}

/// Smith normal form with unimodular transforms on both sides.
pub fn snf(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Smith {
                    diagonal: d,
                    left,
                    right,
                };
            };
            d.swap_rows(t, bi);
            left.swap_rows(t, bi);
            d.swap_cols(t, bj);
            right.swap_cols(t, bj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // pull a non-multiple into row t; the next pass shrinks the pivot
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    left.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }
    Smith {
        diagonal: d,
        left,
        right,
    }
}

/// Exact inverse of a unimodular matrix.
pub fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::NotUnimodular);
    }
    // m * u = hnf(m) = I exactly when m is unimodular
    let herm = hnf(m);
    if herm.h == IntMatrix::identity(m.rows()) {
        Ok(herm.transform)
    } else {
        Err(Error::NotUnimodular)
    }
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && m.determinant().abs().is_one()
}
