use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::normal_form::{inverse_unimodular, snf};
use super::IntMatrix;
use crate::error::{Error, Result};

/// Extends `vectors` (each of length `dim`) to a basis of `Z^dim`.
///
/// The result is unimodular and its first `vectors.len()` columns are the
/// given vectors, in order. The completion columns come from the inverse of
/// the left Smith transform of the stacked vectors.
pub fn complete_basis(vectors: &[Vec<BigInt>], dim: usize) -> Result<IntMatrix> {
    let m = vectors.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::InvalidBasis(format!(
            "vector of length {} in dimension {dim}",
            v.len()
        )));
    }
    if m == 0 {
        return Ok(IntMatrix::identity(dim));
    }
    if m > dim {
        return Err(Error::NotPrimitiveSystem {
            dim,
            divisor: BigInt::zero(),
        });
    }
    let stack = IntMatrix::from_columns(dim, vectors);
    let smith = snf(&stack);
    if let Some(bad) = smith.divisors().into_iter().find(|d| !d.is_one()) {
        return Err(Error::NotPrimitiveSystem { dim, divisor: bad });
    }
    let left_inv = inverse_unimodular(&smith.left)?;
    let mut columns = vectors.to_vec();
    columns.extend((m..dim).map(|j| left_inv.column(j)));
    let p = IntMatrix::from_columns(dim, &columns);
    if !p.determinant().abs().is_one() {
        return Err(Error::Invariant(
            "basis completion produced a non-unimodular matrix".into(),
        ));
    }
    Ok(p)
}

/// The conjugate `P⁻¹ Aᵗ P` in block form, with the leading `leading`
/// columns of `P` spanning an invariant sublattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChange {
    pub basis: IntMatrix,
    pub leading: usize,
    pub conjugate: IntMatrix,
    /// Lower-right block, of size `(n - leading) x (n - leading)`.
    pub a1: IntMatrix,
}

impl BasisChange {
    pub fn w_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.leading).map(|j| self.basis.column(j)).collect()
    }

    /// Upper-left block acting on the invariant sublattice.
    pub fn e_block(&self) -> IntMatrix {
        self.conjugate.block(0..self.leading, 0..self.leading)
    }

    pub fn f_block(&self) -> IntMatrix {
        let n = self.conjugate.rows();
        self.conjugate.block(0..self.leading, self.leading..n)
    }
}

/// Conjugates `at` by the unimodular `basis` and splits off the lower-right block.
///
/// Fails with [`Error::BlockFormViolation`] when the first `leading` columns
/// of `basis` do not span an `at`-invariant sublattice.
pub fn conjugate_and_extract(
    at: &IntMatrix,
    basis: &IntMatrix,
    leading: usize,
) -> Result<BasisChange> {
    let n = at.rows();
    if !at.is_square() || basis.rows() != n || basis.cols() != n || leading > n {
        return Err(Error::InvalidBasis(format!(
            "expected {n}x{n} basis with at most {n} leading columns"
        )));
    }
    let inv = inverse_unimodular(basis)?;
    if &inv * basis != IntMatrix::identity(n) {
        return Err(Error::Invariant("unimodular inverse check failed".into()));
    }
    let conjugate = &(&inv * at) * basis;
    for i in leading..n {
        for j in 0..leading {
            if !conjugate[(i, j)].is_zero() {
                return Err(Error::BlockFormViolation {
                    row: i,
                    col: j,
                    value: conjugate[(i, j)].clone(),
                });
            }
        }
    }
    let a1 = conjugate.block(leading..n, leading..n);
    Ok(BasisChange {
        basis: basis.clone(),
        leading,
        conjugate,
        a1,
    })
}
