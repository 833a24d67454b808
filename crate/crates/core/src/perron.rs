//! Perron–Frobenius data of a primitive transition matrix (reporting only).

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

pub const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PerronData {
    pub lambda: f64,
    /// Positive left eigenvector, scaled so its smallest entry is 1.
    pub omega: Vec<f64>,
}

impl PerronData {
    /// `|ωᵀA − λωᵀ|∞ / |ω|∞`.
    pub fn residual(&self, m: &IntMatrix) -> f64 {
        let a = to_f64(m);
        let n = self.omega.len();
        let max_omega = self.omega.iter().cloned().fold(0.0, f64::max);
        (0..n)
            .map(|j| {
                let lhs: f64 = (0..n).map(|i| self.omega[i] * a[i][j]).sum();
                (lhs - self.lambda * self.omega[j]).abs()
            })
            .fold(0.0, f64::max)
            / max_omega
    }
}

fn to_f64(m: &IntMatrix) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.to_f64().unwrap_or(f64::INFINITY))
                .collect()
        })
        .collect()
}

/// Power iteration on `Mᵀ` from the all-ones vector.
pub fn perron_data(m: &IntMatrix) -> Result<PerronData> {
    assert!(m.is_square(), "Perron data of a non-square matrix");
    let a = to_f64(m);
    let n = m.rows();
    let mut x = vec![1.0f64; n];
    let mut previous = f64::NAN;
    for _ in 0..MAX_ITERATIONS {
        // y = Mᵀ x, i.e. y_j = Σ_i x_i a_ij
        let y: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| x[i] * a[i][j]).sum())
            .collect();
        let estimate = y.iter().sum::<f64>() / x.iter().sum::<f64>();
        let scale = y.iter().cloned().fold(0.0, f64::max);
        if scale.is_nan() || scale <= 0.0 || !estimate.is_finite() {
            break;
        }
        x = y.into_iter().map(|v| v / scale).collect();
        if (estimate - previous).abs() <= 1e-12 * estimate.abs() {
            let min = x.iter().cloned().fold(f64::INFINITY, f64::min);
            if min > 0.0 {
                let data = PerronData {
                    lambda: estimate,
                    omega: x.iter().map(|v| v / min).collect(),
                };
                if data.residual(m) < 1e-10 {
                    return Ok(data);
                }
            }
        }
        previous = estimate;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}
