//! Dense covariance assembly and Cholesky factorization with an escalating
//! jitter ladder.

use crate::error::{Error, Result};
use crate::kernel::covariance;
use crate::scale::ScaleVector;
use nalgebra::DMatrix;

/// First rung of the jitter ladder.
pub const JITTER_FLOOR: f64 = 1e-10;
/// The ladder escalates by this factor per rung.
pub const JITTER_STEP: f64 = 10.0;
/// Factorization is abandoned once the required jitter would exceed this.
pub const JITTER_CEIL: f64 = 1e-2;

/// Kernel matrix over `points` plus `noise_var` on the diagonal.
pub fn build_covariance_matrix(
    points: &[Vec<f64>],
    a: &ScaleVector,
    noise_var: f64,
) -> Result<DMatrix<f64>> {
    assert!(!points.is_empty(), "need at least one point");
    assert!(noise_var >= 0.0, "noise variance must be >= 0");
    let n = points.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let c = covariance(&points[i], &points[j], a)?;
            m[(i, j)] = c;
            m[(j, i)] = c;
        }
        m[(i, i)] += noise_var;
    }
    Ok(m)
}

/// A lower-triangular Cholesky factor together with the diagonal jitter that
/// had to be added for the factorization to succeed.
#[derive(Debug, Clone)]
pub struct JitteredCholesky {
    factor: DMatrix<f64>,
    jitter: f64,
}

impl JitteredCholesky {
    pub fn lower(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// log det of the factored matrix (`M + jitter I`).
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.factor.nrows()).map(|i| self.factor[(i, i)].ln()).sum::<f64>()
    }

    /// Solve `(M + jitter I) x = b` via forward/backward substitution.
    pub fn solve(&self, b: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        let mut x = b.clone();
        self.factor.solve_lower_triangular_mut(&mut x);
        self.factor.tr_solve_lower_triangular_mut(&mut x);
        x
    }

    /// Forward-substitution solve `L x = b`.
    pub fn solve_lower(&self, b: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        let mut x = b.clone();
        self.factor.solve_lower_triangular_mut(&mut x);
        x
    }

    /// `L z` for a whitened vector `z`.
    pub fn unwhiten(&self, z: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        &self.factor * z
    }
}

/// Cholesky factorization of a symmetric matrix, retrying with diagonal
/// jitter `1e-10, 1e-9, ..., 1e-2` until it succeeds.
///
/// The first attempt uses no jitter at all, so well-conditioned matrices
/// factor exactly. A matrix still failing at `1e-2` is reported as
/// effectively indefinite rather than silently over-regularized.
pub fn cholesky_with_jitter(m: &DMatrix<f64>) -> Result<JitteredCholesky> {
    assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
    let mut jitter = 0.0;
    loop {
        let mut attempt = m.clone();
        if jitter > 0.0 {
            for i in 0..attempt.nrows() {
                attempt[(i, i)] += jitter;
            }
        }
        if let Some(ch) = attempt.cholesky() {
            return Ok(JitteredCholesky { factor: ch.unpack(), jitter });
        }
        jitter = if jitter == 0.0 { JITTER_FLOOR } else { jitter * JITTER_STEP };
        if jitter > JITTER_CEIL {
            return Err(Error::Indefinite { max_jitter: JITTER_CEIL });
        }
    }
}
