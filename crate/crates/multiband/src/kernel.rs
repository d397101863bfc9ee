//! Squared-exponential covariance with per-coordinate rescaling, and its
//! spectral density.
//!
//! The base field has covariance `c(t) = exp(-||t||^2)` at lag `t`; rescaling
//! coordinate `j` by `a_j` yields `exp(-sum_j a_j^2 (s_j - t_j)^2)`. The
//! inverse-bandwidth enters squared throughout, matching the rescaled-process
//! construction `W_{a.t}` (see the glossary chapter of the guide; an
//! alternative parameterization with `a_j` linear in the exponent exists in
//! the literature and is deliberately not used here).

use crate::error::{Error, Result};
use crate::scale::ScaleVector;

/// Squared-exponential kernel specification for a given ambient dimension.
///
/// The base covariance at lag zero is `1`, so all fields sampled from it have
/// unit marginal variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    dim: usize,
}

impl KernelSpec {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("kernel dimension must be >= 1"));
        }
        Ok(KernelSpec { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Base covariance at lag `t`: `exp(-||t||^2)`.
    pub fn base_covariance(&self, lag: &[f64]) -> f64 {
        (-lag.iter().map(|v| v * v).sum::<f64>()).exp()
    }
}

/// Covariance of the rescaled field between points `s` and `t`:
/// `exp(-sum_j a_j^2 (s_j - t_j)^2)`.
///
/// A coordinate with `a_j = 0` is dropped: the result does not depend on it.
pub fn covariance(s: &[f64], t: &[f64], a: &ScaleVector) -> Result<f64> {
    if s.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: s.len() });
    }
    if t.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: t.len() });
    }
    let mut q = 0.0;
    for j in 0..a.dim() {
        let aj = a.get(j);
        let d = s[j] - t[j];
        q += aj * aj * d * d;
    }
    Ok((-q).exp())
}

/// Spectral density of the rescaled field at frequency `lambda`:
/// `(prod_j a_j)^{-1} (2^d pi^{d/2})^{-1} exp(-sum_j lambda_j^2 / (4 a_j^2))`.
///
/// This is the Fourier dual of [`covariance`] and integrates to one over all
/// frequencies. Every `a_j` must be strictly positive; a zero scale collapses
/// the density onto a lower-dimensional subspace and is rejected.
pub fn spectral_density(lambda: &[f64], a: &ScaleVector) -> Result<f64> {
    if lambda.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: lambda.len() });
    }
    if !a.all_positive() {
        return Err(Error::invalid("spectral density requires all scales > 0"));
    }
    let d = a.dim() as f64;
    let norm = a.product() * 2f64.powf(d) * std::f64::consts::PI.powf(d / 2.0);
    let mut q = 0.0;
    for j in 0..a.dim() {
        let aj = a.get(j);
        q += lambda[j] * lambda[j] / (4.0 * aj * aj);
    }
    Ok((-q).exp() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_lag_is_one() {
        let a = ScaleVector::new(vec![3.0, 0.7]).unwrap();
        let s = [0.3, 0.9];
        assert_eq!(covariance(&s, &s, &a).unwrap(), 1.0);
    }

    #[test]
    fn hand_values() {
        let a = ScaleVector::new(vec![1.0]).unwrap();
        assert_relative_eq!(
            covariance(&[0.0], &[1.0], &a).unwrap(),
            (-1.0f64).exp(),
            epsilon = 1e-15
        );
        // Second coordinate inert when its scale is zero.
        let a2 = ScaleVector::new(vec![2.0, 0.0]).unwrap();
        assert_relative_eq!(
            covariance(&[0.0, 0.0], &[0.5, 0.9], &a2).unwrap(),
            (-1.0f64).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let a = ScaleVector::new(vec![1.0, 1.0]).unwrap();
        assert!(covariance(&[0.0], &[0.0, 0.0], &a).is_err());
        assert!(spectral_density(&[0.0], &a).is_err());
    }

    #[test]
    fn spectral_hand_values() {
        let a = ScaleVector::new(vec![1.0]).unwrap();
        let want = 1.0 / (2.0 * std::f64::consts::PI.sqrt());
        assert_relative_eq!(spectral_density(&[0.0], &a).unwrap(), want, epsilon = 1e-15);

        let a2 = ScaleVector::new(vec![1.0, 1.0]).unwrap();
        let want2 = 1.0 / (4.0 * std::f64::consts::PI);
        assert_relative_eq!(spectral_density(&[0.0, 0.0], &a2).unwrap(), want2, epsilon = 1e-15);
    }

    #[test]
    fn spectral_density_normalizes() {
        let a = ScaleVector::new(vec![1.0]).unwrap();
        let mass = integrate(
            |l| spectral_density(&[l], &a).unwrap(),
            -60.0,
            60.0,
            1e-10,
        )
        .unwrap();
        assert_relative_eq!(mass, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn zero_scale_rejected_by_spectral_density() {
        let a = ScaleVector::new(vec![1.0, 0.0]).unwrap();
        assert!(spectral_density(&[0.0, 0.0], &a).is_err());
    }

    #[test]
    fn fourier_duality_1d() {
        // The covariance at lag u equals the cosine transform of the spectral
        // density, for several scales and lags.
        for &aval in &[0.5, 1.0, 3.0] {
            let a = ScaleVector::new(vec![aval]).unwrap();
            for &u in &[0.0, 0.2, 1.0] {
                let lim = 40.0 * aval.max(1.0);
                let transform = integrate(
                    |l| (l * u).cos() * spectral_density(&[l], &a).unwrap(),
                    -lim,
                    lim,
                    1e-9,
                )
                .unwrap();
                let direct = covariance(&[0.0], &[u], &a).unwrap();
                assert_relative_eq!(transform, direct, epsilon = 1e-6);
            }
        }
    }

    proptest! {
        #[test]
        fn coordinate_drop_exact(
            s0 in 0.0f64..1.0, s1 in 0.0f64..1.0,
            t0 in 0.0f64..1.0, t1a in 0.0f64..1.0, t1b in 0.0f64..1.0,
            a0 in 0.0f64..5.0,
        ) {
            let a = ScaleVector::new(vec![a0, 0.0]).unwrap();
            let c1 = covariance(&[s0, s1], &[t0, t1a], &a).unwrap();
            let c2 = covariance(&[s0, s1], &[t0, t1b], &a).unwrap();
            prop_assert_eq!(c1, c2);
        }

        #[test]
        fn monotone_in_each_scale(
            s in 0.0f64..1.0, t in 0.0f64..1.0,
            a0 in 0.01f64..5.0, bump in 0.01f64..2.0,
        ) {
            prop_assume!((s - t).abs() > 1e-3);
            let lo = ScaleVector::new(vec![a0]).unwrap();
            let hi = ScaleVector::new(vec![a0 + bump]).unwrap();
            let c_lo = covariance(&[s], &[t], &lo).unwrap();
            let c_hi = covariance(&[s], &[t], &hi).unwrap();
            prop_assert!(c_hi < c_lo);
        }
    }
}
