//! Catalog of synthetic truth functions with declared anisotropic smoothness.
//!
//! Each truth is defined on the unit cube and extended to all of `R^d` by a
//! smooth bump that equals one on `[-1,2]^d` and vanishes outside `[-2,3]^d`.
//! The bump is infinitely smooth, so the declared smoothness of the truth is
//! preserved on `[0,1]^d` while convolutions against rapidly decaying kernels
//! stay well defined.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// A synthetic test function with known smoothness and active coordinates.
#[derive(Clone)]
pub struct TruthFunction {
    id: String,
    dim: usize,
    /// Hoelder exponent per coordinate (meaningful on the active set).
    alpha: Vec<f64>,
    /// Coordinates the function actually depends on.
    active: Vec<usize>,
    /// Supremum of the raw function over the unit cube (rejection envelope
    /// when the truth acts as a log-density).
    sup_on_cube: f64,
    raw: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl fmt::Debug for TruthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruthFunction")
            .field("id", &self.id)
            .field("dim", &self.dim)
            .field("alpha", &self.alpha)
            .field("active", &self.active)
            .finish()
    }
}

/// Smooth ramp rising from 0 at `u=0` to 1 at `u=1`, infinitely smooth.
fn ramp(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let f = (-1.0 / u).exp();
        let g = (-1.0 / (1.0 - u)).exp();
        f / (f + g)
    }
}

/// One-dimensional bump: 1 on `[-1,2]`, 0 outside `[-2,3]`.
fn bump_1d(x: f64) -> f64 {
    if x < -1.0 {
        ramp(x + 2.0)
    } else if x > 2.0 {
        ramp(3.0 - x)
    } else {
        1.0
    }
}

impl TruthFunction {
    fn build(
        id: &str,
        dim: usize,
        alpha: Vec<f64>,
        active: Vec<usize>,
        sup_on_cube: f64,
        raw: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    ) -> Self {
        TruthFunction { id: id.to_string(), dim, alpha, active, sup_on_cube, raw }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn active_set(&self) -> &[usize] {
        &self.active
    }

    /// Supremum of [`Self::eval`] over the unit cube.
    pub fn sup_on_cube(&self) -> f64 {
        self.sup_on_cube
    }

    /// Harmonic smoothness aggregate over the active set,
    /// `(sum_{j in active} 1/alpha_j)^{-1}`.
    pub fn alpha_aggregate(&self) -> f64 {
        let s: f64 = self.active.iter().map(|&j| 1.0 / self.alpha[j]).sum();
        1.0 / s
    }

    /// Contraction exponent `-alpha0 / (2 alpha0 + 1)` this truth should
    /// exhibit under the adaptive multi-bandwidth prior, where `alpha0` is
    /// the aggregate over the active coordinates only.
    pub fn target_exponent(&self) -> f64 {
        let a0 = self.alpha_aggregate();
        -a0 / (2.0 * a0 + 1.0)
    }

    /// Evaluate the compactly extended function anywhere in `R^d`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        let mut b = 1.0;
        for &xi in x {
            b *= bump_1d(xi);
            if b == 0.0 {
                return 0.0;
            }
        }
        b * (self.raw)(x)
    }

    /// Look a truth up by its catalog id.
    pub fn by_id(id: &str) -> Result<TruthFunction> {
        match id {
            "cusp-1d" => Ok(Self::cusp(1)),
            "cusp-2d" => Ok(Self::cusp(2)),
            "wave-2d" => Ok(Self::wave()),
            "additive-2d" => Ok(Self::additive()),
            "flat-1d" => Ok(Self::flat(1)),
            "flat-2d" => Ok(Self::flat(2)),
            other => Err(Error::invalid(format!(
                "unknown truth '{other}'; known: cusp-1d, cusp-2d, wave-2d, additive-2d, flat-1d, flat-2d"
            ))),
        }
    }

    /// `|x_1 - 0.5|^{1.5}` embedded in `d` ambient dimensions: smoothness 1.5
    /// along the first coordinate, every other coordinate inert.
    pub fn cusp(dim: usize) -> TruthFunction {
        assert!((1..=2).contains(&dim), "cusp truth is cataloged for d in {{1,2}}");
        Self::build(
            if dim == 1 { "cusp-1d" } else { "cusp-2d" },
            dim,
            vec![1.5; dim],
            vec![0],
            0.5f64.powf(1.5),
            Arc::new(|x: &[f64]| {
                let v = (x[0] - 0.5).abs();
                v * v.sqrt()
            }),
        )
    }

    /// `sin(4 x_1) cos(2 x_2)`: smooth, anisotropy entering through the
    /// argument scaling rather than the smoothness exponents.
    pub fn wave() -> TruthFunction {
        Self::build(
            "wave-2d",
            2,
            vec![2.0, 2.0],
            vec![0, 1],
            1.0,
            Arc::new(|x: &[f64]| (4.0 * x[0]).sin() * (2.0 * x[1]).cos()),
        )
    }

    /// Additive anisotropic truth `|x_1 - 0.5|^{1.5} + (x_2 - 0.5)^2`.
    pub fn additive() -> TruthFunction {
        Self::build(
            "additive-2d",
            2,
            vec![1.5, 2.0],
            vec![0, 1],
            0.5f64.powf(1.5) + 0.25,
            Arc::new(|x: &[f64]| {
                let v = (x[0] - 0.5).abs();
                v * v.sqrt() + (x[1] - 0.5) * (x[1] - 0.5)
            }),
        )
    }

    /// The zero function (a uniform density once exponentiated).
    pub fn flat(dim: usize) -> TruthFunction {
        Self::build(
            if dim == 1 { "flat-1d" } else { "flat-2d" },
            dim,
            vec![f64::INFINITY; dim],
            vec![],
            0.0,
            Arc::new(|_: &[f64]| 0.0),
        )
    }

    /// A constant function under the standard compact extension (handy for
    /// convolution sanity checks).
    pub fn constant(dim: usize, c: f64) -> TruthFunction {
        Self::build(
            "constant",
            dim,
            vec![f64::INFINITY; dim],
            vec![],
            c,
            Arc::new(move |_: &[f64]| c),
        )
    }
}
