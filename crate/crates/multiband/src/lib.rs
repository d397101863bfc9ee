//! Multi-bandwidth Gaussian process priors for nonparametric regression and
//! density estimation, plus a numerical laboratory for the approximation
//! theory behind them.
//!
//! The core object is a zero-mean Gaussian field with squared-exponential
//! covariance whose coordinates are rescaled by a vector of inverse-bandwidths
//! [`ScaleVector`]. Hierarchical priors over that vector ([`priors`]) let the
//! posterior adapt to anisotropic smoothness and to truths that depend on only
//! a subset of coordinates. The [`inference`] module fits such models to data
//! by Metropolis-within-Gibbs; [`higher_order`] and [`concentration`] measure
//! the kernel-approximation and small-ball quantities that govern how fast
//! those posteriors contract; [`rate`] runs end-to-end contraction-rate
//! experiments.
//!
//! A command-line driver (`multiband`) exposes the same functionality through
//! config files; see the `cli` module and the book under `book/`.
//!
//! ```
//! use multiband::{ScaleVector, kernel::covariance};
//!
//! let a = ScaleVector::new(vec![2.0, 0.0]).unwrap();
//! let c = covariance(&[0.0, 0.0], &[0.5, 0.9], &a).unwrap();
//! // the second coordinate is dropped because its scale is zero
//! assert!((c - (-1.0f64).exp()).abs() < 1e-12);
//! ```

pub mod cli;
pub mod concentration;
pub mod config;
pub mod dataset;
pub mod error;
pub mod field;
pub mod grid;
pub mod higher_order;
pub mod inference;
pub mod kernel;
pub mod linalg;
pub mod priors;
pub mod quad;
pub mod rate;
pub mod report;
pub mod scale;
pub mod stats;
pub mod truths;

pub use error::{Error, Result};
pub use field::{sample_field, GridField};
pub use grid::TensorGrid;
pub use scale::ScaleVector;
pub use truths::TruthFunction;
