//! Per-coordinate inverse-bandwidths with an optional sparsity pattern.

use crate::error::{Error, Result};

/// A vector of non-negative inverse-bandwidths `a_1..a_d`, one per coordinate,
/// together with the set of coordinates considered active.
///
/// Larger entries mean rougher sample paths along that coordinate; an entry of
/// exactly `0` drops the coordinate from the covariance altogether. Inactive
/// coordinates carry either `0` (subset-style priors that zero them out) or a
/// shared compact base value (mixture-style priors).
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleVector {
    values: Vec<f64>,
    active: Vec<bool>,
}

impl ScaleVector {
    /// A scale vector with every coordinate active.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let active = vec![true; values.len()];
        Self::with_active(values, active)
    }

    /// A scale vector with an explicit active pattern.
    pub fn with_active(values: Vec<f64>, active: Vec<bool>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("scale vector must have dimension >= 1"));
        }
        if values.len() != active.len() {
            return Err(Error::DimensionMismatch { expected: values.len(), got: active.len() });
        }
        for &v in &values {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("scale entries must be finite and >= 0, got {v}")));
            }
        }
        Ok(ScaleVector { values, active })
    }

    /// Constant scale `a` in every coordinate.
    pub fn constant(dim: usize, a: f64) -> Result<Self> {
        Self::new(vec![a; dim])
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn is_active(&self, j: usize) -> bool {
        self.active[j]
    }

    /// Indices of active coordinates, ascending.
    pub fn active_set(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.active[j]).collect()
    }

    /// Product of all entries (the paper-style `a*` aggregate).
    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }

    /// Largest entry.
    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Active set encoded as a bitmask (bit `j` set iff coordinate `j` is active).
    ///
    /// Only supported up to 64 dimensions, which is far beyond anything the
    /// dense samplers here can handle anyway.
    pub fn active_bitmask(&self) -> u64 {
        assert!(self.dim() <= 64, "bitmask only defined for d <= 64");
        let mut m = 0u64;
        for (j, &on) in self.active.iter().enumerate() {
            if on {
                m |= 1 << j;
            }
        }
        m
    }

    /// True if all entries are strictly positive.
    pub fn all_positive(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }
}
