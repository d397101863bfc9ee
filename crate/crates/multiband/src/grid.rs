//! Tensor grids over the unit cube: node enumeration, multilinear
//! interpolation, and trapezoid quadrature weights.

use crate::error::{Error, Result};

/// A tensor-product grid over `[0,1]^d` with a per-axis node count.
///
/// Nodes are enumerated in row-major order with axis `0` slowest and axis
/// `d-1` fastest, i.e. `index = (..(i_0 * m_1 + i_1) * m_2 + i_2 ..)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorGrid {
    counts: Vec<usize>,
    axes: Vec<Vec<f64>>,
}

impl TensorGrid {
    /// Equispaced grid with `m` nodes per axis (endpoints included).
    pub fn equispaced(dim: usize, m: usize) -> Result<Self> {
        Self::with_counts(&vec![m; dim])
    }

    /// Equispaced grid with a separate node count per axis.
    pub fn with_counts(counts: &[usize]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::invalid("grid must have dimension >= 1"));
        }
        if counts.iter().any(|&m| m < 2) {
            return Err(Error::invalid("each axis needs at least 2 nodes"));
        }
        let axes = counts
            .iter()
            .map(|&m| (0..m).map(|i| i as f64 / (m - 1) as f64).collect())
            .collect();
        Ok(TensorGrid { counts: counts.to_vec(), axes })
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinates of the node with flat index `idx`.
    pub fn node(&self, idx: usize) -> Vec<f64> {
        let mut rem = idx;
        let mut out = vec![0.0; self.dim()];
        for ax in (0..self.dim()).rev() {
            let m = self.counts[ax];
            out[ax] = self.axes[ax][rem % m];
            rem /= m;
        }
        out
    }

    /// All nodes in enumeration order.
    pub fn nodes(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    /// Trapezoid-rule quadrature weights per node (tensor product of the
    /// per-axis composite-trapezoid weights). Summing `w_i * f_i` approximates
    /// the integral of `f` over the unit cube.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let axis_w: Vec<Vec<f64>> = self
            .counts
            .iter()
            .map(|&m| {
                let h = 1.0 / (m - 1) as f64;
                (0..m).map(|i| if i == 0 || i == m - 1 { 0.5 * h } else { h }).collect()
            })
            .collect();
        let n = self.len();
        let mut out = vec![0.0; n];
        for (idx, w) in out.iter_mut().enumerate() {
            let mut rem = idx;
            let mut acc = 1.0;
            for ax in (0..self.dim()).rev() {
                let m = self.counts[ax];
                acc *= axis_w[ax][rem % m];
                rem /= m;
            }
            *w = acc;
        }
        out
    }

    /// Trapezoid-rule integral of nodal values over the unit cube.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len());
        self.trapezoid_weights().iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Multilinear interpolation of nodal `values` at a point of the unit
    /// cube. Points outside are clamped to the boundary.
    pub fn interpolate(&self, values: &[f64], x: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len());
        assert_eq!(x.len(), self.dim());
        let d = self.dim();
        // Per-axis cell index and fractional offset.
        let mut i0 = vec![0usize; d];
        let mut frac = vec![0.0f64; d];
        for ax in 0..d {
            let m = self.counts[ax];
            let t = x[ax].clamp(0.0, 1.0) * (m - 1) as f64;
            let mut i = t.floor() as usize;
            if i >= m - 1 {
                i = m - 2;
            }
            i0[ax] = i;
            frac[ax] = t - i as f64;
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut idx = 0usize;
            for ax in 0..d {
                let hi = (corner >> ax) & 1 == 1;
                w *= if hi { frac[ax] } else { 1.0 - frac[ax] };
                idx = idx * self.counts[ax] + i0[ax] + usize::from(hi);
            }
            acc += w * values[idx];
        }
        acc
    }
}
