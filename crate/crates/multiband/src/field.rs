//! Exact sampling of the rescaled Gaussian field on tensor grids.

use crate::error::{Error, Result};
use crate::grid::TensorGrid;
use crate::linalg::{build_covariance_matrix, cholesky_with_jitter};
use crate::scale::ScaleVector;
use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Dense sampling is refused beyond this many grid nodes.
pub const MAX_DENSE_NODES: usize = 5000;

/// One exact draw of the zero-mean field on a grid.
#[derive(Debug, Clone)]
pub struct GridField {
    pub grid: TensorGrid,
    pub values: Vec<f64>,
    pub scale: ScaleVector,
    pub seed: u64,
}

/// Draw the field on `grid` with scales `a`, exactly, via a dense Cholesky
/// factor of the grid covariance. Deterministic for a given `seed`.
pub fn sample_field(grid: &TensorGrid, a: &ScaleVector, seed: u64) -> Result<GridField> {
    let factor = grid_cholesky(grid, a)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let z = standard_normal_vector(grid.len(), &mut rng);
    let values = (&factor.0 * z).iter().cloned().collect();
    Ok(GridField { grid: grid.clone(), values, scale: a.clone(), seed })
}

/// Cholesky factor of the grid covariance (plus any ladder jitter used).
pub fn grid_cholesky(
    grid: &TensorGrid,
    a: &ScaleVector,
) -> Result<(nalgebra::DMatrix<f64>, f64)> {
    if grid.len() > MAX_DENSE_NODES {
        return Err(Error::GridTooLarge { nodes: grid.len(), cap: MAX_DENSE_NODES });
    }
    if grid.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: grid.dim() });
    }
    let m = build_covariance_matrix(&grid.nodes(), a, 0.0)?;
    let ch = cholesky_with_jitter(&m)?;
    let jitter = ch.jitter();
    Ok((ch.lower().clone(), jitter))
}

pub(crate) fn standard_normal_vector<R: Rng>(n: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let grid = TensorGrid::equispaced(1, 51).unwrap();
        let a = ScaleVector::new(vec![3.0]).unwrap();
        let f1 = sample_field(&grid, &a, 7).unwrap();
        let f2 = sample_field(&grid, &a, 7).unwrap();
        assert_eq!(f1.values, f2.values);
        let f3 = sample_field(&grid, &a, 8).unwrap();
        assert_ne!(f1.values, f3.values);
    }

    #[test]
    fn zero_scale_freezes_field() {
        let grid = TensorGrid::equispaced(1, 64).unwrap();
        let a = ScaleVector::new(vec![0.0]).unwrap();
        let f = sample_field(&grid, &a, 123).unwrap();
        let first = f.values[0];
        for &v in &f.values {
            // All nodes share the single draw up to the jitter the rank-one
            // covariance needs to factor (sqrt(1e-10) scale noise).
            assert!((v - first).abs() < 1e-3, "spread {}", (v - first).abs());
        }
    }

    #[test]
    fn node_cap_enforced() {
        let grid = TensorGrid::equispaced(2, 72).unwrap(); // 5184 nodes
        let a = ScaleVector::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(sample_field(&grid, &a, 1), Err(Error::GridTooLarge { .. })));
    }

    #[test]
    fn unit_marginal_variance() {
        let grid = TensorGrid::equispaced(1, 201).unwrap();
        let a = ScaleVector::new(vec![5.0]).unwrap();
        let node = 100; // mid-grid
        let mut vals = Vec::new();
        for seed in 0..200 {
            vals.push(sample_field(&grid, &a, seed).unwrap().values[node]);
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / vals.len() as f64;
        assert!((var - 1.0).abs() < 0.15, "empirical variance {var}");
    }

    #[test]
    fn empirical_covariance_matches_kernel() {
        let grid = TensorGrid::equispaced(1, 21).unwrap();
        let a = ScaleVector::new(vec![2.0]).unwrap();
        let (i, j) = (3, 15);
        let mut acc = 0.0;
        let n = 1000;
        for seed in 0..n {
            let f = sample_field(&grid, &a, seed).unwrap();
            acc += f.values[i] * f.values[j];
        }
        let emp = acc / n as f64;
        let ni = grid.node(i);
        let nj = grid.node(j);
        let want = crate::kernel::covariance(&ni, &nj, &a).unwrap();
        assert!((emp - want).abs() < 0.1, "empirical {emp} vs analytic {want}");
    }
}
