//! Prior distributions on the vector of inverse-bandwidths, and the
//! deterministic minimax bandwidth formulas.
//!
//! Five random families are provided. In all of them a gamma variable `G`
//! drives the overall magnitude and a power transform distributes it over
//! coordinates:
//!
//! * [`AnisotropicPrior`]: simplex weights `theta ~ Dirichlet(beta)`, then
//!   independently `a_j = G_j^{theta_j}` so that `a_j^{1/theta_j}` is gamma.
//!   Small `theta_j` means lighter tails, hence less roughness, along
//!   coordinate `j`.
//! * [`DimensionReductionPrior`]: a random subset `S` of coordinates shares a
//!   single scale `A` with `A^{|S|}` gamma; the rest sit at a compact base
//!   value.
//! * [`UnifiedPrior`]: a random subset with the anisotropic construction
//!   restricted to it, and exact zeros elsewhere.
//! * [`PartialMixturePrior`]: each coordinate independently picks a shared
//!   `A` (with `A^d` gamma) with a sample-size-dependent probability `p_n`,
//!   else the base value.
//! * [`SingleBandwidthPrior`]: one shared scale for every coordinate, with
//!   `A^{d_star}` gamma.

use crate::error::{Error, Result};
use crate::scale::ScaleVector;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::ln_gamma;

/// Shape/rate parameterization of the gamma driver density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub shape: f64,
    pub rate: f64,
}

impl Default for GammaParams {
    /// Smooth at zero with a light tail; the default driver everywhere.
    fn default() -> Self {
        GammaParams { shape: 2.0, rate: 1.0 }
    }
}

impl GammaParams {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0) {
            return Err(Error::invalid("gamma shape and rate must be > 0"));
        }
        Ok(GammaParams { shape, rate })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        Gamma::new(self.shape, 1.0 / self.rate).expect("validated parameters").sample(rng)
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.rate.ln() - ln_gamma(self.shape) + (self.shape - 1.0) * x.ln()
            - self.rate * x
    }

    /// CDF, used by tests as a distributional oracle.
    pub fn cdf(&self, x: f64) -> f64 {
        use statrs::distribution::ContinuousCDF;
        statrs::distribution::Gamma::new(self.shape, self.rate)
            .expect("validated parameters")
            .cdf(x)
    }
}

/// Log-density of `A` when `A^k` follows the gamma driver (change of
/// variables with Jacobian `k a^{k-1}`).
pub fn power_gamma_log_pdf(g: &GammaParams, k: f64, a: f64) -> f64 {
    if a <= 0.0 || k <= 0.0 {
        return f64::NEG_INFINITY;
    }
    g.log_pdf(a.powf(k)) + k.ln() + (k - 1.0) * a.ln()
}

/// Draw from `A = G^{1/k}` with `G` gamma.
pub fn power_gamma_sample<R: Rng>(g: &GammaParams, k: f64, rng: &mut R) -> f64 {
    g.sample(rng).powf(1.0 / k)
}

/// Dirichlet log-density on the simplex. A one-dimensional simplex is a
/// single point; its density is taken as `1`.
pub fn log_dirichlet(beta: &[f64], theta: &[f64]) -> f64 {
    assert_eq!(beta.len(), theta.len());
    if beta.len() == 1 {
        return 0.0;
    }
    let mut s = ln_gamma(beta.iter().sum());
    for (b, t) in beta.iter().zip(theta) {
        s -= ln_gamma(*b);
        s += (b - 1.0) * t.ln();
    }
    s
}

/// Draw from a Dirichlet via normalized gamma variables.
pub fn sample_dirichlet<R: Rng>(beta: &[f64], rng: &mut R) -> Vec<f64> {
    if beta.len() == 1 {
        return vec![1.0];
    }
    let draws: Vec<f64> = beta
        .iter()
        .map(|&b| Gamma::new(b, 1.0).expect("beta > 0").sample(rng).max(f64::MIN_POSITIVE))
        .collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|g| g / total).collect()
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Uniformly draw a subset of size `k` from `0..d`.
fn sample_subset<R: Rng>(d: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..d).collect();
    // Partial Fisher-Yates: the first k entries are a uniform k-subset.
    for i in 0..k {
        let j = rng.gen_range(i..d);
        idx.swap(i, j);
    }
    let mut s = idx[..k].to_vec();
    s.sort_unstable();
    s
}

fn validate_dim_weights(d: usize, w: &[f64]) -> Result<()> {
    if w.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: w.len() });
    }
    if w.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::invalid("dimension weights need full support on 1..=d"));
    }
    Ok(())
}

/// Compact base distribution for coordinates outside the scaled subset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseDistribution {
    /// Degenerate at a single positive value (the default, at 1).
    Point(f64),
    /// Uniform on a compact positive interval.
    Uniform(f64, f64),
}

impl Default for BaseDistribution {
    fn default() -> Self {
        BaseDistribution::Point(1.0)
    }
}

impl BaseDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BaseDistribution::Point(v) if v > 0.0 => Ok(()),
            BaseDistribution::Uniform(lo, hi) if lo > 0.0 && hi > lo => Ok(()),
            _ => Err(Error::invalid("base distribution must be positive and non-degenerate")),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            BaseDistribution::Point(v) => v,
            BaseDistribution::Uniform(lo, hi) => rng.gen_range(lo..hi),
        }
    }

    pub fn log_pdf(&self, b: f64) -> f64 {
        match *self {
            BaseDistribution::Point(v) => {
                if b == v {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            BaseDistribution::Uniform(lo, hi) => {
                if (lo..=hi).contains(&b) {
                    -(hi - lo).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Anisotropic prior
// ---------------------------------------------------------------------------

/// Hierarchical prior for fully anisotropic scaling: `theta ~ Dir(beta)`,
/// then `a_j^{1/theta_j}` i.i.d. gamma.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropicPrior {
    pub beta: Vec<f64>,
    pub gamma: GammaParams,
}

impl AnisotropicPrior {
    pub fn new(beta: Vec<f64>, gamma: GammaParams) -> Result<Self> {
        if beta.is_empty() || beta.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::invalid("dirichlet concentrations must be positive"));
        }
        Ok(AnisotropicPrior { beta, gamma })
    }

    /// Uniform Dirichlet with the default gamma driver.
    pub fn default_for_dim(d: usize) -> Self {
        AnisotropicPrior { beta: vec![1.0; d], gamma: GammaParams::default() }
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> (Vec<f64>, ScaleVector) {
        let theta = sample_dirichlet(&self.beta, rng);
        let a = self.sample_given_theta(&theta, rng);
        (theta, a)
    }

    pub fn sample_seeded(&self, seed: u64) -> (Vec<f64>, ScaleVector) {
        self.sample(&mut ChaCha12Rng::seed_from_u64(seed))
    }

    /// Draw the scales conditionally on fixed simplex weights.
    pub fn sample_given_theta<R: Rng>(&self, theta: &[f64], rng: &mut R) -> ScaleVector {
        assert_eq!(theta.len(), self.dim());
        let values =
            theta.iter().map(|&t| power_gamma_sample(&self.gamma, 1.0 / t, rng)).collect();
        ScaleVector::new(values).expect("gamma powers are positive")
    }

    /// Joint log-density of `(theta, a)`: the Dirichlet term plus, per
    /// coordinate, the gamma density of `a_j^{1/theta_j}` with its
    /// change-of-variables Jacobian.
    pub fn log_density(&self, theta: &[f64], a: &ScaleVector) -> Result<f64> {
        if theta.len() != self.dim() || a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: theta.len() });
        }
        if theta.iter().any(|&t| !(t > 0.0 && t < 1.0)) && self.dim() > 1 {
            return Err(Error::invalid("theta must be strictly interior to the simplex"));
        }
        if a.values().iter().any(|&v| v <= 0.0) {
            return Err(Error::invalid("log-density requires all scales > 0"));
        }
        Ok(log_dirichlet(&self.beta, theta) + self.log_density_given_theta(theta, a))
    }

    /// The conditional part of [`Self::log_density`] (no Dirichlet term).
    pub fn log_density_given_theta(&self, theta: &[f64], a: &ScaleVector) -> f64 {
        theta
            .iter()
            .zip(a.values())
            .map(|(&t, &aj)| power_gamma_log_pdf(&self.gamma, 1.0 / t, aj))
            .sum()
    }
}

// ---------------------------------------------------------------------------
// Dimension-reduction prior
// ---------------------------------------------------------------------------

/// Subset prior with one shared scale on the subset and a compact base value
/// off it.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionReductionPrior {
    pub dim: usize,
    /// Probability of each subset size `1..=dim`.
    pub dim_weights: Vec<f64>,
    pub gamma: GammaParams,
    pub base: BaseDistribution,
}

impl DimensionReductionPrior {
    pub fn new(
        dim: usize,
        dim_weights: Vec<f64>,
        gamma: GammaParams,
        base: BaseDistribution,
    ) -> Result<Self> {
        validate_dim_weights(dim, &dim_weights)?;
        base.validate()?;
        Ok(DimensionReductionPrior { dim, dim_weights, gamma, base })
    }

    pub fn default_for_dim(d: usize) -> Self {
        DimensionReductionPrior {
            dim: d,
            dim_weights: vec![1.0 / d as f64; d],
            gamma: GammaParams::default(),
            base: BaseDistribution::default(),
        }
    }

    /// Draw `(subset, scales)`: subset size from `dim_weights`, the subset
    /// uniformly among that size, `A = G^{1/size}`, base value elsewhere.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> (Vec<usize>, ScaleVector) {
        let k = sample_size_index(&self.dim_weights, rng) + 1;
        let subset = sample_subset(self.dim, k, rng);
        let a_shared = power_gamma_sample(&self.gamma, k as f64, rng);
        let b = self.base.sample(rng);
        let mut values = vec![b; self.dim];
        let mut active = vec![false; self.dim];
        for &j in &subset {
            values[j] = a_shared;
            active[j] = true;
        }
        (subset, ScaleVector::with_active(values, active).expect("positive scales"))
    }

    pub fn sample_seeded(&self, seed: u64) -> (Vec<usize>, ScaleVector) {
        self.sample(&mut ChaCha12Rng::seed_from_u64(seed))
    }

    /// Discrete log-mass of a particular subset (size weight spread uniformly
    /// over all subsets of that size).
    pub fn log_subset_mass(&self, size: usize) -> f64 {
        self.dim_weights[size - 1].ln() - ln_binomial(self.dim, size)
    }

    /// Conditional log-density of the shared scale given the subset size.
    pub fn log_shared_scale_pdf(&self, size: usize, a_shared: f64) -> f64 {
        power_gamma_log_pdf(&self.gamma, size as f64, a_shared)
    }
}

fn sample_size_index<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        u -= w;
        if u <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

// ---------------------------------------------------------------------------
// Unified prior
// ---------------------------------------------------------------------------

/// Subset prior with the anisotropic construction on the subset and exact
/// zeros off it.
#[derive(Debug, Clone, PartialEq)]
pub struct UnifiedPrior {
    pub dim: usize,
    pub dim_weights: Vec<f64>,
    /// Dirichlet concentration per subset size: `beta_by_size[k-1]` has
    /// length `k`.
    pub beta_by_size: Vec<Vec<f64>>,
    pub gamma: GammaParams,
}

impl UnifiedPrior {
    pub fn new(
        dim: usize,
        dim_weights: Vec<f64>,
        beta_by_size: Vec<Vec<f64>>,
        gamma: GammaParams,
    ) -> Result<Self> {
        validate_dim_weights(dim, &dim_weights)?;
        if beta_by_size.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: beta_by_size.len() });
        }
        for (k, beta) in beta_by_size.iter().enumerate() {
            if beta.len() != k + 1 || beta.iter().any(|&b| !(b > 0.0)) {
                return Err(Error::invalid(format!(
                    "beta_by_size[{k}] must have length {} with positive entries",
                    k + 1
                )));
            }
        }
        Ok(UnifiedPrior { dim, dim_weights, beta_by_size, gamma })
    }

    pub fn default_for_dim(d: usize) -> Self {
        UnifiedPrior {
            dim: d,
            dim_weights: vec![1.0 / d as f64; d],
            beta_by_size: (1..=d).map(|k| vec![1.0; k]).collect(),
            gamma: GammaParams::default(),
        }
    }

    /// Draw `(subset, theta on the subset, scales)`. Scales are exactly zero
    /// off the subset.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> (Vec<usize>, Vec<f64>, ScaleVector) {
        let k = sample_size_index(&self.dim_weights, rng) + 1;
        let subset = sample_subset(self.dim, k, rng);
        let theta = sample_dirichlet(&self.beta_by_size[k - 1], rng);
        let mut values = vec![0.0; self.dim];
        let mut active = vec![false; self.dim];
        for (pos, &j) in subset.iter().enumerate() {
            values[j] = power_gamma_sample(&self.gamma, 1.0 / theta[pos], rng);
            active[j] = true;
        }
        (subset, theta, ScaleVector::with_active(values, active).expect("positive on subset"))
    }

    pub fn sample_seeded(&self, seed: u64) -> (Vec<usize>, Vec<f64>, ScaleVector) {
        self.sample(&mut ChaCha12Rng::seed_from_u64(seed))
    }

    pub fn log_subset_mass(&self, size: usize) -> f64 {
        self.dim_weights[size - 1].ln() - ln_binomial(self.dim, size)
    }

    /// Conditional log-density of `(theta, active scales)` given the subset.
    /// `theta` and `a_on_subset` are aligned with the ascending subset order.
    pub fn log_density_given_subset(
        &self,
        subset: &[usize],
        theta: &[f64],
        a_on_subset: &[f64],
    ) -> f64 {
        let k = subset.len();
        let mut s = log_dirichlet(&self.beta_by_size[k - 1], theta);
        for (pos, &aj) in a_on_subset.iter().enumerate() {
            s += power_gamma_log_pdf(&self.gamma, 1.0 / theta[pos], aj);
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Partial mixture prior
// ---------------------------------------------------------------------------

/// Sample-size-dependent mixture: coordinate `j` takes the shared scale `A`
/// (with `A^dim` gamma) with probability `p_n`, else the base value.
///
/// `p_n` solves `p_n^dim = 1 - exp(-c_n)` with
/// `c_n = n^{-d_star/(2 alpha_star + d_star)}`, so the scaled subset thins
/// out as the sample size grows.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMixturePrior {
    pub dim: usize,
    pub n: u64,
    pub alpha_star: f64,
    pub d_star: usize,
    pub gamma: GammaParams,
    pub base_value: f64,
}

impl PartialMixturePrior {
    pub fn new(
        dim: usize,
        n: u64,
        alpha_star: f64,
        d_star: usize,
        gamma: GammaParams,
        base_value: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("partial mixture needs n >= 2"));
        }
        if !(alpha_star > 0.0) {
            return Err(Error::invalid("alpha_star must be > 0"));
        }
        if d_star == 0 || d_star > dim {
            return Err(Error::invalid("d_star must lie in 1..=dim"));
        }
        if !(base_value > 0.0) {
            return Err(Error::invalid("base_value must be > 0"));
        }
        Ok(PartialMixturePrior { dim, n, alpha_star, d_star, gamma, base_value })
    }

    /// The mixture weight `p_n`.
    pub fn mixture_weight(&self) -> f64 {
        let ds = self.d_star as f64;
        let c_n = (self.n as f64).powf(-ds / (2.0 * self.alpha_star + ds));
        (1.0 - (-c_n).exp()).powf(1.0 / self.dim as f64)
    }

    /// Draw a scale vector: shared `A = G^{1/dim}`, per-coordinate Bernoulli
    /// pick of `A` versus the base value.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> ScaleVector {
        let (_, s) = self.sample_with_indicators(rng);
        s
    }

    pub fn sample_with_indicators<R: Rng>(&self, rng: &mut R) -> (Vec<bool>, ScaleVector) {
        let p = self.mixture_weight();
        let a_shared = power_gamma_sample(&self.gamma, self.dim as f64, rng);
        let picks: Vec<bool> = (0..self.dim).map(|_| rng.gen::<f64>() < p).collect();
        let values: Vec<f64> =
            picks.iter().map(|&on| if on { a_shared } else { self.base_value }).collect();
        let s = ScaleVector::with_active(values, picks.clone()).expect("positive scales");
        (picks, s)
    }

    pub fn sample_seeded(&self, seed: u64) -> ScaleVector {
        self.sample(&mut ChaCha12Rng::seed_from_u64(seed))
    }

    /// Log-mass of an indicator pattern with `k` coordinates on the shared
    /// scale.
    pub fn log_indicator_mass(&self, k: usize) -> f64 {
        let p = self.mixture_weight();
        k as f64 * p.ln() + (self.dim - k) as f64 * (1.0 - p).ln()
    }

    /// Log-density of the shared scale (`A^dim` gamma).
    pub fn log_shared_scale_pdf(&self, a_shared: f64) -> f64 {
        power_gamma_log_pdf(&self.gamma, self.dim as f64, a_shared)
    }
}

// ---------------------------------------------------------------------------
// Single-bandwidth prior
// ---------------------------------------------------------------------------

/// One shared scale for all coordinates, `A^{d_star}` gamma.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleBandwidthPrior {
    pub dim: usize,
    pub d_star: usize,
    pub gamma: GammaParams,
}

impl SingleBandwidthPrior {
    pub fn new(dim: usize, d_star: usize, gamma: GammaParams) -> Result<Self> {
        if d_star == 0 || d_star > dim {
            return Err(Error::invalid("d_star must lie in 1..=dim"));
        }
        Ok(SingleBandwidthPrior { dim, d_star, gamma })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> ScaleVector {
        let a = power_gamma_sample(&self.gamma, self.d_star as f64, rng);
        ScaleVector::constant(self.dim, a).expect("positive scale")
    }

    pub fn sample_seeded(&self, seed: u64) -> ScaleVector {
        self.sample(&mut ChaCha12Rng::seed_from_u64(seed))
    }

    pub fn log_shared_scale_pdf(&self, a_shared: f64) -> f64 {
        power_gamma_log_pdf(&self.gamma, self.d_star as f64, a_shared)
    }
}

// ---------------------------------------------------------------------------
// Family enum
// ---------------------------------------------------------------------------

/// Any of the supported priors on the scale vector.
#[derive(Debug, Clone, PartialEq)]
pub enum BandwidthPrior {
    Anisotropic(AnisotropicPrior),
    DimensionReduction(DimensionReductionPrior),
    Unified(UnifiedPrior),
    PartialMixture(PartialMixturePrior),
    SingleBandwidth(SingleBandwidthPrior),
    Deterministic(ScaleVector),
}

impl BandwidthPrior {
    pub fn dim(&self) -> usize {
        match self {
            BandwidthPrior::Anisotropic(p) => p.dim(),
            BandwidthPrior::DimensionReduction(p) => p.dim,
            BandwidthPrior::Unified(p) => p.dim,
            BandwidthPrior::PartialMixture(p) => p.dim,
            BandwidthPrior::SingleBandwidth(p) => p.dim,
            BandwidthPrior::Deterministic(s) => s.dim(),
        }
    }
}

// ---------------------------------------------------------------------------
// Deterministic minimax bandwidths
// ---------------------------------------------------------------------------

/// Smoothness assumptions for the deterministic bandwidth formulas.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothnessSpec {
    /// Fully anisotropic: one exponent per coordinate, all coordinates
    /// active.
    Anisotropic { alpha: Vec<f64> },
    /// Isotropic smoothness on an active subset; inactive coordinates get
    /// scale 1.
    SubsetIsotropic { dim: usize, alpha: f64, active: Vec<usize> },
}

/// Deterministic rate-optimal bandwidths at sample size `n`.
///
/// For the anisotropic case with aggregate `alpha0 = (sum 1/alpha_j)^{-1}`,
/// coordinate `j` receives `[n^{1/(2 alpha0 + 1)}]^{alpha0 / alpha_j}`; the
/// product over coordinates then telescopes to `n^{1/(2 alpha0 + 1)}`
/// exactly. For the subset case, active coordinates share
/// `[n^{1/(2 alpha + d_star)}]^{1/d_star}` (so the product of active entries
/// is `n^{1/(2 alpha + d_star)}`) and inactive coordinates sit at 1.
pub fn minimax_bandwidths(n: u64, spec: &SmoothnessSpec) -> Result<ScaleVector> {
    if n < 1 {
        return Err(Error::invalid("sample size must be >= 1"));
    }
    match spec {
        SmoothnessSpec::Anisotropic { alpha } => {
            if alpha.is_empty() {
                return Err(Error::invalid("empty smoothness vector"));
            }
            if alpha.iter().any(|&a| !(a > 0.0)) {
                return Err(Error::invalid("smoothness entries must be > 0"));
            }
            let alpha0 = 1.0 / alpha.iter().map(|a| 1.0 / a).sum::<f64>();
            let base = (n as f64).powf(1.0 / (2.0 * alpha0 + 1.0));
            let values = alpha.iter().map(|&aj| base.powf(alpha0 / aj)).collect();
            ScaleVector::new(values)
        }
        SmoothnessSpec::SubsetIsotropic { dim, alpha, active } => {
            if active.is_empty() {
                return Err(Error::invalid("active set must be nonempty"));
            }
            if !(*alpha > 0.0) {
                return Err(Error::invalid("smoothness must be > 0"));
            }
            if active.iter().any(|&j| j >= *dim) {
                return Err(Error::invalid("active index out of range"));
            }
            let ds = active.len() as f64;
            let scaled = (n as f64).powf(1.0 / (2.0 * alpha + ds)).powf(1.0 / ds);
            let mut values = vec![1.0; *dim];
            let mut mask = vec![false; *dim];
            for &j in active {
                values[j] = scaled;
                mask[j] = true;
            }
            ScaleVector::with_active(values, mask)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn anisotropic_d1_is_plain_gamma() {
        let p = AnisotropicPrior::new(vec![1.0], GammaParams::new(2.0, 1.0).unwrap()).unwrap();
        let (theta, a) = p.sample_seeded(5);
        assert_eq!(theta, vec![1.0]);
        assert!(a.get(0) > 0.0);
    }

    #[test]
    fn anisotropic_concentrated_dirichlet() {
        let p = AnisotropicPrior::new(vec![1e6, 1e6], GammaParams::default()).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..100 {
            let (theta, _) = p.sample(&mut rng);
            assert!((theta[0] - 0.5).abs() < 0.01, "theta {theta:?}");
        }
    }

    #[test]
    fn log_density_hand_value_exponential() {
        // theta = (1), unit-exponential driver, a = 2: density e^{-2}.
        let p = AnisotropicPrior::new(vec![1.0], GammaParams::new(1.0, 1.0).unwrap()).unwrap();
        let a = ScaleVector::new(vec![2.0]).unwrap();
        assert_relative_eq!(p.log_density(&[1.0], &a).unwrap(), -2.0, epsilon = 1e-12);
    }

    #[test]
    fn log_density_jacobian_hand_value() {
        // theta = (1/2, 1/2), a = (1,1): each conditional term is
        // log g(1) + log 2 because a^{1/theta} = 1 and the Jacobian is 2.
        let p = AnisotropicPrior::new(vec![1.0, 1.0], GammaParams::default()).unwrap();
        let a = ScaleVector::new(vec![1.0, 1.0]).unwrap();
        let cond = p.log_density_given_theta(&[0.5, 0.5], &a);
        let want = 2.0 * (p.gamma.log_pdf(1.0) + 2.0f64.ln());
        assert_relative_eq!(cond, want, epsilon = 1e-12);
    }

    #[test]
    fn log_density_boundary_errors() {
        let p = AnisotropicPrior::new(vec![1.0, 1.0], GammaParams::default()).unwrap();
        let a = ScaleVector::new(vec![1.0, 1.0]).unwrap();
        assert!(p.log_density(&[0.0, 1.0], &a).is_err());
        let zero = ScaleVector::new(vec![0.0, 1.0]).unwrap();
        assert!(p.log_density(&[0.5, 0.5], &zero).is_err());
    }

    #[test]
    fn conditional_density_normalizes() {
        // d = 1: integral of exp(log density) over a in (0, inf) is 1.
        let p = AnisotropicPrior::new(vec![1.0], GammaParams::default()).unwrap();
        let mass = crate::quad::integrate(
            |x| {
                if x <= 0.0 {
                    0.0
                } else {
                    p.log_density(&[1.0], &ScaleVector::new(vec![x]).unwrap()).unwrap().exp()
                }
            },
            1e-12,
            80.0,
            1e-9,
        )
        .unwrap();
        assert_relative_eq!(mass, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn pushforward_matches_gamma_cdf() {
        // With theta fixed, a^{1/theta} should be exactly gamma distributed.
        let p = AnisotropicPrior::new(vec![1.0, 1.0], GammaParams::default()).unwrap();
        let theta = [0.3, 0.7];
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let n = 100_000;
        let mut xs: Vec<f64> =
            (0..n).map(|_| p.sample_given_theta(&theta, &mut rng).get(0).powf(1.0 / 0.3)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let f = p.gamma.cdf(x);
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((f - lo).abs()).max((f - hi).abs());
        }
        assert!(ks < 0.02, "KS distance {ks}");
    }

    #[test]
    fn dimension_reduction_structure() {
        let p = DimensionReductionPrior::default_for_dim(1);
        let (s, a) = p.sample_seeded(3);
        assert_eq!(s, vec![0]);
        assert!(a.get(0) > 0.0);

        let p3 = DimensionReductionPrior::default_for_dim(3);
        let (s3, a3) = p3.sample_seeded(4);
        for j in 0..3 {
            if s3.contains(&j) {
                assert!(a3.is_active(j));
            } else {
                // off-subset coordinates carry exactly the base value
                assert_eq!(a3.get(j), 1.0);
                assert!(!a3.is_active(j));
            }
        }
    }

    #[test]
    fn dimension_reduction_subset_frequencies() {
        let p = DimensionReductionPrior::default_for_dim(3);
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let n = 100_000;
        let mut singleton_counts = [0usize; 3];
        for _ in 0..n {
            let (s, _) = p.sample(&mut rng);
            if s.len() == 1 {
                singleton_counts[s[0]] += 1;
            }
        }
        for c in singleton_counts {
            let freq = c as f64 / n as f64;
            assert!((freq - 1.0 / 9.0).abs() < 0.01, "singleton frequency {freq}");
        }
    }

    #[test]
    fn unified_zeroes_inactive_exactly() {
        let p = UnifiedPrior::default_for_dim(3);
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let mut saw_singleton = false;
        for _ in 0..50 {
            let (s, theta, a) = p.sample(&mut rng);
            assert_eq!(s.len(), theta.len());
            assert_relative_eq!(theta.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            for j in 0..3 {
                if s.contains(&j) {
                    assert!(a.get(j) > 0.0);
                } else {
                    assert_eq!(a.get(j), 0.0);
                }
            }
            if s.len() == 1 {
                saw_singleton = true;
                assert_eq!(a.values().iter().filter(|&&v| v > 0.0).count(), 1);
            }
        }
        assert!(saw_singleton);
    }

    #[test]
    fn samplers_deterministic_per_seed() {
        let p = UnifiedPrior::default_for_dim(3);
        assert_eq!(p.sample_seeded(42).2.values(), p.sample_seeded(42).2.values());
        let q = PartialMixturePrior::new(2, 100, 1.0, 1, GammaParams::default(), 1.0).unwrap();
        assert_eq!(q.sample_seeded(42).values(), q.sample_seeded(42).values());
    }

    #[test]
    fn partial_mixture_weight_hand_value() {
        let p = PartialMixturePrior::new(2, 1_000_000_000, 1.0, 1, GammaParams::default(), 1.0)
            .unwrap();
        // c_n = 1e-3, p_n = (1 - e^{-1e-3})^{1/2}
        let want = (1.0 - (-1e-3f64).exp()).sqrt();
        assert_relative_eq!(p.mixture_weight(), want, epsilon = 1e-12);
        assert!((p.mixture_weight() - 0.0316).abs() < 1e-3);
    }

    #[test]
    fn partial_mixture_weight_monotone_in_n() {
        let mut last = f64::INFINITY;
        for &n in &[10u64, 100, 1000, 10_000, 100_000] {
            let p = PartialMixturePrior::new(3, n, 0.8, 2, GammaParams::default(), 1.0).unwrap();
            let w = p.mixture_weight();
            assert!(w < last, "p_n not decreasing at n={n}");
            last = w;
        }
    }

    #[test]
    fn partial_mixture_coordinate_marginal() {
        let p = PartialMixturePrior::new(2, 50, 1.0, 1, GammaParams::default(), 1.0).unwrap();
        let pn = p.mixture_weight();
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let n = 100_000;
        let mut base_count = 0usize;
        for _ in 0..n {
            let s = p.sample(&mut rng);
            for j in 0..2 {
                if s.get(j) == 1.0 && !s.is_active(j) {
                    base_count += 1;
                }
            }
        }
        let frac = base_count as f64 / (2 * n) as f64;
        assert!((frac - (1.0 - pn)).abs() < 0.01, "base fraction {frac} vs {}", 1.0 - pn);
    }

    #[test]
    fn minimax_hand_values() {
        // d=2, alpha=(1,1): alpha0 = 1/2, both entries n^{1/4}; n=16 -> 2.
        let s = minimax_bandwidths(16, &SmoothnessSpec::Anisotropic { alpha: vec![1.0, 1.0] })
            .unwrap();
        assert_relative_eq!(s.get(0), 2.0, epsilon = 1e-12);
        assert_relative_eq!(s.get(1), 2.0, epsilon = 1e-12);

        // isotropic d=1, alpha=1, n=8: 8^{1/3} = 2.
        let s1 =
            minimax_bandwidths(8, &SmoothnessSpec::Anisotropic { alpha: vec![1.0] }).unwrap();
        assert_relative_eq!(s1.get(0), 2.0, epsilon = 1e-12);

        // subset case I={0}, alpha=1, n=8 in d=2: (2, 1).
        let s2 = minimax_bandwidths(
            8,
            &SmoothnessSpec::SubsetIsotropic { dim: 2, alpha: 1.0, active: vec![0] },
        )
        .unwrap();
        assert_relative_eq!(s2.get(0), 2.0, epsilon = 1e-12);
        assert_relative_eq!(s2.get(1), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn minimax_product_telescopes() {
        for &n in &[10u64, 100, 1000] {
            let alpha = vec![0.7, 1.5, 3.0];
            let alpha0 = 1.0 / alpha.iter().map(|a| 1.0 / a).sum::<f64>();
            let s = minimax_bandwidths(n, &SmoothnessSpec::Anisotropic { alpha }).unwrap();
            let want = (n as f64).powf(1.0 / (2.0 * alpha0 + 1.0));
            assert_relative_eq!(s.product(), want, epsilon = 1e-12);
        }
    }

    #[test]
    fn minimax_empty_active_set_is_error() {
        assert!(minimax_bandwidths(
            10,
            &SmoothnessSpec::SubsetIsotropic { dim: 2, alpha: 1.0, active: vec![] }
        )
        .is_err());
    }
}
