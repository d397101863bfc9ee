//! Bandwidth-block state and Metropolis moves shared by the regression and
//! density samplers.
//!
//! The state mirrors the prior family: per-coordinate scales with simplex
//! weights for the anisotropic and unified families, one shared scale for the
//! subset/mixture/single families. Moves:
//!
//! * random walk on the log of each active scale (or of the shared scale),
//! * a logistic-normal walk of the simplex weights (prior-only acceptance:
//!   the likelihood does not involve `theta`),
//! * add/remove/swap proposals for the active subset, with the new
//!   coordinate's weight stick-broken off the current simplex and its scale
//!   proposed from the conditional prior so both cancel in the ratio,
//! * a reflecting random walk for the noise scale (owned by the caller).

use crate::error::Result;
use crate::priors::{log_dirichlet, power_gamma_log_pdf, power_gamma_sample, BandwidthPrior, BaseDistribution};
use crate::scale::ScaleVector;
use rand::prelude::*;
use rand_distr::{Beta, StandardNormal};
#[derive(Debug, Clone)]
pub(crate) enum BandwidthState {
    Anisotropic {
        theta: Vec<f64>,
        scales: Vec<f64>,
    },
    DimensionReduction {
        subset: Vec<usize>,
        shared: f64,
        base: f64,
    },
    Unified {
        subset: Vec<usize>,
        /// Simplex weights aligned with the ascending subset.
        theta: Vec<f64>,
        /// Scales aligned with the ascending subset.
        scales: Vec<f64>,
    },
    PartialMixture {
        on: Vec<bool>,
        shared: f64,
    },
    SingleBandwidth {
        shared: f64,
    },
    Deterministic,
}

impl BandwidthState {
    pub(crate) fn init<R: Rng>(prior: &BandwidthPrior, rng: &mut R) -> Self {
        match prior {
            BandwidthPrior::Anisotropic(p) => {
                let (theta, a) = p.sample(rng);
                BandwidthState::Anisotropic { theta, scales: a.values().to_vec() }
            }
            BandwidthPrior::DimensionReduction(p) => {
                let (subset, a) = p.sample(rng);
                let shared = a.get(subset[0]);
                let base = (0..p.dim)
                    .find(|j| !subset.contains(j))
                    .map(|j| a.get(j))
                    .unwrap_or(match p.base {
                        BaseDistribution::Point(v) => v,
                        BaseDistribution::Uniform(lo, hi) => 0.5 * (lo + hi),
                    });
                BandwidthState::DimensionReduction { subset, shared, base }
            }
            BandwidthPrior::Unified(p) => {
                let (subset, theta, a) = p.sample(rng);
                let scales = subset.iter().map(|&j| a.get(j)).collect();
                BandwidthState::Unified { subset, theta, scales }
            }
            BandwidthPrior::PartialMixture(p) => {
                let (on, a) = p.sample_with_indicators(rng);
                let shared = on
                    .iter()
                    .position(|&b| b)
                    .map(|j| a.get(j))
                    .unwrap_or_else(|| power_gamma_sample(&p.gamma, p.dim as f64, rng));
                BandwidthState::PartialMixture { on, shared }
            }
            BandwidthPrior::SingleBandwidth(p) => {
                BandwidthState::SingleBandwidth { shared: p.sample(rng).get(0) }
            }
            BandwidthPrior::Deterministic(_) => BandwidthState::Deterministic,
        }
    }

    /// Materialize the scale vector this state induces.
    pub(crate) fn scale_vector(&self, prior: &BandwidthPrior) -> ScaleVector {
        let d = prior.dim();
        match (self, prior) {
            (BandwidthState::Anisotropic { scales, .. }, _) => {
                ScaleVector::new(scales.clone()).expect("positive scales")
            }
            (BandwidthState::DimensionReduction { subset, shared, base }, _) => {
                let mut v = vec![*base; d];
                let mut act = vec![false; d];
                for &j in subset {
                    v[j] = *shared;
                    act[j] = true;
                }
                ScaleVector::with_active(v, act).expect("positive scales")
            }
            (BandwidthState::Unified { subset, scales, .. }, _) => {
                let mut v = vec![0.0; d];
                let mut act = vec![false; d];
                for (pos, &j) in subset.iter().enumerate() {
                    v[j] = scales[pos];
                    act[j] = true;
                }
                ScaleVector::with_active(v, act).expect("non-negative scales")
            }
            (BandwidthState::PartialMixture { on, shared }, BandwidthPrior::PartialMixture(p)) => {
                let v: Vec<f64> =
                    on.iter().map(|&b| if b { *shared } else { p.base_value }).collect();
                ScaleVector::with_active(v, on.clone()).expect("positive scales")
            }
            (BandwidthState::SingleBandwidth { shared }, _) => {
                ScaleVector::constant(d, *shared).expect("positive scale")
            }
            (BandwidthState::Deterministic, BandwidthPrior::Deterministic(s)) => s.clone(),
            _ => unreachable!("state/prior family mismatch"),
        }
    }

    /// Simplex weights padded to the ambient dimension (zeros where a
    /// coordinate carries no weight).
    pub(crate) fn theta_padded(&self, prior: &BandwidthPrior) -> Vec<f64> {
        let d = prior.dim();
        match self {
            BandwidthState::Anisotropic { theta, .. } => theta.clone(),
            BandwidthState::Unified { subset, theta, .. } => {
                let mut out = vec![0.0; d];
                for (pos, &j) in subset.iter().enumerate() {
                    out[j] = theta[pos];
                }
                out
            }
            _ => vec![0.0; d],
        }
    }

    /// Full prior log-density of the state: continuous conditionals plus the
    /// discrete mass of the subset/indicator pattern.
    pub(crate) fn log_prior(&self, prior: &BandwidthPrior) -> f64 {
        match (self, prior) {
            (BandwidthState::Anisotropic { theta, scales }, BandwidthPrior::Anisotropic(p)) => {
                let mut s = log_dirichlet(&p.beta, theta);
                for (t, a) in theta.iter().zip(scales) {
                    s += power_gamma_log_pdf(&p.gamma, 1.0 / t, *a);
                }
                s
            }
            (
                BandwidthState::DimensionReduction { subset, shared, base },
                BandwidthPrior::DimensionReduction(p),
            ) => {
                p.log_subset_mass(subset.len())
                    + p.log_shared_scale_pdf(subset.len(), *shared)
                    + p.base.log_pdf(*base)
            }
            (BandwidthState::Unified { subset, theta, scales }, BandwidthPrior::Unified(p)) => {
                p.log_subset_mass(subset.len())
                    + p.log_density_given_subset(subset, theta, scales)
            }
            (BandwidthState::PartialMixture { on, shared }, BandwidthPrior::PartialMixture(p)) => {
                let k = on.iter().filter(|&&b| b).count();
                p.log_indicator_mass(k) + p.log_shared_scale_pdf(*shared)
            }
            (BandwidthState::SingleBandwidth { shared }, BandwidthPrior::SingleBandwidth(p)) => {
                p.log_shared_scale_pdf(*shared)
            }
            (BandwidthState::Deterministic, BandwidthPrior::Deterministic(_)) => 0.0,
            _ => unreachable!("state/prior family mismatch"),
        }
    }
}

/// Per-move-type attempt/acceptance counters.
#[derive(Debug, Clone, Default)]
pub(crate) struct MoveStats {
    pub attempts: u64,
    pub accepts: u64,
}

impl MoveStats {
    pub(crate) fn rate(&self) -> f64 {
        if self.attempts == 0 {
            f64::NAN
        } else {
            self.accepts as f64 / self.attempts as f64
        }
    }
}

/// Shared driver for the bandwidth blocks of both samplers. The likelihood
/// enters only through a closure evaluated at candidate scale vectors.
pub(crate) struct BandwidthMoves<'p> {
    pub prior: &'p BandwidthPrior,
    pub state: BandwidthState,
    pub scale_step: f64,
    pub theta_step: f64,
    pub scale_stats: MoveStats,
    pub theta_stats: MoveStats,
    pub subset_stats: MoveStats,
}

impl<'p> BandwidthMoves<'p> {
    pub(crate) fn new<R: Rng>(prior: &'p BandwidthPrior, rng: &mut R) -> Self {
        BandwidthMoves {
            prior,
            state: BandwidthState::init(prior, rng),
            scale_step: 0.4,
            theta_step: 0.4,
            scale_stats: MoveStats::default(),
            theta_stats: MoveStats::default(),
            subset_stats: MoveStats::default(),
        }
    }

    pub(crate) fn scale_vector(&self) -> ScaleVector {
        self.state.scale_vector(self.prior)
    }

    /// One full sweep of bandwidth moves. `loglik` is evaluated at proposed
    /// scale vectors; `current_ll` tracks the likelihood of the current
    /// state and is updated on every acceptance.
    pub(crate) fn sweep<R, F>(&mut self, rng: &mut R, current_ll: &mut f64, loglik: &mut F) -> Result<()>
    where
        R: Rng,
        F: FnMut(&ScaleVector) -> Result<f64>,
    {
        self.scale_moves(rng, current_ll, loglik)?;
        self.theta_move(rng);
        self.subset_move(rng, current_ll, loglik)?;
        Ok(())
    }

    fn accept(rng: &mut impl Rng, log_ratio: f64) -> bool {
        log_ratio >= 0.0 || rng.gen::<f64>().ln() < log_ratio
    }

    fn scale_moves<R, F>(&mut self, rng: &mut R, current_ll: &mut f64, loglik: &mut F) -> Result<()>
    where
        R: Rng,
        F: FnMut(&ScaleVector) -> Result<f64>,
    {
        let step = self.scale_step;
        // Collect per-coordinate proposals to avoid borrowing headaches.
        let coords: Vec<usize> = match &self.state {
            BandwidthState::Anisotropic { scales, .. } => (0..scales.len()).collect(),
            BandwidthState::Unified { scales, .. } => (0..scales.len()).collect(),
            BandwidthState::DimensionReduction { .. }
            | BandwidthState::PartialMixture { .. }
            | BandwidthState::SingleBandwidth { .. } => vec![0],
            BandwidthState::Deterministic => vec![],
        };
        for idx in coords {
            let old_prior = self.state.log_prior(self.prior);
            let old_value = self.scale_value(idx);
            let noise: f64 = rng.sample(StandardNormal);
            let new_value = old_value * (step * noise).exp();
            self.set_scale_value(idx, new_value);
            let new_prior = self.state.log_prior(self.prior);
            let candidate = self.state.scale_vector(self.prior);
            let new_ll = loglik(&candidate)?;
            // Log-scale random walk: the proposal is symmetric in log a, so
            // the density ratio in a-space carries a Jacobian a'/a.
            let log_ratio = new_ll - *current_ll + new_prior - old_prior
                + (new_value.ln() - old_value.ln());
            self.scale_stats.attempts += 1;
            if Self::accept(rng, log_ratio) {
                self.scale_stats.accepts += 1;
                *current_ll = new_ll;
            } else {
                self.set_scale_value(idx, old_value);
            }
        }
        Ok(())
    }

    fn scale_value(&self, idx: usize) -> f64 {
        match &self.state {
            BandwidthState::Anisotropic { scales, .. } => scales[idx],
            BandwidthState::Unified { scales, .. } => scales[idx],
            BandwidthState::DimensionReduction { shared, .. } => *shared,
            BandwidthState::PartialMixture { shared, .. } => *shared,
            BandwidthState::SingleBandwidth { shared } => *shared,
            BandwidthState::Deterministic => unreachable!("no scale moves"),
        }
    }

    fn set_scale_value(&mut self, idx: usize, value: f64) {
        match &mut self.state {
            BandwidthState::Anisotropic { scales, .. } => scales[idx] = value,
            BandwidthState::Unified { scales, .. } => scales[idx] = value,
            BandwidthState::DimensionReduction { shared, .. } => *shared = value,
            BandwidthState::PartialMixture { shared, .. } => *shared = value,
            BandwidthState::SingleBandwidth { shared } => *shared = value,
            BandwidthState::Deterministic => unreachable!("no scale moves"),
        }
    }

    /// Logistic-normal walk on the simplex block. The likelihood does not
    /// depend on the weights, so acceptance involves only the prior and the
    /// transform Jacobian (the product of the weights).
    fn theta_move<R: Rng>(&mut self, rng: &mut R) {
        let step = self.theta_step;
        let theta = match &self.state {
            BandwidthState::Anisotropic { theta, .. } if theta.len() >= 2 => theta.clone(),
            BandwidthState::Unified { theta, .. } if theta.len() >= 2 => theta.clone(),
            _ => return,
        };
        let k = theta.len();
        let mut x: Vec<f64> = (0..k - 1).map(|i| (theta[i] / theta[k - 1]).ln()).collect();
        for xi in &mut x {
            let noise: f64 = rng.sample(StandardNormal);
            *xi += step * noise;
        }
        let mut denom = 1.0;
        for &xi in &x {
            denom += xi.exp();
        }
        let mut proposed = vec![0.0; k];
        for i in 0..k - 1 {
            proposed[i] = x[i].exp() / denom;
        }
        proposed[k - 1] = 1.0 / denom;
        if proposed.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
            self.theta_stats.attempts += 1;
            return; // underflowed to the boundary; reject
        }

        let old_prior = self.state.log_prior(self.prior);
        let old_jac: f64 = theta.iter().map(|t| t.ln()).sum();
        let old_theta = theta;
        self.set_theta(&proposed);
        let new_prior = self.state.log_prior(self.prior);
        let new_jac: f64 = proposed.iter().map(|t| t.ln()).sum();
        let log_ratio = new_prior - old_prior + new_jac - old_jac;
        self.theta_stats.attempts += 1;
        if Self::accept(rng, log_ratio) {
            self.theta_stats.accepts += 1;
        } else {
            self.set_theta(&old_theta);
        }
    }

    fn set_theta(&mut self, value: &[f64]) {
        match &mut self.state {
            BandwidthState::Anisotropic { theta, .. } => theta.copy_from_slice(value),
            BandwidthState::Unified { theta, .. } => theta.copy_from_slice(value),
            _ => unreachable!("no theta block"),
        }
    }

    fn subset_move<R, F>(&mut self, rng: &mut R, current_ll: &mut f64, loglik: &mut F) -> Result<()>
    where
        R: Rng,
        F: FnMut(&ScaleVector) -> Result<f64>,
    {
        match self.prior {
            BandwidthPrior::Unified(_) => self.unified_subset_move(rng, current_ll, loglik),
            BandwidthPrior::DimensionReduction(_) => {
                self.dimred_subset_move(rng, current_ll, loglik)
            }
            BandwidthPrior::PartialMixture(_) => self.mixture_flip_move(rng, current_ll, loglik),
            _ => Ok(()),
        }
    }

    fn unified_subset_move<R, F>(
        &mut self,
        rng: &mut R,
        current_ll: &mut f64,
        loglik: &mut F,
    ) -> Result<()>
    where
        R: Rng,
        F: FnMut(&ScaleVector) -> Result<f64>,
    {
        let p = match self.prior {
            BandwidthPrior::Unified(p) => p,
            _ => unreachable!(),
        };
        let d = p.dim;
        let (subset, theta, scales) = match &self.state {
            BandwidthState::Unified { subset, theta, scales } => {
                (subset.clone(), theta.clone(), scales.clone())
            }
            _ => unreachable!(),
        };
        let m = subset.len();
        let u: f64 = rng.gen();
        self.subset_stats.attempts += 1;

        let old_cont = p.log_density_given_subset(&subset, &theta, &scales);
        let old_mass = p.log_subset_mass(m);
        let old_ll = *current_ll;

        if u < 0.3 {
            // add a coordinate
            if m == d {
                return Ok(()); // impossible; counts as a rejected attempt
            }
            let complement: Vec<usize> = (0..d).filter(|j| !subset.contains(j)).collect();
            let k = complement[rng.gen_range(0..complement.len())];
            let v = if m == 1 {
                rng.gen::<f64>() // Beta(1,1)
            } else {
                Beta::new(1.0, m as f64).expect("valid beta").sample(rng)
            };
            if !(v > 0.0 && v < 1.0) {
                return Ok(());
            }
            let mut new_subset = subset.clone();
            let pos = new_subset.binary_search(&k).unwrap_err();
            new_subset.insert(pos, k);
            let mut new_theta: Vec<f64> = theta.iter().map(|t| t * (1.0 - v)).collect();
            let mut new_scales = scales.clone();
            let a_new = power_gamma_sample(&p.gamma, 1.0 / v, rng);
            new_theta.insert(pos, v);
            new_scales.insert(pos, a_new);

            let candidate = BandwidthState::Unified {
                subset: new_subset.clone(),
                theta: new_theta.clone(),
                scales: new_scales.clone(),
            };
            let cand_scale = candidate.scale_vector(self.prior);
            let new_ll = loglik(&cand_scale)?;
            let new_cont = p.log_density_given_subset(&new_subset, &new_theta, &new_scales);
            let new_mass = p.log_subset_mass(m + 1);
            // The inserted coordinate's conditional prior cancels against its
            // proposal density, and the stick-break Beta(1,m) density cancels
            // the simplex-contraction Jacobian up to 1/m.
            let extra = power_gamma_log_pdf(&p.gamma, 1.0 / v, a_new);
            let log_ratio = (new_ll - old_ll) + (new_mass - old_mass) + (new_cont - old_cont)
                - extra
                + (complement.len() as f64).ln()
                - ((m + 1) as f64).ln()
                - (m as f64).ln();
            if Self::accept(rng, log_ratio) {
                self.subset_stats.accepts += 1;
                self.state = candidate;
                *current_ll = new_ll;
            }
        } else if u < 0.6 {
            // remove a coordinate
            if m <= 1 {
                return Ok(());
            }
            let pos = rng.gen_range(0..m);
            let v = theta[pos];
            let a_removed = scales[pos];
            let mut new_subset = subset.clone();
            new_subset.remove(pos);
            let mut new_theta = theta.clone();
            new_theta.remove(pos);
            for t in &mut new_theta {
                *t /= 1.0 - v;
            }
            let mut new_scales = scales.clone();
            new_scales.remove(pos);

            let candidate = BandwidthState::Unified {
                subset: new_subset.clone(),
                theta: new_theta.clone(),
                scales: new_scales.clone(),
            };
            let cand_scale = candidate.scale_vector(self.prior);
            let new_ll = loglik(&cand_scale)?;
            let new_cont = p.log_density_given_subset(&new_subset, &new_theta, &new_scales);
            let new_mass = p.log_subset_mass(m - 1);
            let extra = power_gamma_log_pdf(&p.gamma, 1.0 / v, a_removed);
            // Mirror of the add ratio from a set of size m-1.
            let log_ratio = (new_ll - old_ll) + (new_mass - old_mass) + (new_cont - old_cont)
                + extra
                - ((d - m + 1) as f64).ln()
                + (m as f64).ln()
                + ((m - 1) as f64).ln();
            if Self::accept(rng, log_ratio) {
                self.subset_stats.accepts += 1;
                self.state = candidate;
                *current_ll = new_ll;
            }
        } else {
            // swap: relabel one active coordinate, keeping its weight/scale
            if m == 0 || m == d {
                return Ok(());
            }
            let complement: Vec<usize> = (0..d).filter(|j| !subset.contains(j)).collect();
            let pos = rng.gen_range(0..m);
            let l = complement[rng.gen_range(0..complement.len())];
            let mut entries: Vec<(usize, f64, f64)> = subset
                .iter()
                .zip(theta.iter().zip(&scales))
                .map(|(&j, (&t, &a))| (j, t, a))
                .collect();
            entries[pos].0 = l;
            entries.sort_by_key(|e| e.0);
            let new_subset: Vec<usize> = entries.iter().map(|e| e.0).collect();
            let new_theta: Vec<f64> = entries.iter().map(|e| e.1).collect();
            let new_scales: Vec<f64> = entries.iter().map(|e| e.2).collect();

            let candidate = BandwidthState::Unified {
                subset: new_subset.clone(),
                theta: new_theta.clone(),
                scales: new_scales.clone(),
            };
            let cand_scale = candidate.scale_vector(self.prior);
            let new_ll = loglik(&cand_scale)?;
            let new_cont = p.log_density_given_subset(&new_subset, &new_theta, &new_scales);
            let log_ratio = (new_ll - old_ll) + (new_cont - old_cont);
            if Self::accept(rng, log_ratio) {
                self.subset_stats.accepts += 1;
                self.state = candidate;
                *current_ll = new_ll;
            }
        }
        Ok(())
    }

    fn dimred_subset_move<R, F>(
        &mut self,
        rng: &mut R,
        current_ll: &mut f64,
        loglik: &mut F,
    ) -> Result<()>
    where
        R: Rng,
        F: FnMut(&ScaleVector) -> Result<f64>,
    {
        let p = match self.prior {
            BandwidthPrior::DimensionReduction(p) => p,
            _ => unreachable!(),
        };
        let d = p.dim;
        let (subset, shared, base) = match &self.state {
            BandwidthState::DimensionReduction { subset, shared, base } => {
                (subset.clone(), *shared, *base)
            }
            _ => unreachable!(),
        };
        let m = subset.len();
        let u: f64 = rng.gen();
        self.subset_stats.attempts += 1;
        let old_ll = *current_ll;

        let mut try_candidate = |new_subset: Vec<usize>,
                                 extra_log_ratio: f64,
                                 rng: &mut R,
                                 current_ll: &mut f64,
                                 this: &mut Self,
                                 loglik: &mut F|
         -> Result<()> {
            let candidate =
                BandwidthState::DimensionReduction { subset: new_subset, shared, base };
            let cand_scale = candidate.scale_vector(this.prior);
            let new_ll = loglik(&cand_scale)?;
            let log_ratio = new_ll - old_ll + extra_log_ratio;
            if Self::accept(rng, log_ratio) {
                this.subset_stats.accepts += 1;
                this.state = candidate;
                *current_ll = new_ll;
            }
            Ok(())
        };

        if u < 0.3 {
            if m == d {
                return Ok(());
            }
            let complement: Vec<usize> = (0..d).filter(|j| !subset.contains(j)).collect();
            let k = complement[rng.gen_range(0..complement.len())];
            let mut new_subset = subset.clone();
            let pos = new_subset.binary_search(&k).unwrap_err();
            new_subset.insert(pos, k);
            let extra = p.log_subset_mass(m + 1) - p.log_subset_mass(m)
                + p.log_shared_scale_pdf(m + 1, shared)
                - p.log_shared_scale_pdf(m, shared)
                + (complement.len() as f64).ln()
                - ((m + 1) as f64).ln();
            try_candidate(new_subset, extra, rng, current_ll, self, loglik)?;
        } else if u < 0.6 {
            if m <= 1 {
                return Ok(());
            }
            let pos = rng.gen_range(0..m);
            let mut new_subset = subset.clone();
            new_subset.remove(pos);
            let extra = p.log_subset_mass(m - 1) - p.log_subset_mass(m)
                + p.log_shared_scale_pdf(m - 1, shared)
                - p.log_shared_scale_pdf(m, shared)
                + (m as f64).ln()
                - ((d - m + 1) as f64).ln();
            try_candidate(new_subset, extra, rng, current_ll, self, loglik)?;
        } else {
            if m == d {
                return Ok(());
            }
            let complement: Vec<usize> = (0..d).filter(|j| !subset.contains(j)).collect();
            let pos = rng.gen_range(0..m);
            let l = complement[rng.gen_range(0..complement.len())];
            let mut new_subset = subset.clone();
            new_subset.remove(pos);
            let ins = new_subset.binary_search(&l).unwrap_err();
            new_subset.insert(ins, l);
            try_candidate(new_subset, 0.0, rng, current_ll, self, loglik)?;
        }
        Ok(())
    }

    fn mixture_flip_move<R, F>(
        &mut self,
        rng: &mut R,
        current_ll: &mut f64,
        loglik: &mut F,
    ) -> Result<()>
    where
        R: Rng,
        F: FnMut(&ScaleVector) -> Result<f64>,
    {
        let p = match self.prior {
            BandwidthPrior::PartialMixture(p) => p,
            _ => unreachable!(),
        };
        let d = p.dim;
        let (on, shared) = match &self.state {
            BandwidthState::PartialMixture { on, shared } => (on.clone(), *shared),
            _ => unreachable!(),
        };
        let m = on.iter().filter(|&&b| b).count();
        let pn = p.mixture_weight();
        let u: f64 = rng.gen();
        self.subset_stats.attempts += 1;
        let old_ll = *current_ll;

        let mut flip_to = |indices: Vec<usize>,
                           extra: f64,
                           rng: &mut R,
                           current_ll: &mut f64,
                           this: &mut Self,
                           loglik: &mut F|
         -> Result<()> {
            let mut new_on = on.clone();
            for &i in &indices {
                new_on[i] = !new_on[i];
            }
            let candidate = BandwidthState::PartialMixture { on: new_on, shared };
            let cand_scale = candidate.scale_vector(this.prior);
            let new_ll = loglik(&cand_scale)?;
            if Self::accept(rng, new_ll - old_ll + extra) {
                this.subset_stats.accepts += 1;
                this.state = candidate;
                *current_ll = new_ll;
            }
            Ok(())
        };

        if u < 0.3 {
            // switch one base coordinate onto the shared scale
            if m == d {
                return Ok(());
            }
            let off: Vec<usize> = (0..d).filter(|&j| !on[j]).collect();
            let k = off[rng.gen_range(0..off.len())];
            let extra = pn.ln() - (1.0 - pn).ln() + (off.len() as f64).ln()
                - ((m + 1) as f64).ln();
            flip_to(vec![k], extra, rng, current_ll, self, loglik)?;
        } else if u < 0.6 {
            // switch one shared coordinate back to the base value
            if m == 0 {
                return Ok(());
            }
            let on_idx: Vec<usize> = (0..d).filter(|&j| on[j]).collect();
            let k = on_idx[rng.gen_range(0..on_idx.len())];
            let extra = (1.0 - pn).ln() - pn.ln() + (m as f64).ln()
                - ((d - m + 1) as f64).ln();
            flip_to(vec![k], extra, rng, current_ll, self, loglik)?;
        } else {
            // exchange one shared and one base coordinate
            if m == 0 || m == d {
                return Ok(());
            }
            let on_idx: Vec<usize> = (0..d).filter(|&j| on[j]).collect();
            let off: Vec<usize> = (0..d).filter(|&j| !on[j]).collect();
            let k = on_idx[rng.gen_range(0..on_idx.len())];
            let l = off[rng.gen_range(0..off.len())];
            flip_to(vec![k, l], 0.0, rng, current_ll, self, loglik)?;
        }
        Ok(())
    }

    pub(crate) fn adapt(&mut self, window_scale_rate: f64, window_theta_rate: f64) {
        const TARGET: f64 = 0.25;
        if window_scale_rate.is_finite() {
            self.scale_step =
                (self.scale_step * ((window_scale_rate - TARGET) * 0.8).exp()).clamp(1e-3, 10.0);
        }
        if window_theta_rate.is_finite() {
            self.theta_step =
                (self.theta_step * ((window_theta_rate - TARGET) * 0.8).exp()).clamp(1e-3, 10.0);
        }
    }
}
