//! Small statistical helpers: least-squares slopes, binomial intervals,
//! bootstrap resampling, and two distribution-comparison statistics used by
//! the verification suites.

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use statrs::distribution::ContinuousCDF;

/// Ordinary least squares of `y` on `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (residual-based; NaN with < 3 points).
    pub slope_se: f64,
}

pub fn ols_line(x: &[f64], y: &[f64]) -> LineFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need at least two points for a line");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_se = if x.len() >= 3 {
        let ss_res: f64 = x
            .iter()
            .zip(y)
            .map(|(u, v)| {
                let r = v - (intercept + slope * u);
                r * r
            })
            .sum();
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    LineFit { slope, intercept, slope_se }
}

/// Wilson score interval for a binomial proportion at the given z value.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(|u, v| u.partial_cmp(v).unwrap());
    xb.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        if xa[i] <= xb[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// One-sample KS distance against a CDF.
pub fn ks_against_cdf<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max((f - (i + 1) as f64 / n).abs());
    }
    d
}

/// Chi-square goodness-of-fit p-value of `observed` counts against expected
/// probabilities (renormalized to the total count).
pub fn chi_square_pvalue(observed: &[u64], expected_probs: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected_probs.len());
    let total: u64 = observed.iter().sum();
    let psum: f64 = expected_probs.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0i64;
    for (&o, &p) in observed.iter().zip(expected_probs) {
        let e = total as f64 * p / psum;
        if e <= 0.0 {
            continue;
        }
        stat += (o as f64 - e) * (o as f64 - e) / e;
        cells += 1;
    }
    let dof = (cells - 1).max(1) as f64;
    let chi = statrs::distribution::ChiSquared::new(dof).expect("dof >= 1");
    1.0 - chi.cdf(stat)
}

/// Percentile bootstrap confidence interval for a statistic of one sample.
pub fn bootstrap_ci<F: Fn(&[f64]) -> f64>(
    data: &[f64],
    stat: F,
    level: f64,
    replicates: usize,
    seed: u64,
) -> (f64, f64) {
    assert!(!data.is_empty());
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut stats: Vec<f64> = (0..replicates)
        .map(|_| {
            let resample: Vec<f64> =
                (0..data.len()).map(|_| data[rng.gen_range(0..data.len())]).collect();
            stat(&resample)
        })
        .collect();
    stats.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let lo_q = (1.0 - level) / 2.0;
    (quantile_sorted(&stats, lo_q), quantile_sorted(&stats, 1.0 - lo_q))
}

/// Linear-interpolation quantile of a sorted slice.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Quantile of an unsorted slice.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    quantile_sorted(&v, q)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ols_recovers_exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 1.0).collect();
        let fit = ols_line(&x, &y);
        assert_relative_eq!(fit.slope, 2.5, epsilon = 1e-12);
        assert_relative_eq!(fit.intercept, -1.0, epsilon = 1e-12);
        assert_relative_eq!(fit.slope_se, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn wilson_interval_brackets_proportion() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && hi > 0.5);
        assert!(hi - lo < 0.25);
        let (lo0, _) = wilson_interval(0, 100, 1.96);
        assert_eq!(lo0, 0.0);
    }

    #[test]
    fn ks_detects_shift() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let b: Vec<f64> = a.iter().map(|v| v + 0.5).collect();
        assert!(ks_two_sample(&a, &a) < 1e-9);
        assert!(ks_two_sample(&a, &b) > 0.45);
    }

    #[test]
    fn chi_square_uniform_counts() {
        let p = chi_square_pvalue(&[100, 101, 99, 100], &[0.25; 4]);
        assert!(p > 0.9, "p = {p}");
        let p_bad = chi_square_pvalue(&[400, 0, 0, 0], &[0.25; 4]);
        assert!(p_bad < 1e-6);
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_relative_eq!(quantile(&v, 0.5), 3.0);
        assert_relative_eq!(quantile(&v, 0.25), 2.0);
        assert_relative_eq!(quantile(&v, 0.0), 1.0);
    }

    #[test]
    fn bootstrap_ci_contains_mean() {
        let data: Vec<f64> = (0..200).map(|i| (i % 10) as f64).collect();
        let (lo, hi) = bootstrap_ci(&data, mean, 0.95, 500, 3);
        assert!(lo < 4.5 && hi > 4.5, "({lo}, {hi})");
    }
}
