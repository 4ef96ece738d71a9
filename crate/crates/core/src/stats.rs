//! Small statistics helpers shared by the fitting and simulation modules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population standard deviation (divides by `n`), which is the MLE.
pub fn std_mle(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Empirical CDF: sorted values paired with `i/n`.
pub fn empirical_cdf(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::domain("empirical CDF of an empty sample"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    Ok(v.into_iter()
        .enumerate()
        .map(|(i, x)| (x, (i + 1) as f64 / n))
        .collect())
}

/// Linear-interpolated quantile of a sample, `q` in `[0, 1]`.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile_sorted(&v, q)
}

pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let t = pos - lo as f64;
    sorted[lo] + t * (sorted[hi] - sorted[lo])
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Summary of one metric across Monte Carlo drops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub p10: f64,
    pub p90: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Summary {
            count: v.len(),
            mean: mean(&v),
            median: quantile_sorted(&v, 0.5),
            p10: quantile_sorted(&v, 0.1),
            p90: quantile_sorted(&v, 0.9),
            min: v.first().copied().unwrap_or(f64::NAN),
            max: v.last().copied().unwrap_or(f64::NAN),
        }
    }
}

/// One-sample Kolmogorov–Smirnov statistic `sup |F_n - F|`.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value `c(α)/√n` for α ∈ {0.1, 0.05, 0.01, 0.001}.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    c / (n as f64).sqrt()
}

/// Trigamma function ψ'(x) for x > 0 (recurrence plus asymptotic series).
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 12.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/x + 1/(2x²) + 1/(6x³) - 1/(30x⁵) + 1/(42x⁷) - 1/(30x⁹)
    acc + inv + 0.5 * inv2 + inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ecdf_examples() {
        assert_eq!(empirical_cdf(&[5.0]).unwrap(), vec![(5.0, 1.0)]);
        let c = empirical_cdf(&[3.0, 1.0, 4.0, 2.0]).unwrap();
        let p: Vec<f64> = c.iter().map(|x| x.1).collect();
        assert_eq!(p, vec![0.25, 0.5, 0.75, 1.0]);
        assert_eq!(c[0].0, 1.0);
        assert!(empirical_cdf(&[]).is_err());
    }

    #[test]
    fn ecdf_duplicated_sample_matches() {
        let xs = [0.3, -1.0, 2.5, 0.3, 7.0];
        let doubled: Vec<f64> = xs.iter().chain(xs.iter()).copied().collect();
        let a = empirical_cdf(&xs).unwrap();
        let b = empirical_cdf(&doubled).unwrap();
        // the step function at every distinct value coincides
        for &(x, _) in &a {
            let fa = a.iter().filter(|p| p.0 <= x).map(|p| p.1).fold(0.0, f64::max);
            let fb = b.iter().filter(|p| p.0 <= x).map(|p| p.1).fold(0.0, f64::max);
            assert!((fa - fb).abs() < 1e-15);
        }
    }

    #[test]
    fn trigamma_known_values() {
        // ψ'(1) = π²/6, ψ'(1/2) = π²/2
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((trigamma(1.0) - pi2 / 6.0).abs() < 1e-12);
        assert!((trigamma(0.5) - pi2 / 2.0).abs() < 1e-11);
        // recurrence ψ'(x+1) = ψ'(x) - 1/x²
        for &x in &[0.3, 2.7, 11.0, 40.0] {
            assert!((trigamma(x + 1.0) - (trigamma(x) - 1.0 / (x * x))).abs() < 1e-12);
        }
    }

    #[test]
    fn quantiles() {
        let v = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(median(&v), 2.5);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        let s = Summary::of(&v);
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.count, 4);
    }

    #[test]
    fn ks_critical_value() {
        // c(0.01) ≈ 1.6276
        assert!((ks_critical(1, 0.01) - 1.6276).abs() < 1e-3);
    }

    proptest::proptest! {
        #[test]
        fn ecdf_monotone(xs in proptest::collection::vec(-1e6f64..1e6, 1..200)) {
            let c = empirical_cdf(&xs).unwrap();
            for w in c.windows(2) {
                proptest::prop_assert!(w[0].0 <= w[1].0);
                proptest::prop_assert!(w[0].1 < w[1].1);
            }
            proptest::prop_assert_eq!(c.last().unwrap().1, 1.0);
        }
    }
}
