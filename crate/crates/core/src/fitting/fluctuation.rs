use serde::{Deserialize, Serialize};
use statrs::function::gamma::digamma;

use crate::error::{Error, Result};
use crate::model::{Family, FluctuationLaw};
use crate::stats::{mean, std_mle, trigamma};
use crate::units::db_to_linear;

const STAGE: &str = "fit_fluctuation";
const MAX_ITER: usize = 200;
const STEP_TOL: f64 = 1e-10;
/// Minimum number of residuals for a fluctuation fit.
pub const MIN_RESIDUALS: usize = 20;
/// Probability floor applied to model bin masses.
pub const KL_FLOOR: f64 = 1e-12;

/// Root-mean-square difference of two equally long sequences.
pub fn rmse(measured: &[f64], modeled: &[f64]) -> Result<f64> {
    if measured.len() != modeled.len() {
        return Err(Error::domain(format!(
            "rmse length mismatch: {} vs {}",
            measured.len(),
            modeled.len()
        )));
    }
    if measured.is_empty() {
        return Err(Error::domain("rmse of empty sequences"));
    }
    let ss: f64 = measured.iter().zip(modeled).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((ss / measured.len() as f64).sqrt())
}

/// Maximum-likelihood candidates for each family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationFit {
    pub lognormal: FluctuationLaw,
    /// Absent when the residuals are degenerate (zero spread).
    pub weibull: Option<FluctuationLaw>,
    pub gamma: Option<FluctuationLaw>,
}

impl FluctuationFit {
    pub fn candidates(&self) -> Vec<FluctuationLaw> {
        std::iter::once(self.lognormal)
            .chain(self.weibull)
            .chain(self.gamma)
            .collect()
    }
}

pub const DEGENERATE_SPREAD_DB: f64 = 1e-6;

/// Fit lognormal (on dB residuals), Weibull and gamma (on linear residuals).
pub fn fit_fluctuation(residuals_db: &[f64]) -> Result<FluctuationFit> {
    if residuals_db.len() < MIN_RESIDUALS {
        return Err(Error::fit(
            STAGE,
            format!("need at least {MIN_RESIDUALS} residuals, got {}", residuals_db.len()),
        ));
    }
    if residuals_db.iter().any(|r| !r.is_finite()) {
        return Err(Error::fit(STAGE, "non-finite residual"));
    }
    let mu = mean(residuals_db);
    let sigma = std_mle(residuals_db);
    let lognormal = FluctuationLaw::Lognormal {
        mu_db: mu,
        sigma_db: sigma,
    };
    // below this spread the linear-domain MLEs only see rounding noise
    if sigma < DEGENERATE_SPREAD_DB {
        return Ok(FluctuationFit {
            lognormal,
            weibull: None,
            gamma: None,
        });
    }
    let lin: Vec<f64> = residuals_db.iter().map(|&r| db_to_linear(r)).collect();
    Ok(FluctuationFit {
        lognormal,
        weibull: Some(fit_weibull(&lin)?),
        gamma: Some(fit_gamma(&lin)?),
    })
}

/// Weibull MLE: damped Newton on the shape profile equation.
pub fn fit_weibull(x: &[f64]) -> Result<FluctuationLaw> {
    let ln: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ln_gm = mean(&ln);
    // work with x / geometric-mean to keep x^k bounded
    let u: Vec<f64> = ln.iter().map(|l| l - ln_gm).collect();
    let sd = std_mle(&u);
    if sd <= 0.0 {
        return Err(Error::fit(STAGE, "Weibull fit needs non-constant data"));
    }
    let g = |k: f64| {
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for &l in &u {
            let w = (k * l).exp();
            s0 += w;
            s1 += w * l;
            s2 += w * l * l;
        }
        let val = s1 / s0 - 1.0 / k;
        let der = (s2 * s0 - s1 * s1) / (s0 * s0) + 1.0 / (k * k);
        (val, der, s0)
    };
    let mut k = 1.2825 / sd;
    for _ in 0..MAX_ITER {
        let (val, der, _) = g(k);
        let mut step = val / der;
        while k - step <= 0.0 {
            step /= 2.0;
        }
        k -= step;
        if !k.is_finite() {
            break;
        }
        if step.abs() < STEP_TOL * k.max(1.0) {
            let (_, _, s0) = g(k);
            let scale = (ln_gm + (s0 / u.len() as f64).ln() / k).exp();
            return Ok(FluctuationLaw::Weibull { shape: k, scale });
        }
    }
    Err(Error::Numerical(format!(
        "Weibull MLE did not converge in {MAX_ITER} iterations"
    )))
}

/// Gamma MLE: Newton on `ln a - ψ(a) = ln(mean x) - mean(ln x)`.
pub fn fit_gamma(x: &[f64]) -> Result<FluctuationLaw> {
    let m = mean(x);
    let s = m.ln() - mean(&x.iter().map(|v| v.ln()).collect::<Vec<_>>());
    if !(s > 0.0) {
        return Err(Error::fit(STAGE, "gamma fit needs non-constant data"));
    }
    let mut a = (3.0 - s + ((s - 3.0).powi(2) + 24.0 * s).sqrt()) / (12.0 * s);
    for _ in 0..MAX_ITER {
        let f = a.ln() - digamma(a) - s;
        let d = 1.0 / a - trigamma(a);
        let mut step = f / d;
        while a - step <= 0.0 {
            step /= 2.0;
        }
        a -= step;
        if step.abs() < STEP_TOL * a.max(1.0) {
            return Ok(FluctuationLaw::Gamma { shape: a, scale: m / a });
        }
    }
    Err(Error::Numerical(format!(
        "gamma MLE did not converge in {MAX_ITER} iterations"
    )))
}

/// Histogram the dB residuals over their range and return the empirical
/// bin masses together with the model masses for `law`.
pub fn binned_masses(residuals_db: &[f64], law: &FluctuationLaw, bins: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if bins < 2 {
        return Err(Error::Config(format!("KL bin count must be >= 2, got {bins}")));
    }
    if residuals_db.is_empty() {
        return Err(Error::domain("KL divergence of an empty sample"));
    }
    let mut lo = residuals_db.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = residuals_db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-9 {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut p = vec![0.0; bins];
    for &r in residuals_db {
        let i = (((r - lo) / width) as usize).min(bins - 1);
        p[i] += 1.0;
    }
    let n = residuals_db.len() as f64;
    p.iter_mut().for_each(|v| *v /= n);
    let q = (0..bins)
        .map(|i| {
            let a = lo + i as f64 * width;
            let b = if i + 1 == bins { hi } else { a + width };
            (law.cdf_db(b) - law.cdf_db(a)).max(0.0)
        })
        .collect();
    Ok((p, q))
}

/// `Σ p ln(p/q)` with empty empirical bins skipped and `q` floored.
pub fn kl_from_masses(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, q)| p * (p / q.max(KL_FLOOR)).ln())
        .sum()
}

pub fn kl_divergence(residuals_db: &[f64], law: &FluctuationLaw, bins: usize) -> Result<f64> {
    let (p, q) = binned_masses(residuals_db, law, bins)?;
    Ok(kl_from_masses(&p, &q))
}

/// Choose the family with the smallest KL divergence; lognormal wins ties
/// within `preference` nats.
pub fn select_family(kl: &[(Family, f64)], preference: f64) -> Family {
    let best = kl
        .iter()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|x| x.0)
        .unwrap_or(Family::Lognormal);
    let best_kl = kl.iter().find(|x| x.0 == best).map_or(f64::INFINITY, |x| x.1);
    match kl.iter().find(|x| x.0 == Family::Lognormal) {
        Some(&(_, ln)) if ln <= best_kl + preference => Family::Lognormal,
        _ => best,
    }
}
