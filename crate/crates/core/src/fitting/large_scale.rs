use crate::error::{Error, Result};
use crate::model::LargeScaleLaw;
use crate::units::{db_to_linear, linear_to_db};

/// Angular mean of RCS samples at one frequency, averaged in the linear
/// domain and returned in dBsm.
pub fn extract_a(samples_dbsm: &[f64]) -> Result<f64> {
    if samples_dbsm.is_empty() {
        return Err(Error::domain("extract_A needs at least one sample"));
    }
    let mean = samples_dbsm.iter().map(|&x| db_to_linear(x)).sum::<f64>() / samples_dbsm.len() as f64;
    linear_to_db(mean)
}

/// Ordinary least squares of `A_dB` on frequency; the valid range becomes
/// the span of the input frequencies.
pub fn fit_a_law(points: &[(f64, f64)]) -> Result<LargeScaleLaw> {
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if points.len() < 2 {
        return Err(Error::domain(format!(
            "need at least 2 frequencies, got {}",
            points.len()
        )));
    }
    if distinct.len() < 2 {
        return Err(Error::Numerical(
            "all frequencies identical: regression is rank deficient".into(),
        ));
    }
    let n = points.len() as f64;
    let fm = points.iter().map(|p| p.0).sum::<f64>() / n;
    let am = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - fm).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - fm) * (p.1 - am)).sum();
    let slope = sxy / sxx;
    let intercept = am - slope * fm;
    LargeScaleLaw::new(slope, intercept, distinct[0], distinct[distinct.len() - 1])
}
