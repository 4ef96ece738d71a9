use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::UnifiedRcsModel;
use crate::units::{db_to_linear, signed_delta_deg, wrap_deg, SPEED_OF_LIGHT};

use super::config::{Mode, PatternArgument, SimConfig};

/// One drop's target and link geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropGeometry {
    pub position: [f64; 2],
    pub heading_deg: f64,
    pub b2_draw: f64,
    pub r1_m: f64,
    pub r2_m: f64,
    /// Bearing from the target toward the Tx / Rx.
    pub az_target_to_tx_deg: f64,
    pub az_target_to_rx_deg: f64,
    /// Bearing from the Rx toward the target.
    pub az_rx_to_target_deg: f64,
}

fn bearing_deg(from: [f64; 2], to: [f64; 2]) -> f64 {
    wrap_deg((to[1] - from[1]).atan2(to[0] - from[0]).to_degrees())
}

/// Area-uniform position in the annulus around the BS, uniform heading and
/// one `B2` draw.
pub fn gen_drop_geometry<R: Rng + ?Sized>(
    cfg: &SimConfig,
    model: &UnifiedRcsModel,
    rng: &mut R,
) -> Result<DropGeometry> {
    let s = &cfg.scenario;
    let (r0, r1) = (s.min_range_m, s.cell_radius_m);
    let u: f64 = rng.random();
    let rho = (r0 * r0 + u * (r1 * r1 - r0 * r0)).sqrt();
    let theta = rng.random::<f64>() * 2.0 * PI;
    let heading_deg = rng.random::<f64>() * 360.0;
    let position = [
        s.bs_position[0] + rho * theta.cos(),
        s.bs_position[1] + rho * theta.sin(),
    ];
    let dh = s.bs_height_m - s.target_height_m;
    let dist3 = |p: [f64; 2]| ((p[0] - position[0]).powi(2) + (p[1] - position[1]).powi(2) + dh * dh).sqrt();
    let tx = s.bs_position;
    let rx = match cfg.mode {
        Mode::Monostatic => tx,
        Mode::Bistatic { rx_position } => rx_position,
    };
    let b2_draw = model.b2.sample(rng)?;
    Ok(DropGeometry {
        position,
        heading_deg: wrap_deg(heading_deg),
        b2_draw,
        r1_m: dist3(tx),
        r2_m: dist3(rx),
        az_target_to_tx_deg: bearing_deg(position, tx),
        az_target_to_rx_deg: bearing_deg(position, rx),
        az_rx_to_target_deg: bearing_deg(rx, position),
    })
}

/// Bistatic radar path loss with unity gains, using only the large-scale
/// term `A`.
pub fn target_path_loss(r1_m: f64, r2_m: f64, lambda_m: f64, a_dbsm: f64) -> Result<f64> {
    if !(r1_m > 0.0 && r2_m > 0.0 && lambda_m > 0.0) {
        return Err(Error::domain("path loss needs positive ranges and wavelength"));
    }
    if !a_dbsm.is_finite() {
        return Err(Error::domain("A must be finite"));
    }
    let num = (4.0 * PI).powi(3) * r1_m.powi(2) * r2_m.powi(2);
    Ok(10.0 * (num / (lambda_m.powi(2) * db_to_linear(a_dbsm))).log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfLinkPath {
    pub delay_s: f64,
    /// Direction of the path at the target, global frame.
    pub azimuth_at_target_deg: f64,
    /// Direction of the path at the BS end of the half-link.
    pub azimuth_at_terminal_deg: f64,
    pub power: f64,
    pub phase_rad: f64,
}

/// Cluster parameters for one half-link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLinkSpec {
    pub n_clusters: usize,
    pub delay_scale_s: f64,
    pub angle_std_deg: f64,
    pub power_decay_db: f64,
    pub los_k_factor_db: Option<f64>,
}

/// Clusters of one half-link. Excess delays are exponential and sorted so
/// that the weaker (higher-index) clusters arrive later. With a K-factor,
/// cluster 0 is the line-of-sight path carrying `K/(K+1)` of the power.
/// A deviation `δ` at the target maps to `-δ` at the terminal (single
/// bounce mirrored about the line of sight).
pub fn gen_half_link<R: Rng + ?Sized>(
    spec: &HalfLinkSpec,
    los_delay_s: f64,
    los_az_at_target_deg: f64,
    los_az_at_terminal_deg: f64,
    rng: &mut R,
) -> Result<Vec<HalfLinkPath>> {
    let n = spec.n_clusters;
    if n < 1 {
        return Err(Error::domain("half-link needs at least one cluster"));
    }
    let first_scattered = usize::from(spec.los_k_factor_db.is_some());
    let mut excess: Vec<f64> = if spec.delay_scale_s > 0.0 {
        let exp = Exp::new(1.0 / spec.delay_scale_s).map_err(|e| Error::Numerical(e.to_string()))?;
        (first_scattered..n).map(|_| exp.sample(rng)).collect()
    } else {
        vec![0.0; n - first_scattered]
    };
    excess.sort_by(f64::total_cmp);
    let normal = Normal::new(0.0, spec.angle_std_deg).map_err(|e| Error::Numerical(e.to_string()))?;

    let decay: Vec<f64> = (0..n - first_scattered)
        .map(|i| db_to_linear(-(i as f64) * spec.power_decay_db))
        .collect();
    let decay_sum: f64 = decay.iter().sum();
    let (los_power, scattered_power) = match spec.los_k_factor_db {
        Some(_) if n == 1 => (1.0, 0.0),
        Some(k) => {
            let k = db_to_linear(k);
            (k / (k + 1.0), 1.0 / (k + 1.0))
        }
        None => (0.0, 1.0),
    };

    let mut paths = Vec::with_capacity(n);
    if first_scattered == 1 {
        paths.push(HalfLinkPath {
            delay_s: los_delay_s,
            azimuth_at_target_deg: wrap_deg(los_az_at_target_deg),
            azimuth_at_terminal_deg: wrap_deg(los_az_at_terminal_deg),
            power: los_power,
            phase_rad: rng.random::<f64>() * 2.0 * PI,
        });
    }
    for (i, dt) in excess.into_iter().enumerate() {
        let dev = normal.sample(rng);
        paths.push(HalfLinkPath {
            delay_s: los_delay_s + dt,
            azimuth_at_target_deg: wrap_deg(los_az_at_target_deg + dev),
            azimuth_at_terminal_deg: wrap_deg(los_az_at_terminal_deg - dev),
            power: scattered_power * decay[i] / decay_sum,
            phase_rad: rng.random::<f64>() * 2.0 * PI,
        });
    }
    Ok(paths)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadedPath {
    pub delay_s: f64,
    pub aoa_rx_deg: f64,
    pub power: f64,
    pub phase_rad: f64,
}

/// Every Tx-side path paired with every Rx-side path, weighted by the beam
/// pattern and the per-drop fluctuation. `A` is not applied here.
pub fn cascade_paths(
    tx: &[HalfLinkPath],
    rx: &[HalfLinkPath],
    model: &UnifiedRcsModel,
    heading_deg: f64,
    b2_draw: f64,
    argument: PatternArgument,
) -> Result<Vec<CascadedPath>> {
    if tx.is_empty() || rx.is_empty() {
        return Err(Error::domain("cascade needs non-empty path lists"));
    }
    let b1 = |az: f64| model.b1.eval_linear(wrap_deg(az - heading_deg));
    let mut out = Vec::with_capacity(tx.len() * rx.len());
    for p1 in tx {
        let g1 = b1(p1.azimuth_at_target_deg);
        for p2 in rx {
            let g = match argument {
                PatternArgument::Incident => g1,
                PatternArgument::InOutGeometricMean => (g1 * b1(p2.azimuth_at_target_deg)).sqrt(),
            };
            out.push(CascadedPath {
                delay_s: p1.delay_s + p2.delay_s,
                aoa_rx_deg: p2.azimuth_at_terminal_deg,
                power: p1.power * p2.power * g * b2_draw,
                phase_rad: (p1.phase_rad + p2.phase_rad).rem_euclid(2.0 * PI),
            });
        }
    }
    Ok(out)
}

/// Power-weighted RMS delay spread in seconds.
pub fn rms_delay_spread(paths: &[CascadedPath]) -> Result<f64> {
    let p: f64 = paths.iter().map(|x| x.power).sum();
    if !(p > 0.0) {
        return Err(Error::domain("delay spread of a zero-power path set"));
    }
    // centre on the first delay to limit cancellation
    let t0 = paths[0].delay_s;
    let m1 = paths.iter().map(|x| x.power * (x.delay_s - t0)).sum::<f64>() / p;
    let m2 = paths.iter().map(|x| x.power * (x.delay_s - t0).powi(2)).sum::<f64>() / p;
    Ok((m2 - m1 * m1).max(0.0).sqrt())
}

/// Circular RMS angle spread in degrees: deviations from the power-weighted
/// circular mean, wrapped into (-180°, 180°].
pub fn azimuth_angle_spread(paths: &[CascadedPath]) -> Result<f64> {
    let p: f64 = paths.iter().map(|x| x.power).sum();
    if !(p > 0.0) {
        return Err(Error::domain("angle spread of a zero-power path set"));
    }
    let z: Complex64 = paths
        .iter()
        .map(|x| Complex64::from_polar(x.power, x.aoa_rx_deg.to_radians()))
        .sum();
    let mu = z.arg().to_degrees();
    let v = paths
        .iter()
        .map(|x| x.power * signed_delta_deg(x.aoa_rx_deg, mu).powi(2))
        .sum::<f64>()
        / p;
    Ok(v.sqrt())
}

/// Line-of-sight delay of a half-link of length `r_m`.
pub fn los_delay(r_m: f64) -> f64 {
    r_m / SPEED_OF_LIGHT
}
