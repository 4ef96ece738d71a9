use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::canonical::sphere_rcs;
use crate::error::{Error, Result};
use crate::units::{db_to_linear, linear_to_db, SPEED_OF_LIGHT};

use super::sweep::{S21Sweep, SweepMeta};

/// Channel impulse response on a uniform delay grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Cir {
    pub delay_step_s: f64,
    pub taps: Vec<Complex64>,
}

impl Cir {
    pub fn delay(&self, k: usize) -> f64 {
        k as f64 * self.delay_step_s
    }

    /// Unambiguous delay range `N·dt`.
    pub fn span_s(&self) -> f64 {
        self.taps.len() as f64 * self.delay_step_s
    }
}

/// Inverse DFT with `1/N` scaling, so `Σ|h|² = (1/N)·Σ|S21|²`.
pub fn freq_to_time(sweep: &S21Sweep) -> Cir {
    idft(&sweep.s21, sweep.step_hz())
}

/// As [`freq_to_time`] after a Tukey taper over the sweep, normalized so the
/// window has unit mean power.
pub fn freq_to_time_tapered(sweep: &S21Sweep, taper_fraction: f64) -> Cir {
    let w = tukey(sweep.len(), taper_fraction);
    let shaped: Vec<Complex64> = sweep.s21.iter().zip(&w).map(|(s, w)| s * w).collect();
    idft(&shaped, sweep.step_hz())
}

fn idft(values: &[Complex64], step_hz: f64) -> Cir {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    Cir {
        delay_step_s: 1.0 / (n as f64 * step_hz),
        taps: buf,
    }
}

fn tukey(n: usize, alpha: f64) -> Vec<f64> {
    let alpha = alpha.clamp(0.0, 1.0);
    let w: Vec<f64> = (0..n)
        .map(|i| {
            let x = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 };
            let edge = alpha / 2.0;
            if alpha == 0.0 || (edge..=1.0 - edge).contains(&x) {
                1.0
            } else if x < edge {
                0.5 * (1.0 + (PI * (x / edge - 1.0)).cos())
            } else {
                0.5 * (1.0 + (PI * ((1.0 - x) / edge - 1.0)).cos())
            }
        })
        .collect();
    let rms = (w.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    w.into_iter().map(|v| v / rms).collect()
}

/// `(delay_s, |h|²)` per bin.
pub fn compute_pdp(cir: &Cir) -> Vec<(f64, f64)> {
    cir.taps
        .iter()
        .enumerate()
        .map(|(k, t)| (cir.delay(k), t.norm_sqr()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GateWindow {
    Rectangular,
    /// Cosine roll-off over this fraction of the half-width at each edge.
    RaisedCosine {
        taper_fraction: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpec {
    pub center_delay_s: f64,
    pub half_width_s: f64,
    pub window: GateWindow,
}

pub const DEFAULT_GATE_HALF_WIDTH_S: f64 = 5e-9;
pub const DEFAULT_GATE_TAPER: f64 = 0.25;

impl GateSpec {
    /// Gate centered on the bistatic path delay `(r1 + r2)/c`.
    pub fn for_range(r1_m: f64, r2_m: f64) -> Self {
        GateSpec {
            center_delay_s: (r1_m + r2_m) / SPEED_OF_LIGHT,
            half_width_s: DEFAULT_GATE_HALF_WIDTH_S,
            window: GateWindow::RaisedCosine {
                taper_fraction: DEFAULT_GATE_TAPER,
            },
        }
    }

    pub fn weight(&self, delay_s: f64) -> f64 {
        let d = (delay_s - self.center_delay_s).abs();
        if d > self.half_width_s {
            return 0.0;
        }
        match self.window {
            GateWindow::Rectangular => 1.0,
            GateWindow::RaisedCosine { taper_fraction } => {
                let flat = self.half_width_s * (1.0 - taper_fraction.clamp(0.0, 1.0));
                if d <= flat {
                    1.0
                } else {
                    0.5 * (1.0 + (PI * (d - flat) / (self.half_width_s - flat)).cos())
                }
            }
        }
    }
}

/// Zero taps outside the gate and taper its edges.
pub fn time_gate(cir: &Cir, gate: &GateSpec) -> Result<Cir> {
    if !(gate.half_width_s > 0.0) {
        return Err(Error::domain("gate half-width must be > 0"));
    }
    if let GateWindow::RaisedCosine { taper_fraction } = gate.window {
        if !(0.0..=1.0).contains(&taper_fraction) {
            return Err(Error::domain("taper fraction must lie in [0, 1]"));
        }
    }
    let lo = gate.center_delay_s - gate.half_width_s;
    let hi = gate.center_delay_s + gate.half_width_s;
    if lo < 0.0 || hi > cir.span_s() {
        return Err(Error::domain(format!(
            "gate [{:.3}, {:.3}] ns outside the unambiguous range [0, {:.3}] ns",
            lo * 1e9,
            hi * 1e9,
            cir.span_s() * 1e9
        )));
    }
    Ok(Cir {
        delay_step_s: cir.delay_step_s,
        taps: cir
            .taps
            .iter()
            .enumerate()
            .map(|(k, t)| t * gate.weight(cir.delay(k)))
            .collect(),
    })
}

/// `Σ|h|²`, the received-to-transmitted power ratio of the gated echo.
pub fn echo_power(cir: &Cir) -> f64 {
    cir.taps.iter().map(|t| t.norm_sqr()).sum()
}

/// Bistatic radar equation solved for `σ`, in dBsm. Zero power gives `-∞`.
pub fn radar_equation_rcs(
    pr_over_pt: f64,
    gt_dbi: f64,
    gr_dbi: f64,
    r1_m: f64,
    r2_m: f64,
    lambda_m: f64,
) -> Result<f64> {
    if !(r1_m > 0.0 && r2_m > 0.0 && lambda_m > 0.0) {
        return Err(Error::domain("ranges and wavelength must be > 0"));
    }
    if !(pr_over_pt >= 0.0) {
        return Err(Error::domain("power ratio must be >= 0"));
    }
    if pr_over_pt == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let sigma = pr_over_pt * (4.0 * PI).powi(3) * r1_m.powi(2) * r2_m.powi(2)
        / (db_to_linear(gt_dbi) * db_to_linear(gr_dbi) * lambda_m.powi(2));
    linear_to_db(sigma)
}

/// Inverse of [`radar_equation_rcs`]: received-to-transmitted power ratio for
/// a point target of cross-section `sigma_m2`.
pub fn link_budget(sigma_m2: f64, meta: &SweepMeta, freq_hz: f64) -> f64 {
    let lambda = SPEED_OF_LIGHT / freq_hz;
    sigma_m2 * db_to_linear(meta.tx_gain_dbi) * db_to_linear(meta.rx_gain_dbi) * lambda.powi(2)
        / ((4.0 * PI).powi(3) * meta.r1_m.powi(2) * meta.r2_m.powi(2))
}

/// Bound on the sphere discrepancy observed in the chamber validation.
pub const SPHERE_DISCREPANCY_BOUND_DB: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereCalibration {
    pub theoretical_dbsm: f64,
    pub measured_mean_dbsm: f64,
    /// Added to every subsequent RCS estimate.
    pub offset_db: f64,
    pub discrepancy_db: f64,
    pub within_bound: bool,
}

/// Offset between the theoretical sphere RCS and the dB-averaged measurement.
pub fn calibrate_with_sphere(measured_dbsm: &[f64], radius_m: f64) -> Result<SphereCalibration> {
    if measured_dbsm.is_empty() {
        return Err(Error::domain("sphere calibration needs at least one angle"));
    }
    let theoretical = linear_to_db(sphere_rcs(radius_m)?)?;
    let mean = measured_dbsm.iter().sum::<f64>() / measured_dbsm.len() as f64;
    let offset = theoretical - mean;
    Ok(SphereCalibration {
        theoretical_dbsm: theoretical,
        measured_mean_dbsm: mean,
        offset_db: offset,
        discrepancy_db: offset.abs(),
        within_bound: offset.abs() <= SPHERE_DISCREPANCY_BOUND_DB,
    })
}
