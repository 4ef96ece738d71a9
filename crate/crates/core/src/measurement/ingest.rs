use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{MeasuredRcsDataset, RcsSample};
use crate::units::{linear_to_db, SPEED_OF_LIGHT};

use super::chain::{
    echo_power, freq_to_time, freq_to_time_tapered, link_budget, radar_equation_rcs, time_gate, GateSpec, GateWindow,
    DEFAULT_GATE_HALF_WIDTH_S, DEFAULT_GATE_TAPER,
};
use super::sweep::{parse_sweep_file_name, S21Sweep, SweepMeta};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    /// Gate center in seconds; `None` uses `(r1 + r2)/c` from each sweep.
    pub gate_center_s: Option<f64>,
    pub gate_half_width_s: f64,
    pub gate_window: GateWindow,
    /// Each sweep is split into this many contiguous sub-bands, each
    /// producing one dataset frequency.
    pub sub_bands: usize,
    /// Tukey taper fraction applied before the inverse transform.
    pub freq_taper: Option<f64>,
    /// Echo power below this level (dB) is reported, not converted.
    pub noise_floor_db: f64,
    pub calibration_offset_db: f64,
    /// Expected azimuth step; inferred from the sweeps when absent.
    pub angle_step_deg: Option<f64>,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            gate_center_s: None,
            gate_half_width_s: DEFAULT_GATE_HALF_WIDTH_S,
            gate_window: GateWindow::RaisedCosine {
                taper_fraction: DEFAULT_GATE_TAPER,
            },
            sub_bands: 1,
            freq_taper: None,
            noise_floor_db: -120.0,
            calibration_offset_db: 0.0,
            angle_step_deg: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestReport {
    pub dataset: MeasuredRcsDataset,
    /// `(freq_ghz, azimuth_deg)` of echoes below the noise floor.
    pub below_noise_floor: Vec<(f64, f64)>,
    pub n_sweeps: usize,
}

/// RCS estimate for one sweep (or sub-band of it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRcs {
    pub freq_ghz: f64,
    pub azimuth_deg: f64,
    pub echo_power: f64,
    /// `None` when the echo is below the noise floor.
    pub rcs_dbsm: Option<f64>,
}

/// Run the post-processing chain on one sweep.
pub fn process_sweep(sweep: &S21Sweep, cfg: &IngestConfig) -> Result<Vec<SweepRcs>> {
    let k = cfg.sub_bands;
    if k == 0 || sweep.len() / k < 2 {
        return Err(Error::Config(format!(
            "cannot split {} points into {k} sub-bands",
            sweep.len()
        )));
    }
    let n = sweep.len();
    let mut out = Vec::with_capacity(k);
    for b in 0..k {
        let (lo, hi) = (b * n / k, (b + 1) * n / k);
        let part = S21Sweep {
            freqs_hz: sweep.freqs_hz[lo..hi].to_vec(),
            s21: sweep.s21[lo..hi].to_vec(),
            meta: sweep.meta,
        };
        let f_c = part.freqs_hz.iter().sum::<f64>() / part.len() as f64;
        let cir = match cfg.freq_taper {
            Some(a) => freq_to_time_tapered(&part, a),
            None => freq_to_time(&part),
        };
        let gate = GateSpec {
            center_delay_s: cfg
                .gate_center_s
                .unwrap_or((sweep.meta.r1_m + sweep.meta.r2_m) / SPEED_OF_LIGHT),
            half_width_s: cfg.gate_half_width_s,
            window: cfg.gate_window,
        };
        let p = echo_power(&time_gate(&cir, &gate)?);
        let m = &sweep.meta;
        let rcs = if p > 0.0 && linear_to_db(p)? >= cfg.noise_floor_db {
            Some(
                radar_equation_rcs(p, m.tx_gain_dbi, m.rx_gain_dbi, m.r1_m, m.r2_m, SPEED_OF_LIGHT / f_c)?
                    + cfg.calibration_offset_db,
            )
        } else {
            None
        };
        out.push(SweepRcs {
            freq_ghz: (f_c / 1e3).round() / 1e6,
            azimuth_deg: m.azimuth_deg,
            echo_power: p,
            rcs_dbsm: rcs,
        });
    }
    Ok(out)
}

/// Sweep files (`angle_<deg>.csv`) in `dir` and its immediate subdirectories,
/// sorted by path.
pub fn find_sweep_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let scan = |d: &Path, recurse: bool, files: &mut Vec<PathBuf>| -> Result<Vec<PathBuf>> {
        let mut subdirs = Vec::new();
        for entry in fs::read_dir(d).map_err(|e| Error::io(d, e))? {
            let path = entry.map_err(|e| Error::io(d, e))?.path();
            if path.is_dir() {
                if recurse {
                    subdirs.push(path);
                }
            } else if path
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(parse_sweep_file_name)
                .is_some()
            {
                files.push(path);
            }
        }
        Ok(subdirs)
    };
    for sub in scan(dir, true, &mut files)? {
        scan(&sub, false, &mut files)?;
    }
    files.sort();
    Ok(files)
}

/// Read every sweep under `dir` and assemble the RCS dataset.
pub fn ingest_dataset(dir: &Path, target_label: &str, cfg: &IngestConfig) -> Result<IngestReport> {
    let files = find_sweep_files(dir)?;
    if files.is_empty() {
        return Err(Error::format(format!("no sweeps found in {}", dir.display())));
    }
    let sweeps: Vec<S21Sweep> = files.par_iter().map(|p| S21Sweep::read(p)).collect::<Result<_>>()?;
    for (path, s) in files.iter().zip(&sweeps) {
        let name_az = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(parse_sweep_file_name);
        if name_az != Some(s.meta.azimuth_deg) {
            return Err(Error::format(format!(
                "{}: file name does not match sidecar azimuth {}",
                path.display(),
                s.meta.azimuth_deg
            )));
        }
    }
    check_consistency(&files, &sweeps, cfg.angle_step_deg)?;

    let results: Vec<Vec<SweepRcs>> = sweeps
        .par_iter()
        .map(|s| process_sweep(s, cfg))
        .collect::<Result<_>>()?;
    let mut samples = Vec::new();
    let mut below = Vec::new();
    for r in results.into_iter().flatten() {
        match r.rcs_dbsm {
            Some(v) => samples.push(RcsSample {
                freq_ghz: r.freq_ghz,
                azimuth_deg: r.azimuth_deg,
                rcs_dbsm: v,
            }),
            None => below.push((r.freq_ghz, r.azimuth_deg)),
        }
    }
    samples.sort_by(|a, b| {
        a.freq_ghz
            .total_cmp(&b.freq_ghz)
            .then(a.azimuth_deg.total_cmp(&b.azimuth_deg))
    });
    let step = cfg.angle_step_deg.unwrap_or_else(|| infer_step(&sweeps));
    Ok(IngestReport {
        dataset: MeasuredRcsDataset::new(target_label, samples, step)?,
        below_noise_floor: below,
        n_sweeps: sweeps.len(),
    })
}

fn infer_step(sweeps: &[S21Sweep]) -> f64 {
    let mut az: Vec<f64> = sweeps.iter().map(|s| s.meta.azimuth_deg).collect();
    az.sort_by(f64::total_cmp);
    az.dedup();
    az.windows(2).map(|w| w[1] - w[0]).fold(360.0, f64::min)
}

/// Per carrier: identical link metadata and frequency grids, and no holes in
/// the azimuth grid.
fn check_consistency(files: &[PathBuf], sweeps: &[S21Sweep], step: Option<f64>) -> Result<()> {
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, s) in sweeps.iter().enumerate() {
        groups.entry(s.meta.center_freq_hz.to_bits()).or_default().push(i);
    }
    let step = step.unwrap_or_else(|| infer_step(sweeps));
    for (fc, idx) in groups {
        let fc = f64::from_bits(fc);
        let first = &sweeps[idx[0]];
        let offenders: Vec<String> = idx[1..]
            .iter()
            .filter(|&&i| {
                let s = &sweeps[i];
                !s.meta.same_link(&first.meta)
                    || s.len() != first.len()
                    || s.freqs_hz[0] != first.freqs_hz[0]
                    || (s.step_hz() - first.step_hz()).abs() > 1e-6 * first.step_hz()
            })
            .map(|&i| files[i].display().to_string())
            .collect();
        if !offenders.is_empty() {
            return Err(Error::format(format!(
                "sweeps at {} GHz disagree with {} on link metadata or frequency grid: {}",
                fc / 1e9,
                files[idx[0]].display(),
                offenders.join(", ")
            )));
        }
        let mut az: Vec<f64> = idx.iter().map(|&i| sweeps[i].meta.azimuth_deg).collect();
        az.sort_by(f64::total_cmp);
        if let Some(w) = az.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::format(format!(
                "duplicate sweep at {}° for {} GHz",
                w[0],
                fc / 1e9
            )));
        }
        let n_expected = (360.0 / step).round() as usize;
        let start = az[0];
        let missing: Vec<String> = (0..n_expected)
            .map(|k| start + k as f64 * step)
            .filter(|a| !az.iter().any(|x| (x - a).abs() < 1e-6 * step))
            .map(|a| format!("{a}°"))
            .collect();
        if !missing.is_empty() {
            return Err(Error::format(format!(
                "angle grid at {} GHz (step {step}°) is missing {}",
                fc / 1e9,
                missing.join(", ")
            )));
        }
    }
    Ok(())
}

/// Uniform measurement grid: `n` points spanning `bandwidth_hz` around `center_hz`.
pub fn sweep_grid(center_hz: f64, bandwidth_hz: f64, n: usize) -> Vec<f64> {
    let df = bandwidth_hz / (n - 1) as f64;
    let f0 = center_hz - bandwidth_hz / 2.0;
    (0..n).map(|i| f0 + i as f64 * df).collect()
}

/// Forward model of a point target at the link's bistatic delay: the S21
/// amplitude follows the link budget for `sigma_m2(f)`.
pub fn synthesize_point_target(meta: SweepMeta, freqs_hz: &[f64], sigma_m2: impl Fn(f64) -> f64) -> Result<S21Sweep> {
    let tau = (meta.r1_m + meta.r2_m) / SPEED_OF_LIGHT;
    let s21 = freqs_hz
        .iter()
        .map(|&f| {
            let amp = link_budget(sigma_m2(f), &meta, f).sqrt();
            Complex64::from_polar(amp, -2.0 * std::f64::consts::PI * f * tau)
        })
        .collect();
    S21Sweep::new(freqs_hz.to_vec(), s21, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::db_to_linear;

    fn meta(az: f64, range: f64, fc: f64) -> SweepMeta {
        SweepMeta {
            azimuth_deg: az,
            tx_gain_dbi: 25.0,
            rx_gain_dbi: 25.0,
            r1_m: range,
            r2_m: range,
            center_freq_hz: fc,
        }
    }

    #[test]
    fn sphere_through_the_chain() {
        let grid = sweep_grid(28e9, 3e9, 801);
        let s = synthesize_point_target(meta(0.0, 6.0, 28e9), &grid, |_| db_to_linear(-7.07)).unwrap();
        let r = process_sweep(&s, &IngestConfig::default()).unwrap();
        assert!((r[0].rcs_dbsm.unwrap() + 7.07).abs() < 0.5, "{:?}", r);
    }

    #[test]
    fn echo_power_matches_link_budget() {
        let grid = sweep_grid(10e9, 3e9, 801);
        let m = meta(0.0, 12.0, 10e9);
        let s = synthesize_point_target(m, &grid, |_| 2.0).unwrap();
        let r = process_sweep(&s, &IngestConfig::default()).unwrap();
        let injected = grid.iter().map(|&f| link_budget(2.0, &m, f)).sum::<f64>() / grid.len() as f64;
        assert!((10.0 * (r[0].echo_power / injected).log10()).abs() < 0.1);
    }

    #[test]
    fn clutter_outside_gate_is_rejected() {
        let grid = sweep_grid(20e9, 3e9, 801);
        let m = meta(0.0, 6.0, 20e9);
        let clean = synthesize_point_target(m, &grid, |_| 1.0).unwrap();
        let mut dirty = clean.clone();
        let tau = 150e-9;
        for (s, f) in dirty.s21.iter_mut().zip(&grid) {
            *s += Complex64::from_polar(1e-3, -2.0 * std::f64::consts::PI * f * tau);
        }
        let cfg = IngestConfig::default();
        let a = process_sweep(&clean, &cfg).unwrap()[0].rcs_dbsm.unwrap();
        let b = process_sweep(&dirty, &cfg).unwrap()[0].rcs_dbsm.unwrap();
        assert!((a - b).abs() < 0.01, "{a} vs {b}");
    }

    #[test]
    fn linearity_in_amplitude() {
        let grid = sweep_grid(15e9, 3e9, 801);
        let s = synthesize_point_target(meta(0.0, 6.0, 15e9), &grid, |_| 0.3).unwrap();
        let mut scaled = s.clone();
        scaled.s21.iter_mut().for_each(|v| *v *= 3.0);
        let cfg = IngestConfig::default();
        let a = process_sweep(&s, &cfg).unwrap()[0].rcs_dbsm.unwrap();
        let b = process_sweep(&scaled, &cfg).unwrap()[0].rcs_dbsm.unwrap();
        assert!((db_to_linear(b) / db_to_linear(a) - 9.0).abs() < 1e-9);
    }

    #[test]
    fn noise_floor_and_sub_bands() {
        let grid = sweep_grid(36e9, 3e9, 801);
        let s = synthesize_point_target(meta(0.0, 6.0, 36e9), &grid, |_| 1e-14).unwrap();
        assert!(process_sweep(&s, &IngestConfig::default()).unwrap()[0]
            .rcs_dbsm
            .is_none());
        let cfg = IngestConfig {
            sub_bands: 3,
            ..IngestConfig::default()
        };
        let s = synthesize_point_target(meta(0.0, 6.0, 36e9), &grid, |f| if f < 35.5e9 { 1.0 } else { 0.5 }).unwrap();
        let r = process_sweep(&s, &cfg).unwrap();
        let f: Vec<f64> = r.iter().map(|x| x.freq_ghz).collect();
        assert!(
            (f[0] - 35.0).abs() < 0.01 && (f[1] - 36.0).abs() < 0.01 && (f[2] - 37.0).abs() < 0.01,
            "{f:?}"
        );
        assert!((r[0].rcs_dbsm.unwrap() - 0.0).abs() < 0.3);
        assert!((r[2].rcs_dbsm.unwrap() + 3.01).abs() < 0.3);
    }

    #[test]
    fn directory_ingest_and_missing_angle() {
        let dir = tempfile::tempdir().unwrap();
        let grid = sweep_grid(28e9, 3e9, 801);
        for k in 0..72 {
            let az = k as f64 * 5.0;
            synthesize_point_target(meta(az, 6.0, 28e9), &grid, |_| 0.5)
                .unwrap()
                .write(&dir.path().join("28GHz"))
                .unwrap();
        }
        let rep = ingest_dataset(dir.path(), "plate", &IngestConfig::default()).unwrap();
        assert_eq!(rep.dataset.samples.len(), 72);
        let want = 10.0 * 0.5f64.log10();
        assert!(rep.dataset.samples.iter().all(|s| (s.rcs_dbsm - want).abs() < 0.1));
        assert_eq!(rep.dataset.angle_grid_deg, 5.0);

        fs::remove_file(dir.path().join("28GHz/angle_35.csv")).unwrap();
        let err = ingest_dataset(dir.path(), "plate", &IngestConfig::default()).unwrap_err();
        assert!(err.to_string().contains("missing 35°"), "{err}");

        let empty = tempfile::tempdir().unwrap();
        let err = ingest_dataset(empty.path(), "x", &IngestConfig::default()).unwrap_err();
        assert!(err.to_string().contains("no sweeps found"));
    }

    #[test]
    fn inconsistent_metadata_lists_offenders() {
        let dir = tempfile::tempdir().unwrap();
        let grid = sweep_grid(28e9, 3e9, 201);
        for k in 0..8 {
            let mut m = meta(k as f64 * 45.0, 6.0, 28e9);
            if k == 3 {
                m.rx_gain_dbi = 20.0;
            }
            synthesize_point_target(m, &grid, |_| 0.5)
                .unwrap()
                .write(dir.path())
                .unwrap();
        }
        let err = ingest_dataset(dir.path(), "x", &IngestConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        assert!(err.to_string().contains("angle_135.csv"), "{err}");
    }
}
