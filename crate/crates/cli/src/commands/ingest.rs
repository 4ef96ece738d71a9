use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use rcs_core::measurement::{calibrate_with_sphere, ingest_dataset, GateWindow, IngestConfig};
use serde::Deserialize;

#[derive(clap::Args)]
pub struct Args {
    /// Directory holding `angle_<deg>.csv` sweeps (optionally one level of subdirectories).
    pub in_dir: PathBuf,
    /// Output dataset CSV.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "target")]
    pub label: String,
    /// Gate center in ns; default is the bistatic path delay of each sweep.
    #[arg(long)]
    pub gate_center_ns: Option<f64>,
    #[arg(long, default_value_t = 5.0)]
    pub gate_half_width_ns: f64,
    /// Raised-cosine taper fraction of the gate; 0 gives a rectangular gate.
    #[arg(long, default_value_t = 0.25)]
    pub gate_taper: f64,
    /// Split each sweep into this many sub-bands.
    #[arg(long, default_value_t = 1)]
    pub sub_bands: usize,
    /// Tukey taper fraction over the sweep before the inverse transform.
    #[arg(long)]
    pub freq_taper: Option<f64>,
    #[arg(long, default_value_t = -120.0, allow_hyphen_values = true)]
    pub noise_floor_db: f64,
    /// Calibration JSON: `{"offset_db": x}` or `{"sphere_radius_m": r, "measured_dbsm": [..]}`.
    #[arg(long)]
    pub calibration: Option<PathBuf>,
    #[arg(long)]
    pub angle_step: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum Calibration {
    Offset {
        offset_db: f64,
    },
    Sphere {
        sphere_radius_m: f64,
        measured_dbsm: Vec<f64>,
    },
}

pub fn run(a: Args, seed: u64) -> anyhow::Result<()> {
    let offset = match &a.calibration {
        None => 0.0,
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let cal: Calibration = serde_json::from_str(&text).map_err(|e| {
                rcs_core::Error::Format(format!(
                    "{}: expected offset_db or sphere_radius_m + measured_dbsm: {e}",
                    p.display()
                ))
            })?;
            match cal {
                Calibration::Offset { offset_db } => offset_db,
                Calibration::Sphere {
                    sphere_radius_m,
                    measured_dbsm,
                } => {
                    let c = calibrate_with_sphere(&measured_dbsm, sphere_radius_m)?;
                    eprintln!(
                        "sphere calibration: theoretical {:.2} dBsm, measured mean {:.2} dBsm, offset {:+.2} dB",
                        c.theoretical_dbsm, c.measured_mean_dbsm, c.offset_db
                    );
                    if !c.within_bound {
                        eprintln!("warning: sphere discrepancy {:.2} dB exceeds 2 dB", c.discrepancy_db);
                    }
                    c.offset_db
                }
            }
        }
    };
    let cfg = IngestConfig {
        gate_center_s: a.gate_center_ns.map(|v| v * 1e-9),
        gate_half_width_s: a.gate_half_width_ns * 1e-9,
        gate_window: if a.gate_taper > 0.0 {
            GateWindow::RaisedCosine {
                taper_fraction: a.gate_taper,
            }
        } else {
            GateWindow::Rectangular
        },
        sub_bands: a.sub_bands,
        freq_taper: a.freq_taper,
        noise_floor_db: a.noise_floor_db,
        calibration_offset_db: offset,
        angle_step_deg: a.angle_step,
    };
    super::announce("ingest", &cfg, seed);
    let rep = ingest_dataset(&a.in_dir, &a.label, &cfg)?;
    for (f, az) in &rep.below_noise_floor {
        eprintln!("warning: {f} GHz, {az}°: echo below noise floor, sample dropped");
    }
    let mut buf = Vec::new();
    rep.dataset.write_csv(&mut buf)?;
    super::write_file(&a.out, &buf)?;
    eprintln!(
        "ingested {} sweeps into {} samples at {} frequencies -> {}",
        rep.n_sweeps,
        rep.dataset.samples.len(),
        rep.dataset.frequencies().len(),
        a.out.display()
    );
    Ok(())
}
