use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rcs_core::fitting::{campaign_frequencies, synthesize_dataset};
use rcs_core::measurement::{sweep_grid, synthesize_point_target, SweepMeta};
use rcs_core::units::db_to_linear;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// RCS dataset CSV on the 15-frequency campaign grid.
    Dataset,
    /// One S21 sweep per azimuth for a point target following the model.
    Sweeps,
}

#[derive(clap::Args, Serialize)]
pub struct Args {
    #[arg(value_enum)]
    pub kind: Kind,
    /// Builtin label or model JSON.
    #[arg(long, default_value = "uav")]
    pub target: String,
    #[arg(long, default_value_t = 5.0)]
    pub angle_step: f64,
    /// Sweep center frequencies in GHz (sweeps only).
    #[arg(long, value_delimiter = ',', default_values_t = [28.0])]
    pub freq: Vec<f64>,
    #[arg(long, default_value_t = 801)]
    pub points: usize,
    #[arg(long, default_value_t = 3.0)]
    pub bandwidth_ghz: f64,
    /// Tx/Rx range in meters (sweeps only).
    #[arg(long, default_value_t = 6.0)]
    pub range_m: f64,
    #[arg(long, default_value_t = 25.0)]
    pub gain_dbi: f64,
    /// Draw B2 (off gives B2 = 1).
    #[arg(long)]
    pub fluctuation: bool,
    /// Output CSV (dataset) or directory (sweeps).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(a: Args, seed: u64) -> anyhow::Result<()> {
    super::announce("synthesize", &a, seed);
    let model = super::load_model(&a.target)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match a.kind {
        Kind::Dataset => {
            let ds = synthesize_dataset(&model, &campaign_frequencies(), a.angle_step, &mut rng)?;
            let mut buf = Vec::new();
            ds.write_csv(&mut buf)?;
            super::write_file(&a.out, &buf)?;
            eprintln!("wrote {} samples to {}", ds.samples.len(), a.out.display());
        }
        Kind::Sweeps => {
            let n = (360.0 / a.angle_step).round() as usize;
            let mut count = 0;
            for &fc in &a.freq {
                let dir = if a.freq.len() > 1 {
                    a.out.join(format!("{fc}GHz"))
                } else {
                    a.out.clone()
                };
                let grid = sweep_grid(fc * 1e9, a.bandwidth_ghz * 1e9, a.points);
                for k in 0..n {
                    let az = k as f64 * a.angle_step;
                    let b2 = if a.fluctuation { model.b2.sample(&mut rng)? } else { 1.0 };
                    let meta = SweepMeta {
                        azimuth_deg: az,
                        tx_gain_dbi: a.gain_dbi,
                        rx_gain_dbi: a.gain_dbi,
                        r1_m: a.range_m,
                        r2_m: a.range_m,
                        center_freq_hz: fc * 1e9,
                    };
                    let sigma = db_to_linear(model.eval_sigma(fc, az, b2)?.dbsm);
                    synthesize_point_target(meta, &grid, |_| sigma)?.write(&dir)?;
                    count += 1;
                }
            }
            eprintln!("wrote {count} sweeps under {}", a.out.display());
        }
    }
    Ok(())
}
