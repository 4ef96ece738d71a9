use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::UnifiedRcsModel;

/// Minimum number of distinct azimuths required at every frequency.
pub const MIN_AZIMUTHS: usize = 8;

/// One measured RCS value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RcsSample {
    pub freq_ghz: f64,
    pub azimuth_deg: f64,
    pub rcs_dbsm: f64,
}

/// Per-angle, per-frequency RCS samples for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredRcsDataset {
    pub target_label: String,
    pub samples: Vec<RcsSample>,
    /// Expected azimuth step in degrees.
    pub angle_grid_deg: f64,
}

impl MeasuredRcsDataset {
    /// Validates uniqueness of `(freq, azimuth)`, the azimuth range and the
    /// per-frequency azimuth count.
    pub fn new(target_label: impl Into<String>, samples: Vec<RcsSample>, angle_grid_deg: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("dataset has no samples"));
        }
        let mut seen = HashSet::new();
        let mut per_freq: BTreeMap<u64, usize> = BTreeMap::new();
        for (row, s) in samples.iter().enumerate() {
            if !(s.freq_ghz > 0.0 && s.freq_ghz.is_finite()) {
                return Err(Error::format(format!("row {}: frequency must be > 0", row + 1)));
            }
            if !(0.0..360.0).contains(&s.azimuth_deg) {
                return Err(Error::format(format!(
                    "row {}: azimuth {} outside [0, 360)",
                    row + 1,
                    s.azimuth_deg
                )));
            }
            if !s.rcs_dbsm.is_finite() {
                return Err(Error::format(format!("row {}: RCS must be finite", row + 1)));
            }
            if !seen.insert((s.freq_ghz.to_bits(), s.azimuth_deg.to_bits())) {
                return Err(Error::format(format!(
                    "row {}: duplicate sample at {} GHz, {}°",
                    row + 1,
                    s.freq_ghz,
                    s.azimuth_deg
                )));
            }
            *per_freq.entry(s.freq_ghz.to_bits()).or_default() += 1;
        }
        for (f, n) in per_freq {
            if n < MIN_AZIMUTHS {
                return Err(Error::format(format!(
                    "{} GHz has {n} azimuths, need at least {MIN_AZIMUTHS}",
                    f64::from_bits(f)
                )));
            }
        }
        Ok(MeasuredRcsDataset {
            target_label: target_label.into(),
            samples,
            angle_grid_deg,
        })
    }

    /// Distinct frequencies, ascending.
    pub fn frequencies(&self) -> Vec<f64> {
        let set: BTreeSet<u64> = self.samples.iter().map(|s| s.freq_ghz.to_bits()).collect();
        let mut v: Vec<f64> = set.into_iter().map(f64::from_bits).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn at_frequency(&self, freq_ghz: f64) -> impl Iterator<Item = &RcsSample> {
        self.samples.iter().filter(move |s| s.freq_ghz == freq_ghz)
    }

    /// Read the `freq_ghz,azimuth_deg,rcs_dbsm` CSV schema. The angle grid is
    /// inferred as the smallest spacing between distinct azimuths.
    pub fn read_csv<R: Read>(reader: R, target_label: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let expected = ["freq_ghz", "azimuth_deg", "rcs_dbsm"];
        if headers.iter().map(str::trim).collect::<Vec<_>>() != expected {
            return Err(Error::format(format!(
                "dataset header must be `{}`, got `{}`",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut samples = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let field = |k: usize| -> Result<f64> {
                rec.get(k)
                    .ok_or_else(|| Error::format(format!("line {line}: missing column {}", k + 1)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::format(format!("line {line}: column `{}`: {e}", expected[k])))
            };
            samples.push(RcsSample {
                freq_ghz: field(0)?,
                azimuth_deg: field(1)?,
                rcs_dbsm: field(2)?,
            });
        }
        let grid = infer_grid(&samples);
        Self::new(target_label, samples, grid)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().from_writer(writer);
        w.write_record(["freq_ghz", "azimuth_deg", "rcs_dbsm"])?;
        for s in &self.samples {
            w.write_record([
                s.freq_ghz.to_string(),
                s.azimuth_deg.to_string(),
                s.rcs_dbsm.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

fn infer_grid(samples: &[RcsSample]) -> f64 {
    let set: BTreeSet<u64> = samples.iter().map(|s| s.azimuth_deg.to_bits()).collect();
    let mut az: Vec<f64> = set.into_iter().map(f64::from_bits).collect();
    az.sort_by(f64::total_cmp);
    az.windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d > 1e-9)
        .fold(f64::INFINITY, f64::min)
        .min(360.0)
}

/// Frequencies used by the measurement campaign: five carriers, each split
/// into three 1 GHz sub-bands.
pub fn campaign_frequencies() -> Vec<f64> {
    [10.0, 15.0, 20.0, 28.0, 36.0]
        .iter()
        .flat_map(|c| [c - 1.0, *c, c + 1.0])
        .collect()
}

/// Draw a dataset from a model on the given frequency list and azimuth grid,
/// one independent `B2` draw per sample.
pub fn synthesize_dataset<R: Rng + ?Sized>(
    model: &UnifiedRcsModel,
    freqs_ghz: &[f64],
    angle_step_deg: f64,
    rng: &mut R,
) -> Result<MeasuredRcsDataset> {
    if !(angle_step_deg > 0.0) {
        return Err(Error::domain("angle step must be > 0"));
    }
    let n_angles = (360.0 / angle_step_deg).round() as usize;
    let mut samples = Vec::with_capacity(freqs_ghz.len() * n_angles);
    for &f in freqs_ghz {
        for k in 0..n_angles {
            let phi = k as f64 * angle_step_deg;
            let b2 = model.b2.sample(rng)?;
            let s = model.eval_sigma(f, phi, b2)?;
            samples.push(RcsSample {
                freq_ghz: f,
                azimuth_deg: phi,
                rcs_dbsm: s.dbsm,
            });
        }
    }
    MeasuredRcsDataset::new(model.target_label.clone(), samples, angle_step_deg)
}
