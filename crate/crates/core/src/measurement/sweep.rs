use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Link metadata for one sweep, stored in the JSON sidecar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepMeta {
    pub azimuth_deg: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub r1_m: f64,
    pub r2_m: f64,
    pub center_freq_hz: f64,
}

impl SweepMeta {
    /// Same link (gains, ranges, carrier) ignoring azimuth.
    pub fn same_link(&self, other: &SweepMeta) -> bool {
        self.tx_gain_dbi == other.tx_gain_dbi
            && self.rx_gain_dbi == other.rx_gain_dbi
            && self.r1_m == other.r1_m
            && self.r2_m == other.r2_m
            && self.center_freq_hz == other.center_freq_hz
    }
}

/// One VNA frequency sweep at a fixed target azimuth.
#[derive(Debug, Clone, PartialEq)]
pub struct S21Sweep {
    pub freqs_hz: Vec<f64>,
    pub s21: Vec<Complex64>,
    pub meta: SweepMeta,
}

impl S21Sweep {
    /// Checks length agreement, `N >= 2` and a strictly increasing grid that is
    /// uniform to 1e-6 relative.
    pub fn new(freqs_hz: Vec<f64>, s21: Vec<Complex64>, meta: SweepMeta) -> Result<Self> {
        if freqs_hz.len() != s21.len() {
            return Err(Error::format(format!(
                "{} frequencies but {} S21 values",
                freqs_hz.len(),
                s21.len()
            )));
        }
        if freqs_hz.len() < 2 {
            return Err(Error::format("a sweep needs at least 2 frequency points"));
        }
        let df = (freqs_hz[freqs_hz.len() - 1] - freqs_hz[0]) / (freqs_hz.len() - 1) as f64;
        if !(df > 0.0) {
            return Err(Error::format("frequency grid must be strictly increasing"));
        }
        for (i, w) in freqs_hz.windows(2).enumerate() {
            let step = w[1] - w[0];
            if !(step > 0.0) {
                return Err(Error::format(format!(
                    "frequency grid not increasing at point {}",
                    i + 1
                )));
            }
            if ((step - df) / df).abs() > 1e-6 {
                return Err(Error::format(format!(
                    "frequency grid not uniform at point {}: step {step} Hz vs mean {df} Hz",
                    i + 1
                )));
            }
        }
        Ok(S21Sweep { freqs_hz, s21, meta })
    }

    pub fn len(&self) -> usize {
        self.freqs_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs_hz.is_empty()
    }

    /// Mean grid step in Hz.
    pub fn step_hz(&self) -> f64 {
        (self.freqs_hz[self.len() - 1] - self.freqs_hz[0]) / (self.len() - 1) as f64
    }

    /// Read `<stem>.csv` and its `<stem>.json` sidecar.
    pub fn read(csv_path: &Path) -> Result<Self> {
        let sidecar = csv_path.with_extension("json");
        let meta_text = fs::read_to_string(&sidecar).map_err(|e| Error::io(&sidecar, e))?;
        let meta: SweepMeta =
            serde_json::from_str(&meta_text).map_err(|e| Error::format(format!("{}: {e}", sidecar.display())))?;
        let file = fs::File::open(csv_path).map_err(|e| Error::io(csv_path, e))?;
        let mut rdr = csv::Reader::from_reader(file);
        let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
        if header != ["freq_hz", "s21_re", "s21_im"] {
            return Err(Error::format(format!(
                "{}: header must be `freq_hz,s21_re,s21_im`",
                csv_path.display()
            )));
        }
        let mut freqs = Vec::new();
        let mut s21 = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let num = |k: usize| -> Result<f64> {
                rec.get(k)
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::format(format!("{}: line {}: bad number", csv_path.display(), i + 2)))
            };
            freqs.push(num(0)?);
            s21.push(Complex64::new(num(1)?, num(2)?));
        }
        S21Sweep::new(freqs, s21, meta).map_err(|e| match e {
            Error::Format(m) => Error::format(format!("{}: {m}", csv_path.display())),
            other => other,
        })
    }

    /// Write `angle_<deg>.csv` plus sidecar into `dir`; returns the CSV path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(sweep_file_name(self.meta.azimuth_deg));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["freq_hz", "s21_re", "s21_im"])?;
        for (f, s) in self.freqs_hz.iter().zip(&self.s21) {
            w.write_record([f.to_string(), s.re.to_string(), s.im.to_string()])?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        let sidecar = path.with_extension("json");
        fs::write(&sidecar, serde_json::to_string_pretty(&self.meta)? + "\n").map_err(|e| Error::io(&sidecar, e))?;
        Ok(path)
    }
}

pub fn sweep_file_name(azimuth_deg: f64) -> String {
    format!("angle_{azimuth_deg}.csv")
}

/// Azimuth encoded in an `angle_<deg>.csv` file name.
pub fn parse_sweep_file_name(name: &str) -> Option<f64> {
    name.strip_prefix("angle_")?.strip_suffix(".csv")?.parse().ok()
}
