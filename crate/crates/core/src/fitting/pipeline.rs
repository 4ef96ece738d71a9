use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BeamPattern, Family, FluctuationLaw, LargeScaleLaw, UnifiedRcsModel, HEADING_CONVENTION};
use crate::units::linear_to_db;

use super::beam::{fit_beam_pattern, normalize_pattern, BeamFitConfig, SectorFit};
use super::dataset::MeasuredRcsDataset;
use super::fluctuation::{fit_fluctuation, kl_divergence, rmse, select_family};
use super::large_scale::{extract_a, fit_a_law};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub kl_bins: usize,
    /// Rescale `B1` to unit angular linear mean and fold the shift into `A`.
    pub renormalize: bool,
    /// Lognormal is kept when its divergence is within this margin of the best.
    pub lognormal_preference: f64,
    pub beam: BeamFitConfig,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            kl_bins: 30,
            renormalize: false,
            lognormal_preference: 0.02,
            beam: BeamFitConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    /// `(freq_ghz, A_dBsm)` extracted at each frequency.
    pub a_per_freq: Vec<(f64, f64)>,
    pub beam_prominence_db: f64,
    pub beam_iterations: usize,
    pub sectors: Vec<SectorFit>,
    pub candidates: Vec<FluctuationLaw>,
    /// Shift applied to `A` by renormalization, 0 when disabled.
    pub renormalization_db: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: UnifiedRcsModel,
    pub rmse_b1: f64,
    pub kl_by_family: BTreeMap<Family, f64>,
    pub chosen_family: Family,
    pub diagnostics: FitDiagnostics,
    #[serde(skip)]
    pub residuals: Vec<f64>,
    /// `(freq_ghz, azimuth_deg)` for each residual.
    #[serde(skip)]
    pub residual_index: Vec<(f64, f64)>,
}

impl FitReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_residuals_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["freq_ghz", "azimuth_deg", "residual_db"])?;
        for ((f, phi), r) in self.residual_index.iter().zip(&self.residuals) {
            w.write_record([f.to_string(), phi.to_string(), r.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Extract `A`, `B1` and `B2` from a dataset. Errors carry the stage name.
pub fn fit_full_model(dataset: &MeasuredRcsDataset, cfg: &FitConfig) -> Result<FitReport> {
    let freqs = dataset.frequencies();
    let a_per_freq = freqs
        .iter()
        .map(|&f| {
            let v: Vec<f64> = dataset.at_frequency(f).map(|s| s.rcs_dbsm).collect();
            extract_a(&v).map(|a| (f, a))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("extract_A"))?;
    let mut a_law = fit_a_law(&a_per_freq).map_err(|e| e.in_stage("fit_A_law"))?;

    let normalized = normalize_pattern(dataset, &a_per_freq).map_err(|e| e.in_stage("normalize_pattern"))?;
    let beam = fit_beam_pattern(&normalized, &cfg.beam).map_err(|e| e.in_stage("fit_beam_pattern"))?;
    let mut b1 = beam.pattern.clone();
    let modeled: Vec<f64> = normalized.iter().map(|(phi, _)| b1.eval_db(*phi)).collect();
    let measured: Vec<f64> = normalized.iter().map(|p| p.1).collect();
    let rmse_b1 = rmse(&measured, &modeled).map_err(|e| e.in_stage("fit_beam_pattern"))?;

    let mut a_shift = vec![0.0; a_per_freq.len()];
    let mut renorm = 0.0;
    if cfg.renormalize && !b1.isotropic {
        let mut az: Vec<f64> = dataset.samples.iter().map(|s| s.azimuth_deg).collect();
        az.sort_by(f64::total_cmp);
        az.dedup();
        let m = az.iter().map(|&p| b1.eval_linear(p)).sum::<f64>() / az.len() as f64;
        renorm = linear_to_db(m).map_err(|e| e.in_stage("renormalize"))?;
        b1 = shift_pattern(&b1, renorm).map_err(|e| e.in_stage("renormalize"))?;
        a_law = LargeScaleLaw::new(a_law.slope, a_law.intercept + renorm, a_law.f_min, a_law.f_max)?;
        a_shift.iter_mut().for_each(|v| *v = renorm);
    }

    let mut residuals = Vec::with_capacity(dataset.samples.len());
    let mut residual_index = Vec::with_capacity(dataset.samples.len());
    for s in &dataset.samples {
        let i = freqs
            .iter()
            .position(|f| *f == s.freq_ghz)
            .expect("frequency list built from samples");
        let a = a_per_freq[i].1 + a_shift[i];
        residuals.push(s.rcs_dbsm - a - b1.eval_db(s.azimuth_deg));
        residual_index.push((s.freq_ghz, s.azimuth_deg));
    }

    let fit = fit_fluctuation(&residuals).map_err(|e| e.in_stage("fit_fluctuation"))?;
    let candidates = fit.candidates();
    let mut kl = Vec::new();
    for law in &candidates {
        let d = kl_divergence(&residuals, law, cfg.kl_bins).map_err(|e| e.in_stage("kl_divergence"))?;
        kl.push((law.family(), d));
    }
    let chosen_family = select_family(&kl, cfg.lognormal_preference);
    let b2 = candidates
        .iter()
        .find(|l| l.family() == chosen_family)
        .cloned()
        .unwrap_or(fit.lognormal);

    Ok(FitReport {
        model: UnifiedRcsModel {
            target_label: dataset.target_label.clone(),
            a_law,
            b1,
            b2,
            heading_convention: HEADING_CONVENTION.to_string(),
        },
        rmse_b1,
        kl_by_family: kl.into_iter().collect(),
        chosen_family,
        diagnostics: FitDiagnostics {
            a_per_freq,
            beam_prominence_db: beam.prominence_db,
            beam_iterations: beam.iterations,
            sectors: beam.sectors,
            candidates,
            renormalization_db: renorm,
            n_samples: dataset.samples.len(),
        },
        residuals,
        residual_index,
    })
}

/// Lower the pattern by `db` everywhere: `c_k` and `Y_max` both grow by `db`.
fn shift_pattern(p: &BeamPattern, db: f64) -> Result<BeamPattern> {
    let peaks = p
        .peaks
        .iter()
        .map(|pk| {
            let mut pk = *pk;
            pk.offset_db += db;
            pk
        })
        .collect();
    BeamPattern::new(peaks, p.y_max + db)
}
