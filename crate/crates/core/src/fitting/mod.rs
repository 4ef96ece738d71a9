//! Parameter extraction for the unified RCS model.

mod beam;
mod dataset;
mod fluctuation;
mod large_scale;
mod pipeline;

pub use beam::{
    fit_beam_pattern, normalize_pattern, peak_prominence_db, sectors_for_centers, BeamFit, BeamFitConfig, SectorFit,
};
pub use dataset::{campaign_frequencies, synthesize_dataset, MeasuredRcsDataset, RcsSample, MIN_AZIMUTHS};
pub use fluctuation::{
    binned_masses, fit_fluctuation, fit_gamma, fit_weibull, kl_divergence, kl_from_masses, rmse, select_family,
    FluctuationFit, DEGENERATE_SPREAD_DB, KL_FLOOR, MIN_RESIDUALS,
};
pub use large_scale::{extract_a, fit_a_law};
pub use pipeline::{fit_full_model, FitConfig, FitDiagnostics, FitReport};
