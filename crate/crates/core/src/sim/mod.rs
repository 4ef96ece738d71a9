//! Drop-based Monte Carlo simulation of the sensing target channel.

mod channel;
mod config;
mod run;

pub use channel::{
    azimuth_angle_spread, cascade_paths, gen_drop_geometry, gen_half_link, los_delay, rms_delay_spread,
    target_path_loss, CascadedPath, DropGeometry, HalfLinkPath, HalfLinkSpec,
};
pub use config::{Background, ClusterConfig, Mode, PatternArgument, Scenario, SimConfig, DEFAULT_SEED};
pub use run::{
    drop_seed, read_cdf_csv, run_monte_carlo, simulate_drop, write_cdf_csv, DropResult, Metric, SimRun, SimSummary,
};
