//! VNA post-processing: S21 sweeps to per-angle RCS.

mod chain;
mod ingest;
mod sweep;

pub use chain::{
    calibrate_with_sphere, compute_pdp, echo_power, freq_to_time, freq_to_time_tapered, link_budget,
    radar_equation_rcs, time_gate, Cir, GateSpec, GateWindow, SphereCalibration, DEFAULT_GATE_HALF_WIDTH_S,
    DEFAULT_GATE_TAPER, SPHERE_DISCREPANCY_BOUND_DB,
};
pub use ingest::{
    find_sweep_files, ingest_dataset, process_sweep, sweep_grid, synthesize_point_target, IngestConfig, IngestReport,
    SweepRcs,
};
pub use sweep::{parse_sweep_file_name, sweep_file_name, S21Sweep, SweepMeta};
