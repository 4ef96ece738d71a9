//! Unified radar-cross-section modeling for ISAC channel studies.
//!
//! Modules:
//! * [`model`]: the three-component model `σ = A(f)·B1(φ)·B2` and builtin
//!   UAV / Vehicle / Human parameter sets.
//! * [`canonical`]: closed-form RCS of canonical shapes and coherent facet
//!   summation.
//! * [`fitting`]: parameter extraction from measured RCS datasets.
//! * [`measurement`]: VNA S21 sweep post-processing to per-angle RCS.
//! * [`sim`]: Monte Carlo cascaded Tx → target → Rx channel simulator.

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod error;
pub mod fitting;
pub mod measurement;
pub mod model;
pub mod sim;
pub mod stats;
pub mod svg;
pub mod units;

pub use error::{Error, Result};
pub use model::{
    builtin_model, builtin_models, BeamPattern, BeamPeak, Family, FluctuationLaw, LargeScaleLaw, Sector,
    UnifiedRcsModel,
};
