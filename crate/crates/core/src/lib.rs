//! Exactly solvable single-electron double quantum dot: spectrum, Gibbs
//! states and the thermal correlation measures built on them.

pub mod config;
pub mod correlations;
pub mod density;
pub mod error;
pub mod model;
pub mod output;
pub mod qmatrix;
pub mod search;
pub mod sweep;
pub mod thermal;
pub mod validate;

pub use density::{DensityMatrix, DensityMatrix2, DensityMatrix4};
pub use error::{Error, Result};
pub use model::{ModelParams, Spectrum};
pub use sweep::{run_sweep, SweepGrid, SweepRecord};
pub use thermal::{thermal_state, ThermalState};
