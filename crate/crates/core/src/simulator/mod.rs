//! Finite-precision measurement simulation.
//!
//! Finite precision is modeled as scatter of the realized measurement and
//! preparation directions over a cap of half-angle ε around the requested
//! ones. Nothing here proves that estimates converge as ε shrinks; the
//! simulation only shows what happens under this particular noise model.

mod experiment;
mod model;
mod sampler;

use thiserror::Error;

use crate::constructions::ConstructionError;

pub use experiment::{
    precision_sweep, qm_sweep, read_sweep_csv, run_nchv_experiment, run_qm_reference, sub_seed,
    EnsembleCounts, EnsembleKind, EnsembleReport, Estimates, PrecisionSpec, SweepCsvRow,
    SweepEntry, SweepReport, CONFIDENCE_SIGMAS, SUB_SEED_STRIDE,
};
pub use model::{
    ConstantModel, MeyerModel, NchvModel, RotatedMeyerModel, DEFAULT_QUATERNION_BOUND,
};
pub use sampler::{sample_direction_near, DirectionSampler};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("epsilon {0} outside [0, π/2)")]
    EpsilonOutOfRange(f64),
    #[error("samples must be at least 1")]
    NoSamples,
    #[error("no epsilons given")]
    EmptySweep,
    #[error("epsilons must be strictly decreasing: entry {index} ({value}) follows {previous}")]
    NotDecreasing {
        index: usize,
        previous: f64,
        value: f64,
    },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}
