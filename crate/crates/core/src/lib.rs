//! Exact verification of Kochen-Specker colorability obstructions on the
//! rational unit sphere, with quantum predictions and finite-precision
//! measurement simulation.

pub mod cli;
pub mod coloring;
pub mod constructions;
pub mod frame;
pub mod io;
pub mod quantum;
pub mod rational;
pub mod simulator;
pub mod vector;

pub use rational::{rational_sqrt, Rational, RationalError};
pub use vector::{
    angle_between, circle_param_from_tangent, CircleParameter, RationalUnitVector3,
    RationalVector3, RealVector3, VectorError,
};
