//! The rational nine-vector obstruction family and the ε-perturbed
//! eight-vector configuration used against dense colorable sets.

mod ck;
mod family;

use thiserror::Error;

use crate::rational::Rational;

pub use ck::{
    build_ck_configuration, ideal_a, ideal_b, CkConfiguration, LeakDot, CK_NAMES,
    LEAK_ANGLE_FACTOR, MAX_CK_EPSILON,
};
pub use family::{
    build_nine_vectors, family_params, random_family_params, validate_nine, ExactCheck,
    FamilyParameters, FamilySpec, NineVectorSet, NINE_NAMES, NINE_ORTHOGONALITIES, PAPER_COSINES,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("irrational parameter: {quantity} has non-square radicand {radicand}")]
    IrrationalParameter {
        quantity: String,
        radicand: Rational,
    },
    #[error("{name} = {value} is outside [-1, 1]")]
    OutOfRange { name: String, value: Rational },
    #[error("normalizer undefined: cA = 0 and sA·cD = 0")]
    DegenerateNormalizer,
    #[error("epsilon {0} outside [0, 0.1)")]
    EpsilonOutOfRange(f64),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
