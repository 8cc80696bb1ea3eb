//! Orthogonality graphs, Kochen-Specker coloring search, and the parity
//! coloring of the rational sphere.

mod graph;
mod meyer;
mod search;

pub use crate::frame::{random_rational_frame, rational_frame_from_quaternion};
pub use graph::{
    build_graph, GraphError, GraphSummary, OrthogonalityGraph, VectorEntry, VectorSet, Vertices,
    DEFAULT_REAL_TOLERANCE,
};
pub use meyer::{meyer_color, meyer_value, primitive_integer_rep, Axis, PrimitiveIntegerRep};
pub use search::{
    count_colorings, count_colorings_with, find_ks_coloring, find_ks_coloring_with,
    verify_refutation, verify_witness, CertificateError, ColorabilityResult, Coloring, Conflict,
    PartialColoring, Reason, Refutation, RefutationEnd, Rules, SearchError, Step,
    MAX_BRUTE_FORCE_VERTICES,
};
