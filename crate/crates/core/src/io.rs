//! JSON file formats.
//!
//! Vector sets: `{"dimension": 3, "field": "rational" | "real", "vectors": [[x, y, z], ...]}`
//! where rational entries are strings `"p/q"` (JSON integers are accepted too)
//! and real entries are numbers.
//!
//! Partial assignments: `{"assignments": {"0": 1, "4": 0}}`, keyed by the
//! position of the vector in the input file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::coloring::{
    ColorabilityResult, GraphError, GraphSummary, OrthogonalityGraph, PartialColoring, Refutation,
    VectorEntry, VectorSet,
};
use crate::constructions::FamilySpec;
use crate::rational::Rational;
use crate::vector::{RationalVector3, RealVector3};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("only dimension 3 is supported, got {0}")]
    Dimension(usize),
    #[error("vector {index} has {len} components, expected 3")]
    Arity { index: usize, len: usize },
    #[error("vector {index}, component {component}: {detail}")]
    Entry {
        index: usize,
        component: usize,
        detail: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("partial assignment refers to vector {index} but the set has {len}")]
    PartialIndex { index: usize, len: usize },
    #[error("partial assignment value for vector {index} must be 0 or 1")]
    PartialValue { index: usize },
    #[error("partial assignment gives conflicting values to parallel vectors (vertex {vertex})")]
    PartialConflict { vertex: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Real,
}

#[derive(Deserialize)]
struct RawVectorSet {
    dimension: usize,
    field: Field,
    vectors: Vec<Vec<Value>>,
}

fn rational_entry(v: &Value) -> Result<Rational, String> {
    match v {
        Value::String(s) => s.parse().map_err(|e| format!("{e}")),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            n.to_string().parse().map_err(|e| format!("{e}"))
        }
        Value::Number(_) => Err(GraphError::MixedField.to_string()),
        other => Err(format!("expected a rational string, got {other}")),
    }
}

fn real_entry(v: &Value) -> Result<f64, String> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| format!("{n} is not representable")),
        Value::String(_) => Err(GraphError::MixedField.to_string()),
        other => Err(format!("expected a number, got {other}")),
    }
}

pub fn parse_vector_set(text: &str) -> Result<VectorSet, IoError> {
    let raw: RawVectorSet = serde_json::from_str(text)?;
    if raw.dimension != 3 {
        return Err(IoError::Dimension(raw.dimension));
    }
    let mut entries = Vec::with_capacity(raw.vectors.len());
    for (index, v) in raw.vectors.iter().enumerate() {
        if v.len() != 3 {
            return Err(IoError::Arity {
                index,
                len: v.len(),
            });
        }
        let wrap = |component: usize| {
            move |detail: String| IoError::Entry {
                index,
                component,
                detail,
            }
        };
        entries.push(match raw.field {
            Field::Rational => {
                let c = |k: usize| rational_entry(&v[k]).map_err(wrap(k));
                VectorEntry::Rational(RationalVector3::new(c(0)?, c(1)?, c(2)?))
            }
            Field::Real => {
                let c = |k: usize| real_entry(&v[k]).map_err(wrap(k));
                VectorEntry::Real(RealVector3::new(c(0)?, c(1)?, c(2)?))
            }
        });
    }
    Ok(VectorSet::from_entries(entries)?)
}

pub fn vector_set_to_json(set: &VectorSet) -> Value {
    let (field, vectors): (Field, Vec<Value>) = match set {
        VectorSet::Rational(vs) => (
            Field::Rational,
            vs.iter()
                .map(|v| {
                    Value::from(
                        v.components()
                            .map(|c| Value::String(c.to_string()))
                            .to_vec(),
                    )
                })
                .collect(),
        ),
        VectorSet::Real(vs) => (
            Field::Real,
            vs.iter()
                .map(|v| Value::from(v.to_array().to_vec()))
                .collect(),
        ),
    };
    serde_json::json!({ "dimension": 3, "field": field, "vectors": vectors })
}

#[derive(Deserialize)]
struct RawPartial {
    #[serde(default)]
    assignments: BTreeMap<usize, Value>,
}

/// Assignments keyed by input position, before mapping onto graph vertices.
pub fn parse_partial(text: &str) -> Result<BTreeMap<usize, bool>, IoError> {
    let raw: RawPartial = serde_json::from_str(text)?;
    raw.assignments
        .into_iter()
        .map(|(index, v)| {
            let value = match v {
                Value::Bool(b) => b,
                Value::Number(n) if n.as_u64() == Some(0) => false,
                Value::Number(n) if n.as_u64() == Some(1) => true,
                _ => return Err(IoError::PartialValue { index }),
            };
            Ok((index, value))
        })
        .collect()
}

pub fn partial_to_json(assignments: &BTreeMap<usize, bool>) -> Value {
    let m: serde_json::Map<String, Value> = assignments
        .iter()
        .map(|(k, &v)| (k.to_string(), Value::from(u8::from(v))))
        .collect();
    serde_json::json!({ "assignments": m })
}

/// Maps input positions onto graph vertices. Parallel inputs share a vertex
/// and must agree.
pub fn partial_for_graph(
    graph: &OrthogonalityGraph,
    by_input: &BTreeMap<usize, bool>,
) -> Result<PartialColoring, IoError> {
    let len = graph.summary().vertex_of_input.len();
    let mut partial = PartialColoring::new();
    for (&index, &value) in by_input {
        let vertex = graph
            .vertex_of_input(index)
            .ok_or(IoError::PartialIndex { index, len })?;
        if partial
            .assignments
            .insert(vertex, value)
            .is_some_and(|old| old != value)
        {
            return Err(IoError::PartialConflict { vertex });
        }
    }
    Ok(partial)
}

/// Output of a colorability check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorabilityReport {
    pub colorable: bool,
    /// One 0/1 per graph vertex.
    pub witness: Option<Vec<u8>>,
    pub certificate: Option<Refutation>,
    pub graph: GraphSummary,
}

impl ColorabilityReport {
    pub fn new(graph: &OrthogonalityGraph, result: &ColorabilityResult) -> Self {
        ColorabilityReport {
            colorable: result.is_colorable(),
            witness: result.witness().map(|w| w.as_bits()),
            certificate: result.certificate().cloned(),
            graph: graph.summary(),
        }
    }
}

pub fn parse_family(text: &str) -> Result<FamilySpec, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
