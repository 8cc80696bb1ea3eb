use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vector::{RationalUnitVector3, RationalVector3, RealVector3};

pub const DEFAULT_REAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vector set is empty")]
    Empty,
    #[error("vector {0} is zero and has no direction")]
    ZeroVector(usize),
    #[error("tolerance is only meaningful for real-valued vector sets")]
    ToleranceOnRational,
    #[error("tolerance {0} must be finite and non-negative")]
    BadTolerance(f64),
    #[error("vector set mixes rational and real entries")]
    MixedField,
}

/// Input to [`build_graph`]. Rational sets may hold any nonzero vectors; only
/// their directions matter.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorSet {
    Rational(Vec<RationalVector3>),
    Real(Vec<RealVector3>),
}

/// One vector of a set whose field has not been checked yet.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorEntry {
    Rational(RationalVector3),
    Real(RealVector3),
}

impl VectorSet {
    pub fn from_units(vectors: impl IntoIterator<Item = RationalUnitVector3>) -> Self {
        VectorSet::Rational(
            vectors
                .into_iter()
                .map(RationalUnitVector3::into_vector)
                .collect(),
        )
    }

    /// Rejects sets that mix rational and real entries.
    pub fn from_entries(entries: Vec<VectorEntry>) -> Result<Self, GraphError> {
        match entries.first() {
            None => Err(GraphError::Empty),
            Some(VectorEntry::Rational(_)) => entries
                .into_iter()
                .map(|e| match e {
                    VectorEntry::Rational(v) => Ok(v),
                    VectorEntry::Real(_) => Err(GraphError::MixedField),
                })
                .collect::<Result<_, _>>()
                .map(VectorSet::Rational),
            Some(VectorEntry::Real(_)) => entries
                .into_iter()
                .map(|e| match e {
                    VectorEntry::Real(v) => Ok(v),
                    VectorEntry::Rational(_) => Err(GraphError::MixedField),
                })
                .collect::<Result<_, _>>()
                .map(VectorSet::Real),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            VectorSet::Rational(v) => v.len(),
            VectorSet::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Vertices {
    Rational(Vec<RationalVector3>),
    Real(Vec<RealVector3>),
}

impl Vertices {
    pub fn len(&self) -> usize {
        match self {
            Vertices::Rational(v) => v.len(),
            Vertices::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Vertices are sign-canonical directions; edges join orthogonal vertices;
/// contexts are mutually orthogonal triples.
#[derive(Clone, Debug)]
pub struct OrthogonalityGraph {
    vertices: Vertices,
    input_to_vertex: Vec<usize>,
    edges: Vec<(usize, usize)>,
    contexts: Vec<[usize; 3]>,
    adjacency: Vec<Vec<usize>>,
    vertex_contexts: Vec<Vec<usize>>,
}

/// Summary of a graph, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub contexts: usize,
    pub vertex_of_input: Vec<usize>,
}

pub fn build_graph(
    set: &VectorSet,
    tolerance: Option<f64>,
) -> Result<OrthogonalityGraph, GraphError> {
    if set.is_empty() {
        return Err(GraphError::Empty);
    }
    match set {
        VectorSet::Rational(vs) => {
            if tolerance.is_some() {
                return Err(GraphError::ToleranceOnRational);
            }
            let mut vertices: Vec<RationalVector3> = Vec::new();
            let mut input_to_vertex = Vec::with_capacity(vs.len());
            for (i, v) in vs.iter().enumerate() {
                if v.is_zero() {
                    return Err(GraphError::ZeroVector(i));
                }
                let c = v.sign_canonical();
                let idx = match vertices.iter().position(|u| u == &c || u.is_parallel(&c)) {
                    Some(idx) => idx,
                    None => {
                        vertices.push(c);
                        vertices.len() - 1
                    }
                };
                input_to_vertex.push(idx);
            }
            let n = vertices.len();
            let orthogonal = |i: usize, j: usize| vertices[i].dot(&vertices[j]).is_zero();
            let edges = collect_edges(n, orthogonal);
            Ok(OrthogonalityGraph::assemble(
                Vertices::Rational(vertices),
                input_to_vertex,
                edges,
            ))
        }
        VectorSet::Real(vs) => {
            let tol = tolerance.unwrap_or(DEFAULT_REAL_TOLERANCE);
            if !tol.is_finite() || tol < 0.0 {
                return Err(GraphError::BadTolerance(tol));
            }
            let mut vertices: Vec<RealVector3> = Vec::new();
            let mut input_to_vertex = Vec::with_capacity(vs.len());
            for (i, v) in vs.iter().enumerate() {
                let u = v.normalized().map_err(|_| GraphError::ZeroVector(i))?;
                let c = u.sign_canonical(tol);
                let idx = match vertices.iter().position(|w| w.cross(&c).norm() <= tol) {
                    Some(idx) => idx,
                    None => {
                        vertices.push(c);
                        vertices.len() - 1
                    }
                };
                input_to_vertex.push(idx);
            }
            let n = vertices.len();
            let orthogonal = |i: usize, j: usize| vertices[i].dot(&vertices[j]).abs() <= tol;
            let edges = collect_edges(n, orthogonal);
            Ok(OrthogonalityGraph::assemble(
                Vertices::Real(vertices),
                input_to_vertex,
                edges,
            ))
        }
    }
}

fn collect_edges(n: usize, orthogonal: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if orthogonal(i, j) {
                edges.push((i, j));
            }
        }
    }
    edges
}

impl OrthogonalityGraph {
    fn assemble(
        vertices: Vertices,
        input_to_vertex: Vec<usize>,
        edges: Vec<(usize, usize)>,
    ) -> Self {
        let n = vertices.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let mut contexts = Vec::new();
        for &(i, j) in &edges {
            for &k in &adjacency[j] {
                if k > j && adjacency[i].binary_search(&k).is_ok() {
                    contexts.push([i, j, k]);
                }
            }
        }
        contexts.sort_unstable();
        let mut vertex_contexts = vec![Vec::new(); n];
        for (ci, ctx) in contexts.iter().enumerate() {
            for &v in ctx {
                vertex_contexts[v].push(ci);
            }
        }
        OrthogonalityGraph {
            vertices,
            input_to_vertex,
            edges,
            contexts,
            adjacency,
            vertex_contexts,
        }
    }

    /// Graph on `n` abstract vertices with the given edges; contexts are the
    /// triangles. Used for synthetic corpora in tests and benchmarks.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> = edges
            .into_iter()
            .filter(|(a, b)| a != b && *a < n && *b < n)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let placeholder = vec![RealVector3::new(0.0, 0.0, 0.0); n];
        Self::assemble(
            Vertices::Real(placeholder),
            (0..n).collect(),
            set.into_iter().collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn vertices(&self) -> &Vertices {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contexts(&self) -> &[[usize; 3]] {
        &self.contexts
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Indices into [`Self::contexts`] of the contexts containing `v`.
    pub fn contexts_of(&self, v: usize) -> &[usize] {
        &self.vertex_contexts[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn has_context(&self, ctx: &[usize; 3]) -> bool {
        let mut sorted = *ctx;
        sorted.sort_unstable();
        self.contexts.binary_search(&sorted).is_ok()
    }

    /// Vertex index of the `i`-th input vector.
    pub fn vertex_of_input(&self, i: usize) -> Option<usize> {
        self.input_to_vertex.get(i).copied()
    }

    pub fn summary(&self) -> GraphSummary {
        GraphSummary {
            vertices: self.vertex_count(),
            edges: self.edges.len(),
            contexts: self.contexts.len(),
            vertex_of_input: self.input_to_vertex.clone(),
        }
    }
}
