//! Complete search for {0,1} colorings under the Kochen-Specker rules.
//!
//! Rules: every context (orthogonal triad) holds exactly one 1; with the pair
//! rule enabled, no two orthogonal vertices are both 1 even when no third
//! vertex completes them to a context. Search is backtracking over unit
//! propagation. Infeasibility comes with a refutation tree that
//! [`verify_refutation`] replays independently of the search.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::graph::OrthogonalityGraph;

/// Largest graph accepted by [`count_colorings`].
pub const MAX_BRUTE_FORCE_VERTICES: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("vertex index {index} out of range for graph with {vertices} vertices")]
    InvalidVertex { index: usize, vertices: usize },
    #[error(
        "graph has {0} vertices; exhaustive counting supports at most {MAX_BRUTE_FORCE_VERTICES}"
    )]
    TooLarge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rules {
    /// Forbid two 1s on an orthogonal pair outside any context.
    pub pair_rule: bool,
}

impl Default for Rules {
    fn default() -> Self {
        Rules { pair_rule: true }
    }
}

/// Pre-assigned values, keyed by vertex index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialColoring {
    pub assignments: BTreeMap<usize, bool>,
}

impl PartialColoring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, vertex: usize, value: bool) -> Self {
        self.assignments.insert(vertex, value);
        self
    }

    fn check(&self, n: usize) -> Result<(), SearchError> {
        match self.assignments.keys().find(|&&i| i >= n) {
            Some(&index) => Err(SearchError::InvalidVertex { index, vertices: n }),
            None => Ok(()),
        }
    }
}

/// A total assignment satisfying every rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub values: Vec<bool>,
}

impl Coloring {
    pub fn as_bits(&self) -> Vec<u8> {
        self.values.iter().map(|&b| b as u8).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Reason {
    /// A 1 on `one` excludes its orthogonal partner.
    Excluded { one: usize },
    /// The other two members of `context` are 0.
    ContextCompletion { context: [usize; 3] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub vertex: usize,
    pub value: u8,
    #[serde(flatten)]
    pub reason: Reason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Conflict {
    /// Two orthogonal vertices both carry 1.
    PairBothOne { u: usize, v: usize },
    /// A context with no 1.
    ContextAllZero { context: [usize; 3] },
    /// A context with more than one 1 (only reported without the pair rule).
    ContextOverfull { context: [usize; 3] },
}

/// Refutation tree: forced steps, then either a violated rule or a split on
/// an unassigned vertex with both branches refuted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub steps: Vec<Step>,
    pub end: RefutationEnd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutationEnd {
    Conflict(Conflict),
    Split {
        vertex: usize,
        if_one: Box<Refutation>,
        if_zero: Box<Refutation>,
    },
}

impl Refutation {
    /// True when propagation alone reaches the contradiction.
    pub fn is_linear(&self) -> bool {
        matches!(self.end, RefutationEnd::Conflict(_))
    }

    /// Total number of forced steps in the tree.
    pub fn step_count(&self) -> usize {
        self.steps.len()
            + match &self.end {
                RefutationEnd::Conflict(_) => 0,
                RefutationEnd::Split {
                    if_one, if_zero, ..
                } => if_one.step_count() + if_zero.step_count(),
            }
    }

    pub fn leaf_count(&self) -> usize {
        match &self.end {
            RefutationEnd::Conflict(_) => 1,
            RefutationEnd::Split {
                if_one, if_zero, ..
            } => if_one.leaf_count() + if_zero.leaf_count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorabilityResult {
    Colorable(Coloring),
    Infeasible(Refutation),
}

impl ColorabilityResult {
    pub fn is_colorable(&self) -> bool {
        matches!(self, ColorabilityResult::Colorable(_))
    }

    pub fn witness(&self) -> Option<&Coloring> {
        match self {
            ColorabilityResult::Colorable(c) => Some(c),
            ColorabilityResult::Infeasible(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Refutation> {
        match self {
            ColorabilityResult::Colorable(_) => None,
            ColorabilityResult::Infeasible(r) => Some(r),
        }
    }
}

pub fn find_ks_coloring(
    graph: &OrthogonalityGraph,
    partial: &PartialColoring,
) -> Result<ColorabilityResult, SearchError> {
    find_ks_coloring_with(graph, partial, Rules::default())
}

pub fn find_ks_coloring_with(
    graph: &OrthogonalityGraph,
    partial: &PartialColoring,
    rules: Rules,
) -> Result<ColorabilityResult, SearchError> {
    partial.check(graph.vertex_count())?;
    let mut state = vec![None; graph.vertex_count()];
    let mut queue = VecDeque::new();
    for (&v, &value) in &partial.assignments {
        state[v] = Some(value);
        queue.push_back(v);
    }
    let search = Search { graph, rules };
    Ok(match search.solve(state, queue) {
        Ok(values) => ColorabilityResult::Colorable(Coloring { values }),
        Err(refutation) => ColorabilityResult::Infeasible(refutation),
    })
}

struct Search<'g> {
    graph: &'g OrthogonalityGraph,
    rules: Rules,
}

type State = Vec<Option<bool>>;

impl Search<'_> {
    fn solve(&self, mut state: State, queue: VecDeque<usize>) -> Result<Vec<bool>, Refutation> {
        let mut steps = Vec::new();
        if let Err(conflict) = self.propagate(&mut state, queue, &mut steps) {
            return Err(Refutation {
                steps,
                end: RefutationEnd::Conflict(conflict),
            });
        }
        let Some(vertex) = self.pick_branch_vertex(&state) else {
            return Ok(state
                .into_iter()
                .map(|v| v.expect("all assigned"))
                .collect());
        };
        let mut refutations = Vec::with_capacity(2);
        for value in [true, false] {
            let mut branch = state.clone();
            branch[vertex] = Some(value);
            match self.solve(branch, VecDeque::from([vertex])) {
                Ok(values) => return Ok(values),
                Err(r) => refutations.push(r),
            }
        }
        let if_zero = refutations.pop().expect("two branches");
        let if_one = refutations.pop().expect("two branches");
        Err(Refutation {
            steps,
            end: RefutationEnd::Split {
                vertex,
                if_one: Box::new(if_one),
                if_zero: Box::new(if_zero),
            },
        })
    }

    /// Vertices whose 1 excludes `v`: orthogonal neighbors under the pair
    /// rule, otherwise only context mates.
    fn excluders(&self, v: usize) -> Vec<usize> {
        if self.rules.pair_rule {
            self.graph.neighbors(v).to_vec()
        } else {
            let mut mates: Vec<usize> = self
                .graph
                .contexts_of(v)
                .iter()
                .flat_map(|&ci| self.graph.contexts()[ci])
                .filter(|&u| u != v)
                .collect();
            mates.sort_unstable();
            mates.dedup();
            mates
        }
    }

    fn propagate(
        &self,
        state: &mut State,
        mut queue: VecDeque<usize>,
        steps: &mut Vec<Step>,
    ) -> Result<(), Conflict> {
        while let Some(v) = queue.pop_front() {
            if state[v] == Some(true) {
                for u in self.excluders(v) {
                    match state[u] {
                        Some(true) => {
                            return Err(if self.rules.pair_rule {
                                Conflict::PairBothOne {
                                    u: v.min(u),
                                    v: v.max(u),
                                }
                            } else {
                                let ci = self
                                    .graph
                                    .contexts_of(v)
                                    .iter()
                                    .copied()
                                    .find(|&ci| self.graph.contexts()[ci].contains(&u))
                                    .expect("context mates share a context");
                                Conflict::ContextOverfull {
                                    context: self.graph.contexts()[ci],
                                }
                            })
                        }
                        Some(false) => {}
                        None => {
                            state[u] = Some(false);
                            steps.push(Step {
                                vertex: u,
                                value: 0,
                                reason: Reason::Excluded { one: v },
                            });
                            queue.push_back(u);
                        }
                    }
                }
            }
            for &ci in self.graph.contexts_of(v) {
                let context = self.graph.contexts()[ci];
                let zeros = context.iter().filter(|&&w| state[w] == Some(false)).count();
                let open: Vec<usize> = context
                    .iter()
                    .copied()
                    .filter(|&w| state[w].is_none())
                    .collect();
                if zeros == 3 {
                    return Err(Conflict::ContextAllZero { context });
                }
                if zeros == 2 && open.len() == 1 {
                    let w = open[0];
                    state[w] = Some(true);
                    steps.push(Step {
                        vertex: w,
                        value: 1,
                        reason: Reason::ContextCompletion { context },
                    });
                    queue.push_back(w);
                }
            }
        }
        Ok(())
    }

    /// Most constrained unassigned vertex: most contexts already touched by an
    /// assignment, then most contexts, then highest degree, then lowest index.
    fn pick_branch_vertex(&self, state: &State) -> Option<usize> {
        (0..state.len())
            .filter(|&v| state[v].is_none())
            .map(|v| {
                let ctxs = self.graph.contexts_of(v);
                let touched = ctxs
                    .iter()
                    .filter(|&&ci| {
                        self.graph.contexts()[ci]
                            .iter()
                            .any(|&w| state[w].is_some())
                    })
                    .count();
                let key = (touched, ctxs.len(), self.graph.neighbors(v).len());
                (key, std::cmp::Reverse(v))
            })
            .max()
            .map(|(_, std::cmp::Reverse(v))| v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("witness has {got} values for a graph with {expected} vertices")]
    WrongLength { got: usize, expected: usize },
    #[error("witness disagrees with the partial assignment at vertex {0}")]
    PartialMismatch(usize),
    #[error("witness violates {0:?}")]
    Violation(Conflict),
    #[error("step {index} assigns vertex {vertex}, which is already assigned")]
    AlreadyAssigned { index: usize, vertex: usize },
    #[error("step {index} (vertex {vertex}) is not justified by its stated rule")]
    Unjustified { index: usize, vertex: usize },
    #[error("claimed violation {0:?} does not hold")]
    FalseConflict(Conflict),
    #[error("split vertex {0} is invalid or already assigned")]
    BadSplit(usize),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Checks a witness against every rule and against the partial assignment.
pub fn verify_witness(
    graph: &OrthogonalityGraph,
    partial: &PartialColoring,
    rules: Rules,
    coloring: &Coloring,
) -> Result<(), CertificateError> {
    let n = graph.vertex_count();
    if coloring.values.len() != n {
        return Err(CertificateError::WrongLength {
            got: coloring.values.len(),
            expected: n,
        });
    }
    partial.check(n)?;
    for (&v, &value) in &partial.assignments {
        if coloring.values[v] != value {
            return Err(CertificateError::PartialMismatch(v));
        }
    }
    let f = &coloring.values;
    for &context in graph.contexts() {
        match context.iter().filter(|&&w| f[w]).count() {
            0 => {
                return Err(CertificateError::Violation(Conflict::ContextAllZero {
                    context,
                }))
            }
            1 => {}
            _ => {
                return Err(CertificateError::Violation(Conflict::ContextOverfull {
                    context,
                }))
            }
        }
    }
    if rules.pair_rule {
        for &(u, v) in graph.edges() {
            if f[u] && f[v] {
                return Err(CertificateError::Violation(Conflict::PairBothOne { u, v }));
            }
        }
    }
    Ok(())
}

/// Replays a refutation tree from the partial assignment, checking every
/// forced step and every claimed violation against the graph.
pub fn verify_refutation(
    graph: &OrthogonalityGraph,
    partial: &PartialColoring,
    rules: Rules,
    refutation: &Refutation,
) -> Result<(), CertificateError> {
    partial.check(graph.vertex_count())?;
    let mut state: State = vec![None; graph.vertex_count()];
    for (&v, &value) in &partial.assignments {
        state[v] = Some(value);
    }
    replay(graph, rules, state, refutation)
}

fn excludes(graph: &OrthogonalityGraph, rules: Rules, u: usize, v: usize) -> bool {
    if rules.pair_rule {
        graph.has_edge(u, v)
    } else {
        graph
            .contexts_of(u)
            .iter()
            .any(|&ci| graph.contexts()[ci].contains(&v))
    }
}

fn replay(
    graph: &OrthogonalityGraph,
    rules: Rules,
    mut state: State,
    r: &Refutation,
) -> Result<(), CertificateError> {
    let n = graph.vertex_count();
    for (index, step) in r.steps.iter().enumerate() {
        let vertex = step.vertex;
        if vertex >= n {
            return Err(CertificateError::Unjustified { index, vertex });
        }
        if state[vertex].is_some() {
            return Err(CertificateError::AlreadyAssigned { index, vertex });
        }
        let justified = match &step.reason {
            Reason::Excluded { one } => {
                step.value == 0
                    && *one < n
                    && state[*one] == Some(true)
                    && excludes(graph, rules, *one, vertex)
            }
            Reason::ContextCompletion { context } => {
                step.value == 1
                    && context.iter().all(|&w| w < n)
                    && graph.has_context(context)
                    && context.contains(&vertex)
                    && context
                        .iter()
                        .filter(|&&w| w != vertex)
                        .all(|&w| state[w] == Some(false))
            }
        };
        if !justified {
            return Err(CertificateError::Unjustified { index, vertex });
        }
        state[vertex] = Some(step.value == 1);
    }
    match &r.end {
        RefutationEnd::Conflict(conflict) => {
            let holds = match conflict {
                Conflict::PairBothOne { u, v } => {
                    rules.pair_rule
                        && *u < n
                        && *v < n
                        && graph.has_edge(*u, *v)
                        && state[*u] == Some(true)
                        && state[*v] == Some(true)
                }
                Conflict::ContextAllZero { context } => {
                    context.iter().all(|&w| w < n)
                        && graph.has_context(context)
                        && context.iter().all(|&w| state[w] == Some(false))
                }
                Conflict::ContextOverfull { context } => {
                    context.iter().all(|&w| w < n)
                        && graph.has_context(context)
                        && context.iter().filter(|&&w| state[w] == Some(true)).count() >= 2
                }
            };
            if holds {
                Ok(())
            } else {
                Err(CertificateError::FalseConflict(conflict.clone()))
            }
        }
        RefutationEnd::Split {
            vertex,
            if_one,
            if_zero,
        } => {
            if *vertex >= n || state[*vertex].is_some() {
                return Err(CertificateError::BadSplit(*vertex));
            }
            let mut one = state.clone();
            one[*vertex] = Some(true);
            replay(graph, rules, one, if_one)?;
            state[*vertex] = Some(false);
            replay(graph, rules, state, if_zero)
        }
    }
}

/// Exhaustive count of total colorings extending `partial`; the oracle for
/// [`find_ks_coloring`].
pub fn count_colorings(
    graph: &OrthogonalityGraph,
    partial: &PartialColoring,
) -> Result<u64, SearchError> {
    count_colorings_with(graph, partial, Rules::default())
}

pub fn count_colorings_with(
    graph: &OrthogonalityGraph,
    partial: &PartialColoring,
    rules: Rules,
) -> Result<u64, SearchError> {
    let n = graph.vertex_count();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(SearchError::TooLarge(n));
    }
    partial.check(n)?;
    let fixed_mask: u32 = partial.assignments.keys().map(|&v| 1u32 << v).sum();
    let fixed_bits: u32 = partial
        .assignments
        .iter()
        .filter(|(_, &b)| b)
        .map(|(&v, _)| 1u32 << v)
        .sum();
    let context_masks: Vec<u32> = graph
        .contexts()
        .iter()
        .map(|c| c.iter().map(|&v| 1u32 << v).sum())
        .collect();
    let edge_masks: Vec<u32> = if rules.pair_rule {
        graph
            .edges()
            .iter()
            .map(|&(u, v)| (1u32 << u) | (1u32 << v))
            .collect()
    } else {
        Vec::new()
    };
    let mut count = 0u64;
    for mask in 0u32..(1u32 << n) {
        if mask & fixed_mask != fixed_bits {
            continue;
        }
        if context_masks.iter().any(|&c| (mask & c).count_ones() != 1) {
            continue;
        }
        if edge_masks.iter().any(|&e| e & !mask == 0) {
            continue;
        }
        count += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::graph::{build_graph, VectorSet};
    use crate::vector::RationalUnitVector3;

    fn triad() -> OrthogonalityGraph {
        build_graph(
            &VectorSet::from_units([
                RationalUnitVector3::e_x(),
                RationalUnitVector3::e_y(),
                RationalUnitVector3::e_z(),
            ]),
            None,
        )
        .unwrap()
    }

    /// Abstract nine-vector skeleton: 0=A 1=B 2=C 3..8 = v1..v6.
    fn skeleton() -> OrthogonalityGraph {
        OrthogonalityGraph::from_edges(
            9,
            [
                (0, 3),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 5),
                (3, 7),
                (5, 7),
                (4, 6),
                (4, 8),
                (6, 8),
                (7, 8),
            ],
        )
    }

    #[test]
    fn triad_has_three_colorings() {
        let g = triad();
        assert_eq!(count_colorings(&g, &PartialColoring::new()).unwrap(), 3);
        let r = find_ks_coloring(&g, &PartialColoring::new()).unwrap();
        let w = r.witness().unwrap();
        assert_eq!(w.values.iter().filter(|&&b| b).count(), 1);
    }

    #[test]
    fn bare_pair_counts() {
        let g = OrthogonalityGraph::from_edges(2, [(0, 1)]);
        assert_eq!(count_colorings(&g, &PartialColoring::new()).unwrap(), 3);
        let relaxed = Rules { pair_rule: false };
        assert_eq!(
            count_colorings_with(&g, &PartialColoring::new(), relaxed).unwrap(),
            4
        );
    }

    #[test]
    fn skeleton_refutation_is_pure_propagation() {
        let g = skeleton();
        let partial = PartialColoring::new()
            .with(0, true)
            .with(1, true)
            .with(2, true);
        let r = find_ks_coloring(&g, &partial).unwrap();
        let cert = r.certificate().expect("infeasible");
        assert!(cert.is_linear());
        assert!(cert.steps.len() >= 5);
        verify_refutation(&g, &partial, Rules::default(), cert).unwrap();
        assert_eq!(count_colorings(&g, &partial).unwrap(), 0);
    }

    #[test]
    fn skeleton_without_pair_rule_is_colorable() {
        // v5 and v6 are a bare pair; dropping the pair rule removes the obstruction
        let g = skeleton();
        let partial = PartialColoring::new()
            .with(0, true)
            .with(1, true)
            .with(2, true);
        let rules = Rules { pair_rule: false };
        let r = find_ks_coloring_with(&g, &partial, rules).unwrap();
        verify_witness(&g, &partial, rules, r.witness().unwrap()).unwrap();
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let g = skeleton();
        let partial = PartialColoring::new()
            .with(0, true)
            .with(1, true)
            .with(2, true);
        let cert = find_ks_coloring(&g, &partial)
            .unwrap()
            .certificate()
            .unwrap()
            .clone();

        let mut dropped = cert.clone();
        dropped.steps.remove(0);
        assert!(verify_refutation(&g, &partial, Rules::default(), &dropped).is_err());

        let mut flipped = cert.clone();
        flipped.steps[0].value ^= 1;
        assert!(verify_refutation(&g, &partial, Rules::default(), &flipped).is_err());

        // Same trace, weaker premise.
        let weaker = PartialColoring::new().with(0, true).with(1, true);
        assert!(verify_refutation(&g, &weaker, Rules::default(), &cert).is_err());
    }

    #[test]
    fn branching_refutation_replays() {
        // K4: every triangle is a context and every vertex lies in three of
        // them; there is no exactly-one assignment.
        let g = OrthogonalityGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let r = find_ks_coloring(&g, &PartialColoring::new()).unwrap();
        let cert = r.certificate().expect("K4 is uncolorable");
        assert!(!cert.is_linear());
        verify_refutation(&g, &PartialColoring::new(), Rules::default(), cert).unwrap();
        assert_eq!(count_colorings(&g, &PartialColoring::new()).unwrap(), 0);
    }

    #[test]
    fn contradictory_partial_is_reported() {
        let g = triad();
        let partial = PartialColoring::new().with(0, true).with(1, true);
        let r = find_ks_coloring(&g, &partial).unwrap();
        let cert = r.certificate().unwrap();
        assert_eq!(
            cert.end,
            RefutationEnd::Conflict(Conflict::PairBothOne { u: 0, v: 1 })
        );
        verify_refutation(&g, &partial, Rules::default(), cert).unwrap();
    }

    #[test]
    fn witness_extends_partial() {
        let g = triad();
        let partial = PartialColoring::new().with(2, true);
        let w = find_ks_coloring(&g, &partial)
            .unwrap()
            .witness()
            .unwrap()
            .clone();
        assert_eq!(w.values, vec![false, false, true]);
        assert!(verify_witness(
            &g,
            &PartialColoring::new().with(2, false),
            Rules::default(),
            &w
        )
        .is_err());
    }

    #[test]
    fn bad_indices_and_sizes() {
        let g = triad();
        let partial = PartialColoring::new().with(7, true);
        assert_eq!(
            find_ks_coloring(&g, &partial).unwrap_err(),
            SearchError::InvalidVertex {
                index: 7,
                vertices: 3
            }
        );
        let big = OrthogonalityGraph::from_edges(26, []);
        assert_eq!(
            count_colorings(&big, &PartialColoring::new()).unwrap_err(),
            SearchError::TooLarge(26)
        );
    }

    #[test]
    fn certificate_serializes() {
        let g = skeleton();
        let partial = PartialColoring::new()
            .with(0, true)
            .with(1, true)
            .with(2, true);
        let cert = find_ks_coloring(&g, &partial)
            .unwrap()
            .certificate()
            .unwrap()
            .clone();
        let json = serde_json::to_string(&cert).unwrap();
        let back: Refutation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }
}
