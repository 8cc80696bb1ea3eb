//! Fixtures shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use kscheck::coloring::{
    build_graph, count_colorings_with, find_ks_coloring_with, random_rational_frame,
    verify_refutation, verify_witness, OrthogonalityGraph, PartialColoring, Rules, VectorSet,
};
use kscheck::constructions::{build_nine_vectors, random_family_params, FamilyParameters};
use kscheck::vector::RationalVector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Case {
    pub name: String,
    pub graph: OrthogonalityGraph,
    pub partial: PartialColoring,
    pub rules: Rules,
}

/// Assigns bit i of `mask` to input vector i, for i in {0, 1, 2}.
pub fn abc_partial(graph: &OrthogonalityGraph, mask: u8) -> PartialColoring {
    (0..3).fold(PartialColoring::new(), |p, i| {
        p.with(graph.vertex_of_input(i).unwrap(), mask >> i & 1 == 1)
    })
}

/// Graphs of at most 15 vertices: the nine-vector set under all eight
/// assignments of {A, B, C}, small named graphs, random abstract graphs,
/// unions of exact rational frames, and random nine-vector families.
pub fn oracle_corpus() -> Vec<Case> {
    let mut cases = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0_5105);
    let strict = Rules::default();

    let nine = build_graph(
        &build_nine_vectors(&FamilyParameters::paper())
            .unwrap()
            .to_vector_set(),
        None,
    )
    .unwrap();
    for mask in 0..8u8 {
        cases.push(Case {
            name: format!(
                "nine-vector set, (A,B,C) = ({},{},{})",
                mask & 1,
                mask >> 1 & 1,
                mask >> 2 & 1
            ),
            graph: nine.clone(),
            partial: abc_partial(&nine, mask),
            rules: strict,
        });
    }

    let named = [
        ("triad", 3, vec![(0, 1), (1, 2), (0, 2)]),
        ("single edge", 2, vec![(0, 1)]),
        (
            "K4",
            4,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        ),
        (
            "two triads sharing a vertex",
            5,
            vec![(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)],
        ),
        ("5-cycle", 5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
    ];
    for (name, n, edges) in named {
        for rules in [strict, Rules { pair_rule: false }] {
            cases.push(Case {
                name: format!("{name} (pair rule {})", rules.pair_rule),
                graph: OrthogonalityGraph::from_edges(n, edges.clone()),
                partial: PartialColoring::new(),
                rules,
            });
        }
    }

    for i in 0..30 {
        let n = rng.random_range(3..=15);
        let p = rng.random_range(0.2..0.6);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.random_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let mut partial = PartialColoring::new();
        for _ in 0..rng.random_range(0..3) {
            partial = partial.with(rng.random_range(0..n), rng.random_bool(0.5));
        }
        cases.push(Case {
            name: format!("random graph {i} (n = {n})"),
            graph: OrthogonalityGraph::from_edges(n, edges),
            partial,
            rules: if i % 5 == 4 {
                Rules { pair_rule: false }
            } else {
                strict
            },
        });
    }

    for i in 0..10 {
        let frames = rng.random_range(2..=4);
        let mut vectors: Vec<RationalVector3> = Vec::new();
        for _ in 0..frames {
            vectors.extend(
                random_rational_frame(&mut rng, 3)
                    .into_iter()
                    .map(|v| v.into_vector()),
            );
        }
        vectors.truncate(15);
        let graph = build_graph(&VectorSet::Rational(vectors), None).unwrap();
        let partial = PartialColoring::new().with(0, true);
        cases.push(Case {
            name: format!("union of {frames} rational frames #{i}"),
            graph,
            partial,
            rules: strict,
        });
    }

    for i in 0..6 {
        let params = random_family_params(&mut rng, 12);
        let graph =
            build_graph(&build_nine_vectors(&params).unwrap().to_vector_set(), None).unwrap();
        let mask = rng.random_range(0..8u8);
        let partial = abc_partial(&graph, mask);
        cases.push(Case {
            name: format!("random nine-vector family #{i}, mask {mask}"),
            graph,
            partial,
            rules: strict,
        });
    }
    cases
}

/// Runs the search and the exhaustive count on one case; returns
/// (search says colorable, count, certificate or witness replayed).
pub fn compare(case: &Case) -> (bool, u64, bool) {
    let result = find_ks_coloring_with(&case.graph, &case.partial, case.rules).unwrap();
    let count = count_colorings_with(&case.graph, &case.partial, case.rules).unwrap();
    let replayed = match (result.witness(), result.certificate()) {
        (Some(w), _) => verify_witness(&case.graph, &case.partial, case.rules, w).is_ok(),
        (None, Some(r)) => verify_refutation(&case.graph, &case.partial, case.rules, r).is_ok(),
        (None, None) => false,
    };
    (result.is_colorable(), count, replayed)
}
