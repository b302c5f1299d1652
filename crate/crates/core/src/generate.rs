//! Small graph constructors and seeded random generators used by the test
//! suites, the benches and the CLI examples.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{ConductanceGraph, VertexId, WeightedGraph};
use crate::weight::ExtendedWeight;

pub fn weighted_from_edges(n: usize, edges: &[(VertexId, VertexId, f64)]) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    for &(a, b, w) in edges {
        g.set_weight(a, b, ExtendedWeight::from_f64(w)).expect("valid edge");
    }
    g
}

pub fn conductance_from_edges(n: usize, edges: &[(VertexId, VertexId, f64)]) -> ConductanceGraph {
    let mut g = ConductanceGraph::new(n);
    for &(a, b, c) in edges {
        g.set_conductance(a, b, c).expect("valid edge");
    }
    g
}

fn path_edges(n: usize) -> Vec<(VertexId, VertexId, f64)> {
    (1..n).map(|i| (i - 1, i, 1.0)).collect()
}

fn cycle_edges(n: usize) -> Vec<(VertexId, VertexId, f64)> {
    let mut e = path_edges(n);
    if n >= 3 {
        e.push((0, n - 1, 1.0));
    }
    e
}

fn star_edges(leaves: usize) -> Vec<(VertexId, VertexId, f64)> {
    (1..=leaves).map(|i| (0, i, 1.0)).collect()
}

fn complete_edges(n: usize) -> Vec<(VertexId, VertexId, f64)> {
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            e.push((a, b, 1.0));
        }
    }
    e
}

pub fn unit_path(n: usize) -> ConductanceGraph {
    conductance_from_edges(n, &path_edges(n))
}

pub fn unit_cycle(n: usize) -> ConductanceGraph {
    conductance_from_edges(n, &cycle_edges(n))
}

/// Center 0 with leaves `1..=leaves`.
pub fn unit_star(leaves: usize) -> ConductanceGraph {
    conductance_from_edges(leaves + 1, &star_edges(leaves))
}

pub fn unit_complete(n: usize) -> ConductanceGraph {
    conductance_from_edges(n, &complete_edges(n))
}

pub fn unit_path_weights(n: usize) -> WeightedGraph {
    weighted_from_edges(n, &path_edges(n))
}

pub fn unit_cycle_weights(n: usize) -> WeightedGraph {
    weighted_from_edges(n, &cycle_edges(n))
}

pub fn unit_star_weights(leaves: usize) -> WeightedGraph {
    weighted_from_edges(leaves + 1, &star_edges(leaves))
}

/// Each pair independently gets a weight from `{0.1, 0.2, ..., 10.0}` with
/// probability `p_edge`, and `∞` otherwise.
pub fn random_weighted_graph<R: Rng>(rng: &mut R, n: usize, p_edge: f64) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p_edge) {
                let tenths: u32 = rng.gen_range(1..=100);
                g.set_weight(a, b, ExtendedWeight::from_f64(f64::from(tenths) / 10.0)).unwrap();
            }
        }
    }
    g
}

/// Like [`random_weighted_graph`] with integer weights in `1..=max_weight`.
pub fn random_integer_weighted_graph<R: Rng>(rng: &mut R, n: usize, p_edge: f64, max_weight: u32) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p_edge) {
                let w: u32 = rng.gen_range(1..=max_weight);
                g.set_weight(a, b, ExtendedWeight::from_f64(f64::from(w))).unwrap();
            }
        }
    }
    g
}

/// Uniformly shuffled labels attached along a random recursive tree, with
/// integer conductances in `1..=max_conductance`.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, max_conductance: u32) -> ConductanceGraph {
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    let mut g = ConductanceGraph::new(n);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let c: u32 = rng.gen_range(1..=max_conductance);
        g.set_conductance(order[i], parent, f64::from(c)).unwrap();
    }
    g
}

/// A random tree plus each remaining pair with probability `p_extra`.
pub fn random_connected_conductance<R: Rng>(
    rng: &mut R,
    n: usize,
    p_extra: f64,
    max_conductance: u32,
) -> ConductanceGraph {
    let mut g = random_tree(rng, n, max_conductance);
    for a in 0..n {
        for b in a + 1..n {
            if !g.is_edge(a, b) && rng.gen_bool(p_extra) {
                let c: u32 = rng.gen_range(1..=max_conductance);
                g.set_conductance(a, b, f64::from(c)).unwrap();
            }
        }
    }
    g
}

/// A connected graph with at least one cycle; needs `n >= 3`.
pub fn random_connected_non_tree<R: Rng>(rng: &mut R, n: usize, p_extra: f64, max_conductance: u32) -> ConductanceGraph {
    assert!(n >= 3, "a simple graph on fewer than 3 vertices has no cycle");
    let mut g = random_connected_conductance(rng, n, p_extra, max_conductance);
    if g.edge_count() == n - 1 {
        let missing: Vec<(VertexId, VertexId)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !g.is_edge(a, b))
            .collect();
        let &(a, b) = missing.choose(rng).expect("a tree on n >= 3 vertices misses some pair");
        let c: u32 = rng.gen_range(1..=max_conductance);
        g.set_conductance(a, b, f64::from(c)).unwrap();
    }
    g
}
