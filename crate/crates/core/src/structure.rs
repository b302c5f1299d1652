//! Separation, trees, block graphs and the resistance characterizations.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{ConductanceGraph, Path, VertexId, WeightedGraph};
use crate::metric::{all_pairs_metric_with, MetricTable};
use crate::resistance::resistance_matrix_with;
use crate::tolerance::TAU_EQ;
use crate::weight::ExtendedWeight;

/// Witness that every path from `x` to `z` passes through `separator`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationCertificate {
    pub separator: VertexId,
    pub side_x: BTreeSet<VertexId>,
    pub side_z: BTreeSet<VertexId>,
    pub verified: bool,
}

impl SeparationCertificate {
    /// Disjoint sides, separator on neither, no edge across.
    pub fn check(&self, b: &ConductanceGraph) -> bool {
        self.side_x.is_disjoint(&self.side_z)
            && !self.side_x.contains(&self.separator)
            && !self.side_z.contains(&self.separator)
            && self.side_x.iter().all(|&v| self.side_z.iter().all(|&w| !b.is_edge(v, w)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Separation {
    Separated(SeparationCertificate),
    /// A path from `x` to `z` avoiding the candidate separator.
    NotSeparated { witness: Path },
}

impl Separation {
    pub fn is_separated(&self) -> bool {
        matches!(self, Separation::Separated(_))
    }
}

/// Breadth-first search from `start` that never enters `removed`.
/// Returns the parent array; `usize::MAX` marks unreached vertices.
fn reach_avoiding(b: &ConductanceGraph, start: VertexId, removed: Option<VertexId>) -> Vec<usize> {
    let mut parent = vec![usize::MAX; b.n()];
    parent[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for (u, _) in b.neighbors(v) {
            if parent[u] == usize::MAX && Some(u) != removed {
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    parent
}

fn reached(parent: &[usize]) -> BTreeSet<VertexId> {
    (0..parent.len()).filter(|&v| parent[v] != usize::MAX).collect()
}

/// Whether deleting `y` disconnects `x` from `z`.
pub fn separates(b: &ConductanceGraph, y: VertexId, x: VertexId, z: VertexId) -> Result<Separation> {
    for v in [x, y, z] {
        b.check_vertex(v)?;
    }
    if x == y || y == z || x == z {
        return Err(Error::NotDistinct);
    }
    if reach_avoiding(b, x, None)[z] == usize::MAX {
        return Err(Error::Disconnected);
    }
    let from_x = reach_avoiding(b, x, Some(y));
    if from_x[z] != usize::MAX {
        let mut walk = vec![z];
        let mut v = z;
        while v != x {
            v = from_x[v];
            walk.push(v);
        }
        walk.reverse();
        return Ok(Separation::NotSeparated {
            witness: Path::new(walk).expect("BFS tree paths are injective"),
        });
    }
    let mut cert = SeparationCertificate {
        separator: y,
        side_x: reached(&from_x),
        side_z: reached(&reach_avoiding(b, z, Some(y))),
        verified: false,
    };
    cert.verified = cert.check(b);
    Ok(Separation::Separated(cert))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleReport {
    /// `R(x, z)`.
    pub lhs: f64,
    /// `R(x, y) + R(y, z)`.
    pub rhs: f64,
    pub equal: bool,
    pub separated: bool,
    pub consistent: bool,
}

impl TriangleReport {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

pub fn check_triangle_equality(b: &ConductanceGraph, x: VertexId, y: VertexId, z: VertexId, tol: f64) -> Result<TriangleReport> {
    let r = resistance_matrix_with(b, Execution::default());
    check_triangle_equality_in(b, &r, x, y, z, tol)
}

/// As [`check_triangle_equality`] with a precomputed resistance table.
pub fn check_triangle_equality_in(
    b: &ConductanceGraph,
    r: &MetricTable,
    x: VertexId,
    y: VertexId,
    z: VertexId,
    tol: f64,
) -> Result<TriangleReport> {
    let separated = separates(b, y, x, z)?.is_separated();
    let lhs = r.get(x, z).value();
    let rhs = r.get(x, y).value() + r.get(y, z).value();
    let equal = ExtendedWeight::from_f64(lhs).approx_eq(ExtendedWeight::from_f64(rhs), tol);
    Ok(TriangleReport {
        lhs,
        rhs,
        equal,
        separated,
        consistent: equal == separated,
    })
}

/// Connected with exactly `n - 1` edges.
pub fn is_tree(b: &ConductanceGraph) -> bool {
    b.n() > 0 && b.is_connected() && b.edge_count() == b.n() - 1
}

/// Vertex sets of the biconnected components. Isolated vertices form
/// singleton blocks. Iterative, so deep graphs do not grow the call stack.
pub fn biconnected_blocks(b: &ConductanceGraph) -> Vec<Vec<VertexId>> {
    let n = b.n();
    let adj: Vec<Vec<VertexId>> = (0..n).map(|v| b.neighbors(v).map(|(u, _)| u).collect()).collect();
    let unset = usize::MAX;
    let mut disc = vec![unset; n];
    let mut low = vec![0; n];
    let mut clock = 0;
    let mut blocks = Vec::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for root in 0..n {
        if disc[root] != unset {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        if adj[root].is_empty() {
            blocks.push(vec![root]);
            continue;
        }
        // (vertex, parent, next neighbor index)
        let mut stack = vec![(root, unset, 0)];
        while let Some(frame) = stack.last_mut() {
            let (v, parent) = (frame.0, frame.1);
            if frame.2 < adj[v].len() {
                let u = adj[v][frame.2];
                frame.2 += 1;
                if u == parent {
                    continue;
                }
                if disc[u] == unset {
                    edges.push((v, u));
                    disc[u] = clock;
                    low[u] = clock;
                    clock += 1;
                    stack.push((u, v, 0));
                } else if disc[u] < disc[v] {
                    edges.push((v, u));
                    low[v] = low[v].min(disc[u]);
                }
                continue;
            }
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    let mut block = BTreeSet::new();
                    while let Some(e) = edges.pop() {
                        block.insert(e.0);
                        block.insert(e.1);
                        if e == (p, v) {
                            break;
                        }
                    }
                    blocks.push(block.into_iter().collect());
                }
            }
        }
    }
    blocks.sort();
    blocks
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockGraphReport {
    pub is_block_graph: bool,
    pub blocks: Vec<Vec<VertexId>>,
    /// First block that is not a clique.
    pub offending: Option<Vec<VertexId>>,
    /// Always true for finite graphs; the characterization assumes it.
    pub locally_finite: bool,
}

/// Block graph iff every biconnected component is a clique.
pub fn is_block_graph(b: &ConductanceGraph) -> Result<BlockGraphReport> {
    if !b.is_connected() {
        return Err(Error::Disconnected);
    }
    let blocks = biconnected_blocks(b);
    let offending = blocks
        .iter()
        .find(|blk| blk.iter().enumerate().any(|(i, &u)| blk[i + 1..].iter().any(|&v| !b.is_edge(u, v))))
        .cloned();
    Ok(BlockGraphReport {
        is_block_graph: offending.is_none(),
        blocks,
        offending,
        locally_finite: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compatibility {
    Compatible,
    Incompatible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricMismatch {
    pub x: VertexId,
    pub y: VertexId,
    pub path_metric: ExtendedWeight,
    pub resistance: ExtendedWeight,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityCertificate {
    pub verdict: Compatibility,
    /// `w = R` on edges, `∞` elsewhere; present iff compatible.
    pub weight: Option<WeightedGraph>,
    pub counterexample: Option<MetricMismatch>,
}

pub fn compatible_resistance_weight(b: &ConductanceGraph) -> Result<CompatibilityCertificate> {
    compatible_resistance_weight_with(b, Execution::default())
}

/// Restricts `R` to the edges of `b` and compares the induced path metric
/// with `R`.
pub fn compatible_resistance_weight_with(b: &ConductanceGraph, exec: Execution) -> Result<CompatibilityCertificate> {
    if !b.is_connected() {
        return Err(Error::Disconnected);
    }
    let r = resistance_matrix_with(b, exec);
    let mut w = WeightedGraph::with_labels(b.labels().clone());
    for (x, y, _) in b.edges() {
        w.set_weight(x, y, r.get(x, y))?;
    }
    let d = all_pairs_metric_with(&w, exec);
    Ok(match d.first_mismatch(&r, TAU_EQ) {
        None => CompatibilityCertificate {
            verdict: Compatibility::Compatible,
            weight: Some(w),
            counterexample: None,
        },
        Some((x, y)) => CompatibilityCertificate {
            verdict: Compatibility::Incompatible,
            weight: None,
            counterexample: Some(MetricMismatch {
                x,
                y,
                path_metric: d.get(x, y),
                resistance: r.get(x, y),
            }),
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeTheoremReport {
    pub is_tree: bool,
    pub metrics_equal: bool,
    pub consistent: bool,
    /// First pair where `R` and `δ_{1/b}` differ.
    pub mismatch: Option<MetricMismatch>,
}

pub fn check_tree_theorem(b: &ConductanceGraph, tol: f64) -> Result<TreeTheoremReport> {
    check_tree_theorem_with(b, tol, Execution::default())
}

pub fn check_tree_theorem_with(b: &ConductanceGraph, tol: f64, exec: Execution) -> Result<TreeTheoremReport> {
    if !b.is_connected() {
        return Err(Error::Disconnected);
    }
    let r = resistance_matrix_with(b, exec);
    let d = all_pairs_metric_with(&b.inverse_weights(), exec);
    let mismatch = d.first_mismatch(&r, tol).map(|(x, y)| MetricMismatch {
        x,
        y,
        path_metric: d.get(x, y),
        resistance: r.get(x, y),
    });
    let tree = is_tree(b);
    Ok(TreeTheoremReport {
        is_tree: tree,
        metrics_equal: mismatch.is_none(),
        consistent: tree == mismatch.is_none(),
        mismatch,
    })
}
