//! Path pseudo-metrics `δ_w`, geodesics and the geodesic weight `w_δ`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{Diagnostic, Labels, Path, Rule, VertexId, WeightedGraph};
use crate::tolerance::{TAU_EQ, TAU_GEO};
use crate::weight::{approx_eq_f64, ExtendedWeight};

/// Symmetric all-pairs table of extended values.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTable {
    labels: Labels,
    d: Vec<ExtendedWeight>,
}

impl MetricTable {
    /// Builds a table from a full row-major matrix. Rejects wrong sizes, a
    /// nonzero diagonal and asymmetric entries.
    pub fn from_matrix(labels: Labels, d: Vec<ExtendedWeight>) -> Result<Self> {
        let n = labels.len();
        if d.len() != n * n {
            return Err(Error::SizeMismatch { expected: n * n, found: d.len() });
        }
        let t = Self { labels, d };
        for x in 0..n {
            if t.get(x, x) != ExtendedWeight::ZERO {
                return Err(Error::InvalidMetric { x, y: x, z: x });
            }
            for y in 0..x {
                if t.get(x, y) != t.get(y, x) {
                    return Err(Error::InvalidMetric { x, y, z: y });
                }
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn get(&self, x: VertexId, y: VertexId) -> ExtendedWeight {
        self.d[x * self.n() + y]
    }

    pub fn row(&self, x: VertexId) -> &[ExtendedWeight] {
        let n = self.n();
        &self.d[x * n..(x + 1) * n]
    }

    /// Entrywise comparison: infinities exactly, finite values within `rel_tol`.
    pub fn approx_eq(&self, other: &MetricTable, rel_tol: f64) -> bool {
        self.first_mismatch(other, rel_tol).is_none()
    }

    /// First pair `(x, y)`, `x < y`, in lexicographic order where the tables differ.
    pub fn first_mismatch(&self, other: &MetricTable, rel_tol: f64) -> Option<(VertexId, VertexId)> {
        if self.n() != other.n() {
            return Some((0, 0));
        }
        let n = self.n();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| !self.get(x, y).approx_eq(other.get(x, y), rel_tol))
    }

    /// Pseudo-metric diagnostics: zero off-diagonal entries and triangle
    /// violations beyond `rel_tol`.
    pub fn validate(&self, rel_tol: f64) -> Vec<Diagnostic> {
        let n = self.n();
        let mut out = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                let dxy = self.get(x, y);
                if dxy == ExtendedWeight::ZERO {
                    out.push(Diagnostic {
                        rule: Rule::ZeroOffDiagonal,
                        pair: (x, y),
                        detail: format!("d({},{}) = 0", self.labels.name(x), self.labels.name(y)),
                    });
                }
                if let Some(z) = self.triangle_violation(x, y, rel_tol) {
                    out.push(Diagnostic {
                        rule: Rule::TriangleInequality,
                        pair: (x, y),
                        detail: format!(
                            "triangle inequality fails via {}: {} > {} + {}",
                            self.labels.name(z),
                            dxy,
                            self.get(x, z),
                            self.get(z, y)
                        ),
                    });
                }
            }
        }
        out
    }

    fn triangle_violation(&self, x: VertexId, y: VertexId, rel_tol: f64) -> Option<VertexId> {
        let dxy = self.get(x, y);
        (0..self.n()).find(|&z| {
            let via = self.get(x, z) + self.get(z, y);
            via < dxy && !via.approx_eq(dxy, rel_tol)
        })
    }

    /// Checks the triangle inequality within `rel_tol`.
    pub fn check_triangle(&self, rel_tol: f64) -> Result<()> {
        let n = self.n();
        for x in 0..n {
            for y in x + 1..n {
                if let Some(z) = self.triangle_violation(x, y, rel_tol) {
                    return Err(Error::InvalidMetric { x, y, z });
                }
            }
        }
        Ok(())
    }

    /// The table read back as a weight function (`δ` is itself a weight).
    /// Fails on zero off-diagonal entries, which a weight may not have.
    pub fn as_weighted_graph(&self) -> Result<WeightedGraph> {
        let mut g = WeightedGraph::with_labels(self.labels.clone());
        for x in 0..self.n() {
            for y in x + 1..self.n() {
                g.set_weight(x, y, self.get(x, y))?;
            }
        }
        Ok(g)
    }
}

/// Single-source label-setting shortest paths. `∞` edges are never relaxed;
/// heap ties break toward the smaller vertex id.
pub fn shortest_distances(g: &WeightedGraph, source: VertexId) -> Vec<ExtendedWeight> {
    let mut dist = vec![ExtendedWeight::INFINITY; g.n()];
    let mut done = vec![false; g.n()];
    let mut heap = BinaryHeap::new();
    dist[source] = ExtendedWeight::ZERO;
    heap.push(Reverse((ExtendedWeight::ZERO, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for (u, w) in g.neighbors(v) {
            let cand = d + w;
            if cand < dist[u] {
                dist[u] = cand;
                heap.push(Reverse((cand, u)));
            }
        }
    }
    dist
}

/// `l_w(p)`; `0` for a single vertex.
pub fn path_length(g: &WeightedGraph, p: &Path) -> Result<ExtendedWeight> {
    for &v in p.vertices() {
        g.check_vertex(v)?;
    }
    Ok(p.steps().map(|(a, b)| g.weight(a, b)).sum())
}

/// `δ_w(x, y)`, attained on a finite graph; `∞` iff no finite path exists.
pub fn path_metric(g: &WeightedGraph, x: VertexId, y: VertexId) -> Result<ExtendedWeight> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    Ok(shortest_distances(g, x)[y])
}

pub fn all_pairs_metric(g: &WeightedGraph) -> MetricTable {
    all_pairs_metric_with(g, Execution::default())
}

/// All-pairs `δ_w`, one shortest-path run per source.
///
/// Entry `(x, y)` with `x < y` is taken from the run at `x` and mirrored.
/// The table is then closed under float addition, so that
/// `d(x, y) <= d(x, z) + d(z, y)` holds exactly as computed in `f64`; this
/// only ever lowers entries by rounding-level amounts and is a no-op when all
/// weights are small integers.
pub fn all_pairs_metric_with(g: &WeightedGraph, exec: Execution) -> MetricTable {
    let n = g.n();
    let rows = exec.map_range(n, |s| shortest_distances(g, s));
    let mut d = vec![ExtendedWeight::ZERO; n * n];
    for x in 0..n {
        for y in x + 1..n {
            d[x * n + y] = rows[x][y];
            d[y * n + x] = rows[x][y];
        }
    }
    close_under_addition(&mut d, n, exec);
    MetricTable { labels: g.labels().clone(), d }
}

fn close_under_addition(d: &mut [ExtendedWeight], n: usize, exec: Execution) {
    loop {
        let dirty = {
            let view: &[ExtendedWeight] = d;
            exec.map_range(n, |x| {
                (0..n).any(|y| {
                    let dxy = view[x * n + y];
                    (0..n).any(|z| view[x * n + z] + view[z * n + y] < dxy)
                })
            })
        };
        if !dirty.iter().any(|&b| b) {
            return;
        }
        for z in 0..n {
            for x in 0..n {
                for y in x + 1..n {
                    let via = d[x * n + z] + d[z * n + y];
                    if via < d[x * n + y] {
                        d[x * n + y] = via;
                        d[y * n + x] = via;
                    }
                }
            }
        }
    }
}

/// True when every finite weight is an integer and the total is below 2^53,
/// so all path sums are exact in `f64`.
pub fn has_exact_sums(g: &WeightedGraph) -> bool {
    let mut total = 0.0;
    for (_, _, w) in g.edges() {
        if w.value().fract() != 0.0 {
            return false;
        }
        total += w.value();
    }
    total < 9_007_199_254_740_992.0
}

/// Relative tolerance for geodesic length comparisons on `g`.
pub fn geodesic_tolerance(g: &WeightedGraph) -> f64 {
    if has_exact_sums(g) {
        0.0
    } else {
        TAU_GEO
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicSet {
    pub distance: ExtendedWeight,
    /// Lexicographic by vertex id.
    pub paths: Vec<Path>,
    /// More geodesics exist beyond `cap`.
    pub truncated: bool,
}

/// All `w`-geodesics from `x` to `y`, at most `cap` of them.
pub fn enumerate_geodesics(g: &WeightedGraph, x: VertexId, y: VertexId, cap: usize) -> Result<GeodesicSet> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let to_y = shortest_distances(g, y);
    let distance = to_y[x];
    let Some(target) = distance.finite() else {
        return Err(Error::Unreachable(x, y));
    };
    let tol = geodesic_tolerance(g);
    let bound = target + tol * target;

    struct Search<'a> {
        g: &'a WeightedGraph,
        to_y: &'a [ExtendedWeight],
        y: VertexId,
        target: f64,
        bound: f64,
        tol: f64,
        cap: usize,
        stack: Vec<VertexId>,
        on_stack: Vec<bool>,
        found: Vec<Path>,
        truncated: bool,
    }

    impl Search<'_> {
        fn visit(&mut self, v: VertexId, acc: f64) {
            if v == self.y {
                if approx_eq_f64(acc, self.target, self.tol) {
                    if self.found.len() == self.cap {
                        self.truncated = true;
                    } else {
                        self.found.push(Path::new(self.stack.clone()).expect("search keeps paths injective"));
                    }
                }
                return;
            }
            let next: Vec<(VertexId, ExtendedWeight)> = self.g.neighbors(v).collect();
            for (u, w) in next {
                if self.truncated {
                    return;
                }
                if self.on_stack[u] {
                    continue;
                }
                let reach = acc + w.value();
                if reach + self.to_y[u].value() > self.bound {
                    continue;
                }
                self.stack.push(u);
                self.on_stack[u] = true;
                self.visit(u, reach);
                self.on_stack[u] = false;
                self.stack.pop();
            }
        }
    }

    let mut search = Search {
        g,
        to_y: &to_y,
        y,
        target,
        bound,
        tol,
        cap,
        stack: vec![x],
        on_stack: vec![false; g.n()],
        found: Vec::new(),
        truncated: false,
    };
    search.on_stack[x] = true;
    search.visit(x, 0.0);
    Ok(GeodesicSet {
        distance,
        paths: search.found,
        truncated: search.truncated,
    })
}

/// Whether some path from `x` to `y` attains `δ(x, y) < ∞`.
pub fn geodesic_exists(g: &WeightedGraph, x: VertexId, y: VertexId) -> Result<bool> {
    match enumerate_geodesics(g, x, y, 1) {
        Ok(set) => Ok(!set.paths.is_empty()),
        Err(Error::Unreachable(..)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `w_δ`: `δ(x, y)` where `(x, y)` is the only geodesic, `∞` elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicWeight {
    table: MetricTable,
}

impl GeodesicWeight {
    pub fn get(&self, x: VertexId, y: VertexId) -> ExtendedWeight {
        self.table.get(x, y)
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn labels(&self) -> &Labels {
        self.table.labels()
    }

    /// `w_δ` as a weighted graph. Fails only for pseudo-metrics with zero
    /// off-diagonal distance on a pair with no point in between.
    pub fn as_weighted_graph(&self) -> Result<WeightedGraph> {
        self.table.as_weighted_graph()
    }
}

pub fn geodesic_weight(t: &MetricTable) -> Result<GeodesicWeight> {
    geodesic_weight_with(t, Execution::default())
}

/// Betweenness criterion: a finite pair keeps its distance unless some
/// `z ∉ {x, y}` has `d(x, z) + d(z, y) = d(x, y)` within `TAU_EQ`.
pub fn geodesic_weight_with(t: &MetricTable, exec: Execution) -> Result<GeodesicWeight> {
    t.check_triangle(TAU_EQ)?;
    let n = t.n();
    let rows = exec.map_range(n, |x| {
        (0..n)
            .map(|y| {
                if x == y {
                    return ExtendedWeight::ZERO;
                }
                let dxy = t.get(x, y);
                if dxy.is_infinite() {
                    return ExtendedWeight::INFINITY;
                }
                let between = (0..n)
                    .filter(|&z| z != x && z != y)
                    .any(|z| (t.get(x, z) + t.get(z, y)).approx_eq(dxy, TAU_EQ));
                if between {
                    ExtendedWeight::INFINITY
                } else {
                    dxy
                }
            })
            .collect::<Vec<_>>()
    });
    let d = rows.into_iter().flatten().collect();
    Ok(GeodesicWeight {
        table: MetricTable::from_matrix(t.labels().clone(), d)?,
    })
}

/// Whether `g` generates `t`, i.e. `δ_g = t` (finite entries within `TAU_EQ`).
pub fn is_generating(g: &WeightedGraph, t: &MetricTable) -> Result<bool> {
    if g.n() != t.n() {
        return Err(Error::SizeMismatch { expected: t.n(), found: g.n() });
    }
    Ok(all_pairs_metric(g).approx_eq(t, TAU_EQ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElfReport {
    pub vertex: VertexId,
    pub radius: f64,
    /// `#{y ≠ x : w(x, y) < R}` among scanned vertices.
    pub count: usize,
    pub scanned: usize,
    /// The whole vertex set was scanned.
    pub exhausted: bool,
}

/// Counts the vertices whose direct weight from `x` is below `radius`.
pub fn check_elf(g: &WeightedGraph, x: VertexId, radius: f64) -> Result<ElfReport> {
    g.check_vertex(x)?;
    if !(radius > 0.0) {
        return Err(Error::InvalidWeight(radius));
    }
    let count = g.neighbors(x).filter(|&(_, w)| w.value() < radius).count();
    Ok(ElfReport {
        vertex: x,
        radius,
        count,
        scanned: g.n() - 1,
        exhausted: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{unit_cycle_weights, unit_path_weights, unit_star_weights, weighted_from_edges};

    fn w(v: f64) -> ExtendedWeight {
        ExtendedWeight::from_f64(v)
    }

    fn p(v: &[usize]) -> Path {
        Path::new(v.to_vec()).unwrap()
    }

    #[test]
    fn path_lengths() {
        let g = unit_path_weights(3);
        assert_eq!(path_length(&g, &p(&[0, 1, 2])).unwrap(), w(2.0));
        assert_eq!(path_length(&g, &p(&[0])).unwrap(), ExtendedWeight::ZERO);
        assert_eq!(path_length(&g, &p(&[0, 2])).unwrap(), ExtendedWeight::INFINITY);
        assert!(matches!(path_length(&g, &p(&[0, 5])), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn geodesics_exist_within_components() {
        let g = weighted_from_edges(4, &[(0, 1, 0.1), (1, 2, 0.2), (0, 2, 0.3)]);
        assert!(geodesic_exists(&g, 0, 2).unwrap());
        assert!(!geodesic_exists(&g, 0, 3).unwrap());
        assert!(geodesic_exists(&g, 3, 3).unwrap());
    }

    #[test]
    fn path_metric_examples() {
        let g = unit_path_weights(3);
        assert_eq!(path_metric(&g, 0, 2).unwrap(), w(2.0));
        assert_eq!(path_metric(&g, 1, 1).unwrap(), ExtendedWeight::ZERO);
        let c4 = unit_cycle_weights(4);
        assert_eq!(path_metric(&c4, 0, 2).unwrap(), w(2.0));
        assert_eq!(enumerate_geodesics(&c4, 0, 2, 10).unwrap().paths.len(), 2);
    }

    #[test]
    fn all_pairs_examples() {
        let t = all_pairs_metric(&weighted_from_edges(2, &[(0, 1, 5.0)]));
        assert_eq!(t.get(0, 1), w(5.0));

        let tri = weighted_from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]);
        assert_eq!(all_pairs_metric(&tri).get(0, 2), w(2.0));

        let split = weighted_from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]);
        let t = all_pairs_metric(&split);
        assert_eq!(t.get(0, 3), ExtendedWeight::INFINITY);
        assert_eq!(t.get(2, 3), w(1.0));
    }

    #[test]
    fn geodesic_enumeration() {
        let g = unit_path_weights(3);
        let s = enumerate_geodesics(&g, 0, 2, 8).unwrap();
        assert_eq!(s.paths, vec![p(&[0, 1, 2])]);
        assert!(!s.truncated);

        let c4 = unit_cycle_weights(4);
        let s = enumerate_geodesics(&c4, 0, 2, 8).unwrap();
        assert_eq!(s.paths, vec![p(&[0, 1, 2]), p(&[0, 3, 2])]);

        let s = enumerate_geodesics(&c4, 0, 2, 1).unwrap();
        assert_eq!(s.paths, vec![p(&[0, 1, 2])]);
        assert!(s.truncated);

        let e = weighted_from_edges(2, &[(0, 1, 5.0)]);
        assert_eq!(enumerate_geodesics(&e, 0, 1, 8).unwrap().paths, vec![p(&[0, 1])]);
        assert_eq!(enumerate_geodesics(&e, 1, 1, 8).unwrap().paths, vec![p(&[1])]);

        let split = weighted_from_edges(3, &[(0, 1, 1.0)]);
        assert_eq!(enumerate_geodesics(&split, 0, 2, 8), Err(Error::Unreachable(0, 2)));
    }

    #[test]
    fn geodesic_weight_examples() {
        let t = all_pairs_metric(&unit_path_weights(3));
        let gw = geodesic_weight(&t).unwrap();
        assert_eq!(gw.get(0, 1), w(1.0));
        assert_eq!(gw.get(1, 2), w(1.0));
        assert_eq!(gw.get(0, 2), ExtendedWeight::INFINITY);

        let gw = geodesic_weight(&all_pairs_metric(&unit_cycle_weights(4))).unwrap();
        for (x, y) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            assert_eq!(gw.get(x, y), w(1.0));
        }
        assert_eq!(gw.get(0, 2), ExtendedWeight::INFINITY);
        assert_eq!(gw.get(1, 3), ExtendedWeight::INFINITY);

        let gw = geodesic_weight(&all_pairs_metric(&weighted_from_edges(2, &[(0, 1, 5.0)]))).unwrap();
        assert_eq!(gw.get(0, 1), w(5.0));
    }

    #[test]
    fn geodesic_weight_rejects_non_metric() {
        let bad = MetricTable::from_matrix(
            Labels::numbered(3),
            vec![w(0.0), w(1.0), w(5.0), w(1.0), w(0.0), w(1.0), w(5.0), w(1.0), w(0.0)],
        )
        .unwrap();
        assert!(matches!(geodesic_weight(&bad), Err(Error::InvalidMetric { .. })));
    }

    #[test]
    fn generating_weights() {
        let g = unit_path_weights(3);
        let t = all_pairs_metric(&g);
        assert!(is_generating(&g, &t).unwrap());
        assert!(is_generating(&t.as_weighted_graph().unwrap(), &t).unwrap());
        let mut shortcut = g.clone();
        shortcut.set_weight(0, 2, w(1.5)).unwrap();
        assert!(!is_generating(&shortcut, &t).unwrap());
        assert!(is_generating(&WeightedGraph::new(2), &t).is_err());
    }

    #[test]
    fn elf_counts() {
        let g = unit_path_weights(3);
        assert_eq!(check_elf(&g, 1, 2.0).unwrap().count, 2);
        assert_eq!(check_elf(&g, 0, 0.5).unwrap().count, 0);
        let star = unit_star_weights(100);
        let r = check_elf(&star, 0, 2.0).unwrap();
        assert_eq!((r.count, r.exhausted), (100, true));
        assert!(check_elf(&g, 0, 0.0).is_err());
    }

    #[test]
    fn closure_makes_float_triangle_exact() {
        // 0.1 + 0.2 > 0.3 in f64; the table must still satisfy its own triangle inequality
        let g = weighted_from_edges(4, &[(0, 1, 0.1), (1, 2, 0.2), (2, 3, 0.7), (0, 3, 1.0)]);
        let t = all_pairs_metric(&g);
        t.check_triangle(0.0).unwrap();
        let again = all_pairs_metric(&t.as_weighted_graph().unwrap());
        assert_eq!(again, t);
    }
}
