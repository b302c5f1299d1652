//! Weighted graphs, conductance graphs and paths.
//!
//! Both graph types keep a sparse directed entry table. Ordinary
//! construction always writes symmetric pairs; [`WeightedGraph::insert_raw`]
//! and [`ConductanceGraph::insert_raw`] exist so that broken inputs can be
//! represented and reported by `validate`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::weight::ExtendedWeight;

/// Dense vertex index, `0..n`.
pub type VertexId = usize;

/// Anything that can evaluate a weight function on vertex pairs.
pub trait WeightOracle {
    fn weight(&self, x: VertexId, y: VertexId) -> ExtendedWeight;
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Labels {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
}

impl Labels {
    /// Labels `"0"`, `"1"`, ... for unlabelled graphs.
    pub fn numbered(n: usize) -> Self {
        Self::from_names((0..n).map(|i| i.to_string()).collect()).expect("numbered labels are unique")
    }

    pub fn from_names(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate label {name}"),
                });
            }
        }
        Ok(Self { names, index })
    }

    pub(crate) fn push(&mut self, name: &str) -> VertexId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }
}

/// Which invariant a [`Diagnostic`] reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Asymmetric,
    ZeroOffDiagonal,
    NonzeroDiagonal,
    NegativeValue,
    NonFinite,
    UnsummableRow,
    TriangleInequality,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Asymmetric => "asymmetric",
            Rule::ZeroOffDiagonal => "zero off diagonal",
            Rule::NonzeroDiagonal => "nonzero diagonal",
            Rule::NegativeValue => "negative value",
            Rule::NonFinite => "non-finite value",
            Rule::UnsummableRow => "unsummable row",
            Rule::TriangleInequality => "triangle inequality",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub pair: (VertexId, VertexId),
    pub detail: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ({}, {}): {}", self.rule, self.pair.0, self.pair.1, self.detail)
    }
}

/// Connected-component ids in first-appearance order, given a neighbor function.
pub(crate) fn component_ids<I, F>(n: usize, mut neighbors: F) -> Vec<usize>
where
    F: FnMut(VertexId) -> I,
    I: IntoIterator<Item = VertexId>,
{
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for u in neighbors(v) {
                if comp[u] == usize::MAX {
                    comp[u] = next;
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    comp
}

/// A symmetric weight function `w: X × X → [0, ∞]`, zero exactly on the
/// diagonal. Absent entries are `∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    labels: Labels,
    rows: Vec<BTreeMap<VertexId, ExtendedWeight>>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        Self::with_labels(Labels::numbered(n))
    }

    pub fn with_labels(labels: Labels) -> Self {
        Self {
            rows: vec![BTreeMap::new(); labels.len()],
            labels,
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        self.labels.name(v)
    }

    pub fn vertex(&self, label: &str) -> Result<VertexId> {
        self.labels.get(label).ok_or_else(|| Error::UnknownVertex(label.to_owned()))
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    /// Sets `w(x, y) = w(y, x)`. Self-loops and zero weights are rejected;
    /// setting `∞` removes the entry.
    pub fn set_weight(&mut self, x: VertexId, y: VertexId, w: ExtendedWeight) -> Result<()> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Err(Error::SameVertex);
        }
        if w == ExtendedWeight::ZERO {
            return Err(Error::InvalidWeight(0.0));
        }
        if w.is_infinite() {
            self.rows[x].remove(&y);
            self.rows[y].remove(&x);
        } else {
            self.rows[x].insert(y, w);
            self.rows[y].insert(x, w);
        }
        Ok(())
    }

    /// Writes the single directed entry `(x, y)` without any checks.
    pub fn insert_raw(&mut self, x: VertexId, y: VertexId, w: ExtendedWeight) {
        self.rows[x].insert(y, w);
    }

    pub fn weight(&self, x: VertexId, y: VertexId) -> ExtendedWeight {
        match self.rows[x].get(&y) {
            Some(&w) => w,
            None if x == y => ExtendedWeight::ZERO,
            None => ExtendedWeight::INFINITY,
        }
    }

    /// Finite-weight off-diagonal neighbors of `x` in id order.
    pub fn neighbors(&self, x: VertexId) -> impl Iterator<Item = (VertexId, ExtendedWeight)> + '_ {
        self.rows[x]
            .iter()
            .filter(move |(&y, w)| y != x && w.is_finite())
            .map(|(&y, &w)| (y, w))
    }

    /// Finite off-diagonal edges with `x < y`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, ExtendedWeight)> + '_ {
        (0..self.n()).flat_map(move |x| self.neighbors(x).filter(move |&(y, _)| x < y).map(move |(y, w)| (x, y, w)))
    }

    pub fn components(&self) -> Vec<usize> {
        component_ids(self.n(), |v| self.neighbors(v).map(|(u, _)| u).collect::<Vec<_>>())
    }

    /// Conductances `b = 1/w` on finite edges.
    pub fn inverse_conductances(&self) -> ConductanceGraph {
        let mut b = ConductanceGraph::with_labels(self.labels.clone());
        for (x, y, w) in self.edges() {
            b.rows[x].insert(y, 1.0 / w.value());
            b.rows[y].insert(x, 1.0 / w.value());
        }
        b
    }

    /// Every invariant violation among stored entries.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (x, row) in self.rows.iter().enumerate() {
            for (&y, &w) in row {
                if x == y {
                    if w != ExtendedWeight::ZERO {
                        out.push(Diagnostic {
                            rule: Rule::NonzeroDiagonal,
                            pair: (x, x),
                            detail: format!("w({0},{0}) = {w}", self.label(x)),
                        });
                    }
                    continue;
                }
                if w == ExtendedWeight::ZERO {
                    out.push(Diagnostic {
                        rule: Rule::ZeroOffDiagonal,
                        pair: (x, y),
                        detail: format!("w({},{}) = 0", self.label(x), self.label(y)),
                    });
                }
                let back = self.weight(y, x);
                if x < y && back != w || x > y && !self.rows[y].contains_key(&x) && w.is_finite() {
                    out.push(Diagnostic {
                        rule: Rule::Asymmetric,
                        pair: (x.min(y), x.max(y)),
                        detail: format!(
                            "w({},{}) = {w} but w({},{}) = {back}",
                            self.label(x),
                            self.label(y),
                            self.label(y),
                            self.label(x)
                        ),
                    });
                }
            }
        }
        out
    }
}

impl WeightOracle for WeightedGraph {
    fn weight(&self, x: VertexId, y: VertexId) -> ExtendedWeight {
        WeightedGraph::weight(self, x, y)
    }
}

/// A symmetric conductance function `b: X × X → [0, ∞)` with zero diagonal.
/// Absent entries are `0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConductanceGraph {
    labels: Labels,
    rows: Vec<BTreeMap<VertexId, f64>>,
}

impl ConductanceGraph {
    pub fn new(n: usize) -> Self {
        Self::with_labels(Labels::numbered(n))
    }

    pub fn with_labels(labels: Labels) -> Self {
        Self {
            rows: vec![BTreeMap::new(); labels.len()],
            labels,
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        self.labels.name(v)
    }

    pub fn vertex(&self, label: &str) -> Result<VertexId> {
        self.labels.get(label).ok_or_else(|| Error::UnknownVertex(label.to_owned()))
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    /// Sets `b(x, y) = b(y, x)`; zero removes the edge.
    pub fn set_conductance(&mut self, x: VertexId, y: VertexId, c: f64) -> Result<()> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Err(Error::SameVertex);
        }
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidWeight(c));
        }
        if c == 0.0 {
            self.rows[x].remove(&y);
            self.rows[y].remove(&x);
        } else {
            self.rows[x].insert(y, c);
            self.rows[y].insert(x, c);
        }
        Ok(())
    }

    pub fn insert_raw(&mut self, x: VertexId, y: VertexId, c: f64) {
        self.rows[x].insert(y, c);
    }

    pub fn conductance(&self, x: VertexId, y: VertexId) -> f64 {
        self.rows[x].get(&y).copied().unwrap_or(0.0)
    }

    /// Positive-conductance neighbors of `x` in id order.
    pub fn neighbors(&self, x: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.rows[x].iter().filter(move |(&y, &c)| y != x && c > 0.0).map(|(&y, &c)| (y, c))
    }

    pub fn is_edge(&self, x: VertexId, y: VertexId) -> bool {
        x != y && self.conductance(x, y) > 0.0
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        (0..self.n()).flat_map(move |x| self.neighbors(x).filter(move |&(y, _)| x < y).map(move |(y, c)| (x, y, c)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn degree_sum(&self, x: VertexId) -> f64 {
        self.neighbors(x).map(|(_, c)| c).sum()
    }

    pub fn components(&self) -> Vec<usize> {
        component_ids(self.n(), |v| self.neighbors(v).map(|(u, _)| u).collect::<Vec<_>>())
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().iter().all(|&c| c == 0)
    }

    /// Subgraph on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[VertexId]) -> Result<ConductanceGraph> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        let names = vertices.iter().map(|&v| self.label(v).to_string()).collect();
        let mut sub = ConductanceGraph::with_labels(Labels::from_names(names)?);
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                let c = self.conductance(a, b);
                if c > 0.0 {
                    sub.set_conductance(i, j, c)?;
                }
            }
        }
        Ok(sub)
    }

    /// The compatible weight `1/b` on edges, `∞` elsewhere.
    pub fn inverse_weights(&self) -> WeightedGraph {
        let mut w = WeightedGraph::with_labels(self.labels.clone());
        for (x, y, c) in self.edges() {
            w.set_weight(x, y, ExtendedWeight::from_f64(1.0 / c))
                .expect("positive finite conductance has a positive inverse");
        }
        w
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (x, row) in self.rows.iter().enumerate() {
            for (&y, &c) in row {
                if x == y {
                    if c != 0.0 {
                        out.push(Diagnostic {
                            rule: Rule::NonzeroDiagonal,
                            pair: (x, x),
                            detail: format!("b({0},{0}) = {c}", self.label(x)),
                        });
                    }
                    continue;
                }
                if c < 0.0 {
                    out.push(Diagnostic {
                        rule: Rule::NegativeValue,
                        pair: (x, y),
                        detail: format!("b({},{}) = {c}", self.label(x), self.label(y)),
                    });
                }
                if !c.is_finite() {
                    out.push(Diagnostic {
                        rule: Rule::NonFinite,
                        pair: (x, y),
                        detail: format!("b({},{}) = {c}", self.label(x), self.label(y)),
                    });
                }
                let back = self.conductance(y, x);
                if (x < y && back != c) || (x > y && !self.rows[y].contains_key(&x) && c != 0.0) {
                    out.push(Diagnostic {
                        rule: Rule::Asymmetric,
                        pair: (x.min(y), x.max(y)),
                        detail: format!(
                            "b({},{}) = {c} but b({},{}) = {back}",
                            self.label(x),
                            self.label(y),
                            self.label(y),
                            self.label(x)
                        ),
                    });
                }
            }
            let total: f64 = row.values().sum();
            if !total.is_finite() {
                out.push(Diagnostic {
                    rule: Rule::UnsummableRow,
                    pair: (x, x),
                    detail: format!("sum of b({},.) is {total}", self.label(x)),
                });
            }
        }
        out
    }
}

/// An injective finite vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(Vec<VertexId>);

impl Path {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("a path has at least one vertex".into()));
        }
        let mut seen = vertices.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPath(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Self(vertices))
    }

    pub fn single(v: VertexId) -> Self {
        Self(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn start(&self) -> VertexId {
        self.0[0]
    }

    pub fn end(&self) -> VertexId {
        self.0[self.0.len() - 1]
    }

    /// Number of steps.
    pub fn hops(&self) -> usize {
        self.0.len() - 1
    }

    pub fn steps(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn labelled(&self, labels: &Labels) -> String {
        let names: Vec<&str> = self.0.iter().map(|&v| labels.name(v)).collect();
        format!("({})", names.join(","))
    }
}

impl From<Path> for Vec<VertexId> {
    fn from(p: Path) -> Self {
        p.0
    }
}
