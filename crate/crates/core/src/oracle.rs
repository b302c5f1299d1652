//! Exact brute-force references.
//!
//! Everything here works in exact rational arithmetic and by exhaustive
//! enumeration, sharing no algorithmic machinery with the modules it checks:
//! no shortest-path search, no linear algebra, no block decomposition. Size
//! caps are hard errors. An oracle that silently truncates is not an oracle.
//!
//! Finite `f64` inputs are turned into rationals through their shortest
//! round-trip decimal representation, so `0.1` becomes exactly `1/10`.

use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{ConductanceGraph, Path, VertexId, WeightedGraph};

pub type Rational = BigRational;

/// Default vertex cap for path enumeration.
pub const PATH_CAP: usize = 12;
/// Vertex cap for spanning-forest enumeration.
pub const FOREST_CAP: usize = 8;

/// An exact value in `[0, ∞]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExactWeight {
    Finite(Rational),
    Infinite,
}

impl ExactWeight {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactWeight::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            ExactWeight::Infinite => f64::INFINITY,
        }
    }

    /// `p/q` (or `p` when integral), `inf` for infinity.
    pub fn to_fraction_string(&self) -> String {
        match self {
            ExactWeight::Finite(r) => fraction_string(r),
            ExactWeight::Infinite => "inf".into(),
        }
    }
}

pub fn fraction_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses a decimal literal such as `12`, `-0.25` or `1.5e-3` exactly.
pub fn rational_from_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if all_digits.is_empty() { BigInt::zero() } else { all_digits.parse().ok()? };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        r = -r;
    }
    Some(r)
}

/// Exact rational for a finite float, via its shortest decimal representation.
pub fn rational_from_f64(value: f64) -> Rational {
    assert!(value.is_finite(), "only finite values have a rational form");
    rational_from_decimal(&format!("{value}")).expect("f64 Display is a decimal literal")
}

pub fn exact_weight(w: crate::weight::ExtendedWeight) -> ExactWeight {
    match w.finite() {
        Some(v) => ExactWeight::Finite(rational_from_f64(v)),
        None => ExactWeight::Infinite,
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::TooLarge { n, cap })
    } else {
        Ok(())
    }
}

fn steppable(g: &WeightedGraph, a: VertexId, b: VertexId, include_infinite_steps: bool) -> bool {
    a != b && (include_infinite_steps || g.weight(a, b).is_finite())
}

/// All injective paths from `x` to `y`, lexicographic by vertex id.
///
/// Steps of weight `∞` are taken only with `include_infinite_steps`.
pub fn enumerate_simple_paths(
    g: &WeightedGraph,
    x: VertexId,
    y: VertexId,
    max_vertices: usize,
    include_infinite_steps: bool,
) -> Result<Vec<Path>> {
    check_cap(g.n(), max_vertices)?;
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let mut out = Vec::new();
    let mut stack = vec![x];
    let mut used = vec![false; g.n()];
    used[x] = true;
    fn dfs(
        g: &WeightedGraph,
        y: VertexId,
        inf: bool,
        stack: &mut Vec<VertexId>,
        used: &mut [bool],
        out: &mut Vec<Path>,
    ) {
        let v = *stack.last().unwrap();
        if v == y {
            out.push(Path::new(stack.clone()).unwrap());
            return;
        }
        for u in 0..g.n() {
            if !used[u] && steppable(g, v, u, inf) {
                used[u] = true;
                stack.push(u);
                dfs(g, y, inf, stack, used, out);
                stack.pop();
                used[u] = false;
            }
        }
    }
    dfs(g, y, include_infinite_steps, &mut stack, &mut used, &mut out);
    Ok(out)
}

/// Exact length of a path.
pub fn exact_path_length(g: &WeightedGraph, p: &Path) -> ExactWeight {
    let mut total = Rational::zero();
    for (a, b) in p.steps() {
        match g.weight(a, b).finite() {
            Some(w) => total += rational_from_f64(w),
            None => return ExactWeight::Infinite,
        }
    }
    ExactWeight::Finite(total)
}

/// `δ_w(x, y)` by definition: the least exact length over all simple paths.
pub fn brute_metric(g: &WeightedGraph, x: VertexId, y: VertexId) -> Result<ExactWeight> {
    let paths = enumerate_simple_paths(g, x, y, PATH_CAP, false)?;
    Ok(paths
        .iter()
        .map(|p| exact_path_length(g, p))
        .min()
        .unwrap_or(ExactWeight::Infinite))
}

/// All weights over a common denominator: `w(a, b) = nums[a][b] / denom`.
struct ScaledWeights {
    denom: BigInt,
    nums: Vec<Vec<Option<BigInt>>>,
}

impl ScaledWeights {
    fn new(g: &WeightedGraph) -> Self {
        let n = g.n();
        let exact: Vec<Vec<Option<Rational>>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| if a == b { None } else { g.weight(a, b).finite().map(rational_from_f64) })
                    .collect()
            })
            .collect();
        let mut denom = BigInt::one();
        for r in exact.iter().flatten().flatten() {
            denom = num_integer::Integer::lcm(&denom, r.denom());
        }
        let nums = exact
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| r.map(|r| r.numer() * (&denom / r.denom())))
                    .collect()
            })
            .collect();
        Self { denom, nums }
    }

    fn narrow(&self) -> Option<Vec<Vec<Option<i128>>>> {
        let mut total = BigInt::zero();
        for v in self.nums.iter().flatten().flatten() {
            total += v;
        }
        total.to_i128()?.checked_mul(2)?;
        Some(
            self.nums
                .iter()
                .map(|row| row.iter().map(|v| v.as_ref().map(|v| v.to_i128().unwrap())).collect())
                .collect(),
        )
    }
}

fn min_sums_from<T>(nums: &[Vec<Option<T>>], source: VertexId) -> Vec<Option<T>>
where
    T: Clone + Ord + Zero + for<'a> Add<&'a T, Output = T>,
{
    let n = nums.len();
    let mut best: Vec<Option<T>> = vec![None; n];
    let mut used = vec![false; n];
    fn dfs<T>(nums: &[Vec<Option<T>>], v: VertexId, acc: T, used: &mut [bool], best: &mut [Option<T>])
    where
        T: Clone + Ord + Zero + for<'a> Add<&'a T, Output = T>,
    {
        if best[v].as_ref().is_none_or(|b| acc < *b) {
            best[v] = Some(acc.clone());
        }
        for u in 0..nums.len() {
            if used[u] {
                continue;
            }
            if let Some(w) = &nums[v][u] {
                used[u] = true;
                dfs(nums, u, acc.clone() + w, used, best);
                used[u] = false;
            }
        }
    }
    used[source] = true;
    dfs(nums, source, T::zero(), &mut used, &mut best);
    best
}

/// `brute_metric` for every pair, as a row-major matrix. One exhaustive
/// simple-path walk per source, summing over a common denominator.
pub fn brute_metric_table(g: &WeightedGraph) -> Result<Vec<ExactWeight>> {
    check_cap(g.n(), PATH_CAP)?;
    let scaled = ScaledWeights::new(g);
    let finish = |v: Option<BigInt>| match v {
        Some(num) => ExactWeight::Finite(Rational::new(num, scaled.denom.clone())),
        None => ExactWeight::Infinite,
    };
    let mut out = Vec::with_capacity(g.n() * g.n());
    match scaled.narrow() {
        Some(small) => {
            for s in 0..g.n() {
                out.extend(min_sums_from(&small, s).into_iter().map(|v| finish(v.map(BigInt::from))));
            }
        }
        None => {
            for s in 0..g.n() {
                out.extend(min_sums_from(&scaled.nums, s).into_iter().map(finish));
            }
        }
    }
    Ok(out)
}

/// Union-find-free component labels for tiny graphs: relabel on merge.
#[derive(Clone, Copy)]
struct Forest {
    comp: [u8; FOREST_CAP],
}

impl Forest {
    fn new() -> Self {
        let mut comp = [0u8; FOREST_CAP];
        for (i, c) in comp.iter_mut().enumerate() {
            *c = i as u8;
        }
        Self { comp }
    }

    fn join(mut self, a: VertexId, b: VertexId) -> Option<Self> {
        let (ca, cb) = (self.comp[a], self.comp[b]);
        if ca == cb {
            return None;
        }
        for c in self.comp.iter_mut() {
            if *c == cb {
                *c = ca;
            }
        }
        Some(self)
    }
}

struct ForestSums {
    n: usize,
    /// Σ over spanning trees of Π numerators.
    trees: BigInt,
    /// Σ over spanning 2-forests separating `(x, y)` of Π numerators, row-major.
    separating: Vec<BigInt>,
    denom: BigInt,
}

/// Enumerates every acyclic edge subset of size `n-1` or `n-2` by recursive
/// inclusion/exclusion.
fn forest_sums(b: &ConductanceGraph) -> Result<ForestSums> {
    let n = b.n();
    check_cap(n, FOREST_CAP)?;
    let edges: Vec<(VertexId, VertexId, Rational)> = b.edges().map(|(x, y, c)| (x, y, rational_from_f64(c))).collect();
    let mut denom = BigInt::one();
    for (_, _, r) in &edges {
        denom = num_integer::Integer::lcm(&denom, r.denom());
    }
    let scaled: Vec<(VertexId, VertexId, BigInt)> =
        edges.iter().map(|(x, y, r)| (*x, *y, r.numer() * (&denom / r.denom()))).collect();

    let mut sums = ForestSums {
        n,
        trees: BigInt::zero(),
        separating: vec![BigInt::zero(); n * n],
        denom,
    };
    if n < 2 {
        sums.trees = BigInt::one();
        return Ok(sums);
    }

    fn walk(edges: &[(VertexId, VertexId, BigInt)], i: usize, chosen: usize, forest: Forest, prod: &BigInt, sums: &mut ForestSums) {
        let n = sums.n;
        if chosen == n - 1 {
            sums.trees += prod;
            return;
        }
        if i == edges.len() {
            if chosen == n - 2 {
                for x in 0..n {
                    for y in 0..n {
                        if forest.comp[x] != forest.comp[y] {
                            sums.separating[x * n + y] += prod;
                        }
                    }
                }
            }
            return;
        }
        if chosen + (edges.len() - i) < n - 2 {
            return;
        }
        let (a, b, c) = &edges[i];
        if let Some(joined) = forest.join(*a, *b) {
            walk(edges, i + 1, chosen + 1, joined, &(prod * c), sums);
        }
        walk(edges, i + 1, chosen, forest, prod, sums);
    }

    walk(&scaled, 0, 0, Forest::new(), &BigInt::one(), &mut sums);
    Ok(sums)
}

/// Effective resistance as (separating 2-forest weight) / (spanning tree weight).
pub fn spanning_tree_resistance(b: &ConductanceGraph, x: VertexId, y: VertexId) -> Result<Rational> {
    b.check_vertex(x)?;
    b.check_vertex(y)?;
    Ok(spanning_tree_resistance_table(b)?.swap_remove(x * b.n() + y))
}

/// All-pairs version of [`spanning_tree_resistance`] from a single enumeration.
pub fn spanning_tree_resistance_table(b: &ConductanceGraph) -> Result<Vec<Rational>> {
    check_cap(b.n(), FOREST_CAP)?;
    if !b.is_connected() {
        return Err(Error::Disconnected);
    }
    let sums = forest_sums(b)?;
    // trees carry n-1 scaled factors, forests n-2: R = F * denom / T
    Ok(sums
        .separating
        .into_iter()
        .map(|f| Rational::new(f * &sums.denom, sums.trees.clone()))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct InducedPaths {
    pub unique: bool,
    /// At most two.
    pub paths: Vec<Path>,
}

/// Chordless paths from `x` to `y`, stopping after the second one.
pub fn unique_induced_path(b: &ConductanceGraph, x: VertexId, y: VertexId) -> Result<InducedPaths> {
    check_cap(b.n(), PATH_CAP)?;
    b.check_vertex(x)?;
    b.check_vertex(y)?;
    let mut found = Vec::new();
    let mut stack = vec![x];
    let mut used = vec![false; b.n()];
    used[x] = true;
    fn dfs(b: &ConductanceGraph, y: VertexId, stack: &mut Vec<VertexId>, used: &mut [bool], found: &mut Vec<Path>) {
        let v = *stack.last().unwrap();
        if v == y {
            found.push(Path::new(stack.clone()).unwrap());
            return;
        }
        for u in 0..b.n() {
            if found.len() >= 2 {
                return;
            }
            if used[u] || !b.is_edge(v, u) {
                continue;
            }
            let chord = stack[..stack.len() - 1].iter().any(|&p| b.is_edge(p, u));
            if chord {
                continue;
            }
            used[u] = true;
            stack.push(u);
            dfs(b, y, stack, used, found);
            stack.pop();
            used[u] = false;
        }
    }
    dfs(b, y, &mut stack, &mut used, &mut found);
    if found.is_empty() {
        return Err(Error::Disconnected);
    }
    Ok(InducedPaths {
        unique: found.len() == 1,
        paths: found,
    })
}

/// Block graph by definition: every pair joined by exactly one induced path.
pub fn is_block_graph_by_definition(b: &ConductanceGraph) -> Result<bool> {
    for x in 0..b.n() {
        for y in x + 1..b.n() {
            if !unique_induced_path(b, x, y)?.unique {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
