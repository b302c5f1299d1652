//! Energy form, Laplacian and effective resistance of a conductance graph.
//!
//! `R(x, y)` is the potential difference produced by injecting a unit
//! current at `x` and grounding `y`: solve `L f = e_x` on the component of
//! `y` with `f(y) = 0`, then `R(x, y) = f(x)`. That value is also the
//! supremum of `(f(y) - f(x))² / Q(f)` over non-constant potentials, which
//! [`verify_variational`] checks by sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{ConductanceGraph, VertexId};
use crate::linalg::{DenseMatrix, Factorization};
use crate::metric::MetricTable;
use crate::tolerance::TAU_EQ;
use crate::weight::ExtendedWeight;

/// Real-valued function on the vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential(Vec<f64>);

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidWeight(bad));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: VertexId) -> f64 {
        self.0[v]
    }

    pub fn indicator(n: usize, v: VertexId) -> Self {
        let mut f = vec![0.0; n];
        f[v] = 1.0;
        Self(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyBreakdown {
    /// `Q(f)`.
    pub total: f64,
    /// `Γ(f)(x)` per vertex.
    pub per_vertex: Vec<f64>,
}

fn check_size(b: &ConductanceGraph, f: &Potential) -> Result<()> {
    if b.n() != f.len() {
        return Err(Error::SizeMismatch { expected: b.n(), found: f.len() });
    }
    Ok(())
}

/// `Γ(f)(x) = ½ Σ_y b(x, y) (f(x) − f(y))²`.
pub fn gamma(b: &ConductanceGraph, f: &Potential, x: VertexId) -> Result<f64> {
    check_size(b, f)?;
    b.check_vertex(x)?;
    let fx = f.get(x);
    Ok(0.5 * b.neighbors(x).map(|(y, c)| c * (fx - f.get(y)).powi(2)).sum::<f64>())
}

/// `Q(f) = ½ Σ_{x,y} b(x, y) (f(x) − f(y))²` together with its `Γ` density.
pub fn energy(b: &ConductanceGraph, f: &Potential) -> Result<EnergyBreakdown> {
    check_size(b, f)?;
    let per_vertex = (0..b.n()).map(|x| gamma(b, f, x)).collect::<Result<Vec<_>>>()?;
    let total = 0.5
        * (0..b.n())
            .flat_map(|x| b.neighbors(x).map(move |(y, c)| (x, y, c)))
            .map(|(x, y, c)| c * (f.get(x) - f.get(y)).powi(2))
            .sum::<f64>();
    Ok(EnergyBreakdown { total, per_vertex })
}

/// `Lf(x) = Σ_y b(x, y) (f(x) − f(y))`.
pub fn laplacian_apply(b: &ConductanceGraph, f: &Potential, x: VertexId) -> Result<f64> {
    check_size(b, f)?;
    b.check_vertex(x)?;
    let fx = f.get(x);
    Ok(b.neighbors(x).map(|(y, c)| c * (fx - f.get(y))).sum())
}

/// Laplacian of one connected component with its ground vertex removed.
struct GroundedSystem {
    /// Component vertices other than the ground, in id order.
    free: Vec<VertexId>,
    /// Position in `free` per vertex, `usize::MAX` outside.
    slot: Vec<usize>,
    factor: Factorization,
}

impl GroundedSystem {
    fn new(b: &ConductanceGraph, comp: &[usize], ground: VertexId) -> Self {
        let free: Vec<VertexId> = (0..b.n()).filter(|&v| comp[v] == comp[ground] && v != ground).collect();
        let mut slot = vec![usize::MAX; b.n()];
        for (i, &v) in free.iter().enumerate() {
            slot[v] = i;
        }
        let mut m = DenseMatrix::zeros(free.len());
        for (i, &v) in free.iter().enumerate() {
            for (u, c) in b.neighbors(v) {
                m.add(i, i, c);
                if slot[u] != usize::MAX {
                    m.add(i, slot[u], -c);
                }
            }
        }
        Self {
            factor: Factorization::new(&m),
            free,
            slot,
        }
    }

    /// Potential over all vertices for a unit current injected at `source`;
    /// zero at the ground and outside the component.
    fn unit_current(&self, source: VertexId, n: usize) -> Vec<f64> {
        let mut rhs = vec![0.0; self.free.len()];
        rhs[self.slot[source]] = 1.0;
        let sol = self.factor.solve(&rhs);
        let mut f = vec![0.0; n];
        for (i, &v) in self.free.iter().enumerate() {
            f[v] = sol[i];
        }
        f
    }
}

fn unit_current_potential(b: &ConductanceGraph, x: VertexId, y: VertexId) -> Option<Vec<f64>> {
    let comp = b.components();
    if comp[x] != comp[y] {
        return None;
    }
    Some(GroundedSystem::new(b, &comp, y).unit_current(x, b.n()))
}

/// `R(x, y)`; `∞` across components.
pub fn effective_resistance(b: &ConductanceGraph, x: VertexId, y: VertexId) -> Result<ExtendedWeight> {
    b.check_vertex(x)?;
    b.check_vertex(y)?;
    if x == y {
        return Err(Error::SameVertex);
    }
    Ok(match unit_current_potential(b, x, y) {
        Some(f) => ExtendedWeight::from_f64(f[x].max(0.0)),
        None => ExtendedWeight::INFINITY,
    })
}

pub fn resistance_matrix(b: &ConductanceGraph) -> MetricTable {
    resistance_matrix_with(b, Execution::default())
}

/// All-pairs resistance. Each component is grounded once at its first
/// vertex; the unit-current solves for the remaining vertices run under
/// `exec` and give the grounded Green function `G`, from which
/// `R(x, y) = G(x, x) + G(y, y) − 2 G(x, y)`.
pub fn resistance_matrix_with(b: &ConductanceGraph, exec: Execution) -> MetricTable {
    let n = b.n();
    let comp = b.components();
    let mut green = vec![0.0; n * n];
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    for c in 0..ncomp {
        let ground = comp.iter().position(|&k| k == c).expect("component ids are dense");
        let system = GroundedSystem::new(b, &comp, ground);
        let columns = exec.map_slice(&system.free, |&v| system.unit_current(v, n));
        for (&v, col) in system.free.iter().zip(columns) {
            for u in 0..n {
                if comp[u] == c {
                    green[u * n + v] = col[u];
                }
            }
        }
    }
    let mut d = vec![ExtendedWeight::ZERO; n * n];
    for x in 0..n {
        for y in x + 1..n {
            let r = if comp[x] != comp[y] {
                ExtendedWeight::INFINITY
            } else {
                let g = |i: usize, j: usize| 0.5 * (green[i * n + j] + green[j * n + i]);
                ExtendedWeight::from_f64((g(x, x) + g(y, y) - 2.0 * g(x, y)).max(0.0))
            };
            d[x * n + y] = r;
            d[y * n + x] = r;
        }
    }
    MetricTable::from_matrix(b.labels().clone(), d).expect("square, symmetric, zero diagonal")
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicMaximizer {
    /// Normalized to `Q(f) = 1` with `f(x) > f(y)`.
    pub potential: Potential,
    pub resistance: f64,
    /// `max |Lu(v)|` over `v ∉ {x, y}` for the unit-current potential `u`.
    pub residual: f64,
}

/// The maximizer of `(f(y) − f(x))²` subject to `Q(f) = 1`.
pub fn harmonic_maximizer(b: &ConductanceGraph, x: VertexId, y: VertexId) -> Result<HarmonicMaximizer> {
    b.check_vertex(x)?;
    b.check_vertex(y)?;
    if x == y {
        return Err(Error::SameVertex);
    }
    let unit = Potential(unit_current_potential(b, x, y).ok_or(Error::Disconnected)?);
    let mut residual: f64 = 0.0;
    for v in (0..b.n()).filter(|&v| v != x && v != y) {
        residual = residual.max(laplacian_apply(b, &unit, v)?.abs());
    }
    let q = energy(b, &unit)?.total;
    let scale = q.sqrt();
    let potential = Potential(unit.0.iter().map(|v| v / scale).collect());
    Ok(HarmonicMaximizer {
        potential,
        resistance: unit.get(x),
        residual,
    })
}

/// `(f(y) − f(x))² / Q(f)`, or `None` when `Q(f) = 0`.
pub fn quotient(b: &ConductanceGraph, f: &Potential, x: VertexId, y: VertexId) -> Result<Option<f64>> {
    let q = energy(b, f)?.total;
    if q == 0.0 {
        return Ok(None);
    }
    Ok(Some((f.get(y) - f.get(x)).powi(2) / q))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VariationalReport {
    pub resistance: f64,
    pub samples: usize,
    /// Samples with `Q(f) = 0`, which have no quotient.
    pub skipped: usize,
    pub max_sampled_quotient: f64,
    /// Samples whose quotient exceeded `R · (1 + τ_eq)`.
    pub violations: usize,
    pub maximizer_quotient: f64,
    pub maximizer_attains: bool,
}

impl VariationalReport {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.maximizer_attains
    }
}

/// Samples `trials` potentials and checks that none beats `R(x, y)`.
///
/// Half the samples are uniform on `[-1, 1]^n`; the other half perturb the
/// maximizer, where the bound is tight.
pub fn verify_variational(b: &ConductanceGraph, x: VertexId, y: VertexId, trials: usize, seed: u64) -> Result<VariationalReport> {
    let maximizer = harmonic_maximizer(b, x, y)?;
    let r = maximizer.resistance;
    let bound = r * (1.0 + TAU_EQ);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = b.n();
    let (mut skipped, mut violations, mut max_q) = (0, 0, 0.0f64);
    for t in 0..trials {
        let values: Vec<f64> = if t % 2 == 0 {
            (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
        } else {
            let eps = 10f64.powi(-rng.gen_range(1..=6));
            maximizer.potential.values().iter().map(|v| v + eps * rng.gen_range(-1.0..=1.0)).collect()
        };
        match quotient(b, &Potential(values), x, y)? {
            None => skipped += 1,
            Some(q) => {
                max_q = max_q.max(q);
                if q > bound {
                    violations += 1;
                }
            }
        }
    }
    let maximizer_quotient = quotient(b, &maximizer.potential, x, y)?.unwrap_or(0.0);
    Ok(VariationalReport {
        resistance: r,
        samples: trials,
        skipped,
        max_sampled_quotient: max_q,
        violations,
        maximizer_quotient,
        maximizer_attains: (maximizer_quotient - r).abs() <= TAU_EQ * r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{conductance_from_edges, unit_complete, unit_cycle, unit_path, unit_star};
    use crate::tolerance::TAU_HARM;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    fn pot(v: &[f64]) -> Potential {
        Potential::new(v.to_vec()).unwrap()
    }

    #[test]
    fn gamma_values() {
        let edge = unit_path(2);
        assert_eq!(gamma(&edge, &pot(&[1.0, 0.0]), 0).unwrap(), 0.5);
        let tri = unit_complete(3);
        let constant = pot(&[2.0, 2.0, 2.0]);
        assert!((0..3).all(|x| gamma(&tri, &constant, x).unwrap() == 0.0));
        assert_eq!(gamma(&tri, &pot(&[1.0, 0.0, 0.0]), 0).unwrap(), 1.0);
        assert!(matches!(gamma(&tri, &pot(&[1.0]), 0), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn energy_values() {
        assert_eq!(energy(&unit_path(2), &pot(&[1.0, 0.0])).unwrap().total, 1.0);
        let e = energy(&unit_complete(3), &pot(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(e.total, 2.0);
        assert_eq!(e.per_vertex.iter().sum::<f64>(), 2.0);
        assert_eq!(energy(&unit_cycle(5), &pot(&[3.0; 5])).unwrap().total, 0.0);
    }

    #[test]
    fn laplacian_values() {
        let edge = unit_path(2);
        let f = pot(&[1.0, 0.0]);
        assert_eq!(laplacian_apply(&edge, &f, 0).unwrap(), 1.0);
        assert_eq!(laplacian_apply(&edge, &f, 1).unwrap(), -1.0);
        assert_eq!(laplacian_apply(&unit_complete(3), &pot(&[1.0, 0.0, 0.0]), 0).unwrap(), 2.0);
        assert_eq!(laplacian_apply(&unit_cycle(4), &pot(&[7.0; 4]), 2).unwrap(), 0.0);
    }

    #[test]
    fn resistance_values() {
        assert!(close(effective_resistance(&unit_path(2), 0, 1).unwrap().value(), 1.0));
        assert!(close(effective_resistance(&unit_complete(3), 0, 1).unwrap().value(), 2.0 / 3.0));
        assert!(close(effective_resistance(&unit_path(3), 0, 2).unwrap().value(), 2.0));
        assert_eq!(effective_resistance(&unit_path(3), 1, 1), Err(Error::SameVertex));
        let split = conductance_from_edges(3, &[(0, 1, 1.0)]);
        assert_eq!(effective_resistance(&split, 0, 2).unwrap(), ExtendedWeight::INFINITY);
    }

    #[test]
    fn resistance_matrix_values() {
        let r = resistance_matrix(&unit_cycle(4));
        assert!(close(r.get(0, 1).value(), 0.75));
        assert!(close(r.get(0, 2).value(), 1.0));
        assert!(close(r.get(1, 3).value(), 1.0));

        let r = resistance_matrix(&unit_star(3));
        assert!(close(r.get(0, 2).value(), 1.0));
        assert!(close(r.get(1, 3).value(), 2.0));

        let split = conductance_from_edges(2, &[]);
        assert_eq!(resistance_matrix(&split).get(0, 1), ExtendedWeight::INFINITY);

        let seq = resistance_matrix_with(&unit_cycle(7), Execution::Sequential);
        let par = resistance_matrix_with(&unit_cycle(7), Execution::Parallel);
        assert_eq!(seq, par);
    }

    #[test]
    fn maximizer_profiles() {
        let m = harmonic_maximizer(&unit_path(2), 0, 1).unwrap();
        let f = m.potential.values();
        assert!(close((f[0] - f[1]).abs(), 1.0));
        assert!(f[0] > f[1]);

        let m = harmonic_maximizer(&unit_path(3), 0, 2).unwrap();
        let f = m.potential.values();
        assert!(close(f[1], 0.5 * (f[0] + f[2])));
        assert!(close(energy(&unit_path(3), &m.potential).unwrap().total, 1.0));

        let tri = unit_complete(3);
        let m = harmonic_maximizer(&tri, 0, 1).unwrap();
        assert!(laplacian_apply(&tri, &m.potential, 2).unwrap().abs() <= TAU_HARM);
        let gap = m.potential.get(0) - m.potential.get(1);
        assert!(close(gap * gap, 2.0 / 3.0));

        let split = conductance_from_edges(3, &[(0, 1, 1.0)]);
        assert_eq!(harmonic_maximizer(&split, 0, 2), Err(Error::Disconnected));
        assert_eq!(harmonic_maximizer(&split, 0, 0), Err(Error::SameVertex));
    }

    #[test]
    fn variational_bounds() {
        let r = verify_variational(&unit_path(2), 0, 1, 200, 7).unwrap();
        assert!(r.holds());
        assert!(r.max_sampled_quotient <= 1.0 + 1e-9);
        assert!(close(r.maximizer_quotient, 1.0));

        let tri = unit_complete(3);
        let r = verify_variational(&tri, 0, 1, 1000, 11).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(r.max_sampled_quotient <= 2.0 / 3.0 * (1.0 + TAU_EQ));

        let q = quotient(&tri, &Potential::indicator(3, 0), 0, 1).unwrap().unwrap();
        assert_eq!(q, 0.5);
        assert_eq!(quotient(&tri, &pot(&[1.0; 3]), 0, 1).unwrap(), None);
    }
}
