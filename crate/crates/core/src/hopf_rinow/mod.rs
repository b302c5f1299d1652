//! Finite evidence for the discrete Hopf-Rinow equivalences.
//!
//! On finite graphs every clause holds, so the checks here guard the
//! implementation. On the builtin infinite families a finite scan can only
//! ever produce evidence that balls or direct-weight neighborhoods are large,
//! never a proof that they are infinite.

mod family;
mod trie;

use std::fmt;

use crate::error::Result;
use crate::exec::Execution;
use crate::graph::{VertexId, WeightedGraph};
use crate::metric::{all_pairs_metric_with, enumerate_geodesics, geodesic_weight_with, shortest_distances, ElfReport, GeodesicWeight};
use crate::oracle::{ExactWeight, Rational};
use crate::tolerance::TAU_EQ;

pub use family::{Builtin, GraphFamily};
pub use trie::{extract_common_prefix_path, CommonPrefix, PrefixTrie};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanVerdict {
    BoundedSoFar,
    ExceedsThreshold,
}

impl ScanVerdict {
    fn from_count(count: usize, threshold: usize) -> Self {
        if count >= threshold {
            ScanVerdict::ExceedsThreshold
        } else {
            ScanVerdict::BoundedSoFar
        }
    }
}

impl fmt::Display for ScanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanVerdict::BoundedSoFar => "BOUNDED_SO_FAR",
            ScanVerdict::ExceedsThreshold => "EXCEEDS_THRESHOLD",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallScan {
    pub center: VertexId,
    pub radius: f64,
    /// Enumerated vertices, the center included, with `δ ≤ radius`.
    pub found: usize,
    /// Vertices enumerated, the center included.
    pub budget: usize,
    pub threshold: usize,
    pub verdict: ScanVerdict,
}

/// The center followed by the stream without it, `len` vertices in all.
fn window(center: VertexId, len: usize) -> Vec<VertexId> {
    std::iter::once(center)
        .chain((0..).filter(|&v| v != center))
        .take(len)
        .collect()
}

/// Finite truncation of `fam` on `vertices`, relabelled `0..vertices.len()`.
pub fn truncation(fam: &dyn GraphFamily, vertices: &[VertexId], exec: Execution) -> WeightedGraph {
    let n = vertices.len();
    let rows = exec.map_range(n, |i| {
        (i + 1..n)
            .filter_map(|j| {
                let w = fam.weight(vertices[i], vertices[j]);
                w.is_finite().then_some((j, w))
            })
            .collect::<Vec<_>>()
    });
    let mut g = WeightedGraph::new(n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, w) in row {
            g.set_weight(i, j, w).expect("family weights are definite");
        }
    }
    g
}

pub fn family_ball_scan(fam: &dyn GraphFamily, center: VertexId, radius: f64, budget: usize, threshold: usize) -> BallScan {
    family_ball_scan_with(fam, center, radius, budget, threshold, Execution::default())
}

/// Counts vertices of the truncation within `radius` of `center`.
///
/// Distances are taken inside the truncation, so they are upper bounds in
/// general. For the builtin stars and rays every route is unique and the
/// truncation distances are exact.
pub fn family_ball_scan_with(
    fam: &dyn GraphFamily,
    center: VertexId,
    radius: f64,
    budget: usize,
    threshold: usize,
    exec: Execution,
) -> BallScan {
    let found = if budget == 0 {
        0
    } else {
        let g = truncation(fam, &window(center, budget), exec);
        shortest_distances(&g, 0).into_iter().filter(|d| d.value() <= radius).count()
    };
    BallScan {
        center,
        radius,
        found,
        budget,
        threshold,
        verdict: ScanVerdict::from_count(found, threshold),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyElfScan {
    pub report: ElfReport,
    pub threshold: usize,
    pub verdict: ScanVerdict,
}

/// Counts the first `budget` vertices `y ≠ x` with `w(x, y) < radius`.
pub fn family_elf_scan(fam: &dyn GraphFamily, x: VertexId, radius: f64, budget: usize, threshold: usize) -> FamilyElfScan {
    let count = (0..)
        .filter(|&y| y != x)
        .take(budget)
        .filter(|&y| fam.weight(x, y).value() < radius)
        .count();
    FamilyElfScan {
        report: ElfReport {
            vertex: x,
            radius,
            count,
            scanned: budget,
            exhausted: false,
        },
        threshold,
        verdict: ScanVerdict::from_count(count, threshold),
    }
}

/// Exact lengths of the stream prefixes `(0, 1, …, k)` for `k ≤ steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixEvidence {
    pub lengths: Vec<ExactWeight>,
    pub bound: Rational,
    /// Every prefix length is finite and strictly below `bound`.
    pub all_below_bound: bool,
    /// Every prefix is the unique geodesic between its ends in the truncation.
    pub all_geodesic: bool,
}

/// Evidence for a geodesic of finite length: along a ray, each prefix is a
/// geodesic while the lengths stay below `bound`.
pub fn stream_prefix_evidence(fam: &dyn GraphFamily, steps: usize, bound: &Rational, exec: Execution) -> Result<PrefixEvidence> {
    let mut lengths = vec![ExactWeight::Finite(Rational::from_integer(0.into()))];
    for k in 1..=steps {
        let next = match (&lengths[k - 1], fam.exact_weight(k - 1, k)) {
            (ExactWeight::Finite(a), ExactWeight::Finite(b)) => ExactWeight::Finite(a + b),
            _ => ExactWeight::Infinite,
        };
        lengths.push(next);
    }
    let all_below_bound = lengths.iter().all(|l| matches!(l, ExactWeight::Finite(r) if r < bound));
    let g = truncation(fam, &(0..=steps).collect::<Vec<_>>(), exec);
    let checks = exec.map_range(steps, |i| -> Result<bool> {
        let k = i + 1;
        let set = enumerate_geodesics(&g, 0, k, 2)?;
        let prefix: Vec<VertexId> = (0..=k).collect();
        Ok(set.paths.len() == 1 && set.paths[0].vertices() == prefix.as_slice())
    });
    let all_geodesic = checks.into_iter().collect::<Result<Vec<_>>>()?.into_iter().all(|ok| ok);
    Ok(PrefixEvidence {
        lengths,
        bound: bound.clone(),
        all_below_bound,
        all_geodesic,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaximalWeightReport {
    pub geodesic_weight: GeodesicWeight,
    /// `δ_{w_δ} = δ`.
    pub generates: bool,
    /// `w ≤ w_δ` wherever `w` is finite.
    pub dominates: bool,
    /// Pairs where `δ_{w_δ}` differs from `δ`.
    pub mismatches: Vec<(VertexId, VertexId)>,
    /// Pairs where `w` is finite and exceeds `w_δ`.
    pub witnesses: Vec<(VertexId, VertexId)>,
}

pub fn verify_maximal_weight(g: &WeightedGraph) -> Result<MaximalWeightReport> {
    verify_maximal_weight_with(g, Execution::default())
}

/// Builds `w_δ` from `δ_w`, regenerates the metric from it and compares
/// `w` against it.
pub fn verify_maximal_weight_with(g: &WeightedGraph, exec: Execution) -> Result<MaximalWeightReport> {
    let t = all_pairs_metric_with(g, exec);
    let w_delta = geodesic_weight_with(&t, exec)?;
    let regenerated = all_pairs_metric_with(&w_delta.as_weighted_graph()?, exec);
    let n = g.n();
    let pairs = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y)));
    let mismatches: Vec<_> = pairs
        .clone()
        .filter(|&(x, y)| !regenerated.get(x, y).approx_eq(t.get(x, y), TAU_EQ))
        .collect();
    let witnesses: Vec<_> = pairs
        .filter(|&(x, y)| {
            let (w, cap) = (g.weight(x, y), w_delta.get(x, y));
            w.is_finite() && w > cap && !w.approx_eq(cap, TAU_EQ)
        })
        .collect();
    Ok(MaximalWeightReport {
        geodesic_weight: w_delta,
        generates: mismatches.is_empty(),
        dominates: witnesses.is_empty(),
        mismatches,
        witnesses,
    })
}

/// Geodesics listed per pair are capped at this many.
pub const GEODESIC_LIST_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentReport {
    pub vertices: Vec<VertexId>,
    /// Balls are finite because the component is.
    pub ball_finite: bool,
    pub geodesics_exist: bool,
    /// `δ(x, y) ≥ min_z w(x, z)` for all `y ≠ x`, so each point is isolated.
    pub discrete: bool,
    pub maximal_weight: bool,
    /// `(x, y, number of geodesics)` for `x < y`, counts capped.
    pub geodesic_counts: Vec<(VertexId, VertexId, usize)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub components: Vec<ComponentReport>,
    /// Pairs in different metric components.
    pub unreachable: Vec<(VertexId, VertexId)>,
    pub pass: bool,
}

pub fn finite_equivalence_report(g: &WeightedGraph) -> Result<EquivalenceReport> {
    finite_equivalence_report_with(g, Execution::default())
}

/// Per-component finite consequences of the equivalences. A disconnected
/// graph yields one report per component and lists the cross pairs.
pub fn finite_equivalence_report_with(g: &WeightedGraph, exec: Execution) -> Result<EquivalenceReport> {
    let n = g.n();
    let comp = g.components();
    let t = all_pairs_metric_with(g, exec);
    let maximal = verify_maximal_weight_with(g, exec)?;
    let pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let counts = exec.map_slice(&pairs, |&(x, y)| -> Result<Option<usize>> {
        if comp[x] != comp[y] {
            return Ok(None);
        }
        Ok(Some(enumerate_geodesics(g, x, y, GEODESIC_LIST_CAP)?.paths.len()))
    });
    let counts = counts.into_iter().collect::<Result<Vec<_>>>()?;
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut components = Vec::with_capacity(ncomp);
    for c in 0..ncomp {
        let vertices: Vec<VertexId> = (0..n).filter(|&v| comp[v] == c).collect();
        let geodesic_counts: Vec<_> = pairs
            .iter()
            .zip(&counts)
            .filter(|(&(x, _), _)| comp[x] == c)
            .filter_map(|(&(x, y), k)| k.map(|k| (x, y, k)))
            .collect();
        let geodesics_exist = geodesic_counts.iter().all(|&(_, _, k)| k > 0);
        let discrete = vertices.iter().all(|&x| {
            let Some(eps) = g.neighbors(x).map(|(_, w)| w).min() else {
                return true;
            };
            vertices
                .iter()
                .filter(|&&y| y != x)
                .all(|&y| t.get(x, y) >= eps || t.get(x, y).approx_eq(eps, TAU_EQ))
        });
        let in_comp = |&(x, _): &(VertexId, VertexId)| comp[x] == c;
        let maximal_weight = !maximal.mismatches.iter().any(in_comp) && !maximal.witnesses.iter().any(in_comp);
        components.push(ComponentReport {
            ball_finite: true,
            pass: geodesics_exist && discrete && maximal_weight,
            vertices,
            geodesics_exist,
            discrete,
            maximal_weight,
            geodesic_counts,
        });
    }
    let unreachable: Vec<_> = pairs.into_iter().filter(|&(x, y)| comp[x] != comp[y]).collect();
    Ok(EquivalenceReport {
        pass: components.iter().all(|c| c.pass),
        components,
        unreachable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{unit_cycle_weights, unit_path_weights, weighted_from_edges};
    use num_bigint::BigInt;

    #[test]
    fn ball_scan_examples() {
        let s = family_ball_scan(&Builtin::UnitStar, 0, 1.5, 1000, 500);
        assert_eq!(s.found, 1000);
        assert_eq!(s.verdict, ScanVerdict::ExceedsThreshold);

        let s = family_ball_scan(&Builtin::UnitRay, 0, 3.5, 1000, 500);
        assert_eq!(s.found, 4);
        assert_eq!(s.verdict, ScanVerdict::BoundedSoFar);

        let s = family_ball_scan(&Builtin::DecayingRay, 0, 1.0, 1000, 500);
        assert_eq!(s.found, 1000);
        assert_eq!(s.verdict, ScanVerdict::ExceedsThreshold);

        assert_eq!(family_ball_scan(&Builtin::UnitRay, 5, 1.0, 10, 3).found, 3);
        assert_eq!(family_ball_scan(&Builtin::UnitStar, 0, 1.0, 0, 1).found, 0);
    }

    #[test]
    fn elf_scan_examples() {
        let s = family_elf_scan(&Builtin::UnitStar, 0, 2.0, 1000, 500);
        assert_eq!(s.report.count, 1000);
        assert!(!s.report.exhausted);
        assert_eq!(s.verdict, ScanVerdict::ExceedsThreshold);
        assert_eq!(family_elf_scan(&Builtin::UnitStar, 0, 0.5, 1000, 500).report.count, 0);
        assert_eq!(family_elf_scan(&Builtin::UnitRay, 0, 2.0, 1000, 500).report.count, 1);
        assert_eq!(family_elf_scan(&Builtin::DecayingStar, 0, 0.5, 10, 5).report.count, 8);
    }

    #[test]
    fn decaying_ray_prefixes() {
        let one = Rational::from_integer(BigInt::from(1));
        let e = stream_prefix_evidence(&Builtin::DecayingRay, 200, &one, Execution::default()).unwrap();
        assert!(e.all_below_bound && e.all_geodesic);
        assert_eq!(e.lengths[2], ExactWeight::Finite(Rational::new(3.into(), 4.into())));
        let e = stream_prefix_evidence(&Builtin::UnitRay, 5, &one, Execution::Sequential).unwrap();
        assert!(e.all_geodesic && !e.all_below_bound);
    }

    #[test]
    fn maximal_weight_examples() {
        let r = verify_maximal_weight(&unit_path_weights(3)).unwrap();
        assert!(r.generates && r.dominates);
        assert!(r.geodesic_weight.get(0, 2).is_infinite());
        assert_eq!(r.geodesic_weight.get(0, 1).value(), 1.0);

        let r = verify_maximal_weight(&unit_cycle_weights(4)).unwrap();
        assert!(r.generates && r.dominates);
        assert!(r.geodesic_weight.get(0, 2).is_infinite());
        assert!(r.geodesic_weight.get(1, 3).is_infinite());
        assert_eq!(r.geodesic_weight.get(1, 2).value(), 1.0);

        let metric = all_pairs_metric_with(&unit_cycle_weights(5), Execution::Sequential);
        let r = verify_maximal_weight(&metric.as_weighted_graph().unwrap()).unwrap();
        assert!(r.generates && r.dominates);
        for x in 0..5 {
            for y in 0..5 {
                assert!(r.geodesic_weight.get(x, y) >= metric.get(x, y));
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        let r = finite_equivalence_report(&weighted_from_edges(4, &[(0, 1, 1.0), (1, 2, 2.5), (0, 3, 0.1)])).unwrap();
        assert!(r.pass);
        assert!(r.unreachable.is_empty());

        let r = finite_equivalence_report(&unit_cycle_weights(4)).unwrap();
        assert!(r.pass);
        let counts = &r.components[0].geodesic_counts;
        assert!(counts.contains(&(0, 2, 2)) && counts.contains(&(1, 3, 2)));
        assert!(counts.contains(&(0, 1, 1)));

        let r = finite_equivalence_report(&weighted_from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)])).unwrap();
        assert!(r.pass);
        assert_eq!(r.components.len(), 2);
        assert_eq!(r.unreachable, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }
}
