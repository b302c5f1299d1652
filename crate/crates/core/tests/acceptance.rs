//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pathmetric::generate::{
    random_connected_conductance, random_connected_non_tree, random_integer_weighted_graph, random_tree,
    random_weighted_graph, unit_complete, unit_cycle, unit_path,
};
use pathmetric::hopf_rinow::{
    extract_common_prefix_path, family_ball_scan, family_elf_scan, stream_prefix_evidence, verify_maximal_weight, Builtin,
    ScanVerdict,
};
use pathmetric::metric::{all_pairs_metric, path_metric};
use pathmetric::oracle::{brute_metric_table, is_block_graph_by_definition, spanning_tree_resistance, ExactWeight, Rational};
use pathmetric::resistance::{effective_resistance, harmonic_maximizer, resistance_matrix, verify_variational};
use pathmetric::structure::{
    check_tree_theorem, check_triangle_equality_in, compatible_resistance_weight, is_block_graph, separates, Compatibility,
    Separation,
};
use pathmetric::{ConductanceGraph, Execution, ExtendedWeight, Path, VertexId, WeightOracle, WeightedGraph};

const TOL_METRIC: f64 = 1e-9;
const TOL_RESISTANCE: f64 = 1e-9;
const TOL_HARMONIC: f64 = 1e-8;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn rng(stream: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream * 1_000_003 + i as u64)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    ExtendedWeight::from_f64(a).approx_eq(ExtendedWeight::from_f64(b), tol)
}

/// The weighted suite shared by criteria 1 to 3: 150 graphs with weights in
/// tenths and 150 with small integer weights, `n ≤ 9`, missing pairs `∞`.
fn weighted_suite() -> Vec<(WeightedGraph, bool)> {
    (0..300)
        .map(|i| {
            let mut r = rng(1, i);
            let n = r.gen_range(2..=9);
            let p = r.gen_range(0.2..0.9);
            if i % 2 == 0 {
                (random_weighted_graph(&mut r, n, p), false)
            } else {
                (random_integer_weighted_graph(&mut r, n, p, 10), true)
            }
        })
        .collect()
}

fn pairs(n: usize) -> impl Iterator<Item = (VertexId, VertexId)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)))
}

fn criterion_1(suite: &[(WeightedGraph, bool)]) -> Outcome {
    let start = Instant::now();
    let failures: usize = suite
        .par_iter()
        .map(|(g, integral)| {
            let exact = brute_metric_table(g).expect("suite graphs are within the oracle cap");
            let t = all_pairs_metric(g);
            pairs(g.n())
                .filter(|&(x, y)| {
                    let fast = path_metric(g, x, y).unwrap();
                    let brute = &exact[x * g.n() + y];
                    let agree = |d: ExtendedWeight| match brute {
                        ExactWeight::Infinite => d.is_infinite(),
                        ExactWeight::Finite(_) if *integral => d.value() == brute.to_f64(),
                        ExactWeight::Finite(_) => rel_close(d.value(), brute.to_f64(), TOL_METRIC),
                    };
                    !(agree(fast) && agree(t.get(x, y)))
                })
                .count()
        })
        .sum();
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(30),
        format!("{} graphs, {failures} mismatching pairs, {:.2?} (limit 30 s)", suite.len(), elapsed),
    )
}

fn criterion_2(suite: &[(WeightedGraph, bool)]) -> Outcome {
    let failures: usize = suite
        .par_iter()
        .map(|(g, _)| {
            let t = all_pairs_metric(g);
            let above_weight = pairs(g.n()).filter(|&(x, y)| x != y && t.get(x, y) > g.weight(x, y)).count();
            let regenerated = all_pairs_metric(&t.as_weighted_graph().expect("distances are positive"));
            above_weight + usize::from(regenerated != t)
        })
        .sum();
    outcome(failures == 0, format!("{} graphs, {failures} violations (exact comparison)", suite.len()))
}

fn criterion_3(suite: &[(WeightedGraph, bool)]) -> Outcome {
    let (mismatches, witnesses): (usize, usize) = suite
        .par_iter()
        .map(|(g, _)| {
            let r = verify_maximal_weight(g).expect("closed tables satisfy the triangle inequality");
            (r.mismatches.len(), r.witnesses.len())
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    outcome(
        mismatches + witnesses == 0,
        format!("{} graphs, {mismatches} generation mismatches, {witnesses} domination violations", suite.len()),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let q = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
    let cases: [(&str, ConductanceGraph, VertexId, VertexId, Rational); 4] = [
        ("triangle", unit_complete(3), 0, 1, q(2, 3)),
        ("4-cycle adjacent", unit_cycle(4), 0, 1, q(3, 4)),
        ("4-cycle opposite", unit_cycle(4), 0, 2, q(1, 1)),
        ("path endpoints", unit_path(3), 0, 2, q(2, 1)),
    ];
    let mut bad = Vec::new();
    for (name, b, x, y, expected) in &cases {
        let exact = spanning_tree_resistance(b, *x, *y).unwrap();
        let solved = effective_resistance(b, *x, *y).unwrap().value();
        let matrix = resistance_matrix(b).get(*x, *y).value();
        let target = ExactWeight::Finite(expected.clone()).to_f64();
        if exact != *expected || !rel_close(solved, target, TOL_RESISTANCE) || !rel_close(matrix, target, TOL_RESISTANCE) {
            bad.push(*name);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(1),
        format!("4 values, failing: {bad:?}, {elapsed:.2?} (limit 1 s)"),
    )
}

#[derive(Default)]
struct TriangleTally {
    triples: usize,
    separated: usize,
    inconsistent: usize,
    thin_margin: usize,
    bad_certificates: usize,
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let tallies: Vec<TriangleTally> = (0..200)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(5, i);
            let n = r.gen_range(3..=9);
            let p = r.gen_range(0.0..0.6);
            let b = random_connected_conductance(&mut r, n, p, 3);
            let table = resistance_matrix(&b);
            let mut t = TriangleTally::default();
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if x == y || y == z || x == z {
                            continue;
                        }
                        t.triples += 1;
                        let rep = check_triangle_equality_in(&b, &table, x, y, z, TOL_RESISTANCE).unwrap();
                        t.inconsistent += usize::from(!rep.consistent);
                        if rep.separated {
                            t.separated += 1;
                        } else if !(rep.margin() > TOL_RESISTANCE) {
                            t.thin_margin += 1;
                        }
                        if let Separation::Separated(cert) = separates(&b, y, x, z).unwrap() {
                            t.bad_certificates += usize::from(!(cert.verified && cert.check(&b)));
                        }
                    }
                }
            }
            t
        })
        .collect();
    let sum = |f: fn(&TriangleTally) -> usize| tallies.iter().map(f).sum::<usize>();
    let (triples, separated) = (sum(|t| t.triples), sum(|t| t.separated));
    let (inconsistent, thin, certs) = (sum(|t| t.inconsistent), sum(|t| t.thin_margin), sum(|t| t.bad_certificates));
    let elapsed = start.elapsed();
    outcome(
        inconsistent + thin + certs == 0 && elapsed < Duration::from_secs(120),
        format!(
            "200 graphs, {triples} ordered triples ({separated} separated), {inconsistent} inconsistent, \
             {thin} margins <= 1e-9, {certs} bad certificates, {elapsed:.2?} (limit 120 s)"
        ),
    )
}

fn criterion_6() -> Outcome {
    let results: Vec<(bool, bool)> = (0..200)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(6, i);
            let b = if i < 100 {
                let n = r.gen_range(1..=9);
                random_tree(&mut r, n, 3)
            } else {
                let n = r.gen_range(3..=9);
                let p = r.gen_range(0.0..0.6);
                random_connected_non_tree(&mut r, n, p, 3)
            };
            let rep = check_tree_theorem(&b, TOL_RESISTANCE).unwrap();
            (rep.consistent, rep.is_tree == (i < 100))
        })
        .collect();
    let inconsistent = results.iter().filter(|r| !r.0).count();
    let misgenerated = results.iter().filter(|r| !r.1).count();
    outcome(
        inconsistent + misgenerated == 0,
        format!("100 trees + 100 non-trees, {inconsistent} inconsistent, {misgenerated} misclassified inputs"),
    )
}

fn criterion_7() -> Outcome {
    let results: Vec<(bool, bool)> = (0..200)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(7, i);
            let n = r.gen_range(2..=8);
            let p = r.gen_range(0.0..0.7);
            let b = random_connected_conductance(&mut r, n, p, 3);
            let compatible = compatible_resistance_weight(&b).unwrap().verdict == Compatibility::Compatible;
            let blocks = is_block_graph(&b).unwrap().is_block_graph;
            let definition = is_block_graph_by_definition(&b).unwrap();
            (compatible == blocks && blocks == definition, blocks)
        })
        .collect();
    let inconsistent = results.iter().filter(|r| !r.0).count();
    let block_graphs = results.iter().filter(|r| r.1).count();
    outcome(
        inconsistent == 0,
        format!("200 graphs ({block_graphs} block graphs), {inconsistent} inconsistent"),
    )
}

fn criterion_8() -> Outcome {
    let results: Vec<(usize, usize, f64)> = (0..20)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(8, i);
            let n = r.gen_range(2..=9);
            let p = r.gen_range(0.0..0.6);
            let b = random_connected_conductance(&mut r, n, p, 3);
            let (mut checked, mut failed, mut worst) = (0, 0, 0.0f64);
            for x in 0..n {
                for y in 0..n {
                    if x == y {
                        continue;
                    }
                    checked += 1;
                    let m = harmonic_maximizer(&b, x, y).unwrap();
                    worst = worst.max(m.residual);
                    let v = verify_variational(&b, x, y, 1000, (i * 100 + x * 10 + y) as u64).unwrap();
                    failed += usize::from(m.residual > TOL_HARMONIC || !v.holds());
                }
            }
            (checked, failed, worst)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    let failed: usize = results.iter().map(|r| r.1).sum();
    let worst = results.iter().map(|r| r.2).fold(0.0, f64::max);
    outcome(
        failed == 0,
        format!("20 graphs, {checked} ordered pairs x 1000 potentials, {failed} failures, worst residual {worst:.1e}"),
    )
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let budget = 1000;
    for threshold in [1, 10, 500, budget] {
        let s = family_elf_scan(&Builtin::UnitStar, 0, 2.0, budget, threshold);
        if s.report.count != budget || s.verdict != ScanVerdict::ExceedsThreshold {
            failures.push(format!("unit-star elf threshold {threshold}"));
        }
        let s = family_ball_scan(&Builtin::DecayingRay, 0, 1.0, budget, threshold);
        if s.found != budget || s.verdict != ScanVerdict::ExceedsThreshold {
            failures.push(format!("decaying-ray ball threshold {threshold}"));
        }
    }
    for radius in [0.5f64, 1.0, 3.5, 7.0, 12.25, 40.9] {
        let expected = radius.floor() as usize + 1;
        for budget in [expected + 1, 100, 1000] {
            let s = family_ball_scan(&Builtin::UnitRay, 0, radius, budget, budget);
            if s.found != expected {
                failures.push(format!("unit-ray radius {radius} budget {budget}: {}", s.found));
            }
        }
    }
    let one = Rational::from_integer(BigInt::from(1));
    let e = stream_prefix_evidence(&Builtin::DecayingRay, budget - 1, &one, Execution::default()).unwrap();
    if !(e.all_below_bound && e.all_geodesic && e.lengths.len() == budget) {
        failures.push("decaying-ray prefixes".into());
    }
    outcome(failures.is_empty(), format!("failing: {failures:?}"))
}

/// Weight oracle for extracted paths: deterministic, positive, symmetric.
struct Staggered;

impl WeightOracle for Staggered {
    fn weight(&self, x: VertexId, y: VertexId) -> ExtendedWeight {
        if x == y {
            ExtendedWeight::ZERO
        } else {
            ExtendedWeight::from_f64(1.0 + ((x + y) % 3) as f64)
        }
    }
}

/// One planted path cut to several prefixes, plus noise paths that leave the
/// planted path at random points and continue through fresh vertices.
fn planted_construction(r: &mut ChaCha8Rng) -> (Vec<VertexId>, Vec<usize>, Vec<Path>) {
    let len = r.gen_range(4..=30);
    let mut pool: Vec<VertexId> = (0..200).collect();
    rand::seq::SliceRandom::shuffle(pool.as_mut_slice(), r);
    let planted: Vec<VertexId> = pool[..len].to_vec();
    let mut fresh = 1000;
    let cuts: BTreeSet<usize> = (0..r.gen_range(2..=6)).map(|_| r.gen_range(2..=len)).collect();
    let mut cuts: Vec<usize> = cuts.into_iter().collect();
    if cuts.len() < 2 {
        cuts.insert(0, 1);
    }
    let mut paths: Vec<Path> = cuts.iter().map(|&c| Path::new(planted[..c].to_vec()).unwrap()).collect();
    for _ in 0..r.gen_range(0..=12) {
        let branch = r.gen_range(1..len);
        let mut v = planted[..branch].to_vec();
        for _ in 0..r.gen_range(1..=5) {
            v.push(fresh);
            fresh += 1;
        }
        paths.push(Path::new(v).unwrap());
    }
    rand::seq::SliceRandom::shuffle(paths.as_mut_slice(), r);
    (planted, cuts, paths)
}

fn criterion_10() -> Outcome {
    let failures = (0..100)
        .filter(|&i| {
            let mut r = rng(10, i);
            let (planted, cuts, paths) = planted_construction(&mut r);
            let second_longest = cuts[cuts.len() - 2];
            let out = extract_common_prefix_path(&paths, &Staggered, 2).unwrap();
            let v = out.path.vertices();
            let is_prefix = planted.starts_with(v);
            let levels_ok = out.multiplicities.iter().all(|&m| m >= 2);
            !(is_prefix && v.len() >= second_longest && levels_ok && out.length <= out.max_input_length)
        })
        .count();
    outcome(failures == 0, format!("100 constructions, {failures} failures"))
}

fn main() {
    let suite = weighted_suite();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("metric-oracle equivalence", Box::new(|| criterion_1(&suite))),
        ("path metric below weight and idempotent", Box::new(|| criterion_2(&suite))),
        ("geodesic weight generates and dominates", Box::new(|| criterion_3(&suite))),
        ("resistance exact values", Box::new(criterion_4)),
        ("triangle equality iff separation", Box::new(criterion_5)),
        ("tree theorem", Box::new(criterion_6)),
        ("block-graph theorem", Box::new(criterion_7)),
        ("harmonicity and variational bound", Box::new(criterion_8)),
        ("family scans", Box::new(criterion_9)),
        ("common-prefix extractor", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let mark = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark}: {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.ok);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
