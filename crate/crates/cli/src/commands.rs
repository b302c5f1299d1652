use std::fs;

use serde_json::{json, Value};

use pathmetric::hopf_rinow::{family_ball_scan, family_elf_scan, finite_equivalence_report, verify_maximal_weight, Builtin, GraphFamily};
use pathmetric::metric::{all_pairs_metric, enumerate_geodesics, path_length, path_metric, MetricTable};
use pathmetric::oracle::{brute_metric, brute_metric_table, spanning_tree_resistance_table, ExactWeight};
use pathmetric::parse::{conductance_to_edge_list, parse_conductance, parse_weighted, to_edge_list};
use pathmetric::resistance::{effective_resistance, energy, harmonic_maximizer, resistance_matrix};
use pathmetric::structure::{
    check_tree_theorem, check_triangle_equality, compatible_resistance_weight, is_block_graph, separates, Compatibility,
    MetricMismatch, Separation,
};
use pathmetric::tolerance::TAU_EQ;
use pathmetric::{ConductanceGraph, Error, ExtendedWeight, Labels, VertexId, WeightedGraph};

use crate::report::{digest, exact, num, weight, Report};
use crate::{CharacterizeArgs, Command, FamilyArgs, GeodesicsArgs, GraphMode, InputArgs, MetricArgs, ResistanceArgs, ScanMode};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_QUERY: u8 = 3;
pub const EXIT_CAP: u8 = 4;
pub const EXIT_INTERNAL: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Asymmetry { .. }
            | Error::Diagonal { .. }
            | Error::NegativeWeight { .. }
            | Error::ZeroWeight { .. }
            | Error::InvalidWeight(_)
            | Error::SizeMismatch { .. }
            | Error::EmptyInput
            | Error::MixedStart
            | Error::DuplicatePath
            | Error::InvalidThreshold(_) => EXIT_INPUT,
            Error::UnknownVertex(_)
            | Error::InvalidPath(_)
            | Error::Unreachable(..)
            | Error::SameVertex
            | Error::NotDistinct
            | Error::Disconnected => EXIT_QUERY,
            Error::TooLarge { .. } => EXIT_CAP,
            Error::InvalidMetric { .. } => EXIT_INTERNAL,
        };
        Self::new(code, e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(command: &Command) -> CliResult<Report> {
    match command {
        Command::Metric(a) => metric(a),
        Command::Geodesics(a) => geodesics(a),
        Command::GeodesicWeight(a) => geodesic_weight(a),
        Command::Resistance(a) => resistance(a),
        Command::Characterize(a) => characterize(a),
        Command::Family(a) => family(a),
    }
}

fn read(input: &InputArgs) -> CliResult<String> {
    fs::read_to_string(&input.file).map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", input.file.display())))
}

/// Weight-mode graph, inverting conductances if asked to read them.
fn load_weighted(input: &InputArgs, command: &str) -> CliResult<(WeightedGraph, Report)> {
    let text = read(input)?;
    if input.mode == Some(GraphMode::Conductance) {
        let b = parse_conductance(&text)?;
        let mut report = Report::new(command, digest(&conductance_to_edge_list(&b)));
        report.note("conductances read as weights 1/b");
        return Ok((b.inverse_weights(), report));
    }
    let g = parse_weighted(&text)?;
    let report = Report::new(command, digest(&to_edge_list(&g)));
    Ok((g, report))
}

/// Conductance-mode graph, inverting weights if asked to read them.
fn load_conductance(input: &InputArgs, command: &str) -> CliResult<(ConductanceGraph, Report)> {
    let text = read(input)?;
    if input.mode == Some(GraphMode::Weight) {
        let g = parse_weighted(&text)?;
        let mut report = Report::new(command, digest(&to_edge_list(&g)));
        report.note("weights read as conductances 1/w");
        return Ok((g.inverse_conductances(), report));
    }
    let b = parse_conductance(&text)?;
    let report = Report::new(command, digest(&conductance_to_edge_list(&b)));
    Ok((b, report))
}

fn labels_value(labels: &Labels) -> Value {
    json!(labels.names())
}

fn label_list(labels: &Labels, vertices: &[VertexId]) -> Value {
    json!(vertices.iter().map(|&v| labels.name(v)).collect::<Vec<_>>())
}

fn table_value(t: &MetricTable) -> Value {
    let n = t.n();
    json!((0..n).map(|x| (0..n).map(|y| weight(t.get(x, y))).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn exact_table_value(n: usize, exact: &[ExactWeight]) -> Value {
    json!((0..n)
        .map(|x| (0..n).map(|y| crate::report::exact(&exact[x * n + y])).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn discrepancy(float: ExtendedWeight, exact: &ExactWeight) -> f64 {
    let e = exact.to_f64();
    match (float.is_infinite(), e.is_infinite()) {
        (true, true) => 0.0,
        (false, false) => (float.value() - e).abs(),
        _ => f64::INFINITY,
    }
}

/// Post-hoc guard: a computed table must satisfy the pseudo-metric axioms.
fn guard_metric(t: &MetricTable, what: &str) -> CliResult<()> {
    match t.validate(TAU_EQ).first() {
        None => Ok(()),
        Some(d) => Err(CliError::new(EXIT_INTERNAL, format!("internal error: {what} fails a metric axiom: {}", d.detail))),
    }
}

fn metric(a: &MetricArgs) -> CliResult<Report> {
    let (g, mut report) = load_weighted(&a.input, "metric")?;
    if let (Some(s), Some(t)) = (&a.source, &a.target) {
        let (x, y) = (g.vertex(s)?, g.vertex(t)?);
        let d = path_metric(&g, x, y)?;
        report.set("source", json!(s));
        report.set("target", json!(t));
        report.set("distance", weight(d));
        if a.oracle {
            let e = brute_metric(&g, x, y)?;
            report.set("oracle", json!({ "distance": exact(&e), "discrepancy": num(discrepancy(d, &e)) }));
        }
        return Ok(report);
    }
    let t = all_pairs_metric(&g);
    guard_metric(&t, "path metric")?;
    report.set("labels", labels_value(g.labels()));
    report.set("distance", table_value(&t));
    if a.oracle {
        let e = brute_metric_table(&g)?;
        let n = g.n();
        let worst = (0..n * n).map(|i| discrepancy(t.get(i / n, i % n), &e[i])).fold(0.0, f64::max);
        report.set("oracle", json!({ "distance": exact_table_value(n, &e), "max_discrepancy": num(worst) }));
    }
    Ok(report)
}

fn geodesics(a: &GeodesicsArgs) -> CliResult<Report> {
    let (g, mut report) = load_weighted(&a.input, "geodesics")?;
    let (x, y) = (g.vertex(&a.source)?, g.vertex(&a.target)?);
    let set = enumerate_geodesics(&g, x, y, a.cap).map_err(|e| match e {
        Error::Unreachable(..) => CliError::new(EXIT_QUERY, format!("unreachable: no finite path from {} to {}", a.source, a.target)),
        other => other.into(),
    })?;
    let paths = set
        .paths
        .iter()
        .map(|p| -> CliResult<Value> {
            Ok(json!({ "path": label_list(g.labels(), p.vertices()), "length": weight(path_length(&g, p)?) }))
        })
        .collect::<CliResult<Vec<_>>>()?;
    report.set("source", json!(a.source));
    report.set("target", json!(a.target));
    report.set(
        "geodesics",
        json!({ "distance": weight(set.distance), "paths": paths, "truncated": set.truncated }),
    );
    Ok(report)
}

fn pair_labels(labels: &Labels, pairs: &[(VertexId, VertexId)]) -> Value {
    json!(pairs.iter().map(|&(x, y)| [labels.name(x), labels.name(y)]).collect::<Vec<_>>())
}

fn geodesic_weight(input: &InputArgs) -> CliResult<Report> {
    let (g, mut report) = load_weighted(input, "geodesic-weight")?;
    let m = verify_maximal_weight(&g)?;
    let eq = finite_equivalence_report(&g)?;
    let n = g.n();
    let table: Vec<Vec<Value>> = (0..n).map(|x| (0..n).map(|y| weight(m.geodesic_weight.get(x, y))).collect()).collect();
    report.set("labels", labels_value(g.labels()));
    report.set("geodesic_weight", json!(table));
    report.set("verdict", json!({ "generates": m.generates, "dominates": m.dominates, "equivalence_pass": eq.pass }));
    report.set(
        "counterexample",
        json!({ "not_generated": pair_labels(g.labels(), &m.mismatches), "not_dominated": pair_labels(g.labels(), &m.witnesses) }),
    );
    if !eq.unreachable.is_empty() {
        report.note(format!(
            "{} components; {} pairs unreachable, checks run per component",
            eq.components.len(),
            eq.unreachable.len()
        ));
    }
    Ok(report)
}

fn component_of(b: &ConductanceGraph, v: VertexId) -> Vec<VertexId> {
    let comp = b.components();
    (0..b.n()).filter(|&u| comp[u] == comp[v]).collect()
}

/// Exact resistance table, enumerated per component; `∞` across components.
fn exact_resistance_table(b: &ConductanceGraph) -> CliResult<Vec<ExactWeight>> {
    let n = b.n();
    let mut out = vec![ExactWeight::Infinite; n * n];
    let mut done = vec![false; n];
    for v in 0..n {
        if done[v] {
            continue;
        }
        let members = component_of(b, v);
        let sub = b.induced(&members)?;
        let t = spanning_tree_resistance_table(&sub)?;
        let k = members.len();
        for (i, &x) in members.iter().enumerate() {
            done[x] = true;
            for (j, &y) in members.iter().enumerate() {
                out[x * n + y] = ExactWeight::Finite(t[i * k + j].clone());
            }
        }
    }
    Ok(out)
}

fn resistance(a: &ResistanceArgs) -> CliResult<Report> {
    let (b, mut report) = load_conductance(&a.input, "resistance")?;
    let r = resistance_matrix(&b);
    guard_metric(&r, "resistance")?;
    let Some(pair) = &a.pair else {
        report.set("labels", labels_value(b.labels()));
        report.set("resistance", table_value(&r));
        if a.oracle {
            let e = exact_resistance_table(&b)?;
            let n = b.n();
            let worst = (0..n * n).map(|i| discrepancy(r.get(i / n, i % n), &e[i])).fold(0.0, f64::max);
            report.set("oracle", json!({ "resistance": exact_table_value(n, &e), "max_discrepancy": num(worst) }));
        }
        return Ok(report);
    };
    let (x, y) = (b.vertex(&pair[0])?, b.vertex(&pair[1])?);
    let value = effective_resistance(&b, x, y)?;
    report.set("source", json!(pair[0]));
    report.set("target", json!(pair[1]));
    report.set("resistance", weight(value));
    if a.oracle {
        let e = if b.components()[x] != b.components()[y] {
            ExactWeight::Infinite
        } else {
            let members = component_of(&b, x);
            let sub = b.induced(&members)?;
            let k = members.len();
            let i = members.iter().position(|&v| v == x).unwrap();
            let j = members.iter().position(|&v| v == y).unwrap();
            ExactWeight::Finite(spanning_tree_resistance_table(&sub)?.swap_remove(i * k + j))
        };
        report.set("oracle", json!({ "resistance": exact(&e), "discrepancy": num(discrepancy(value, &e)) }));
    }
    if a.maximizer {
        let m = harmonic_maximizer(&b, x, y)?;
        let potential: serde_json::Map<String, Value> =
            (0..b.n()).map(|v| (b.label(v).to_string(), num(m.potential.get(v)))).collect();
        report.set(
            "maximizer",
            json!({
                "potential": potential,
                "energy": num(energy(&b, &m.potential)?.total),
                "residual": num(m.residual),
            }),
        );
    }
    Ok(report)
}

fn mismatch_value(labels: &Labels, m: &Option<MetricMismatch>) -> Value {
    match m {
        None => Value::Null,
        Some(m) => json!({
            "pair": [labels.name(m.x), labels.name(m.y)],
            "path_metric": weight(m.path_metric),
            "resistance": weight(m.resistance),
        }),
    }
}

fn characterize(a: &CharacterizeArgs) -> CliResult<Report> {
    let (b, mut report) = load_conductance(&a.input, "characterize")?;
    let labels = b.labels().clone();
    let all = !a.tree && !a.block && a.triangle.is_none();
    if a.tree || all {
        let t = check_tree_theorem(&b, TAU_EQ)?;
        report.set(
            "tree",
            json!({
                "is_tree": t.is_tree,
                "metrics_equal": t.metrics_equal,
                "consistent": t.consistent,
                "counterexample": mismatch_value(&labels, &t.mismatch),
            }),
        );
    }
    if a.block || all {
        let blocks = is_block_graph(&b)?;
        let c = compatible_resistance_weight(&b)?;
        let certificate = c.weight.as_ref().map_or(Value::Null, |w| {
            let edges: Vec<Value> = w
                .edges()
                .map(|(x, y, v)| json!({ "pair": [labels.name(x), labels.name(y)], "weight": weight(v) }))
                .collect();
            json!({ "weight": edges })
        });
        let compatible = c.verdict == Compatibility::Compatible;
        report.set(
            "block",
            json!({
                "verdict": if compatible { "COMPATIBLE" } else { "INCOMPATIBLE" },
                "is_block_graph": blocks.is_block_graph,
                "consistent": compatible == blocks.is_block_graph,
                "offending_block": blocks.offending.as_ref().map_or(Value::Null, |blk| label_list(&labels, blk)),
                "locally_finite": blocks.locally_finite,
                "certificate": certificate,
                "counterexample": mismatch_value(&labels, &c.counterexample),
            }),
        );
    }
    if let Some(names) = &a.triangle {
        let (x, y, z) = (b.vertex(&names[0])?, b.vertex(&names[1])?, b.vertex(&names[2])?);
        let t = check_triangle_equality(&b, x, y, z, TAU_EQ)?;
        let (certificate, witness) = match separates(&b, y, x, z)? {
            Separation::Separated(c) => {
                let side = |s: &std::collections::BTreeSet<VertexId>| label_list(&labels, &s.iter().copied().collect::<Vec<_>>());
                (
                    json!({
                        "separator": labels.name(c.separator),
                        "side_x": side(&c.side_x),
                        "side_z": side(&c.side_z),
                        "verified": c.verified,
                    }),
                    Value::Null,
                )
            }
            Separation::NotSeparated { witness } => (Value::Null, label_list(&labels, witness.vertices())),
        };
        report.set(
            "triangle",
            json!({
                "triple": names,
                "lhs": num(t.lhs),
                "rhs": num(t.rhs),
                "equal": t.equal,
                "separated": t.separated,
                "consistent": t.consistent,
                "certificate": certificate,
                "counterexample": witness,
            }),
        );
    }
    Ok(report)
}

fn family(a: &FamilyArgs) -> CliResult<Report> {
    let fam: Builtin = a.name.parse().map_err(|e: String| CliError::new(EXIT_INPUT, e))?;
    let center = match &a.center {
        None => 0,
        Some(c) => fam
            .parse_descriptor(c)
            .ok_or_else(|| CliError::new(EXIT_QUERY, format!("unknown vertex {c} in {}", fam.name())))?,
    };
    let budget = a.budget as usize;
    let threshold = a.threshold.map_or(budget, |t| t as usize);
    let mut report = Report::new("family", digest(&format!("family {}", fam.name())));
    let mut scan = serde_json::Map::new();
    scan.insert("family".into(), json!(fam.name()));
    scan.insert("center".into(), json!(fam.descriptor(center)));
    scan.insert("radius".into(), num(a.radius));
    scan.insert("budget".into(), json!(budget));
    scan.insert("threshold".into(), json!(threshold));
    match a.mode {
        ScanMode::Ball => {
            let s = family_ball_scan(&fam, center, a.radius, budget, threshold);
            scan.insert("mode".into(), json!("ball"));
            scan.insert("found".into(), json!(s.found));
            scan.insert("verdict".into(), json!(s.verdict.to_string()));
        }
        ScanMode::Elf => {
            let s = family_elf_scan(&fam, center, a.radius, budget, threshold);
            scan.insert("mode".into(), json!("elf"));
            scan.insert("count".into(), json!(s.report.count));
            scan.insert("exhausted".into(), json!(s.report.exhausted));
            scan.insert("verdict".into(), json!(s.verdict.to_string()));
        }
    }
    report.set("scan", Value::Object(scan));
    report.note("finite scans give evidence only; an infinite family is never exhausted");
    Ok(report)
}
