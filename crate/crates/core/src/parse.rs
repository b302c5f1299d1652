//! Edge-list text format.
//!
//! ```text
//! # comment
//! vertex lonely
//! a b 1.5
//! b c inf
//! ```
//!
//! One edge per line as `<label> <label> <value>`, where the value is a
//! nonnegative decimal or `inf`. Labels get dense ids in order of first
//! appearance. The same text is read either as weights (absent pair = `∞`)
//! or as conductances (absent pair = `0`).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{ConductanceGraph, Labels, VertexId, WeightedGraph};
use crate::weight::ExtendedWeight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Weight,
    Conductance,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "weight" => Ok(Mode::Weight),
            "conductance" => Ok(Mode::Conductance),
            other => Err(format!("unknown mode {other:?} (expected weight or conductance)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedGraph {
    Weight(WeightedGraph),
    Conductance(ConductanceGraph),
}

struct RawEdge {
    line: usize,
    a: VertexId,
    b: VertexId,
    value: f64,
    text: String,
}

struct RawDocument {
    labels: Labels,
    edges: Vec<RawEdge>,
}

fn parse_value(token: &str, line: usize) -> Result<f64> {
    if token == "inf" {
        return Ok(f64::INFINITY);
    }
    let numeric = token
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
        && token.chars().any(|c| c.is_ascii_digit());
    let parsed = if numeric { token.parse::<f64>().ok() } else { None };
    match parsed {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            line,
            message: format!("expected a nonnegative decimal or `inf`, found {token:?}"),
        }),
    }
}

fn read_document(text: &str) -> Result<RawDocument> {
    let mut labels = Labels::default();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["vertex", name] => {
                labels.push(name);
            }
            [a, b, value] => {
                let value_f = parse_value(value, line)?;
                let a = labels.push(a);
                let b = labels.push(b);
                edges.push(RawEdge {
                    line,
                    a,
                    b,
                    value: value_f,
                    text: (*value).to_owned(),
                });
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `<label> <label> <value>` or `vertex <label>`, found {content:?}"),
                })
            }
        }
    }
    Ok(RawDocument { labels, edges })
}

/// Applies the duplicate/sign/diagonal rules shared by both modes and
/// returns one value per unordered pair, in input order.
fn resolve_pairs(doc: &RawDocument, mode: Mode) -> Result<Vec<(VertexId, VertexId, f64)>> {
    let mut seen: HashMap<(VertexId, VertexId), (f64, String)> = HashMap::new();
    let mut out = Vec::new();
    for e in &doc.edges {
        let (la, lb) = (doc.labels.name(e.a).to_owned(), doc.labels.name(e.b).to_owned());
        if e.value < 0.0 {
            return Err(Error::NegativeWeight {
                line: e.line,
                a: la,
                b: lb,
                value: e.text.clone(),
            });
        }
        if e.a == e.b {
            if mode == Mode::Weight && e.value == 0.0 {
                continue;
            }
            return Err(Error::Diagonal { line: e.line, label: la });
        }
        match mode {
            Mode::Weight if e.value == 0.0 => return Err(Error::ZeroWeight { line: e.line, a: la, b: lb }),
            Mode::Conductance if e.value.is_infinite() => {
                return Err(Error::Parse {
                    line: e.line,
                    message: "conductances must be finite".into(),
                })
            }
            _ => {}
        }
        let key = (e.a.min(e.b), e.a.max(e.b));
        match seen.get(&key) {
            Some((v, _)) if *v == e.value => {}
            Some((_, first)) => {
                return Err(Error::Asymmetry {
                    line: e.line,
                    a: la,
                    b: lb,
                    first: first.clone(),
                    second: e.text.clone(),
                })
            }
            None => {
                seen.insert(key, (e.value, e.text.clone()));
                out.push((key.0, key.1, e.value));
            }
        }
    }
    Ok(out)
}

pub fn parse_weighted(text: &str) -> Result<WeightedGraph> {
    let doc = read_document(text)?;
    let pairs = resolve_pairs(&doc, Mode::Weight)?;
    let mut g = WeightedGraph::with_labels(doc.labels);
    for (a, b, v) in pairs {
        g.set_weight(a, b, ExtendedWeight::new(v)?)?;
    }
    Ok(g)
}

pub fn parse_conductance(text: &str) -> Result<ConductanceGraph> {
    let doc = read_document(text)?;
    let pairs = resolve_pairs(&doc, Mode::Conductance)?;
    let mut g = ConductanceGraph::with_labels(doc.labels);
    for (a, b, v) in pairs {
        g.set_conductance(a, b, v)?;
    }
    Ok(g)
}

pub fn parse_graph(text: &str, mode: Mode) -> Result<ParsedGraph> {
    match mode {
        Mode::Weight => parse_weighted(text).map(ParsedGraph::Weight),
        Mode::Conductance => parse_conductance(text).map(ParsedGraph::Conductance),
    }
}

fn write_canonical<I>(labels: &Labels, edges: I) -> String
where
    I: Iterator<Item = (VertexId, VertexId, f64)>,
{
    let mut out = String::new();
    for name in labels.names() {
        writeln!(out, "vertex {name}").unwrap();
    }
    for (a, b, v) in edges {
        // `{}` on f64 is the shortest representation that reads back exactly
        writeln!(out, "{} {} {}", labels.name(a), labels.name(b), v).unwrap();
    }
    out
}

/// Canonical edge list: every vertex declared in id order, then finite edges
/// `x < y` in lexicographic order.
pub fn to_edge_list(g: &WeightedGraph) -> String {
    write_canonical(g.labels(), g.edges().map(|(a, b, w)| (a, b, w.value())))
}

pub fn conductance_to_edge_list(g: &ConductanceGraph) -> String {
    write_canonical(g.labels(), g.edges())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn path_graph() {
        let g = parse_weighted("a b 1\nb c 1").unwrap();
        assert_eq!(g.n(), 3);
        let (a, b, c) = (g.vertex("a").unwrap(), g.vertex("b").unwrap(), g.vertex("c").unwrap());
        assert_eq!((a, b, c), (0, 1, 2));
        assert_eq!(g.weight(a, b).value(), 1.0);
        assert_eq!(g.weight(b, c).value(), 1.0);
        assert_eq!(g.weight(a, c), ExtendedWeight::INFINITY);
    }

    #[test]
    fn inf_token_keeps_vertices() {
        let g = parse_weighted("a b inf").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.weight(0, 1), ExtendedWeight::INFINITY);
    }

    #[test]
    fn conflicting_duplicate_is_asymmetry() {
        assert!(matches!(parse_weighted("a b 1\nb a 2"), Err(Error::Asymmetry { line: 2, .. })));
        assert!(matches!(parse_conductance("a b 1\na b 2"), Err(Error::Asymmetry { .. })));
        // agreeing duplicates are fine
        assert!(parse_weighted("a b 1\nb a 1").is_ok());
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(parse_weighted("a b"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_weighted("a b x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_weighted("a b nan"), Err(Error::Parse { .. })));
        assert!(matches!(parse_weighted("a b -1"), Err(Error::NegativeWeight { .. })));
        assert!(matches!(parse_weighted("a a 1"), Err(Error::Diagonal { .. })));
        assert!(matches!(parse_weighted("a b 0"), Err(Error::ZeroWeight { .. })));
        assert!(matches!(parse_conductance("a a 0"), Err(Error::Diagonal { .. })));
        assert!(matches!(parse_conductance("a b inf"), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_blank_lines_and_isolated_vertices() {
        let text = "# header\n\nvertex z\na b 2 # trailing\n   \n";
        let g = parse_weighted(text).unwrap();
        assert_eq!(g.labels().names(), &["z", "a", "b"]);
        assert_eq!(g.weight(1, 2).value(), 2.0);
        let b = parse_conductance("a b 0\nb c 3").unwrap();
        assert_eq!(b.n(), 3);
        assert_eq!(b.edge_count(), 1);
    }

    #[test]
    fn canonical_form() {
        let g = parse_weighted("b c 0.1\na b 2\nvertex d").unwrap();
        assert_eq!(to_edge_list(&g), "vertex b\nvertex c\nvertex a\nvertex d\nb c 0.1\nb a 2\n");
    }

    proptest! {
        #[test]
        fn weighted_round_trip(seed in any::<u64>(), n in 1usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = generate::random_weighted_graph(&mut rng, n, 0.5);
            let text = to_edge_list(&g);
            let back = parse_weighted(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(to_edge_list(&back), text);
            prop_assert!(back.validate().is_empty());
        }

        #[test]
        fn conductance_round_trip(seed in any::<u64>(), n in 1usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = generate::random_connected_conductance(&mut rng, n, 0.4, 3);
            let text = conductance_to_edge_list(&b);
            prop_assert_eq!(parse_conductance(&text).unwrap(), b);
        }
    }
}
