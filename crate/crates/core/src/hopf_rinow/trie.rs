//! Prefix trie over a set of paths sharing a start vertex, and the greedy
//! descent that extracts a prefix common to many of them.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Path, VertexId, WeightOracle};
use crate::weight::ExtendedWeight;

#[derive(Clone, Debug)]
struct Node {
    vertex: VertexId,
    multiplicity: usize,
    children: BTreeMap<VertexId, usize>,
}

/// Node multiplicity = number of input paths running through its prefix.
#[derive(Clone, Debug)]
pub struct PrefixTrie {
    nodes: Vec<Node>,
}

impl PrefixTrie {
    /// Errors on an empty set, differing start vertices or repeated paths.
    pub fn build(paths: &[Path]) -> Result<Self> {
        let first = paths.first().ok_or(Error::EmptyInput)?;
        let root = first.start();
        if paths.iter().any(|p| p.start() != root) {
            return Err(Error::MixedStart);
        }
        let mut seen = BTreeSet::new();
        for p in paths {
            if !seen.insert(p.vertices()) {
                return Err(Error::DuplicatePath);
            }
        }
        let mut nodes = vec![Node {
            vertex: root,
            multiplicity: 0,
            children: BTreeMap::new(),
        }];
        for p in paths {
            let mut at = 0;
            nodes[0].multiplicity += 1;
            for &v in &p.vertices()[1..] {
                at = match nodes[at].children.get(&v) {
                    Some(&child) => child,
                    None => {
                        nodes.push(Node {
                            vertex: v,
                            multiplicity: 0,
                            children: BTreeMap::new(),
                        });
                        let child = nodes.len() - 1;
                        nodes[at].children.insert(v, child);
                        child
                    }
                };
                nodes[at].multiplicity += 1;
            }
        }
        Ok(Self { nodes })
    }

    pub fn root(&self) -> VertexId {
        self.nodes[0].vertex
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of input paths beginning with `prefix`.
    pub fn multiplicity(&self, prefix: &[VertexId]) -> usize {
        let Some((&head, rest)) = prefix.split_first() else {
            return self.nodes[0].multiplicity;
        };
        if head != self.root() {
            return 0;
        }
        let mut at = 0;
        for v in rest {
            match self.nodes[at].children.get(v) {
                Some(&child) => at = child,
                None => return 0,
            }
        }
        self.nodes[at].multiplicity
    }

    /// Children never carry more paths than their parent.
    pub fn is_consistent(&self) -> bool {
        self.nodes
            .iter()
            .all(|n| n.children.values().map(|&c| self.nodes[c].multiplicity).sum::<usize>() <= n.multiplicity)
    }

    /// From the root, repeatedly steps to the smallest child with
    /// multiplicity at least `k`. Returns the vertices and multiplicities.
    fn descend(&self, k: usize) -> (Vec<VertexId>, Vec<usize>) {
        let mut at = 0;
        let mut vertices = vec![self.nodes[0].vertex];
        let mut multiplicities = vec![self.nodes[0].multiplicity];
        while let Some((&v, &child)) = self.nodes[at].children.iter().find(|(_, &c)| self.nodes[c].multiplicity >= k) {
            at = child;
            vertices.push(v);
            multiplicities.push(self.nodes[at].multiplicity);
        }
        (vertices, multiplicities)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommonPrefix {
    pub path: Path,
    /// `multiplicities[i]` paths begin with the first `i + 1` vertices of `path`.
    pub multiplicities: Vec<usize>,
    pub length: ExtendedWeight,
    /// Largest length among the input paths.
    pub max_input_length: ExtendedWeight,
}

fn length(oracle: &dyn WeightOracle, p: &Path) -> ExtendedWeight {
    p.steps().map(|(a, b)| oracle.weight(a, b)).sum()
}

/// Finite stand-in for the limit path built by pigeonhole over infinitely
/// many bounded paths: "infinitely many" becomes "at least `k`".
pub fn extract_common_prefix_path(paths: &[Path], oracle: &dyn WeightOracle, k: usize) -> Result<CommonPrefix> {
    if k < 2 {
        return Err(Error::InvalidThreshold(k));
    }
    let trie = PrefixTrie::build(paths)?;
    let (vertices, multiplicities) = trie.descend(k);
    let path = Path::new(vertices).expect("trie branches are input path prefixes");
    Ok(CommonPrefix {
        length: length(oracle, &path),
        max_input_length: paths.iter().map(|p| length(oracle, p)).max().unwrap_or(ExtendedWeight::ZERO),
        path,
        multiplicities,
    })
}
