use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use bstorder::bst::{bst_validate, parse_tree, Violation};
use bstorder::graph::{build_graph, parse_digraph};
use bstorder::permutation::parse_permutation;
use bstorder::{BstTree, BuildStrategy, GraphKind, Limits, OrientedGraph, Permutation, Tournament, VertexOrder};
use serde_json::{json, Value};

use crate::report::{CliError, CliResult, Digest256};

pub struct Ctx {
    pub seed: u64,
    pub max_n: Option<usize>,
    pub limits: Limits,
    pub inputs: BTreeMap<String, Digest256>,
}

impl Ctx {
    pub fn new(seed: u64, max_n: Option<usize>) -> Self {
        Ctx {
            seed,
            max_n,
            limits: Limits::default(),
            inputs: BTreeMap::new(),
        }
    }

    /// Reads a file and records its digest under `label`.
    pub fn read(&mut self, label: &str, path: &Path) -> CliResult<String> {
        let data = fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.inputs
            .insert(label.to_string(), Digest256::of(path, &data));
        String::from_utf8(data)
            .map_err(|_| CliError::Input(format!("{} is not UTF-8 text", path.display())))
    }

    pub fn check_size(&self, what: &str, n: usize) -> CliResult<()> {
        match self.max_n {
            Some(cap) if n > cap => Err(CliError::SizeLimit(format!(
                "{what} has size {n}, above --max-n {cap}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn graph(&mut self, path: &Path, kind: GraphKind) -> CliResult<OrientedGraph> {
        let text = self.read("graph", path)?;
        let (n, arcs) = parse_digraph(&text)?;
        self.check_size("graph", n)?;
        Ok(build_graph(n, &arcs, kind)?)
    }

    pub fn perm(&mut self, label: &str, path: &Path) -> CliResult<Permutation> {
        let text = self.read(label, path)?;
        let p = parse_permutation(&text)?;
        self.check_size("permutation", p.len())?;
        Ok(p)
    }

    pub fn tournament(&mut self, path: &Path, kind: GraphKind) -> CliResult<Tournament> {
        if kind != GraphKind::Tournament {
            return Err(CliError::Input(
                "this command needs a tournament; got --kind oriented".into(),
            ));
        }
        let g = self.graph(path, kind)?;
        Ok(Tournament::try_from(g)?)
    }

    /// The default strategy is seeded random pivots.
    pub fn strategy(&self, spec: Option<&str>) -> CliResult<BuildStrategy> {
        match spec {
            None => Ok(BuildStrategy::Random(self.seed)),
            Some(s) => Ok(s.parse()?),
        }
    }

    /// `--bst` takes a tree file, `build` or `build:<strategy>`; without it
    /// the tree is built with the default strategy.
    pub fn tree(&mut self, g: &OrientedGraph, spec: Option<&str>) -> CliResult<BstTree> {
        let t = match spec {
            None | Some("build") => bstorder::bst_build(g, &self.strategy(None)?)?,
            Some(s) => match s.strip_prefix("build:") {
                Some(st) => bstorder::bst_build(g, &self.strategy(Some(st))?)?,
                None => {
                    let text = self.read("tree", Path::new(s))?;
                    parse_tree(&text)?
                }
            },
        };
        if t.n() != g.n() {
            return Err(CliError::Input(format!(
                "tree has {} nodes, graph has {}",
                t.n(),
                g.n()
            )));
        }
        bst_validate(g, &t).map_err(|v| CliError::Input(violation_text(&v)))?;
        Ok(t)
    }
}

pub fn violation_text(v: &Violation) -> String {
    format!(
        "not a BST of the graph: node {}, descendant {}: {}",
        v.node + 1,
        v.child + 1,
        v.reason
    )
}

/// The strategy in the form `--bst build:<strategy>` accepts.
pub fn strategy_name(s: &BuildStrategy) -> String {
    match s {
        BuildStrategy::Random(seed) => format!("random:{seed}"),
        BuildStrategy::MedianPivot => "median".into(),
        BuildStrategy::Insertion(seq) if seq.is_empty() => "insertion".into(),
        BuildStrategy::Insertion(seq) => format!(
            "insertion:{}",
            seq.iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
    }
}

pub fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

pub fn order_json(o: &VertexOrder) -> Value {
    json!(one_based(o.as_slice()))
}

/// Parts of a division as inclusive 1-based position ranges.
pub fn ranges_json(parts: &[std::ops::Range<usize>]) -> Value {
    json!(parts
        .iter()
        .map(|r| [r.start + 1, r.end])
        .collect::<Vec<_>>())
}

pub fn pairs_json(pairs: &[(usize, usize)]) -> Value {
    json!(pairs
        .iter()
        .map(|&(a, b)| [a + 1, b + 1])
        .collect::<Vec<_>>())
}
