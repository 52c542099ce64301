//! Python bindings. Vertex ids, positions and permutations are 1-based on
//! the Python side, as in the text formats.

use bstorder::bst::{parse_tree, write_tree};
use bstorder::graph::{build_graph, parse_digraph, write_digraph};
use bstorder::logic::{ds_formula_with, Domination};
use bstorder::permutation::{contains_pattern as find_pattern, max_grid as grid_size};
use bstorder::{
    BinaryStructure, BstTree, BuildStrategy, IntervalFamily, Limits, ObstructionKind,
    OrientedGraph, Permutation, Tournament, TwwWitness,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: bstorder::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn zero_based(vs: &[usize], n: usize) -> PyResult<Vec<usize>> {
    vs.iter()
        .map(|&v| match v {
            1.. if v <= n => Ok(v - 1),
            _ => Err(PyValueError::new_err(format!("vertex {v} out of range 1..={n}"))),
        })
        .collect()
}

fn parse<T: std::str::FromStr<Err = bstorder::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn perm(line: Vec<usize>) -> PyResult<Permutation> {
    Permutation::from_one_line(&line).map_err(err)
}

/// A tournament or oriented graph.
#[pyclass(frozen, module = "pybstorder")]
struct Graph {
    g: OrientedGraph,
}

#[pymethods]
impl Graph {
    /// `arcs` are 1-based pairs `(u, v)` meaning `u -> v`.
    #[new]
    #[pyo3(signature = (n, arcs, kind = "tournament"))]
    fn new(n: usize, arcs: Vec<(usize, usize)>, kind: &str) -> PyResult<Self> {
        let arcs = arcs
            .into_iter()
            .map(|(u, v)| {
                if u == 0 || v == 0 {
                    return Err(PyValueError::new_err("vertex ids start at 1"));
                }
                Ok((u - 1, v - 1))
            })
            .collect::<PyResult<Vec<_>>>()?;
        let g = build_graph(n, &arcs, parse(kind)?).map_err(err)?;
        Ok(Graph { g })
    }

    #[staticmethod]
    #[pyo3(signature = (text, kind = "tournament"))]
    fn from_text(text: &str, kind: &str) -> PyResult<Self> {
        let (n, arcs) = parse_digraph(text).map_err(err)?;
        let g = build_graph(n, &arcs, parse(kind)?).map_err(err)?;
        Ok(Graph { g })
    }

    #[staticmethod]
    fn transitive(n: usize) -> Self {
        Graph {
            g: Tournament::transitive(n).as_oriented().clone(),
        }
    }

    #[staticmethod]
    fn random_tournament(n: usize, seed: u64) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Graph {
            g: Tournament::random(n, &mut rng).as_oriented().clone(),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.g.n()
    }

    fn is_tournament(&self) -> bool {
        self.g.is_tournament()
    }

    fn has_arc(&self, u: usize, v: usize) -> PyResult<bool> {
        let uv = zero_based(&[u, v], self.g.n())?;
        Ok(self.g.has_arc(uv[0], uv[1]))
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        self.g.arcs().into_iter().map(|(u, v)| (u + 1, v + 1)).collect()
    }

    fn to_text(&self) -> String {
        write_digraph(&self.g)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, arcs={})", self.g.n(), self.g.arc_count())
    }
}

/// A BST of a graph.
#[pyclass(frozen, module = "pybstorder")]
struct Tree {
    t: BstTree,
}

#[pymethods]
impl Tree {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Tree {
            t: parse_tree(text).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.t.n()
    }

    #[getter]
    fn root(&self) -> Option<usize> {
        self.t.root().map(|r| r + 1)
    }

    #[getter]
    fn depth(&self) -> usize {
        self.t.depth()
    }

    /// In-order (left, node, center, right) of the vertices.
    fn order(&self) -> Vec<usize> {
        one_based(bstorder::left_to_right(&self.t).as_slice())
    }

    fn parent(&self, v: usize) -> PyResult<Option<usize>> {
        let v = zero_based(&[v], self.t.n())?[0];
        Ok(self.t.parent(v).map(|p| p + 1))
    }

    /// `None` when the tree is a BST of `g`, else a description of the
    /// first violation.
    fn violation(&self, g: &Graph) -> Option<String> {
        if g.g.n() != self.t.n() {
            return Some(format!("tree has {} nodes, graph has {}", self.t.n(), g.g.n()));
        }
        bstorder::bst_validate(&g.g, &self.t)
            .err()
            .map(|v| format!("node {}, descendant {}: {}", v.node + 1, v.child + 1, v.reason))
    }

    fn to_text(&self) -> String {
        write_tree(&self.t)
    }
}

/// `strategy` is `random[:seed]`, `median` or `insertion`.
#[pyfunction]
#[pyo3(signature = (g, strategy = "random:0"))]
fn bst_build(g: &Graph, strategy: &str) -> PyResult<Tree> {
    let st: BuildStrategy = parse(strategy)?;
    Ok(Tree {
        t: bstorder::bst_build(&g.g, &st).map_err(err)?,
    })
}

#[pyfunction]
fn budget(k: usize) -> u64 {
    bstorder::budget(k)
}

/// Non-overlapping parts along a branch of `tree`. `family` defaults to
/// singletons.
#[pyfunction]
#[pyo3(signature = (g, tree, k, family = None, enforce_budget = false))]
fn extract<'py>(
    py: Python<'py>,
    g: &Graph,
    tree: &Tree,
    k: usize,
    family: Option<Vec<Vec<usize>>>,
    enforce_budget: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let n = g.g.n();
    let fam = match family {
        None => IntervalFamily::singletons(n),
        Some(parts) => IntervalFamily::new(
            parts
                .iter()
                .map(|p| zero_based(p, n))
                .collect::<PyResult<Vec<_>>>()?,
        )
        .map_err(err)?,
    };
    let e = bstorder::extract_nonoverlapping(&g.g, &tree.t, &fam, k, enforce_budget, &Limits::default())
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("selected", one_based(&e.selected))?;
    d.set_item(
        "parts",
        e.family.parts().iter().map(|p| one_based(p)).collect::<Vec<_>>(),
    )?;
    d.set_item("chain", one_based(e.chain()))?;
    d.set_item("orientation", e.orientation().to_string())?;
    d.set_item("weights", e.trace.weights.clone())?;
    d.set_item("trace_ok", e.trace.check().is_ok())?;
    Ok(d)
}

/// Either a contraction sequence of width at most a bound in `k`, or a
/// rank-k division of the adjacency matrix in BST order.
#[pyfunction]
#[pyo3(signature = (g, k = 2, strategy = "random:0"))]
fn approx_tww<'py>(py: Python<'py>, g: &Graph, k: usize, strategy: &str) -> PyResult<Bound<'py, PyDict>> {
    let t = Tournament::try_from(g.g.clone()).map_err(err)?;
    let st: BuildStrategy = parse(strategy)?;
    let w = bstorder::approximate_tournament_tww(&t, k, &st, &Limits::default()).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("order", one_based(w.order().as_slice()))?;
    match &w {
        TwwWitness::Contraction { sequence, report, .. } => {
            d.set_item("witness", "contraction")?;
            d.set_item("width", report.width)?;
            let merges: Vec<(usize, usize)> = sequence.merges().iter().map(|&(a, b)| (a + 1, b + 1)).collect();
            d.set_item("sequence", merges)?;
        }
        TwwWitness::RankDivision { division, heuristic, .. } => {
            d.set_item("witness", "rank-division")?;
            d.set_item("row_cuts", one_based(&division.row_cuts))?;
            d.set_item("col_cuts", one_based(&division.col_cuts))?;
            d.set_item("heuristic", *heuristic)?;
        }
    }
    d.set_item("verified", bstorder::twin_width::verify_witness(&t, &w).map_err(err)?)?;
    Ok(d)
}

/// Exact twin-width and an optimal contraction sequence (small graphs).
#[pyfunction]
fn exact_twin_width(g: &Graph) -> PyResult<(usize, Vec<(usize, usize)>)> {
    let s = BinaryStructure::from_graph(&g.g);
    let (w, seq) = bstorder::exact_twin_width(&s, &Limits::default()).map_err(err)?;
    Ok((w, seq.merges().iter().map(|&(a, b)| (a + 1, b + 1)).collect()))
}

/// The tournament encoding `perm`; `kind` is `=`, `<=` or `>=` (or `eq`,
/// `le`, `ge`). With `extend` the result decodes back to `perm`.
#[pyfunction]
#[pyo3(signature = (kind, perm, extend = false))]
fn build_f(kind: &str, perm: Vec<usize>, extend: bool) -> PyResult<Graph> {
    let r: ObstructionKind = parse(kind)?;
    let mut sigma = self::perm(perm)?;
    if extend {
        sigma = bstorder::extend_sigma(r, &sigma).map_err(err)?;
    }
    let (t, _) = bstorder::build_f(r, &sigma);
    Ok(Graph {
        g: t.as_oriented().clone(),
    })
}

#[pyfunction]
fn decode_f(kind: &str, g: &Graph) -> PyResult<Vec<usize>> {
    let r: ObstructionKind = parse(kind)?;
    Ok(bstorder::decode_f(r, &g.g).map_err(err)?.one_line())
}

/// Smallest increasing 1-based index set where `sigma` has the pattern.
#[pyfunction]
fn contains_pattern(sigma: Vec<usize>, tau: Vec<usize>) -> PyResult<Option<Vec<usize>>> {
    let found = find_pattern(&perm(sigma)?, &perm(tau)?, &Limits::default()).map_err(err)?;
    Ok(found.map(|x| one_based(&x)))
}

#[pyfunction]
fn max_grid(sigma: Vec<usize>) -> PyResult<usize> {
    grid_size(&perm(sigma)?, &Limits::default()).map_err(err)
}

/// Evaluates an s-expression sentence over the relation `arc`.
#[pyfunction]
fn model_check(g: &Graph, sentence: &str) -> PyResult<bool> {
    let phi = bstorder::parse_sentence(sentence).map_err(err)?;
    bstorder::model_check(&BinaryStructure::from_graph(&g.g), &phi).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (k, open = false))]
fn ds_formula(k: usize, open: bool) -> String {
    ds_formula_with(k, if open { Domination::Open } else { Domination::Reflexive }).to_string()
}

#[pyfunction]
fn fvs_formula(k: usize) -> String {
    bstorder::fvs_formula(k).to_string()
}

#[pymodule]
fn pybstorder(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Tree>()?;
    m.add_function(wrap_pyfunction!(bst_build, m)?)?;
    m.add_function(wrap_pyfunction!(budget, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(approx_tww, m)?)?;
    m.add_function(wrap_pyfunction!(exact_twin_width, m)?)?;
    m.add_function(wrap_pyfunction!(build_f, m)?)?;
    m.add_function(wrap_pyfunction!(decode_f, m)?)?;
    m.add_function(wrap_pyfunction!(contains_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(max_grid, m)?)?;
    m.add_function(wrap_pyfunction!(model_check, m)?)?;
    m.add_function(wrap_pyfunction!(ds_formula, m)?)?;
    m.add_function(wrap_pyfunction!(fvs_formula, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
