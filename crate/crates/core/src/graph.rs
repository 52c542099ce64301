//! Loop-free oriented graphs and tournaments over dense bitmask adjacency.
//!
//! Vertices are `0..n` in the API. The text formats (and the CLI) use
//! 1-indexed ids and convert at the boundary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Deref;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::{BitMatrix, BitSet};
use crate::limits::{self, Limits};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Tournament,
    Oriented,
}

impl FromStr for GraphKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tournament" | "t" => Ok(GraphKind::Tournament),
            "oriented" | "o" => Ok(GraphKind::Oriented),
            other => Err(Error::Invalid(format!("unknown graph kind `{other}`"))),
        }
    }
}

/// A directed graph without loops or digons.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrientedGraph {
    out: BitMatrix,
    inn: BitMatrix,
    arcs: usize,
}

impl OrientedGraph {
    fn assemble(out: BitMatrix, inn: BitMatrix) -> Self {
        let arcs = out.rows().iter().map(BitSet::count).sum();
        OrientedGraph { out, inn, arcs }
    }

    pub fn empty(n: usize) -> Self {
        OrientedGraph {
            out: BitMatrix::new(n),
            inn: BitMatrix::new(n),
            arcs: 0,
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    /// Builds from an arc predicate; fails on loops or digons.
    pub fn from_fn(n: usize, mut arc: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                if arc(u, v) {
                    g.add_arc(u, v)?;
                }
            }
        }
        Ok(g)
    }

    pub fn from_out_matrix(out: BitMatrix) -> Result<Self> {
        let n = out.size();
        for u in 0..n {
            if out.get(u, u) {
                return Err(Error::Loop(u));
            }
            for v in out.row(u).iter() {
                if out.get(v, u) {
                    return Err(Error::Digon(u.min(v), u.max(v)));
                }
            }
        }
        let inn = out.transpose();
        Ok(OrientedGraph::assemble(out, inn))
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(Error::OutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        if self.out.get(v, u) {
            return Err(Error::Digon(u.min(v), u.max(v)));
        }
        if !self.out.get(u, v) {
            self.out.set(u, v, true);
            self.inn.set(v, u, true);
            self.arcs += 1;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.out.size()
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out.get(u, v)
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.out.get(u, v) || self.out.get(v, u)
    }

    pub fn out_neighbours(&self, v: usize) -> &BitSet {
        self.out.row(v)
    }

    pub fn in_neighbours(&self, v: usize) -> &BitSet {
        self.inn.row(v)
    }

    pub fn neighbours(&self, v: usize) -> BitSet {
        self.out.row(v).union(self.inn.row(v))
    }

    pub fn non_neighbours(&self, v: usize) -> BitSet {
        let mut s = self.neighbours(v).complement();
        s.remove(v);
        s
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out.row(v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn.row(v).count()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|u| self.out.row(u).iter().map(move |v| (u, v)))
            .collect()
    }

    pub fn out_matrix(&self) -> &BitMatrix {
        &self.out
    }

    pub fn is_tournament(&self) -> bool {
        let n = self.n();
        self.arcs == n * n.saturating_sub(1) / 2
    }

    /// Image under `u -> perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> OrientedGraph {
        let out = self.out.relabel(perm);
        let inn = out.transpose();
        OrientedGraph::assemble(out, inn)
    }

    /// Induced subgraph on `keep`, renumbered in the given order.
    pub fn induced(&self, keep: &[usize]) -> OrientedGraph {
        let out = self.out.induced(keep);
        let inn = out.transpose();
        OrientedGraph::assemble(out, inn)
    }

    pub fn reversed(&self) -> OrientedGraph {
        OrientedGraph {
            out: self.inn.clone(),
            inn: self.out.clone(),
            arcs: self.arcs,
        }
    }

    /// Random oriented graph: each pair is left non-adjacent with probability
    /// `p_missing`, otherwise oriented uniformly.
    pub fn random<R: Rng>(n: usize, p_missing: f64, rng: &mut R) -> Self {
        let mut out = BitMatrix::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p_missing {
                    continue;
                }
                if rng.gen::<bool>() {
                    out.set(u, v, true);
                } else {
                    out.set(v, u, true);
                }
            }
        }
        let inn = out.transpose();
        OrientedGraph::assemble(out, inn)
    }
}

/// An oriented graph with exactly one arc per pair of vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tournament(OrientedGraph);

impl Deref for Tournament {
    type Target = OrientedGraph;
    fn deref(&self) -> &OrientedGraph {
        &self.0
    }
}

impl TryFrom<OrientedGraph> for Tournament {
    type Error = Error;
    fn try_from(g: OrientedGraph) -> Result<Self> {
        if g.is_tournament() {
            return Ok(Tournament(g));
        }
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if !g.adjacent(u, v) {
                    return Err(Error::MissingArc(u, v));
                }
            }
        }
        Ok(Tournament(g))
    }
}

impl From<Tournament> for OrientedGraph {
    fn from(t: Tournament) -> Self {
        t.0
    }
}

impl Tournament {
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        OrientedGraph::from_arcs(n, arcs)?.try_into()
    }

    /// Builds from a predicate consulted once per unordered pair `u < v`:
    /// `true` orients `u -> v`.
    pub fn from_pair_fn(n: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        let mut out = BitMatrix::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if forward(u, v) {
                    out.set(u, v, true);
                } else {
                    out.set(v, u, true);
                }
            }
        }
        let inn = out.transpose();
        Tournament(OrientedGraph::assemble(out, inn))
    }

    /// Transitive tournament with `u -> v` iff `u < v`.
    pub fn transitive(n: usize) -> Self {
        Self::from_pair_fn(n, |_, _| true)
    }

    /// Transitive tournament whose arcs follow `order`.
    pub fn transitive_from_order(order: &VertexOrder) -> Self {
        Self::from_pair_fn(order.len(), |u, v| order.rank(u) < order.rank(v))
    }

    /// The directed triangle `0 -> 1 -> 2 -> 0`.
    pub fn cycle3() -> Self {
        Self::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).expect("valid")
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let words = n.div_ceil(64);
        let mut out: Vec<BitSet> = Vec::with_capacity(n);
        for u in 0..n {
            let raw: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
            let mut row = BitSet::from_words(n, raw);
            // keep only the upper triangle; the lower one is mirrored below
            for v in 0..=u.min(n - 1) {
                row.remove(v);
            }
            out.push(row);
        }
        let mut m = BitMatrix::from_rows(out);
        for u in 0..n {
            for v in u + 1..n {
                if !m.get(u, v) {
                    m.set(v, u, true);
                }
            }
        }
        let inn = m.transpose();
        Tournament(OrientedGraph::assemble(m, inn))
    }

    pub fn relabel(&self, perm: &[usize]) -> Tournament {
        Tournament(self.0.relabel(perm))
    }

    pub fn induced(&self, keep: &[usize]) -> Tournament {
        Tournament(self.0.induced(keep))
    }

    pub fn as_oriented(&self) -> &OrientedGraph {
        &self.0
    }
}

/// Checked constructor dispatching on the requested kind.
pub fn build_graph(n: usize, arcs: &[(usize, usize)], kind: GraphKind) -> Result<OrientedGraph> {
    let g = OrientedGraph::from_arcs(n, arcs)?;
    if kind == GraphKind::Tournament {
        Tournament::try_from(g.clone())?;
    }
    Ok(g)
}

/// A total order on `0..n`, stored as a sequence and its inverse.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexOrder {
    seq: Vec<usize>,
    rank: Vec<usize>,
}

impl TryFrom<Vec<usize>> for VertexOrder {
    type Error = Error;

    fn try_from(seq: Vec<usize>) -> Result<Self> {
        VertexOrder::new(seq)
    }
}

impl From<VertexOrder> for Vec<usize> {
    fn from(o: VertexOrder) -> Self {
        o.seq
    }
}

impl VertexOrder {
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in seq.iter().enumerate() {
            if v >= n {
                return Err(Error::OutOfRange { vertex: v, n });
            }
            if rank[v] != usize::MAX {
                return Err(Error::Invalid(format!("vertex {v} listed twice")));
            }
            rank[v] = i;
        }
        Ok(VertexOrder { seq, rank })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrder {
            seq: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.seq
    }

    #[inline]
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn at(&self, i: usize) -> usize {
        self.seq[i]
    }

    pub fn less(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }
}

pub fn independence_number(g: &OrientedGraph, limits: &Limits) -> Result<usize> {
    Ok(maximum_independent_set(g, limits)?.len())
}

/// Exact maximum independent set by branch and bound.
pub fn maximum_independent_set(g: &OrientedGraph, limits: &Limits) -> Result<Vec<usize>> {
    limits::check("independence number", g.n(), limits.independence_max_n)?;
    let non_adj: Vec<BitSet> = (0..g.n()).map(|v| g.non_neighbours(v)).collect();
    let mut best = Vec::new();
    let mut current = Vec::new();
    mis_expand(&non_adj, BitSet::full(g.n()), &mut current, &mut best);
    Ok(best)
}

fn mis_expand(non_adj: &[BitSet], mut cand: BitSet, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cand.is_empty() {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        return;
    }
    while let Some(v) = cand.first() {
        if cur.len() + cand.count() <= best.len() {
            return;
        }
        cand.remove(v);
        cur.push(v);
        mis_expand(non_adj, cand.intersection(&non_adj[v]), cur, best);
        cur.pop();
    }
    if cur.len() > best.len() {
        *best = cur.clone();
    }
}

/// Enumerates `s` as `c_1, ..., c_k` with `c_i -> c_j` for all `i < j`.
pub fn chain_order(g: &OrientedGraph, s: &BitSet) -> Result<Vec<usize>> {
    let k = s.count();
    let mut by_outdeg = vec![usize::MAX; k];
    for v in s.iter() {
        let d = g.out_neighbours(v).intersection_count(s);
        // in a transitive tournament the out-degrees are exactly 0..k-1
        if d >= k || by_outdeg[k - 1 - d] != usize::MAX {
            return Err(Error::NotAChain);
        }
        by_outdeg[k - 1 - d] = v;
    }
    for i in 0..k {
        for j in i + 1..k {
            if !g.has_arc(by_outdeg[i], by_outdeg[j]) {
                return Err(Error::NotAChain);
            }
        }
    }
    Ok(by_outdeg)
}

/// Isomorphism-invariant vertex colouring by iterated degree refinement.
/// Colours are canonical: they depend only on the isomorphism type.
pub fn refined_colours(g: &OrientedGraph) -> Vec<usize> {
    let n = g.n();
    let mut colour: Vec<usize> = vec![0; n];
    let mut classes = 0;
    loop {
        let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut outs: Vec<usize> = g.out_neighbours(v).iter().map(|u| colour[u]).collect();
                let mut ins: Vec<usize> = g.in_neighbours(v).iter().map(|u| colour[u]).collect();
                outs.sort_unstable();
                ins.sort_unstable();
                (colour[v], outs, ins)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>, Vec<usize>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let index: BTreeMap<&(usize, Vec<usize>, Vec<usize>), usize> =
            distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: Vec<usize> = sigs.iter().map(|s| index[s]).collect();
        let count = distinct.len();
        colour = next;
        if count == classes {
            return colour;
        }
        classes = count;
    }
}

/// Canonical byte string: equal for two graphs iff they are isomorphic.
///
/// Minimises the incremental adjacency code over all labelings compatible
/// with the refined colouring.
pub fn canonical_form(g: &OrientedGraph, limits: &Limits) -> Result<Vec<u8>> {
    limits::check("canonical form", g.n(), limits.canonical_max_n)?;
    let n = g.n();
    let colour = refined_colours(g);
    let mut slots: Vec<usize> = colour.clone();
    slots.sort_unstable();

    let mut search = CanonSearch {
        g,
        colour: &colour,
        slots: &slots,
        placed: Vec::with_capacity(n),
        used: vec![false; n],
        code: Vec::new(),
        best: None,
    };
    search.run();
    let best = search.best.unwrap_or_default();

    let mut out = Vec::with_capacity(4 + best.len() / 8 + 1);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    for chunk in best.chunks(8) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            byte |= (b as u8) << i;
        }
        out.push(byte);
    }
    Ok(out)
}

struct CanonSearch<'a> {
    g: &'a OrientedGraph,
    colour: &'a [usize],
    slots: &'a [usize],
    placed: Vec<usize>,
    used: Vec<bool>,
    code: Vec<bool>,
    best: Option<Vec<bool>>,
}

impl CanonSearch<'_> {
    fn run(&mut self) {
        let i = self.placed.len();
        let n = self.colour.len();
        if i == n {
            if self.best.as_ref().is_none_or(|b| self.code < *b) {
                self.best = Some(self.code.clone());
            }
            return;
        }
        for v in 0..n {
            if self.used[v] || self.colour[v] != self.slots[i] {
                continue;
            }
            let start = self.code.len();
            for k in 0..i {
                let u = self.placed[k];
                self.code.push(self.g.has_arc(u, v));
                self.code.push(self.g.has_arc(v, u));
            }
            // a prefix already above the incumbent cannot recover
            let worse = self
                .best
                .as_ref()
                .is_some_and(|b| self.code.as_slice() > &b[..self.code.len()]);
            if !worse {
                self.placed.push(v);
                self.used[v] = true;
                self.run();
                self.used[v] = false;
                self.placed.pop();
            }
            self.code.truncate(start);
        }
    }
}

/// Order of the automorphism group, by backtracking over colour-preserving maps.
pub fn automorphism_count(g: &OrientedGraph, limits: &Limits) -> Result<u64> {
    limits::check("automorphism count", g.n(), limits.automorphism_max_n)?;
    let colour = refined_colours(g);
    let n = g.n();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(count_isomorphisms(
        g, g, &colour, &colour, 0, &mut image, &mut used,
    ))
}

fn count_isomorphisms(
    a: &OrientedGraph,
    b: &OrientedGraph,
    ca: &[usize],
    cb: &[usize],
    v: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> u64 {
    let n = a.n();
    if v == n {
        return 1;
    }
    let mut total = 0;
    for w in 0..n {
        if used[w] || ca[v] != cb[w] {
            continue;
        }
        let consistent = (0..v).all(|u| {
            a.has_arc(u, v) == b.has_arc(image[u], w) && a.has_arc(v, u) == b.has_arc(w, image[u])
        });
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        total += count_isomorphisms(a, b, ca, cb, v + 1, image, used);
        used[w] = false;
    }
    image[v] = usize::MAX;
    total
}

/// An injective map `pattern -> host` preserving arcs and non-arcs, if any.
pub fn find_induced_embedding(host: &OrientedGraph, pattern: &OrientedGraph) -> Option<Vec<usize>> {
    if pattern.n() > host.n() {
        return None;
    }
    let mut image = Vec::with_capacity(pattern.n());
    let mut used = vec![false; host.n()];
    embed(host, pattern, &mut image, &mut used).then_some(image)
}

fn embed(
    host: &OrientedGraph,
    pat: &OrientedGraph,
    image: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let v = image.len();
    if v == pat.n() {
        return true;
    }
    for w in 0..host.n() {
        if used[w] {
            continue;
        }
        let ok = (0..v).all(|u| {
            pat.has_arc(u, v) == host.has_arc(image[u], w)
                && pat.has_arc(v, u) == host.has_arc(w, image[u])
        });
        if !ok {
            continue;
        }
        image.push(w);
        used[w] = true;
        if embed(host, pat, image, used) {
            return true;
        }
        used[w] = false;
        image.pop();
    }
    false
}

/// Parses the `p dtw <n> <m>` / `a <u> <v>` digraph format (1-indexed ids).
/// Returns `n` and 0-indexed arcs.
pub fn parse_digraph(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["p", "dtw", n, m] => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate header"));
                }
                header = Some((parse_num(n, line_no)?, parse_num(m, line_no)?));
            }
            ["a", u, v] => {
                let (n, _) = header.ok_or_else(|| Error::parse(line_no, "arc before header"))?;
                let u = parse_vertex(u, n, line_no)?;
                let v = parse_vertex(v, n, line_no)?;
                arcs.push((u, v));
            }
            _ => return Err(Error::parse(line_no, format!("unrecognised line `{line}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing `p dtw` header"))?;
    if arcs.len() != m {
        return Err(Error::parse(
            0,
            format!("header announces {m} arcs, found {}", arcs.len()),
        ));
    }
    Ok((n, arcs))
}

pub(crate) fn parse_num(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| {
        Error::parse(
            line,
            format!("expected a non-negative integer, got `{tok}`"),
        )
    })
}

pub(crate) fn parse_vertex(tok: &str, n: usize, line: usize) -> Result<usize> {
    let v = parse_num(tok, line)?;
    if v == 0 || v > n {
        return Err(Error::parse(
            line,
            format!("vertex {v} out of range 1..={n}"),
        ));
    }
    Ok(v - 1)
}

pub fn read_graph(text: &str, kind: GraphKind) -> Result<OrientedGraph> {
    let (n, arcs) = parse_digraph(text)?;
    build_graph(n, &arcs, kind)
}

pub fn write_digraph(g: &OrientedGraph) -> String {
    let arcs = g.arcs();
    let mut s = format!("p dtw {} {}\n", g.n(), arcs.len());
    for (u, v) in arcs {
        let _ = writeln!(s, "a {} {}", u + 1, v + 1);
    }
    s
}
