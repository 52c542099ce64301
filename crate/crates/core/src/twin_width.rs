//! Contraction sequences, error degrees, exact and greedy twin-width, and the
//! BST-order approximation pipeline for tournaments.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bst::{bst_build, left_to_right, BuildStrategy};
use crate::graph::{parse_num, parse_vertex, OrientedGraph, Tournament, VertexOrder};
use crate::limits::{check, Limits};
use crate::matrix::{
    adjacency_matrix, find_rank_division, is_rank_division, Division, RankDivisionResult,
};
use crate::structure::BinaryStructure;
use crate::{Error, Result};

/// Merge events named by the minimum vertex of each part, `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContractionSequence {
    n: usize,
    merges: Vec<(usize, usize)>,
}

impl ContractionSequence {
    /// Each merge names any member of each part; representatives are
    /// canonicalized. A full sequence has `n - 1` merges.
    pub fn new(n: usize, merges: &[(usize, usize)]) -> Result<Self> {
        if merges.len() != n.saturating_sub(1) {
            return Err(Error::InvalidMerge {
                step: merges.len(),
                reason: format!(
                    "{} merges given, {} needed",
                    merges.len(),
                    n.saturating_sub(1)
                ),
            });
        }
        Self::partial(n, merges)
    }

    /// Like [`ContractionSequence::new`] but accepts fewer merges.
    pub fn partial(n: usize, merges: &[(usize, usize)]) -> Result<Self> {
        let mut rep: Vec<usize> = (0..n).collect();
        let mut out = Vec::with_capacity(merges.len());
        for (step, &(u, v)) in merges.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidMerge {
                        step,
                        reason: format!("vertex {} out of range", x + 1),
                    });
                }
            }
            let (a, b) = (rep[u], rep[v]);
            if a == b {
                return Err(Error::InvalidMerge {
                    step,
                    reason: format!("{} and {} already share a part", u + 1, v + 1),
                });
            }
            let (a, b) = (a.min(b), a.max(b));
            for r in rep.iter_mut() {
                if *r == b {
                    *r = a;
                }
            }
            out.push((a, b));
        }
        Ok(ContractionSequence { n, merges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[(usize, usize)] {
        &self.merges
    }

    pub fn is_complete(&self) -> bool {
        self.merges.len() == self.n.saturating_sub(1)
    }
}

/// Parses `cs <n>` followed by `u v` merge lines (1-based).
pub fn parse_sequence(text: &str) -> Result<ContractionSequence> {
    let mut n: Option<usize> = None;
    let mut merges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (n, toks.as_slice()) {
            (None, ["cs", m]) => n = Some(parse_num(m, line_no)?),
            (None, _) => return Err(Error::parse(line_no, "expected `cs <n>` header")),
            (Some(m), [u, v]) => {
                merges.push((parse_vertex(u, m, line_no)?, parse_vertex(v, m, line_no)?))
            }
            _ => return Err(Error::parse(line_no, "expected `<u> <v>`")),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing `cs` header"))?;
    ContractionSequence::new(n, &merges)
}

pub fn write_sequence(seq: &ContractionSequence) -> String {
    let mut s = format!("cs {}\n", seq.n);
    for &(a, b) in &seq.merges {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    /// Maximum error degree after each merge.
    pub step_widths: Vec<usize>,
    pub width: usize,
    /// First step reaching the width, with the representative of a part
    /// attaining it.
    pub argmax: Option<(usize, usize)>,
}

impl WidthReport {
    fn from_steps(steps: Vec<(usize, usize)>) -> Self {
        let width = steps.iter().map(|s| s.0).max().unwrap_or(0);
        let argmax = steps
            .iter()
            .position(|s| s.0 == width)
            .map(|i| (i, steps[i].1));
        WidthReport {
            step_widths: steps.into_iter().map(|s| s.0).collect(),
            width,
            argmax,
        }
    }
}

/// Whether every relation, read from `x` to `y` and from `y` to `x`, is
/// constant on `x × y`.
pub fn is_homogeneous(s: &BinaryStructure, x: &[usize], y: &[usize]) -> Result<bool> {
    if x.iter().any(|a| y.contains(a)) {
        return Err(Error::Overlap);
    }
    for r in 0..s.relation_count() {
        for (p, q) in [(x, y), (y, x)] {
            let mut seen = [false; 2];
            for &a in p {
                for &b in q {
                    seen[s.holds(r, a, b) as usize] = true;
                }
            }
            if seen[0] && seen[1] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WidthMode {
    /// Re-derives every error degree from the definition at every step.
    Recompute,
    Incremental,
}

pub fn width_of_sequence(
    s: &BinaryStructure,
    seq: &ContractionSequence,
    mode: WidthMode,
) -> Result<WidthReport> {
    if seq.n() != s.n() {
        return Err(Error::InvalidMerge {
            step: 0,
            reason: format!("sequence on {} vertices, structure has {}", seq.n(), s.n()),
        });
    }
    match mode {
        WidthMode::Recompute => Ok(recompute(s, seq)),
        WidthMode::Incremental => {
            let mut st = RedState::new(s)?;
            let steps = seq
                .merges()
                .iter()
                .map(|&(a, b)| {
                    st.merge(a, b);
                    st.max_degree()
                })
                .collect();
            Ok(WidthReport::from_steps(steps))
        }
    }
}

fn recompute(s: &BinaryStructure, seq: &ContractionSequence) -> WidthReport {
    let n = s.n();
    let mut parts: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut steps = Vec::new();
    for &(a, b) in seq.merges() {
        let moved = std::mem::take(&mut parts[b]);
        parts[a].extend(moved);
        let mut best = (0, usize::MAX);
        for p in 0..n {
            if parts[p].is_empty() {
                continue;
            }
            let deg = (0..n)
                .filter(|&q| q != p && !parts[q].is_empty())
                .filter(|&q| !is_homogeneous(s, &parts[p], &parts[q]).expect("disjoint parts"))
                .count();
            if deg > best.0 || best.1 == usize::MAX {
                best = (deg, p);
            }
        }
        steps.push(best);
    }
    WidthReport::from_steps(steps)
}

const MAX_RELATIONS: usize = 16;

/// Per ordered pair of parts, bit `r` records some pair in relation `r` and
/// bit `16 + r` some pair outside it; both set means mixed.
struct RedState {
    n: usize,
    mask: u32,
    flags: Vec<u32>,
    alive: Vec<bool>,
    red: Vec<bool>,
    degree: Vec<usize>,
}

impl RedState {
    fn new(s: &BinaryStructure) -> Result<Self> {
        check(
            "relations for width evaluation",
            s.relation_count(),
            MAX_RELATIONS,
        )?;
        let n = s.n();
        let mask = (1u32 << s.relation_count()) - 1;
        let mut flags = vec![0u32; n * n];
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let mut f = 0;
                for r in 0..s.relation_count() {
                    f |= if s.holds(r, u, v) {
                        1 << r
                    } else {
                        1 << (16 + r)
                    };
                }
                flags[u * n + v] = f;
            }
        }
        Ok(RedState {
            n,
            mask,
            flags,
            alive: vec![true; n],
            red: vec![false; n * n],
            degree: vec![0; n],
        })
    }

    fn mixed(&self, p: usize, q: usize) -> bool {
        let n = self.n;
        let f = self.flags[p * n + q];
        let g = self.flags[q * n + p];
        (f & (f >> 16) & self.mask) != 0 || (g & (g >> 16) & self.mask) != 0
    }

    fn set_red(&mut self, p: usize, q: usize, value: bool) {
        let n = self.n;
        if self.red[p * n + q] != value {
            self.red[p * n + q] = value;
            self.red[q * n + p] = value;
            if value {
                self.degree[p] += 1;
                self.degree[q] += 1;
            } else {
                self.degree[p] -= 1;
                self.degree[q] -= 1;
            }
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let n = self.n;
        self.alive[b] = false;
        for q in 0..n {
            if q == a || q == b || !self.alive[q] {
                continue;
            }
            self.flags[a * n + q] |= self.flags[b * n + q];
            self.flags[q * n + a] |= self.flags[q * n + b];
            self.set_red(q, b, false);
            let m = self.mixed(a, q);
            self.set_red(a, q, m);
        }
        self.set_red(a, b, false);
    }

    /// Maximum red degree with the smallest part attaining it.
    fn max_degree(&self) -> (usize, usize) {
        let mut best = (0, usize::MAX);
        for p in 0..self.n {
            if self.alive[p] && (self.degree[p] > best.0 || best.1 == usize::MAX) {
                best = (self.degree[p], p);
            }
        }
        best
    }

    /// Width of the partition obtained by merging `a` and `b`, without
    /// changing the state.
    fn width_after(&self, a: usize, b: usize) -> usize {
        let n = self.n;
        let mut merged_deg = 0;
        let mut worst = 0;
        for q in 0..n {
            if q == a || q == b || !self.alive[q] {
                continue;
            }
            let fa = self.flags[a * n + q] | self.flags[b * n + q];
            let fq = self.flags[q * n + a] | self.flags[q * n + b];
            let red = (fa & (fa >> 16) & self.mask) != 0 || (fq & (fq >> 16) & self.mask) != 0;
            merged_deg += red as usize;
            let d = self.degree[q] - self.red[q * n + a] as usize - self.red[q * n + b] as usize
                + red as usize;
            worst = worst.max(d);
        }
        worst.max(merged_deg)
    }
}

/// Exact twin-width by iterative deepening over partitions, memoizing the
/// partitions already shown not to finish within the current bound. Merges
/// are tried in lexicographic order, so the witness is the lexicographically
/// first optimal sequence.
pub fn exact_twin_width(
    s: &BinaryStructure,
    limits: &Limits,
) -> Result<(usize, ContractionSequence)> {
    let n = s.n();
    check(
        "vertices for exact twin-width",
        n,
        limits.exact_tww_max_n.min(32),
    )?;
    if n <= 1 {
        return Ok((0, ContractionSequence::new(n, &[])?));
    }
    let ctx = ExactCtx::new(s);
    let start: Vec<u32> = (0..n).map(|v| 1u32 << v).collect();
    for bound in 0..n {
        let mut failed = HashSet::new();
        let mut path = Vec::new();
        if ctx.search(&start, bound, &mut failed, &mut path) {
            let merges: Vec<(usize, usize)> = path;
            return Ok((bound, ContractionSequence::new(n, &merges)?));
        }
    }
    unreachable!("every sequence has width below n")
}

struct ExactCtx {
    /// `rows[r][u]` is the bitmask of `v` with `r(u, v)`.
    rows: Vec<Vec<u32>>,
}

impl ExactCtx {
    fn new(s: &BinaryStructure) -> Self {
        let n = s.n();
        let rows = (0..s.relation_count())
            .map(|r| {
                (0..n)
                    .map(|u| {
                        (0..n)
                            .filter(|&v| s.holds(r, u, v))
                            .fold(0u32, |m, v| m | 1 << v)
                    })
                    .collect()
            })
            .collect();
        ExactCtx { rows }
    }

    fn one_way(&self, p: u32, q: u32) -> bool {
        self.rows.iter().all(|rows| {
            let mut any = false;
            let mut all = true;
            let mut m = p;
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                let hit = rows[u] & q;
                any |= hit != 0;
                all &= hit == q;
            }
            !any || all
        })
    }

    fn homogeneous(&self, p: u32, q: u32) -> bool {
        self.one_way(p, q) && self.one_way(q, p)
    }

    fn width(&self, parts: &[u32]) -> usize {
        let mut deg = vec![0; parts.len()];
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if !self.homogeneous(parts[i], parts[j]) {
                    deg[i] += 1;
                    deg[j] += 1;
                }
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// `parts` is kept sorted by minimum vertex, which makes it canonical.
    fn search(
        &self,
        parts: &[u32],
        bound: usize,
        failed: &mut HashSet<Vec<u32>>,
        path: &mut Vec<(usize, usize)>,
    ) -> bool {
        if parts.len() == 1 {
            return true;
        }
        if failed.contains(parts) {
            return false;
        }
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let mut next: Vec<u32> = Vec::with_capacity(parts.len() - 1);
                for (x, &p) in parts.iter().enumerate() {
                    if x == i {
                        next.push(p | parts[j]);
                    } else if x != j {
                        next.push(p);
                    }
                }
                if self.width(&next) > bound {
                    continue;
                }
                path.push((
                    parts[i].trailing_zeros() as usize,
                    parts[j].trailing_zeros() as usize,
                ));
                if self.search(&next, bound, failed, path) {
                    return true;
                }
                path.pop();
            }
        }
        failed.insert(parts.to_vec());
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy")]
pub enum GreedyPolicy {
    BestPair,
    /// Only merges parts that are consecutive intervals of the order.
    OrderAdjacent {
        order: VertexOrder,
    },
}

/// Repeatedly performs the merge minimizing the width of the next partition,
/// ties broken by the smallest representative pair.
pub fn greedy_contraction(
    s: &BinaryStructure,
    policy: &GreedyPolicy,
) -> Result<(WidthReport, ContractionSequence)> {
    let n = s.n();
    let mut st = RedState::new(s)?;
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    let mut steps = Vec::with_capacity(n.saturating_sub(1));
    match policy {
        GreedyPolicy::BestPair => {
            for _ in 1..n {
                let alive: Vec<usize> = (0..n).filter(|&p| st.alive[p]).collect();
                let mut best = (usize::MAX, 0, 0);
                for (i, &a) in alive.iter().enumerate() {
                    for &b in &alive[i + 1..] {
                        let w = st.width_after(a, b);
                        if w < best.0 {
                            best = (w, a, b);
                        }
                    }
                }
                let (_, a, b) = best;
                st.merge(a, b);
                merges.push((a, b));
                steps.push(st.max_degree());
            }
        }
        GreedyPolicy::OrderAdjacent { order } => {
            if order.len() != n {
                return Err(Error::Invalid(format!(
                    "order on {} vertices, structure has {n}",
                    order.len()
                )));
            }
            // intervals of the order, each named by its minimum vertex
            let mut runs: Vec<usize> = order.as_slice().to_vec();
            for _ in 1..n {
                let mut best = (usize::MAX, 0);
                for i in 0..runs.len() - 1 {
                    let w = st.width_after(runs[i], runs[i + 1]);
                    if w < best.0 {
                        best = (w, i);
                    }
                }
                let i = best.1;
                let (a, b) = (runs[i].min(runs[i + 1]), runs[i].max(runs[i + 1]));
                st.merge(a, b);
                merges.push((a, b));
                steps.push(st.max_degree());
                runs[i] = a;
                runs.remove(i + 1);
            }
        }
    }
    Ok((
        WidthReport::from_steps(steps),
        ContractionSequence::new(n, &merges)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "witness")]
pub enum TwwWitness {
    /// A rank-k division of the adjacency matrix in the BST order.
    RankDivision {
        order: VertexOrder,
        k: usize,
        division: Division,
        heuristic: bool,
    },
    /// An order-adjacent contraction sequence of the ordered tournament.
    Contraction {
        order: VertexOrder,
        sequence: ContractionSequence,
        report: WidthReport,
    },
}

impl TwwWitness {
    pub fn order(&self) -> &VertexOrder {
        match self {
            TwwWitness::RankDivision { order, .. } | TwwWitness::Contraction { order, .. } => order,
        }
    }
}

/// Orders `g` by a BST, then either finds a rank-k division of the ordered
/// adjacency matrix or contracts along the order.
pub fn approximate_tournament_tww(
    g: &Tournament,
    k: usize,
    strategy: &BuildStrategy,
    limits: &Limits,
) -> Result<TwwWitness> {
    let tree = bst_build(g, strategy)?;
    let order = left_to_right(&tree);
    let m = adjacency_matrix(g, &order);
    if k >= 1 && g.n() >= 1 {
        if let RankDivisionResult::Found {
            division,
            heuristic,
        } = find_rank_division(&m, k, limits)
        {
            return Ok(TwwWitness::RankDivision {
                order,
                k,
                division,
                heuristic,
            });
        }
    }
    let s = BinaryStructure::ordered(g, &order);
    let (report, sequence) = greedy_contraction(
        &s,
        &GreedyPolicy::OrderAdjacent {
            order: order.clone(),
        },
    )?;
    Ok(TwwWitness::Contraction {
        order,
        sequence,
        report,
    })
}

/// Re-checks a witness against `g` from scratch.
pub fn verify_witness(g: &OrientedGraph, w: &TwwWitness) -> Result<bool> {
    if w.order().len() != g.n() {
        return Ok(false);
    }
    match w {
        TwwWitness::RankDivision {
            order, k, division, ..
        } => {
            let m = adjacency_matrix(g, order);
            Ok(division.validate(&m).is_ok() && is_rank_division(&m, division, *k))
        }
        TwwWitness::Contraction {
            order,
            sequence,
            report,
        } => {
            let s = BinaryStructure::ordered(g, order);
            let ok_order = sequence_respects_order(sequence, order);
            Ok(ok_order && width_of_sequence(&s, sequence, WidthMode::Recompute)? == *report)
        }
    }
}

/// Whether every merge joins two consecutive intervals of `order`.
pub fn sequence_respects_order(seq: &ContractionSequence, order: &VertexOrder) -> bool {
    if seq.n() != order.len() {
        return false;
    }
    // each part is stored as its rank interval, keyed by representative
    let mut span: Vec<(usize, usize)> = (0..seq.n())
        .map(|v| (order.rank(v), order.rank(v)))
        .collect();
    for &(a, b) in seq.merges() {
        let (x, y) = (span[a], span[b]);
        if x.1 + 1 != y.0 && y.1 + 1 != x.0 {
            return false;
        }
        span[a] = (x.0.min(y.0), x.1.max(y.1));
    }
    true
}
