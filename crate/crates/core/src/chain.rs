//! Chain quasi-orders, interval families, and extraction of non-overlapping
//! subfamilies from BST orders.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::bst::{in_order_with_schedule, packed_children, Arity, BstTree, Side, NO_CHILD};
use crate::graph::{chain_order, independence_number, parse_num, OrientedGraph, VertexOrder};
use crate::limits::Limits;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Plus => "+",
            Orientation::Minus => "-",
        })
    }
}

impl FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Orientation::Plus),
            "-" | "minus" => Ok(Orientation::Minus),
            other => Err(Error::Invalid(format!("unknown orientation `{other}`"))),
        }
    }
}

/// Class ranks: `B_i` has rank `2(i-1)`, `c_i` has `2i-1` and `A_k` has `2k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainQuasiOrder {
    chain: Vec<usize>,
    /// `false` marks an anti-complete node; only generalized orders have them.
    complete: Vec<bool>,
    orientation: Orientation,
    rank: Vec<usize>,
}

impl ChainQuasiOrder {
    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    pub fn complete(&self) -> &[bool] {
        &self.complete
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    #[inline]
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn class_count(&self) -> usize {
        2 * self.chain.len() + 1
    }

    /// Classes in increasing order; `B` classes may be empty.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (v, &r) in self.rank.iter().enumerate() {
            out[r].push(v);
        }
        out
    }

    pub fn le(&self, u: usize, v: usize) -> bool {
        self.rank[u] <= self.rank[v]
    }
}

fn check_members(n: usize, chain: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    for &c in chain {
        if c >= n {
            return Err(Error::OutOfRange { vertex: c, n });
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::Invalid(format!(
                "vertex {} repeated in chain",
                c + 1
            )));
        }
    }
    Ok(())
}

fn forward(g: &OrientedGraph, o: Orientation, a: usize, b: usize) -> bool {
    match o {
        Orientation::Plus => g.has_arc(a, b),
        Orientation::Minus => g.has_arc(b, a),
    }
}

/// `chain` must be enumerated so that arcs go from earlier to later
/// elements (`+`) or from later to earlier ones (`-`).
pub fn chain_quasi_order(
    g: &OrientedGraph,
    chain: &[usize],
    o: Orientation,
) -> Result<ChainQuasiOrder> {
    check_members(g.n(), chain)?;
    for (i, &a) in chain.iter().enumerate() {
        for &b in &chain[i + 1..] {
            if !forward(g, o, a, b) {
                let set = BitSet::from_indices(g.n(), chain.iter().copied());
                return Err(match chain_order(g, &set) {
                    Ok(_) => Error::WrongEnumeration,
                    Err(e) => e,
                });
            }
        }
    }
    Ok(build(g, chain, vec![true; chain.len()], o))
}

/// The quasi-order of a sequence mixing complete nodes (arcs towards every
/// later node, in the direction of `o`) and anti-complete nodes
/// (non-adjacent to every later node).
pub fn generalized_quasi_order(
    g: &OrientedGraph,
    seq: &[(usize, bool)],
    o: Orientation,
) -> Result<ChainQuasiOrder> {
    let chain: Vec<usize> = seq.iter().map(|&(c, _)| c).collect();
    check_members(g.n(), &chain)?;
    for (i, &(a, complete)) in seq.iter().enumerate() {
        for &(b, _) in &seq[i + 1..] {
            let ok = if complete {
                forward(g, o, a, b)
            } else {
                !g.adjacent(a, b)
            };
            if !ok {
                return Err(Error::NotAChain);
            }
        }
    }
    Ok(build(g, &chain, seq.iter().map(|&(_, c)| c).collect(), o))
}

fn build(
    g: &OrientedGraph,
    chain: &[usize],
    complete: Vec<bool>,
    o: Orientation,
) -> ChainQuasiOrder {
    let n = g.n();
    let k = chain.len();
    let mut rank = vec![2 * k; n];
    let mut a = BitSet::full(n);
    for &c in chain {
        a.remove(c);
    }
    for (i, &c) in chain.iter().enumerate() {
        rank[c] = 2 * i + 1;
        let next = if complete[i] {
            match o {
                Orientation::Plus => a.intersection(g.out_neighbours(c)),
                Orientation::Minus => a.intersection(g.in_neighbours(c)),
            }
        } else {
            let mut next = a.difference(g.out_neighbours(c));
            next.difference_with(g.in_neighbours(c));
            next
        };
        for v in a.difference(&next).iter() {
            rank[v] = 2 * i;
        }
        a = next;
    }
    ChainQuasiOrder {
        chain: chain.to_vec(),
        complete,
        orientation: o,
        rank,
    }
}

/// Whether some `x1, x2 ∈ x` and `y1, y2 ∈ y` have `x1 ⪯ y1` and `x2 ⪰ y2`.
pub fn overlapping(q: &ChainQuasiOrder, x: &[usize], y: &[usize]) -> bool {
    let span = |s: &[usize]| {
        let it = s.iter().map(|&v| q.rank(v));
        (it.clone().min(), it.max())
    };
    match (span(x), span(y)) {
        ((Some(xmin), Some(xmax)), (Some(ymin), Some(ymax))) => xmin <= ymax && xmax >= ymin,
        _ => false,
    }
}

/// Whether the given sets are pairwise non-overlapping for `q`.
pub fn pairwise_nonoverlapping(q: &ChainQuasiOrder, parts: &[Vec<usize>]) -> bool {
    let mut spans: Vec<(usize, usize)> = parts
        .iter()
        .filter(|p| !p.is_empty())
        .map(|p| {
            let lo = p.iter().map(|&v| q.rank(v)).min().expect("nonempty");
            let hi = p.iter().map(|&v| q.rank(v)).max().expect("nonempty");
            (lo, hi)
        })
        .collect();
    spans.sort_unstable();
    spans.windows(2).all(|w| w[0].1 < w[1].0)
}

/// Disjoint nonempty vertex sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalFamily {
    parts: Vec<Vec<usize>>,
}

impl IntervalFamily {
    pub fn new(parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut all: Vec<usize> = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::InvalidFamily(format!("part {} is empty", i + 1)));
            }
            all.extend_from_slice(p);
        }
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidFamily(format!(
                "vertex {} lies in two parts",
                w[0] + 1
            )));
        }
        Ok(IntervalFamily { parts })
    }

    pub fn singletons(n: usize) -> Self {
        IntervalFamily {
            parts: (0..n).map(|v| vec![v]).collect(),
        }
    }

    /// Consecutive blocks of `order` of the given size; the last may be short.
    pub fn chunks(order: &VertexOrder, size: usize) -> Self {
        IntervalFamily {
            parts: order
                .as_slice()
                .chunks(size.max(1))
                .map(|c| c.to_vec())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Rank spans `(lo, hi, index)` sorted by `lo`, after checking that every
    /// part is an interval of `order`.
    pub fn spans(&self, order: &VertexOrder) -> Result<Vec<(usize, usize, usize)>> {
        let n = order.len();
        let mut spans = Vec::with_capacity(self.parts.len());
        for (i, p) in self.parts.iter().enumerate() {
            let mut lo = usize::MAX;
            let mut hi = 0;
            for &v in p {
                if v >= n {
                    return Err(Error::OutOfRange { vertex: v, n });
                }
                lo = lo.min(order.rank(v));
                hi = hi.max(order.rank(v));
            }
            if hi + 1 - lo != p.len() {
                return Err(Error::InvalidFamily(format!(
                    "part {} is not an interval of the order",
                    i + 1
                )));
            }
            spans.push((lo, hi, i));
        }
        // disjoint parts have distinct left ends, so bucket by rank instead of sorting
        let mut slot = vec![usize::MAX; n];
        for (k, &(lo, _, _)) in spans.iter().enumerate() {
            if slot[lo] != usize::MAX {
                spans.sort_unstable();
                return Ok(spans);
            }
            slot[lo] = k;
        }
        Ok(slot
            .into_iter()
            .filter(|&k| k != usize::MAX)
            .map(|k| spans[k])
            .collect())
    }
}

/// Parses `f <count>` followed by one line of 1-based vertex ids per part.
pub fn parse_family(text: &str) -> Result<IntervalFamily> {
    let mut count: Option<usize> = None;
    let mut parts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if count.is_none() {
            match toks.as_slice() {
                ["f", c] => count = Some(parse_num(c, line_no)?),
                _ => return Err(Error::parse(line_no, "expected `f <count>` header")),
            }
            continue;
        }
        let part = toks
            .iter()
            .map(|t| match parse_num(t, line_no)? {
                0 => Err(Error::parse(line_no, "vertex ids start at 1")),
                v => Ok(v - 1),
            })
            .collect::<Result<Vec<_>>>()?;
        parts.push(part);
    }
    let count = count.ok_or_else(|| Error::parse(0, "missing `f` header"))?;
    if parts.len() != count {
        return Err(Error::parse(
            0,
            format!("header announces {count} parts, found {}", parts.len()),
        ));
    }
    IntervalFamily::new(parts)
}

pub fn write_family(f: &IntervalFamily) -> String {
    let mut s = format!("f {}\n", f.len());
    for p in f.parts() {
        let line: Vec<String> = p.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

/// `f(0) = 1`, `f(k+1) = 4 f(k) + 9`, saturating.
pub fn budget(k: usize) -> u64 {
    let mut f: u64 = 1;
    for _ in 0..k {
        f = f.saturating_mul(4).saturating_add(9);
    }
    f
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchSide {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

/// One block between consecutive selected branch indices. Ranges are
/// half-open ranges of positions in the BST order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub left: (usize, usize),
    pub right: (usize, usize),
    /// Index into the input family of the leftmost part inside each range.
    pub left_part: Option<usize>,
    pub right_part: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionTrace {
    pub arity: Arity,
    pub branch: Vec<usize>,
    /// Which child the branch descends into at each non-final node.
    pub steps: Vec<Side>,
    pub weights: Vec<usize>,
    pub indices: Vec<usize>,
    pub blocks: Vec<Block>,
    pub side: BranchSide,
    /// Center-branching nodes dropped from the chain.
    pub anti_complete: Vec<usize>,
    /// Selected parts discarded because of an anti-complete node.
    pub removed: Vec<usize>,
}

impl ExtractionTrace {
    /// Checks weight monotonicity, the per-step growth bound, the -3 index
    /// rule and its consequence for consecutive indices.
    pub fn check(&self) -> std::result::Result<(), String> {
        let w = &self.weights;
        let a = match self.arity {
            Arity::Binary => 2,
            Arity::Ternary => 3,
        };
        if w.len() != self.branch.len() || self.steps.len() + 1 != self.branch.len().max(1) {
            return Err("trace lengths disagree".into());
        }
        for i in 0..w.len().saturating_sub(1) {
            if w[i + 1] > w[i] {
                return Err(format!("weight increases at step {i}"));
            }
            if a * w[i + 1] + 1 < w[i] {
                return Err(format!("weight drops too fast at step {i}"));
            }
        }
        if w.is_empty() {
            return if self.indices.is_empty() {
                Ok(())
            } else {
                Err("indices on an empty branch".into())
            };
        }
        if self.indices.first() != Some(&0) {
            return Err("first index is not 0".into());
        }
        for pair in self.indices.windows(2) {
            let (i, j) = (pair[0], pair[1]);
            if j <= i || w[j] + 3 > w[i] {
                return Err(format!("index {j} does not drop 3 below index {i}"));
            }
            if (i + 1..j).any(|m| w[m] + 3 <= w[i]) {
                return Err(format!("index {j} is not minimal after {i}"));
            }
            if a * w[j] + 3 < w[i] {
                return Err(format!("indices {i}, {j} violate the block growth bound"));
            }
        }
        let last = *self.indices.last().expect("nonempty");
        if (last + 1..w.len()).any(|m| w[m] + 3 <= w[last]) {
            return Err("index sequence stops early".into());
        }
        if self.blocks.len() + 1 != self.indices.len() {
            return Err("one block per consecutive index pair expected".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub order: ChainQuasiOrder,
    /// Indices into the input family, in block order.
    pub selected: Vec<usize>,
    pub family: IntervalFamily,
    pub trace: ExtractionTrace,
}

impl Extraction {
    pub fn chain(&self) -> &[usize] {
        self.order.chain()
    }

    pub fn orientation(&self) -> Orientation {
        self.order.orientation()
    }
}

/// Walks the heaviest branch of `t`, cuts it into blocks where the number of
/// parts met drops by 3, keeps one part per block on the better side, and
/// returns those parts with a chain quasi-order for which they are
/// non-overlapping.
///
/// With `enforce_budget`, at least `k` parts are guaranteed for tournaments;
/// for oriented graphs `budget(k + α)` parts are required.
pub fn extract_nonoverlapping(
    g: &OrientedGraph,
    t: &BstTree,
    family: &IntervalFamily,
    k: usize,
    enforce_budget: bool,
    limits: &Limits,
) -> Result<Extraction> {
    let n = g.n();
    if t.n() != n {
        return Err(Error::Invalid(format!(
            "tree has {} nodes, graph has {n}",
            t.n()
        )));
    }
    let kids = packed_children(t);
    let (order, sched) = in_order_with_schedule(t, &kids);
    let spans = family.spans(&order)?;
    if enforce_budget {
        let need = if g.is_tournament() {
            budget(k)
        } else {
            budget(k.saturating_add(independence_number(g, limits)?))
        };
        if (family.len() as u64) < need {
            return Err(Error::BudgetUnderflow {
                k,
                need,
                have: family.len(),
            });
        }
    }

    // position in `spans` of the part covering each rank
    let mut part_at = vec![NO_CHILD; n];
    for (s, &(lo, hi, _)) in spans.iter().enumerate() {
        part_at[lo..=hi].fill(s as u32);
    }
    // per node: lowest and highest rank in its subtree, and the range of
    // span positions met there (NO_CHILD when none)
    let mut agg = vec![[0u32, 0, NO_CHILD, NO_CHILD]; n];
    for &x in sched.iter().rev() {
        let x = x as usize;
        let r = order.rank(x) as u32;
        let p = part_at[r as usize];
        let mut acc = [r, r, p, p];
        for c in kids[x] {
            if c == NO_CHILD {
                continue;
            }
            let [l, h, a, b] = agg[c as usize];
            acc[0] = acc[0].min(l);
            acc[1] = acc[1].max(h);
            if a != NO_CHILD {
                acc[2] = acc[2].min(a);
                acc[3] = if acc[3] == NO_CHILD { b } else { acc[3].max(b) };
            }
        }
        agg[x] = acc;
    }
    let lo = |x: usize| agg[x][0] as usize;
    let hi = |x: usize| agg[x][1] as usize;
    let weight = |x: usize| {
        let [_, _, a, b] = agg[x];
        if a == NO_CHILD {
            0
        } else {
            (b - a) as usize + 1
        }
    };

    let mut branch = Vec::new();
    let mut steps = Vec::new();
    let mut cur = t.root();
    while let Some(x) = cur {
        branch.push(x);
        let mut best: Option<(usize, Side)> = None;
        for side in [Side::Left, Side::Center, Side::Right] {
            if let Some(c) = t.child(x, side) {
                if best.is_none_or(|(b, _)| weight(c) > weight(b)) {
                    best = Some((c, side));
                }
            }
        }
        if let Some((_, side)) = best {
            steps.push(side);
        }
        cur = best.map(|(c, _)| c);
    }
    let weights: Vec<usize> = branch.iter().map(|&x| weight(x)).collect();

    let mut indices = Vec::new();
    if !branch.is_empty() {
        indices.push(0);
        let mut last = 0;
        for i in 1..branch.len() {
            if weights[i] + 3 <= weights[last] {
                indices.push(i);
                last = i;
            }
        }
    }

    // leftmost part contained in the half-open rank range
    let contained = |from: usize, to: usize| -> Option<usize> {
        let s = spans.partition_point(|&(l, _, _)| l < from);
        spans.get(s).filter(|&&(_, h, _)| h < to).map(|&(_, _, i)| i)
    };
    let blocks: Vec<Block> = indices
        .windows(2)
        .map(|w| {
            let (si, sj) = (branch[w[0]], branch[w[1]]);
            let left = (lo(si), lo(sj));
            let right = (hi(sj) + 1, hi(si) + 1);
            Block {
                left,
                right,
                left_part: contained(left.0, left.1),
                right_part: contained(right.0, right.1),
            }
        })
        .collect();
    let on_left = blocks.iter().filter(|b| b.left_part.is_some()).count();
    let on_right = blocks.iter().filter(|b| b.right_part.is_some()).count();
    let side = if on_left >= on_right {
        BranchSide::Left
    } else {
        BranchSide::Right
    };

    let (o, chain_step) = match side {
        BranchSide::Left => (Orientation::Plus, Side::Right),
        BranchSide::Right => (Orientation::Minus, Side::Left),
    };
    let seq: Vec<(usize, bool)> = steps
        .iter()
        .zip(&branch)
        .filter(|&(&s, _)| s == chain_step || s == Side::Center)
        .map(|(&s, &x)| (x, s == chain_step))
        .collect();
    let generalized = build(
        g,
        &seq.iter().map(|&(x, _)| x).collect::<Vec<_>>(),
        seq.iter().map(|&(_, c)| c).collect(),
        o,
    );
    let mut dropped_ranks = vec![false; generalized.class_count()];
    for (i, &(_, complete)) in seq.iter().enumerate() {
        if !complete {
            dropped_ranks[2 * i] = true;
            dropped_ranks[2 * i + 1] = true;
        }
    }

    let mut selected = Vec::new();
    let mut removed = Vec::new();
    for b in &blocks {
        let pick = match side {
            BranchSide::Left => b.left_part,
            BranchSide::Right => b.right_part,
        };
        let Some(idx) = pick else { continue };
        if family.parts()[idx]
            .iter()
            .any(|&v| dropped_ranks[generalized.rank(v)])
        {
            removed.push(idx);
        } else {
            selected.push(idx);
        }
    }

    let chain: Vec<usize> = seq.iter().filter(|&&(_, c)| c).map(|&(x, _)| x).collect();
    let q = build(g, &chain, vec![true; chain.len()], o);
    let parts: Vec<Vec<usize>> = selected
        .iter()
        .map(|&i| family.parts()[i].clone())
        .collect();
    debug_assert!(pairwise_nonoverlapping(&q, &parts));
    Ok(Extraction {
        order: q,
        selected,
        family: IntervalFamily { parts },
        trace: ExtractionTrace {
            arity: t.arity(),
            branch,
            steps,
            weights,
            indices,
            blocks,
            side,
            anti_complete: seq.iter().filter(|&&(_, c)| !c).map(|&(x, _)| x).collect(),
            removed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bst::{bst_build, bst_validate, left_to_right, BuildStrategy};
    use crate::graph::Tournament;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Class rank straight from the definition: the first chain node whose
    /// relevant neighbourhood `v` leaves.
    fn oracle_rank(g: &OrientedGraph, seq: &[(usize, bool)], o: Orientation, v: usize) -> usize {
        if let Some(i) = seq.iter().position(|&(c, _)| c == v) {
            return 2 * i + 1;
        }
        for (i, &(c, complete)) in seq.iter().enumerate() {
            let stays = if complete {
                forward(g, o, c, v)
            } else {
                !g.adjacent(c, v)
            };
            if !stays {
                return 2 * i;
            }
        }
        2 * seq.len()
    }

    fn oracle_overlap(rank: &[usize], x: &[usize], y: &[usize]) -> bool {
        let le = x.iter().any(|&a| y.iter().any(|&b| rank[a] <= rank[b]));
        let ge = x.iter().any(|&a| y.iter().any(|&b| rank[a] >= rank[b]));
        le && ge
    }

    #[test]
    fn spec_examples() {
        let t3 = Tournament::transitive(3);
        let q = chain_quasi_order(&t3, &[0, 1, 2], Orientation::Plus).unwrap();
        assert_eq!(q.ranks(), &[1, 3, 5]);
        let t4 = Tournament::transitive(4);
        let q = chain_quasi_order(&t4, &[1, 2], Orientation::Plus).unwrap();
        assert_eq!(
            q.classes(),
            vec![vec![0], vec![1], vec![], vec![2], vec![3]]
        );
        assert_eq!(
            chain_quasi_order(&t4, &[2, 1], Orientation::Plus),
            Err(Error::WrongEnumeration)
        );
        assert!(chain_quasi_order(&t4, &[2, 1], Orientation::Minus).is_ok());
        assert_eq!(
            chain_quasi_order(&Tournament::cycle3(), &[0, 1, 2], Orientation::Plus),
            Err(Error::NotAChain)
        );
        let g = OrientedGraph::from_arcs(2, &[]).unwrap();
        let q = chain_quasi_order(&g, &[0], Orientation::Plus).unwrap();
        assert_eq!(q.rank(1), 0);
    }

    #[test]
    fn overlap_examples() {
        let t4 = Tournament::transitive(4);
        let q = chain_quasi_order(&t4, &[1, 2], Orientation::Plus).unwrap();
        assert!(!overlapping(&q, &[0], &[3]));
        let g = Tournament::transitive(5);
        let q = chain_quasi_order(&g, &[2], Orientation::Plus).unwrap();
        // 0 and 1 share B_1, 3 and 4 share A_1
        assert!(overlapping(&q, &[0], &[1]));
        assert!(overlapping(&q, &[0, 3], &[1, 4]));
        assert!(!overlapping(&q, &[0, 1], &[3, 4]));
        assert!(!overlapping(&q, &[], &[3]));
    }

    #[test]
    fn classes_match_the_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=12);
            let g = OrientedGraph::random(n, rng.gen_range(0.0..0.5), &mut rng);
            let o = if rng.gen() {
                Orientation::Plus
            } else {
                Orientation::Minus
            };
            // grow a random generalized sequence greedily
            let mut seq: Vec<(usize, bool)> = Vec::new();
            let mut order: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            order.shuffle(&mut rng);
            for &v in &order {
                let complete_ok = seq.iter().all(|&(c, comp)| {
                    if comp {
                        forward(&g, o, c, v)
                    } else {
                        !g.adjacent(c, v)
                    }
                });
                if complete_ok && rng.gen_bool(0.5) {
                    let complete = rng.gen_bool(0.7);
                    seq.push((v, complete));
                }
            }
            // anti-complete nodes must be non-adjacent to everything after them
            let valid: Vec<(usize, bool)> = seq.clone();
            let Ok(q) = generalized_quasi_order(&g, &valid, o) else {
                continue;
            };
            for v in 0..n {
                assert_eq!(q.rank(v), oracle_rank(&g, &valid, o, v));
            }
        }
    }

    #[test]
    fn tournament_formulas_agree_exhaustively() {
        // B_i = A_{i-1} ∩ N^-(c_i) against A_{i-1} \ N^+(c_i), with A_i kept
        // as the plain intersection of out-neighbourhoods
        for n in 1..=5 {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..1 << pairs.len() {
                let g = Tournament::from_pair_fn(n, |u, v| {
                    mask >> pairs.iter().position(|&p| p == (u, v)).unwrap() & 1 == 1
                });
                for s in 1u32..1 << n {
                    let set = BitSet::from_indices(n, (0..n).filter(|&v| s >> v & 1 == 1));
                    let Ok(chain) = chain_order(&g, &set) else {
                        continue;
                    };
                    let q = chain_quasi_order(&g, &chain, Orientation::Plus).unwrap();
                    let mut a = BitSet::full(n);
                    for (i, &c) in chain.iter().enumerate() {
                        let b = a.intersection(g.in_neighbours(c));
                        for v in b.iter() {
                            assert_eq!(q.rank(v), 2 * i);
                        }
                        a.intersect_with(g.out_neighbours(c));
                    }
                    for v in a.iter() {
                        assert_eq!(q.rank(v), 2 * chain.len());
                    }
                }
            }
        }
    }

    #[test]
    fn budget_values() {
        assert_eq!(
            (0..5).map(budget).collect::<Vec<_>>(),
            vec![1, 13, 61, 253, 1021]
        );
        assert_eq!(budget(100), u64::MAX);
    }

    #[test]
    fn family_format_and_validation() {
        let f = IntervalFamily::new(vec![vec![0, 1], vec![3]]).unwrap();
        assert_eq!(parse_family(&write_family(&f)).unwrap(), f);
        assert!(IntervalFamily::new(vec![vec![0], vec![0]]).is_err());
        assert!(IntervalFamily::new(vec![vec![]]).is_err());
        let order = VertexOrder::new(vec![0, 2, 1, 3]).unwrap();
        assert!(f.spans(&order).is_err());
        assert_eq!(
            f.spans(&VertexOrder::identity(4)).unwrap(),
            vec![(0, 1, 0), (3, 3, 1)]
        );
        assert!(parse_family("f 2\n1 2\n").is_err());
    }

    #[test]
    fn right_spine_transitive() {
        let g = Tournament::transitive(13);
        let t = bst_build(&g, &BuildStrategy::Insertion(vec![])).unwrap();
        let fam = IntervalFamily::singletons(13);
        let e = extract_nonoverlapping(&g, &t, &fam, 1, true, &Limits::default()).unwrap();
        assert!(!e.selected.is_empty());
        assert!(pairwise_nonoverlapping(&e.order, e.family.parts()));
        e.trace.check().unwrap();
        assert_eq!(
            extract_nonoverlapping(
                &g,
                &t,
                &IntervalFamily::singletons(5),
                1,
                true,
                &Limits::default()
            )
            .map(|_| ()),
            Err(Error::BudgetUnderflow {
                k: 1,
                need: 13,
                have: 5
            })
        );
        let e = extract_nonoverlapping(
            &g,
            &t,
            &IntervalFamily::new(vec![]).unwrap(),
            0,
            false,
            &Limits::default(),
        )
        .unwrap();
        assert!(e.selected.is_empty());
    }

    fn check_extraction(g: &OrientedGraph, fam: &IntervalFamily, e: &Extraction) {
        e.trace.check().unwrap();
        // independent class ranks for the returned chain
        let seq: Vec<(usize, bool)> = e.chain().iter().map(|&c| (c, true)).collect();
        let rank: Vec<usize> = (0..g.n())
            .map(|v| oracle_rank(g, &seq, e.orientation(), v))
            .collect();
        assert_eq!(rank, e.order.ranks());
        chain_quasi_order(g, e.chain(), e.orientation()).unwrap();
        let parts = e.family.parts();
        for i in 0..parts.len() {
            assert_eq!(parts[i], fam.parts()[e.selected[i]]);
            for j in i + 1..parts.len() {
                assert!(!oracle_overlap(&rank, &parts[i], &parts[j]));
            }
        }
    }

    #[test]
    fn random_tournament_extractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for round in 0..80 {
            let n = rng.gen_range(13..=300);
            let g = Tournament::random(n, &mut rng);
            let t = bst_build(&g, &BuildStrategy::Random(round)).unwrap();
            let order = left_to_right(&t);
            let size = rng.gen_range(1..=3);
            let fam = IntervalFamily::chunks(&order, size);
            let k = (0..8)
                .take_while(|&k| budget(k) <= fam.len() as u64)
                .last()
                .unwrap();
            let e = extract_nonoverlapping(&g, &t, &fam, k, true, &Limits::default()).unwrap();
            assert!(
                e.selected.len() >= k,
                "n={n} k={k} got {}",
                e.selected.len()
            );
            check_extraction(&g, &fam, &e);
        }
    }

    #[test]
    fn random_oriented_extractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for round in 0..80 {
            let n = rng.gen_range(5..=60);
            let g = OrientedGraph::random(n, rng.gen_range(0.0..0.2), &mut rng);
            let t = bst_build(&g, &BuildStrategy::Random(round)).unwrap();
            assert_eq!(bst_validate(&g, &t), Ok(()));
            let fam = IntervalFamily::singletons(n);
            let e = extract_nonoverlapping(&g, &t, &fam, 0, false, &Limits::default()).unwrap();
            check_extraction(&g, &fam, &e);
        }
    }
}
