//! Binary search trees on tournaments and ternary search trees on oriented
//! graphs, with their left-to-right orders.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::graph::{parse_num, OrientedGraph, VertexOrder};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arity {
    Binary,
    Ternary,
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arity::Binary => "binary",
            Arity::Ternary => "ternary",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Center,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BstTree {
    arity: Arity,
    root: Option<usize>,
    left: Vec<Option<usize>>,
    center: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
}

impl BstTree {
    fn empty(n: usize, arity: Arity) -> Self {
        BstTree {
            arity,
            root: None,
            left: vec![None; n],
            center: vec![None; n],
            right: vec![None; n],
            parent: vec![None; n],
        }
    }

    /// Checks that the child links form a tree spanning `0..n`.
    pub fn from_children(
        arity: Arity,
        root: Option<usize>,
        left: Vec<Option<usize>>,
        center: Vec<Option<usize>>,
        right: Vec<Option<usize>>,
    ) -> Result<Self> {
        let n = left.len();
        if center.len() != n || right.len() != n {
            return Err(Error::InvalidTree("child arrays differ in length".into()));
        }
        let mut t = BstTree {
            arity,
            root,
            left,
            center,
            right,
            parent: vec![None; n],
        };
        if arity == Arity::Binary {
            if let Some(x) = (0..n).find(|&x| t.center[x].is_some()) {
                return Err(Error::InvalidTree(format!(
                    "binary node {x} has a center child"
                )));
            }
        }
        let Some(r) = root else {
            return if n == 0 {
                Ok(t)
            } else {
                Err(Error::InvalidTree("missing root".into()))
            };
        };
        if r >= n {
            return Err(Error::OutOfRange { vertex: r, n });
        }
        for x in 0..n {
            let kids: Vec<usize> = t.children(x).collect();
            for c in kids {
                if c >= n {
                    return Err(Error::OutOfRange { vertex: c, n });
                }
                if c == r || t.parent[c].is_some() {
                    return Err(Error::InvalidTree(format!("node {c} has two parents")));
                }
                t.parent[c] = Some(x);
            }
        }
        let reached = t.preorder().len();
        if reached != n {
            return Err(Error::InvalidTree(format!(
                "{} nodes are not reachable from the root",
                n - reached
            )));
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.left.len()
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn left(&self, x: usize) -> Option<usize> {
        self.left[x]
    }

    pub fn center(&self, x: usize) -> Option<usize> {
        self.center[x]
    }

    pub fn right(&self, x: usize) -> Option<usize> {
        self.right[x]
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn child(&self, x: usize, side: Side) -> Option<usize> {
        match side {
            Side::Left => self.left[x],
            Side::Center => self.center[x],
            Side::Right => self.right[x],
        }
    }

    /// Children in left, center, right order.
    pub fn children(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        [self.left[x], self.center[x], self.right[x]]
            .into_iter()
            .flatten()
    }

    pub fn is_leaf(&self, x: usize) -> bool {
        self.children(x).next().is_none()
    }

    /// Which child of its parent `x` is.
    pub fn side_of(&self, x: usize) -> Option<Side> {
        let p = self.parent[x]?;
        [Side::Left, Side::Center, Side::Right]
            .into_iter()
            .find(|&s| self.child(p, s) == Some(x))
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        let mut stack: Vec<usize> = self.root.into_iter().collect();
        let mut seen = vec![false; self.n()];
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            out.push(x);
            for c in [self.right[x], self.center[x], self.left[x]]
                .into_iter()
                .flatten()
            {
                stack.push(c);
            }
        }
        out
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n()).filter(|&x| self.is_leaf(x)).collect()
    }

    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack: Vec<(usize, usize)> = self.root.map(|r| (r, 1)).into_iter().collect();
        while let Some((x, d)) = stack.pop() {
            best = best.max(d);
            stack.extend(self.children(x).map(|c| (c, d + 1)));
        }
        best
    }

    pub fn is_ancestor(&self, a: usize, mut y: usize) -> bool {
        while let Some(p) = self.parent[y] {
            if p == a {
                return true;
            }
            y = p;
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuildStrategy {
    /// Insert vertices in the given sequence.
    Insertion(Vec<usize>),
    /// Uniformly random pivots.
    Random(u64),
    /// Pivot whose out-degree inside the current set is closest to half of it.
    MedianPivot,
}

impl FromStr for BuildStrategy {
    type Err = Error;
    /// `insertion`, `random`, `random:<seed>` or `median`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        match name {
            "random" => Ok(BuildStrategy::Random(if arg.is_empty() {
                0
            } else {
                arg.parse()
                    .map_err(|_| Error::Invalid(format!("bad seed `{arg}`")))?
            })),
            "median" | "median-pivot" => Ok(BuildStrategy::MedianPivot),
            "insertion" if arg.is_empty() => Ok(BuildStrategy::Insertion(Vec::new())),
            "insertion" => arg
                .split(',')
                .map(|t| match t.trim().parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::Invalid(format!(
                        "bad vertex `{t}` in insertion order"
                    ))),
                })
                .collect::<Result<_>>()
                .map(BuildStrategy::Insertion),
            other => Err(Error::Invalid(format!("unknown BST strategy `{other}`"))),
        }
    }
}

/// Builds a BST: binary when `g` is a tournament, ternary otherwise.
/// An empty insertion sequence means the identity order.
pub fn bst_build(g: &OrientedGraph, strategy: &BuildStrategy) -> Result<BstTree> {
    let n = g.n();
    let arity = if g.is_tournament() {
        Arity::Binary
    } else {
        Arity::Ternary
    };
    match strategy {
        BuildStrategy::Insertion(seq) if seq.is_empty() => {
            Ok(insertion(g, arity, &(0..n).collect::<Vec<_>>()))
        }
        BuildStrategy::Insertion(seq) => {
            VertexOrder::new(seq.clone())?;
            if seq.len() != n {
                return Err(Error::Invalid(format!(
                    "insertion order lists {} of {n} vertices",
                    seq.len()
                )));
            }
            Ok(insertion(g, arity, seq))
        }
        BuildStrategy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok(pivot_build(g, arity, |set| {
                *set.choose(&mut rng).expect("nonempty")
            }))
        }
        BuildStrategy::MedianPivot => {
            let mut members = BitSet::new(n);
            Ok(pivot_build(g, arity, |set| {
                members.clear();
                for &v in set.iter() {
                    members.insert(v);
                }
                let half = set.len() as f64 / 2.0;
                let mut best = (f64::INFINITY, usize::MAX);
                for &v in set.iter() {
                    let d = g.out_neighbours(v).intersection_count(&members) as f64;
                    let key = ((d - half).abs(), v);
                    if key < best {
                        best = key;
                    }
                }
                best.1
            }))
        }
    }
}

fn insertion(g: &OrientedGraph, arity: Arity, seq: &[usize]) -> BstTree {
    let mut t = BstTree::empty(g.n(), arity);
    for &v in seq {
        let Some(mut cur) = t.root else {
            t.root = Some(v);
            continue;
        };
        loop {
            let slot = if g.has_arc(v, cur) {
                &mut t.left[cur]
            } else if g.has_arc(cur, v) {
                &mut t.right[cur]
            } else {
                &mut t.center[cur]
            };
            match *slot {
                Some(next) => cur = next,
                None => {
                    *slot = Some(v);
                    t.parent[v] = Some(cur);
                    break;
                }
            }
        }
    }
    t
}

fn pivot_build(
    g: &OrientedGraph,
    arity: Arity,
    mut pick: impl FnMut(&[usize]) -> usize,
) -> BstTree {
    let n = g.n();
    let mut t = BstTree::empty(n, arity);
    // vertex set still to place, and where its subtree hangs
    type Pending = (Vec<usize>, Option<(usize, Side)>);
    let mut stack: Vec<Pending> = vec![((0..n).collect(), None)];
    while let Some((set, attach)) = stack.pop() {
        if set.is_empty() {
            continue;
        }
        let x = pick(&set);
        match attach {
            None => t.root = Some(x),
            Some((p, side)) => {
                match side {
                    Side::Left => t.left[p] = Some(x),
                    Side::Center => t.center[p] = Some(x),
                    Side::Right => t.right[p] = Some(x),
                }
                t.parent[x] = Some(p);
            }
        }
        let (mut l, mut c, mut r) = (Vec::new(), Vec::new(), Vec::new());
        for &v in &set {
            if v == x {
                continue;
            }
            if g.has_arc(v, x) {
                l.push(v);
            } else if g.has_arc(x, v) {
                r.push(v);
            } else {
                c.push(v);
            }
        }
        stack.push((r, Some((x, Side::Right))));
        stack.push((c, Some((x, Side::Center))));
        stack.push((l, Some((x, Side::Left))));
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationReason {
    LeftNotInNeighbour,
    RightNotOutNeighbour,
    CenterAdjacent,
    SizeMismatch,
}

impl fmt::Display for ViolationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationReason::LeftNotInNeighbour => "left-not-in-neighbour",
            ViolationReason::RightNotOutNeighbour => "right-not-out-neighbour",
            ViolationReason::CenterAdjacent => "center-adjacent",
            ViolationReason::SizeMismatch => "size-mismatch",
        })
    }
}

/// `node` and the offending descendant `child`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub node: usize,
    pub child: usize,
    pub reason: ViolationReason,
}

/// Returns the first violation in preorder of `node`, then of the offending
/// descendant in preorder of the subtree.
pub fn bst_validate(g: &OrientedGraph, t: &BstTree) -> std::result::Result<(), Violation> {
    if g.n() != t.n() {
        return Err(Violation {
            node: 0,
            child: 0,
            reason: ViolationReason::SizeMismatch,
        });
    }
    for x in t.preorder() {
        for side in [Side::Left, Side::Center, Side::Right] {
            let Some(c) = t.child(x, side) else { continue };
            let mut stack = vec![c];
            while let Some(y) = stack.pop() {
                let ok = match side {
                    Side::Left => g.has_arc(y, x),
                    Side::Right => g.has_arc(x, y),
                    Side::Center => !g.adjacent(x, y),
                };
                if !ok {
                    let reason = match side {
                        Side::Left => ViolationReason::LeftNotInNeighbour,
                        Side::Right => ViolationReason::RightNotOutNeighbour,
                        Side::Center => ViolationReason::CenterAdjacent,
                    };
                    return Err(Violation {
                        node: x,
                        child: y,
                        reason,
                    });
                }
                for cc in [t.right[y], t.center[y], t.left[y]].into_iter().flatten() {
                    stack.push(cc);
                }
            }
        }
    }
    Ok(())
}

/// In-order traversal: left subtree, node, center subtree, right subtree.
pub fn left_to_right(t: &BstTree) -> VertexOrder {
    let mut seq = Vec::with_capacity(t.n());
    // (node, expanded): expanded nodes are emitted, others are unfolded
    let mut stack: Vec<(usize, bool)> = t.root.map(|r| (r, false)).into_iter().collect();
    while let Some((x, expanded)) = stack.pop() {
        if expanded {
            seq.push(x);
            continue;
        }
        if let Some(r) = t.right[x] {
            stack.push((r, false));
        }
        if let Some(c) = t.center[x] {
            stack.push((c, false));
        }
        stack.push((x, true));
        if let Some(l) = t.left[x] {
            stack.push((l, false));
        }
    }
    VertexOrder::new(seq).expect("a tree lists every node once")
}

pub(crate) const NO_CHILD: u32 = u32::MAX;

/// Children packed as `[left, center, right]` with `NO_CHILD` for gaps, so
/// passes over large trees touch one small record per node.
pub(crate) fn packed_children(t: &BstTree) -> Vec<[u32; 3]> {
    let pack = |c: Option<usize>| c.map_or(NO_CHILD, |c| c as u32);
    (0..t.n())
        .map(|x| [pack(t.left[x]), pack(t.center[x]), pack(t.right[x])])
        .collect()
}

/// The in-order together with a parents-first schedule of the nodes, so that
/// callers can run bottom-up passes by iterating it in reverse.
pub(crate) fn in_order_with_schedule(t: &BstTree, kids: &[[u32; 3]]) -> (VertexOrder, Vec<u32>) {
    let n = t.n();
    let mut seq = Vec::with_capacity(n);
    let mut sched = Vec::with_capacity(n);
    // the top bit marks nodes whose left subtree is already emitted
    const DONE: u32 = 1 << 31;
    let mut stack: Vec<u32> = t.root.map(|r| r as u32).into_iter().collect();
    while let Some(e) = stack.pop() {
        let x = (e & !DONE) as usize;
        let [l, c, r] = kids[x];
        if e & DONE != 0 {
            seq.push(x);
            continue;
        }
        sched.push(x as u32);
        for child in [r, c] {
            if child != NO_CHILD {
                stack.push(child);
            }
        }
        stack.push(x as u32 | DONE);
        if l != NO_CHILD {
            stack.push(l);
        }
    }
    (
        VertexOrder::new(seq).expect("a tree lists every node once"),
        sched,
    )
}

/// The root-to-leaf path ending at `leaf`.
pub fn branch(t: &BstTree, leaf: usize) -> Result<Vec<usize>> {
    if leaf >= t.n() {
        return Err(Error::OutOfRange {
            vertex: leaf,
            n: t.n(),
        });
    }
    if !t.is_leaf(leaf) {
        return Err(Error::NotALeaf(leaf));
    }
    let mut path = vec![leaf];
    let mut x = leaf;
    while let Some(p) = t.parent[x] {
        path.push(p);
        x = p;
    }
    path.reverse();
    Ok(path)
}

/// Splits a branch into its chain part and the center-branching nodes.
pub fn branch_chain_split(t: &BstTree, leaf: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let path = branch(t, leaf)?;
    let mut chain = Vec::new();
    let mut independent = Vec::new();
    for (i, &x) in path.iter().enumerate() {
        match path.get(i + 1) {
            Some(&next) if t.center[x] == Some(next) => independent.push(x),
            _ => chain.push(x),
        }
    }
    Ok((chain, independent))
}

/// Parses the `t`/`r`/`v` tree format (1-indexed, 0 for an absent child).
pub fn parse_tree(text: &str) -> Result<BstTree> {
    let mut header: Option<(usize, Arity)> = None;
    let mut root: Option<usize> = None;
    let mut kids: Vec<Option<[Option<usize>; 3]>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let child = |tok: &str, n: usize| -> Result<Option<usize>> {
            let v = parse_num(tok, line_no)?;
            if v > n {
                return Err(Error::parse(
                    line_no,
                    format!("vertex {v} out of range 0..={n}"),
                ));
            }
            Ok(v.checked_sub(1))
        };
        match (header, toks.as_slice()) {
            (None, ["t", n, a]) => {
                let n = parse_num(n, line_no)?;
                let arity = match *a {
                    "binary" => Arity::Binary,
                    "ternary" => Arity::Ternary,
                    other => return Err(Error::parse(line_no, format!("unknown arity `{other}`"))),
                };
                header = Some((n, arity));
                kids = vec![None; n];
            }
            (None, _) => return Err(Error::parse(line_no, "expected `t <n> <arity>` header")),
            (Some((n, _)), ["r", r]) => {
                root = child(r, n)?;
                if root.is_none() {
                    return Err(Error::parse(line_no, "root must be a vertex"));
                }
            }
            (Some((n, arity)), ["v", rest @ ..]) => {
                let want = if arity == Arity::Binary { 3 } else { 4 };
                if rest.len() != want {
                    return Err(Error::parse(
                        line_no,
                        format!("expected {want} fields after `v`"),
                    ));
                }
                let node = child(rest[0], n)?
                    .ok_or_else(|| Error::parse(line_no, "node must be a vertex"))?;
                let l = child(rest[1], n)?;
                let (c, r) = if arity == Arity::Binary {
                    (None, child(rest[2], n)?)
                } else {
                    (child(rest[2], n)?, child(rest[3], n)?)
                };
                if kids[node].replace([l, c, r]).is_some() {
                    return Err(Error::parse(
                        line_no,
                        format!("node {} listed twice", node + 1),
                    ));
                }
            }
            _ => return Err(Error::parse(line_no, format!("unrecognised line `{line}`"))),
        }
    }
    let (_, arity) = header.ok_or_else(|| Error::parse(0, "missing `t` header"))?;
    if let Some(missing) = kids.iter().position(|k| k.is_none()) {
        return Err(Error::parse(
            0,
            format!("node {} has no `v` line", missing + 1),
        ));
    }
    let kids: Vec<[Option<usize>; 3]> = kids.into_iter().map(|k| k.expect("checked")).collect();
    BstTree::from_children(
        arity,
        root,
        kids.iter().map(|k| k[0]).collect(),
        kids.iter().map(|k| k[1]).collect(),
        kids.iter().map(|k| k[2]).collect(),
    )
}

pub fn write_tree(t: &BstTree) -> String {
    let id = |v: Option<usize>| v.map_or(0, |x| x + 1);
    let mut s = format!("t {} {}\n", t.n(), t.arity);
    if let Some(r) = t.root {
        let _ = writeln!(s, "r {}", r + 1);
    }
    for x in 0..t.n() {
        match t.arity {
            Arity::Binary => {
                let _ = writeln!(s, "v {} {} {}", x + 1, id(t.left[x]), id(t.right[x]));
            }
            Arity::Ternary => {
                let _ = writeln!(
                    s,
                    "v {} {} {} {}",
                    x + 1,
                    id(t.left[x]),
                    id(t.center[x]),
                    id(t.right[x])
                );
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{chain_order, independence_number, Tournament};
    use crate::limits::Limits;
    use rand::Rng;

    fn strategies(seed: u64) -> [BuildStrategy; 3] {
        [
            BuildStrategy::Insertion(Vec::new()),
            BuildStrategy::Random(seed),
            BuildStrategy::MedianPivot,
        ]
    }

    #[test]
    fn insertion_examples() {
        let t3 = Tournament::transitive(3);
        let t = bst_build(&t3, &BuildStrategy::Insertion(vec![0, 1, 2])).unwrap();
        assert_eq!(t.root(), Some(0));
        assert_eq!(t.right(0), Some(1));
        assert_eq!(t.right(1), Some(2));
        assert_eq!(left_to_right(&t).as_slice(), &[0, 1, 2]);

        let c3 = Tournament::cycle3();
        let t = bst_build(&c3, &BuildStrategy::Insertion(vec![0, 1, 2])).unwrap();
        assert_eq!(
            (t.root(), t.right(0), t.left(0)),
            (Some(0), Some(1), Some(2))
        );
        assert_eq!(left_to_right(&t).as_slice(), &[2, 0, 1]);
        assert_eq!(branch(&t, 2).unwrap(), vec![0, 2]);
        // 3 -> 1 and 3 comes first in the order
        assert!(c3.has_arc(2, 0));

        let one = Tournament::transitive(1);
        let t = bst_build(&one, &BuildStrategy::MedianPivot).unwrap();
        assert_eq!((t.root(), t.is_leaf(0)), (Some(0), true));
    }

    #[test]
    fn validation_examples() {
        let t3 = Tournament::transitive(3);
        let bad = BstTree::from_children(
            Arity::Binary,
            Some(1),
            vec![None, Some(2), None],
            vec![None; 3],
            vec![None, Some(0), None],
        )
        .unwrap();
        assert_eq!(
            bst_validate(&t3, &bad),
            Err(Violation {
                node: 1,
                child: 2,
                reason: ViolationReason::LeftNotInNeighbour
            })
        );
        let g = OrientedGraph::from_arcs(2, &[(0, 1)]).unwrap();
        let bad = BstTree::from_children(
            Arity::Ternary,
            Some(0),
            vec![None, None],
            vec![Some(1), None],
            vec![None, None],
        )
        .unwrap();
        assert_eq!(
            bst_validate(&g, &bad).unwrap_err().reason,
            ViolationReason::CenterAdjacent
        );
        assert!(BstTree::from_children(
            Arity::Binary,
            Some(0),
            vec![Some(1), Some(0)],
            vec![None; 2],
            vec![None; 2]
        )
        .is_err());
    }

    #[test]
    fn branch_errors() {
        let t = bst_build(
            &Tournament::transitive(3),
            &BuildStrategy::Insertion(vec![]),
        )
        .unwrap();
        assert_eq!(branch(&t, 0), Err(Error::NotALeaf(0)));
        assert_eq!(branch(&t, 2).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn random_builds_are_valid_and_follow_the_ancestor_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..60 {
            let n = rng.gen_range(1..=60);
            let g = Tournament::random(n, &mut rng);
            for s in strategies(rng.gen()) {
                let t = bst_build(&g, &s).unwrap();
                assert_eq!(t.arity(), Arity::Binary);
                assert_eq!(bst_validate(&g, &t), Ok(()));
                let order = left_to_right(&t);
                for y in 0..n {
                    let mut a = t.parent(y);
                    while let Some(x) = a {
                        assert_eq!(g.has_arc(x, y), order.less(x, y));
                        a = t.parent(x);
                    }
                }
                for leaf in t.leaves() {
                    let b = branch(&t, leaf).unwrap();
                    let set = BitSet::from_indices(n, b.iter().copied());
                    let c = chain_order(&g, &set).unwrap();
                    let mut by_order = b.clone();
                    by_order.sort_by_key(|&v| order.rank(v));
                    assert_eq!(c, by_order);
                }
            }
        }
    }

    #[test]
    fn transitive_insertion_order_is_the_transitive_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut perm: Vec<usize> = (0..30).collect();
        perm.shuffle(&mut rng);
        let order = VertexOrder::new(perm).unwrap();
        let g = Tournament::transitive_from_order(&order);
        let mut seq: Vec<usize> = (0..30).collect();
        seq.shuffle(&mut rng);
        let t = bst_build(&g, &BuildStrategy::Insertion(seq)).unwrap();
        assert_eq!(left_to_right(&t), order);
    }

    #[test]
    fn ternary_builds_and_splits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..=25);
            let g = OrientedGraph::random(n, 0.25, &mut rng);
            let alpha = independence_number(&g, &Limits::default()).unwrap();
            for s in strategies(rng.gen()) {
                let t = bst_build(&g, &s).unwrap();
                assert_eq!(bst_validate(&g, &t), Ok(()));
                let order = left_to_right(&t);
                for leaf in t.leaves() {
                    let (chain, x) = branch_chain_split(&t, leaf).unwrap();
                    assert!(x.len() <= alpha);
                    for (i, &a) in x.iter().enumerate() {
                        assert!(x[i + 1..].iter().all(|&b| !g.adjacent(a, b)));
                    }
                    let c =
                        chain_order(&g, &BitSet::from_indices(n, chain.iter().copied())).unwrap();
                    let mut by_order = chain.clone();
                    by_order.sort_by_key(|&v| order.rank(v));
                    assert_eq!(c, by_order);
                }
            }
        }
    }

    #[test]
    fn five_vertex_center_step() {
        // 0 -> 1, 0 -> 2, 1 and 3 non-adjacent, 3 -> 4 ... built so that the
        // branch to 4 steps through the center of 1
        let g =
            OrientedGraph::from_arcs(5, &[(0, 1), (0, 3), (0, 4), (1, 2), (3, 4), (2, 3), (2, 4)])
                .unwrap();
        let t = bst_build(&g, &BuildStrategy::Insertion(vec![0, 1, 3, 4, 2])).unwrap();
        assert_eq!(bst_validate(&g, &t), Ok(()));
        assert_eq!(t.center(1), Some(3));
        let (chain, x) = branch_chain_split(&t, 4).unwrap();
        assert_eq!(x, vec![1]);
        assert_eq!(chain, vec![0, 3, 4]);
        assert!(chain_order(&g, &BitSet::from_indices(5, chain.iter().copied())).is_ok());
        let single = bst_build(&OrientedGraph::empty(1), &BuildStrategy::MedianPivot).unwrap();
        assert_eq!(branch_chain_split(&single, 0).unwrap(), (vec![0], vec![]));
    }

    #[test]
    fn text_format_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = OrientedGraph::random(12, 0.3, &mut rng);
        let t = bst_build(&g, &BuildStrategy::Random(5)).unwrap();
        assert_eq!(parse_tree(&write_tree(&t)).unwrap(), t);
        let b = bst_build(
            &Tournament::random(9, &mut rng),
            &BuildStrategy::MedianPivot,
        )
        .unwrap();
        assert_eq!(parse_tree(&write_tree(&b)).unwrap(), b);
        assert!(matches!(
            parse_tree("t 2 binary\nr 1\nv 1 0 2\nv 2 0 0 0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(parse_tree("t 2 binary\nr 1\nv 1 0 0\nv 2 0 0\n").is_err());
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!(
            "random:7".parse::<BuildStrategy>().unwrap(),
            BuildStrategy::Random(7)
        );
        assert_eq!(
            "median".parse::<BuildStrategy>().unwrap(),
            BuildStrategy::MedianPivot
        );
        assert_eq!(
            "insertion:2,1".parse::<BuildStrategy>().unwrap(),
            BuildStrategy::Insertion(vec![1, 0])
        );
        assert!("foo".parse::<BuildStrategy>().is_err());
    }

    #[test]
    fn packed_in_order_matches() {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [0usize, 1, 2, 7, 40, 300] {
            let g = Tournament::random(n, &mut r);
            for s in strategies(n as u64) {
                let t = bst_build(&g, &s).unwrap();
                let kids = packed_children(&t);
                let (order, sched) = in_order_with_schedule(&t, &kids);
                assert_eq!(order, left_to_right(&t));
                let mut pos = vec![usize::MAX; n];
                for (i, &x) in sched.iter().enumerate() {
                    pos[x as usize] = i;
                }
                for x in 0..n {
                    if let Some(p) = t.parent(x) {
                        assert!(pos[p] < pos[x]);
                    }
                }
            }
        }
    }
}
