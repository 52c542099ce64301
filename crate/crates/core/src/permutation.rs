//! Permutations, bi-orders, patterns, grids and pair colourings.
//!
//! Internally `σ` maps `0..n` to `0..n`; one-line notation at the text
//! boundary is 1-indexed, so `31452` is `[2, 0, 3, 4, 1]` here.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::BitMatrix;
use crate::graph::parse_num;
use crate::limits::{self, Limits};
use crate::structure::BinaryStructure;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    img: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::from_one_line(&v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.one_line()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = self.one_line();
        if line.len() <= 9 {
            for v in line {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = line.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl Permutation {
    /// From 0-indexed images.
    pub fn new(img: Vec<usize>) -> Result<Self> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &v in &img {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a bijection of 0..{n}",
                    img
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { img })
    }

    /// From 1-indexed one-line notation.
    pub fn from_one_line(line: &[usize]) -> Result<Self> {
        if line.contains(&0) {
            return Err(Error::InvalidPermutation(
                "one-line notation is 1-indexed".into(),
            ));
        }
        Self::new(line.iter().map(|v| v - 1).collect())
    }

    /// Parses `31452`, `3 1 4 5 2` or `3,1,4,5,2`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let vals: Vec<usize> = if s.contains(|c: char| c.is_whitespace() || c == ',') {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry `{t}`")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::InvalidPermutation(format!("bad digit `{c}`")))
                })
                .collect::<Result<_>>()?
        };
        Self::from_one_line(&vals)
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            img: (0..n).collect(),
        }
    }

    /// `i -> n-1-i`.
    pub fn reverse(n: usize) -> Self {
        Permutation {
            img: (0..n).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.img.len()
    }

    pub fn is_empty(&self) -> bool {
        self.img.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.img[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.img
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.img.iter().map(|v| v + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.img.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { img: inv }
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len());
        Permutation {
            img: other.img.iter().map(|&v| self.img[v]).collect(),
        }
    }

    /// The permutation `σ(ki + j) = kj + i` on `k²` elements, which contains a k-grid.
    pub fn grid(k: usize) -> Self {
        let mut img = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                img[k * i + j] = k * j + i;
            }
        }
        Permutation { img }
    }

    /// Pattern of `self` on the increasing index set `idx`.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let vals: Vec<usize> = idx.iter().map(|&i| self.img[i]).collect();
        let mut sorted = vals.clone();
        sorted.sort_unstable();
        Permutation {
            img: vals
                .iter()
                .map(|v| sorted.binary_search(v).expect("present"))
                .collect(),
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation { img: cur.clone() });
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

#[inline]
pub fn order_type(x: usize, y: usize) -> i8 {
    match x.cmp(&y) {
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => -1,
    }
}

/// The bi-order `([n], <, <_σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiOrder {
    pub perm: Permutation,
}

impl BiOrder {
    pub fn new(perm: Permutation) -> Self {
        BiOrder { perm }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `ot_σ(x, y)`.
    pub fn second_type(&self, x: usize, y: usize) -> i8 {
        order_type(self.perm.apply(x), self.perm.apply(y))
    }

    /// Relations `lt1` (`x < y`) and `lt2` (`σ(x) < σ(y)`).
    pub fn to_structure(&self) -> BinaryStructure {
        let n = self.len();
        let mut s = BinaryStructure::new(n);
        s.push("lt1", BitMatrix::from_fn(n, |x, y| x < y))
            .expect("fresh name");
        s.push(
            "lt2",
            BitMatrix::from_fn(n, |x, y| self.perm.apply(x) < self.perm.apply(y)),
        )
        .expect("fresh name");
        s
    }
}

/// A colouring of ordered pairs off the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairColoring {
    n: usize,
    colours: Vec<u32>,
}

impl PairColoring {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut colours = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    colours[x * n + y] = f(x, y);
                }
            }
        }
        PairColoring { n, colours }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.colours[x * self.n + y]
    }
}

/// `η : {-1,0,1}² -> Γ`, indexed by `[ot + 1][ot_σ + 1]`; `None` where unused.
pub type EtaTable = [[Option<u32>; 3]; 3];

/// Smallest increasing index set (lexicographically) on which `σ` restricts
/// to `τ`.
pub fn contains_pattern(
    sigma: &Permutation,
    tau: &Permutation,
    limits: &Limits,
) -> Result<Option<Vec<usize>>> {
    limits::check("pattern length", tau.len(), limits.pattern_max_len)?;
    if tau.len() > sigma.len() {
        return Ok(None);
    }
    let mut chosen = Vec::with_capacity(tau.len());
    Ok(pattern_dfs(sigma, tau, 0, &mut chosen, &mut |_| true).then_some(chosen))
}

fn pattern_dfs(
    sigma: &Permutation,
    tau: &Permutation,
    from: usize,
    chosen: &mut Vec<usize>,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let a = chosen.len();
    if a == tau.len() {
        return true;
    }
    // leave room for the remaining pattern elements
    let last = sigma.len() - (tau.len() - a);
    for x in from..=last {
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(b, &y)| (sigma.apply(y) < sigma.apply(x)) == (tau.apply(b) < tau.apply(a)));
        if !ok {
            continue;
        }
        chosen.push(x);
        if accept(chosen) && pattern_dfs(sigma, tau, x + 1, chosen, accept) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Largest `k` such that the permutation matrix of `σ` has a k-grid.
pub fn max_grid(sigma: &Permutation, limits: &Limits) -> Result<usize> {
    limits::check("grid search", sigma.len(), limits.grid_max_n)?;
    if sigma.is_empty() {
        return Ok(0);
    }
    let mut k = 1;
    while has_grid(sigma, k + 1) {
        k += 1;
    }
    Ok(k)
}

/// Whether `σ` has a k-grid; returns the row and column cut points if so.
pub fn find_grid(sigma: &Permutation, k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = sigma.len();
    if k == 0 || k * k > n {
        return None;
    }
    // every row part needs at least k ones, one per column part
    let mut row_cuts = Vec::with_capacity(k - 1);
    grid_rows(sigma, k, 0, &mut row_cuts)
}

pub fn has_grid(sigma: &Permutation, k: usize) -> bool {
    find_grid(sigma, k).is_some()
}

fn grid_rows(
    sigma: &Permutation,
    k: usize,
    start: usize,
    cuts: &mut Vec<usize>,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = sigma.len();
    let parts_left = k - cuts.len();
    if parts_left == 1 {
        if n - start < k {
            return None;
        }
        return greedy_columns(sigma, k, cuts).map(|cols| (cuts.clone(), cols));
    }
    for end in start + k..=n - k * (parts_left - 1) {
        cuts.push(end);
        if let Some(found) = grid_rows(sigma, k, end, cuts) {
            return Some(found);
        }
        cuts.pop();
    }
    None
}

/// Column intervals chosen as short as possible from the left. Enlarging an
/// interval never hurts, so greedy succeeds whenever any choice does.
fn greedy_columns(sigma: &Permutation, k: usize, row_cuts: &[usize]) -> Option<Vec<usize>> {
    let n = sigma.len();
    let mut part_of_col = vec![0usize; n];
    let mut r = 0;
    for i in 0..n {
        while r < row_cuts.len() && i >= row_cuts[r] {
            r += 1;
        }
        part_of_col[sigma.apply(i)] = r;
    }
    let mut cuts = Vec::with_capacity(k - 1);
    let mut seen = vec![false; k];
    let mut missing = k;
    for (c, &p) in part_of_col.iter().enumerate() {
        if !seen[p] {
            seen[p] = true;
            missing -= 1;
        }
        if missing == 0 {
            if cuts.len() == k - 1 {
                return Some(cuts);
            }
            cuts.push(c + 1);
            seen.iter_mut().for_each(|s| *s = false);
            missing = k;
        }
    }
    None
}

/// A witness for the monochromatic-pattern search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformPattern {
    pub indices: Vec<usize>,
    pub eta: EtaTable,
}

/// Searches for `X` with `O_b[X] ≅ O_σ` on which `λ` factors through the
/// pair of order types. Returns the lexicographically first such `X`.
pub fn find_pattern_with_uniform_coloring(
    b: &BiOrder,
    lambda: &PairColoring,
    sigma: &Permutation,
    limits: &Limits,
) -> Result<Option<UniformPattern>> {
    limits::check(
        "uniform colouring pattern length",
        sigma.len(),
        limits.uniform_coloring_max_len,
    )?;
    if lambda.len() != b.len() {
        return Err(Error::Invalid(format!(
            "colouring on {} points, bi-order on {}",
            lambda.len(),
            b.len()
        )));
    }
    if sigma.len() > b.len() {
        return Ok(None);
    }
    let mut chosen = Vec::new();
    let mut eta: EtaTable = [[None; 3]; 3];
    let mut undo: Vec<Vec<(usize, usize)>> = Vec::new();
    let found = uniform_dfs(b, lambda, sigma, 0, &mut chosen, &mut eta, &mut undo);
    Ok(found.then_some(UniformPattern {
        indices: chosen,
        eta,
    }))
}

fn uniform_dfs(
    b: &BiOrder,
    lambda: &PairColoring,
    sigma: &Permutation,
    from: usize,
    chosen: &mut Vec<usize>,
    eta: &mut EtaTable,
    undo: &mut Vec<Vec<(usize, usize)>>,
) -> bool {
    let a = chosen.len();
    if a == sigma.len() {
        return true;
    }
    let last = b.len() - (sigma.len() - a);
    for x in from..=last {
        let pattern_ok = chosen.iter().enumerate().all(|(i, &y)| {
            (b.perm.apply(y) < b.perm.apply(x)) == (sigma.apply(i) < sigma.apply(a))
        });
        if !pattern_ok {
            continue;
        }
        let mut set = Vec::new();
        let mut ok = true;
        for &y in chosen.iter() {
            for (p, q) in [(y, x), (x, y)] {
                let cell = (
                    (order_type(p, q) + 1) as usize,
                    (b.second_type(p, q) + 1) as usize,
                );
                let c = lambda.get(p, q);
                match eta[cell.0][cell.1] {
                    Some(v) if v != c => ok = false,
                    Some(_) => {}
                    None => {
                        eta[cell.0][cell.1] = Some(c);
                        set.push(cell);
                    }
                }
            }
            if !ok {
                break;
            }
        }
        if ok {
            chosen.push(x);
            undo.push(set);
            if uniform_dfs(b, lambda, sigma, x + 1, chosen, eta, undo) {
                return true;
            }
            chosen.pop();
            set = undo.pop().expect("pushed");
        }
        for (i, j) in set {
            eta[i][j] = None;
        }
    }
    false
}

/// Parses `s <n>` followed by one line of `σ(1) … σ(n)`.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let mut n: Option<usize> = None;
    let mut vals: Vec<usize> = Vec::new();
    let mut values_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (n, toks.as_slice()) {
            (None, ["s", m]) => n = Some(parse_num(m, line_no)?),
            (None, _) => return Err(Error::parse(line_no, "expected `s <n>` header")),
            (Some(_), _) if values_line == 0 => {
                values_line = line_no;
                for t in toks {
                    vals.push(parse_num(t, line_no)?);
                }
            }
            (Some(_), _) => return Err(Error::parse(line_no, "unexpected extra line")),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing `s <n>` header"))?;
    if vals.len() != n {
        return Err(Error::parse(
            values_line,
            format!("expected {n} values, found {}", vals.len()),
        ));
    }
    Permutation::from_one_line(&vals).map_err(|e| Error::parse(values_line, e.to_string()))
}

pub fn write_permutation(p: &Permutation) -> String {
    let mut s = format!("s {}\n", p.len());
    let line: Vec<String> = p.one_line().iter().map(|v| v.to_string()).collect();
    let _ = writeln!(s, "{}", line.join(" "));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn l() -> Limits {
        Limits::default()
    }

    #[test]
    fn order_types() {
        assert_eq!(order_type(2, 5), 1);
        assert_eq!(order_type(5, 5), 0);
        assert_eq!(order_type(7, 3), -1);
    }

    #[test]
    fn basic_algebra() {
        let s = p("31452");
        assert_eq!(s.to_string(), "31452");
        assert_eq!(s.compose(&s.inverse()), Permutation::identity(5));
        assert_eq!(s.inverse().compose(&s), Permutation::identity(5));
        assert_eq!(all_permutations(4).len(), 24);
        let all = all_permutations(3);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
        assert_eq!(Permutation::grid(2).one_line(), vec![1, 3, 2, 4]);
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(
            contains_pattern(&Permutation::identity(5), &Permutation::identity(3), &l()).unwrap(),
            Some(vec![0, 1, 2])
        );
        assert_eq!(contains_pattern(&p("21"), &p("12"), &l()).unwrap(), None);
        let w = contains_pattern(&p("31452"), &p("231"), &l())
            .unwrap()
            .unwrap();
        assert_eq!(p("31452").restrict(&w), p("231"));
    }

    #[test]
    fn pattern_witness_is_lexicographic_minimum() {
        for s in all_permutations(6).iter().step_by(7) {
            for t in all_permutations(3) {
                let got = contains_pattern(s, &t, &l()).unwrap();
                // brute force over all triples in lexicographic order
                let mut brute = None;
                'outer: for a in 0..6 {
                    for b in a + 1..6 {
                        for c in b + 1..6 {
                            if s.restrict(&[a, b, c]) == t {
                                brute = Some(vec![a, b, c]);
                                break 'outer;
                            }
                        }
                    }
                }
                assert_eq!(got, brute);
            }
        }
    }

    /// Brute force over every pair of k-divisions.
    fn brute_has_grid(s: &Permutation, k: usize) -> bool {
        let n = s.len();
        let cuts = |k: usize| -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            for mask in 0u32..1 << (n.saturating_sub(1)) {
                if mask.count_ones() as usize == k - 1 {
                    out.push((1..n).filter(|i| mask >> (i - 1) & 1 == 1).collect());
                }
            }
            out
        };
        let part = |cuts: &[usize], i: usize| cuts.iter().filter(|&&c| i >= c).count();
        for rc in cuts(k) {
            for cc in cuts(k) {
                let mut hit = vec![false; k * k];
                for i in 0..n {
                    hit[part(&rc, i) * k + part(&cc, s.apply(i))] = true;
                }
                if hit.iter().all(|&h| h) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn grid_examples() {
        for k in 2..=4 {
            assert!(max_grid(&Permutation::grid(k), &l()).unwrap() >= k);
        }
        for n in 1..=8 {
            assert_eq!(max_grid(&Permutation::identity(n), &l()).unwrap(), 1);
        }
        assert_eq!(max_grid(&Permutation::reverse(6), &l()).unwrap(), 1);
        assert!(!brute_has_grid(&Permutation::reverse(6), 2));
    }

    #[test]
    fn grid_search_matches_brute_force() {
        for n in 1..=7 {
            for s in all_permutations(n) {
                for k in 1..=3 {
                    assert_eq!(has_grid(&s, k), brute_has_grid(&s, k), "{s} k={k}");
                }
            }
        }
    }

    #[test]
    fn grid_is_monotone_under_patterns() {
        let perms6 = all_permutations(6);
        let grids: Vec<usize> = perms6.iter().map(|s| max_grid(s, &l()).unwrap()).collect();
        for (s, &gs) in perms6.iter().zip(&grids).step_by(5) {
            for m in 1..=5 {
                for t in all_permutations(m) {
                    if contains_pattern(s, &t, &l()).unwrap().is_some() {
                        assert!(max_grid(&t, &l()).unwrap() <= gs);
                    }
                }
            }
        }
    }

    #[test]
    fn uniform_coloring_examples() {
        let s = p("2413");
        let b = BiOrder::new(s.clone());
        let constant = PairColoring::from_fn(4, |_, _| 7);
        let w = find_pattern_with_uniform_coloring(&b, &constant, &s, &l())
            .unwrap()
            .unwrap();
        assert_eq!(w.indices, vec![0, 1, 2, 3]);
        assert!(w.eta.iter().flatten().flatten().all(|&c| c == 7));

        let big = p("12345");
        assert_eq!(
            find_pattern_with_uniform_coloring(&b, &constant, &big, &l()),
            Err(Error::SizeLimit {
                what: "uniform colouring pattern length",
                size: 5,
                cap: 4
            })
        );
        let tiny = BiOrder::new(p("21"));
        let lam = PairColoring::from_fn(2, |_, _| 0);
        assert_eq!(
            find_pattern_with_uniform_coloring(&tiny, &lam, &p("123"), &l()).unwrap(),
            None
        );

        let b = BiOrder::new(p("2143"));
        let lam = PairColoring::from_fn(4, |x, y| (x < y) as u32);
        let w = find_pattern_with_uniform_coloring(&b, &lam, &p("21"), &l())
            .unwrap()
            .unwrap();
        assert_eq!(b.perm.restrict(&w.indices), p("21"));
        // 2-subsets realising 21 are {1,2} and {3,4}; the first is returned
        assert_eq!(w.indices, vec![0, 1]);
        for x in &w.indices {
            for y in &w.indices {
                if x != y {
                    let cell = w.eta[(order_type(*x, *y) + 1) as usize]
                        [(b.second_type(*x, *y) + 1) as usize];
                    assert_eq!(cell, Some(lam.get(*x, *y)));
                }
            }
        }
    }

    #[test]
    fn text_format() {
        let s = parse_permutation("# sample\ns 5\n3 1 4 5 2\n").unwrap();
        assert_eq!(s, p("31452"));
        assert_eq!(parse_permutation(&write_permutation(&s)).unwrap(), s);
        assert!(matches!(
            parse_permutation("s 3\n1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_permutation("s 2\n1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
