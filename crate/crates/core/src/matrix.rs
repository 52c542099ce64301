//! Matrices over small alphabets, divisions, grids, diversity, rank
//! divisions and the six permutation-encoding classes.

use std::collections::HashSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{parse_num, OrientedGraph, VertexOrder};
use crate::limits::Limits;
use crate::permutation::Permutation;
use crate::structure::BinaryStructure;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    alphabet: u32,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} /{}", self.rows, self.cols, self.alphabet)?;
        for r in 0..self.rows {
            let line: String = self.row(r).iter().map(|&v| symbol(v)).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

fn symbol(v: u8) -> char {
    char::from_digit(v as u32, 36).unwrap_or('?')
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            alphabet: 2,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c) as u8;
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>], alphabet: u32) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Invalid(format!(
                    "row {} has length {}, expected {cols}",
                    i + 1,
                    r.len()
                )));
            }
            if let Some(&bad) = r.iter().find(|&&v| v as u32 >= alphabet) {
                return Err(Error::Invalid(format!(
                    "entry {bad} outside alphabet of size {alphabet}"
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            alphabet,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| r == c)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        assert!((v as u32) < self.alphabet);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c));
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            alphabet: self.alphabet,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            alphabet: self.alphabet,
            data,
        }
    }

    /// Swaps 0 and 1; only meaningful for 0,1-matrices.
    pub fn complement(&self) -> Matrix {
        assert_eq!(self.alphabet, 2, "complement needs a 0,1-matrix");
        Matrix {
            data: self.data.iter().map(|v| 1 - v).collect(),
            ..self.clone()
        }
    }

    pub fn reverse_rows(&self) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).rev().collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn reverse_cols(&self) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).rev().collect();
        self.submatrix(&rows, &cols)
    }

    pub fn delete_row(&self, r: usize) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn delete_col(&self, c: usize) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        self.row(r).iter().all(|&v| v == 0)
    }

    pub fn is_zero_col(&self, c: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, c) == 0)
    }

    /// Number of distinct rows and distinct columns of the block.
    pub fn block_diversity(&self, rows: Range<usize>, cols: Range<usize>) -> (usize, usize) {
        let distinct_rows: HashSet<&[u8]> = rows
            .clone()
            .map(|r| &self.data[r * self.cols + cols.start..r * self.cols + cols.end])
            .collect();
        let distinct_cols: HashSet<Vec<u8>> = cols
            .map(|c| rows.clone().map(|r| self.get(r, c)).collect())
            .collect();
        (distinct_rows.len(), distinct_cols.len())
    }
}

/// Distinct rows and distinct columns of the whole matrix.
pub fn diversity(m: &Matrix) -> (usize, usize) {
    m.block_diversity(0..m.rows, 0..m.cols)
}

/// Partitions of rows and columns into consecutive intervals, given by the
/// start index of every part but the first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Division {
    pub row_cuts: Vec<usize>,
    pub col_cuts: Vec<usize>,
}

fn parts_of(cuts: &[usize], len: usize) -> Vec<Range<usize>> {
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut start = 0;
    for &c in cuts.iter().chain(std::iter::once(&len)) {
        out.push(start..c);
        start = c;
    }
    out
}

impl Division {
    pub fn validate(&self, m: &Matrix) -> Result<()> {
        for (cuts, len, what) in [
            (&self.row_cuts, m.rows, "row"),
            (&self.col_cuts, m.cols, "column"),
        ] {
            let mut prev = 0;
            for &c in cuts.iter() {
                if c <= prev || c >= len {
                    return Err(Error::Invalid(format!(
                        "{what} cuts {cuts:?} are not strictly increasing inside 1..{len}"
                    )));
                }
                prev = c;
            }
            if len == 0 {
                return Err(Error::Invalid(format!("matrix has no {what}s")));
            }
        }
        Ok(())
    }

    pub fn row_parts(&self, m: &Matrix) -> Vec<Range<usize>> {
        parts_of(&self.row_cuts, m.rows)
    }

    pub fn col_parts(&self, m: &Matrix) -> Vec<Range<usize>> {
        parts_of(&self.col_cuts, m.cols)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.row_cuts.len() + 1, self.col_cuts.len() + 1)
    }
}

/// `entry(r, c) = 1` iff `order[r] -> order[c]`.
pub fn adjacency_matrix(g: &OrientedGraph, order: &VertexOrder) -> Matrix {
    let n = g.n();
    Matrix::from_fn(n, n, |r, c| g.has_arc(order.at(r), order.at(c)))
}

/// Adjacency matrix of a binary structure: bit `i` of an entry is relation `i`.
pub fn structure_matrix(s: &BinaryStructure, order: &VertexOrder) -> Matrix {
    let n = s.n();
    let k = s.relation_count();
    assert!(k <= 8, "at most 8 relations fit an entry");
    let mut data = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut v = 0u8;
            for i in 0..k {
                if s.holds(i, order.at(r), order.at(c)) {
                    v |= 1 << i;
                }
            }
            data.push(v);
        }
    }
    Matrix {
        rows: n,
        cols: n,
        alphabet: 1 << k,
        data,
    }
}

/// Every cell of the k×k division has a nonzero entry.
pub fn is_k_grid(m: &Matrix, d: &Division, k: usize) -> Result<bool> {
    let (rows, cols) = d.shape();
    if rows != k || cols != k {
        return Err(Error::DivisionShape { rows, cols, k });
    }
    d.validate(m)?;
    let cols_parts = d.col_parts(m);
    Ok(d.row_parts(m).iter().all(|rp| {
        cols_parts
            .iter()
            .all(|cp| rp.clone().any(|r| cp.clone().any(|c| m.get(r, c) != 0)))
    }))
}

pub fn is_k_diverse(m: &Matrix, rows: Range<usize>, cols: Range<usize>, k: usize) -> bool {
    let (r, c) = m.block_diversity(rows, cols);
    r >= k && c >= k
}

/// Whether the division is a rank-k division: k×k and every cell k-diverse.
pub fn is_rank_division(m: &Matrix, d: &Division, k: usize) -> bool {
    if d.shape() != (k, k) || d.validate(m).is_err() {
        return false;
    }
    let cps = d.col_parts(m);
    d.row_parts(m).iter().all(|rp| {
        cps.iter()
            .all(|cp| is_k_diverse(m, rp.clone(), cp.clone(), k))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RankDivisionResult {
    Found {
        division: Division,
        heuristic: bool,
    },
    /// Exhaustive search found nothing.
    NotFound,
    /// Heuristic search found nothing; a division may still exist.
    Unknown,
}

impl RankDivisionResult {
    pub fn division(&self) -> Option<&Division> {
        match self {
            RankDivisionResult::Found { division, .. } => Some(division),
            _ => None,
        }
    }
}

const HEURISTIC_TRIALS: usize = 256;

/// Searches for a rank-k division. Exhaustive over row cuts (with greedy,
/// provably sufficient column cuts) within the configured caps, sampled
/// beyond them.
pub fn find_rank_division(m: &Matrix, k: usize, limits: &Limits) -> RankDivisionResult {
    let exact = m.rows + m.cols <= limits.rank_division_max_dim && k <= limits.rank_division_max_k;
    // k parts of at least k distinct lines each: too few lines rules it out
    let needed = k.saturating_mul(k);
    if k > 0 && (m.rows < needed || m.cols < needed) {
        return RankDivisionResult::NotFound;
    }
    if k == 0 {
        return if exact {
            RankDivisionResult::NotFound
        } else {
            RankDivisionResult::Unknown
        };
    }
    if exact {
        let mut cuts = Vec::with_capacity(k - 1);
        match rank_rows(m, k, 0, &mut cuts) {
            Some(division) => RankDivisionResult::Found {
                division,
                heuristic: false,
            },
            None => RankDivisionResult::NotFound,
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (m.rows as u64) << 16 ^ k as u64);
        // equal parts first, then random cut sets
        let even: Vec<usize> = (1..k).map(|i| i * m.rows / k).collect();
        let mut candidates = vec![even];
        for _ in 0..HEURISTIC_TRIALS {
            let mut cuts: Vec<usize> = sample(&mut rng, m.rows - 1, k - 1)
                .into_iter()
                .map(|c| c + 1)
                .collect();
            cuts.sort_unstable();
            candidates.push(cuts);
        }
        for cuts in candidates {
            if cuts.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            if let Some(col_cuts) = greedy_rank_columns(m, k, &cuts) {
                return RankDivisionResult::Found {
                    division: Division {
                        row_cuts: cuts,
                        col_cuts,
                    },
                    heuristic: true,
                };
            }
        }
        RankDivisionResult::Unknown
    }
}

fn rank_rows(m: &Matrix, k: usize, start: usize, cuts: &mut Vec<usize>) -> Option<Division> {
    let parts_left = k - cuts.len();
    if parts_left == 1 {
        if m.rows - start < k || !is_k_diverse(m, start..m.rows, 0..m.cols, k) {
            return None;
        }
        return greedy_rank_columns(m, k, cuts).map(|col_cuts| Division {
            row_cuts: cuts.clone(),
            col_cuts,
        });
    }
    // each row part needs k distinct rows, so at least k rows
    if m.rows < start + k * parts_left {
        return None;
    }
    for end in start + k..=m.rows - k * (parts_left - 1) {
        if !is_k_diverse(m, start..end, 0..m.cols, k) {
            continue;
        }
        cuts.push(end);
        if let Some(d) = rank_rows(m, k, end, cuts) {
            return Some(d);
        }
        cuts.pop();
    }
    None
}

/// Shortest column intervals from the left making every cell k-diverse.
/// Diversity only grows when an interval grows, so this is exact for the
/// given row cuts.
fn greedy_rank_columns(m: &Matrix, k: usize, row_cuts: &[usize]) -> Option<Vec<usize>> {
    let row_parts = parts_of(row_cuts, m.rows);
    let mut cuts = Vec::with_capacity(k - 1);
    let mut start = 0;
    for part in 0..k {
        let last = part + 1 == k;
        let mut end = if last { m.cols } else { start + k };
        loop {
            if end > m.cols {
                return None;
            }
            if row_parts
                .iter()
                .all(|rp| is_k_diverse(m, rp.clone(), start..end, k))
            {
                break;
            }
            if last {
                return None;
            }
            end += 1;
        }
        if !last {
            cuts.push(end);
            start = end;
        }
    }
    Some(cuts)
}

/// The six matrix encodings of a permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixClass {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<=R")]
    LeR,
    #[serde(rename = ">=R")]
    GeR,
    #[serde(rename = "<=C")]
    LeC,
    #[serde(rename = ">=C")]
    GeC,
}

impl MatrixClass {
    pub const ALL: [MatrixClass; 6] = [
        MatrixClass::Eq,
        MatrixClass::Ne,
        MatrixClass::LeR,
        MatrixClass::GeR,
        MatrixClass::LeC,
        MatrixClass::GeC,
    ];

    /// Entry `(i, j)` of `M_s(σ)` (0-indexed).
    pub fn entry(self, sigma: &Permutation, inv: &Permutation, i: usize, j: usize) -> bool {
        match self {
            MatrixClass::Eq => j == sigma.apply(i),
            MatrixClass::Ne => j != sigma.apply(i),
            MatrixClass::LeR => j <= sigma.apply(i),
            MatrixClass::GeR => j >= sigma.apply(i),
            MatrixClass::LeC => i <= inv.apply(j),
            MatrixClass::GeC => i >= inv.apply(j),
        }
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixClass::Eq => "=",
            MatrixClass::Ne => "!=",
            MatrixClass::LeR => "<=R",
            MatrixClass::GeR => ">=R",
            MatrixClass::LeC => "<=C",
            MatrixClass::GeC => ">=C",
        })
    }
}

impl FromStr for MatrixClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "=" | "eq" => MatrixClass::Eq,
            "!=" | "ne" => MatrixClass::Ne,
            "<=R" | "le-r" | "ler" => MatrixClass::LeR,
            ">=R" | "ge-r" | "ger" => MatrixClass::GeR,
            "<=C" | "le-c" | "lec" => MatrixClass::LeC,
            ">=C" | "ge-c" | "gec" => MatrixClass::GeC,
            other => return Err(Error::Invalid(format!("unknown matrix class `{other}`"))),
        })
    }
}

pub fn build_m(s: MatrixClass, sigma: &Permutation) -> Matrix {
    let n = sigma.len();
    let inv = sigma.inverse();
    Matrix::from_fn(n, n, |i, j| s.entry(sigma, &inv, i, j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", content = "index", rename_all = "snake_case")]
pub enum Transform {
    ReverseRows,
    ReverseCols,
    TransposeComplement,
    DeleteRow(usize),
    DeleteCol(usize),
}

impl Transform {
    pub fn apply(self, m: &Matrix) -> Matrix {
        match self {
            Transform::ReverseRows => m.reverse_rows(),
            Transform::ReverseCols => m.reverse_cols(),
            Transform::TransposeComplement => m.transpose().complement(),
            Transform::DeleteRow(r) => m.delete_row(r),
            Transform::DeleteCol(c) => m.delete_col(c),
        }
    }
}

pub fn replay(log: &[Transform], m: &Matrix) -> Matrix {
    log.iter().fold(m.clone(), |acc, t| t.apply(&acc))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalized {
    pub class: MatrixClass,
    pub perm: Permutation,
    pub log: Vec<Transform>,
}

/// Rewrites `M_s(σ)`, seen with optionally reversed rows and columns, into
/// `M_{s'}(σ')` with `s'` one of `=`, `<=R`, `>=R`. Replaying `log` on the
/// (unreversed) `M_s(σ)` yields exactly `M_{s'}(σ')`.
pub fn normalize_matrix_class(
    s: MatrixClass,
    sigma: &Permutation,
    reverse_rows: bool,
    reverse_cols: bool,
) -> Normalized {
    use MatrixClass::*;
    let n = sigma.len();
    let rev = Permutation::reverse(n);
    let mut class = s;
    let mut perm = sigma.clone();
    let mut log = Vec::new();
    if reverse_rows {
        // row i becomes row n-1-i: σ turns into σ∘rev, column propagation flips
        log.push(Transform::ReverseRows);
        perm = perm.compose(&rev);
        class = match class {
            LeC => GeC,
            GeC => LeC,
            c => c,
        };
    }
    if reverse_cols {
        log.push(Transform::ReverseCols);
        perm = rev.compose(&perm);
        class = match class {
            LeR => GeR,
            GeR => LeR,
            c => c,
        };
    }
    match class {
        Eq | LeR | GeR => {}
        Ne => {
            log.push(Transform::TransposeComplement);
            class = Eq;
            perm = perm.inverse();
        }
        LeC | GeC => {
            let mut m = replay(&log, &build_m(s, sigma));
            log.push(Transform::TransposeComplement);
            m = Transform::TransposeComplement.apply(&m);
            // the strict class has one all-zero row and one all-zero column
            let zr = (0..m.rows()).find(|&r| m.is_zero_row(r)).expect("zero row");
            let zc = (0..m.cols())
                .find(|&c| m.is_zero_col(c))
                .expect("zero column");
            log.push(Transform::DeleteRow(zr));
            log.push(Transform::DeleteCol(zc));
            let tau = perm.inverse();
            let kept: Vec<usize> = (0..n).filter(|&i| i != zr).collect();
            let img: Vec<usize> = if class == LeC {
                kept.iter().map(|&i| tau.apply(i)).collect()
            } else {
                kept.iter().map(|&i| tau.apply(i) - 1).collect()
            };
            perm = Permutation::new(img).expect("one value removed from each side");
            class = if class == LeC { GeR } else { LeR };
        }
    }
    Normalized { class, perm, log }
}

/// Parses `m <rows> <cols>` followed by `rows` lines of digits.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut header: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match header {
            None => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                match toks.as_slice() {
                    ["m", r, c] => header = Some((parse_num(r, line_no)?, parse_num(c, line_no)?)),
                    _ => return Err(Error::parse(line_no, "expected `m <rows> <cols>` header")),
                }
            }
            Some((r, c)) => {
                if rows.len() == r {
                    return Err(Error::parse(line_no, "more rows than announced"));
                }
                let row: Vec<u8> = line
                    .chars()
                    .filter(|ch| !ch.is_whitespace())
                    .map(|ch| {
                        ch.to_digit(10)
                            .map(|d| d as u8)
                            .ok_or_else(|| Error::parse(line_no, format!("bad symbol `{ch}`")))
                    })
                    .collect::<Result<_>>()?;
                if row.len() != c {
                    return Err(Error::parse(
                        line_no,
                        format!("expected {c} symbols, found {}", row.len()),
                    ));
                }
                rows.push(row);
            }
        }
    }
    let (r, c) = header.ok_or_else(|| Error::parse(0, "missing `m` header"))?;
    if rows.len() != r {
        return Err(Error::parse(
            0,
            format!("expected {r} rows, found {}", rows.len()),
        ));
    }
    let alphabet = rows
        .iter()
        .flatten()
        .map(|&v| v as u32 + 1)
        .max()
        .unwrap_or(2)
        .max(2);
    let mut m = Matrix::from_rows(&rows, alphabet)?;
    if rows.is_empty() {
        m.cols = c;
    }
    Ok(m)
}

pub fn write_matrix(m: &Matrix) -> Result<String> {
    if m.alphabet > 10 {
        return Err(Error::Invalid(format!(
            "alphabet of size {} does not fit the digit format",
            m.alphabet
        )));
    }
    let mut s = format!("m {} {}\n", m.rows, m.cols);
    for r in 0..m.rows {
        s.extend(m.row(r).iter().map(|&v| symbol(v)));
        s.push('\n');
    }
    Ok(s)
}
