//! The obstruction tournaments `F_=(σ)`, `F_≤(σ)`, `F_≥(σ)`, their decoding,
//! chain-order representations, and small-size enumeration checks.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::bst::BstTree;
use crate::chain::{
    chain_quasi_order, extract_nonoverlapping, Extraction, IntervalFamily, Orientation,
};
use crate::graph::{
    automorphism_count, canonical_form, chain_order, find_induced_embedding, OrientedGraph,
    Tournament, VertexOrder,
};
use crate::limits::{check, Limits};
use crate::matrix::{build_m, MatrixClass};
use crate::permutation::{all_permutations, Permutation};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ObstructionKind {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl ObstructionKind {
    pub const ALL: [ObstructionKind; 3] = [
        ObstructionKind::Eq,
        ObstructionKind::Le,
        ObstructionKind::Ge,
    ];

    /// `i R j` on indices.
    pub fn holds(self, i: usize, j: usize) -> bool {
        match self {
            ObstructionKind::Eq => i == j,
            ObstructionKind::Le => i <= j,
            ObstructionKind::Ge => i >= j,
        }
    }
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionKind::Eq => "=",
            ObstructionKind::Le => "<=",
            ObstructionKind::Ge => ">=",
        })
    }
}

impl FromStr for ObstructionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "=" | "eq" => Ok(ObstructionKind::Eq),
            "<=" | "≤" | "le" => Ok(ObstructionKind::Le),
            ">=" | "≥" | "ge" => Ok(ObstructionKind::Ge),
            other => Err(Error::Invalid(format!(
                "unknown obstruction kind `{other}`"
            ))),
        }
    }
}

/// `x[i]` is the vertex playing `x_{i+1}`, `y[j]` the one playing `y_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleMap {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl RoleMap {
    pub fn standard(n: usize) -> Self {
        RoleMap {
            x: (0..n).collect(),
            y: (n..2 * n).collect(),
        }
    }
}

/// Vertices `x_i = i - 1` and `y_j = n + j - 1`; `y_j -> x_i` iff `i R σ⁻¹(j)`.
pub fn build_f(r: ObstructionKind, sigma: &Permutation) -> (Tournament, RoleMap) {
    let roles = RoleMap::standard(sigma.len());
    (build_on_roles(r, sigma, &roles, 2 * sigma.len()), roles)
}

fn build_on_roles(
    r: ObstructionKind,
    sigma: &Permutation,
    roles: &RoleMap,
    n_total: usize,
) -> Tournament {
    let n = sigma.len();
    let inv = sigma.inverse();
    let mut arcs = Vec::with_capacity(n_total * n_total.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            arcs.push((roles.x[i], roles.x[j]));
            arcs.push((roles.y[i], roles.y[j]));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if r.holds(i, inv.apply(j)) {
                arcs.push((roles.y[j], roles.x[i]));
            } else {
                arcs.push((roles.x[i], roles.y[j]));
            }
        }
    }
    Tournament::from_arcs(n_total, &arcs).expect("roles cover every pair once")
}

/// `=` appends a fixed point; `≤` and `≥` prepend the new maximum.
pub fn extend_sigma(r: ObstructionKind, sigma: &Permutation) -> Result<Permutation> {
    let n = sigma.len();
    if n < 2 {
        return Err(Error::TooSmall { need: 2, got: n });
    }
    let img: Vec<usize> = match r {
        ObstructionKind::Eq => sigma.as_slice().iter().copied().chain([n]).collect(),
        ObstructionKind::Le | ObstructionKind::Ge => [n]
            .into_iter()
            .chain(sigma.as_slice().iter().copied())
            .collect(),
    };
    Permutation::new(img)
}

fn not_in_image(msg: impl Into<String>) -> Error {
    Error::NotInImage(msg.into())
}

fn unique(candidates: Vec<usize>, what: &str) -> Result<usize> {
    match candidates.as_slice() {
        [v] => Ok(*v),
        _ => Err(not_in_image(format!(
            "{} vertices {what}",
            candidates.len()
        ))),
    }
}

/// The distinguished vertex and the set `X`, located from the tag's anchor.
fn anchor(r: ObstructionKind, g: &OrientedGraph) -> Result<(usize, BitSet)> {
    let n = g.n();
    match r {
        ObstructionKind::Eq => {
            let y_top = unique(
                (0..n).filter(|&v| g.out_degree(v) == 1).collect(),
                "of out-degree 1",
            )?;
            let x_top = g.out_neighbours(y_top).first().expect("degree 1");
            let mut x = g.in_neighbours(x_top).clone();
            x.insert(x_top);
            x.remove(y_top);
            Ok((y_top, x))
        }
        ObstructionKind::Le => {
            let y_top = unique(
                (0..n).filter(|&v| g.out_degree(v) == 1).collect(),
                "of out-degree 1",
            )?;
            let x1 = g.out_neighbours(y_top).first().expect("degree 1");
            let mut x = g.out_neighbours(x1).clone();
            x.insert(x1);
            Ok((y_top, x))
        }
        ObstructionKind::Ge => {
            let cands: Vec<usize> = (0..n).filter(|&v| g.in_degree(v) == 1).collect();
            // x_1 beats the only other possible candidate, y_1
            let x1 = match cands.as_slice() {
                [v] => *v,
                [a, b] if g.has_arc(*a, *b) => *a,
                [a, b] if g.has_arc(*b, *a) => *b,
                _ => {
                    return Err(not_in_image(format!(
                        "{} vertices of in-degree 1",
                        cands.len()
                    )))
                }
            };
            let y_top = g.in_neighbours(x1).first().expect("degree 1");
            Ok((y_top, g.out_neighbours(y_top).clone()))
        }
    }
}

/// Recovers `(σ', roles)` with `t = F_R(σ')` under `roles`, checking every arc.
pub fn decode_roles(r: ObstructionKind, t: &OrientedGraph) -> Result<(Permutation, RoleMap)> {
    if !t.is_tournament() {
        return Err(not_in_image("not a tournament"));
    }
    let total = t.n();
    if total % 2 == 1 || total < 6 {
        return Err(not_in_image(format!("{total} vertices")));
    }
    let m = total / 2;
    let (_, xs) = anchor(r, t)?;
    if xs.count() != m {
        return Err(not_in_image(format!("|X| = {}, expected {m}", xs.count())));
    }
    let ys = xs.complement();
    let x = chain_order(t, &xs).map_err(|_| not_in_image("X is not a chain"))?;
    let y = chain_order(t, &ys).map_err(|_| not_in_image("Y is not a chain"))?;
    let mut inv = vec![usize::MAX; m];
    for (j, &yj) in y.iter().enumerate() {
        inv[j] = match r {
            ObstructionKind::Eq => {
                let hits: Vec<usize> = (0..m).filter(|&i| t.has_arc(yj, x[i])).collect();
                unique(hits, "matched into X")?
            }
            ObstructionKind::Le => m - 1 - (0..m).filter(|&i| t.has_arc(x[i], yj)).count(),
            ObstructionKind::Ge => (0..m).filter(|&i| t.has_arc(x[i], yj)).count(),
        };
    }
    let sigma_inv =
        Permutation::new(inv).map_err(|_| not_in_image("Y does not encode a permutation"))?;
    let sigma = sigma_inv.inverse();
    let roles = RoleMap { x, y };
    let rebuilt = build_on_roles(r, &sigma, &roles, total);
    if rebuilt.out_matrix() != t.out_matrix() {
        return Err(not_in_image("arcs differ from the reconstruction"));
    }
    Ok((sigma, roles))
}

/// Inverse of `t ↦ F_R(extend_sigma(R, σ))`, up to relabeling.
pub fn decode_f(r: ObstructionKind, t: &OrientedGraph) -> Result<Permutation> {
    let (ext, _) = decode_roles(r, t)?;
    let m = ext.len();
    let img = ext.as_slice();
    let core: Vec<usize> = match r {
        ObstructionKind::Eq if img[m - 1] == m - 1 => img[..m - 1].to_vec(),
        ObstructionKind::Le | ObstructionKind::Ge if img[0] == m - 1 => img[1..].to_vec(),
        _ => {
            return Err(not_in_image(format!(
                "{ext} is not an extended permutation"
            )))
        }
    };
    Permutation::new(core)
}

/// A chain given with its orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub chain: Vec<usize>,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainOrderRepresentation {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub order_a: ChainSpec,
    pub order_b: ChainSpec,
    pub class: MatrixClass,
    pub sigma: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "violation")]
pub enum RepresentationViolation {
    NotDisjoint {
        vertex: usize,
    },
    BadChain {
        which: char,
        reason: String,
    },
    NotTotallyOrdered {
        which: char,
        u: usize,
        v: usize,
    },
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    Matrix {
        row: usize,
        col: usize,
    },
}

/// Checks that `a` and `b` are totally ordered by their quasi-orders and
/// that the adjacency matrix of `a` versus `b` is `M_class(σ)`.
pub fn verify_chain_representation(
    g: &OrientedGraph,
    rep: &ChainOrderRepresentation,
) -> std::result::Result<(), RepresentationViolation> {
    let n = g.n();
    let mut seen = vec![false; n];
    for &v in rep.a.iter().chain(&rep.b) {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(RepresentationViolation::NotDisjoint { vertex: v });
        }
    }
    let mut sorted = Vec::new();
    for (which, set, spec) in [('A', &rep.a, &rep.order_a), ('B', &rep.b, &rep.order_b)] {
        let q = chain_quasi_order(g, &spec.chain, spec.orientation).map_err(|e| {
            RepresentationViolation::BadChain {
                which,
                reason: e.to_string(),
            }
        })?;
        let mut s = set.clone();
        s.sort_by_key(|&v| q.rank(v));
        if let Some(w) = s.windows(2).find(|w| q.rank(w[0]) == q.rank(w[1])) {
            return Err(RepresentationViolation::NotTotallyOrdered {
                which,
                u: w[0],
                v: w[1],
            });
        }
        sorted.push(s);
    }
    let expected = build_m(rep.class, &rep.sigma);
    let (a, b) = (&sorted[0], &sorted[1]);
    if a.len() != expected.rows() || b.len() != expected.cols() {
        return Err(RepresentationViolation::Shape {
            rows: a.len(),
            cols: b.len(),
            expected: rep.sigma.len(),
        });
    }
    for (i, &u) in a.iter().enumerate() {
        for (j, &v) in b.iter().enumerate() {
            if g.has_arc(u, v) != (expected.get(i, j) == 1) {
                return Err(RepresentationViolation::Matrix { row: i, col: j });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointParts {
    /// Indices of the kept row parts and column parts.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Whether the kept row parts all precede the kept column parts.
    pub rows_first: bool,
}

/// Given two partitions of the same order interval into `2k` consecutive
/// intervals each, keeps `k` of each so that all kept parts are disjoint.
pub fn disjointify_division(
    order: &VertexOrder,
    rows: &[Vec<usize>],
    cols: &[Vec<usize>],
) -> Result<DisjointParts> {
    let spans = |fam: &[Vec<usize>]| -> Result<Vec<(usize, usize)>> {
        let f = IntervalFamily::new(fam.to_vec())?;
        let mut s = f.spans(order)?;
        s.sort_unstable_by_key(|&(lo, _, i)| (i, lo));
        let ordered: Vec<(usize, usize)> = s.iter().map(|&(lo, hi, _)| (lo, hi)).collect();
        if ordered.windows(2).any(|w| w[0].1 + 1 != w[1].0) {
            return Err(Error::InvalidFamily(
                "parts are not consecutive intervals".into(),
            ));
        }
        Ok(ordered)
    };
    let (r, c) = (spans(rows)?, spans(cols)?);
    if r.len() != c.len() || r.len() % 2 == 1 || r.is_empty() {
        return Err(Error::InvalidFamily(format!(
            "expected 2k parts on each side, got {} and {}",
            r.len(),
            c.len()
        )));
    }
    if r[0].0 != c[0].0 || r.last().map(|p| p.1) != c.last().map(|p| p.1) {
        return Err(Error::InvalidFamily(
            "row and column parts cover different intervals".into(),
        ));
    }
    let k = r.len() / 2;
    if r[k - 1].1 < c[k].0 {
        Ok(DisjointParts {
            rows: (0..k).collect(),
            cols: (k..2 * k).collect(),
            rows_first: true,
        })
    } else {
        debug_assert!(c[k - 1].1 < r[k].0);
        Ok(DisjointParts {
            rows: (k..2 * k).collect(),
            cols: (0..k).collect(),
            rows_first: false,
        })
    }
}

/// Runs the extraction separately on two families of intervals of the same
/// BST order.
pub fn double_extraction(
    g: &OrientedGraph,
    t: &BstTree,
    a: &IntervalFamily,
    b: &IntervalFamily,
    k: usize,
    enforce_budget: bool,
    limits: &Limits,
) -> Result<(Extraction, Extraction)> {
    Ok((
        extract_nonoverlapping(g, t, a, k, enforce_budget, limits)?,
        extract_nonoverlapping(g, t, b, k, enforce_budget, limits)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCount {
    pub m: usize,
    pub members: usize,
    pub count_distinct: usize,
    pub all_rigid: bool,
    /// `(2m+2)! · m!` when the generators are distinct and rigid.
    pub labelled: Option<u128>,
    #[serde(skip)]
    pub forms: Vec<Vec<u8>>,
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Canonical forms of `F_R(extend_sigma(R, σ))` for `σ ∈ S_m`, `2 ≤ m ≤ m_max`.
pub fn enumerate_family(
    r: ObstructionKind,
    m_max: usize,
    limits: &Limits,
) -> Result<Vec<FamilyCount>> {
    check(
        "permutation size for enumeration",
        m_max,
        limits.enumerate_max_m,
    )?;
    let mut out = Vec::new();
    for m in 2..=m_max {
        let rows: Vec<(Vec<u8>, u64)> = all_permutations(m)
            .par_iter()
            .map(|sigma| {
                let ext = extend_sigma(r, sigma)?;
                let (t, _) = build_f(r, &ext);
                Ok((canonical_form(&t, limits)?, automorphism_count(&t, limits)?))
            })
            .collect::<Result<_>>()?;
        let mut forms: Vec<Vec<u8>> = rows.iter().map(|(f, _)| f.clone()).collect();
        forms.sort();
        forms.dedup();
        let all_rigid = rows.iter().all(|&(_, a)| a == 1);
        let distinct = forms.len() == rows.len();
        out.push(FamilyCount {
            m,
            members: rows.len(),
            count_distinct: forms.len(),
            all_rigid,
            labelled: (distinct && all_rigid).then(|| factorial(2 * m + 2) * factorial(m)),
            forms,
        });
    }
    Ok(out)
}

/// Searches the generators `F_{pattern}(τ')`, `τ' = extend_sigma(pattern, τ)`
/// with `2 ≤ |τ| ≤ pattern_max_m`, for one that embeds in no `F_{host}(σ)`
/// with `|σ| ≤ host_max_m`. Returns the first such `τ`.
pub fn minimality_witness(
    host: ObstructionKind,
    pattern: ObstructionKind,
    pattern_max_m: usize,
    host_max_m: usize,
) -> Option<Permutation> {
    let hosts: Vec<Tournament> = (1..=host_max_m)
        .flat_map(all_permutations)
        .map(|s| build_f(host, &s).0)
        .collect();
    (2..=pattern_max_m).flat_map(all_permutations).find(|tau| {
        let ext = extend_sigma(pattern, tau).expect("size at least 2");
        let (p, _) = build_f(pattern, &ext);
        hosts
            .par_iter()
            .all(|h| find_induced_embedding(h, &p).is_none())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn eq_generator_of_31452() {
        let (t, roles) = build_f(ObstructionKind::Eq, &p("31452"));
        let mut yx: Vec<(usize, usize)> = Vec::new();
        for (j, &y) in roles.y.iter().enumerate() {
            for (i, &x) in roles.x.iter().enumerate() {
                if t.has_arc(y, x) {
                    yx.push((j + 1, i + 1));
                }
            }
        }
        yx.sort_unstable();
        assert_eq!(yx, vec![(1, 2), (2, 5), (3, 1), (4, 3), (5, 4)]);
        let (t, _) = build_f(ObstructionKind::Eq, &p("1"));
        assert_eq!(t.arcs(), vec![(1, 0)]);
    }

    #[test]
    fn inclusion_characterizations() {
        for sigma in (1..=4).flat_map(all_permutations) {
            let inv = sigma.inverse();
            let n = sigma.len();
            for r in [ObstructionKind::Le, ObstructionKind::Ge] {
                let (t, roles) = build_f(r, &sigma);
                let ys = BitSet::from_indices(2 * n, roles.y.iter().copied());
                let xs = BitSet::from_indices(2 * n, roles.x.iter().copied());
                for i in 0..n {
                    for j in 0..n {
                        let nx = |a: usize| t.in_neighbours(roles.x[a]).intersection(&ys);
                        let ny = |a: usize| t.in_neighbours(roles.y[a]).intersection(&xs);
                        let (x_inc, y_inc) = match r {
                            ObstructionKind::Ge => {
                                (nx(i).is_subset(&nx(j)), ny(i).is_subset(&ny(j)))
                            }
                            _ => (nx(j).is_subset(&nx(i)), ny(j).is_subset(&ny(i))),
                        };
                        assert_eq!(x_inc, i <= j);
                        assert_eq!(y_inc, inv.apply(i) <= inv.apply(j));
                    }
                }
            }
        }
    }

    #[test]
    fn extension_examples() {
        assert_eq!(
            extend_sigma(ObstructionKind::Eq, &p("21")).unwrap(),
            p("213")
        );
        assert_eq!(
            extend_sigma(ObstructionKind::Le, &p("21")).unwrap(),
            p("321")
        );
        assert_eq!(
            extend_sigma(ObstructionKind::Ge, &p("12")).unwrap(),
            p("312")
        );
        assert_eq!(
            extend_sigma(ObstructionKind::Eq, &p("1")),
            Err(Error::TooSmall { need: 2, got: 1 })
        );
    }

    #[test]
    fn decode_roundtrip_with_relabelings() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for sigma in (2..=4).flat_map(all_permutations) {
            for r in ObstructionKind::ALL {
                let (t, _) = build_f(r, &extend_sigma(r, &sigma).unwrap());
                assert_eq!(decode_f(r, &t).unwrap(), sigma);
                let mut perm: Vec<usize> = (0..t.n()).collect();
                perm.shuffle(&mut rng);
                assert_eq!(decode_f(r, &t.relabel(&perm)).unwrap(), sigma);
            }
        }
        assert!(matches!(
            decode_f(ObstructionKind::Eq, &Tournament::cycle3()),
            Err(Error::NotInImage(_))
        ));
        assert!(matches!(
            decode_f(ObstructionKind::Eq, &Tournament::transitive(8)),
            Err(Error::NotInImage(_))
        ));
        // a generator of one kind is not decoded as another
        let (t, _) = build_f(
            ObstructionKind::Le,
            &extend_sigma(ObstructionKind::Le, &p("213")).unwrap(),
        );
        assert!(decode_f(ObstructionKind::Eq, &t).is_err());
    }

    #[test]
    fn chain_representation_checks() {
        let sigma = p("31452");
        let (t, roles) = build_f(ObstructionKind::Eq, &sigma);
        let mut rep = ChainOrderRepresentation {
            a: roles.x.clone(),
            b: roles.y.clone(),
            order_a: ChainSpec {
                chain: roles.x.clone(),
                orientation: Orientation::Plus,
            },
            order_b: ChainSpec {
                chain: roles.y.clone(),
                orientation: Orientation::Plus,
            },
            class: MatrixClass::Ne,
            sigma: sigma.clone(),
        };
        assert_eq!(verify_chain_representation(&t, &rep), Ok(()));
        let swapped = ChainOrderRepresentation {
            a: roles.y.clone(),
            b: roles.x.clone(),
            order_a: rep.order_b.clone(),
            order_b: rep.order_a.clone(),
            class: MatrixClass::Eq,
            sigma: sigma.inverse(),
        };
        assert_eq!(verify_chain_representation(&t, &swapped), Ok(()));
        rep.class = MatrixClass::Eq;
        assert!(matches!(
            verify_chain_representation(&t, &rep),
            Err(RepresentationViolation::Matrix { .. })
        ));
        rep.class = MatrixClass::Ne;
        rep.order_a.chain = vec![roles.x[0]];
        assert!(matches!(
            verify_chain_representation(&t, &rep),
            Err(RepresentationViolation::NotTotallyOrdered { which: 'A', .. })
        ));
    }

    #[test]
    fn disjointify_examples() {
        let order = VertexOrder::identity(8);
        let fam = |cuts: &[usize]| -> Vec<Vec<usize>> {
            cuts.windows(2).map(|w| (w[0]..w[1]).collect()).collect()
        };
        let d =
            disjointify_division(&order, &fam(&[0, 1, 2, 3, 8]), &fam(&[0, 5, 6, 7, 8])).unwrap();
        assert_eq!(
            (d.rows.clone(), d.cols.clone(), d.rows_first),
            (vec![0, 1], vec![2, 3], true)
        );
        let d =
            disjointify_division(&order, &fam(&[0, 5, 6, 7, 8]), &fam(&[0, 1, 2, 3, 8])).unwrap();
        assert_eq!(
            (d.rows.clone(), d.cols.clone(), d.rows_first),
            (vec![2, 3], vec![0, 1], false)
        );
        // interleaved: check the chosen parts by interval arithmetic
        let (rows, cols) = (fam(&[0, 2, 4, 6, 8]), fam(&[0, 3, 4, 7, 8]));
        let d = disjointify_division(&order, &rows, &cols).unwrap();
        for &i in &d.rows {
            for &j in &d.cols {
                let (r, c) = (&rows[i], &cols[j]);
                assert!(r.iter().all(|v| !c.contains(v)));
                assert_eq!(r[0] < c[0], d.rows_first);
            }
        }
        assert!(disjointify_division(&order, &fam(&[0, 4, 8]), &fam(&[0, 2, 4, 8])).is_err());
    }

    #[test]
    fn small_enumeration() {
        let l = Limits::default();
        let eq = enumerate_family(ObstructionKind::Eq, 2, &l).unwrap();
        assert_eq!((eq[0].count_distinct, eq[0].all_rigid), (2, true));
        assert_eq!(eq[0].labelled, Some(1440));
        let le = enumerate_family(ObstructionKind::Le, 3, &l).unwrap();
        assert_eq!(
            (le[1].m, le[1].count_distinct, le[1].all_rigid),
            (3, 6, true)
        );
        assert!(enumerate_family(ObstructionKind::Le, 5, &l).is_err());
    }
}
