//! Binary relational structures: a domain `0..n` and named binary relations.

use crate::bitset::BitMatrix;
use crate::graph::{OrientedGraph, VertexOrder};
use crate::{Error, Result};

pub const ARC: &str = "arc";
pub const ORD: &str = "ord";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryStructure {
    n: usize,
    names: Vec<String>,
    rels: Vec<BitMatrix>,
}

impl BinaryStructure {
    pub fn new(n: usize) -> Self {
        BinaryStructure {
            n,
            names: Vec::new(),
            rels: Vec::new(),
        }
    }

    /// The graph with its arcs as the relation `arc`.
    pub fn from_graph(g: &OrientedGraph) -> Self {
        let mut s = Self::new(g.n());
        s.names.push(ARC.into());
        s.rels.push(g.out_matrix().clone());
        s
    }

    /// The bi-relation `(g, <)`: `arc` plus `ord(u, v)` iff `u < v` in `order`.
    pub fn ordered(g: &OrientedGraph, order: &VertexOrder) -> Self {
        let mut s = Self::from_graph(g);
        s.push_order(order).expect("sizes match");
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relation_count(&self) -> usize {
        self.rels.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[BitMatrix] {
        &self.rels
    }

    pub fn relation(&self, name: &str) -> Option<&BitMatrix> {
        self.index_of(name).map(|i| &self.rels[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn push(&mut self, name: impl Into<String>, rel: BitMatrix) -> Result<()> {
        let name = name.into();
        if rel.size() != self.n {
            return Err(Error::Invalid(format!(
                "relation `{name}` has size {}, domain has {}",
                rel.size(),
                self.n
            )));
        }
        if self.index_of(&name).is_some() {
            return Err(Error::Invalid(format!("duplicate relation `{name}`")));
        }
        if name == ORD && !is_strict_total_order(&rel) {
            return Err(Error::Invalid("`ord` is not a strict total order".into()));
        }
        self.names.push(name);
        self.rels.push(rel);
        Ok(())
    }

    pub fn push_order(&mut self, order: &VertexOrder) -> Result<()> {
        if order.len() != self.n {
            return Err(Error::Invalid(format!(
                "order on {} vertices, domain has {}",
                order.len(),
                self.n
            )));
        }
        let rel = BitMatrix::from_fn(self.n, |u, v| order.less(u, v));
        self.push(ORD, rel)
    }

    #[inline]
    pub fn holds(&self, rel: usize, u: usize, v: usize) -> bool {
        self.rels[rel].get(u, v)
    }

    pub fn induced(&self, keep: &[usize]) -> Self {
        BinaryStructure {
            n: keep.len(),
            names: self.names.clone(),
            rels: self.rels.iter().map(|r| r.induced(keep)).collect(),
        }
    }

    /// Image under `u -> perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        BinaryStructure {
            n: self.n,
            names: self.names.clone(),
            rels: self.rels.iter().map(|r| r.relabel(perm)).collect(),
        }
    }

    /// Drops the named relation, if present.
    pub fn without(&self, name: &str) -> Self {
        let mut s = self.clone();
        if let Some(i) = s.index_of(name) {
            s.names.remove(i);
            s.rels.remove(i);
        }
        s
    }
}

pub fn is_strict_total_order(rel: &BitMatrix) -> bool {
    let n = rel.size();
    // a strict total order has out-degrees exactly n-1, n-2, ..., 0
    let mut seen = vec![false; n];
    for u in 0..n {
        if rel.get(u, u) {
            return false;
        }
        let d = rel.row(u).count();
        if seen[d] {
            return false;
        }
        seen[d] = true;
        for v in rel.row(u).iter() {
            if rel.get(v, u) {
                return false;
            }
        }
    }
    // distinct out-degrees plus antisymmetry and totality force transitivity
    (0..n).all(|u| (u + 1..n).all(|v| rel.get(u, v) ^ rel.get(v, u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Tournament;

    #[test]
    fn order_validation() {
        let t = Tournament::transitive(4);
        assert!(is_strict_total_order(t.out_matrix()));
        assert!(!is_strict_total_order(Tournament::cycle3().out_matrix()));
        let mut s = BinaryStructure::from_graph(&Tournament::cycle3());
        assert!(s
            .push(ORD, Tournament::cycle3().out_matrix().clone())
            .is_err());
        s.push_order(&VertexOrder::identity(3)).unwrap();
        assert_eq!(s.names(), &["arc".to_string(), "ord".to_string()]);
        assert!(s.holds(1, 0, 2));
    }
}
