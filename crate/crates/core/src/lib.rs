//! BST vertex orders, chain quasi-orders and twin-width tooling for
//! tournaments and dense oriented graphs.

pub mod bitset;
pub mod bst;
pub mod chain;
mod error;
pub mod graph;
pub mod limits;
pub mod logic;
pub mod matrix;
pub mod obstructions;
pub mod permutation;
pub mod structure;
pub mod twin_width;

pub use bitset::{BitMatrix, BitSet};
pub use bst::{bst_build, bst_validate, left_to_right, Arity, BstTree, BuildStrategy};
pub use chain::{
    budget, chain_quasi_order, extract_nonoverlapping, overlapping, ChainQuasiOrder, Extraction,
    IntervalFamily, Orientation,
};
pub use error::{Error, Result};
pub use graph::{GraphKind, OrientedGraph, Tournament, VertexOrder};
pub use limits::Limits;
pub use logic::{
    apply_interpretation, classify_biordered_tournament, ds_formula, fvs_formula, model_check,
    parse_sentence, Formula, Interpretation,
};
pub use matrix::{Division, Matrix, MatrixClass};
pub use obstructions::{build_f, decode_f, extend_sigma, ObstructionKind, RoleMap};
pub use permutation::{BiOrder, PairColoring, Permutation};
pub use structure::BinaryStructure;
pub use twin_width::{
    approximate_tournament_tww, exact_twin_width, greedy_contraction, width_of_sequence,
    ContractionSequence, GreedyPolicy, TwwWitness, WidthMode, WidthReport,
};
