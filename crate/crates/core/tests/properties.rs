use bstorder::bst::{branch, branch_chain_split, Arity};
use bstorder::chain::pairwise_nonoverlapping;
use bstorder::graph::{automorphism_count, canonical_form, chain_order, independence_number};
use bstorder::logic::{biorder_permutation, Compiled};
use bstorder::matrix::{
    build_m, find_rank_division, is_rank_division, normalize_matrix_class, replay,
    RankDivisionResult,
};
use bstorder::obstructions::{build_f, decode_f, extend_sigma, ObstructionKind};
use bstorder::permutation::{all_permutations, contains_pattern, max_grid, BiOrder};
use bstorder::twin_width::{exact_twin_width, width_of_sequence, WidthMode};
use bstorder::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tournament(n: usize, seed: u64) -> Tournament {
    Tournament::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn oriented(n: usize, p: f64, seed: u64) -> OrientedGraph {
    OrientedGraph::random(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn perm_strategy(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn relabeling(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn strategy_for(kind: u8, seed: u64, n: usize) -> BuildStrategy {
    match kind % 3 {
        0 => BuildStrategy::Insertion((0..n).rev().collect()),
        1 => BuildStrategy::Random(seed),
        _ => BuildStrategy::MedianPivot,
    }
}

fn all_tournaments(n: usize) -> impl Iterator<Item = Tournament> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        Tournament::from_pair_fn(n, |u, v| {
            mask >> pairs.iter().position(|&p| p == (u, v)).unwrap() & 1 == 1
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tournaments_have_one_arc_per_pair(n in 1usize..40, seed in any::<u64>()) {
        let t = tournament(n, seed);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    prop_assert!(t.has_arc(u, v) ^ t.has_arc(v, u));
                }
            }
        }
        prop_assert_eq!(independence_number(&t, &Limits::default()).unwrap(), 1);
    }

    #[test]
    fn canonical_form_ignores_labels(n in 1usize..=6, seed in any::<u64>(), perm in relabeling(6)) {
        let g = oriented(n, 0.3, seed);
        let perm: Vec<usize> = perm.into_iter().filter(|&v| v < n).collect();
        let l = Limits::default();
        prop_assert_eq!(canonical_form(&g, &l).unwrap(), canonical_form(&g.relabel(&perm), &l).unwrap());
        prop_assert_eq!(automorphism_count(&g, &l).unwrap(), automorphism_count(&g.relabel(&perm), &l).unwrap());
    }

    #[test]
    fn branches_are_chains(n in 1usize..80, seed in any::<u64>(), kind in any::<u8>()) {
        let t = tournament(n, seed);
        let tree = bst_build(&t, &strategy_for(kind, seed, n)).unwrap();
        let order = left_to_right(&tree);
        for leaf in tree.leaves() {
            let b = branch(&tree, leaf).unwrap();
            let set = BitSet::from_indices(n, b.iter().copied());
            let chain = chain_order(&t, &set).unwrap();
            for i in 0..chain.len() {
                for j in i + 1..chain.len() {
                    prop_assert!(t.has_arc(chain[i], chain[j]));
                    prop_assert!(order.less(chain[i], chain[j]));
                }
            }
        }
    }

    #[test]
    fn bst_builds_validate(n in 0usize..200, seed in any::<u64>(), kind in any::<u8>(), p in 0.0f64..0.6) {
        let t = tournament(n, seed);
        let tree = bst_build(&t, &strategy_for(kind, seed, n)).unwrap();
        prop_assert_eq!(tree.arity(), Arity::Binary);
        prop_assert_eq!(bst_validate(&t, &tree), Ok(()));
        let order = left_to_right(&tree);
        for x in 0..n {
            let mut y = x;
            while let Some(p) = tree.parent(y) {
                // p is an ancestor of x
                prop_assert_eq!(t.has_arc(p, x), order.less(p, x));
                y = p;
            }
        }
        let g = oriented(n.min(60), p, seed);
        let tree = bst_build(&g, &strategy_for(kind, seed, g.n())).unwrap();
        prop_assert_eq!(bst_validate(&g, &tree), Ok(()));
        let alpha = independence_number(&g, &Limits::default()).unwrap();
        for leaf in tree.leaves() {
            let (_, independent) = branch_chain_split(&tree, leaf).unwrap();
            prop_assert!(independent.len() <= alpha);
        }
    }

    #[test]
    fn quasi_order_classes_partition(n in 1usize..60, seed in any::<u64>(), p in 0.0f64..0.5, minus in any::<bool>()) {
        let g = oriented(n, p, seed);
        let tree = bst_build(&g, &BuildStrategy::Random(seed)).unwrap();
        let leaf = tree.leaves()[(seed % tree.leaves().len() as u64) as usize];
        let (chain_nodes, _) = branch_chain_split(&tree, leaf).unwrap();
        let set = BitSet::from_indices(n, chain_nodes.iter().copied());
        let Ok(mut chain) = chain_order(&g, &set) else { return Ok(()) };
        let o = if minus { chain.reverse(); Orientation::Minus } else { Orientation::Plus };
        let q = chain_quasi_order(&g, &chain, o).unwrap();
        let mut seen = vec![0; n];
        for class in q.classes() {
            for v in class {
                seen[v] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn extraction_parts_do_not_overlap(n in 13usize..400, seed in any::<u64>(), size in 1usize..4) {
        let t = tournament(n, seed);
        let tree = bst_build(&t, &BuildStrategy::Random(seed)).unwrap();
        let fam = IntervalFamily::chunks(&left_to_right(&tree), size);
        let k = (0..8).take_while(|&k| budget(k) <= fam.len() as u64).last().unwrap();
        let e = extract_nonoverlapping(&t, &tree, &fam, k, true, &Limits::default()).unwrap();
        prop_assert!(e.selected.len() >= k);
        prop_assert!(e.trace.check().is_ok());
        let q = chain_quasi_order(&t, e.chain(), e.orientation()).unwrap();
        prop_assert!(pairwise_nonoverlapping(&q, e.family.parts()));
    }

    #[test]
    fn self_pattern_is_everything(sigma in perm_strategy(9)) {
        let n = sigma.len();
        prop_assert_eq!(contains_pattern(&sigma, &sigma, &Limits::default()).unwrap(), Some((0..n).collect()));
    }

    #[test]
    fn max_grid_is_monotone(sigma in perm_strategy(6), mask in any::<u8>()) {
        let idx: Vec<usize> = (0..sigma.len()).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!idx.is_empty());
        let tau = sigma.restrict(&idx);
        let l = Limits::default();
        prop_assert!(max_grid(&tau, &l).unwrap() <= max_grid(&sigma, &l).unwrap());
    }

    #[test]
    fn rank_divisions_are_diverse(n in 1usize..24, seed in any::<u64>(), k in 1usize..4) {
        let t = tournament(n, seed);
        let m = bstorder::matrix::adjacency_matrix(&t, &VertexOrder::identity(n));
        if let RankDivisionResult::Found { division, .. } = find_rank_division(&m, k, &Limits::default()) {
            prop_assert!(division.validate(&m).is_ok());
            prop_assert!(is_rank_division(&m, &division, k));
        }
    }

    #[test]
    fn incremental_width_matches_recompute(n in 1usize..=12, seed in any::<u64>(), p in 0.0f64..0.5) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = OrientedGraph::random(n, p, &mut rng);
        let s = BinaryStructure::ordered(&g, &VertexOrder::identity(n));
        let mut alive: Vec<usize> = (0..n).collect();
        let mut merges = Vec::new();
        while alive.len() > 1 {
            let i = rng.gen_range(0..alive.len());
            let mut j = rng.gen_range(0..alive.len() - 1);
            if j >= i { j += 1; }
            let (a, b) = (alive[i].min(alive[j]), alive[i].max(alive[j]));
            merges.push((a, b));
            alive.retain(|&v| v != b);
        }
        let seq = ContractionSequence::new(n, &merges).unwrap();
        prop_assert_eq!(
            width_of_sequence(&s, &seq, WidthMode::Incremental).unwrap(),
            width_of_sequence(&s, &seq, WidthMode::Recompute).unwrap()
        );
    }

    #[test]
    fn exact_width_ignores_labels(n in 1usize..=6, seed in any::<u64>(), perm in relabeling(6)) {
        let t = tournament(n, seed);
        let perm: Vec<usize> = perm.into_iter().filter(|&v| v < n).collect();
        let l = Limits::default();
        let a = exact_twin_width(&BinaryStructure::from_graph(&t), &l).unwrap().0;
        let b = exact_twin_width(&BinaryStructure::from_graph(&t.relabel(&perm)), &l).unwrap().0;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn order_never_lowers_width(n in 1usize..=6, seed in any::<u64>(), order in relabeling(6)) {
        let t = tournament(n, seed);
        let order = VertexOrder::new(order.into_iter().filter(|&v| v < n).collect()).unwrap();
        let l = Limits::default();
        let plain = exact_twin_width(&BinaryStructure::from_graph(&t), &l).unwrap().0;
        let ordered = exact_twin_width(&BinaryStructure::ordered(&t, &order), &l).unwrap().0;
        prop_assert!(plain <= ordered);
    }

    #[test]
    fn interpretation_output_is_a_biorder(sigma in perm_strategy(4), perm in relabeling(10)) {
        prop_assume!(sigma.len() >= 2);
        for r in ObstructionKind::ALL {
            let (t, _) = build_f(r, &extend_sigma(r, &sigma).unwrap());
            let perm: Vec<usize> = perm.iter().copied().filter(|&v| v < t.n()).collect();
            let t = t.relabel(&perm);
            prop_assert_eq!(decode_f(r, &t).unwrap(), sigma.clone());
            let out = logic::apply_interpretation(&logic::decoding_interpretation(r), &BinaryStructure::from_graph(&t)).unwrap();
            prop_assert_eq!(biorder_permutation(&out).unwrap(), sigma.clone());
        }
    }
}

#[test]
fn b_class_formulas_agree_up_to_six() {
    // A_{i-1} ∩ N^-(c_i) against A_{i-1} \ N^+(c_i)
    for n in 1..=6 {
        for g in all_tournaments(n) {
            for s in 1u32..1 << n {
                let set = BitSet::from_indices(n, (0..n).filter(|&v| s >> v & 1 == 1));
                let Ok(chain) = chain_order(&g, &set) else {
                    continue;
                };
                let q = chain_quasi_order(&g, &chain, Orientation::Plus).unwrap();
                let mut a = set.complement();
                for (i, &c) in chain.iter().enumerate() {
                    let b4 = a.intersection(g.in_neighbours(c));
                    let b6 = a.difference(g.out_neighbours(c));
                    assert_eq!(b4, b6);
                    assert!(b4.iter().all(|v| q.rank(v) == 2 * i));
                    a.intersect_with(g.out_neighbours(c));
                }
                assert!(a.iter().all(|v| q.rank(v) == 2 * chain.len()));
            }
        }
    }
}

#[test]
fn exact_width_is_hereditary() {
    let l = Limits::default();
    for n in 1..=6 {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..12 {
            let t = Tournament::random(n, &mut rng);
            let whole = exact_twin_width(&BinaryStructure::from_graph(&t), &l)
                .unwrap()
                .0;
            for mask in 1u32..(1 << n) - 1 {
                let keep: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                let part = exact_twin_width(&BinaryStructure::from_graph(&t.induced(&keep)), &l)
                    .unwrap()
                    .0;
                assert!(part <= whole);
            }
        }
    }
}

#[test]
fn exact_width_on_small_obstruction() {
    let sigma = Permutation::parse("21").unwrap();
    let (t, _) = build_f(
        ObstructionKind::Eq,
        &extend_sigma(ObstructionKind::Eq, &sigma).unwrap(),
    );
    assert_eq!(t.n(), 6);
    let s = BinaryStructure::from_graph(&t);
    let (w, seq) = exact_twin_width(&s, &Limits::default()).unwrap();
    assert_eq!(
        width_of_sequence(&s, &seq, WidthMode::Recompute)
            .unwrap()
            .width,
        w
    );
    // every complete sequence on 6 vertices is at least as wide
    fn best(
        s: &BinaryStructure,
        parts: Vec<Vec<usize>>,
        merges: &mut Vec<(usize, usize)>,
    ) -> usize {
        if parts.len() == 1 {
            let seq = ContractionSequence::new(s.n(), merges).unwrap();
            return width_of_sequence(s, &seq, WidthMode::Recompute)
                .unwrap()
                .width;
        }
        let mut out = usize::MAX;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let mut next = parts.clone();
                let moved = next.remove(j);
                next[i].extend(moved);
                merges.push((parts[i][0].min(parts[j][0]), parts[i][0].max(parts[j][0])));
                out = out.min(best(s, next, merges));
                merges.pop();
            }
        }
        out
    }
    assert_eq!(
        best(&s, (0..6).map(|v| vec![v]).collect(), &mut Vec::new()),
        w
    );
}

#[test]
fn matrix_class_identities() {
    use bstorder::matrix::MatrixClass::*;
    for sigma in all_permutations(4) {
        let e = build_m(Eq, &sigma);
        for i in 0..4 {
            assert_eq!((0..4).filter(|&j| e.get(i, j) == 1).count(), 1);
            assert_eq!((0..4).filter(|&j| e.get(j, i) == 1).count(), 1);
        }
        assert_eq!(build_m(Ne, &sigma), e.complement());
        let (le, ge) = (build_m(LeR, &sigma), build_m(GeR, &sigma));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(le.get(i, j) | ge.get(i, j), 1);
                assert_eq!(le.get(i, j) & ge.get(i, j), e.get(i, j));
            }
        }
        for s in [Eq, Ne, LeR, GeR, LeC, GeC] {
            for (rr, rc) in [(false, false), (true, false), (false, true), (true, true)] {
                let norm = normalize_matrix_class(s, &sigma, rr, rc);
                assert_eq!(
                    replay(&norm.log, &build_m(s, &sigma)),
                    build_m(norm.class, &norm.perm)
                );
            }
        }
    }
}

#[test]
fn biorder_structure_roundtrip() {
    for sigma in (1..=4).flat_map(all_permutations) {
        let s = BiOrder::new(sigma.clone()).to_structure();
        assert_eq!(biorder_permutation(&s).unwrap(), sigma);
        // lt2 restricted through the compiled evaluator agrees with σ
        let f = logic::rel("lt2", "x", "y");
        let c = Compiled::new(&s, &f, &["x", "y"]).unwrap();
        for x in 0..sigma.len() {
            for y in 0..sigma.len() {
                assert_eq!(c.eval(&[x, y]), sigma.apply(x) < sigma.apply(y));
            }
        }
    }
}
