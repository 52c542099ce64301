use std::path::Path;

use bstorder::bst::{parse_tree, write_tree};
use bstorder::logic::{ds_formula_with, Domination};
use bstorder::matrix::{
    build_m, find_rank_division, is_k_grid, is_rank_division, normalize_matrix_class, parse_matrix, replay,
    write_matrix, RankDivisionResult, Transform,
};
use bstorder::permutation::{contains_pattern, find_grid, max_grid, order_type};
use bstorder::structure::ORD;
use bstorder::{
    bst_validate, fvs_formula, left_to_right, model_check, parse_sentence, BinaryStructure, Division,
    Formula, GraphKind, Matrix, MatrixClass, OrientedGraph, Permutation, VertexOrder,
};
use serde_json::{json, Value};

use crate::cmd::tww::{join, ranges_text};
use crate::ctx::{one_based, order_json, ranges_json, strategy_name, violation_text, Ctx};
use crate::report::{CliError, CliResult, Outcome};

pub fn bst_build(ctx: &mut Ctx, input: &Path, kind: GraphKind, strategy: Option<&str>) -> CliResult<Outcome> {
    let g = ctx.graph(input, kind)?;
    let st = ctx.strategy(strategy)?;
    let t = bstorder::bst_build(&g, &st)?;
    let order = left_to_right(&t);
    let result = json!({
        "n": t.n(),
        "arity": t.arity(),
        "root": t.root().map(|r| r + 1),
        "depth": t.depth(),
        "order": order_json(&order),
    });
    let text = write_tree(&t);
    let mut out = Outcome::new(result, format!("order: {}\n", join(&one_based(order.as_slice()))))
        .mode("strategy", strategy_name(&st))
        .artifact(text);
    out.check("tree satisfies the BST conditions", bst_validate(&g, &t).is_ok())?;
    // arcs between a node and its ancestors follow the in-order
    let mut ancestor_rule = true;
    for x in 0..t.n() {
        let mut a = t.parent(x);
        while let Some(p) = a {
            if g.adjacent(p, x) {
                ancestor_rule &= g.has_arc(p, x) == order.less(p, x);
            }
            a = t.parent(p);
        }
    }
    out.check("ancestor arcs agree with the in-order", ancestor_rule)?;
    Ok(out)
}

pub fn bst_check(ctx: &mut Ctx, input: &Path, kind: GraphKind, tree: &Path) -> CliResult<Outcome> {
    let g = ctx.graph(input, kind)?;
    let text = ctx.read("tree", tree)?;
    let t = parse_tree(&text)?;
    let verdict = if t.n() != g.n() {
        Err(format!("tree has {} nodes, graph has {}", t.n(), g.n()))
    } else {
        bst_validate(&g, &t).map_err(|v| violation_text(&v))
    };
    let (result, text) = match &verdict {
        Ok(()) => (
            json!({"valid": true, "order": order_json(&left_to_right(&t))}),
            "valid\n".to_string(),
        ),
        Err(why) => (json!({"valid": false, "violation": why}), format!("invalid: {why}\n")),
    };
    Ok(Outcome::new(result, text))
}

fn load_matrix(ctx: &mut Ctx, path: &Path) -> CliResult<Matrix> {
    let text = ctx.read("matrix", path)?;
    let m = parse_matrix(&text)?;
    ctx.check_size("matrix", m.rows().max(m.cols()))?;
    Ok(m)
}

/// `--cuts 3,5/2,4`: the 1-based first row, then column, of every part but
/// the first.
fn parse_cuts(spec: &str) -> CliResult<Division> {
    let bad = || CliError::Usage(format!("bad --cuts `{spec}`; expected e.g. 3,5/2,4"));
    let (r, c) = spec.split_once('/').ok_or_else(bad)?;
    let list = |s: &str| -> CliResult<Vec<usize>> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| match t.trim().parse::<usize>() {
                Ok(v) if v >= 2 => Ok(v - 1),
                _ => Err(bad()),
            })
            .collect()
    };
    Ok(Division {
        row_cuts: list(r)?,
        col_cuts: list(c)?,
    })
}

pub fn matrix_grid(ctx: &mut Ctx, input: &Path, k: usize, cuts: &str) -> CliResult<Outcome> {
    let m = load_matrix(ctx, input)?;
    let d = parse_cuts(cuts)?;
    d.validate(&m)?;
    let grid = is_k_grid(&m, &d, k)?;
    let (rows, cols) = (d.row_parts(&m), d.col_parts(&m));
    let every_cell = rows
        .iter()
        .all(|r| cols.iter().all(|c| r.clone().any(|i| c.clone().any(|j| m.get(i, j) == 1))));
    let mut out = Outcome::new(
        json!({"k": k, "is_grid": grid, "row_parts": ranges_json(&rows), "col_parts": ranges_json(&cols)}),
        format!("{k}-grid: {grid}\n"),
    );
    out.check("cell scan agrees", grid == every_cell)?;
    Ok(out)
}

pub fn matrix_rankdiv(ctx: &mut Ctx, input: &Path, k: usize) -> CliResult<Outcome> {
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let m = load_matrix(ctx, input)?;
    let res = find_rank_division(&m, k, &ctx.limits);
    let (result, text, search) = match &res {
        RankDivisionResult::Found { division, heuristic } => {
            let (rows, cols) = (division.row_parts(&m), division.col_parts(&m));
            (
                json!({"status": "found", "row_parts": ranges_json(&rows), "col_parts": ranges_json(&cols)}),
                format!("rows {} | cols {}\n", ranges_text(&rows), ranges_text(&cols)),
                if *heuristic { "heuristic" } else { "exact" },
            )
        }
        RankDivisionResult::NotFound => (json!({"status": "not-found"}), "not found\n".into(), "exact"),
        RankDivisionResult::Unknown => (json!({"status": "unknown"}), "unknown\n".into(), "heuristic"),
    };
    let mut out = Outcome::new(result, text).mode("search", search).mode("k", k);
    if let Some(d) = res.division() {
        out.check("rank division re-verified", d.validate(&m).is_ok() && is_rank_division(&m, d, k))?;
    }
    Ok(out)
}

fn transform_json(t: &Transform) -> Value {
    match t {
        Transform::ReverseRows => json!({"op": "reverse_rows"}),
        Transform::ReverseCols => json!({"op": "reverse_cols"}),
        Transform::TransposeComplement => json!({"op": "transpose_complement"}),
        Transform::DeleteRow(r) => json!({"op": "delete_row", "index": r + 1}),
        Transform::DeleteCol(c) => json!({"op": "delete_col", "index": c + 1}),
    }
}

pub fn matrix_class(
    ctx: &mut Ctx,
    class: MatrixClass,
    perm: &Path,
    reverse_rows: bool,
    reverse_cols: bool,
    normalize: bool,
) -> CliResult<Outcome> {
    let sigma = ctx.perm("perm", perm)?;
    let base = build_m(class, &sigma);
    if !normalize {
        let mut m = base;
        if reverse_rows {
            m = m.reverse_rows();
        }
        if reverse_cols {
            m = m.reverse_cols();
        }
        let text = write_matrix(&m)?;
        let mut out = Outcome::new(json!({"class": class, "perm": sigma.one_line()}), text.clone()).artifact(text);
        let inv = sigma.inverse();
        let n = sigma.len();
        let at = |i: usize, j: usize| {
            let i = if reverse_rows { n - 1 - i } else { i };
            let j = if reverse_cols { n - 1 - j } else { j };
            class.entry(&sigma, &inv, i, j)
        };
        let exact = (0..n).all(|i| (0..n).all(|j| (m.get(i, j) == 1) == at(i, j)));
        out.check("entries match the class formula", exact)?;
        return Ok(out);
    }
    let norm = normalize_matrix_class(class, &sigma, reverse_rows, reverse_cols);
    let target = build_m(norm.class, &norm.perm);
    let text = write_matrix(&target)?;
    let result = json!({
        "class": class,
        "perm": sigma.one_line(),
        "normalized_class": norm.class,
        "normalized_perm": norm.perm.one_line(),
        "log": norm.log.iter().map(transform_json).collect::<Vec<_>>(),
    });
    let mut out = Outcome::new(result, text.clone()).artifact(text).mode("normalize", true);
    out.check("replaying the log gives the normalized matrix", replay(&norm.log, &base) == target)?;
    if let (Ok(before), Ok(after)) = (max_grid(&sigma, &ctx.limits), max_grid(&norm.perm, &ctx.limits)) {
        out.check("grid size drops by at most one", after + 1 >= before)?;
    }
    Ok(out)
}

pub fn perm_pattern(ctx: &mut Ctx, input: &Path, pattern: &Path) -> CliResult<Outcome> {
    let sigma = ctx.perm("perm", input)?;
    let tau = ctx.perm("pattern", pattern)?;
    let found = contains_pattern(&sigma, &tau, &ctx.limits)?;
    let text = match &found {
        Some(x) => format!("found at {}\n", join(&one_based(x))),
        None => "not found\n".into(),
    };
    let mut out = Outcome::new(
        json!({"found": found.is_some(), "indices": found.as_deref().map(one_based)}),
        text,
    );
    if let Some(x) = &found {
        let (s, t) = (sigma.as_slice(), tau.as_slice());
        let ok = x.len() == t.len()
            && x.windows(2).all(|w| w[0] < w[1])
            && (0..x.len()).all(|a| (0..x.len()).all(|b| order_type(s[x[a]], s[x[b]]) == order_type(t[a], t[b])));
        out.check("restriction is order-isomorphic to the pattern", ok)?;
    }
    Ok(out)
}

fn grid_cells_hit(sigma: &Permutation, rows: &[usize], cols: &[usize]) -> bool {
    let n = sigma.len();
    let part = |cuts: &[usize], i: usize| cuts.iter().filter(|&&c| c <= i).count();
    let k = rows.len() + 1;
    let mut hit = vec![false; k * k];
    for i in 0..n {
        hit[part(rows, i) * k + part(cols, sigma.apply(i))] = true;
    }
    cols.len() + 1 == k && hit.iter().all(|&h| h)
}

fn cut_parts(cuts: &[usize], n: usize) -> Vec<std::ops::Range<usize>> {
    let mut bounds = vec![0];
    bounds.extend_from_slice(cuts);
    bounds.push(n);
    bounds.windows(2).map(|w| w[0]..w[1]).collect()
}

pub fn perm_grid(ctx: &mut Ctx, input: &Path, k: Option<usize>) -> CliResult<Outcome> {
    let sigma = ctx.perm("perm", input)?;
    let (k, max) = match k {
        Some(k) => (k, None),
        None => {
            let m = max_grid(&sigma, &ctx.limits)?;
            (m, Some(m))
        }
    };
    let grid = find_grid(&sigma, k);
    let n = sigma.len();
    let mut result = json!({"k": k, "found": grid.is_some()});
    if let Some(m) = max {
        result["max_grid"] = json!(m);
    }
    let mut text = match max {
        Some(m) => format!("max grid: {m}\n"),
        None => format!("{k}-grid: {}\n", grid.is_some()),
    };
    if let Some((rows, cols)) = &grid {
        let (rp, cp) = (cut_parts(rows, n), cut_parts(cols, n));
        result["row_parts"] = ranges_json(&rp);
        result["col_parts"] = ranges_json(&cp);
        text.push_str(&format!("rows {} | cols {}\n", ranges_text(&rp), ranges_text(&cp)));
    }
    let mut out = Outcome::new(result, text);
    if let Some((rows, cols)) = &grid {
        out.check("every cell holds a point", grid_cells_hit(&sigma, rows, cols))?;
    }
    if let Some(m) = max {
        out.check("no larger grid", find_grid(&sigma, m + 1).is_none())?;
    }
    Ok(out)
}

pub enum FormulaSource<'a> {
    File(&'a Path),
    Ds(usize, bool),
    Fvs(usize),
}

fn formula(ctx: &mut Ctx, src: &FormulaSource) -> CliResult<Formula> {
    Ok(match src {
        FormulaSource::File(p) => {
            let text = ctx.read("formula", p)?;
            parse_sentence(&text)?
        }
        FormulaSource::Ds(k, open) => {
            ds_formula_with(*k, if *open { Domination::Open } else { Domination::Reflexive })
        }
        FormulaSource::Fvs(k) => fvs_formula(*k),
    })
}

/// Brute force over vertex sets for the built-in sentences. The quantified
/// variables may coincide, so "k vertices" means between 1 and k distinct
/// ones (none when k = 0).
fn brute_force(g: &OrientedGraph, src: &FormulaSource) -> Option<bool> {
    let n = g.n();
    let k = match src {
        FormulaSource::File(_) => return None,
        FormulaSource::Ds(k, _) | FormulaSource::Fvs(k) => *k,
    };
    let top = k.min(n);
    // skip when the subset count gets large
    let mut count = 0u64;
    let mut binom = 1u64;
    for i in 1..=top {
        binom = binom.saturating_mul((n + 1 - i) as u64) / i as u64;
        count = count.saturating_add(binom);
    }
    if count > 200_000 {
        return None;
    }
    let holds = |set: &[usize]| match src {
        FormulaSource::Ds(_, open) => (0..n).all(|y| {
            set.iter()
                .any(|&x| g.has_arc(y, x) || (!open && y == x))
        }),
        _ => {
            let keep: Vec<usize> = (0..n).filter(|v| !set.contains(v)).collect();
            !keep.iter().any(|&u| {
                keep.iter().any(|&v| {
                    g.has_arc(u, v) && keep.iter().any(|&w| g.has_arc(v, w) && g.has_arc(w, u))
                })
            })
        }
    };
    if k == 0 {
        return Some(n == 0 && holds(&[]));
    }
    let mut set = Vec::new();
    fn walk(start: usize, n: usize, top: usize, set: &mut Vec<usize>, holds: &dyn Fn(&[usize]) -> bool) -> bool {
        if !set.is_empty() && holds(set) {
            return true;
        }
        if set.len() == top {
            return false;
        }
        for v in start..n {
            set.push(v);
            if walk(v + 1, n, top, set, holds) {
                return true;
            }
            set.pop();
        }
        false
    }
    Some(walk(0, n, top, &mut set, &holds))
}

pub fn fo_check(
    ctx: &mut Ctx,
    input: &Path,
    kind: GraphKind,
    src: &FormulaSource,
    bst: Option<&str>,
) -> CliResult<Outcome> {
    let g = ctx.graph(input, kind)?;
    let phi = formula(ctx, src)?;
    let mut s = BinaryStructure::from_graph(&g);
    let symbols = phi.symbols();
    let ordered = symbols.iter().any(|r| r == ORD);
    if ordered {
        let order = match bst {
            Some(spec) => left_to_right(&ctx.tree(&g, Some(spec))?),
            None => VertexOrder::identity(g.n()),
        };
        s.push_order(&order)?;
    }
    let value = model_check(&s, &phi)?;
    let result = json!({
        "value": value,
        "formula": phi.to_string(),
        "quantifier_depth": phi.quantifier_depth(),
        "symbols": symbols,
    });
    let mut out = Outcome::new(result, format!("{value}\n")).mode("ordered", ordered);
    if let Some(expected) = brute_force(&g, src) {
        out.check("agrees with a search over vertex sets", expected == value)?;
    }
    Ok(out)
}

pub fn fo_print(src: &FormulaSource) -> CliResult<Outcome> {
    let phi = match src {
        FormulaSource::Ds(k, open) => {
            ds_formula_with(*k, if *open { Domination::Open } else { Domination::Reflexive })
        }
        FormulaSource::Fvs(k) => fvs_formula(*k),
        FormulaSource::File(_) => return Err(CliError::Usage("fo print takes --ds or --fvs".into())),
    };
    let text = format!("{phi}\n");
    let mut out = Outcome::new(json!({"formula": phi.to_string()}), text.clone()).artifact(text);
    out.check("printed formula parses back", parse_sentence(&phi.to_string())? == phi)?;
    Ok(out)
}
