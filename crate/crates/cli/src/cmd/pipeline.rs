//! Ordered adjacency matrix, rank division, disjoint parts, then one
//! extraction for the row parts and one for the column parts.

use std::path::Path;

use bstorder::matrix::{adjacency_matrix, diversity, find_rank_division, is_rank_division, RankDivisionResult};
use bstorder::obstructions::{disjointify_division, double_extraction};
use bstorder::{budget, left_to_right, Error, GraphKind, IntervalFamily, Matrix};
use serde_json::{json, Value};

use crate::cmd::extract::{extraction_json, verify_extraction};
use crate::cmd::tww::ranges_text;
use crate::ctx::{one_based, order_json, ranges_json, Ctx};
use crate::report::{verification, CliError, CliResult, Outcome};

fn stopped(mut result: Value, stage: &str, status: &str, reason: String) -> Outcome {
    result["status"] = json!(status);
    result["failed_stage"] = json!(stage);
    result["reason"] = json!(reason);
    Outcome::new(result, format!("stopped at stage {stage}: {status} ({reason})\n"))
}

pub fn run(
    ctx: &mut Ctx,
    input: &Path,
    kind: GraphKind,
    bst: Option<&str>,
    k: usize,
    enforce_budget: bool,
) -> CliResult<Outcome> {
    let g = ctx.graph(input, kind)?;
    let t = ctx.tree(&g, bst)?;
    let order = left_to_right(&t);
    let m = adjacency_matrix(&g, &order);
    // parts needed on each side of the division before extraction
    let per_side = if enforce_budget {
        usize::try_from(budget(k)).unwrap_or(usize::MAX)
    } else {
        k.max(1)
    };
    let target = per_side.saturating_mul(2);
    let mut result = json!({
        "k": k,
        "division_k": target,
        "order": order_json(&order),
    });
    let base = |o: Outcome| {
        o.mode("enforce_budget", enforce_budget)
            .mode("k", k)
    };

    let (division, heuristic) = match find_rank_division(&m, target, &ctx.limits) {
        RankDivisionResult::Found { division, heuristic } => (division, heuristic),
        RankDivisionResult::NotFound => {
            let why = format!("no rank-{target} division exists");
            return Ok(base(stopped(result, "rank-division", "not-found", why)).mode("search", "exact"));
        }
        RankDivisionResult::Unknown => {
            let why = format!("heuristic search found no rank-{target} division");
            return Ok(base(stopped(result, "rank-division", "unknown", why)).mode("search", "heuristic"));
        }
    };
    let (rows, cols) = (division.row_parts(&m), division.col_parts(&m));
    result["rank_division"] = json!({
        "row_parts": ranges_json(&rows),
        "col_parts": ranges_json(&cols),
    });
    let mut checks = Vec::new();
    let mut check = |name: &str, ok: bool| -> CliResult<()> {
        if !ok {
            return Err(verification(format!("check failed: {name}")));
        }
        checks.push(name.to_string());
        Ok(())
    };
    check(
        "rank division re-verified",
        division.validate(&m).is_ok() && is_rank_division(&m, &division, target),
    )?;

    let vertices = |rs: &[std::ops::Range<usize>]| -> Vec<Vec<usize>> {
        rs.iter().map(|r| order.as_slice()[r.clone()].to_vec()).collect()
    };
    let (row_sets, col_sets) = (vertices(&rows), vertices(&cols));
    let kept = disjointify_division(&order, &row_sets, &col_sets)
        .map_err(|e| verification(format!("division parts could not be separated: {e}")))?;
    let pick = |sets: &[Vec<usize>], idx: &[usize]| -> Vec<Vec<usize>> {
        idx.iter().map(|&i| sets[i].clone()).collect()
    };
    let (a_parts, b_parts) = (pick(&row_sets, &kept.rows), pick(&col_sets, &kept.cols));
    let mut seen = vec![false; g.n()];
    let disjoint = a_parts
        .iter()
        .chain(&b_parts)
        .flatten()
        .all(|&v| !std::mem::replace(&mut seen[v], true));
    check("kept row and column parts are disjoint", disjoint)?;
    result["disjoint"] = json!({
        "row_parts": one_based(&kept.rows),
        "col_parts": one_based(&kept.cols),
        "rows_first": kept.rows_first,
    });

    let (fa, fb) = (IntervalFamily::new(a_parts)?, IntervalFamily::new(b_parts)?);
    let (ea, eb) = match double_extraction(&g, &t, &fa, &fb, k, enforce_budget, &ctx.limits) {
        Ok(pair) => pair,
        Err(e @ Error::SizeLimit { .. }) => return Err(e.into()),
        Err(e) => {
            let why = crate::report::describe(&e);
            return Ok(base(stopped(result, "extraction", "failed", why)));
        }
    };
    result["extraction"] = json!({
        "rows": extraction_json(&ea, k),
        "cols": extraction_json(&eb, k),
    });

    // distinct rows and columns of every cell between selected parts
    let cells: Vec<Vec<[usize; 2]>> = ea
        .family
        .parts()
        .iter()
        .map(|a| {
            eb.family
                .parts()
                .iter()
                .map(|b| {
                    let sub = Matrix::from_fn(a.len(), b.len(), |r, c| g.has_arc(a[r], b[c]));
                    let (dr, dc) = diversity(&sub);
                    [dr, dc]
                })
                .collect()
        })
        .collect();
    result["cells"] = json!(cells);
    let complete = ea.selected.len() >= k && eb.selected.len() >= k;
    result["status"] = json!(if complete { "complete" } else { "partial" });

    let text = format!(
        "rank-{target} division: rows {} | cols {}\nselected {} row parts and {} column parts (k = {k})\nstatus: {}\n",
        ranges_text(&rows),
        ranges_text(&cols),
        ea.selected.len(),
        eb.selected.len(),
        if complete { "complete" } else { "partial" }
    );
    let mut out = base(Outcome::new(result, text)).mode("search", if heuristic { "heuristic" } else { "exact" });
    out.checks = checks;
    verify_extraction(&g, &fa, &ea, "rows: ", &mut out)?;
    verify_extraction(&g, &fb, &eb, "cols: ", &mut out)?;
    if enforce_budget && !complete {
        return Err(CliError::Verification(
            "budget was enforced but an extraction returned fewer than k parts".into(),
        ));
    }
    Ok(out)
}
