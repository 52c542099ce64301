use std::path::Path;

use bstorder::chain::{parse_family, write_family, Block, ExtractionTrace};
use bstorder::{
    budget, chain_quasi_order, extract_nonoverlapping, left_to_right, BstTree, ChainQuasiOrder,
    Extraction, GraphKind, IntervalFamily, OrientedGraph,
};
use serde_json::{json, Value};

use crate::ctx::{one_based, Ctx};
use crate::report::{CliResult, Outcome};

/// `--family` takes a family file, `singletons`, or `chunks:<size>` (runs
/// of consecutive vertices of the BST order).
pub fn family(ctx: &mut Ctx, spec: &str, t: &BstTree) -> CliResult<IntervalFamily> {
    if spec == "singletons" {
        return Ok(IntervalFamily::singletons(t.n()));
    }
    if let Some(size) = spec.strip_prefix("chunks:") {
        let size: usize = size
            .parse()
            .ok()
            .filter(|&s| s >= 1)
            .ok_or_else(|| crate::report::CliError::Usage(format!("bad chunk size `{size}`")))?;
        return Ok(IntervalFamily::chunks(&left_to_right(t), size));
    }
    let text = ctx.read("family", Path::new(spec))?;
    Ok(parse_family(&text)?)
}

fn positions(range: (usize, usize)) -> Value {
    if range.0 >= range.1 {
        Value::Null
    } else {
        json!([range.0 + 1, range.1])
    }
}

fn block_json(b: &Block) -> Value {
    json!({
        "left": positions(b.left),
        "right": positions(b.right),
        "left_part": b.left_part.map(|i| i + 1),
        "right_part": b.right_part.map(|i| i + 1),
    })
}

pub fn trace_json(t: &ExtractionTrace) -> Value {
    json!({
        "arity": t.arity,
        "branch": one_based(&t.branch),
        "steps": t.steps,
        "weights": t.weights,
        "indices": one_based(&t.indices),
        "blocks": t.blocks.iter().map(block_json).collect::<Vec<_>>(),
        "side": t.side,
        "anti_complete": one_based(&t.anti_complete),
        "removed": one_based(&t.removed),
    })
}

pub fn quasi_order_json(q: &ChainQuasiOrder) -> Value {
    json!({
        "chain": one_based(q.chain()),
        "orientation": q.orientation(),
        "classes": q.classes().iter().map(|c| one_based(c)).collect::<Vec<_>>(),
    })
}

pub fn extraction_json(e: &Extraction, k: usize) -> Value {
    json!({
        "k": k,
        "budget": budget(k),
        "selected": one_based(&e.selected),
        "parts": e.family.parts().iter().map(|p| one_based(p)).collect::<Vec<_>>(),
        "meets_k": e.selected.len() >= k,
        "order": quasi_order_json(&e.order),
        "trace": trace_json(&e.trace),
    })
}

/// Re-checks an extraction without trusting its internals: the parts come
/// from the family, the quasi-order is rebuilt from the chain, and every
/// pair of parts is compared class by class.
pub fn verify_extraction(
    g: &OrientedGraph,
    input: &IntervalFamily,
    e: &Extraction,
    label: &str,
    out: &mut Outcome,
) -> CliResult<()> {
    let from_input = e.selected.len() == e.family.len()
        && e.selected
            .iter()
            .zip(e.family.parts())
            .all(|(&i, p)| input.parts().get(i) == Some(p));
    out.check(format!("{label}parts are members of the input family"), from_input)?;
    let q = chain_quasi_order(g, e.chain(), e.orientation())?;
    out.check(
        format!("{label}quasi-order rebuilt from the chain"),
        q.ranks() == e.order.ranks(),
    )?;
    let span = |p: &[usize]| {
        let ranks = p.iter().map(|&v| q.rank(v));
        (ranks.clone().min(), ranks.max())
    };
    let parts = e.family.parts();
    let mut separated = true;
    for (i, x) in parts.iter().enumerate() {
        for y in &parts[i + 1..] {
            let le = x.iter().any(|&a| y.iter().any(|&b| q.rank(a) <= q.rank(b)));
            let ge = x.iter().any(|&a| y.iter().any(|&b| q.rank(a) >= q.rank(b)));
            separated &= !(le && ge);
            let ((xl, xh), (yl, yh)) = (span(x), span(y));
            separated &= xh < yl || yh < xl;
        }
    }
    out.check(format!("{label}parts pairwise non-overlapping"), separated)?;
    out.check(
        format!("{label}trace invariants"),
        e.trace.check().is_ok(),
    )?;
    Ok(())
}

pub fn run(
    ctx: &mut Ctx,
    input: &Path,
    kind: GraphKind,
    bst: Option<&str>,
    family_spec: &str,
    k: usize,
    enforce_budget: bool,
) -> CliResult<Outcome> {
    let g = ctx.graph(input, kind)?;
    let t = ctx.tree(&g, bst)?;
    let fam = family(ctx, family_spec, &t)?;
    let e = extract_nonoverlapping(&g, &t, &fam, k, enforce_budget, &ctx.limits)?;
    let mut result = extraction_json(&e, k);
    result["family_size"] = json!(fam.len());
    let text = format!(
        "selected {} of {} parts (k = {k}, budget(k) = {})\nchain ({}): {}\n",
        e.selected.len(),
        fam.len(),
        budget(k),
        e.orientation(),
        one_based(e.chain())
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    let mut out = Outcome::new(result, text)
        .mode("enforce_budget", enforce_budget)
        .artifact(write_family(&e.family));
    verify_extraction(&g, &fam, &e, "", &mut out)?;
    if enforce_budget {
        out.check("at least k parts", e.selected.len() >= k)?;
    }
    Ok(out)
}
