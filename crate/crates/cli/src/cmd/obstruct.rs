use std::path::Path;

use bstorder::graph::write_digraph;
use bstorder::obstructions::{decode_roles, enumerate_family};
use bstorder::permutation::write_permutation;
use bstorder::{build_f, decode_f, extend_sigma, GraphKind, ObstructionKind, OrientedGraph};
use serde_json::json;

use crate::ctx::{one_based, Ctx};
use crate::report::{CliResult, Outcome};

/// Arcs of `F_R(σ)` on the standard roles, straight from the definition:
/// X and Y are transitive in index order and `y_j -> x_i` iff `i R σ⁻¹(j)`.
fn matches_definition(r: ObstructionKind, sigma: &[usize], g: &OrientedGraph, map: &[usize]) -> bool {
    let m = sigma.len();
    if g.n() != 2 * m || map.len() != 2 * m {
        return false;
    }
    let pos = |j: usize| sigma.iter().position(|&s| s == j).expect("permutation");
    let (x, y) = (|i: usize| map[i], |j: usize| map[m + j]);
    for i in 0..m {
        for j in 0..m {
            if i < j && !(g.has_arc(x(i), x(j)) && g.has_arc(y(i), y(j))) {
                return false;
            }
            let down = r.holds(i, pos(j));
            if g.has_arc(y(j), x(i)) != down || g.has_arc(x(i), y(j)) == down {
                return false;
            }
        }
    }
    true
}

pub fn gen(ctx: &mut Ctx, kind: ObstructionKind, perm: &Path, extend: bool) -> CliResult<Outcome> {
    let sigma = ctx.perm("perm", perm)?;
    let used = if extend { extend_sigma(kind, &sigma)? } else { sigma.clone() };
    let (t, roles) = build_f(kind, &used);
    let result = json!({
        "kind": kind,
        "perm": sigma.one_line(),
        "generator_perm": used.one_line(),
        "extended": extend,
        "n": t.n(),
        "roles": {"x": one_based(&roles.x), "y": one_based(&roles.y)},
    });
    let text = write_digraph(&t);
    let mut out = Outcome::new(result, format!("F_{kind}({used}) on {} vertices\n", t.n()))
        .mode("extended", extend)
        .artifact(text);
    let standard: Vec<usize> = roles.x.iter().chain(&roles.y).copied().collect();
    out.check("arcs match the definition", matches_definition(kind, used.as_slice(), &t, &standard))?;
    if extend {
        out.check("decodes back to the input permutation", decode_f(kind, &t)? == sigma)?;
    }
    Ok(out)
}

pub fn decode(ctx: &mut Ctx, kind: ObstructionKind, input: &Path) -> CliResult<Outcome> {
    let g = ctx.graph(input, GraphKind::Tournament)?;
    let sigma = decode_f(kind, &g)?;
    let (ext, roles) = decode_roles(kind, &g)?;
    let result = json!({
        "kind": kind,
        "perm": sigma.one_line(),
        "generator_perm": ext.one_line(),
        "roles": {"x": one_based(&roles.x), "y": one_based(&roles.y)},
    });
    let mut out = Outcome::new(result, format!("{sigma}\n")).artifact(write_permutation(&sigma));
    out.check("generator is the extension of the result", extend_sigma(kind, &sigma)? == ext)?;
    let map: Vec<usize> = roles.x.iter().chain(&roles.y).copied().collect();
    let mut seen = vec![false; g.n()];
    let bijective = map.len() == g.n() && map.iter().all(|&v| !std::mem::replace(&mut seen[v], true));
    out.check("roles cover every vertex once", bijective)?;
    out.check(
        "input is the generator under the recovered roles",
        matches_definition(kind, ext.as_slice(), &g, &map),
    )?;
    Ok(out)
}

pub fn enumerate(ctx: &mut Ctx, kind: Option<ObstructionKind>, m_max: usize) -> CliResult<Outcome> {
    let kinds = kind.map_or(ObstructionKind::ALL.to_vec(), |k| vec![k]);
    let mut rows = Vec::new();
    let mut text = String::new();
    for r in kinds {
        for c in enumerate_family(r, m_max, &ctx.limits)? {
            text.push_str(&format!(
                "{r} m={} members={} distinct={} rigid={}\n",
                c.m, c.members, c.count_distinct, c.all_rigid
            ));
            rows.push(json!({
                "kind": r,
                "m": c.m,
                "members": c.members,
                "count_distinct": c.count_distinct,
                "all_rigid": c.all_rigid,
                "labelled": c.labelled.map(|v| v.to_string()),
            }));
        }
    }
    Ok(Outcome::new(json!({ "table": rows }), text).mode("m_max", m_max))
}
