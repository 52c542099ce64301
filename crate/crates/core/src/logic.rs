//! First-order formulas over binary signatures, a naive model checker,
//! interpretations, and the order-dependence classifier for bi-ordered
//! tournaments.

use std::fmt;

use lexpr::Value;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitMatrix;
use crate::graph::{Tournament, VertexOrder};
use crate::obstructions::ObstructionKind;
use crate::permutation::{order_type, Permutation};
use crate::structure::{is_strict_total_order, BinaryStructure, ARC};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Rel(String, String, String),
    Eq(String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
}

pub fn rel(name: &str, x: &str, y: &str) -> Formula {
    Formula::Rel(name.into(), x.into(), y.into())
}

pub fn arc(x: &str, y: &str) -> Formula {
    rel(ARC, x, y)
}

pub fn eq(x: &str, y: &str) -> Formula {
    Formula::Eq(x.into(), y.into())
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(fs: impl IntoIterator<Item = Formula>) -> Formula {
    Formula::And(fs.into_iter().collect())
}

pub fn or(fs: impl IntoIterator<Item = Formula>) -> Formula {
    Formula::Or(fs.into_iter().collect())
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    or([not(a), b])
}

pub fn exists<S: Into<String>>(vars: impl IntoIterator<Item = S>, f: Formula) -> Formula {
    Formula::Exists(vars.into_iter().map(Into::into).collect(), Box::new(f))
}

pub fn forall<S: Into<String>>(vars: impl IntoIterator<Item = S>, f: Formula) -> Formula {
    Formula::Forall(vars.into_iter().map(Into::into).collect(), Box::new(f))
}

impl Formula {
    /// Free variables in order of first occurrence.
    pub fn free_variables(&self) -> Vec<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            let mut see = |v: &String, bound: &Vec<String>| {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            };
            match f {
                Formula::True | Formula::False => {}
                Formula::Rel(_, x, y) | Formula::Eq(x, y) => {
                    see(x, bound);
                    see(y, bound);
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| walk(g, bound, out)),
                Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                    let depth = bound.len();
                    bound.extend(vs.iter().cloned());
                    walk(g, bound, out);
                    bound.truncate(depth);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => 0,
            Formula::Not(g) => g.quantifier_depth(),
            Formula::And(gs) | Formula::Or(gs) => {
                gs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => vs.len() + g.quantifier_depth(),
        }
    }

    /// Relation symbols used, excluding equality.
    pub fn symbols(&self) -> Vec<String> {
        fn walk(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::Rel(r, ..) if !out.contains(r) => out.push(r.clone()),
                Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => walk(g, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| walk(g, out)),
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, gs: &[Formula]| {
            write!(f, "({head}")?;
            for g in gs {
                write!(f, " {g}")?;
            }
            f.write_str(")")
        };
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Rel(r, x, y) => write!(f, "({r} {x} {y})"),
            Formula::Eq(x, y) => write!(f, "(= {x} {y})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) => list(f, "and", gs),
            Formula::Or(gs) => list(f, "or", gs),
            Formula::Exists(vs, g) => write!(f, "(exists ({}) {g})", vs.join(" ")),
            Formula::Forall(vs, g) => write!(f, "(forall ({}) {g})", vs.join(" ")),
        }
    }
}

const KEYWORDS: [&str; 9] = [
    "and", "or", "not", "implies", "exists", "forall", "true", "false", "=",
];

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(format!("formula: {}", msg.into()))
}

fn symbol(v: &Value) -> Result<&str> {
    v.as_symbol()
        .ok_or_else(|| bad(format!("expected a symbol, found `{v}`")))
}

fn from_value(v: &Value, scope: &mut Vec<String>) -> Result<Formula> {
    if let Some(s) = v.as_symbol() {
        return match s {
            "true" => Ok(Formula::True),
            "false" => Ok(Formula::False),
            _ => Err(bad(format!("bare symbol `{s}`"))),
        };
    }
    let items: Vec<&Value> = v
        .list_iter()
        .ok_or_else(|| bad(format!("expected a list, found `{v}`")))?
        .collect();
    let (head, args) = items.split_first().ok_or_else(|| bad("empty list"))?;
    let head = symbol(head)?;
    let var = |a: &Value, scope: &Vec<String>| -> Result<String> {
        let name = symbol(a)?;
        if scope.iter().any(|s| s == name) {
            Ok(name.to_string())
        } else {
            Err(Error::FreeVariable(name.to_string()))
        }
    };
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(bad(format!(
                "`{head}` takes {n} arguments, got {}",
                args.len()
            )))
        }
    };
    match head {
        "not" => {
            arity(1)?;
            Ok(not(from_value(args[0], scope)?))
        }
        "and" | "or" => {
            let gs = args
                .iter()
                .map(|a| from_value(a, scope))
                .collect::<Result<Vec<_>>>()?;
            Ok(if head == "and" {
                Formula::And(gs)
            } else {
                Formula::Or(gs)
            })
        }
        "implies" => {
            arity(2)?;
            Ok(implies(
                from_value(args[0], scope)?,
                from_value(args[1], scope)?,
            ))
        }
        "exists" | "forall" => {
            arity(2)?;
            let vars = args[0]
                .list_iter()
                .ok_or_else(|| bad("quantifier needs a variable list"))?
                .map(|a| symbol(a).map(str::to_string))
                .collect::<Result<Vec<_>>>()?;
            if let Some(k) = vars.iter().find(|v| KEYWORDS.contains(&v.as_str())) {
                return Err(bad(format!("`{k}` cannot be a variable")));
            }
            let depth = scope.len();
            scope.extend(vars.iter().cloned());
            let body = from_value(args[1], scope);
            scope.truncate(depth);
            let body = Box::new(body?);
            Ok(if head == "exists" {
                Formula::Exists(vars, body)
            } else {
                Formula::Forall(vars, body)
            })
        }
        "=" => {
            arity(2)?;
            Ok(Formula::Eq(var(args[0], scope)?, var(args[1], scope)?))
        }
        r if KEYWORDS.contains(&r) => Err(bad(format!("misplaced `{r}`"))),
        r => {
            arity(2)?;
            Ok(Formula::Rel(
                r.to_string(),
                var(args[0], scope)?,
                var(args[1], scope)?,
            ))
        }
    }
}

/// Parses an s-expression with the given free variables; any other
/// unbound variable is rejected.
pub fn parse_formula(text: &str, free: &[&str]) -> Result<Formula> {
    let v = lexpr::from_str(text).map_err(|e| bad(e.to_string()))?;
    from_value(&v, &mut free.iter().map(|s| s.to_string()).collect())
}

pub fn parse_sentence(text: &str) -> Result<Formula> {
    parse_formula(text, &[])
}

/// Formula with variables resolved to slots and symbols to relation indices.
#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Rel(usize, usize, usize),
    Eq(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Exists(Vec<usize>, Box<Node>),
    Forall(Vec<usize>, Box<Node>),
}

struct Compiler<'a> {
    s: &'a BinaryStructure,
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl Compiler<'_> {
    fn lookup(&self, v: &str) -> Result<usize> {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|&(_, slot)| slot)
            .ok_or_else(|| Error::FreeVariable(v.to_string()))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Rel(r, x, y) => {
                let r = self
                    .s
                    .index_of(r)
                    .ok_or_else(|| Error::UnknownSymbol(r.clone()))?;
                Node::Rel(r, self.lookup(x)?, self.lookup(y)?)
            }
            Formula::Eq(x, y) => Node::Eq(self.lookup(x)?, self.lookup(y)?),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::And(gs) => {
                Node::And(gs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?)
            }
            Formula::Or(gs) => Node::Or(gs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?),
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                let depth = self.scope.len();
                let slots: Vec<usize> = (self.slots..self.slots + vs.len()).collect();
                self.slots += vs.len();
                self.scope
                    .extend(vs.iter().cloned().zip(slots.iter().copied()));
                let body = self.compile(g);
                self.scope.truncate(depth);
                let body = Box::new(body?);
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(slots, body)
                } else {
                    Node::Forall(slots, body)
                }
            }
        })
    }
}

/// A formula prepared for repeated evaluation on one structure.
pub struct Compiled<'a> {
    s: &'a BinaryStructure,
    root: Node,
    slots: usize,
    free: usize,
}

impl<'a> Compiled<'a> {
    /// `free` are the variables bound by [`Compiled::eval`], in order.
    pub fn new(s: &'a BinaryStructure, f: &Formula, free: &[&str]) -> Result<Self> {
        let mut c = Compiler {
            s,
            scope: free
                .iter()
                .enumerate()
                .map(|(i, v)| (v.to_string(), i))
                .collect(),
            slots: free.len(),
        };
        let root = c.compile(f)?;
        Ok(Compiled {
            s,
            root,
            slots: c.slots,
            free: free.len(),
        })
    }

    pub fn eval(&self, assignment: &[usize]) -> bool {
        assert_eq!(assignment.len(), self.free, "one value per free variable");
        let mut env = vec![0; self.slots];
        env[..self.free].copy_from_slice(assignment);
        self.eval_node(&self.root, &mut env)
    }

    /// Like [`Compiled::eval`], but a leading quantifier is split across
    /// worker threads on its first variable.
    pub fn eval_par(&self, assignment: &[usize]) -> bool {
        let (slots, body, is_exists) = match &self.root {
            Node::Exists(vs, b) => (vs, b, true),
            Node::Forall(vs, b) => (vs, b, false),
            _ => return self.eval(assignment),
        };
        let Some((&first, rest)) = slots.split_first() else {
            return self.eval(assignment);
        };
        let run = |v: usize| {
            let mut env = vec![0; self.slots];
            env[..self.free].copy_from_slice(assignment);
            env[first] = v;
            self.quantify(rest, body, is_exists, &mut env)
        };
        if is_exists {
            (0..self.s.n()).into_par_iter().any(run)
        } else {
            (0..self.s.n()).into_par_iter().all(run)
        }
    }

    fn quantify(&self, slots: &[usize], body: &Node, is_exists: bool, env: &mut [usize]) -> bool {
        let Some((&slot, rest)) = slots.split_first() else {
            return self.eval_node(body, env);
        };
        for v in 0..self.s.n() {
            env[slot] = v;
            if self.quantify(rest, body, is_exists, env) == is_exists {
                return is_exists;
            }
        }
        !is_exists
    }

    fn eval_node(&self, node: &Node, env: &mut [usize]) -> bool {
        match node {
            Node::Const(b) => *b,
            Node::Rel(r, x, y) => self.s.holds(*r, env[*x], env[*y]),
            Node::Eq(x, y) => env[*x] == env[*y],
            Node::Not(g) => !self.eval_node(g, env),
            Node::And(gs) => gs.iter().all(|g| self.eval_node(g, env)),
            Node::Or(gs) => gs.iter().any(|g| self.eval_node(g, env)),
            Node::Exists(vs, g) => self.quantify(vs, g, true, env),
            Node::Forall(vs, g) => self.quantify(vs, g, false, env),
        }
    }
}

/// `s ⊨ φ` by exhaustive evaluation.
pub fn model_check(s: &BinaryStructure, phi: &Formula) -> Result<bool> {
    if let Some(v) = phi.free_variables().into_iter().next() {
        return Err(Error::FreeVariable(v));
    }
    Ok(Compiled::new(s, phi, &[])?.eval_par(&[]))
}

/// Whether a dominator may count itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domination {
    /// Every vertex dominates itself.
    #[default]
    Reflexive,
    Open,
}

fn xs(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}

/// Some `k` vertices dominate every vertex, where `x` dominates `y` if `y -> x`.
pub fn ds_formula(k: usize) -> Formula {
    ds_formula_with(k, Domination::Reflexive)
}

pub fn ds_formula_with(k: usize, mode: Domination) -> Formula {
    let vars = xs(k);
    let hit = vars.iter().flat_map(|x| {
        let a = arc("y", x);
        match mode {
            Domination::Reflexive => vec![a, eq("y", x)],
            Domination::Open => vec![a],
        }
    });
    exists(vars.clone(), forall(["y"], or(hit)))
}

/// Removing some `k` vertices leaves no directed triangle.
pub fn fvs_formula(k: usize) -> Formula {
    let vars = xs(k);
    let hit = ["u", "v", "w"]
        .into_iter()
        .flat_map(|t| vars.iter().map(move |x| eq(t, x)));
    let triangle = and([arc("u", "v"), arc("v", "w"), arc("w", "u")]);
    exists(
        vars.clone(),
        forall(["u", "v", "w"], or(hit.chain([not(triangle)]))),
    )
}

/// A unary domain formula and binary output relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    pub domain_var: String,
    pub domain: Formula,
    pub relations: Vec<OutputRelation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputRelation {
    pub name: String,
    pub vars: (String, String),
    pub formula: Formula,
}

impl Interpretation {
    pub fn new(domain_var: &str, domain: Formula) -> Self {
        Interpretation {
            domain_var: domain_var.into(),
            domain,
            relations: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, x: &str, y: &str, formula: Formula) -> Self {
        self.relations.push(OutputRelation {
            name: name.into(),
            vars: (x.into(), y.into()),
            formula,
        });
        self
    }

    /// Each relation of `s` copied unchanged, on the full domain.
    pub fn identity(s: &BinaryStructure) -> Self {
        s.names()
            .iter()
            .fold(Interpretation::new("x", Formula::True), |i, r| {
                i.with(r, "x", "y", rel(r, "x", "y"))
            })
    }
}

/// The output vertices, listed in increasing input id, with the output structure.
pub fn apply_interpretation_with_domain(
    phi: &Interpretation,
    s: &BinaryStructure,
) -> Result<(Vec<usize>, BinaryStructure)> {
    let dom = Compiled::new(s, &phi.domain, &[phi.domain_var.as_str()])?;
    let rels = phi
        .relations
        .iter()
        .map(|r| Compiled::new(s, &r.formula, &[r.vars.0.as_str(), r.vars.1.as_str()]))
        .collect::<Result<Vec<_>>>()?;
    let keep: Vec<usize> = (0..s.n())
        .into_par_iter()
        .filter(|&v| dom.eval(&[v]))
        .collect();
    let m = keep.len();
    let mut out = BinaryStructure::new(m);
    for (r, c) in phi.relations.iter().zip(&rels) {
        let rows: Vec<Vec<bool>> = (0..m)
            .into_par_iter()
            .map(|i| (0..m).map(|j| c.eval(&[keep[i], keep[j]])).collect())
            .collect();
        out.push(r.name.clone(), BitMatrix::from_fn(m, |i, j| rows[i][j]))?;
    }
    Ok((keep, out))
}

pub fn apply_interpretation(phi: &Interpretation, s: &BinaryStructure) -> Result<BinaryStructure> {
    apply_interpretation_with_domain(phi, s).map(|(_, out)| out)
}

/// Pairs at distance at most 2 in the symmetric relation `rel`.
pub fn square_interpretation(name: &str) -> Interpretation {
    let step = |a: &str, b: &str| rel(name, a, b);
    Interpretation::new("x", Formula::True).with(
        name,
        "x",
        "y",
        and([
            not(eq("x", "y")),
            or([
                step("x", "y"),
                exists(["z"], and([step("x", "z"), step("z", "y")])),
            ]),
        ]),
    )
}

/// Formulas in one free variable `v` over `arc`, naming the anchors of an
/// extended obstruction tournament.
struct Anchors {
    y_top: Formula,
    in_x: Formula,
}

/// Renames the free variable `v` of an anchor formula.
fn at(f: &Formula, v: &str) -> Formula {
    fn go(f: &Formula, v: &str) -> Formula {
        let r = |x: &String| if x == "v" { v.to_string() } else { x.clone() };
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Rel(s, x, y) => Formula::Rel(s.clone(), r(x), r(y)),
            Formula::Eq(x, y) => Formula::Eq(r(x), r(y)),
            Formula::Not(g) => not(go(g, v)),
            Formula::And(gs) => and(gs.iter().map(|g| go(g, v))),
            Formula::Or(gs) => or(gs.iter().map(|g| go(g, v))),
            Formula::Exists(vs, _) | Formula::Forall(vs, _) if vs.iter().any(|x| x == "v") => {
                f.clone()
            }
            Formula::Exists(vs, _) | Formula::Forall(vs, _) if vs.iter().any(|x| x == v) => {
                panic!("substituting `{v}` would be captured")
            }
            Formula::Exists(vs, g) => exists(vs.clone(), go(g, v)),
            Formula::Forall(vs, g) => forall(vs.clone(), go(g, v)),
        }
    }
    go(f, v)
}

fn anchors(r: ObstructionKind) -> Anchors {
    // exactly one out-neighbour / in-neighbour
    let out_deg1 = exists(
        ["_a"],
        and([
            arc("v", "_a"),
            forall(["_b"], implies(arc("v", "_b"), eq("_b", "_a"))),
        ]),
    );
    let in_deg1 = exists(
        ["_c"],
        and([
            arc("_c", "v"),
            forall(["_d"], implies(arc("_d", "v"), eq("_d", "_c"))),
        ]),
    );
    match r {
        ObstructionKind::Eq => {
            let y_top = out_deg1;
            // X = N^-(x_top) + x_top - y_top, with x_top the out-neighbour of y_top
            let in_x = exists(
                ["_t", "_w"],
                and([
                    arc("_t", "_w"),
                    at(&y_top, "_t"),
                    or([eq("v", "_w"), and([arc("v", "_w"), not(eq("v", "_t"))])]),
                ]),
            );
            Anchors { y_top, in_x }
        }
        ObstructionKind::Le => {
            let y_top = out_deg1;
            // X = N^+(x_1) + x_1, with x_1 the out-neighbour of y_top
            let in_x = exists(
                ["_t", "_w"],
                and([
                    arc("_t", "_w"),
                    at(&y_top, "_t"),
                    or([eq("v", "_w"), arc("_w", "v")]),
                ]),
            );
            Anchors { y_top, in_x }
        }
        ObstructionKind::Ge => {
            // x_1 has in-degree 1 and beats any other such vertex
            let x1 = and([
                in_deg1.clone(),
                forall(
                    ["_e"],
                    implies(
                        and([at(&in_deg1, "_e"), not(eq("_e", "v"))]),
                        arc("v", "_e"),
                    ),
                ),
            ]);
            let y_top = exists(["_w"], and([arc("v", "_w"), at(&x1, "_w")]));
            let in_x = exists(["_t"], and([arc("_t", "v"), at(&y_top, "_t")]));
            Anchors { y_top, in_x }
        }
    }
}

/// The decoding interpretation: on an extended obstruction tournament it
/// yields the bi-order of the original permutation, with `lt1` the order
/// induced through `X` and `lt2` the arc order inside `Y`.
pub fn decoding_interpretation(r: ObstructionKind) -> Interpretation {
    let Anchors { y_top, in_x } = anchors(r);
    let domain = and([not(at(&in_x, "v")), not(at(&y_top, "v"))]);
    let lt1 = match r {
        // compare the matched X vertices
        ObstructionKind::Eq => exists(
            ["_p", "_q"],
            and([
                arc("x", "_p"),
                arc("y", "_q"),
                arc("_p", "_q"),
                at(&in_x, "_p"),
                at(&in_x, "_q"),
            ]),
        ),
        // out-neighbourhoods in X are nested: larger means later
        ObstructionKind::Le => exists(
            ["_p"],
            and([arc("y", "_p"), not(arc("x", "_p")), at(&in_x, "_p")]),
        ),
        // nested the other way
        ObstructionKind::Ge => exists(
            ["_p"],
            and([arc("x", "_p"), not(arc("y", "_p")), at(&in_x, "_p")]),
        ),
    };
    Interpretation::new("v", domain)
        .with("lt1", "x", "y", lt1)
        .with("lt2", "x", "y", arc("x", "y"))
}

/// Reads `σ` off a structure with strict total orders `lt1`, `lt2`: the
/// `i`-th element under `lt1` has rank `σ(i)` under `lt2`.
pub fn biorder_permutation(s: &BinaryStructure) -> Result<Permutation> {
    let get = |name: &str| -> Result<&BitMatrix> {
        let r = s
            .relation(name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        if !is_strict_total_order(r) {
            return Err(Error::Invalid(format!(
                "`{name}` is not a strict total order"
            )));
        }
        Ok(r)
    };
    let (lt1, lt2) = (get("lt1")?, get("lt2")?);
    let n = s.n();
    // rank = number of predecessors
    let rank = |r: &BitMatrix, v: usize| (0..n).filter(|&u| r.get(u, v)).count();
    let mut by1 = vec![0; n];
    for v in 0..n {
        by1[rank(lt1, v)] = v;
    }
    Permutation::new(by1.iter().map(|&v| rank(lt2, v)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderOutcome {
    Order1,
    ReverseOrder1,
    Order2,
    ReverseOrder2,
}

impl OrderOutcome {
    pub const ALL: [OrderOutcome; 4] = [
        OrderOutcome::Order1,
        OrderOutcome::ReverseOrder1,
        OrderOutcome::Order2,
        OrderOutcome::ReverseOrder2,
    ];

    /// Arc `u -> v` predicted from the two order types of `(u, v)`.
    pub fn predicts(self, t1: i8, t2: i8) -> bool {
        match self {
            OrderOutcome::Order1 => t1 == 1,
            OrderOutcome::ReverseOrder1 => t1 == -1,
            OrderOutcome::Order2 => t2 == 1,
            OrderOutcome::ReverseOrder2 => t2 == -1,
        }
    }
}

/// `table[t1 + 1][t2 + 1]` is the arc value for pairs of those order types,
/// `None` where no pair has them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderDependenceWitness {
    pub table: [[Option<bool>; 3]; 3],
    pub outcome: OrderOutcome,
}

impl OrderDependenceWitness {
    pub fn eta(&self, t1: i8, t2: i8) -> Option<bool> {
        self.table[(t1 + 1) as usize][(t2 + 1) as usize]
    }
}

/// Whether arc direction is a function of the two order types; if so the
/// tournament is transitive along one of the orders or its reverse.
pub fn classify_biordered_tournament(
    t: &Tournament,
    o1: &VertexOrder,
    o2: &VertexOrder,
) -> Option<OrderDependenceWitness> {
    let n = t.n();
    assert!(
        o1.len() == n && o2.len() == n,
        "orders must cover the tournament"
    );
    let types = |u: usize, v: usize| {
        (
            order_type(o1.rank(u), o1.rank(v)),
            order_type(o2.rank(u), o2.rank(v)),
        )
    };
    let mut table = [[None; 3]; 3];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let (t1, t2) = types(u, v);
            let cell = &mut table[(t1 + 1) as usize][(t2 + 1) as usize];
            let a = t.has_arc(u, v);
            match *cell {
                None => *cell = Some(a),
                Some(b) if b != a => return None,
                _ => {}
            }
        }
    }
    let consistent = |o: OrderOutcome| {
        (0..3).all(|i| {
            (0..3).all(|j| table[i][j].is_none_or(|a| a == o.predicts(i as i8 - 1, j as i8 - 1)))
        })
    };
    let outcome = OrderOutcome::ALL
        .into_iter()
        .find(|&o| consistent(o))
        .expect("an antisymmetric table on types ±1 always matches one outcome");
    Some(OrderDependenceWitness { table, outcome })
}
