//! Text and JSON rendering of integration results.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::arith::FieldOps;
use crate::engine::{Ctx, DilogTerm, IntegralExpr, RootSum};
use crate::logsym::{LVar, LogPoly};
use crate::places::Place;
use crate::tensor2::{Sym, Tensor2};
use crate::tower::{Elem, MonomialKind, Tower};

use super::render::{render_elem, render_qpoly};

pub const SCHEMA: &str = "polyint-1";

type AtomMono = BTreeMap<LVar, u32>;

/// Splits each monomial into its tower-generator part, folded into the
/// coefficient, and its registry-atom part.
fn group_by_atoms(p: &LogPoly) -> BTreeMap<AtomMono, Elem> {
    let mut out: BTreeMap<AtomMono, Elem> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut coeff = c.clone();
        let mut atoms = AtomMono::new();
        for (v, e) in m {
            match v {
                LVar::Gen(i) => coeff = coeff.mul(&Elem::gen(*i).pow(*e as i64)),
                LVar::Atom(_) => {
                    atoms.insert(*v, *e);
                }
            }
        }
        let slot = out.entry(atoms).or_insert_with(|| Elem::int(0));
        *slot = slot.add(&coeff);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn parenthesize(s: String) -> String {
    if s.contains(' ') || s.contains('/') {
        format!("({s})")
    } else {
        s
    }
}

/// Renders a log polynomial; pure tower elements render as by `render_elem`.
pub fn render_logpoly(ctx: &Ctx, p: &LogPoly) -> String {
    let groups = group_by_atoms(p);
    if groups.is_empty() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (atoms, c) in &groups {
        let c_str = render_elem(&ctx.tower, c);
        if atoms.is_empty() {
            parts.push(c_str);
            continue;
        }
        let fs: Vec<String> = atoms
            .iter()
            .map(|(v, e)| {
                let n = ctx.reg.var_name(&ctx.tower, *v);
                if *e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        let fs = fs.join("*");
        parts.push(match c_str.as_str() {
            "1" => fs,
            "-1" => format!("-{fs}"),
            _ => format!("{}*{fs}", parenthesize(c_str)),
        });
    }
    join_sum(&parts)
}

fn join_sum(parts: &[String]) -> String {
    let mut s = String::new();
    for p in parts {
        if s.is_empty() {
            s.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(p);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn render_term(t: &Tower, term: &DilogTerm) -> String {
    format!("dilog_term(d={}, h={}, k={})", term.d, render_elem(t, &term.h), term.k)
}

pub fn render_root_sum(t: &Tower, r: &RootSum) -> String {
    let name = &r.field.name;
    format!(
        "root_sum({name}: {} = 0, ({})*log({}))",
        render_qpoly(&r.field.minpoly, name),
        r.coeff,
        render_elem(t, &r.arg)
    )
}

/// One-line text form: elementary part, root sums and dilogarithmic terms
/// joined by `+`.
pub fn render_integral(ctx: &Ctx, e: &IntegralExpr) -> String {
    let mut parts = Vec::new();
    if !e.elementary.is_zero() || (e.root_sums.is_empty() && e.terms.is_empty()) {
        parts.push(render_logpoly(ctx, &e.elementary));
    }
    parts.extend(e.root_sums.iter().map(|r| render_root_sum(&ctx.tower, r)));
    parts.extend(e.terms.iter().map(|t| render_term(&ctx.tower, t)));
    parts.join(" + ")
}

/// The argument of a log variable, when it is the logarithm of an element.
fn log_arg(ctx: &Ctx, v: LVar) -> Option<Elem> {
    match v {
        LVar::Atom(a) => Some(ctx.reg.atom_value(a)),
        LVar::Gen(i) => match &ctx.tower.gen(i).kind {
            MonomialKind::Log(u) => Some(u.clone()),
            _ => None,
        },
    }
}

/// JSON object for an integration result. Linear logarithmic terms with
/// constant coefficients are listed under `logs`; the rest of the
/// elementary part is rendered as text under `elementary`.
pub fn integral_json(ctx: &Ctx, status: &str, e: &IntegralExpr) -> Value {
    let mut rest = LogPoly::zero();
    let mut logs = Vec::new();
    for (m, c) in e.elementary.terms() {
        let single = (m.len() == 1).then(|| m.iter().next().unwrap()).filter(|(_, e)| **e == 1);
        match (single.and_then(|(v, _)| log_arg(ctx, *v)), c.as_constant()) {
            (Some(arg), Some(k)) => {
                logs.push(json!({"coeff": k.to_string(), "arg": render_elem(&ctx.tower, &arg)}));
            }
            _ => rest.add_term(m.clone(), c.clone()),
        }
    }
    let terms: Vec<Value> = e
        .terms
        .iter()
        .map(|t| json!({"d": t.d.to_string(), "h": render_elem(&ctx.tower, &t.h), "k": t.k}))
        .collect();
    let consts: Vec<Value> = e
        .new_constants()
        .iter()
        .map(|f| json!({"name": f.name, "minpoly": render_qpoly(&f.minpoly, &f.name)}))
        .collect();
    let sums: Vec<Value> = e
        .root_sums
        .iter()
        .map(|r| json!({"field": r.field.name, "coeff": r.coeff.to_string(), "arg": render_elem(&ctx.tower, &r.arg)}))
        .collect();
    json!({
        "schema": SCHEMA,
        "status": status,
        "elementary": render_logpoly(ctx, &rest),
        "logs": logs,
        "dilog_terms": terms,
        "new_constants": consts,
        "root_sums": sums,
    })
}

/// JSON object for a result without an expression.
pub fn message_json(status: &str, message: &str) -> Value {
    json!({
        "schema": SCHEMA,
        "status": status,
        "elementary": Value::Null,
        "logs": [],
        "dilog_terms": [],
        "new_constants": [],
        "message": message,
    })
}

pub fn render_place(t: &Tower, p: &Place) -> String {
    match p {
        Place::Finite { level, poly } => render_elem(t, &Elem::from_poly(*level, poly.clone())),
        Place::Infinite { .. } => "infinity".into(),
    }
}

pub fn render_sym(ctx: &Ctx, s: &Sym) -> String {
    match s {
        Sym::Log(v) => ctx.reg.var_name(&ctx.tower, *v),
        Sym::Delta(p) => format!("delta({})", render_place(&ctx.tower, p)),
        Sym::X(name) => name.clone(),
    }
}

pub fn tensor_json(ctx: &Ctx, t: &Tensor2) -> Value {
    Value::Array(
        t.terms()
            .iter()
            .map(|((a, b), c)| json!({"left": render_sym(ctx, a), "right": render_sym(ctx, b), "coeff": c.to_string()}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Constant;

    #[test]
    fn term_and_logs() {
        let mut t = Tower::new("x");
        t.push_log(Elem::gen(0)).unwrap();
        let mut ctx = Ctx::new(t);
        let x = Elem::gen(0);
        let term = DilogTerm { d: Constant::int(1), h: x.clone(), k: 1 };
        let l = ctx.log_of(&x.add(&Elem::int(1))).unwrap();
        let e = IntegralExpr { elementary: l.scale(&Elem::int(3)), root_sums: vec![], terms: vec![term] };
        assert_eq!(render_integral(&ctx, &e), "3*log(x + 1) + dilog_term(d=1, h=x, k=1)");
        let j = integral_json(&ctx, "Integrated", &e);
        assert_eq!(j["logs"][0]["arg"], "x + 1");
        assert_eq!(j["logs"][0]["coeff"], "3");
        assert_eq!(j["elementary"], "0");
        assert_eq!(j["dilog_terms"][0]["h"], "x");
        let sq = LogPoly::constant(Elem::gen(1)).pow(2).scale(&x.inv());
        assert_eq!(render_logpoly(&ctx, &sq), "log(x)^2/x");
    }
}
