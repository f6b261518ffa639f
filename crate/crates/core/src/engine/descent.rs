//! Descent of term arguments from `K = F(θ)` to `F`.
//!
//! Terms whose argument involves `θ` are normalized at a place of `θ`
//! (`prep_ext`); each is replaced by a term in the lower-field multiplier
//! `u_i` or dropped, according to its case tag. The difference is elementary;
//! every result is verified.

use crate::arith::FieldOps;
use crate::error::{Error, Result};
use crate::logsym::{LVar, LogPoly};
use crate::places::Place;
use crate::tower::{Elem, MonomialKind, Tower};

use super::elementary::{integrate_elementary, Outcome};
use super::prep::{choose_place, prep_ext, CaseTag, PrepExtData};
use super::{d_dilog_term, verify, Ctx, DilogTerm, IntegralExpr};

/// Whether `Σ a_i·Dψ_i/ψ_i + Ds` lies in the subfield of elements of level
/// at most `base` (`None`: the constants).
pub fn check_log_deriv_membership(t: &Tower, a: &[Elem], psi: &[Elem], s: &Elem, base: Option<usize>) -> Result<bool> {
    if a.len() != psi.len() {
        return Err(Error::Domain("coefficient and argument lists differ in length".into()));
    }
    let mut acc = t.derive(s);
    for (ai, p) in a.iter().zip(psi) {
        if p.is_zero() {
            return Err(Error::Domain("logarithmic derivative of zero".into()));
        }
        acc = acc.add(&ai.mul(&t.derive(p)).div(p));
    }
    Ok(match (acc.level(), base) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(l), Some(b)) => l <= b,
    })
}

fn lies_below(ctx: &Ctx, f: &LogPoly, level: usize) -> bool {
    let var_ok = |v: &LVar| match v {
        LVar::Gen(i) => *i < level,
        LVar::Atom(a) => ctx.reg.atom_level(*a).is_none_or(|l| l < level),
    };
    f.terms().iter().all(|(m, c)| c.level().is_none_or(|l| l < level) && m.keys().all(var_ok))
}

fn check_input(ctx: &mut Ctx, expr: &IntegralExpr, f: &LogPoly) -> Result<()> {
    if !verify(ctx, expr, f)? {
        return Err(Error::Precondition("expression does not differentiate to the integrand".into()));
    }
    Ok(())
}

/// Replaces the terms over the top generator. With log power 1 the
/// antisymmetric parts of old and new terms agree, so the elementary part
/// changes by `½Σ d·log(h)·log(1−h) − ½Σ d·log(u)·log(1−u)`; otherwise, or if
/// that candidate fails, the remainder is integrated afresh.
fn rebuild(ctx: &mut Ctx, expr: &IntegralExpr, f: &LogPoly, data: &PrepExtData) -> Result<IntegralExpr> {
    let top = ctx.tower.top();
    let one = Elem::int(1);
    let half = Elem::rat(1, 2);
    let mut terms: Vec<DilogTerm> = Vec::new();
    let mut shift = LogPoly::zero();
    let mut simple = true;
    let mut idx = 0;
    for t in &expr.terms {
        if t.h.level() != Some(top) {
            terms.push(t.clone());
            continue;
        }
        let (u, tag) = (&data.u[idx], data.tags[idx]);
        idx += 1;
        simple &= t.k == 1;
        let dc = Elem::C(t.d.clone()).mul(&half);
        let lh = ctx.log_of(&t.h)?;
        let l1h = ctx.log_of(&one.sub(&t.h))?;
        shift = shift.add(&lh.mul(&l1h).scale(&dc));
        if tag == CaseTag::OneMinus && !ctx.tower.is_constant(u) {
            let lu = ctx.log_of(u)?;
            let l1u = ctx.log_of(&one.sub(u))?;
            shift = shift.sub(&lu.mul(&l1u).scale(&dc));
            terms.push(DilogTerm { d: t.d.clone(), h: u.clone(), k: t.k });
        }
    }
    if simple {
        let cand = IntegralExpr {
            elementary: ctx.normalize(&expr.elementary.add(&shift))?,
            root_sums: expr.root_sums.clone(),
            terms: terms.clone(),
        };
        if verify(ctx, &cand, f)? {
            return Ok(cand);
        }
    }
    let mut rest = f.clone();
    for t in &terms {
        rest = rest.sub(&d_dilog_term(ctx, t)?);
    }
    let mut out = match integrate_elementary(ctx, &rest)? {
        Outcome::Integrated(e) => e,
        Outcome::NotFound(why) => {
            return Err(Error::Internal(format!("descent remainder is not elementary: {why}")));
        }
    };
    out.terms = terms;
    if !verify(ctx, &out, f)? {
        return Err(Error::Internal("descended expression failed verification".into()));
    }
    Ok(out)
}

fn top_args(ctx: &Ctx, expr: &IntegralExpr) -> Vec<Elem> {
    let top = ctx.tower.top();
    expr.terms.iter().filter(|t| t.h.level() == Some(top)).map(|t| t.h.clone()).collect()
}

/// Descent over a primitive (or logarithmic) top generator. `place` overrides
/// the default normalization place.
pub fn descend_prim(ctx: &mut Ctx, expr: &IntegralExpr, f: &LogPoly, place: Option<Place>) -> Result<IntegralExpr> {
    let top = ctx.tower.top();
    if !matches!(ctx.tower.gen(top).kind, MonomialKind::Log(_) | MonomialKind::Primitive) || top == 0 {
        return Err(Error::Domain("top generator is not a primitive".into()));
    }
    if expr.terms.iter().any(|t| t.k != 1) {
        return Err(Error::Precondition("primitive descent needs log power 1 in every term".into()));
    }
    check_input(ctx, expr, f)?;
    let hs = top_args(ctx, expr);
    if hs.is_empty() {
        return Ok(expr.clone());
    }
    let p = match place {
        Some(p) => p,
        None => choose_place(&hs)?,
    };
    let data = prep_ext(&hs, &p)?;
    rebuild(ctx, expr, f, &data)
}

/// Descent over an exponential top generator `θ`, normalized at `θ = 0`.
/// The integrand must not involve `θ`.
pub fn descend_exp(ctx: &mut Ctx, expr: &IntegralExpr, f: &LogPoly) -> Result<IntegralExpr> {
    let top = ctx.tower.top();
    if !matches!(ctx.tower.gen(top).kind, MonomialKind::Exp(_)) {
        return Err(Error::Domain("top generator is not an exponential".into()));
    }
    let nf = ctx.normalize(f)?;
    if !lies_below(ctx, &nf, top) {
        return Err(Error::Precondition("integrand involves the exponential generator".into()));
    }
    check_input(ctx, expr, f)?;
    let hs = top_args(ctx, expr);
    if hs.is_empty() {
        return Ok(expr.clone());
    }
    let data = prep_ext(&hs, &Place::at_value(top, Elem::int(0)))?;
    let theta = Elem::gen(top);
    for psi in &data.psi {
        if *psi == theta {
            continue;
        }
        // a basis element other than θ contributes a new logarithm over F
        if check_log_deriv_membership(&ctx.tower, &[Elem::int(1)], std::slice::from_ref(psi), &Elem::int(0), Some(top - 1))? {
            return Err(Error::Internal("basis element has a logarithmic derivative in the lower field".into()));
        }
    }
    rebuild(ctx, expr, f, &data)
}
