//! Elementary integration of polynomials in logarithms.
//!
//! The integrand is put in flat form: log generators of the tower become
//! indeterminates next to the registry atoms, and coefficients lie in the
//! field generated by the base variable and exponentials. Coefficients are
//! integrated from the top degree down; the logarithmic part found at degree
//! `n` fixes the constant coefficients of the degree `n+1` monomials.

use std::collections::BTreeSet;

use crate::arith::{Constant, FieldOps};
use crate::error::{Error, Result};
use crate::frontend::render::{flatten, monomials};
use crate::logsym::{mono_degree, mono_of, LVar, LogPoly, Mono};
use crate::tower::{Elem, MonomialKind, Tower};

use super::rational::integrate_field;
use super::{d_root_sum, verify, Ctx, IntegralExpr, RootSum};

/// Result of an integration attempt; failure carries the obstruction.
#[derive(Clone, Debug)]
pub enum Outcome {
    Integrated(IntegralExpr),
    NotFound(String),
}

impl Outcome {
    pub fn ok(self) -> Option<IntegralExpr> {
        match self {
            Outcome::Integrated(e) => Some(e),
            Outcome::NotFound(_) => None,
        }
    }
}

fn is_flat_gen(t: &Tower, i: usize) -> bool {
    matches!(t.gen(i).kind, MonomialKind::Log(_) | MonomialKind::Primitive)
}

/// Whether `e` avoids every log and primitive generator.
pub fn in_coefficient_field(t: &Tower, e: &Elem) -> bool {
    let mut gs = BTreeSet::new();
    e.generators(&mut gs);
    gs.iter().all(|&i| !is_flat_gen(t, i))
}

/// Rewrites a field element as a polynomial in the log generators, or
/// `None` if one of them occurs in a denominator.
fn elem_to_flat(t: &Tower, e: &Elem) -> Option<LogPoly> {
    if in_coefficient_field(t, e) {
        return Some(LogPoly::constant(e.clone()));
    }
    let (p, q) = flatten(e);
    if !in_coefficient_field(t, &q) {
        return None;
    }
    let n = t.len();
    let mut out = LogPoly::zero();
    for (c, exps) in monomials(&p, n) {
        let mut coeff = Elem::C(c);
        let mut mono = Vec::new();
        for (i, &k) in exps.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if is_flat_gen(t, i) {
                mono.push((LVar::Gen(i), k));
            } else {
                coeff = coeff.mul(&Elem::gen(i).pow(k as i64));
            }
        }
        out.add_term(mono_of(&mono), coeff.div(&q));
    }
    Some(out)
}

pub fn to_flat(t: &Tower, p: &LogPoly) -> Option<LogPoly> {
    let mut out = LogPoly::zero();
    for (m, c) in p.terms() {
        let fc = elem_to_flat(t, c)?;
        out = out.add(&fc.mul(&LogPoly::from_terms([(m.clone(), Elem::int(1))])));
    }
    Some(out)
}

pub fn from_flat(p: &LogPoly) -> LogPoly {
    p.substitute(&|v| match v {
        LVar::Gen(i) => LogPoly::constant(Elem::gen(i)),
        a => LogPoly::var(a),
    })
}

fn renorm_flat(ctx: &mut Ctx, p: &LogPoly) -> Result<LogPoly> {
    let t = ctx.normalize(&from_flat(p))?;
    to_flat(&ctx.tower, &t).ok_or_else(|| Error::Internal("normal form left the flat form".into()))
}

fn var_derivative(ctx: &Ctx, v: LVar) -> Elem {
    match v {
        LVar::Atom(a) => ctx.reg.atom_derivative(&ctx.tower, a),
        LVar::Gen(i) => ctx.tower.gen(i).deriv.clone(),
    }
}

fn is_constant_var(ctx: &Ctx, v: LVar) -> bool {
    match v {
        LVar::Atom(a) => ctx.reg.atom_is_constant(a),
        LVar::Gen(_) => false,
    }
}

/// Integrates a log polynomial given in tower form. Never reports success
/// without an exact verification.
pub fn integrate_elementary(ctx: &mut Ctx, f: &LogPoly) -> Result<Outcome> {
    let nf = ctx.normalize(f)?;
    let Some(flat) = to_flat(&ctx.tower, &nf) else {
        return Ok(Outcome::NotFound("a log generator occurs in a denominator".into()));
    };
    for v in flat.vars() {
        if !in_coefficient_field(&ctx.tower, &var_derivative(ctx, v)) {
            let name = ctx.reg.var_name(&ctx.tower, v);
            return Ok(Outcome::NotFound(format!("derivative of {name} is not in the coefficient field")));
        }
    }
    let top = flat.degree();
    let mut e = LogPoly::zero();
    let mut sums: Vec<RootSum> = Vec::new();
    for n in (0..=top).rev() {
        let w = renorm_flat(ctx, &flat.sub(&ctx.derive(&e)))?;
        if let Some((m, _)) = w.terms().iter().find(|(m, _)| mono_degree(m) > n) {
            let m = m.clone();
            return Ok(Outcome::NotFound(format!(
                "degree {} part does not integrate (monomial {})",
                mono_degree(&m),
                describe(ctx, &m)
            )));
        }
        let mut rational = LogPoly::zero();
        let mut logs = LogPoly::zero();
        for (m, c) in w.terms().iter().filter(|(m, _)| mono_degree(m) == n) {
            let Some(fi) = integrate_field(ctx, c)? else {
                return Ok(Outcome::NotFound(format!(
                    "coefficient of {} has no elementary integral",
                    describe(ctx, m)
                )));
            };
            if !fi.root_sums.is_empty() {
                if n > 0 {
                    return Ok(Outcome::NotFound("algebraic residues on a log monomial".into()));
                }
                sums.extend(fi.root_sums.iter().cloned());
            }
            let mono = LogPoly::from_terms([(m.clone(), Elem::int(1))]);
            rational = rational.add(&mono.scale(&fi.rational));
            for (c, arg) in &fi.logs {
                let la = ctx.log_of(arg)?;
                let Some(la) = to_flat(&ctx.tower, &la) else {
                    return Ok(Outcome::NotFound("logarithm leaves the flat form".into()));
                };
                for (lm, lc) in la.terms() {
                    let part = LogPoly::from_terms([(lm.clone(), lc.clone())]).mul(&mono).scale_c(c);
                    if lm.keys().all(|v| is_constant_var(ctx, *v)) {
                        rational = rational.add(&part);
                    } else {
                        logs = logs.add(&part);
                    }
                }
            }
        }
        let logs = renorm_flat(ctx, &logs)?;
        let mut lifted = LogPoly::zero();
        for (m, c) in logs.terms() {
            let weight: u32 = m.iter().filter(|(v, _)| !is_constant_var(ctx, **v)).map(|(_, e)| *e).sum();
            if weight == 0 {
                rational.add_term(m.clone(), c.clone());
                continue;
            }
            let Some(cc) = c.as_constant() else {
                return Ok(Outcome::NotFound("non-constant log coefficient".into()));
            };
            let k = cc.mul(&Constant::int(weight as i64).inv());
            lifted.add_term(m.clone(), Elem::C(k));
        }
        e = e.add(&rational).add(&lifted);
        e = renorm_flat(ctx, &e)?;
    }
    let mut rest = renorm_flat(ctx, &flat.sub(&ctx.derive(&e)))?;
    for s in &sums {
        rest = rest.sub(&LogPoly::constant(d_root_sum(&ctx.tower, s)?));
    }
    if !rest.is_zero() {
        return Ok(Outcome::NotFound("integration leaves a nonzero remainder".into()));
    }
    let expr = IntegralExpr { elementary: ctx.normalize(&from_flat(&e))?, root_sums: sums, terms: vec![] };
    if !verify(ctx, &expr, f)? {
        return Err(Error::Internal("elementary integral failed verification".into()));
    }
    Ok(Outcome::Integrated(expr))
}

fn describe(ctx: &Ctx, m: &Mono) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|(v, e)| {
            let n = ctx.reg.var_name(&ctx.tower, *v);
            if *e == 1 {
                n
            } else {
                format!("{n}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Elem {
        Elem::gen(0)
    }

    fn integrate(ctx: &mut Ctx, f: &LogPoly) -> IntegralExpr {
        match integrate_elementary(ctx, f).unwrap() {
            Outcome::Integrated(e) => e,
            Outcome::NotFound(m) => panic!("{m}"),
        }
    }

    #[test]
    fn log_polynomials() {
        let mut t = Tower::new("x");
        t.push_log(x()).unwrap();
        let th = Elem::gen(1);
        let mut ctx = Ctx::new(t);
        // ∫ log(x) = x log(x) - x
        let e = integrate(&mut ctx, &LogPoly::constant(th.clone()));
        assert_eq!(e.elementary.as_elem().unwrap(), x().mul(&th).sub(&x()));
        // ∫ log(x)/x = log(x)^2/2
        let e = integrate(&mut ctx, &LogPoly::constant(th.div(&x())));
        assert_eq!(e.elementary.as_elem().unwrap(), th.mul(&th).div(&Elem::int(2)));
        // ∫ 1/x^2 = -1/x
        let e = integrate(&mut ctx, &LogPoly::constant(x().pow(-2)));
        assert_eq!(e.elementary.as_elem().unwrap(), x().inv().neg());
    }

    #[test]
    fn products_of_atoms() {
        let mut ctx = Ctx::new(Tower::new("x"));
        let x1 = x().add(&Elem::int(1));
        let la = ctx.log_of(&x()).unwrap();
        let lb = ctx.log_of(&x1).unwrap();
        // D(log x · log(x+1))
        let f = la.scale(&x1.inv()).add(&lb.scale(&x().inv()));
        let e = integrate(&mut ctx, &f);
        assert_eq!(e.elementary, la.mul(&lb));
        // log(x)/(x+1) alone is not elementary
        let g = la.scale(&x1.inv());
        assert!(matches!(integrate_elementary(&mut ctx, &g).unwrap(), Outcome::NotFound(_)));
    }

    #[test]
    fn exponential_coefficients() {
        let mut t = Tower::new("x");
        t.push_exp(x()).unwrap();
        let th = Elem::gen(1);
        let mut ctx = Ctx::new(t);
        let f = LogPoly::constant(th.div(&th.add(&Elem::int(1))));
        integrate(&mut ctx, &f);

        let mut t = Tower::new("x");
        t.push_exp(x().mul(&x())).unwrap();
        let mut ctx = Ctx::new(t);
        let f = LogPoly::constant(Elem::gen(1));
        assert!(matches!(integrate_elementary(&mut ctx, &f).unwrap(), Outcome::NotFound(_)));
    }
}
