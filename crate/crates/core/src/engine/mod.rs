//! Integration with dilogarithmic terms: conversions between polylog
//! conventions, elementary integration, term recognition, normalization data
//! at a place and descent of term arguments to a smaller field.

pub mod descent;
pub mod dilog;
pub mod elementary;
pub mod polylog;
pub mod prep;
pub mod rational;

use std::sync::Arc;

use crate::arith::{Constant, FieldOps, NumberField, Poly, QPoly};
use crate::error::{Error, Result};
use crate::frontend::render::flatten;
use crate::logsym::{LogPoly, Registry};
use crate::tower::{Elem, Tower};

pub use descent::{check_log_deriv_membership, descend_exp, descend_prim};
pub use dilog::integrate_dilog;
pub use elementary::integrate_elementary;
pub use polylog::{li_i_convert, Direction};
pub use prep::{choose_place, prep_ext, CaseTag, PrepExtData};

/// A tower together with the log-symbol registry built over it.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub tower: Tower,
    pub reg: Registry,
    fields: usize,
}

impl Ctx {
    pub fn new(tower: Tower) -> Self {
        Ctx { tower, reg: Registry::new(), fields: 0 }
    }

    /// A fresh algebraic extension named `a1`, `a2`, ...
    pub fn fresh_field(&mut self, minpoly: QPoly) -> Arc<NumberField> {
        self.fields += 1;
        NumberField::new(format!("a{}", self.fields), minpoly)
    }

    pub fn log_of(&mut self, f: &Elem) -> Result<LogPoly> {
        self.reg.log_of(&self.tower, f)
    }

    pub fn derive(&self, p: &LogPoly) -> LogPoly {
        self.reg.derive(&self.tower, p)
    }

    pub fn normalize(&mut self, p: &LogPoly) -> Result<LogPoly> {
        self.reg.renormalize(&self.tower, p)
    }
}

/// `d·(D(1−h)/(1−h))·log(h)^k`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilogTerm {
    pub d: Constant,
    pub h: Elem,
    pub k: u32,
}

/// `Σ σ(coeff)·log(σ(arg))` over the embeddings σ of `field`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    pub field: Arc<NumberField>,
    pub coeff: Constant,
    pub arg: Elem,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegralExpr {
    /// Rational part, logarithms and log polynomial, in log symbols.
    pub elementary: LogPoly,
    pub root_sums: Vec<RootSum>,
    pub terms: Vec<DilogTerm>,
}

impl IntegralExpr {
    pub fn elementary(e: LogPoly) -> Self {
        IntegralExpr { elementary: e, ..Default::default() }
    }

    /// Algebraic extensions occurring anywhere in the expression.
    pub fn new_constants(&self) -> Vec<Arc<NumberField>> {
        let mut cs = Vec::new();
        for c in self.elementary.terms().values() {
            c.constants(&mut cs);
        }
        for t in &self.terms {
            cs.push(t.d.clone());
            t.h.constants(&mut cs);
        }
        let mut out: Vec<Arc<NumberField>> = self.root_sums.iter().map(|r| r.field.clone()).collect();
        out.extend(cs.iter().filter_map(|c| c.field().cloned()));
        let mut seen = Vec::new();
        out.retain(|f| {
            if seen.contains(f) {
                false
            } else {
                seen.push(f.clone());
                true
            }
        });
        out
    }
}

pub fn d_dilog_term(ctx: &mut Ctx, t: &DilogTerm) -> Result<LogPoly> {
    if t.h.is_zero() || t.h.is_one() {
        return Err(Error::Domain("dilogarithm argument must differ from 0 and 1".into()));
    }
    if t.k == 0 {
        return Err(Error::Domain("log power of a term must be positive".into()));
    }
    let one_minus = Elem::int(1).sub(&t.h);
    let w = ctx.tower.derive(&one_minus).div(&one_minus).mul(&Elem::C(t.d.clone()));
    let lh = ctx.log_of(&t.h)?;
    Ok(lh.pow(t.k).scale(&w))
}

/// Derivative of a root sum: the trace of `coeff·D(arg)/arg`.
pub fn d_root_sum(t: &Tower, r: &RootSum) -> Result<Elem> {
    let w = t.derive(&r.arg).div(&r.arg).mul(&Elem::C(r.coeff.clone()));
    trace_elem(&r.field, &w)
}

/// Coefficient of `α^k` in a polynomial (in every generator) over Q(α).
fn alpha_component(e: &Elem, k: usize) -> Elem {
    match e {
        Elem::C(c) => Elem::q(c.rep().coeff(k)),
        Elem::F(f) => {
            debug_assert!(f.den.deg() == 0);
            Elem::from_poly(f.var, f.num.map(|c| alpha_component(c, k)))
        }
    }
}

/// Trace from K(α) down to K of an element whose constants lie in Q(α).
pub fn trace_elem(field: &Arc<NumberField>, e: &Elem) -> Result<Elem> {
    let n = field.degree();
    let (p, q) = flatten(e);
    let ps: Vec<Elem> = (0..n).map(|k| alpha_component(&p, k)).collect();
    let qs: Vec<Elem> = (0..n).map(|k| alpha_component(&q, k)).collect();
    // multiplication by q on the basis 1, α, ..., α^{n-1}
    let alpha = field.generator();
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    for j in 0..n {
        let shift = alpha.pow_i(j as i64).rep();
        let mut col = vec![Elem::int(0); n];
        for (i, qi) in qs.iter().enumerate() {
            let prod = Poly::monomial(<num_rational::BigRational as num_traits::One>::one(), i)
                .mul(&shift)
                .rem(&field.minpoly);
            for (r, c) in prod.coeffs().iter().enumerate() {
                col[r] = col[r].add(&qi.mul(&Elem::q(c.clone())));
            }
        }
        cols.push(col);
    }
    let m: Vec<Vec<Elem>> = (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect();
    let y = crate::arith::linalg::solve(&m, &ps)
        .ok_or_else(|| Error::Internal("singular multiplication matrix".into()))?;
    let mut tr = Elem::int(0);
    for (k, yk) in y.iter().enumerate() {
        let tk = match alpha.pow_i(k as i64) {
            Constant::Rat(q) => q * num_rational::BigRational::from_integer((n as i64).into()),
            a => a.trace(),
        };
        tr = tr.add(&yk.mul(&Elem::q(tk)));
    }
    Ok(tr)
}

/// Derivative of an integral expression as a log polynomial.
pub fn derive_expr(ctx: &mut Ctx, e: &IntegralExpr) -> Result<LogPoly> {
    let mut out = ctx.derive(&e.elementary);
    for r in &e.root_sums {
        out = out.add(&LogPoly::constant(d_root_sum(&ctx.tower, r)?));
    }
    for t in &e.terms {
        out = out.add(&d_dilog_term(ctx, t)?);
    }
    ctx.normalize(&out)
}

/// Exact check that the expression differentiates to `f`.
pub fn verify(ctx: &mut Ctx, e: &IntegralExpr, f: &LogPoly) -> Result<bool> {
    let d = derive_expr(ctx, e)?;
    let f = ctx.normalize(f)?;
    Ok(d.sub(&f).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logsym::LVar;

    fn x() -> Elem {
        Elem::gen(0)
    }

    #[test]
    fn dilog_term_derivatives() {
        let mut ctx = Ctx::new(Tower::new("x"));
        let d = d_dilog_term(&mut ctx, &DilogTerm { d: Constant::int(1), h: x(), k: 1 }).unwrap();
        let lx = ctx.log_of(&x()).unwrap();
        assert_eq!(d, lx.scale(&Elem::int(1).div(&x().sub(&Elem::int(1)))));
        let bad = DilogTerm { d: Constant::int(1), h: Elem::int(1), k: 1 };
        assert!(matches!(d_dilog_term(&mut ctx, &bad), Err(Error::Domain(_))));

        let mut t = Tower::new("x");
        t.push_exp(x()).unwrap();
        let th = Elem::gen(1);
        let mut ctx = Ctx::new(t);
        let d = d_dilog_term(&mut ctx, &DilogTerm { d: Constant::int(1), h: th.clone(), k: 1 }).unwrap();
        let want = x().mul(&th).div(&th.sub(&Elem::int(1)));
        assert_eq!(d.as_elem().unwrap(), want);
    }

    #[test]
    fn verify_examples() {
        let mut ctx = Ctx::new(Tower::new("x"));
        let lx = ctx.log_of(&x()).unwrap();
        let inv = LogPoly::constant(Elem::int(1).div(&x()));
        assert!(verify(&mut ctx, &IntegralExpr::elementary(lx.clone()), &inv).unwrap());
        let e = IntegralExpr { terms: vec![DilogTerm { d: Constant::int(1), h: x(), k: 1 }], ..Default::default() };
        let f = lx.scale(&Elem::int(1).div(&x().sub(&Elem::int(1))));
        assert!(verify(&mut ctx, &e, &f).unwrap());
        let e = IntegralExpr::elementary(LogPoly::constant(x()));
        assert!(!verify(&mut ctx, &e, &LogPoly::constant(Elem::int(2))).unwrap());
        assert!(matches!(lx.vars()[0], LVar::Atom(_)));
    }

    #[test]
    fn root_sum_trace() {
        // Σ_{a^2 = -1/4} a·log(x - 2a)... with a = i/2: derivative 1/(x^2 + 1)
        let mut ctx = Ctx::new(Tower::new("x"));
        let mp = crate::arith::qpoly::qpoly_from_ints(&[1, 0, 4]).monic();
        let f = ctx.fresh_field(mp);
        let a = f.generator();
        let arg = x().sub(&Elem::C(Constant::int(2).mul(&a).inv()));
        let r = RootSum { field: f, coeff: a, arg };
        let d = d_root_sum(&ctx.tower, &r).unwrap();
        assert_eq!(d, Elem::int(1).div(&x().mul(&x()).add(&Elem::int(1))));
    }
}
