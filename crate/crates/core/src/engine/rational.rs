//! Integration inside the coefficient field: rational functions of the base
//! variable and of exponential generators over it.
//!
//! Hermite reduction removes multiple poles, Rothstein–Trager produces the
//! logarithmic part from the resultant `res_θ(D, A − z·D(D))` (computed by
//! evaluation and interpolation in `z`), and for exponentials the remaining
//! Laurent polynomial is handled coefficientwise by a Risch differential
//! equation over Q(x).

use std::collections::BTreeMap;

use crate::arith::factor::factor_q;
use crate::arith::qpoly::resultant;
use crate::arith::{Constant, FieldOps, Poly, QPoly};
use crate::error::Result;
use crate::places::to_qpoly;
use crate::tower::linrel::solve_constant_combination;
use crate::tower::{EPoly, Elem, MonomialKind, Tower};

use super::{d_root_sum, Ctx, RootSum};

/// `∫f = rational + Σ c·log(arg) + root sums`.
#[derive(Clone, Debug, Default)]
pub struct FieldIntegral {
    pub rational: Elem,
    pub logs: Vec<(Constant, Elem)>,
    pub root_sums: Vec<RootSum>,
}

impl FieldIntegral {
    fn merge(&mut self, o: FieldIntegral) {
        self.rational = self.rational.add(&o.rational);
        self.logs.extend(o.logs);
        self.root_sums.extend(o.root_sums);
    }
}

fn zero_integral() -> FieldIntegral {
    FieldIntegral { rational: Elem::int(0), ..Default::default() }
}

/// Derivative of a polynomial in generator `v`.
fn dpoly(t: &Tower, v: usize, p: &EPoly) -> EPoly {
    let d = t.derive(&Elem::from_poly(v, p.clone()));
    let (n, den) = d.parts_in(v);
    debug_assert!(den.deg() == 0);
    n.scale(&den.lc().inv())
}

/// Integrates `f`; `None` when no elementary integral is found in the field
/// plus logarithms.
pub fn integrate_field(ctx: &mut Ctx, f: &Elem) -> Result<Option<FieldIntegral>> {
    let Some(level) = f.level() else {
        let mut r = zero_integral();
        r.rational = f.mul(&Elem::gen(0));
        return Ok(Some(r));
    };
    match ctx.tower.gen(level).kind.clone() {
        MonomialKind::BaseVariable => integrate_base(ctx, f),
        MonomialKind::Exp(u) => integrate_exp(ctx, level, &u, f),
        _ => Ok(None),
    }
}

fn integrate_poly_base(p: &EPoly) -> Elem {
    let x = Elem::gen(0);
    let mut r = Elem::int(0);
    for (j, c) in p.coeffs().iter().enumerate() {
        r = r.add(&c.mul(&x.pow(j as i64 + 1)).div(&Elem::int(j as i64 + 1)));
    }
    r
}

fn integrate_base(ctx: &mut Ctx, f: &Elem) -> Result<Option<FieldIntegral>> {
    let (num, den) = f.parts_in(0);
    let (q, r) = num.divrem(&den);
    let mut out = zero_integral();
    out.rational = integrate_poly_base(&q);
    let Some(proper) = proper_part(ctx, 0, r, den)? else { return Ok(None) };
    let (g, logs, sums, residual) = proper;
    if !residual.is_poly_in(0) {
        return Ok(None);
    }
    out.rational = out.rational.add(&g).add(&integrate_poly_base(&residual.numer_in(0)));
    out.logs = logs;
    out.root_sums = sums;
    Ok(Some(out))
}

type Proper = (Elem, Vec<(Constant, Elem)>, Vec<RootSum>, Elem);

/// Hermite reduction and logarithmic part of `a/d` (`d` monic, normal).
/// Returns the rational part, logs, root sums and the residual, which is
/// free of poles at the roots of `d`.
fn proper_part(ctx: &mut Ctx, v: usize, a: EPoly, d: EPoly) -> Result<Option<Proper>> {
    if a.is_zero() {
        return Ok(Some((Elem::int(0), Vec::new(), Vec::new(), Elem::int(0))));
    }
    let (g, a, d) = hermite(&ctx.tower, v, a, d);
    let (q, r) = a.divrem(&d);
    let Some((logs, sums)) = rothstein_trager(ctx, v, &r, &d)? else { return Ok(None) };
    let mut residual = Elem::from_frac(v, r, d).add(&Elem::from_poly(v, q));
    for (c, arg) in &logs {
        residual = residual.sub(&ctx.tower.derive(arg).div(arg).mul(&Elem::C(c.clone())));
    }
    for s in &sums {
        residual = residual.sub(&d_root_sum(&ctx.tower, s)?);
    }
    Ok(Some((g, logs, sums, residual)))
}

fn hermite(t: &Tower, v: usize, mut a: EPoly, mut d: EPoly) -> (Elem, EPoly, EPoly) {
    let mut g = Elem::int(0);
    loop {
        let (_, sq) = d.squarefree();
        let Some((vp, k)) = sq.iter().filter(|(_, k)| *k > 1).max_by_key(|(_, k)| *k).cloned() else {
            break;
        };
        let u = d.div_exact(&vp.pow(k)).expect("squarefree factor divides");
        let dv = dpoly(t, v, &vp);
        let km1 = Elem::int(k as i64 - 1);
        let w = u.mul(&dv).scale(&km1.neg()).rem(&vp);
        let (_, s, _) = w.ext_gcd(&vp);
        let b = a.mul(&s).rem(&vp);
        let db = dpoly(t, v, &b);
        let num = a.sub(&u.mul(&vp).mul(&db)).add(&u.mul(&dv).mul(&b).scale(&km1));
        let c = num.div_exact(&vp).expect("Hermite step is exact");
        g = g.add(&Elem::from_frac(v, b, vp.pow(k - 1)));
        a = c;
        d = u.mul(&vp.pow(k - 1));
    }
    (g, a, d)
}

/// Interpolates `(zs[i], ys[i])` with polynomial coefficients in the tower.
fn interpolate_elem(zs: &[Elem], ys: &[Elem]) -> EPoly {
    let mut acc = EPoly::zero();
    for (i, (zi, yi)) in zs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = EPoly::one();
        let mut den = Elem::int(1);
        for (j, zj) in zs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&Poly::new(vec![zj.neg(), Elem::int(1)]));
                den = den.mul(&zi.sub(zj));
            }
        }
        acc = acc.add(&basis.scale(&yi.div(&den)));
    }
    acc
}

fn rothstein_trager(
    ctx: &mut Ctx,
    v: usize,
    a: &EPoly,
    d: &EPoly,
) -> Result<Option<(Vec<(Constant, Elem)>, Vec<RootSum>)>> {
    if a.is_zero() {
        return Ok(Some((Vec::new(), Vec::new())));
    }
    let dd = dpoly(&ctx.tower, v, d);
    let n = d.deg();
    let zs: Vec<Elem> = (0..=n as i64).map(Elem::int).collect();
    let ys: Vec<Elem> = zs.iter().map(|z| resultant(d, &a.sub(&dd.scale(z)))).collect();
    let res = interpolate_elem(&zs, &ys);
    if res.is_zero() {
        return Ok(None);
    }
    let res = res.monic();
    let Some(coeffs) = res.coeffs().iter().map(|c| c.as_rational().cloned()).collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let rq = QPoly::new(coeffs);
    let (_, factors) = factor_q(&rq);
    let mut logs = Vec::new();
    let mut sums = Vec::new();
    for (q, _) in factors {
        if q.deg() == 1 {
            let c = -(q.coeff(0) / q.coeff(1));
            if num_traits::Zero::is_zero(&c) {
                continue;
            }
            let cz = Elem::q(c.clone());
            let g = d.gcd(&a.sub(&dd.scale(&cz)));
            logs.push((Constant::Rat(c), Elem::from_poly(v, g)));
        } else {
            let field = ctx.fresh_field(q.monic());
            let alpha = field.generator();
            let g = d.gcd(&a.sub(&dd.scale(&Elem::C(alpha.clone()))));
            sums.push(RootSum { field, coeff: alpha, arg: Elem::from_poly(v, g) });
        }
    }
    Ok(Some((logs, sums)))
}

/// Laurent coefficients in generator `v` of an element whose denominator is
/// a power of the generator.
fn laurent(v: usize, e: &Elem) -> Option<BTreeMap<i64, Elem>> {
    let (num, den) = e.parts_in(v);
    let k = den.deg();
    if den != Poly::monomial(Elem::int(1), k) {
        return None;
    }
    let mut out = BTreeMap::new();
    for (j, c) in num.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out.insert(j as i64 - k as i64, c.clone());
        }
    }
    Some(out)
}

fn integrate_exp(ctx: &mut Ctx, v: usize, u: &Elem, f: &Elem) -> Result<Option<FieldIntegral>> {
    let (num, den) = f.parts_in(v);
    let s = den.coeffs().iter().take_while(|c| c.is_zero()).count();
    let dn = Poly::new(den.coeffs()[s..].to_vec());
    let theta_s = Poly::monomial(Elem::int(1), s);
    let (b, c) = if s == 0 {
        (EPoly::zero(), num)
    } else {
        match Poly::diophantine(&dn, &theta_s, &num) {
            Some(x) => x,
            None => return Ok(None),
        }
    };
    let mut out = zero_integral();
    let mut laurent_part = Elem::from_frac(v, b, theta_s);
    let (q, r) = c.divrem(&dn);
    laurent_part = laurent_part.add(&Elem::from_poly(v, q));
    let Some((g, logs, sums, residual)) = proper_part(ctx, v, r, dn)? else { return Ok(None) };
    out.rational = g;
    out.logs = logs;
    out.root_sums = sums;
    laurent_part = laurent_part.add(&residual);
    let Some(coeffs) = laurent(v, &laurent_part) else { return Ok(None) };
    let du = ctx.tower.derive(u);
    let theta = Elem::gen(v);
    for (j, a) in coeffs {
        if j == 0 {
            match integrate_field(ctx, &a)? {
                Some(fi) => out.merge(fi),
                None => return Ok(None),
            }
        } else {
            let g = du.mul(&Elem::int(j));
            match rde_rational(&ctx.tower, &g, &a) {
                Some(y) => out.rational = out.rational.add(&y.mul(&theta.pow(j))),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(out))
}

fn deg_at_infinity(e: &Elem) -> i64 {
    let (n, d) = e.parts_in(0);
    n.deg() as i64 - d.deg() as i64
}

fn multiplicity(p: &QPoly, q: &QPoly) -> u32 {
    let mut k = 0;
    let mut cur = p.clone();
    while let Some(next) = cur.div_exact(q) {
        if cur.deg() < q.deg() {
            break;
        }
        cur = next;
        k += 1;
    }
    k
}

/// Solves `Dy + g·y = a` for `y ∈ Q(x)` by bounding the denominator and the
/// degree of `y` and solving for its numerator coefficients.
pub fn rde_rational(t: &Tower, g: &Elem, a: &Elem) -> Option<Elem> {
    if a.is_zero() {
        return Some(Elem::int(0));
    }
    if g.level().is_some_and(|l| l > 0) || a.level().is_some_and(|l| l > 0) {
        return None;
    }
    let da = to_qpoly(&a.denom_in(0))?;
    let dg = to_qpoly(&g.denom_in(0))?;
    let mut den = QPoly::one();
    if da.deg() > 0 {
        let (_, fs) = factor_q(&da);
        for (p, ea) in fs {
            let eg = multiplicity(&dg, &p);
            let m = if eg == 0 { ea as i64 - 1 } else { ea as i64 - eg as i64 };
            if m > 0 {
                den = den.mul(&p.pow(m as u32));
            }
        }
    }
    let (da_inf, dg_inf) = (deg_at_infinity(a), deg_at_infinity(g));
    let spread = (da_inf - dg_inf).max(da_inf + 1).max(0);
    let n = (den.deg() as i64 + spread + 2).min(60) as usize;
    let den_e = Elem::from_poly(0, den.map(|c| Elem::q(c.clone())));
    let x = Elem::gen(0);
    let cols: Vec<Vec<Elem>> = (0..=n)
        .map(|k| {
            let b = x.pow(k as i64).div(&den_e);
            vec![t.derive(&b).add(&g.mul(&b))]
        })
        .collect();
    let cs = solve_constant_combination(std::slice::from_ref(a), &cols)?;
    let mut y = Elem::int(0);
    for (k, c) in cs.iter().enumerate() {
        y = y.add(&x.pow(k as i64).div(&den_e).mul(&Elem::C(c.clone())));
    }
    (t.derive(&y).add(&g.mul(&y)) == *a).then_some(y)
}
