//! Recognition of dilogarithmic terms (heuristic H1).
//!
//! For an integrand `Σ c_v·log(v) + c_0`, integrating each `c_v` gives a
//! logarithmic part `Σ λ_{v,a}·log(a)`. Elementary log products contribute a
//! symmetric matrix `λ`, a term `(d, h, 1)` contributes `d·log(h)⊗log(1−h)`.
//! Candidate arguments come from the rows of the antisymmetric part of `λ`;
//! their multipliers are found by a linear solve, the remainder is
//! integrated elementarily and the result is verified exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::linalg::solve;
use crate::arith::{Constant, FieldOps, QPoly};
use crate::error::Result;
use crate::logsym::{mono_degree, AtomKind, LVar, LogPoly};
use crate::places::to_qpoly;
use crate::tensor2::{Sym, Tensor2, Vector};
use crate::tower::{Elem, MonomialKind};

use super::elementary::{integrate_elementary, to_flat, Outcome};
use super::rational::integrate_field;
use super::{d_dilog_term, verify, Ctx, DilogTerm};

const MAX_CANDIDATES: usize = 60;

fn is_constant_var(ctx: &Ctx, v: LVar) -> bool {
    matches!(v, LVar::Atom(a) if ctx.reg.atom_is_constant(a))
}

/// Coordinates of a logarithm on the non-constant log variables.
fn lin_coords(ctx: &Ctx, lp: &LogPoly) -> Option<Vector> {
    let flat = to_flat(&ctx.tower, lp)?;
    let mut out = Vector::zero();
    for (m, c) in flat.terms() {
        match mono_degree(m) {
            0 => {}
            1 => {
                let v = *m.keys().next().unwrap();
                if !is_constant_var(ctx, v) {
                    out.add_term(Sym::Log(v), c.as_constant()?.clone());
                }
            }
            _ => return None,
        }
    }
    Some(out)
}

fn log_coords(ctx: &mut Ctx, f: &Elem) -> Result<Option<Vector>> {
    let lp = ctx.log_of(f)?;
    Ok(lin_coords(ctx, &lp))
}

/// Rewrites a tensor over possibly refined atoms in current coordinates.
fn renorm_tensor(ctx: &mut Ctx, t: &Tensor2) -> Result<Option<Tensor2>> {
    let mut cache: BTreeMap<Sym, Vector> = BTreeMap::new();
    let mut out = Tensor2::zero();
    for ((a, b), c) in t.terms() {
        for s in [a, b] {
            if !cache.contains_key(s) {
                let Sym::Log(v) = s else { return Ok(None) };
                let lp = ctx.normalize(&LogPoly::var(*v))?;
                let Some(vec) = lin_coords(ctx, &lp) else { return Ok(None) };
                cache.insert(s.clone(), vec);
            }
        }
        out = out.add(&Tensor2::outer(&cache[a], &cache[b]).scale(c));
    }
    Ok(Some(out))
}

fn var_value(ctx: &Ctx, v: LVar) -> Option<Elem> {
    match v {
        LVar::Atom(a) => match ctx.reg.kind(a) {
            AtomKind::Poly { .. } => Some(ctx.reg.atom_value(a)),
            _ => None,
        },
        LVar::Gen(i) => match &ctx.tower.gen(i).kind {
            MonomialKind::Log(u) => Some(u.clone()),
            _ => None,
        },
    }
}

/// Integer direction of a rational vector, scaled to coprime entries.
fn primitive_direction(coords: &[(LVar, Constant)]) -> Option<Vec<(LVar, i64)>> {
    let qs: Vec<BigRational> = coords.iter().map(|(_, c)| c.as_rational().cloned()).collect::<Option<_>>()?;
    let l = qs.iter().fold(<BigInt as One>::one(), |a, q| a.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |a, c| a.gcd(c));
    if g.is_zero() {
        return None;
    }
    coords.iter().zip(&ints).map(|((v, _), c)| Some((*v, (c / &g).to_i64()?))).collect()
}

/// Values `c` making `1 − c·p` vanish at a root of one of `places`, or at
/// infinity.
fn scale_candidates(p: &Elem, places: &[QPoly]) -> Vec<BigRational> {
    let mut out = Vec::new();
    if p.level().is_some_and(|l| l > 0) {
        return out;
    }
    let (Some(n), Some(d)) = (to_qpoly(&p.numer_in(0)), to_qpoly(&p.denom_in(0))) else { return out };
    if n.deg() == d.deg() {
        out.push(d.lc() / n.lc());
    }
    for q in places {
        let (g, s, _) = d.ext_gcd(q);
        if g.deg() > 0 || n.gcd(q).deg() > 0 {
            continue;
        }
        let beta = n.mul(&s).rem(q);
        if beta.deg() == 0 && !beta.is_zero() {
            out.push(<BigRational as One>::one() / beta.coeff(0));
        }
    }
    out
}

fn orbit(x: &Elem) -> Vec<Elem> {
    let one = Elem::int(1);
    let om = one.sub(x);
    vec![x.clone(), om.clone(), x.inv(), om.inv(), x.div(&x.sub(&one)), x.sub(&one).div(x)]
}

fn candidates(ctx: &Ctx, anti: &Tensor2) -> Vec<Elem> {
    let mut rows: BTreeMap<LVar, Vec<(LVar, Constant)>> = BTreeMap::new();
    for ((a, b), c) in anti.terms() {
        if let (Sym::Log(va), Sym::Log(vb)) = (a, b) {
            rows.entry(*va).or_default().push((*vb, c.clone()));
        }
    }
    let places: Vec<QPoly> = rows
        .keys()
        .filter_map(|v| var_value(ctx, *v))
        .filter(|e| e.level() == Some(0))
        .filter_map(|e| to_qpoly(&e.numer_in(0)))
        .collect();
    let mut raw: Vec<Elem> = Vec::new();
    for row in rows.values() {
        let Some(dir) = primitive_direction(row) else { continue };
        let mut prod = Elem::int(1);
        let mut ok = true;
        for (v, e) in &dir {
            match var_value(ctx, *v) {
                Some(val) => prod = prod.mul(&val.pow(*e)),
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        for p in [prod.clone(), prod.inv()] {
            for c in scale_candidates(&p, &places) {
                raw.extend(orbit(&p.mul(&Elem::q(c))));
            }
        }
    }
    for v in rows.keys() {
        if let Some(g) = var_value(ctx, *v) {
            let om = Elem::int(1).sub(&g);
            raw.extend([g.clone(), om.clone(), om.inv()]);
        }
    }
    let mut out: Vec<Elem> = Vec::new();
    for h in raw {
        if h.is_const() || out.contains(&h) {
            continue;
        }
        out.push(h);
    }
    // among equally complex arguments prefer smaller denominators
    out.sort_by_key(|h| {
        let den = match h {
            Elem::F(f) => f.den.deg(),
            Elem::C(_) => 0,
        };
        (h.complexity(), den)
    });
    out.truncate(MAX_CANDIDATES);
    out
}

/// Integrates `f` with dilogarithmic terms. Success is always verified.
pub fn integrate_dilog(ctx: &mut Ctx, f: &LogPoly) -> Result<Outcome> {
    if let Outcome::Integrated(e) = integrate_elementary(ctx, f)? {
        return Ok(Outcome::Integrated(e));
    }
    let not_found = |why: &str| Ok(Outcome::NotFound(format!("no integral found under heuristic H1: {why}")));
    let nf = ctx.normalize(f)?;
    let Some(flat) = to_flat(&ctx.tower, &nf) else {
        return not_found("integrand is not polynomial in the logarithms");
    };
    let mut lam = Tensor2::zero();
    for (m, c) in flat.terms() {
        if mono_degree(m) != 1 {
            continue;
        }
        let v = *m.keys().next().unwrap();
        if is_constant_var(ctx, v) {
            continue;
        }
        let Some(fi) = integrate_field(ctx, c)? else {
            return not_found("a log coefficient has no elementary integral");
        };
        if !fi.root_sums.is_empty() {
            return not_found("algebraic residues on a log coefficient");
        }
        for (rho, g) in &fi.logs {
            let Some(gv) = log_coords(ctx, g)? else { return not_found("logarithm outside the flat form") };
            lam = lam.add(&Tensor2::outer(&Vector::sym(Sym::Log(v)), &gv).scale(rho));
        }
    }
    let cands = {
        let Some(l) = renorm_tensor(ctx, &lam)? else { return not_found("formal symbols in the residue matrix") };
        let anti = l.antisymmetric_part();
        if anti.is_zero() {
            return not_found("residue matrix is symmetric");
        }
        candidates(ctx, &anti)
    };
    let mut cols: Vec<(DilogTerm, Tensor2)> = Vec::new();
    for h in cands {
        if h.is_one() {
            continue;
        }
        let (Some(hv), Some(gv)) = (log_coords(ctx, &h)?, log_coords(ctx, &Elem::int(1).sub(&h))?) else {
            continue;
        };
        let t = Tensor2::outer(&hv, &gv).antisymmetric_part();
        if !t.is_zero() {
            cols.push((DilogTerm { d: Constant::int(1), h, k: 1 }, t));
        }
    }
    let Some(anti) = renorm_tensor(ctx, &lam)?.map(|l| l.antisymmetric_part()) else {
        return not_found("formal symbols in the residue matrix");
    };
    let mut normed = Vec::new();
    for (t, col) in &cols {
        let Some(c) = renorm_tensor(ctx, col)? else { continue };
        normed.push((t.clone(), c));
    }
    let keys: BTreeSet<(Sym, Sym)> = anti
        .terms()
        .keys()
        .chain(normed.iter().flat_map(|(_, c)| c.terms().keys()))
        .cloned()
        .collect();
    let zero = Constant::int(0);
    let a: Vec<Vec<Constant>> = keys
        .iter()
        .map(|k| normed.iter().map(|(_, c)| c.terms().get(k).cloned().unwrap_or(zero.clone())).collect())
        .collect();
    let b: Vec<Constant> = keys.iter().map(|k| anti.terms().get(k).cloned().unwrap_or(zero.clone())).collect();
    let Some(ds) = solve(&a, &b) else { return not_found("candidates do not span the antisymmetric part") };
    let terms: Vec<DilogTerm> = normed
        .iter()
        .zip(&ds)
        .filter(|(_, d)| !d.is_zero())
        .map(|((t, _), d)| DilogTerm { d: d.clone(), ..t.clone() })
        .collect();
    let mut rest = f.clone();
    for t in &terms {
        rest = rest.sub(&d_dilog_term(ctx, t)?);
    }
    match integrate_elementary(ctx, &rest)? {
        Outcome::Integrated(mut e) => {
            e.terms = terms;
            if verify(ctx, &e, f)? {
                Ok(Outcome::Integrated(e))
            } else {
                not_found("candidate failed verification")
            }
        }
        Outcome::NotFound(why) => not_found(&format!("remainder: {why}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::Tower;

    fn x() -> Elem {
        Elem::gen(0)
    }

    fn run(ctx: &mut Ctx, f: &LogPoly) -> crate::engine::IntegralExpr {
        match integrate_dilog(ctx, f).unwrap() {
            Outcome::Integrated(e) => e,
            Outcome::NotFound(m) => panic!("{m}"),
        }
    }

    #[test]
    fn classic_examples() {
        let mut ctx = Ctx::new(Tower::new("x"));
        let one = Elem::int(1);
        let lx = ctx.log_of(&x()).unwrap();
        let e = run(&mut ctx, &lx.scale(&x().sub(&one).inv()));
        assert_eq!(e.terms, vec![DilogTerm { d: Constant::int(1), h: x(), k: 1 }]);
        assert!(e.elementary.is_zero());

        let l1 = ctx.log_of(&one.sub(&x())).unwrap();
        let e = run(&mut ctx, &l1.scale(&x().inv().neg()));
        assert_eq!(e.terms, vec![DilogTerm { d: Constant::int(1), h: x(), k: 1 }]);
        assert_eq!(e.elementary, lx.mul(&l1).neg());

        let e = run(&mut ctx, &lx.scale(&x().inv()));
        assert!(e.terms.is_empty());
        assert_eq!(e.elementary, lx.mul(&lx).scale(&Elem::rat(1, 2)));
    }

    #[test]
    fn scaled_argument() {
        let mut ctx = Ctx::new(Tower::new("x"));
        let h = x().mul(&x()).mul(&Elem::int(2)).div(&x().add(&Elem::int(3)));
        let t = DilogTerm { d: Constant::rat(-3, 2), h, k: 1 };
        let f = d_dilog_term(&mut ctx, &t).unwrap();
        let e = run(&mut ctx, &f);
        assert_eq!(e.terms.len(), 1);
    }
}
