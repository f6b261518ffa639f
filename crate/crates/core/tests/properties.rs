use polyint::arith::FieldOps;
use polyint::engine::elementary::Outcome;
use polyint::engine::{choose_place, d_dilog_term, derive_expr, integrate_dilog, integrate_elementary, prep_ext, Ctx, DilogTerm};
use polyint::frontend::parse::parse_into;
use polyint::frontend::render::render_elem;
use polyint::logsym::LogPoly;
use polyint::tensor2::{psi, tenseq_residual, Tensor2, Vector};
use polyint::tower::{Elem, Tower};
use proptest::prelude::*;

fn poly(v: usize, cs: &[i64]) -> Elem {
    let t = Elem::gen(v);
    cs.iter().enumerate().fold(Elem::int(0), |acc, (k, c)| acc.add(&t.pow(k as i64).mul(&Elem::int(*c))))
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..4)
}

fn nonzero(p: Elem) -> Elem {
    if p.is_zero() {
        Elem::int(1)
    } else {
        p
    }
}

/// `x`, `log(x)`, `exp(x)`.
fn tower3() -> Tower {
    let mut t = Tower::new("x");
    t.push_log(Elem::gen(0)).unwrap();
    t.push_exp(Elem::gen(0)).unwrap();
    t
}

/// Element of `Q(x, log x, exp x)` with polynomial coefficients drawn from
/// the three vectors.
fn tower_elem(a: &[i64], b: &[i64], c: &[i64]) -> Elem {
    let num = poly(1, a).mul(&poly(0, b)).add(&poly(2, c));
    let den = nonzero(poly(0, c).add(&poly(1, b)));
    num.div(&den)
}

fn rational(n: &[i64], d: &[i64]) -> Elem {
    poly(0, n).div(&nonzero(poly(0, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_then_parse_is_identity(a in coeffs(), b in coeffs(), c in coeffs()) {
        let mut t = tower3();
        let e = tower_elem(&a, &b, &c);
        let text = render_elem(&t, &e);
        prop_assert_eq!(parse_into(&mut t, &text, "x").unwrap(), e, "{}", text);
        prop_assert_eq!(t.len(), 3);
    }

    #[test]
    fn leibniz(a in coeffs(), b in coeffs(), c in coeffs(), d in coeffs()) {
        let t = tower3();
        let (u, v) = (tower_elem(&a, &b, &c), tower_elem(&d, &c, &a));
        prop_assert_eq!(t.derive(&u.mul(&v)), u.mul(&t.derive(&v)).add(&v.mul(&t.derive(&u))));
    }

    #[test]
    fn psi_of_symmetrized_product(p in coeffs(), q in coeffs()) {
        let t = Tower::new("x");
        let mut ctx = Ctx::new(t.clone());
        let (p, q) = (poly(0, &p).add(&Elem::gen(0).pow(3)), poly(0, &q).add(&Elem::gen(0)));
        let (lp, lq) = (ctx.log_of(&p).unwrap(), ctx.log_of(&q).unwrap());
        let vp = Vector::from_log(&polyint::logsym::LogCombination::from_logpoly(&lp).unwrap()).unwrap();
        let vq = Vector::from_log(&polyint::logsym::LogCombination::from_logpoly(&lq).unwrap()).unwrap();
        let sym = Tensor2::outer(&vp, &vq).add(&Tensor2::outer(&vq, &vp));
        let lhs = psi(&ctx.reg, &t, &sym).unwrap();
        prop_assert!(lhs.sub(&ctx.derive(&lp.mul(&lq))).is_zero());
        prop_assert_eq!(sym.symmetric_part().add(&sym.antisymmetric_part()), sym.clone());
        let one_sided = Tensor2::outer(&vp, &vq);
        prop_assert_eq!(one_sided.symmetric_part().add(&one_sided.antisymmetric_part()), one_sided);
    }

    #[test]
    fn derivatives_of_rational_functions_integrate(n in coeffs(), d in coeffs(), m in coeffs()) {
        let mut ctx = Ctx::new(Tower::new("x"));
        let r = rational(&n, &d).add(&poly(0, &m));
        let f = LogPoly::constant(ctx.tower.derive(&r));
        match integrate_elementary(&mut ctx, &f).unwrap() {
            Outcome::Integrated(e) => {
                let g = derive_expr(&mut ctx, &e).unwrap();
                prop_assert!(ctx.normalize(&g.sub(&f)).unwrap().is_zero());
            }
            Outcome::NotFound(why) => prop_assert!(false, "{}", why),
        }
    }

    #[test]
    fn residual_is_symmetric(n in coeffs(), d in coeffs()) {
        let h = rational(&n, &d).add(&Elem::gen(0));
        prop_assume!(!h.is_const() && !h.is_one());
        let hs = [h];
        let data = prep_ext(&hs, &choose_place(&hs).unwrap()).unwrap();
        let r = tenseq_residual(&data.tenseq_data(0).unwrap(), &|v| data.v_is_zero(v)).unwrap();
        prop_assert!(data.is_symmetric_mod(&r));
        prop_assert!(data.condition_report().unwrap().all());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Misses are allowed; wrong answers are not.
    #[test]
    fn dilog_integration_never_wrong(n in coeffs(), d in coeffs(), dn in 1i64..=5) {
        let h = rational(&n, &d).add(&Elem::gen(0));
        prop_assume!(!h.is_const() && !h.is_one());
        let mut ctx = Ctx::new(Tower::new("x"));
        let term = DilogTerm { d: polyint::arith::Constant::rat(dn, 2), h, k: 1 };
        let f = d_dilog_term(&mut ctx, &term).unwrap();
        if let Outcome::Integrated(e) = integrate_dilog(&mut ctx, &f).unwrap() {
            let g = derive_expr(&mut ctx, &e).unwrap();
            prop_assert!(ctx.normalize(&g.sub(&f)).unwrap().is_zero());
        }
    }
}
