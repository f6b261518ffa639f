//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use common::*;
use polyint::arith::FieldOps;
use polyint::engine::elementary::Outcome;
use polyint::engine::polylog::{recurrence_holds, FSym, Formal};
use polyint::engine::{
    check_log_deriv_membership, choose_place, d_dilog_term, derive_expr, descend_exp, descend_prim,
    integrate_dilog, integrate_elementary, li_i_convert, prep_ext, Ctx, Direction, IntegralExpr,
};
use polyint::frontend::cli::{cli_run, Status};
use polyint::frontend::parse::{claim_generators, parse, parse_claim};
use polyint::logsym::LogPoly;
use polyint::tensor2::tenseq_residual;
use polyint::tower::{Elem, Tower};
use rand::Rng;
use serde_json::Value;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn q(n: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}

/// Exact equality of derivatives after normalization.
fn same_derivative(ctx: &mut Ctx, e: &IntegralExpr, f: &LogPoly) -> bool {
    let d = derive_expr(ctx, e).and_then(|d| ctx.normalize(&d));
    let g = ctx.normalize(f);
    matches!((d, g), (Ok(a), Ok(b)) if a.sub(&b).is_zero())
}

fn li_conversion() -> Verdict {
    let mut fails = Vec::new();
    for m in 1..=5 {
        if !recurrence_holds(m).unwrap_or(false) {
            fails.push(format!("recurrence m={m}"));
        }
    }
    // Li_2 = -I_2 - log(1-z)·log(z), after I_1 = -log(1-z)
    let li2 = li_i_convert(2, Direction::LiToI).unwrap();
    let want = Formal::sym(FSym::I(2))
        .scale(&q(-1))
        .add(&Formal::sym(FSym::LogOneMinusZ).mul(&Formal::sym(FSym::LogZ)).scale(&q(-1)));
    if li2.substitute(FSym::I(1), &Formal::sym(FSym::LogOneMinusZ).scale(&q(-1))) != want {
        fails.push("Li2 identity".into());
    }
    // tower oracle: D Li_m(x) = Li_{m-1}(x)/x for the orders expressible in
    // the term language
    for (claim, deriv) in [("Li(1, x)", "1/(1 - x)"), ("Li(2, x)", "-log(1 - x)/x")] {
        let (mut t, f) = parse(deriv, "x").unwrap();
        claim_generators(&mut t, claim, "x").unwrap();
        let mut ctx = Ctx::new(t);
        let c = parse_claim(&mut ctx, claim, "x").unwrap();
        if !same_derivative(&mut ctx, &c, &LogPoly::constant(f)) {
            fails.push(format!("D {claim}"));
        }
    }
    verdict(fails.is_empty(), if fails.is_empty() { "m = 1..5 and Li2 = -I2 - log(1-z)log(z)".into() } else { fails.join(", ") })
}

const RATIONAL_CORPUS: [&str; 25] = [
    "1/(x^2-1)",
    "1/(x^2+1)",
    "1/x^2",
    "1/x",
    "x^3 - 2*x + 5",
    "1/(x+1)^2",
    "x/(x^2+1)",
    "(2*x+1)/(x^2+x+1)",
    "1/(x^3-x)",
    "1/(x^2-2)",
    "x^2/(x-1)",
    "(x^4+1)/(x^2+1)",
    "1/(x^4-1)",
    "(3*x^2+2)/(x^3+2*x)",
    "1/(x*(x+1)^2)",
    "1/(x^2+2*x+5)",
    "x/(x-1)^3",
    "1/(x^3+1)",
    "(x-1)/(x+1)",
    "1/(4*x^2-9)",
    "1/(x^4+4)",
    "5/(2*x-3)",
    "x^5/(x^2-1)",
    "1/(x^2*(x^2+1))",
    "(x^2-x+3)/((x-2)*(x^2+3))",
];

fn rational_suite() -> Verdict {
    let mut fails = Vec::new();
    for s in RATIONAL_CORPUS {
        let (t, f) = parse(s, "x").unwrap();
        let mut ctx = Ctx::new(t);
        let f = LogPoly::constant(f);
        match integrate_elementary(&mut ctx, &f) {
            Ok(Outcome::Integrated(e)) if same_derivative(&mut ctx, &e, &f) => {}
            _ => fails.push(s),
        }
    }
    verdict(fails.is_empty(), format!("{}/25 verified{}", 25 - fails.len(), list(&fails)))
}

fn list(v: &[&str]) -> String {
    if v.is_empty() {
        String::new()
    } else {
        format!("; failed: {}", v.join(", "))
    }
}

fn dilog_round_trips() -> Verdict {
    let mut r = rng(0xd110);
    let (mut hit, mut wrong, mut miss) = (0, 0, 0);
    for _ in 0..100 {
        let term = polyint::engine::DilogTerm { d: rational_d(&mut r), h: rational_h(&mut r, 3), k: 1 };
        let mut ctx = Ctx::new(Tower::new("x"));
        let f = d_dilog_term(&mut ctx, &term).unwrap();
        match integrate_dilog(&mut ctx, &f) {
            Ok(Outcome::Integrated(e)) => {
                if same_derivative(&mut ctx, &e, &f) {
                    hit += 1;
                } else {
                    wrong += 1;
                }
            }
            _ => miss += 1,
        }
    }
    verdict(hit >= 95 && wrong == 0, format!("{hit}/100 recovered, {miss} not found, {wrong} wrong"))
}

/// 200 instances, each with one or two random arguments.
fn tens_eq_and_prep() -> (Verdict, Verdict) {
    let mut r = rng(0x7e45);
    let (mut sym, mut cond, mut errs) = (0, 0, Vec::new());
    for n in 0..200 {
        let count = if n % 4 == 3 { 2 } else { 1 };
        let hs: Vec<Elem> = (0..count).map(|_| rational_h(&mut r, 3)).collect();
        let data = match choose_place(&hs).and_then(|p| prep_ext(&hs, &p)) {
            Ok(d) => d,
            Err(e) => {
                errs.push(e.to_string());
                continue;
            }
        };
        let symmetric = (0..count).all(|i| {
            data.tenseq_data(i)
                .and_then(|d| tenseq_residual(&d, &|v| data.v_is_zero(v)))
                .is_ok_and(|t| data.is_symmetric_mod(&t))
        });
        sym += symmetric as usize;
        cond += data.condition_report().is_ok_and(|c| c.all()) as usize;
    }
    let note = errs.first().map(|e| format!("; first error: {e}")).unwrap_or_default();
    (
        verdict(sym == 200, format!("{sym}/200 residuals symmetric{note}")),
        verdict(cond == 200, format!("{cond}/200 with all five conditions and case tags")),
    )
}

fn pole_indep() -> Verdict {
    let mut r = rng(0x901e);
    let (mut false_ok, mut true_ok) = (0, 0);
    for n in 0..100 {
        let mut t = Tower::new("x");
        if n % 2 == 0 {
            t.push_log(x()).unwrap();
        } else {
            t.push_exp(x()).unwrap();
        }
        let th = Elem::gen(1);
        // distinct linear factors θ + c_i, c_i ≠ 0: independent modulo F
        let mut cs: Vec<Elem> = Vec::new();
        let count = r.gen_range(1..=3);
        while cs.len() < count {
            let c = if r.gen_bool(0.5) { Elem::int(r.gen_range(1..=6)) } else { rational_h(&mut r, 1) };
            if !cs.contains(&c) {
                cs.push(c);
            }
        }
        let psi: Vec<Elem> = cs.iter().map(|c| th.add(c)).collect();
        let mut a: Vec<Elem> = (0..count).map(|_| Elem::int(r.gen_range(-3..=3))).collect();
        let j = r.gen_range(0..count);
        if a[j].is_zero() {
            a[j] = Elem::int(1);
        }
        let (deg, c) = (r.gen_range(0..=2), r.gen_range(7..=9));
        let s = poly_in(&mut r, 1, deg).div(&th.add(&Elem::int(c)));
        if check_log_deriv_membership(&t, &a, &psi, &s, Some(0)) == Ok(false) {
            false_ok += 1;
        }
        let zeros = vec![Elem::int(0); count];
        let s0 = rational_h(&mut r, 2);
        if check_log_deriv_membership(&t, &zeros, &psi, &s0, Some(0)) == Ok(true) {
            true_ok += 1;
        }
    }
    verdict(false_ok == 100 && true_ok == 100, format!("{false_ok}/100 false, {true_ok}/100 true"))
}

/// Random `H`, `G` in `Q(x, θ)` built from `θ` and `Q(x)` factors.
fn top_arguments(r: &mut TestRng, th: &Elem) -> (Elem, Elem) {
    let a = rational_h(r, 1);
    let b = Elem::int(r.gen_range(1..=5));
    let big_h = match r.gen_range(0..3) {
        0 => th.mul(&a),
        1 => a.div(th),
        _ => th.add(&b).mul(&a),
    };
    let big_g = match r.gen_range(0..2) {
        0 => th.add(&a),
        _ => th.add(&b).div(th),
    };
    (big_h, big_g)
}

fn descent_round_trips() -> Verdict {
    let mut r = rng(0xde5c);
    let (mut prim, mut exp, mut errs) = (0, 0, Vec::new());
    for n in 0..40 {
        let mut t = Tower::new("x");
        let is_prim = n < 20;
        if is_prim {
            t.push_log(x()).unwrap();
        } else {
            t.push_exp(x()).unwrap();
        }
        let th = Elem::gen(1);
        let mut ctx = Ctx::new(t);
        let base = IntegralExpr {
            terms: vec![polyint::engine::DilogTerm { d: rational_d(&mut r), h: rational_h(&mut r, 2), k: 1 }],
            ..Default::default()
        };
        let f = derive_expr(&mut ctx, &base).unwrap();
        let (big_h, big_g) = top_arguments(&mut r, &th);
        let e = obfuscate(&mut ctx, &base, &big_h, &big_g);
        let out = if is_prim { descend_prim(&mut ctx, &e, &f, None) } else { descend_exp(&mut ctx, &e, &f) };
        match out {
            Ok(o) if o.terms.iter().all(|t| t.h.level().is_none_or(|l| l < 1)) && same_derivative(&mut ctx, &o, &f) => {
                if is_prim {
                    prim += 1;
                } else {
                    exp += 1;
                }
            }
            Ok(_) => errs.push("argument left over the top generator or derivative changed".to_string()),
            Err(e) => errs.push(e.to_string()),
        }
    }
    let note = errs.first().map(|e| format!("; first failure: {e}")).unwrap_or_default();
    verdict(prim == 20 && exp == 20, format!("{prim}/20 primitive, {exp}/20 exponential{note}"))
}

fn schema_ok(v: &Value) -> bool {
    let s = |k: &str| v[k].is_string();
    let arr = |k: &str, fields: &[&str]| {
        v[k].as_array().is_some_and(|a| a.iter().all(|o| fields.iter().all(|f| !o[*f].is_null())))
    };
    v["schema"] == "polyint-1"
        && s("status")
        && (s("elementary") || v["elementary"].is_null())
        && arr("logs", &["coeff", "arg"])
        && arr("dilog_terms", &["d", "h", "k"])
        && v["dilog_terms"].as_array().unwrap().iter().all(|t| t["k"].is_u64())
        && arr("new_constants", &["name", "minpoly"])
}

fn cli_contract() -> Verdict {
    let run = |args: &[&str]| cli_run(std::iter::once("polyint").chain(args.iter().copied()));
    let mut fails = Vec::new();
    let r = run(&["integrate", "log(x)/(x-1)"]);
    if r.status != Status::Integrated || r.exit_code != 0 || !r.payload.contains("dilog_term(d=1, h=x, k=1)") {
        fails.push(format!("integrate log(x)/(x-1): {}", r.payload));
    }
    let r = run(&["integrate", "log(x)/(x-1)", "--json"]);
    match serde_json::from_str::<Value>(&r.payload) {
        Ok(v) if schema_ok(&v) && v["dilog_terms"].as_array().map(|a| a.len()) == Some(1) && v["dilog_terms"][0]["h"] == "x" => {}
        _ => fails.push(format!("json: {}", r.payload)),
    }
    let r = run(&["derive", "log(x)^2"]);
    if r.payload != "2*log(x)/x" || r.exit_code != 0 {
        fails.push(format!("derive: {}", r.payload));
    }
    let r = run(&["integrate", "exp(x^2)"]);
    if r.status != Status::NoIntegralFound || r.exit_code != 1 {
        fails.push(format!("exp(x^2): {:?}", r.status));
    }
    let r = run(&["integrate", "exp(x^2)", "--json"]);
    if !serde_json::from_str::<Value>(&r.payload).is_ok_and(|v| schema_ok(&v)) {
        fails.push("json for NoIntegralFound".into());
    }
    let r = run(&["integrate", "1/(x^2+1)", "--json"]);
    if !serde_json::from_str::<Value>(&r.payload).is_ok_and(|v| schema_ok(&v) && v["new_constants"].as_array().is_some_and(|a| !a.is_empty())) {
        fails.push("json new_constants".into());
    }
    for (args, code) in [(vec!["integrate", "log("], 2), (vec!["integrate", "x", "--frobnicate"], 2)] {
        if run(&args).exit_code != code {
            fails.push(format!("exit code for {args:?}"));
        }
    }
    verdict(fails.is_empty(), if fails.is_empty() { "three examples, schema, exit codes 0/1/2".into() } else { fails.join("; ") })
}

fn main() {
    let mut all_ok = true;
    let mut report = |n: u32, name: &str, limit: Duration, f: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = f();
        let took = start.elapsed();
        let ok = v.ok && took <= limit;
        all_ok &= ok;
        println!(
            "criterion {n} [{}] {name}: {} ({:.2}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    };
    let secs = Duration::from_secs;
    report(1, "Li/I conversion", secs(1), &mut li_conversion);
    report(2, "rational integration", secs(5), &mut rational_suite);
    report(3, "dilog round trips", secs(60), &mut dilog_round_trips);
    let mut second = None;
    report(4, "tens-eq residual symmetry", secs(30), &mut || {
        let (a, b) = tens_eq_and_prep();
        second = Some(b);
        a
    });
    let b = second.take().unwrap();
    report(5, "prep-ext conditions", secs(30), &mut || Verdict { ok: b.ok, detail: b.detail.clone() });
    report(6, "pole-indep oracle", secs(30), &mut pole_indep);
    report(7, "descent round trips", secs(60), &mut descent_round_trips);
    report(8, "CLI contract", secs(60), &mut cli_contract);
    if !all_ok {
        std::process::exit(1);
    }
}
