//! Text rendering of tower elements.
//!
//! Elements are printed as a single fraction of expanded polynomials in the
//! generators, e.g. `x^2/(x - 1)` or `2*log(x)/x`. The output re-parses to
//! the same element.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{Constant, FieldOps, Poly};
use crate::tower::{Elem, MonomialKind, Tower};

/// Writes `e` as `P/Q` with `P`, `Q` polynomial in every generator.
pub fn flatten(e: &Elem) -> (Elem, Elem) {
    match e {
        Elem::C(_) => (e.clone(), Elem::int(1)),
        Elem::F(f) => {
            let v = f.var;
            let (np, nl) = clear_coeffs(v, f.num.coeffs());
            let (dp, dl) = clear_coeffs(v, f.den.coeffs());
            (np.mul(&dl), dp.mul(&nl))
        }
    }
}

fn clear_coeffs(v: usize, cs: &[Elem]) -> (Elem, Elem) {
    let parts: Vec<(Elem, Elem)> = cs.iter().map(flatten).collect();
    let mut dens: Vec<Elem> = Vec::new();
    for (_, q) in &parts {
        if !q.is_one() && !dens.contains(q) {
            dens.push(q.clone());
        }
    }
    let l = dens.iter().fold(Elem::int(1), |a, b| a.mul(b));
    let g = Elem::gen(v);
    let mut acc = Elem::int(0);
    for (p, q) in parts.iter().rev() {
        acc = acc.mul(&g).add(&p.mul(&l.div(q)));
    }
    (acc, l)
}

/// Monomials `(coefficient, exponents)` of an element that is polynomial in
/// all generators.
pub fn monomials(p: &Elem, nvars: usize) -> Vec<(Constant, Vec<u32>)> {
    let mut out = Vec::new();
    collect(p, &mut vec![0; nvars], &mut out);
    out.sort_by(|a, b| b.1.iter().rev().cmp(a.1.iter().rev()));
    out
}

fn collect(p: &Elem, exps: &mut Vec<u32>, out: &mut Vec<(Constant, Vec<u32>)>) {
    match p {
        Elem::C(c) => {
            if !c.is_zero() {
                out.push((c.clone(), exps.clone()));
            }
        }
        Elem::F(f) => {
            debug_assert!(f.den.deg() == 0);
            for (k, c) in f.num.coeffs().iter().enumerate() {
                exps[f.var] = k as u32;
                collect(c, exps, out);
            }
            exps[f.var] = 0;
        }
    }
}

pub fn render_gen(t: &Tower, i: usize) -> String {
    let g = t.gen(i);
    match &g.kind {
        MonomialKind::BaseVariable | MonomialKind::Primitive => g.name.clone(),
        MonomialKind::Log(u) => format!("log({})", render_elem(t, u)),
        MonomialKind::Exp(u) => format!("exp({})", render_elem(t, u)),
    }
}

struct Term {
    neg: bool,
    body: String,
}

fn render_terms(t: &Tower, mons: &[(Constant, Vec<u32>)]) -> Vec<Term> {
    mons.iter()
        .map(|(c, exps)| {
            let factors: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let g = render_gen(t, i);
                    if e == 1 {
                        g
                    } else {
                        format!("{g}^{e}")
                    }
                })
                .collect();
            let fs = factors.join("*");
            match c {
                Constant::Rat(q) => {
                    let mag = q.abs();
                    let body = if fs.is_empty() {
                        mag.to_string()
                    } else if One::is_one(&mag) {
                        fs
                    } else {
                        format!("{mag}*{fs}")
                    };
                    Term { neg: q.is_negative(), body }
                }
                Constant::Alg(_) => {
                    let body = if fs.is_empty() { format!("({c})") } else { format!("({c})*{fs}") };
                    Term { neg: false, body }
                }
            }
        })
        .collect()
}

fn join(terms: &[Term]) -> String {
    let mut s = String::new();
    for (i, t) in terms.iter().enumerate() {
        match (i, t.neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&t.body);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn rational_coeffs(mons: &[(Constant, Vec<u32>)]) -> Option<Vec<BigRational>> {
    mons.iter().map(|(c, _)| c.as_rational().cloned()).collect()
}

pub fn render_elem(t: &Tower, e: &Elem) -> String {
    let n = t.len().max(e.level().map_or(0, |l| l + 1));
    let (p, q) = flatten(e);
    let mut pm = monomials(&p, n);
    let mut qm = monomials(&q, n);
    if let (Some(pr), Some(qr)) = (rational_coeffs(&pm), rational_coeffs(&qm)) {
        let den = pr.iter().chain(&qr).fold(BigInt::one(), |a, c| a.lcm(c.denom()));
        let scale = |v: &[BigRational]| -> Vec<BigInt> {
            v.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect()
        };
        let pi = scale(&pr);
        let qi = scale(&qr);
        let mut g = pi.iter().chain(&qi).fold(BigInt::zero(), |a, c| a.gcd(c));
        if qi[0].is_negative() {
            g = -g;
        }
        let back = |m: &mut Vec<(Constant, Vec<u32>)>, v: &[BigInt]| {
            for (slot, c) in m.iter_mut().zip(v) {
                slot.0 = Constant::Rat(BigRational::new(c.clone(), g.clone()));
            }
        };
        back(&mut pm, &pi);
        back(&mut qm, &qi);
    }
    let pt = render_terms(t, &pm);
    let qt = render_terms(t, &qm);
    let ps = join(&pt);
    if qm.len() == 1 && qm[0].1.iter().all(|&k| k == 0) && qm[0].0.is_one() {
        return ps;
    }
    let ps = if pt.len() > 1 { format!("({ps})") } else { ps };
    let qs = join(&qt);
    let simple = qt.len() == 1 && !qt[0].neg && top_level_atom(&qt[0].body);
    if simple {
        format!("{ps}/{qs}")
    } else {
        format!("{ps}/({qs})")
    }
}

/// True when `s` has no operator outside parentheses.
fn top_level_atom(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' | '/' | ' ' if depth == 0 => return false,
            _ => {}
        }
    }
    true
}

/// Renders a polynomial in an auxiliary variable `name` with rational
/// coefficients, e.g. minimal polynomials.
pub fn render_qpoly(p: &Poly<BigRational>, name: &str) -> String {
    let mut terms = Vec::new();
    for (k, q) in p.coeffs().iter().enumerate().rev() {
        if Zero::is_zero(q) {
            continue;
        }
        let mag = q.abs();
        let pw = match k {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{name}^{k}"),
        };
        let body = if pw.is_empty() {
            mag.to_string()
        } else if One::is_one(&mag) {
            pw
        } else {
            format!("{mag}*{pw}")
        };
        terms.push(Term { neg: q.is_negative(), body });
    }
    join(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let mut t = Tower::new("x");
        let x = Elem::gen(0);
        let one = Elem::int(1);
        assert_eq!(render_elem(&t, &x.mul(&x).div(&x.sub(&one))), "x^2/(x - 1)");
        t.push_log(x.clone()).unwrap();
        let th = Elem::gen(1);
        assert_eq!(render_elem(&t, &th.mul(&Elem::int(2)).div(&x)), "2*log(x)/x");
        assert_eq!(render_elem(&t, &x.div(&Elem::int(2))), "x/2");
        assert_eq!(render_elem(&t, &Elem::rat(-1, 2)), "-1/2");
        assert_eq!(render_elem(&t, &one.div(&th)), "1/log(x)");
        assert_eq!(render_elem(&t, &one.div(&th.mul(&th))), "1/log(x)^2");
        assert_eq!(render_elem(&t, &one.div(&th.mul(&x))), "1/(x*log(x))");
    }
}
