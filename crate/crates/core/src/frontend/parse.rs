//! Expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | ident | ident '(' args ')' | '(' expr ')'
//! ```
//!
//! Functions are `log`, `exp`, `Li(k, z)` and `I(k, z)`. Logarithms and
//! exponentials of non-constant arguments become tower generators; the
//! polylogarithms are accepted only in claimed antiderivatives, where they are
//! rewritten into log products and dilogarithmic terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::arith::{Constant, FieldOps};
use crate::engine::polylog::{li_i_convert, FSym};
use crate::engine::{Ctx, DilogTerm, Direction, IntegralExpr};
use crate::error::{Error, Result};
use crate::logsym::LogPoly;
use crate::tower::{Elem, MonomialKind, Tower};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn perr<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { offset, message: message.into() })
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let mut num = BigRational::from_integer(text[start..i].parse::<BigInt>().unwrap_or_default());
            if i < b.len() && b[i] == b'.' {
                i += 1;
                let fs = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if fs == i && start + 1 == i {
                    return perr(start, "malformed number");
                }
                if fs < i {
                    let frac: BigInt = text[fs..i].parse().unwrap();
                    let scale = num_traits::pow(BigInt::from(10), i - fs);
                    num += BigRational::new(frac, scale);
                }
            }
            out.push((Tok::Num(num), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if b"+-*/^(),".contains(&c) {
            out.push((Tok::Op(c as char), i));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap();
            return perr(i, format!("unexpected character '{ch}'"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Num(BigRational),
    Var,
    Neg(Box<Ast>),
    Bin(char, Box<Ast>, Box<Ast>, usize),
    Call(String, Vec<Ast>, usize),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    var: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            perr(self.offset(), format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            let at = self.offset();
            if self.eat('+') {
                lhs = Ast::Bin('+', Box::new(lhs), Box::new(self.term()?), at);
            } else if self.eat('-') {
                lhs = Ast::Bin('-', Box::new(lhs), Box::new(self.term()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            let at = self.offset();
            if self.eat('*') {
                lhs = Ast::Bin('*', Box::new(lhs), Box::new(self.unary()?), at);
            } else if self.eat('/') {
                lhs = Ast::Bin('/', Box::new(lhs), Box::new(self.unary()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        let at = self.offset();
        if self.eat('^') {
            return Ok(Ast::Bin('^', Box::new(base), Box::new(self.unary()?), at));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        let at = self.offset();
        match self.toks.get(self.pos).cloned() {
            None => perr(at, "unexpected end of input"),
            Some((Tok::Num(q), _)) => {
                self.pos += 1;
                Ok(Ast::Num(q))
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some((Tok::Ident(name), _)) => {
                self.pos += 1;
                if self.eat('(') {
                    if !matches!(name.as_str(), "log" | "exp" | "Li" | "I") {
                        return perr(at, format!("unknown function '{name}'"));
                    }
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    let want = if name == "log" || name == "exp" { 1 } else { 2 };
                    if args.len() != want {
                        return perr(at, format!("{name} takes {want} argument(s)"));
                    }
                    Ok(Ast::Call(name, args, at))
                } else if name == self.var {
                    Ok(Ast::Var)
                } else {
                    perr(at, format!("unknown identifier '{name}'"))
                }
            }
            Some((Tok::Op(c), _)) => perr(at, format!("unexpected '{c}'")),
        }
    }
}

fn parse_ast(text: &str, var: &str) -> Result<Ast> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len(), var };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return perr(p.offset(), "unexpected trailing input");
    }
    Ok(e)
}

/// A claimed antiderivative under construction.
#[derive(Clone, Debug, Default)]
struct Val {
    poly: LogPoly,
    terms: Vec<DilogTerm>,
}

impl Val {
    fn elem(e: Elem) -> Self {
        Val { poly: LogPoly::constant(e), terms: Vec::new() }
    }

    fn as_elem(&self) -> Option<Elem> {
        if self.terms.is_empty() {
            self.poly.as_elem()
        } else {
            None
        }
    }
}

fn scale_terms(ts: &[DilogTerm], c: &Constant) -> Vec<DilogTerm> {
    ts.iter().map(|t| DilogTerm { d: t.d.mul(c), ..t.clone() }).filter(|t| !t.d.is_zero()).collect()
}

struct Eval<'a> {
    ctx: &'a mut Ctx,
    /// Polylogarithms and constant logs allowed.
    claim: bool,
    /// First pass: only collect generators.
    collect: bool,
    /// Nesting inside arguments that must be field elements; at depth 0 a
    /// claim's logarithms stay log symbols instead of becoming generators.
    depth: usize,
}

impl Eval<'_> {
    fn need_elem(&self, v: &Val, at: usize, what: &str) -> Result<Elem> {
        v.as_elem().ok_or_else(|| Error::Domain(format!("{what} at offset {at} must be a field element")))
    }

    fn eval_elem(&mut self, a: &Ast) -> Result<Val> {
        self.depth += 1;
        let v = self.eval(a);
        self.depth -= 1;
        v
    }

    fn eval(&mut self, a: &Ast) -> Result<Val> {
        Ok(match a {
            Ast::Num(q) => Val::elem(Elem::q(q.clone())),
            Ast::Var => Val::elem(Elem::gen(0)),
            Ast::Neg(x) => {
                let v = self.eval(x)?;
                Val { poly: v.poly.neg(), terms: scale_terms(&v.terms, &Constant::int(-1)) }
            }
            Ast::Bin(op, l, r, at) => {
                let x = self.eval(l)?;
                let y = if matches!(op, '/' | '^') { self.eval_elem(r)? } else { self.eval(r)? };
                match op {
                    '+' => Val { poly: x.poly.add(&y.poly), terms: merge(&x.terms, &y.terms, false) },
                    '-' => Val { poly: x.poly.sub(&y.poly), terms: merge(&x.terms, &y.terms, true) },
                    '*' => self.mul(&x, &y, *at)?,
                    '/' => {
                        let d = self.need_elem(&y, *at, "divisor")?;
                        if d.is_zero() {
                            return Err(Error::Domain(format!("division by zero at offset {at}")));
                        }
                        self.mul(&x, &Val::elem(d.inv()), *at)?
                    }
                    _ => {
                        let e = self.need_elem(&y, *at, "exponent")?;
                        let n = e
                            .as_rational()
                            .filter(|q| q.is_integer())
                            .and_then(|q| q.to_integer().to_i64())
                            .ok_or_else(|| Error::Domain(format!("exponent at offset {at} must be an integer")))?;
                        if !x.terms.is_empty() {
                            return Err(Error::Domain(format!("power of a polylogarithm at offset {at}")));
                        }
                        if let Some(b) = x.poly.as_elem() {
                            if b.is_zero() && n < 0 {
                                return Err(Error::Domain(format!("division by zero at offset {at}")));
                            }
                            Val::elem(b.pow(n))
                        } else if n >= 0 {
                            Val { poly: x.poly.pow(n as u32), terms: Vec::new() }
                        } else {
                            return Err(Error::Domain(format!("negative power of a logarithm at offset {at}")));
                        }
                    }
                }
            }
            Ast::Call(name, args, at) => self.call(name, args, *at)?,
        })
    }

    fn mul(&mut self, x: &Val, y: &Val, at: usize) -> Result<Val> {
        let scalar = |v: &Val| v.as_elem().and_then(|e| e.as_constant().cloned());
        if x.terms.is_empty() && y.terms.is_empty() {
            return Ok(Val { poly: x.poly.mul(&y.poly), terms: Vec::new() });
        }
        if let Some(c) = scalar(x) {
            return Ok(Val { poly: y.poly.scale_c(&c), terms: scale_terms(&y.terms, &c) });
        }
        if let Some(c) = scalar(y) {
            return Ok(Val { poly: x.poly.scale_c(&c), terms: scale_terms(&x.terms, &c) });
        }
        Err(Error::Domain(format!("polylogarithm multiplied by a non-constant at offset {at}")))
    }

    fn call(&mut self, name: &str, args: &[Ast], at: usize) -> Result<Val> {
        match name {
            "log" | "exp" if matches!(&args[0], Ast::Call(inner, _, _) if inner != name && matches!(inner.as_str(), "log" | "exp")) => {
                let Ast::Call(_, inner, _) = &args[0] else { unreachable!() };
                self.eval(&inner[0])
            }
            "log" => {
                let v = self.eval_elem(&args[0])?;
                let u = self.need_elem(&v, at, "log argument")?;
                if u.is_zero() {
                    return Err(Error::Domain(format!("log(0) at offset {at}")));
                }
                if let Some(i) = exp_index(&self.ctx.tower, &u) {
                    if let MonomialKind::Exp(w) = &self.ctx.tower.gen(i).kind {
                        return Ok(Val::elem(w.clone()));
                    }
                }
                if u.is_const() || (self.claim && self.depth == 0) {
                    if !self.claim {
                        return Err(Error::Domain(format!("log of a constant at offset {at} is not a tower monomial")));
                    }
                    if self.collect {
                        return Ok(Val::default());
                    }
                    return Ok(Val { poly: self.ctx.log_of(&u)?, terms: Vec::new() });
                }
                let i = self.ctx.tower.push_log(u)?;
                Ok(Val::elem(Elem::gen(i)))
            }
            "exp" => {
                let v = self.eval_elem(&args[0])?;
                let u = self.need_elem(&v, at, "exp argument")?;
                if let Some(MonomialKind::Log(w)) = u.level().filter(|_| u == Elem::gen(u.level().unwrap())).map(|i| self.ctx.tower.gen(i).kind.clone()) {
                    return Ok(Val::elem(w));
                }
                if let Some(c) = u.as_constant() {
                    if c.is_zero() {
                        return Ok(Val::elem(Elem::int(1)));
                    }
                    return Err(Error::Domain(format!("exp of a constant at offset {at} is not supported")));
                }
                let i = self.ctx.tower.push_exp(u)?;
                Ok(Val::elem(Elem::gen(i)))
            }
            _ => {
                let kv = self.eval_elem(&args[0])?;
                let k = kv
                    .as_elem()
                    .and_then(|e| e.as_rational().cloned())
                    .filter(|q| q.is_integer() && *q >= <BigRational as One>::one())
                    .and_then(|q| q.to_integer().to_u32())
                    .ok_or_else(|| Error::Domain(format!("{name} order at offset {at} must be a positive integer")))?;
                let zv = self.eval_elem(&args[1])?;
                let z = self.need_elem(&zv, at, "polylogarithm argument")?;
                if !self.claim {
                    return Err(Error::Domain(format!(
                        "{name}(k, z) at offset {at}: polylogarithms are accepted only in claimed antiderivatives"
                    )));
                }
                if z.is_zero() || z.is_one() {
                    return Err(Error::Domain(format!("{name} argument at offset {at} must differ from 0 and 1")));
                }
                if self.collect {
                    return Ok(Val::default());
                }
                self.polylog(name == "Li", k, &z, at)
            }
        }
    }

    /// `Li_k(z)` or `I_k(z)` with `I_1 = −log(1−z)` and `I_m` the term
    /// `(−1, z, m−1)`.
    fn polylog(&mut self, li: bool, k: u32, z: &Elem, at: usize) -> Result<Val> {
        let formal = if li { li_i_convert(k, Direction::LiToI)? } else { crate::engine::polylog::Formal::sym(FSym::I(k)) };
        let lz = self.ctx.log_of(z)?;
        let l1z = self.ctx.log_of(&Elem::int(1).sub(z))?;
        let mut out = Val::default();
        for (mono, c) in formal.terms() {
            let c = Constant::Rat(c.clone());
            let mut poly = LogPoly::constant(Elem::C(c.clone()));
            let mut term: Option<u32> = None;
            for (s, e) in mono {
                match s {
                    FSym::I(1) => poly = poly.mul(&l1z.neg().pow(*e)),
                    FSym::I(m) if *e == 1 && term.is_none() => term = Some(*m),
                    FSym::LogZ => poly = poly.mul(&lz.pow(*e)),
                    FSym::LogOneMinusZ => poly = poly.mul(&l1z.pow(*e)),
                    _ => {
                        return Err(Error::Domain(format!(
                            "polylogarithm at offset {at} expands to a product outside the term language"
                        )))
                    }
                }
            }
            match term {
                None => out.poly = out.poly.add(&poly),
                Some(m) => {
                    if poly.as_elem().is_none_or(|e| !e.is_const()) {
                        return Err(Error::Domain(format!(
                            "polylogarithm at offset {at} expands to a product outside the term language"
                        )));
                    }
                    let d = c.neg();
                    out.terms = merge(&out.terms, &[DilogTerm { d, h: z.clone(), k: m - 1 }], false);
                }
            }
        }
        Ok(out)
    }
}

fn exp_index(t: &Tower, u: &Elem) -> Option<usize> {
    let l = u.level()?;
    (*u == Elem::gen(l) && matches!(t.gen(l).kind, MonomialKind::Exp(_))).then_some(l)
}

fn merge(a: &[DilogTerm], b: &[DilogTerm], negate: bool) -> Vec<DilogTerm> {
    let mut out = a.to_vec();
    for t in b {
        let d = if negate { t.d.neg() } else { t.d.clone() };
        match out.iter_mut().find(|s| s.h == t.h && s.k == t.k) {
            Some(s) => s.d = s.d.add(&d),
            None => out.push(DilogTerm { d, ..t.clone() }),
        }
    }
    out.retain(|t| !t.d.is_zero());
    out
}

/// Parses an element, extending `tower` by the generators it needs.
pub fn parse_into(tower: &mut Tower, text: &str, var: &str) -> Result<Elem> {
    let ast = parse_ast(text, var)?;
    let mut ctx = Ctx::new(tower.clone());
    let v = Eval { ctx: &mut ctx, claim: false, collect: false, depth: 0 }.eval(&ast)?;
    *tower = ctx.tower;
    v.as_elem().ok_or_else(|| Error::Internal("integrand evaluated outside the tower".into()))
}

/// Parses an element over the minimal tower it needs.
pub fn parse(text: &str, var: &str) -> Result<(Tower, Elem)> {
    let mut t = Tower::new(var);
    let e = parse_into(&mut t, text, var)?;
    Ok((t, e))
}

/// Adds to `tower` the generators occurring in a claim.
pub fn claim_generators(tower: &mut Tower, text: &str, var: &str) -> Result<()> {
    let ast = parse_ast(text, var)?;
    let mut ctx = Ctx::new(tower.clone());
    Eval { ctx: &mut ctx, claim: true, collect: true, depth: 0 }.eval(&ast)?;
    *tower = ctx.tower;
    Ok(())
}

/// Parses a claimed antiderivative. Its generators must already be in the
/// tower (see `claim_generators`).
pub fn parse_claim(ctx: &mut Ctx, text: &str, var: &str) -> Result<IntegralExpr> {
    let ast = parse_ast(text, var)?;
    let before = ctx.tower.len();
    let v = Eval { ctx, claim: true, collect: false, depth: 0 }.eval(&ast)?;
    if ctx.tower.len() != before {
        return Err(Error::Internal("claim introduced generators after the registry was built".into()));
    }
    let elementary = ctx.normalize(&v.poly)?;
    Ok(IntegralExpr { elementary, root_sums: Vec::new(), terms: v.terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::render::render_elem;

    #[test]
    fn examples() {
        let (t, e) = parse("x^2/(x-1)", "x").unwrap();
        assert_eq!(t.len(), 1);
        let x = Elem::gen(0);
        assert_eq!(e, x.mul(&x).div(&x.sub(&Elem::int(1))));
        let (t, e) = parse("log(x)*exp(x)", "x").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(e, Elem::gen(1).mul(&Elem::gen(2)));
        assert_eq!(parse("log(", "x").unwrap_err(), Error::Parse { offset: 4, message: "unexpected end of input".into() });
        assert!(matches!(parse("y + 1", "x"), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse("Li(2, x)", "x"), Err(Error::Domain(_))));
    }

    #[test]
    fn precedence_and_simplification() {
        let (_, e) = parse("-x^2", "x").unwrap();
        assert_eq!(e, Elem::gen(0).pow(2).neg());
        let (_, e) = parse("2^-1*x", "x").unwrap();
        assert_eq!(e, Elem::gen(0).div(&Elem::int(2)));
        let (t, e) = parse("log(exp(x^2)) + exp(log(x+1))", "x").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(e, Elem::gen(0).pow(2).add(&Elem::gen(0)).add(&Elem::int(1)));
        let (_, e) = parse("0.25*x", "x").unwrap();
        assert_eq!(e, Elem::gen(0).div(&Elem::int(4)));
    }

    #[test]
    fn render_round_trip() {
        for s in ["x^2/(x-1)", "log(x)*exp(x)/(x+exp(x))", "(3*x - 1/2)/(x^3 + 2)", "exp(x^2)*log(x+1)^2 - 1"] {
            let (mut t, e) = parse(s, "x").unwrap();
            let r = render_elem(&t, &e);
            assert_eq!(parse_into(&mut t, &r, "x").unwrap(), e, "{r}");
        }
    }

    #[test]
    fn claims() {
        let (mut t, _) = parse("log(1-x)/x", "x").unwrap();
        claim_generators(&mut t, "Li(2, x)", "x").unwrap();
        let mut ctx = Ctx::new(t);
        let c = parse_claim(&mut ctx, "-Li(2, x)", "x").unwrap();
        assert_eq!(c.terms, vec![DilogTerm { d: Constant::int(-1), h: Elem::gen(0), k: 1 }]);
        let f = LogPoly::constant(Elem::gen(1).div(&Elem::gen(0)));
        assert!(crate::engine::verify(&mut ctx, &c, &f).unwrap());
        let c = parse_claim(&mut ctx, "I(1, x) + log(2)", "x").unwrap();
        assert!(c.terms.is_empty());
        assert!(matches!(parse_claim(&mut ctx, "x*Li(2, x)", "x"), Err(Error::Domain(_))));
    }
}
