//! Canonical logarithm symbols.
//!
//! Every nonzero tower element factors as a constant times powers of monic
//! polynomials in the generators. The registry keeps those factors as atoms:
//! irreducible factors over Q at level 0, a coprime basis above it, rational
//! primes for constants, and opaque atoms for algebraic constants. Logs of
//! roots of unity vanish and `log(-f) = log(f)`.
//!
//! Logarithms that are already tower generators are eliminated: each log
//! generator fixes one pivot atom, so a logarithm is returned as a linear
//! combination of the remaining atoms plus a tower element.

pub mod logpoly;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::factor::factor_integer;
use crate::arith::linalg::nullspace;
use crate::arith::{Constant, FieldOps, Poly};
use crate::error::{Error, Result};
use crate::frontend::render::render_elem;
use crate::places::factor_epoly;
use crate::tower::{EPoly, Elem, MonomialKind, Tower};

pub use logpoly::{mono_degree, mono_mul, mono_of, LVar, LogPoly, Mono};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomKind {
    /// Monic squarefree polynomial in generator `level`.
    Poly { level: usize, poly: EPoly },
    Prime(BigInt),
    AlgConst(Constant),
}

#[derive(Clone, Debug)]
struct Atom {
    kind: AtomKind,
    /// Set once the atom has been refined into coprime pieces.
    split: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
struct Pivot {
    atom: usize,
    /// pivot atom = Σ expr[b]·b + rem
    expr: BTreeMap<usize, Constant>,
    rem: Elem,
}

#[derive(Clone, Debug)]
struct Elimination {
    ngens: usize,
    natoms: usize,
    pivots: Vec<Pivot>,
}

/// Append-only registry of log atoms.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    atoms: Vec<Atom>,
    elim: Option<Elimination>,
}

#[derive(Clone, Debug, Default)]
struct Raw {
    coords: BTreeMap<usize, Constant>,
    rem: Option<Elem>,
}

impl Raw {
    fn add(&mut self, id: usize, c: &Constant) {
        let e = self.coords.entry(id).or_insert_with(|| Constant::int(0));
        *e = e.add(c);
    }
    fn add_rem(&mut self, e: &Elem) {
        let r = self.rem.take().unwrap_or_else(|| Elem::int(0));
        self.rem = Some(r.add(e));
    }
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    pub fn kind(&self, id: usize) -> &AtomKind {
        &self.atoms[id].kind
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The element whose logarithm the atom denotes.
    pub fn atom_value(&self, id: usize) -> Elem {
        match &self.atoms[id].kind {
            AtomKind::Poly { level, poly } => Elem::from_poly(*level, poly.clone()),
            AtomKind::Prime(p) => Elem::q(BigRational::from_integer(p.clone())),
            AtomKind::AlgConst(c) => Elem::C(c.clone()),
        }
    }

    pub fn atom_name(&self, t: &Tower, id: usize) -> String {
        format!("log({})", render_elem(t, &self.atom_value(id)))
    }

    /// Derivative of the atom's logarithm.
    pub fn atom_derivative(&self, t: &Tower, id: usize) -> Elem {
        match &self.atoms[id].kind {
            AtomKind::Poly { .. } => {
                let v = self.atom_value(id);
                t.derive(&v).div(&v)
            }
            _ => Elem::int(0),
        }
    }

    /// Whether the atom is a constant (its log has zero derivative).
    pub fn atom_is_constant(&self, id: usize) -> bool {
        !matches!(self.atoms[id].kind, AtomKind::Poly { .. })
    }

    pub fn atom_level(&self, id: usize) -> Option<usize> {
        match &self.atoms[id].kind {
            AtomKind::Poly { level, .. } => Some(*level),
            _ => None,
        }
    }

    fn push(&mut self, kind: AtomKind) -> usize {
        self.atoms.push(Atom { kind, split: None });
        self.atoms.len() - 1
    }

    fn prime_atom(&mut self, p: &BigInt) -> usize {
        let k = AtomKind::Prime(p.clone());
        match self.atoms.iter().position(|a| a.kind == k) {
            Some(i) => i,
            None => self.push(k),
        }
    }

    fn alg_atom(&mut self, c: &Constant) -> usize {
        let n = c.neg();
        let canon = if n < *c { n } else { c.clone() };
        let k = AtomKind::AlgConst(canon);
        match self.atoms.iter().position(|a| a.kind == k) {
            Some(i) => i,
            None => self.push(k),
        }
    }

    fn live_poly_atoms(&self, level: usize) -> Vec<usize> {
        (0..self.atoms.len())
            .filter(|&i| {
                self.atoms[i].split.is_none()
                    && matches!(&self.atoms[i].kind, AtomKind::Poly { level: l, .. } if *l == level)
            })
            .collect()
    }

    /// Registers a monic squarefree polynomial, refining existing atoms so
    /// that live atoms stay pairwise coprime. Returns the live atoms whose
    /// product is `p`.
    fn register_poly(&mut self, level: usize, p: EPoly) -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = p;
        for a in self.live_poly_atoms(level) {
            if p.deg() == 0 {
                break;
            }
            let AtomKind::Poly { poly: ap, .. } = self.atoms[a].kind.clone() else { unreachable!() };
            let g = p.gcd(&ap);
            if g.deg() == 0 {
                continue;
            }
            p = p.div_exact(&g).unwrap();
            if g == ap {
                out.push(a);
            } else {
                let rest = ap.div_exact(&g).unwrap();
                let ga = self.push(AtomKind::Poly { level, poly: g });
                let ra = self.push(AtomKind::Poly { level, poly: rest });
                self.atoms[a].split = Some(vec![ga, ra]);
                out.push(ga);
            }
        }
        if p.deg() > 0 {
            out.push(self.push(AtomKind::Poly { level, poly: p.monic() }));
        }
        out
    }

    fn decompose_const(&mut self, c: &Constant, mult: &Constant, raw: &mut Raw) -> Result<()> {
        if c.is_zero() {
            return Err(Error::Domain("log(0) is undefined".into()));
        }
        if c.is_root_of_unity() {
            return Ok(());
        }
        match c {
            Constant::Rat(q) => {
                for (p, e) in factor_integer(q.numer()) {
                    let id = self.prime_atom(&p);
                    raw.add(id, &mult.mul(&Constant::int(e as i64)));
                }
                for (p, e) in factor_integer(q.denom()) {
                    let id = self.prime_atom(&p);
                    raw.add(id, &mult.mul(&Constant::int(-(e as i64))));
                }
            }
            Constant::Alg(_) => {
                let id = self.alg_atom(c);
                raw.add(id, mult);
            }
        }
        Ok(())
    }

    fn decompose(&mut self, t: &Tower, f: &Elem, mult: &Constant, raw: &mut Raw) -> Result<()> {
        let Some(level) = f.level() else {
            return self.decompose_const(f.as_constant().unwrap(), mult, raw);
        };
        let (num, den) = f.parts_in(level);
        for (p, m) in [(num, mult.clone()), (den, mult.neg())] {
            self.decompose(t, &p.lc(), &m, raw)?;
            let mut q = p.monic();
            if let Some(MonomialKind::Exp(u)) = t.gens().get(level).map(|g| &g.kind) {
                let k = q.coeffs().iter().take_while(|c| c.is_zero()).count();
                if k > 0 {
                    q = Poly::new(q.coeffs()[k..].to_vec());
                    raw.add_rem(&u.mul(&Elem::C(m.mul(&Constant::int(k as i64)))));
                }
            }
            for (fac, e) in factor_epoly(&q) {
                for a in self.register_poly(level, fac) {
                    raw.add(a, &m.mul(&Constant::int(e as i64)));
                }
            }
        }
        Ok(())
    }

    fn expand_into(&self, id: usize, c: &Constant, out: &mut BTreeMap<usize, Constant>) {
        match &self.atoms[id].split {
            Some(ch) => {
                for &k in ch {
                    self.expand_into(k, c, out);
                }
            }
            None => {
                let e = out.entry(id).or_insert_with(|| Constant::int(0));
                *e = e.add(c);
            }
        }
    }

    fn expand(&self, coords: &BTreeMap<usize, Constant>) -> BTreeMap<usize, Constant> {
        let mut out = BTreeMap::new();
        for (id, c) in coords {
            self.expand_into(*id, c, &mut out);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn elimination(&mut self, t: &Tower) -> Result<Vec<Pivot>> {
        if let Some(e) = &self.elim {
            if e.ngens == t.len() && e.natoms == self.atoms.len() {
                return Ok(e.pivots.clone());
            }
        }
        let mut raws = Vec::new();
        for (i, g) in t.gens().iter().enumerate() {
            if let MonomialKind::Log(v) = &g.kind {
                let mut raw = Raw::default();
                self.decompose(t, v, &Constant::int(1), &mut raw)?;
                raws.push((i, raw));
            }
        }
        let mut pivots: Vec<Pivot> = Vec::new();
        for (i, raw) in raws {
            let mut row = self.expand(&raw.coords);
            let mut rem = raw.rem.unwrap_or_else(|| Elem::int(0));
            for pv in &pivots {
                if let Some(c) = row.remove(&pv.atom) {
                    for (b, x) in &pv.expr {
                        let e = row.entry(*b).or_insert_with(|| Constant::int(0));
                        *e = e.add(&c.mul(x));
                    }
                    rem = rem.add(&pv.rem.mul(&Elem::C(c)));
                }
            }
            row.retain(|_, c| !c.is_zero());
            let Some(&p) = row
                .keys()
                .max_by_key(|&&a| (self.atom_level(a).map_or(0, |l| l + 1), a))
            else {
                return Err(Error::Internal(format!("log generator {i} is not independent")));
            };
            let cp = row.remove(&p).unwrap();
            let inv = cp.inv();
            let expr: BTreeMap<usize, Constant> = row.iter().map(|(b, c)| (*b, c.mul(&inv).neg())).collect();
            let prem = Elem::gen(i).sub(&rem).mul(&Elem::C(inv));
            for pv in pivots.iter_mut() {
                if let Some(c) = pv.expr.remove(&p) {
                    for (b, x) in &expr {
                        let e = pv.expr.entry(*b).or_insert_with(|| Constant::int(0));
                        *e = e.add(&c.mul(x));
                    }
                    pv.expr.retain(|_, c| !c.is_zero());
                    pv.rem = pv.rem.add(&prem.mul(&Elem::C(c)));
                }
            }
            pivots.push(Pivot { atom: p, expr, rem: prem });
        }
        self.elim = Some(Elimination { ngens: t.len(), natoms: self.atoms.len(), pivots: pivots.clone() });
        Ok(pivots)
    }

    fn normal(&mut self, t: &Tower, raw: Raw) -> Result<LogPoly> {
        let mut live = self.expand(&raw.coords);
        let pivots = self.elimination(t)?;
        // elimination may have refined atoms further
        live = self.expand(&live);
        let mut rem = raw.rem.unwrap_or_else(|| Elem::int(0));
        let mut coords: BTreeMap<usize, Constant> = BTreeMap::new();
        for (a, c) in live {
            match pivots.iter().find(|p| p.atom == a) {
                Some(pv) => {
                    for (b, x) in &pv.expr {
                        let e = coords.entry(*b).or_insert_with(|| Constant::int(0));
                        *e = e.add(&c.mul(x));
                    }
                    rem = rem.add(&pv.rem.mul(&Elem::C(c)));
                }
                None => {
                    let e = coords.entry(a).or_insert_with(|| Constant::int(0));
                    *e = e.add(&c);
                }
            }
        }
        let mut lp = LogPoly::constant(rem);
        for (a, c) in coords {
            if !c.is_zero() {
                lp = lp.add(&LogPoly::var(LVar::Atom(a)).scale_c(&c));
            }
        }
        Ok(lp)
    }

    /// `log(f)` in normal form: a linear polynomial in live atoms.
    pub fn log_of(&mut self, t: &Tower, f: &Elem) -> Result<LogPoly> {
        if f.is_zero() {
            return Err(Error::Domain("log(0) is undefined".into()));
        }
        let mut raw = Raw::default();
        self.decompose(t, f, &Constant::int(1), &mut raw)?;
        self.normal(t, raw)
    }

    /// Rewrites atom variables that have since been refined or eliminated.
    pub fn renormalize(&mut self, t: &Tower, p: &LogPoly) -> Result<LogPoly> {
        let mut subs: BTreeMap<LVar, LogPoly> = BTreeMap::new();
        for v in p.vars() {
            let s = match v {
                LVar::Atom(a) => {
                    let mut raw = Raw::default();
                    raw.add(a, &Constant::int(1));
                    self.normal(t, raw)?
                }
                LVar::Gen(_) => LogPoly::var(v),
            };
            subs.insert(v, s);
        }
        Ok(p.substitute(&|v| subs[&v].clone()))
    }

    /// Derivative of a log polynomial (tower form or flat form).
    pub fn derive(&self, t: &Tower, p: &LogPoly) -> LogPoly {
        let mut r = LogPoly::zero();
        for (m, c) in p.terms() {
            let dc = t.derive(c);
            r.add_term(m.clone(), dc);
            for (v, e) in m {
                let dv = match v {
                    LVar::Atom(a) => self.atom_derivative(t, *a),
                    LVar::Gen(i) => t.gen(*i).deriv.clone(),
                };
                if dv.is_zero() {
                    continue;
                }
                let mut m2 = m.clone();
                if *e == 1 {
                    m2.remove(v);
                } else {
                    m2.insert(*v, e - 1);
                }
                r.add_term(m2, c.mul(&dv).mul(&Elem::int(*e as i64)));
            }
        }
        r
    }

    pub fn var_name(&self, t: &Tower, v: LVar) -> String {
        match v {
            LVar::Atom(a) => self.atom_name(t, a),
            LVar::Gen(i) => crate::frontend::render::render_gen(t, i),
        }
    }
}

/// `Σ c_i·log(sym_i) + remainder` with constant coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogCombination {
    pub coords: BTreeMap<LVar, Constant>,
    pub remainder: Elem,
}

impl LogCombination {
    pub fn from_logpoly(p: &LogPoly) -> Option<Self> {
        if p.degree() > 1 {
            return None;
        }
        let mut coords = BTreeMap::new();
        for (v, c) in p.linear_coeffs() {
            coords.insert(v, c.as_constant()?.clone());
        }
        Some(LogCombination { coords, remainder: p.constant_term() })
    }

    pub fn to_logpoly(&self) -> LogPoly {
        let mut lp = LogPoly::constant(self.remainder.clone());
        for (v, c) in &self.coords {
            lp = lp.add(&LogPoly::var(*v).scale_c(c));
        }
        lp
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty() && self.remainder.is_zero()
    }
}

pub fn log_of(reg: &mut Registry, t: &Tower, f: &Elem) -> Result<LogCombination> {
    let p = reg.log_of(t, f)?;
    Ok(LogCombination::from_logpoly(&p).expect("logarithms are linear"))
}

/// Constants `c` (not all zero) and `g` with `Σ c_i·logs_i = g`, if any.
pub fn log_linear_relation(
    reg: &mut Registry,
    t: &Tower,
    logs: &[LogCombination],
) -> Result<Option<(Vec<Constant>, Elem)>> {
    let normed: Vec<LogCombination> = logs
        .iter()
        .map(|l| {
            let p = reg.renormalize(t, &l.to_logpoly())?;
            LogCombination::from_logpoly(&p).ok_or_else(|| Error::Internal("non-constant coordinates".into()))
        })
        .collect::<Result<_>>()?;
    let mut vars: Vec<LVar> = normed.iter().flat_map(|l| l.coords.keys().copied()).collect();
    vars.sort();
    vars.dedup();
    let rows: Vec<Vec<Constant>> = vars
        .iter()
        .map(|v| {
            normed
                .iter()
                .map(|l| l.coords.get(v).cloned().unwrap_or_else(|| Constant::int(0)))
                .collect()
        })
        .collect();
    let n = logs.len();
    let basis = if rows.is_empty() {
        (0..n)
            .map(|i| (0..n).map(|j| Constant::int((i == j) as i64)).collect())
            .collect()
    } else {
        nullspace(&rows, n)
    };
    let Some(mut v) = basis.into_iter().next() else { return Ok(None) };
    if let Some(qs) = v.iter().map(|c| c.as_rational().cloned()).collect::<Option<Vec<_>>>() {
        let l = qs.iter().fold(BigInt::from(1), |a, q| a.lcm(q.denom()));
        let ints: Vec<BigInt> = qs.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::from(0), |a, c| a.gcd(c));
        if ints.iter().find(|c| !c.is_zero()).unwrap().is_negative() {
            g = -g;
        }
        v = ints.iter().map(|c| Constant::Rat(BigRational::new(c.clone(), g.clone()))).collect();
    }
    let g = normed
        .iter()
        .zip(&v)
        .fold(Elem::int(0), |acc, (l, c)| acc.add(&l.remainder.mul(&Elem::C(c.clone()))));
    Ok(Some((v, g)))
}
