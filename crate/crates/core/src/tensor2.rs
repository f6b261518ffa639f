//! Rank-2 tensors over the constants on formal symbols.

use std::collections::BTreeMap;

use crate::arith::{Constant, FieldOps};
use crate::error::{Error, Result};
use crate::logsym::{LVar, LogCombination, LogPoly, Registry};
use crate::places::Place;
use crate::tower::{Elem, Tower};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Log(LVar),
    /// Basis vector attached to a place.
    Delta(Place),
    /// Free vector of an auxiliary space.
    X(String),
}

/// A finite linear combination of symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vector(BTreeMap<Sym, Constant>);

impl Vector {
    pub fn zero() -> Self {
        Vector::default()
    }

    pub fn sym(s: Sym) -> Self {
        let mut v = Vector::zero();
        v.add_term(s, Constant::int(1));
        v
    }

    pub fn add_term(&mut self, s: Sym, c: Constant) {
        let e = self.0.entry(s.clone()).or_insert_with(|| Constant::int(0));
        *e = e.add(&c);
        if e.is_zero() {
            self.0.remove(&s);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Sym, Constant> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (s, c) in &o.0 {
            r.add_term(s.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Constant) -> Self {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector(self.0.iter().map(|(s, x)| (s.clone(), x.mul(c))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Constant::int(-1)))
    }

    /// The log-symbol part of a combination; fails if a field-element
    /// remainder is present.
    pub fn from_log(l: &LogCombination) -> Result<Self> {
        if !l.remainder.is_zero() {
            return Err(Error::Domain("logarithm has a non-symbolic part".into()));
        }
        let mut v = Vector::zero();
        for (s, c) in &l.coords {
            v.add_term(Sym::Log(*s), c.clone());
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor2(BTreeMap<(Sym, Sym), Constant>);

impl Tensor2 {
    pub fn zero() -> Self {
        Tensor2::default()
    }

    pub fn outer(a: &Vector, b: &Vector) -> Self {
        let mut t = Tensor2::zero();
        for (s, x) in &a.0 {
            for (r, y) in &b.0 {
                t.add_term(s.clone(), r.clone(), x.mul(y));
            }
        }
        t
    }

    pub fn add_term(&mut self, a: Sym, b: Sym, c: Constant) {
        let k = (a, b);
        let e = self.0.entry(k.clone()).or_insert_with(|| Constant::int(0));
        *e = e.add(&c);
        if e.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(Sym, Sym), Constant> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for ((a, b), c) in &o.0 {
            r.add_term(a.clone(), b.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Constant) -> Self {
        if c.is_zero() {
            return Tensor2::zero();
        }
        Tensor2(self.0.iter().map(|(k, x)| (k.clone(), x.mul(c))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Constant::int(-1)))
    }

    pub fn transpose(&self) -> Self {
        Tensor2(self.0.iter().map(|((a, b), c)| ((b.clone(), a.clone()), c.clone())).collect())
    }

    pub fn symmetric_part(&self) -> Self {
        self.add(&self.transpose()).scale(&Constant::rat(1, 2))
    }

    pub fn antisymmetric_part(&self) -> Self {
        self.sub(&self.transpose()).scale(&Constant::rat(1, 2))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }
}

/// Inputs of the symmetric-residual identity, indexed over a common set.
#[derive(Clone, Debug)]
pub struct TensEqData {
    pub u: Vector,
    pub v: Vector,
    pub w: Vec<Vector>,
    /// `wij[i][j]`
    pub wij: Vec<Vec<Vector>>,
    pub k: Vec<i64>,
    pub l: Vec<i64>,
}

fn int(n: i64) -> Constant {
    Constant::int(n)
}

fn sum_weighted(coef: &[i64], vs: impl Iterator<Item = Vector>) -> Vector {
    coef.iter().zip(vs).fold(Vector::zero(), |acc, (c, v)| acc.add(&v.scale(&int(*c))))
}

/// `w_i⊗w_j + w_i⊗w_{j,i} + w_{i,j}⊗w_j`
pub fn m_tensor(d: &TensEqData, i: usize, j: usize) -> Tensor2 {
    Tensor2::outer(&d.w[i], &d.w[j])
        .add(&Tensor2::outer(&d.w[i], &d.wij[j][i]))
        .add(&Tensor2::outer(&d.wij[i][j], &d.w[j]))
}

/// Checks the hypotheses, using `is_zero` to decide equalities of vectors,
/// and returns
/// `(Σk_i w_i + u)⊗(Σl_j w_j + v) − Σ k_i l_j M_{i,j} − u⊗v`.
pub fn tenseq_residual(d: &TensEqData, is_zero: &dyn Fn(&Vector) -> bool) -> Result<Tensor2> {
    let n = d.w.len();
    if d.k.len() != n || d.l.len() != n || d.wij.len() != n || d.wij.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition("index sets of w, w_ij, k, l differ".into()));
    }
    for i in 0..n {
        if (d.k[i] < 0 || d.l[i] < 0) && d.k[i] != d.l[i] {
            return Err(Error::Precondition(format!("k_{i} = l_{i} fails at a negative index")));
        }
    }
    let col = |j: usize| (0..n).map(move |i| d.wij[i][j].clone());
    for j in 0..n {
        let ku = sum_weighted(&d.k, col(j));
        let lv = sum_weighted(&d.l, col(j));
        if d.l[j] > 0 && !is_zero(&d.u.sub(&ku)) {
            return Err(Error::Precondition(format!("u = Σ k_i w_(i,{j}) fails")));
        }
        if d.k[j] > 0 && !is_zero(&d.v.sub(&lv)) {
            return Err(Error::Precondition(format!("v = Σ l_i w_(i,{j}) fails")));
        }
        if d.k[j] < 0 && !is_zero(&d.v.sub(&lv).sub(&d.u.sub(&ku))) {
            return Err(Error::Precondition(format!(
                "v - Σ l_i w_(i,{j}) = u - Σ k_i w_(i,{j}) fails"
            )));
        }
    }
    let left = sum_weighted(&d.k, d.w.iter().cloned()).add(&d.u);
    let right = sum_weighted(&d.l, d.w.iter().cloned()).add(&d.v);
    let mut r = Tensor2::outer(&left, &right).sub(&Tensor2::outer(&d.u, &d.v));
    for i in 0..n {
        for j in 0..n {
            let c = d.k[i] * d.l[j];
            if c != 0 {
                r = r.sub(&m_tensor(d, i, j).scale(&int(c)));
            }
        }
    }
    Ok(r)
}

/// `t⊗s ↦ (Dt)·s` over log symbols.
pub fn psi(reg: &Registry, t: &Tower, tensor: &Tensor2) -> Result<LogPoly> {
    let mut out = LogPoly::zero();
    for ((a, b), c) in tensor.terms() {
        let (Sym::Log(la), Sym::Log(lb)) = (a, b) else {
            return Err(Error::Domain("formal symbol has no derivative".into()));
        };
        let da = match la {
            LVar::Atom(id) => reg.atom_derivative(t, *id),
            LVar::Gen(i) => t.gen(*i).deriv.clone(),
        };
        out = out.add(&LogPoly::var(*lb).scale(&da.mul(&Elem::C(c.clone()))));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logsym::log_of;

    fn s(name: &str) -> Vector {
        Vector::sym(Sym::X(name.into()))
    }

    #[test]
    fn decomposition() {
        let (a, b) = (s("a"), s("b"));
        let t = Tensor2::outer(&a, &b);
        let sym = t.symmetric_part();
        assert_eq!(sym, t.add(&Tensor2::outer(&b, &a)).scale(&Constant::rat(1, 2)));
        assert_eq!(sym.add(&t.antisymmetric_part()), t);
        assert!(!t.sub(&Tensor2::outer(&b, &a)).is_symmetric());
        assert!(Tensor2::outer(&a, &a).is_symmetric());
    }

    fn one_index(k: i64, u: Vector, v: Vector) -> TensEqData {
        TensEqData { u, v, w: vec![s("w1")], wij: vec![vec![s("w11")]], k: vec![k], l: vec![k] }
    }

    #[test]
    fn residual_examples() {
        let exact = |v: &Vector| v.is_zero();
        let d = TensEqData { k: vec![0], l: vec![0], ..one_index(0, s("p"), s("q")) };
        assert!(tenseq_residual(&d, &exact).unwrap().is_zero());
        assert!(tenseq_residual(&one_index(1, s("w11"), s("w11")), &exact).unwrap().is_zero());

        // k = l = -1: brute-force expansion gives t⊗(−w1) + (−w1)⊗t, t = u + w11
        let u = s("p").add(&s("q").scale(&Constant::int(3)));
        let r = tenseq_residual(&one_index(-1, u.clone(), u.clone()), &exact).unwrap();
        let tv = u.add(&s("w11"));
        let mw = s("w1").scale(&Constant::int(-1));
        assert_eq!(r, Tensor2::outer(&tv, &mw).add(&Tensor2::outer(&mw, &tv)));
        assert!(r.is_symmetric());

        let e = tenseq_residual(&one_index(1, s("p"), s("w11")), &exact).unwrap_err();
        assert!(matches!(e, Error::Precondition(m) if m.contains("u = Σ k_i w_(i,0)")));
    }

    #[test]
    fn psi_examples() {
        let t = Tower::new("x");
        let mut reg = Registry::new();
        let x = Elem::gen(0);
        let lx = Vector::from_log(&log_of(&mut reg, &t, &x).unwrap()).unwrap();
        let lx1 = Vector::from_log(&log_of(&mut reg, &t, &x.add(&Elem::int(1))).unwrap()).unwrap();
        let p = psi(&reg, &t, &Tensor2::outer(&lx, &lx1)).unwrap();
        let Some(Sym::Log(v1)) = lx1.terms().keys().next().cloned() else { panic!() };
        assert_eq!(p, LogPoly::var(v1).scale(&Elem::int(1).div(&x)));

        let sq = Tensor2::outer(&lx, &lx).scale(&Constant::int(2));
        let Some(Sym::Log(v0)) = lx.terms().keys().next().cloned() else { panic!() };
        let lsq = LogPoly::var(v0).pow(2);
        assert_eq!(psi(&reg, &t, &sq).unwrap(), reg.derive(&t, &lsq));
        assert!(psi(&reg, &t, &Tensor2::zero()).unwrap().is_zero());
        assert!(psi(&reg, &t, &Tensor2::outer(&s("a"), &lx)).is_err());
    }
}
