//! Polynomials in logarithm symbols with tower-element coefficients.

use std::collections::BTreeMap;

use crate::arith::{Constant, FieldOps};
use crate::tower::Elem;

/// A logarithm variable: a registry atom, or (in flat form only) a log
/// generator of the tower treated as an indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LVar {
    Atom(usize),
    Gen(usize),
}

pub type Mono = BTreeMap<LVar, u32>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogPoly {
    terms: BTreeMap<Mono, Elem>,
}

impl LogPoly {
    pub fn zero() -> Self {
        LogPoly { terms: BTreeMap::new() }
    }

    pub fn constant(e: Elem) -> Self {
        let mut p = LogPoly::zero();
        p.add_term(Mono::new(), e);
        p
    }

    pub fn var(v: LVar) -> Self {
        let mut m = Mono::new();
        m.insert(v, 1);
        let mut p = LogPoly::zero();
        p.add_term(m, Elem::int(1));
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Elem)>) -> Self {
        let mut p = LogPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: Elem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the empty monomial.
    pub fn constant_term(&self) -> Elem {
        self.terms.get(&Mono::new()).cloned().unwrap_or_else(|| Elem::int(0))
    }

    pub fn coeff(&self, m: &Mono) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| Elem::int(0))
    }

    /// Field element when no log variable occurs.
    pub fn as_elem(&self) -> Option<Elem> {
        if self.terms.keys().all(|m| m.is_empty()) {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(mono_degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<LVar> {
        let mut v: Vec<LVar> = self.terms.keys().flat_map(|m| m.keys().copied()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        LogPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, e: &Elem) -> Self {
        if e.is_zero() {
            return LogPoly::zero();
        }
        LogPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(e))).collect() }
    }

    pub fn scale_c(&self, c: &Constant) -> Self {
        self.scale(&Elem::C(c.clone()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = LogPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(mono_mul(m1, m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = LogPoly::constant(Elem::int(1));
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn map_coeffs(&self, f: impl Fn(&Elem) -> Elem) -> Self {
        LogPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Replaces every variable by a log polynomial.
    pub fn substitute(&self, f: &impl Fn(LVar) -> LogPoly) -> Self {
        let mut cache: BTreeMap<LVar, LogPoly> = BTreeMap::new();
        let mut r = LogPoly::zero();
        for (m, c) in &self.terms {
            let mut t = LogPoly::constant(c.clone());
            for (v, e) in m {
                let s = cache.entry(*v).or_insert_with(|| f(*v)).clone();
                t = t.mul(&s.pow(*e));
            }
            r = r.add(&t);
        }
        r
    }

    /// Linear part: coefficients of degree-one monomials.
    pub fn linear_coeffs(&self) -> BTreeMap<LVar, Elem> {
        self.terms
            .iter()
            .filter(|(m, _)| mono_degree(m) == 1)
            .map(|(m, c)| (*m.keys().next().unwrap(), c.clone()))
            .collect()
    }
}

pub fn mono_degree(m: &Mono) -> u32 {
    m.values().sum()
}

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut r = a.clone();
    for (v, e) in b {
        *r.entry(*v).or_insert(0) += e;
    }
    r
}

pub fn mono_of(vs: &[(LVar, u32)]) -> Mono {
    let mut m = Mono::new();
    for (v, e) in vs {
        if *e > 0 {
            *m.entry(*v).or_insert(0) += e;
        }
    }
    m
}
