//! Canonical elements of a transcendental tower Q(x)(θ_1)...(θ_n).
//!
//! An element of level `v` is a reduced fraction of polynomials in the
//! generator `v` whose coefficients are elements of strictly lower level. The
//! denominator is monic and coprime to the numerator, and an element never
//! carries a generator it does not depend on, so structural equality is field
//! equality.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::linrel::eval_at;
use crate::arith::{Constant, FieldOps, Poly};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    C(Constant),
    F(Arc<Frac>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frac {
    pub var: usize,
    pub num: Poly<Elem>,
    pub den: Poly<Elem>,
}

pub type EPoly = Poly<Elem>;

impl Elem {
    pub fn int(n: i64) -> Self {
        Elem::C(Constant::int(n))
    }

    pub fn rat(n: i64, d: i64) -> Self {
        Elem::C(Constant::rat(n, d))
    }

    pub fn q(q: BigRational) -> Self {
        Elem::C(Constant::Rat(q))
    }

    pub fn constant(c: Constant) -> Self {
        Elem::C(c)
    }

    /// The generator with index `v` (0 is the base variable).
    pub fn gen(v: usize) -> Self {
        Elem::from_frac(v, Poly::var(), Poly::one())
    }

    /// `None` for constants, otherwise the highest generator index present.
    pub fn level(&self) -> Option<usize> {
        match self {
            Elem::C(_) => None,
            Elem::F(f) => Some(f.var),
        }
    }

    pub fn as_constant(&self) -> Option<&Constant> {
        match self {
            Elem::C(c) => Some(c),
            Elem::F(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.as_constant().and_then(|c| c.as_rational())
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Elem::C(_))
    }

    /// Builds the canonical form of `num/den` in generator `var`.
    pub fn from_frac(var: usize, num: EPoly, den: EPoly) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Elem::int(0);
        }
        let (num, den) = if den.deg() == 0 {
            (num, den)
        } else {
            let g = gcd_in(&num, &den);
            if g.deg() > 0 {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            } else {
                (num, den)
            }
        };
        let lc = den.lc();
        let (num, den) = if lc.is_one() {
            (num, den)
        } else {
            let inv = lc.inv();
            (num.scale(&inv), den.scale(&inv))
        };
        if den.deg() == 0 && num.deg() == 0 {
            return num.coeff(0);
        }
        Elem::F(Arc::new(Frac { var, num, den }))
    }

    pub fn from_poly(var: usize, p: EPoly) -> Self {
        Elem::from_frac(var, p, Poly::one())
    }

    /// Numerator and denominator as polynomials in generator `var`; elements of
    /// lower level are constant polynomials.
    pub fn parts_in(&self, var: usize) -> (EPoly, EPoly) {
        match self {
            Elem::F(f) if f.var == var => (f.num.clone(), f.den.clone()),
            _ => {
                debug_assert!(self.level().is_none_or(|l| l < var));
                (Poly::constant(self.clone()), Poly::one())
            }
        }
    }

    pub fn numer_in(&self, var: usize) -> EPoly {
        self.parts_in(var).0
    }

    pub fn denom_in(&self, var: usize) -> EPoly {
        self.parts_in(var).1
    }

    /// Whether the element is a polynomial in its top generator.
    pub fn is_poly_in(&self, var: usize) -> bool {
        self.denom_in(var).deg() == 0
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Elem::int(1);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Substitutes `value` for generator `var` everywhere; `None` if a
    /// denominator vanishes.
    pub fn subst(&self, var: usize, value: &Elem) -> Option<Elem> {
        match self {
            Elem::C(_) => Some(self.clone()),
            Elem::F(f) if f.var < var => Some(self.clone()),
            Elem::F(f) if f.var == var => {
                let n = eval_poly(&f.num, value);
                let d = eval_poly(&f.den, value);
                if d.is_zero() {
                    None
                } else {
                    Some(n.div(&d))
                }
            }
            Elem::F(f) => {
                let n = subst_poly(&f.num, f.var, var, value)?;
                let d = subst_poly(&f.den, f.var, var, value)?;
                if d.is_zero() {
                    None
                } else {
                    Some(n.div(&d))
                }
            }
        }
    }

    /// Every constant appearing in the canonical form (for field checks).
    pub fn constants(&self, out: &mut Vec<Constant>) {
        match self {
            Elem::C(c) => out.push(c.clone()),
            Elem::F(f) => {
                for c in f.num.coeffs().iter().chain(f.den.coeffs()) {
                    c.constants(out);
                }
            }
        }
    }

    /// True when every constant is rational.
    pub fn is_rational_coeffs(&self) -> bool {
        let mut v = Vec::new();
        self.constants(&mut v);
        v.iter().all(|c| c.as_rational().is_some())
    }

    /// Generators occurring in the element.
    pub fn generators(&self, out: &mut std::collections::BTreeSet<usize>) {
        if let Elem::F(f) = self {
            out.insert(f.var);
            for c in f.num.coeffs().iter().chain(f.den.coeffs()) {
                c.generators(out);
            }
        }
    }

    /// Size measure used for deterministic tie breaking: total degree, then
    /// number of terms.
    pub fn complexity(&self) -> (usize, usize) {
        match self {
            Elem::C(_) => (0, 1),
            Elem::F(f) => {
                let mut deg = f.num.deg() + f.den.deg();
                let mut terms = 0;
                for c in f.num.coeffs().iter().chain(f.den.coeffs()) {
                    if c.is_zero() {
                        continue;
                    }
                    let (d, t) = c.complexity();
                    deg += d;
                    terms += t;
                }
                (deg, terms)
            }
        }
    }
}

fn eval_poly(p: &EPoly, value: &Elem) -> Elem {
    let mut acc = Elem::int(0);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(value).add(c);
    }
    acc
}

fn subst_poly(p: &EPoly, pvar: usize, var: usize, value: &Elem) -> Option<Elem> {
    let g = Elem::gen(pvar);
    let mut acc = Elem::int(0);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&g).add(&c.subst(var, value)?);
    }
    Some(acc)
}

fn lift2(a: &Elem, b: &Elem) -> Option<(usize, EPoly, EPoly, EPoly, EPoly)> {
    let v = match (a.level(), b.level()) {
        (None, None) => return None,
        (Some(x), None) | (None, Some(x)) => x,
        (Some(x), Some(y)) => x.max(y),
    };
    let (an, ad) = a.parts_in(v);
    let (bn, bd) = b.parts_in(v);
    Some((v, an, ad, bn, bd))
}

/// gcd of two polynomials over the field below their generator.
///
/// The coefficients are first specialized at a fixed rational point. If both
/// leading coefficients survive and the images are coprime, the resultant of
/// the originals is nonzero, so their gcd is 1 and the costly Euclidean
/// algorithm over the coefficient field is skipped.
fn gcd_in(a: &EPoly, b: &EPoly) -> EPoly {
    if a.deg() > 0 && b.deg() > 0 && specialized_coprime(a, b) {
        return Poly::one();
    }
    a.gcd(b)
}

fn specialized_coprime(a: &EPoly, b: &EPoly) -> bool {
    let level = a.coeffs().iter().chain(b.coeffs()).filter_map(|c| c.level()).max();
    let point: Vec<Constant> = (0..level.map_or(0, |l| l + 1))
        .map(|j| Constant::rat(2 * j as i64 + 13, 3 * j as i64 + 7))
        .collect();
    let image = |p: &EPoly| -> Option<Poly<Constant>> {
        let cs = p.coeffs().iter().map(|c| eval_at(c, &point)).collect::<Option<Vec<_>>>()?;
        let q = Poly::new(cs);
        (q.deg() == p.deg()).then_some(q)
    };
    match (image(a), image(b)) {
        (Some(x), Some(y)) => x.gcd(&y).deg() == 0,
        _ => false,
    }
}

impl FieldOps for Elem {
    fn zero() -> Self {
        Elem::int(0)
    }
    fn one() -> Self {
        Elem::int(1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Elem::C(c) if c.is_zero())
    }
    fn is_one(&self) -> bool {
        matches!(self, Elem::C(c) if c.is_one())
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        match lift2(self, o) {
            None => Elem::C(self.as_constant().unwrap().add(o.as_constant().unwrap())),
            Some((v, an, ad, bn, bd)) => {
                if ad == bd {
                    Elem::from_frac(v, an.add(&bn), ad)
                } else if bd.is_one() {
                    // gcd(an + bn*ad, ad) = gcd(an, ad) = 1
                    Elem::reduced(v, an.add(&bn.mul(&ad)), ad)
                } else if ad.is_one() {
                    Elem::reduced(v, bn.add(&an.mul(&bd)), bd)
                } else {
                    // Henrici: only gcds against the denominators
                    let g = gcd_in(&ad, &bd);
                    if g.deg() == 0 {
                        return Elem::reduced(v, an.mul(&bd).add(&bn.mul(&ad)), ad.mul(&bd));
                    }
                    let ad1 = ad.div_exact(&g).unwrap();
                    let bd1 = bd.div_exact(&g).unwrap();
                    let t = an.mul(&bd1).add(&bn.mul(&ad1));
                    let g2 = gcd_in(&t, &g);
                    let (t, g) = if g2.deg() == 0 { (t, g) } else { (t.div_exact(&g2).unwrap(), g.div_exact(&g2).unwrap()) };
                    Elem::reduced(v, t, ad1.mul(&bd1).mul(&g))
                }
            }
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Elem::int(0);
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        match lift2(self, o) {
            None => Elem::C(self.as_constant().unwrap().mul(o.as_constant().unwrap())),
            Some((v, an, ad, bn, bd)) => {
                if an.deg() == 0 && bd.is_one() && self.level() != Some(v) {
                    // scalar times element of level v
                    return Elem::reduced(v, bn.scale(&an.coeff(0)), bd);
                }
                if bn.deg() == 0 && ad.is_one() && o.level() != Some(v) {
                    return Elem::reduced(v, an.scale(&bn.coeff(0)), ad);
                }
                if self.level() != Some(v) {
                    return Elem::from_frac(v, bn.scale(&an.coeff(0)), bd);
                }
                if o.level() != Some(v) {
                    return Elem::from_frac(v, an.scale(&bn.coeff(0)), ad);
                }
                let g1 = gcd_in(&an, &bd);
                let g2 = gcd_in(&bn, &ad);
                let an = an.div_exact(&g1).unwrap();
                let bd = bd.div_exact(&g1).unwrap();
                let bn = bn.div_exact(&g2).unwrap();
                let ad = ad.div_exact(&g2).unwrap();
                Elem::reduced(v, an.mul(&bn), ad.mul(&bd))
            }
        }
    }
    fn neg(&self) -> Self {
        match self {
            Elem::C(c) => Elem::C(c.neg()),
            Elem::F(f) => Elem::F(Arc::new(Frac { var: f.var, num: f.num.neg(), den: f.den.clone() })),
        }
    }
    fn inv(&self) -> Self {
        match self {
            Elem::C(c) => Elem::C(c.inv()),
            Elem::F(f) => Elem::reduced(f.var, f.den.clone(), f.num.clone()),
        }
    }
    fn from_int(n: i64) -> Self {
        Elem::int(n)
    }
}

impl Elem {
    /// Canonical form of an already coprime fraction (only normalizes the
    /// leading coefficient and collapses the level).
    fn reduced(var: usize, num: EPoly, den: EPoly) -> Self {
        if num.is_zero() {
            return Elem::int(0);
        }
        let lc = den.lc();
        let (num, den) = if lc.is_one() {
            (num, den)
        } else {
            let inv = lc.inv();
            (num.scale(&inv), den.scale(&inv))
        };
        if den.deg() == 0 && num.deg() == 0 {
            return num.coeff(0);
        }
        Elem::F(Arc::new(Frac { var, num, den }))
    }
}

impl Default for Elem {
    fn default() -> Self {
        Elem::int(0)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::C(c) => write!(f, "{c}"),
            Elem::F(fr) => write!(f, "[t{}: {:?} / {:?}]", fr.var, fr.num.coeffs(), fr.den.coeffs()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Elem {
        Elem::gen(0)
    }

    #[test]
    fn normalize_examples() {
        // (x^2 - 1)/(x - 1) = x + 1
        let n = x().mul(&x()).sub(&Elem::int(1));
        let d = x().sub(&Elem::int(1));
        assert_eq!(n.div(&d), x().add(&Elem::int(1)));
        // 2x/4 = x/2
        assert_eq!(x().mul(&Elem::int(2)).div(&Elem::int(4)), x().mul(&Elem::rat(1, 2)));
        // t*x/t = x
        let t = Elem::gen(1);
        assert_eq!(t.mul(&x()).div(&t), x());
        assert_eq!(t.mul(&x()).div(&t).level(), Some(0));
    }

    #[test]
    fn cancellation_across_levels() {
        let t = Elem::gen(1);
        let a = t.add(&x()).div(&x());
        let b = a.sub(&t.div(&x()));
        assert_eq!(b, Elem::int(1));
    }

    #[test]
    fn substitution() {
        let t = Elem::gen(1);
        let h = t.mul(&x()).add(&Elem::int(1)).div(&t.sub(&Elem::int(2)));
        let v = h.subst(1, &Elem::int(3)).unwrap();
        assert_eq!(v, x().mul(&Elem::int(3)).add(&Elem::int(1)));
        assert!(h.subst(1, &Elem::int(2)).is_none());
    }
}
