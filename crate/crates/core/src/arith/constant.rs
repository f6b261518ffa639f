//! Constants: rationals and elements of simple algebraic extensions Q(α).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::FieldOps;
use super::poly::Poly;
use super::qpoly::QPoly;

/// A simple extension Q(α) given by the monic irreducible minimal polynomial of α.
#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NumberField {
    pub name: String,
    pub minpoly: QPoly,
}

impl NumberField {
    pub fn new(name: impl Into<String>, minpoly: QPoly) -> Arc<Self> {
        assert!(minpoly.deg() >= 1 && minpoly.is_monic(), "minimal polynomial must be monic");
        Arc::new(NumberField { name: name.into(), minpoly })
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn generator(self: &Arc<Self>) -> Constant {
        Constant::alg(self.clone(), Poly::var())
    }
}

#[derive(Clone, Debug)]
pub struct AlgElem {
    pub field: Arc<NumberField>,
    /// Reduced modulo the minimal polynomial, degree at least 1.
    pub rep: QPoly,
}

#[derive(Clone, Debug)]
pub enum Constant {
    Rat(BigRational),
    Alg(AlgElem),
}

impl Constant {
    pub fn rat(n: i64, d: i64) -> Self {
        Constant::Rat(BigRational::new(n.into(), d.into()))
    }

    pub fn int(n: i64) -> Self {
        Constant::Rat(BigRational::from_integer(n.into()))
    }

    pub fn from_q(q: BigRational) -> Self {
        Constant::Rat(q)
    }

    pub fn alg(field: Arc<NumberField>, rep: QPoly) -> Self {
        let rep = rep.rem(&field.minpoly);
        if rep.deg() == 0 {
            return Constant::Rat(rep.coeff(0));
        }
        Constant::Alg(AlgElem { field, rep })
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Constant::Rat(q) => Some(q),
            Constant::Alg(_) => None,
        }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match self {
            Constant::Rat(_) => None,
            Constant::Alg(a) => Some(&a.field),
        }
    }

    /// Representation as a polynomial in α (rationals give a constant polynomial).
    pub fn rep(&self) -> QPoly {
        match self {
            Constant::Rat(q) => Poly::constant(q.clone()),
            Constant::Alg(a) => a.rep.clone(),
        }
    }

    fn common_field(&self, o: &Self) -> Option<Arc<NumberField>> {
        match (self.field(), o.field()) {
            (None, None) => None,
            (Some(f), None) | (None, Some(f)) => Some(f.clone()),
            (Some(f), Some(g)) => {
                assert!(
                    Arc::ptr_eq(f, g) || f == g,
                    "constants from different algebraic extensions ({} and {})",
                    f.name,
                    g.name
                );
                Some(f.clone())
            }
        }
    }

    fn binop(&self, o: &Self, q: impl Fn(&BigRational, &BigRational) -> BigRational, p: impl Fn(&QPoly, &QPoly) -> QPoly) -> Self {
        match self.common_field(o) {
            None => Constant::Rat(q(self.as_rational().unwrap(), o.as_rational().unwrap())),
            Some(f) => Constant::alg(f, p(&self.rep(), &o.rep())),
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Constant::Rat(q) if q.is_negative())
    }

    /// Trace to Q of an algebraic element (`Tr(q) = q` for rationals).
    pub fn trace(&self) -> BigRational {
        match self {
            Constant::Rat(q) => q.clone(),
            Constant::Alg(a) => {
                let sums = power_sums(&a.field.minpoly);
                a.rep
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * &sums[k])
                    .fold(<BigRational as Zero>::zero(), |acc, t| acc + t)
            }
        }
    }

    /// Tests whether the constant is a root of unity.
    pub fn is_root_of_unity(&self) -> bool {
        match self {
            Constant::Rat(q) => One::is_one(&q.abs()),
            Constant::Alg(a) => {
                let d = a.field.degree() as u64;
                // phi(m) <= d forces m <= 2 d^2 + 6, a loose but safe bound
                let bound = 2 * d * d + 6;
                let mut pw = self.clone();
                for _ in 1..=bound {
                    if pw.is_one() {
                        return true;
                    }
                    pw = pw.mul(self);
                }
                false
            }
        }
    }

    pub fn pow_i(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Constant::int(1);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

/// Newton power sums `p_k = sum of k-th powers of the roots`, k < deg.
fn power_sums(minpoly: &QPoly) -> Vec<BigRational> {
    let n = minpoly.deg();
    // e_i from coefficients of the monic polynomial
    let a = |i: usize| minpoly.coeff(n - i);
    let mut p = vec![BigRational::from_integer(BigInt::from(n as u64))];
    for k in 1..n {
        let mut s = -BigRational::from_integer(BigInt::from(k as u64)) * a(k);
        for i in 1..k {
            s -= a(i) * &p[k - i];
        }
        p.push(s);
    }
    p
}

impl PartialEq for Constant {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Constant::Rat(a), Constant::Rat(b)) => a == b,
            (Constant::Alg(a), Constant::Alg(b)) => a.field == b.field && a.rep == b.rep,
            _ => false,
        }
    }
}
impl Eq for Constant {}

impl std::hash::Hash for Constant {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Constant::Rat(q) => q.hash(state),
            Constant::Alg(a) => {
                a.field.name.hash(state);
                a.rep.hash(state);
            }
        }
    }
}

impl PartialOrd for Constant {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Constant {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Constant::Rat(a), Constant::Rat(b)) => a.cmp(b),
            (Constant::Rat(_), Constant::Alg(_)) => Ordering::Less,
            (Constant::Alg(_), Constant::Rat(_)) => Ordering::Greater,
            (Constant::Alg(a), Constant::Alg(b)) => a
                .field
                .cmp(&b.field)
                .then_with(|| a.rep.cmp(&b.rep)),
        }
    }
}

impl FieldOps for Constant {
    fn zero() -> Self {
        Constant::Rat(<BigRational as Zero>::zero())
    }
    fn one() -> Self {
        Constant::Rat(<BigRational as One>::one())
    }
    fn is_zero(&self) -> bool {
        matches!(self, Constant::Rat(q) if Zero::is_zero(q))
    }
    fn is_one(&self) -> bool {
        matches!(self, Constant::Rat(q) if One::is_one(q))
    }
    fn add(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a + b, |a, b| a.add(b))
    }
    fn sub(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a - b, |a, b| a.sub(b))
    }
    fn mul(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a * b, |a, b| a.mul(b))
    }
    fn neg(&self) -> Self {
        match self {
            Constant::Rat(q) => Constant::Rat(-q),
            Constant::Alg(a) => Constant::Alg(AlgElem { field: a.field.clone(), rep: a.rep.neg() }),
        }
    }
    fn inv(&self) -> Self {
        match self {
            Constant::Rat(q) => Constant::Rat(FieldOps::inv(q)),
            Constant::Alg(a) => {
                let (g, s, _) = a.rep.ext_gcd(&a.field.minpoly);
                assert!(g.is_one(), "minimal polynomial not irreducible");
                Constant::alg(a.field.clone(), s)
            }
        }
    }
    fn from_int(n: i64) -> Self {
        Constant::int(n)
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Rat(q) => write!(f, "{q}"),
            Constant::Alg(a) => {
                let mut first = true;
                for (k, c) in a.rep.coeffs().iter().enumerate().rev() {
                    if Zero::is_zero(c) {
                        continue;
                    }
                    let neg = c.is_negative();
                    let mag = c.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    first = false;
                    let name = &a.field.name;
                    match k {
                        0 => write!(f, "{mag}")?,
                        _ => {
                            if !One::is_one(&mag) {
                                write!(f, "{mag}*")?;
                            }
                            if k == 1 {
                                write!(f, "{name}")?;
                            } else {
                                write!(f, "{name}^{k}")?;
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qpoly::qpoly_from_ints;

    #[test]
    fn sqrt2_arithmetic_and_trace() {
        let k = NumberField::new("a", qpoly_from_ints(&[-2, 0, 1]));
        let a = k.generator();
        assert_eq!(a.mul(&a), Constant::int(2));
        let b = a.add(&Constant::int(1));
        // (1 + a)^{-1} = a - 1
        assert_eq!(b.inv(), a.sub(&Constant::int(1)));
        assert_eq!(b.trace(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn roots_of_unity() {
        let k = NumberField::new("i", qpoly_from_ints(&[1, 0, 1]));
        assert!(k.generator().is_root_of_unity());
        assert!(Constant::int(-1).is_root_of_unity());
        assert!(!Constant::int(2).is_root_of_unity());
        let s = NumberField::new("s", qpoly_from_ints(&[-2, 0, 1]));
        assert!(!s.generator().add(&Constant::int(1)).is_root_of_unity());
    }
}
