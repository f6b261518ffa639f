//! Places of the top generator, valuations, leading coefficients, divisors and
//! multiplicatively independent bases.
//!
//! At level 0 with rational coefficients places are irreducible polynomials
//! over Q. Above that, factors come from a coprime basis of the polynomials in
//! play; a basis element of degree one is irreducible, larger ones are treated
//! as closed points of their own (orders agree on all of their factors).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::factor::factor_q;
use crate::arith::linalg::hnf;
use crate::arith::{Constant, FieldOps, NumberField, Poly, QPoly};
use crate::error::{Error, Result};
use crate::tower::{EPoly, Elem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    /// Monic polynomial in generator `level` with lower-level coefficients.
    Finite { level: usize, poly: EPoly },
    Infinite { level: usize },
}

impl Place {
    pub fn finite(level: usize, poly: EPoly) -> Self {
        Place::Finite { level, poly: poly.monic() }
    }

    /// The place `θ_level = c`.
    pub fn at_value(level: usize, c: Elem) -> Self {
        Place::Finite { level, poly: Poly::new(vec![c.neg(), Elem::int(1)]) }
    }

    pub fn level(&self) -> usize {
        match self {
            Place::Finite { level, .. } | Place::Infinite { level } => *level,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite { poly, .. } => poly.deg(),
            Place::Infinite { .. } => 1,
        }
    }

    /// For a degree-one finite place `θ - c`, the value `c`.
    pub fn root(&self) -> Option<Elem> {
        match self {
            Place::Finite { poly, .. } if poly.deg() == 1 => Some(poly.coeff(0).neg()),
            _ => None,
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Place {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Place::Finite { level: l1, poly: a }, Place::Finite { level: l2, poly: b }) => l1
                .cmp(l2)
                .then(a.deg().cmp(&b.deg()))
                .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev())),
            (Place::Finite { .. }, Place::Infinite { .. }) => Ordering::Less,
            (Place::Infinite { .. }, Place::Finite { .. }) => Ordering::Greater,
            (Place::Infinite { level: a }, Place::Infinite { level: b }) => a.cmp(b),
        }
    }
}

pub type Divisor = BTreeMap<Place, i64>;

fn parts(f: &Elem, level: usize) -> Result<(EPoly, EPoly)> {
    if f.is_zero() {
        return Err(Error::Domain("valuation of zero is undefined".into()));
    }
    if f.level().is_some_and(|l| l > level) {
        return Err(Error::Domain("element lies above the place's generator".into()));
    }
    Ok(f.parts_in(level))
}

fn multiplicity(p: &EPoly, q: &EPoly) -> i64 {
    let mut n = 0;
    let mut cur = p.clone();
    while cur.deg() >= q.deg() {
        match cur.div_exact(q) {
            Some(next) => {
                cur = next;
                n += 1;
            }
            None => break,
        }
    }
    n
}

pub fn order_at(f: &Elem, p: &Place) -> Result<i64> {
    let (num, den) = parts(f, p.level())?;
    Ok(match p {
        Place::Finite { poly, .. } => multiplicity(&num, poly) - multiplicity(&den, poly),
        Place::Infinite { .. } => den.deg() as i64 - num.deg() as i64,
    })
}

/// Value of `f * t^{-ord(f, p)}` at `p` for the canonical local parameter.
pub fn leading_coeff(f: &Elem, p: &Place) -> Result<Elem> {
    let (num, den) = parts(f, p.level())?;
    match p {
        Place::Infinite { .. } => Ok(num.lc().div(&den.lc())),
        Place::Finite { level, poly } => {
            let strip = |q: &EPoly| -> EPoly {
                let mut cur = q.clone();
                while let Some(next) = cur.div_exact(poly) {
                    cur = next;
                }
                cur
            };
            let (n, d) = (strip(&num), strip(&den));
            if poly.deg() == 1 {
                let c = poly.coeff(0).neg();
                return Ok(eval_epoly(&n, &c).div(&eval_epoly(&d, &c)));
            }
            if *level == 0 {
                if let Some(q) = to_qpoly(poly) {
                    let field = NumberField::new(format!("r{}", q.deg()), q);
                    let ev = |e: &EPoly| -> Result<Constant> {
                        let qp = to_qpoly(e).ok_or_else(|| {
                            Error::Domain("residue field value needs rational coefficients".into())
                        })?;
                        Ok(Constant::alg(field.clone(), qp))
                    };
                    return Ok(Elem::C(ev(&n)?.div(&ev(&d)?)));
                }
            }
            Err(Error::Domain("leading coefficient at a nonlinear place above the base level".into()))
        }
    }
}

pub fn eval_epoly(p: &EPoly, c: &Elem) -> Elem {
    let mut acc = Elem::int(0);
    for k in p.coeffs().iter().rev() {
        acc = acc.mul(c).add(k);
    }
    acc
}

/// The polynomial as an element of Q[t] when all its coefficients are
/// rational constants.
pub fn to_qpoly(p: &EPoly) -> Option<QPoly> {
    let cs: Option<Vec<BigRational>> = p.coeffs().iter().map(|c| c.as_rational().cloned()).collect();
    cs.map(Poly::new)
}

pub fn from_qpoly(q: &QPoly) -> EPoly {
    Poly::new(q.coeffs().iter().map(|c| Elem::q(c.clone())).collect())
}

/// Monic factors of `p` with multiplicities: irreducible over Q when the
/// coefficients are rational, otherwise squarefree parts.
pub fn factor_epoly(p: &EPoly) -> Vec<(EPoly, u32)> {
    if p.deg() == 0 {
        return Vec::new();
    }
    if let Some(q) = to_qpoly(p) {
        return factor_q(&q).1.into_iter().map(|(f, m)| (from_qpoly(&f), m)).collect();
    }
    p.squarefree().1
}

/// Pairwise coprime monic polynomials such that each input (up to a unit) is a
/// product of their powers.
pub fn coprime_basis(polys: &[EPoly]) -> Vec<EPoly> {
    let mut basis: Vec<EPoly> = Vec::new();
    for p in polys {
        for (f, _) in factor_epoly(p) {
            add_to_basis(&mut basis, f);
        }
    }
    basis
}

fn add_to_basis(basis: &mut Vec<EPoly>, p: EPoly) {
    let mut work = vec![p];
    while let Some(p) = work.pop() {
        if p.deg() == 0 {
            continue;
        }
        match basis.iter().position(|b| p.gcd(b).deg() > 0) {
            None => basis.push(p.monic()),
            Some(i) => {
                let b = basis.remove(i);
                let g = p.gcd(&b);
                work.push(b.div_exact(&g).unwrap());
                work.push(p.div_exact(&g).unwrap());
                work.push(g);
            }
        }
    }
}

/// Divisor of `f` in the generator `level` over the places of `basis`
/// (finite places must cover the factors of `f`).
pub fn divisor_over(f: &Elem, level: usize, basis: &[EPoly]) -> Result<Divisor> {
    let mut d = Divisor::new();
    for b in basis {
        let p = Place::Finite { level, poly: b.clone() };
        let o = order_at(f, &p)?;
        if o != 0 {
            d.insert(p, o);
        }
    }
    let inf = Place::Infinite { level };
    let o = order_at(f, &inf)?;
    if o != 0 {
        d.insert(inf, o);
    }
    Ok(d)
}

/// Divisor of `f` as a function of its top generator (constants have the empty
/// divisor).
pub fn divisor_of(f: &Elem) -> Result<Divisor> {
    if f.is_zero() {
        return Err(Error::Domain("divisor of zero is undefined".into()));
    }
    let Some(level) = f.level() else { return Ok(Divisor::new()) };
    divisor_at_level(f, level)
}

pub fn divisor_at_level(f: &Elem, level: usize) -> Result<Divisor> {
    let (n, d) = parts(f, level)?;
    let basis = coprime_basis(&[n, d]);
    divisor_over(f, level, &basis)
}

pub fn divisor_degree(d: &Divisor) -> i64 {
    d.iter().map(|(p, o)| o * p.degree() as i64).sum()
}

/// A free basis of the group generated by a family modulo the lower field.
#[derive(Clone, Debug)]
pub struct IndependentBasis {
    pub level: usize,
    /// Finite places (sorted) followed by the infinite place.
    pub places: Vec<Place>,
    /// Generators, each a monic product of place polynomials.
    pub psi: Vec<Elem>,
    /// Divisor rows of the generators over `places` (Hermite normal form).
    pub psi_divisors: Vec<Vec<BigInt>>,
    /// `f_i = consts_i * prod psi_j^{exponents[i][j]}`.
    pub exponents: Vec<Vec<i64>>,
    pub consts: Vec<Elem>,
}

pub fn independent_basis(fs: &[Elem], level: usize) -> Result<IndependentBasis> {
    let mut polys = Vec::new();
    for f in fs {
        let (n, d) = parts(f, level)?;
        polys.push(n);
        polys.push(d);
    }
    let mut basis = coprime_basis(&polys);
    basis.sort_by(|a, b| {
        Place::Finite { level, poly: a.clone() }.cmp(&Place::Finite { level, poly: b.clone() })
    });
    let mut places: Vec<Place> = basis.iter().map(|b| Place::Finite { level, poly: b.clone() }).collect();
    places.push(Place::Infinite { level });
    let rows: Vec<Vec<BigInt>> = fs
        .iter()
        .map(|f| places.iter().map(|p| order_at(f, p).map(BigInt::from)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let (h, _) = hnf(&rows);
    let h: Vec<Vec<BigInt>> = h.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())).collect();
    let psi: Vec<Elem> = h
        .iter()
        .map(|row| {
            let mut e = Elem::int(1);
            for (k, b) in basis.iter().enumerate() {
                let pk = Elem::from_poly(level, b.clone());
                e = e.mul(&pk.pow(row[k].to_i64().expect("exponent overflow")));
            }
            e
        })
        .collect();
    let mut exponents = Vec::new();
    let mut consts = Vec::new();
    for (f, row) in fs.iter().zip(&rows) {
        let e = express_in_rows(row, &h).ok_or_else(|| Error::Internal("divisor not in HNF lattice".into()))?;
        let mut prod = Elem::int(1);
        for (j, ej) in e.iter().enumerate() {
            prod = prod.mul(&psi[j].pow(*ej));
        }
        let c = f.div(&prod);
        if c.level().is_some_and(|l| l >= level) {
            return Err(Error::Internal("cofactor not in the lower field".into()));
        }
        exponents.push(e);
        consts.push(c);
    }
    Ok(IndependentBasis { level, places, psi, psi_divisors: h, exponents, consts })
}

/// Integer coordinates of `row` in the echelon rows `h`.
fn express_in_rows(row: &[BigInt], h: &[Vec<BigInt>]) -> Option<Vec<i64>> {
    let mut r = row.to_vec();
    let mut out = Vec::with_capacity(h.len());
    for hr in h {
        let pc = hr.iter().position(|c| !c.is_zero())?;
        let (q, rem) = (&r[pc] / &hr[pc], &r[pc] % &hr[pc]);
        if !rem.is_zero() {
            return None;
        }
        for (a, b) in r.iter_mut().zip(hr) {
            *a -= &q * b;
        }
        out.push(q.to_i64()?);
    }
    r.iter().all(|c| c.is_zero()).then_some(out)
}

/// Whether the rows are linearly independent over Q.
pub fn full_row_rank(rows: &[Vec<BigInt>]) -> bool {
    let q: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();
    crate::arith::linalg::rank(&q) == rows.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Elem {
        Elem::gen(0)
    }
    fn lin(c: i64) -> Place {
        Place::at_value(0, Elem::int(c))
    }

    #[test]
    fn orders() {
        let f = x().mul(&x()).div(&x().sub(&Elem::int(1)));
        assert_eq!(order_at(&f, &lin(0)).unwrap(), 2);
        assert_eq!(order_at(&f, &Place::Infinite { level: 0 }).unwrap(), -1);
        let q = x().mul(&x()).add(&Elem::int(1));
        let p = Place::finite(0, q.numer_in(0));
        assert_eq!(order_at(&Elem::int(1).div(&q), &p).unwrap(), -1);
        assert!(order_at(&Elem::int(0), &p).is_err());
    }

    #[test]
    fn divisors() {
        let d = divisor_of(&x().div(&x().add(&Elem::int(1)))).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&lin(0)], 1);
        assert_eq!(d[&lin(-1)], -1);
        assert!(divisor_of(&Elem::int(5)).unwrap().is_empty());
        let d = divisor_of(&x().mul(&x()).sub(&Elem::int(1))).unwrap();
        assert_eq!(d[&Place::Infinite { level: 0 }], -2);
        assert_eq!(divisor_degree(&d), 0);
    }

    #[test]
    fn leading_coeffs() {
        let f = x().mul(&Elem::int(2)).div(&x().sub(&Elem::int(1)));
        assert_eq!(leading_coeff(&f, &lin(0)).unwrap(), Elem::int(-2));
        assert_eq!(leading_coeff(&x().sub(&Elem::int(1)), &Place::Infinite { level: 0 }).unwrap(), Elem::int(1));
        assert_eq!(leading_coeff(&Elem::int(3), &lin(5)).unwrap(), Elem::int(3));
    }

    #[test]
    fn independent_basis_examples() {
        let x1 = x().add(&Elem::int(1));
        let b = independent_basis(&[x(), x1.clone(), x().mul(&x1)], 0).unwrap();
        assert_eq!(b.psi, vec![x(), x1]);
        assert_eq!(b.exponents, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let b = independent_basis(&[x(), x().mul(&Elem::int(2))], 0).unwrap();
        assert_eq!(b.psi, vec![x()]);
        assert_eq!(b.consts, vec![Elem::int(1), Elem::int(2)]);
        let b = independent_basis(&[x().mul(&x())], 0).unwrap();
        assert_eq!(b.psi, vec![x().mul(&x())]);
        assert_eq!(b.exponents, vec![vec![1]]);
    }
}
