//! Helpers specific to polynomials with rational coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::FieldOps;
use super::poly::Poly;

pub type QPoly = Poly<BigRational>;

pub fn qpoly_from_ints(v: &[i64]) -> QPoly {
    Poly::new(v.iter().map(|&c| BigRational::from_integer(c.into())).collect())
}

/// Splits `f` into `(c, g)` with `f = c*g`, `g` primitive in `Z[t]` with positive
/// leading coefficient.
pub fn primitive_part(f: &QPoly) -> (BigRational, Vec<BigInt>) {
    if f.is_zero() {
        return (<BigRational as Zero>::zero(), Vec::new());
    }
    let den = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if ints.last().unwrap().is_negative() {
        g = -g;
    }
    let prim = ints.iter().map(|c| c / &g).collect();
    (BigRational::new(g, den), prim)
}

pub fn from_int_coeffs(v: &[BigInt]) -> QPoly {
    Poly::new(v.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Resultant over a field via the Euclidean remainder sequence.
pub fn resultant<T: FieldOps>(a: &Poly<T>, b: &Poly<T>) -> T {
    if a.is_zero() || b.is_zero() {
        return T::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = T::one();
    loop {
        let da = a.deg();
        let db = b.deg();
        if db == 0 {
            let mut p = T::one();
            for _ in 0..da {
                p = p.mul(&b.lc());
            }
            return acc.mul(&p);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return T::zero();
        }
        let dr = r.deg();
        // res(a,b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
        if (da * db) % 2 == 1 {
            acc = acc.neg();
        }
        for _ in 0..(da - dr) {
            acc = acc.mul(&b.lc());
        }
        a = b;
        b = r;
    }
}

/// Lagrange interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> QPoly {
    let mut acc = QPoly::zero();
    for i in 0..xs.len() {
        let mut basis = QPoly::one();
        let mut denom = <BigRational as One>::one();
        for j in 0..xs.len() {
            if i == j {
                continue;
            }
            basis = basis.mul(&Poly::new(vec![-xs[j].clone(), <BigRational as One>::one()]));
            denom *= &xs[i] - &xs[j];
        }
        acc = acc.add(&basis.scale(&(&ys[i] / denom)));
    }
    acc
}

/// Rational roots of `f` (distinct).
pub fn rational_roots(f: &QPoly) -> Vec<BigRational> {
    super::factor::factor_q(f)
        .1
        .into_iter()
        .filter(|(p, _)| p.deg() == 1)
        .map(|(p, _)| -p.coeff(0) / p.coeff(1))
        .collect()
}

pub fn q_abs(c: &BigRational) -> BigRational {
    c.abs()
}
