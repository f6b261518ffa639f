//! Dense univariate polynomials over an exact field.

use super::field::FieldOps;

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: FieldOps> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    /// The polynomial `t`.
    pub fn var() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(v)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let lc_inv = d.lc().inv();
        let mut r = self.coeffs.clone();
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&lc_inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(b));
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient; `None` when the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lc().inv())
    }

    /// Monic Euclid: normalizing each remainder keeps coefficient growth in
    /// check when the coefficients are themselves fractions.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.monic();
        let mut b = o.monic();
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Solves `s*a + t*b = c` with `deg s < deg b`, assuming `gcd(a, b) | c`.
    pub fn diophantine(a: &Self, b: &Self, c: &Self) -> Option<(Self, Self)> {
        let (g, s, t) = a.ext_gcd(b);
        let q = c.div_exact(&g)?;
        let s = s.mul(&q);
        let t = t.mul(&q);
        if b.deg() == 0 && !b.is_zero() {
            // any s works; take s = 0
            let t2 = c.sub(&Poly::zero()).div_exact(b)?;
            return Some((Poly::zero(), t2));
        }
        let (k, s_red) = s.divrem(b);
        let t_red = t.add(&k.mul(a));
        Some((s_red, t_red))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&T::from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn map<U: FieldOps>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Yun's squarefree decomposition (characteristic zero). Returns
    /// `[(f_1, 1), (f_2, 2), ...]` with monic nonconstant `f_i`, plus the
    /// leading coefficient.
    pub fn squarefree(&self) -> (T, Vec<(Self, u32)>) {
        let lc = self.lc();
        if self.deg() == 0 {
            return (lc, Vec::new());
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_exact(&a).expect("gcd divides");
        let mut c = df.div_exact(&a).expect("gcd divides");
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.deg() > 0 {
            a = b.gcd(&d);
            if a.deg() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            c = d.div_exact(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            i += 1;
        }
        (lc, out)
    }

    pub fn squarefree_part(&self) -> Self {
        let (_, parts) = self.squarefree();
        parts.iter().fold(Poly::one(), |acc, (p, _)| acc.mul(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::rint;
    use num_rational::BigRational;

    fn q(v: &[i64]) -> Poly<BigRational> {
        Poly::new(v.iter().map(|&c| rint(c)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        let a = q(&[-1, 0, 1]);
        let b = q(&[-1, 1]);
        let (qq, r) = a.divrem(&b);
        assert_eq!(qq, q(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&q(&[1, 1])), q(&[1, 1]));
    }

    #[test]
    fn squarefree_of_cube_times_linear() {
        // (x-1)^3 (x+2)
        let f = q(&[-1, 1]).pow(3).mul(&q(&[2, 1]));
        let (_, parts) = f.squarefree();
        assert_eq!(parts, vec![(q(&[2, 1]), 1), (q(&[-1, 1]), 3)]);
    }

    #[test]
    fn ext_gcd_identity() {
        let a = q(&[1, 0, 1]);
        let b = q(&[-1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert!(g.is_one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
