//! Factorization of univariate polynomials over Q (Zassenhaus: modular
//! factorization, quadratic Hensel lifting, subset recombination) and of
//! integers by trial division.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use super::qpoly::{from_int_coeffs, primitive_part, QPoly};

/// Factors `f` over Q into `content * prod p_i^e_i` with monic irreducible `p_i`,
/// sorted by degree and then coefficients.
pub fn factor_q(f: &QPoly) -> (BigRational, Vec<(QPoly, u32)>) {
    assert!(!f.is_zero(), "factor of zero polynomial");
    let (lc, parts) = f.squarefree();
    let mut out = Vec::new();
    for (part, mult) in parts {
        for g in factor_squarefree(&part) {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| cmp_qpoly(&a.0, &b.0));
    (lc, out)
}

pub fn cmp_qpoly(a: &QPoly, b: &QPoly) -> std::cmp::Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Irreducible monic factors of a squarefree polynomial.
pub fn factor_squarefree(f: &QPoly) -> Vec<QPoly> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let (_, prim) = primitive_part(f);
    let mut facs: Vec<QPoly> = zassenhaus(&prim)
        .into_iter()
        .map(|g| from_int_coeffs(&g).monic())
        .collect();
    facs.sort_by(cmp_qpoly);
    facs
}

// ---- arithmetic in Z/pZ[t], coefficients as u64 < p ----

fn mtrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn mpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn minv(a: u64, p: u64) -> u64 {
    mpow(a, p - 2, p)
}

fn msub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut v: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    mtrim(&mut v);
    v
}

fn mmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    mtrim(&mut v);
    v
}

fn mdivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    mtrim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = minv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * y % p) % p;
        }
        q[k] = c;
    }
    r.truncate(db);
    mtrim(&mut r);
    mtrim(&mut q);
    (q, r)
}

fn mmonic(a: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() {
        return Vec::new();
    }
    let inv = minv(*a.last().unwrap(), p);
    a.iter().map(|&c| c * inv % p).collect()
}

fn mgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    mtrim(&mut x);
    mtrim(&mut y);
    while !y.is_empty() {
        let r = mdivrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    mmonic(&x, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
fn mext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = mdivrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = msub(&s0, &mmul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = msub(&t0, &mmul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = minv(*r0.last().unwrap(), p);
    let sc = |v: &[u64]| -> Vec<u64> {
        let mut w: Vec<u64> = v.iter().map(|&c| c * inv % p).collect();
        mtrim(&mut w);
        w
    };
    (sc(&r0), sc(&s0), sc(&t0))
}

fn mpowmod(base: &[u64], mut e: BigInt, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = mdivrem(base, m, p).1;
    let two = BigInt::from(2);
    while e.is_positive() {
        if e.is_odd() {
            acc = mdivrem(&mmul(&acc, &b, p), m, p).1;
        }
        e /= &two;
        if e.is_positive() {
            b = mdivrem(&mmul(&b, &b, p), m, p).1;
        }
    }
    acc
}

fn reduce_mod_p(f: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = f
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    mtrim(&mut v);
    v
}

fn mderiv(a: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * (i as u64 % p) % p)
        .collect();
    mtrim(&mut v);
    v
}

/// Distinct-degree then equal-degree factorization of a monic squarefree
/// polynomial over F_p, p odd.
fn factor_mod_p(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 1usize;
    while rest.len() > 1 && 2 * d < rest.len() {
        h = mpowmod(&h, BigInt::from(p), &rest, p);
        let g = mgcd(&msub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            out.extend(equal_degree(&g, d, p, rng));
            rest = mdivrem(&rest, &g, p).0;
            h = mdivrem(&h, &rest, p).1;
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push(mmonic(&rest, p));
    }
    out
}

fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == d {
        return vec![mmonic(f, p)];
    }
    let e: BigInt = (num_traits::Pow::pow(BigInt::from(p), d as u32) - 1) / 2;
    loop {
        let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        mtrim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = mpowmod(&a, e.clone(), f, p);
        let g = mgcd(&msub(&b, &[1], p), f, p);
        if g.len() > 1 && g.len() < f.len() {
            let q = mdivrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&q, d, p, rng));
            return out;
        }
    }
}

// ---- Hensel lifting over Z/mZ with BigInt coefficients ----

fn zmod(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut w: Vec<BigInt> = v.iter().map(|c| c.mod_floor(m)).collect();
    while w.last().is_some_and(|c| c.is_zero()) {
        w.pop();
    }
    w
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    zmod(&v, m)
}

fn zadd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let v: Vec<BigInt> = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()
        })
        .collect();
    zmod(&v, m)
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let nb: Vec<BigInt> = b.iter().map(|c| -c).collect();
    zadd(a, &nb, m)
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut r = zmod(a, m);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] = (&r[k + j] - &c * y).mod_floor(m);
        }
        q[k] = c;
    }
    r.truncate(db);
    (zmod(&q, m), zmod(&r, m))
}

fn to_big(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f = g h mod p` (h monic) to modulus `p^2^k >= bound`.
fn hensel_pair(
    f: &[BigInt],
    g: &[u64],
    h: &[u64],
    p: u64,
    bound: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, BigInt) {
    let (_, s, t) = mext_gcd(g, h, p);
    let mut m = BigInt::from(p);
    let (mut g, mut h, mut s, mut t) = (to_big(g), to_big(h), to_big(&s), to_big(&t));
    while &m < bound {
        let m2 = &m * &m;
        let e = zsub(f, &zmul(&g, &h, &m2), &m2);
        let (q, r) = zdivrem_monic(&zmul(&s, &e, &m2), &h, &m2);
        let g1 = zadd(&g, &zadd(&zmul(&t, &e, &m2), &zmul(&q, &g, &m2), &m2), &m2);
        let h1 = zadd(&h, &r, &m2);
        let b = zsub(
            &zadd(&zmul(&s, &g1, &m2), &zmul(&t, &h1, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let (c, d) = zdivrem_monic(&zmul(&s, &b, &m2), &h1, &m2);
        s = zsub(&s, &d, &m2);
        t = zsub(&zsub(&t, &zmul(&t, &b, &m2), &m2), &zmul(&c, &g1, &m2), &m2);
        g = g1;
        h = h1;
        m = m2;
    }
    (g, h, m)
}

/// Lifts the monic modular factors of `f` (lc of f is carried separately).
fn hensel_multi(f: &[BigInt], factors: &[Vec<u64>], p: u64, bound: &BigInt) -> (Vec<Vec<BigInt>>, BigInt) {
    if factors.len() == 1 {
        // f = lc * factor; make monic modulo the final modulus
        let mut m = BigInt::from(p);
        while &m < bound {
            m = &m * &m;
        }
        let lc = f.last().unwrap().clone();
        let inv = mod_inverse(&lc, &m);
        let monic: Vec<BigInt> = f.iter().map(|c| (c * &inv).mod_floor(&m)).collect();
        return (vec![monic], m);
    }
    let half = factors.len() / 2;
    let lcp = f.last().unwrap().mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let a = factors[..half]
        .iter()
        .fold(vec![lcp], |acc, g| mmul(&acc, g, p));
    let b = factors[half..].iter().fold(vec![1u64], |acc, g| mmul(&acc, g, p));
    let (ga, hb, m) = hensel_pair(f, &a, &b, p, bound);
    let (mut left, m1) = hensel_multi(&ga, &factors[..half], p, bound);
    let (right, m2) = hensel_multi(&hb, &factors[half..], p, bound);
    debug_assert_eq!(m1, m);
    debug_assert_eq!(m2, m);
    left.extend(right);
    (left, m)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

fn symmetric(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    v.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let qa = from_int_coeffs(a);
    let qb = from_int_coeffs(b);
    let q = qa.div_exact(&qb)?;
    if q.coeffs().iter().all(|c| c.is_integer()) {
        Some(q.coeffs().iter().map(|c| c.to_integer()).collect())
    } else {
        None
    }
}

fn norm_bound(f: &[BigInt]) -> BigInt {
    // 2^n * sqrt(n+1) * max|coeff| bounds every factor's coefficients (Mignotte)
    let n = f.len();
    let maxc = f.iter().map(|c| c.abs()).max().unwrap();
    let mut b = maxc * BigInt::from(n as u64 + 1);
    b <<= n;
    b
}

const PRIMES: [u64; 20] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
];

/// Irreducible factors over Z of a squarefree primitive polynomial.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    let mut chosen = None;
    for &p in PRIMES.iter().chain([79u64, 83, 89, 97, 101, 103, 107, 109, 113].iter()) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce_mod_p(f, p);
        if fp.len() != f.len() {
            continue;
        }
        if mgcd(&fp, &mderiv(&fp, p), p).len() == 1 {
            chosen = Some(p);
            break;
        }
    }
    let p = chosen.expect("no suitable prime for modular factorization");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let fp = mmonic(&reduce_mod_p(f, p), p);
    let mut mods = factor_mod_p(&fp, p, &mut rng);
    if mods.len() == 1 {
        return vec![f.to_vec()];
    }
    mods.sort();
    let bound = norm_bound(f) * lc.abs() * BigInt::from(2);
    let (lifted, m) = hensel_multi(f, &mods, p, &bound);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut f_cur = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        for subset in subsets(&remaining, size) {
            let lc_cur = f_cur.last().unwrap().clone();
            let prod = subset
                .iter()
                .fold(vec![lc_cur.clone()], |acc, &i| zmul(&acc, &lifted[i], &m));
            let cand = symmetric(&prod, &m);
            let cand = int_primitive(&cand);
            if let Some(q) = zdiv_exact(&f_cur, &cand) {
                out.push(cand);
                f_cur = q;
                remaining.retain(|i| !subset.contains(i));
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    out.push(int_primitive(&f_cur));
    out
}

fn int_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if v.last().unwrap().sign() == Sign::Minus { -1 } else { 1 };
    v.iter().map(|c| c / &g * sign).collect()
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Prime factorization of a nonzero integer by trial division. A cofactor left
/// over after trial division up to 10^6 is reported as a single factor.
pub fn factor_integer(n: &BigInt) -> BTreeMap<BigInt, u32> {
    let mut out = BTreeMap::new();
    let mut n = n.abs();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &d * &d <= n && d <= limit {
        while (&n % &d).is_zero() {
            *out.entry(d.clone()).or_insert(0) += 1;
            n /= &d;
        }
        d += 1u32;
    }
    if n > BigInt::one() {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

#[allow(dead_code)]
fn to_qpoly(v: &[BigInt]) -> QPoly {
    Poly::new(v.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qpoly::qpoly_from_ints;

    fn expand(facs: &[(QPoly, u32)]) -> QPoly {
        facs.iter().fold(QPoly::one(), |acc, (p, e)| acc.mul(&p.pow(*e)))
    }

    #[test]
    fn factors_products_of_known_irreducibles() {
        // (x^2+1)(x^2-2)(x-3)^2 (2x+1)
        let f = qpoly_from_ints(&[1, 0, 1])
            .mul(&qpoly_from_ints(&[-2, 0, 1]))
            .mul(&qpoly_from_ints(&[-3, 1]).pow(2))
            .mul(&qpoly_from_ints(&[1, 2]));
        let (c, facs) = factor_q(&f);
        assert_eq!(facs.len(), 4);
        assert_eq!(expand(&facs).scale(&c), f);
        assert!(facs.iter().any(|(p, e)| *e == 2 && *p == qpoly_from_ints(&[-3, 1])));
    }

    #[test]
    fn swinnerton_dyer_like_quartic_is_irreducible() {
        // x^4 - 10x^2 + 1 splits mod every prime but is irreducible over Q
        let f = qpoly_from_ints(&[1, 0, -10, 0, 1]);
        let (_, facs) = factor_q(&f);
        assert_eq!(facs.len(), 1);
    }

    #[test]
    fn recombines_high_degree() {
        // (x^3 - x - 1)(x^4 + x + 1)(x^2 + x + 7)
        let f = qpoly_from_ints(&[-1, -1, 0, 1])
            .mul(&qpoly_from_ints(&[1, 1, 0, 0, 1]))
            .mul(&qpoly_from_ints(&[7, 1, 1]));
        let (_, facs) = factor_q(&f);
        assert_eq!(facs.len(), 3);
        assert_eq!(expand(&facs), f);
    }

    #[test]
    fn integer_factorization() {
        let m = factor_integer(&BigInt::from(-360));
        let v: Vec<(i64, u32)> = m.iter().map(|(p, e)| (p.to_i64().unwrap(), *e)).collect();
        assert_eq!(v, vec![(2, 3), (3, 2), (5, 1)]);
    }
}
