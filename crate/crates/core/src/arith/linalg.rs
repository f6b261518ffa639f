//! Exact linear algebra: Gaussian elimination over a field and Hermite normal
//! form over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::FieldOps;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<T: FieldOps>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `A x = b` (A given row-major). Free variables are set to zero.
pub fn solve<T: FieldOps>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&n) {
        return None;
    }
    let mut x = vec![T::zero(); n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Some(x)
}

/// Basis of the right nullspace of `A` (n columns).
pub fn nullspace<T: FieldOps>(a: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    let mut m = a.to_vec();
    let piv = rref(&mut m);
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !piv.contains(c)) {
        let mut v = vec![T::zero(); n];
        v[free] = T::one();
        for (r, &c) in piv.iter().enumerate() {
            v[c] = m[r][free].neg();
        }
        out.push(v);
    }
    out
}

pub fn rank<T: FieldOps>(a: &[Vec<T>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

/// Row-style Hermite normal form of an integer matrix: the nonzero rows of the
/// result span the same lattice as the rows of `m`, pivots are positive and
/// entries above each pivot are reduced into `[0, pivot)`. Columns are
/// processed left to right.
///
/// Also returns the unimodular transform `u` with `u * m = h` (all rows,
/// including zero rows at the bottom).
pub fn hnf(m: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut h = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !h[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[i][c].abs()).unwrap();
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in (r + 1)..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                for j in 0..cols {
                    let t = &q * &h[r][j];
                    h[i][j] -= t;
                }
                for j in 0..rows {
                    let t = &q * &u[r][j];
                    u[i][j] -= t;
                }
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for v in h[r].iter_mut() {
                *v = -&*v;
            }
            for v in u[r].iter_mut() {
                *v = -&*v;
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                let t = &q * &h[r][j];
                h[i][j] -= t;
            }
            for j in 0..rows {
                let t = &q * &u[r][j];
                u[i][j] -= t;
            }
        }
        r += 1;
    }
    (h, u)
}
