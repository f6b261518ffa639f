//! Constant-linear relations between tower elements.
//!
//! Candidate relations come from evaluating the generators at random rational
//! points (the tower is purely transcendental, so any point is admissible);
//! every returned relation is then checked with exact arithmetic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::elem::Elem;
use crate::arith::linalg::nullspace;
use crate::arith::{Constant, FieldOps};

/// Value of `e` at `point` (one constant per generator), `None` on a pole.
pub fn eval_at(e: &Elem, point: &[Constant]) -> Option<Constant> {
    match e {
        Elem::C(c) => Some(c.clone()),
        Elem::F(f) => {
            let t = &point[f.var];
            let horner = |p: &crate::arith::Poly<Elem>| -> Option<Constant> {
                let mut acc = Constant::int(0);
                for c in p.coeffs().iter().rev() {
                    acc = acc.mul(t).add(&eval_at(c, point)?);
                }
                Some(acc)
            };
            let d = horner(&f.den)?;
            if d.is_zero() {
                return None;
            }
            Some(horner(&f.num)?.div(&d))
        }
    }
}

fn max_level(cols: &[Vec<Elem>]) -> usize {
    cols.iter()
        .flatten()
        .filter_map(|e| e.level())
        .max()
        .map_or(0, |l| l + 1)
}

/// Basis of the constant vectors `c` with `Σ_j c_j cols[j][i] = 0` for every
/// component `i`.
pub fn elem_nullspace(cols: &[Vec<Elem>]) -> Vec<Vec<Constant>> {
    let n = cols.len();
    if n == 0 {
        return Vec::new();
    }
    let comps = cols.iter().map(|c| c.len()).max().unwrap_or(0);
    let get = |j: usize, i: usize| cols[j].get(i).cloned().unwrap_or_else(|| Elem::int(0));
    let nvars = max_level(cols);
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);
    let mut rows: Vec<Vec<Constant>> = Vec::new();
    let mut points = n + 2;
    loop {
        while rows.len() < points * comps.max(1) {
            let point: Vec<Constant> = (0..nvars)
                .map(|_| Constant::rat(rng.gen_range(-997..=997), rng.gen_range(1..=29)))
                .collect();
            let mut block = Vec::with_capacity(comps);
            let mut ok = true;
            'outer: for i in 0..comps {
                let mut row = Vec::with_capacity(n);
                for j in 0..n {
                    match eval_at(&get(j, i), &point) {
                        Some(v) => row.push(v),
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                block.push(row);
            }
            if ok {
                rows.extend(block);
            } else {
                rows.push(vec![Constant::int(0); n]);
            }
        }
        let basis = nullspace(&rows, n);
        let good = basis.iter().all(|v| {
            (0..comps).all(|i| {
                let mut s = Elem::int(0);
                for (j, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        s = s.add(&get(j, i).mul(&Elem::C(c.clone())));
                    }
                }
                s.is_zero()
            })
        });
        if good {
            return basis;
        }
        points += n + 2;
    }
}

/// Relations between single elements.
pub fn constant_relations(elems: &[Elem]) -> Vec<Vec<Constant>> {
    let cols: Vec<Vec<Elem>> = elems.iter().map(|e| vec![e.clone()]).collect();
    elem_nullspace(&cols)
}

/// Constants `c` with `target = Σ c_j cols[j]` componentwise, if any.
pub fn solve_constant_combination(target: &[Elem], cols: &[Vec<Elem>]) -> Option<Vec<Constant>> {
    let mut all = vec![target.to_vec()];
    all.extend(cols.iter().cloned());
    let basis = elem_nullspace(&all);
    // find a vector with nonzero first coordinate
    let v = basis.iter().find(|v| !v[0].is_zero())?;
    let s = v[0].neg().inv();
    Some(v[1..].iter().map(|c| c.mul(&s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_partial_fraction_relation() {
        let x = Elem::gen(0);
        let one = Elem::int(1);
        let a = one.div(&x);
        let b = one.div(&x.add(&one));
        let c = one.div(&x.mul(&x.add(&one)));
        let rel = constant_relations(&[a, b, c]);
        assert_eq!(rel.len(), 1);
        let v = &rel[0];
        assert_eq!(v[0], v[1].neg());
        assert_eq!(v[2], v[1]);
    }

    #[test]
    fn independent_elements() {
        let x = Elem::gen(0);
        let t = Elem::gen(1);
        assert!(constant_relations(&[x.clone(), t.clone(), x.mul(&t)]).is_empty());
    }
}
