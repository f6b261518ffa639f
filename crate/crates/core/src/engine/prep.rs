//! Normalization data for a family of term arguments at a place.
//!
//! Given arguments `h_i` in `K = F(θ)` and a degree-one place `p`, the group
//! generated by the `h_i` and `1 − h_i` modulo `F` gets a free basis `ψ_j`
//! with leading coefficient 1 at `p`, so that `h_i = u_i·Πψ_j^{m_ij}` and
//! `1 − h_i = v_i·Πψ_j^{n_ij}` with `u_i, v_i ∈ F`. Logarithms are embedded
//! in `X ⊕ V`: `X` has a formal basis `δ_a` over the zeros and poles `a`, and
//! `V` holds logarithms of lower-field elements, written as formal symbols
//! `log[k]` over a table of arguments and compared multiplicatively modulo
//! roots of unity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::linalg::solve;
use crate::arith::{Constant, FieldOps};
use crate::error::{Error, Result};
use crate::places::{independent_basis, leading_coeff, order_at, Place};
use crate::tensor2::{tenseq_residual, Sym, TensEqData, Tensor2, Vector};
use crate::tower::Elem;

/// Which of `v = 1 − u`, `v = −u`, `u = 1`, `v = 1` applies to a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// `h` and `1 − h` have order 0 at the place: `v = 1 − u`.
    OneMinus,
    /// `h` has a pole at the place: `v = −u`.
    Negated,
    /// `1 − h` vanishes at the place: `u = 1`.
    UIsOne,
    /// `h` vanishes at the place: `v = 1`.
    VIsOne,
}

#[derive(Clone, Debug)]
pub struct PrepExtData {
    pub level: usize,
    /// The normalization place.
    pub place: Place,
    pub hs: Vec<Elem>,
    /// Basis elements, leading coefficient 1 at `place`.
    pub psi: Vec<Elem>,
    /// `h_i = u_i·Π psi_j^{m[i][j]}`
    pub m: Vec<Vec<i64>>,
    /// `1 − h_i = v_i·Π psi_j^{n[i][j]}`
    pub n: Vec<Vec<i64>>,
    pub u: Vec<Elem>,
    pub v: Vec<Elem>,
    /// Zeros and poles of the basis, indexing the `δ_a`.
    pub places: Vec<Place>,
    /// `β_{a,b}`, keyed by `(a, b)`; absent entries are zero.
    pub beta: BTreeMap<(Place, Place), Vector>,
    pub tags: Vec<CaseTag>,
    /// Argument of the symbol `log[k]`.
    pub log_args: Vec<Elem>,
}

/// Outcome of the five conclusion checks and the case check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    /// Embedding of `log h_i`, embedding of `log(1 − h_i)`, condition at
    /// zeros of `1 − h_i`, at zeros of `h_i`, at poles of `h_i`.
    pub holds: [bool; 5],
    pub tags_ok: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.holds.iter().all(|b| *b) && self.tags_ok
    }
}

fn delta(a: &Place) -> Vector {
    Vector::sym(Sym::Delta(a.clone()))
}

fn int(n: i64) -> Constant {
    Constant::int(n)
}

impl PrepExtData {
    fn log_vec(&mut self, e: &Elem) -> Vector {
        if e.as_constant().is_some_and(|c| c.is_root_of_unity()) {
            return Vector::zero();
        }
        let k = match self.log_args.iter().position(|a| a == e) {
            Some(k) => k,
            None => {
                self.log_args.push(e.clone());
                self.log_args.len() - 1
            }
        };
        Vector::sym(Sym::X(format!("log[{k}]")))
    }

    fn log_of_table(&self, e: &Elem) -> Vector {
        if e.as_constant().is_some_and(|c| c.is_root_of_unity()) {
            return Vector::zero();
        }
        let k = self.log_args.iter().position(|a| a == e).expect("argument registered at construction");
        Vector::sym(Sym::X(format!("log[{k}]")))
    }

    pub fn log_u(&self, i: usize) -> Vector {
        self.log_of_table(&self.u[i])
    }

    pub fn log_v(&self, i: usize) -> Vector {
        self.log_of_table(&self.v[i])
    }

    /// `ι(log ψ_j) = Σ_a ord(ψ_j, a)·δ_a`
    pub fn iota_psi(&self, j: usize) -> Result<Vector> {
        let mut out = Vector::zero();
        for a in &self.places {
            let o = order_at(&self.psi[j], a)?;
            if o != 0 {
                out.add_term(Sym::Delta(a.clone()), int(o));
            }
        }
        Ok(out)
    }

    fn iota_product(&self, base: Vector, exps: &[i64]) -> Result<Vector> {
        let mut out = base;
        for (j, e) in exps.iter().enumerate() {
            if *e != 0 {
                out = out.add(&self.iota_psi(j)?.scale(&int(*e)));
            }
        }
        Ok(out)
    }

    /// `ι(log h_i)`, computed through the basis.
    pub fn iota_log_h(&self, i: usize) -> Result<Vector> {
        self.iota_product(self.log_u(i), &self.m[i])
    }

    /// `ι(log(1 − h_i))`, computed through the basis.
    pub fn iota_log_one_minus_h(&self, i: usize) -> Result<Vector> {
        self.iota_product(self.log_v(i), &self.n[i])
    }

    pub fn beta(&self, a: &Place, b: &Place) -> Vector {
        self.beta.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(Vector::zero)
    }

    /// `Σ_a ord(g, a)·β_{a,b}`
    fn beta_sum(&self, g: &Elem, b: &Place) -> Result<Vector> {
        let mut out = Vector::zero();
        for a in &self.places {
            let o = order_at(g, a)?;
            if o != 0 {
                out = out.add(&self.beta(a, b).scale(&int(o)));
            }
        }
        Ok(out)
    }

    /// Zero test in `X ⊕ V`: the `δ` part must vanish exactly, the `V` part
    /// must be the logarithm of a root of unity.
    pub fn v_is_zero(&self, x: &Vector) -> bool {
        let mut pairs: Vec<(usize, BigRational)> = Vec::new();
        for (s, c) in x.terms() {
            let Sym::X(name) = s else { return false };
            let Some(k) = name.strip_prefix("log[").and_then(|r| r.strip_suffix(']')).and_then(|r| r.parse().ok())
            else {
                return false;
            };
            let Some(q) = c.as_rational() else { return false };
            pairs.push((k, q.clone()));
        }
        if pairs.is_empty() {
            return true;
        }
        let l = pairs.iter().fold(<BigInt as One>::one(), |a, (_, q)| a.lcm(q.denom()));
        let mut fields = Vec::new();
        for (k, _) in &pairs {
            if let Some(f) = self.log_args[*k].as_constant().and_then(|c| c.field()) {
                if !fields.contains(f) {
                    fields.push(f.clone());
                }
            }
        }
        if fields.len() > 1 {
            return false;
        }
        let mut prod = Elem::int(1);
        for (k, q) in &pairs {
            let Some(e) = (q * BigRational::from_integer(l.clone())).to_integer().to_i64() else { return false };
            prod = prod.mul(&self.log_args[*k].pow(e));
        }
        prod.as_constant().is_some_and(|c| c.is_root_of_unity())
    }

    /// Symmetry of a tensor over `X ⊕ V` modulo the relations of `V`.
    pub fn is_symmetric_mod(&self, t: &Tensor2) -> bool {
        let anti = t.sub(&t.transpose());
        let mut left: BTreeMap<Place, Vector> = BTreeMap::new();
        let mut right: BTreeMap<Place, Vector> = BTreeMap::new();
        for ((a, b), c) in anti.terms() {
            match (a, b) {
                (Sym::Delta(p), Sym::X(_)) => left.entry(p.clone()).or_insert_with(Vector::zero).add_term(b.clone(), c.clone()),
                (Sym::X(_), Sym::Delta(p)) => right.entry(p.clone()).or_insert_with(Vector::zero).add_term(a.clone(), c.clone()),
                _ => return false,
            }
        }
        left.values().chain(right.values()).all(|v| self.v_is_zero(v))
    }

    /// Inputs of the symmetric-residual identity for argument `i`, indexed
    /// by `places`.
    pub fn tenseq_data(&self, i: usize) -> Result<TensEqData> {
        let h = &self.hs[i];
        let g = Elem::int(1).sub(h);
        let k = self.places.iter().map(|a| order_at(&g, a)).collect::<Result<Vec<_>>>()?;
        let l = self.places.iter().map(|a| order_at(h, a)).collect::<Result<Vec<_>>>()?;
        let wij = self.places.iter().map(|a| self.places.iter().map(|b| self.beta(a, b)).collect()).collect();
        Ok(TensEqData {
            u: self.log_v(i),
            v: self.log_u(i),
            w: self.places.iter().map(delta).collect(),
            wij,
            k,
            l,
        })
    }

    /// `(ι⊗ι)(log(1−h_i)⊗log(h_i) − log(v_i)⊗log(u_i)) − Σ ord(1−h_i,a)·ord(h_i,b)·M_{a,b}`
    pub fn bridge_residual(&self, i: usize) -> Result<Tensor2> {
        let d = self.tenseq_data(i)?;
        let r = tenseq_residual(&d, &|x| self.v_is_zero(x))?;
        let direct = Tensor2::outer(&self.iota_log_one_minus_h(i)?, &self.iota_log_h(i)?)
            .sub(&Tensor2::outer(&self.log_v(i), &self.log_u(i)));
        let mut ms = Tensor2::zero();
        for (ai, a) in self.places.iter().enumerate() {
            for (bi, b) in self.places.iter().enumerate() {
                let c = d.k[ai] * d.l[bi];
                if c != 0 {
                    let m = Tensor2::outer(&delta(a), &delta(b))
                        .add(&Tensor2::outer(&delta(a), &self.beta(b, a)))
                        .add(&Tensor2::outer(&self.beta(a, b), &delta(b)));
                    ms = ms.add(&m.scale(&int(c)));
                }
            }
        }
        let direct = direct.sub(&ms);
        if !self.is_symmetric_mod(&direct.sub(&r)) {
            return Err(Error::Internal("residual identity disagrees with the embedding".into()));
        }
        Ok(direct)
    }

    /// Evaluates the five conclusion equations and the case equations.
    pub fn condition_report(&self) -> Result<ConditionReport> {
        let one = Elem::int(1);
        let mut holds = [true; 5];
        let mut tags_ok = true;
        for (i, h) in self.hs.iter().enumerate() {
            let g = one.sub(h);
            for (slot, (val, lg, exps, iota)) in [
                (h, self.log_u(i), &self.m[i], self.iota_log_h(i)?),
                (&g, self.log_v(i), &self.n[i], self.iota_log_one_minus_h(i)?),
            ]
            .into_iter()
            .enumerate()
            {
                let unit = if slot == 0 { &self.u[i] } else { &self.v[i] };
                let mut prod = unit.clone();
                for (j, e) in exps.iter().enumerate() {
                    prod = prod.mul(&self.psi[j].pow(*e));
                }
                let mut want = lg;
                for a in &self.places {
                    let o = order_at(val, a)?;
                    if o != 0 {
                        want.add_term(Sym::Delta(a.clone()), int(o));
                    }
                }
                if prod != *val || !self.v_is_zero(&iota.sub(&want)) {
                    holds[slot] = false;
                }
            }
            for b in &self.places {
                let (oh, og) = (order_at(h, b)?, order_at(&g, b)?);
                let su = self.log_u(i).sub(&self.beta_sum(h, b)?);
                let sv = self.log_v(i).sub(&self.beta_sum(&g, b)?);
                if og > 0 && !self.v_is_zero(&su) {
                    holds[2] = false;
                }
                if oh > 0 && !self.v_is_zero(&sv) {
                    holds[3] = false;
                }
                if oh < 0 && !self.v_is_zero(&su.sub(&sv)) {
                    holds[4] = false;
                }
            }
            let (u, v) = (&self.u[i], &self.v[i]);
            let ok = match self.tags[i] {
                CaseTag::OneMinus => *v == one.sub(u),
                CaseTag::Negated => *v == u.neg(),
                CaseTag::UIsOne => u.is_one(),
                CaseTag::VIsOne => v.is_one(),
            };
            tags_ok &= ok && tag_at(h, &self.place)? == self.tags[i];
        }
        Ok(ConditionReport { holds, tags_ok })
    }
}

fn tag_at(h: &Elem, p: &Place) -> Result<CaseTag> {
    let oh = order_at(h, p)?;
    let og = order_at(&Elem::int(1).sub(h), p)?;
    Ok(if oh < 0 {
        CaseTag::Negated
    } else if oh > 0 {
        CaseTag::VIsOne
    } else if og > 0 {
        CaseTag::UIsOne
    } else {
        CaseTag::OneMinus
    })
}

fn check_args(hs: &[Elem]) -> Result<usize> {
    let mut level = None;
    for h in hs {
        if h.is_zero() || h.is_one() {
            return Err(Error::Domain("term argument must differ from 0 and 1".into()));
        }
        let Some(l) = h.level() else {
            return Err(Error::Domain("term argument must be nonconstant for place data".into()));
        };
        level = Some(level.map_or(l, |m: usize| m.max(l)));
    }
    level.ok_or_else(|| Error::Domain("empty argument list".into()))
}

/// The first place `θ − c`, `c = 0, 1, 2, …, 50, −1, …, −50`, where every
/// `h_i` and `1 − h_i` has order 0.
pub fn choose_place(hs: &[Elem]) -> Result<Place> {
    let level = check_args(hs)?;
    let one = Elem::int(1);
    for c in (0..=50).chain((1..=50).map(|c: i64| -c)) {
        let p = Place::at_value(level, Elem::int(c));
        let mut ok = true;
        for h in hs {
            if order_at(h, &p)? != 0 || order_at(&one.sub(h), &p)? != 0 {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(p);
        }
    }
    Err(Error::Precondition("no integer place avoids the zeros and poles of the arguments".into()))
}

/// Builds the normalization data at `p`; all five conclusion equations and
/// the case equations are checked before returning.
pub fn prep_ext(hs: &[Elem], p: &Place) -> Result<PrepExtData> {
    let level = check_args(hs)?;
    if p.level() != level || p.degree() != 1 {
        return Err(Error::Precondition("place must have degree one over the top generator".into()));
    }
    let one = Elem::int(1);
    let fs: Vec<Elem> = hs.iter().flat_map(|h| [h.clone(), one.sub(h)]).collect();
    let ib = independent_basis(&fs, level)?;
    let psi: Vec<Elem> = ib
        .psi
        .iter()
        .map(|s| Ok(s.div(&leading_coeff(s, p)?)))
        .collect::<Result<_>>()?;
    let places: Vec<Place> = ib
        .places
        .iter()
        .enumerate()
        .filter(|(k, _)| ib.psi_divisors.iter().any(|r| !r[*k].is_zero()))
        .map(|(_, a)| a.clone())
        .collect();
    let mut d = PrepExtData {
        level,
        place: p.clone(),
        hs: hs.to_vec(),
        psi,
        m: ib.exponents.iter().step_by(2).cloned().collect(),
        n: ib.exponents.iter().skip(1).step_by(2).cloned().collect(),
        u: Vec::new(),
        v: Vec::new(),
        places,
        beta: BTreeMap::new(),
        tags: Vec::new(),
        log_args: Vec::new(),
    };
    for h in hs {
        let u = leading_coeff(h, p)?;
        let v = leading_coeff(&one.sub(h), p)?;
        d.log_vec(&u);
        d.log_vec(&v);
        d.u.push(u);
        d.v.push(v);
        d.tags.push(tag_at(h, p)?);
    }
    // β_{·,b} solves Σ_a ord(ψ_j, a)·β_{a,b} = −log(lc(ψ_j, b)); free
    // unknowns are set to zero.
    let orders: Vec<Vec<Constant>> = d
        .psi
        .iter()
        .map(|s| d.places.iter().map(|a| order_at(s, a).map(int)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    for b in d.places.clone() {
        let gammas: Vec<Vector> = d
            .psi
            .clone()
            .iter()
            .map(|s| Ok(d.log_vec(&leading_coeff(s, &b)?).scale(&int(-1))))
            .collect::<Result<_>>()?;
        let mut syms: Vec<Sym> = gammas.iter().flat_map(|g| g.terms().keys().cloned()).collect();
        syms.sort();
        syms.dedup();
        for s in syms {
            let rhs: Vec<Constant> = gammas.iter().map(|g| g.terms().get(&s).cloned().unwrap_or(int(0))).collect();
            let sol = solve(&orders, &rhs).ok_or_else(|| Error::Internal("basis divisors are dependent".into()))?;
            for (a, c) in d.places.iter().zip(sol) {
                if !c.is_zero() {
                    d.beta.entry((a.clone(), b.clone())).or_insert_with(Vector::zero).add_term(s.clone(), c);
                }
            }
        }
    }
    let report = d.condition_report()?;
    if !report.all() {
        return Err(Error::Internal(format!("normalization data violates its conclusions: {report:?}")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::Tower;

    fn x() -> Elem {
        Elem::gen(0)
    }

    fn at(c: i64) -> Place {
        Place::at_value(0, Elem::int(c))
    }

    #[test]
    fn single_argument_x() {
        let d = prep_ext(&[x()], &at(2)).unwrap();
        assert_eq!(d.psi.len(), 2);
        assert!(d.psi.contains(&x().div(&Elem::int(2))) && d.psi.contains(&x().sub(&Elem::int(1))));
        assert_eq!(d.u, vec![Elem::int(2)]);
        assert_eq!(d.v, vec![Elem::int(-1)]);
        assert_eq!(d.tags, vec![CaseTag::OneMinus]);
        assert_eq!(d.places.len(), 3);
        assert!(d.log_v(0).is_zero());
        let (zero, one, inf) = (at(0), at(1), Place::Infinite { level: 0 });
        assert!(d.places.contains(&zero) && d.places.contains(&one) && d.places.contains(&inf));
        assert!(d.v_is_zero(&d.beta(&zero, &one).sub(&d.log_u(0))));
        assert!(d.beta(&one, &one).is_zero());
        assert!(d.beta(&inf, &one).is_zero());
        assert!(d.condition_report().unwrap().all());
        assert!(d.is_symmetric_mod(&d.bridge_residual(0).unwrap()));
    }

    #[test]
    fn case_tags() {
        let inv = x().inv();
        assert_eq!(prep_ext(std::slice::from_ref(&inv), &at(0)).unwrap().tags, vec![CaseTag::Negated]);
        let d = prep_ext(std::slice::from_ref(&inv), &at(0)).unwrap();
        assert_eq!(d.v[0], d.u[0].neg());
        assert_eq!(prep_ext(std::slice::from_ref(&inv), &at(1)).unwrap().tags, vec![CaseTag::UIsOne]);
        assert_eq!(prep_ext(&[x()], &at(0)).unwrap().tags, vec![CaseTag::VIsOne]);
        assert_eq!(prep_ext(&[inv], &at(2)).unwrap().tags, vec![CaseTag::OneMinus]);
        assert!(matches!(prep_ext(&[Elem::int(3)], &at(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn irrational_places() {
        let h = x().mul(&x()).add(&Elem::int(1)).div(&x().add(&Elem::int(3)));
        let p = choose_place(std::slice::from_ref(&h)).unwrap();
        let d = prep_ext(&[h], &p).unwrap();
        assert!(d.condition_report().unwrap().all());
        assert!(d.is_symmetric_mod(&d.bridge_residual(0).unwrap()));
    }

    #[test]
    fn over_a_log() {
        let mut t = Tower::new("x");
        t.push_log(x()).unwrap();
        let th = Elem::gen(1);
        let h = th.mul(&x()).div(&th.add(&Elem::int(1)));
        let p = choose_place(std::slice::from_ref(&h)).unwrap();
        let d = prep_ext(&[h], &p).unwrap();
        assert!(d.u[0].level().is_none_or(|l| l < 1));
        assert!(d.is_symmetric_mod(&d.bridge_residual(0).unwrap()));
    }
}
