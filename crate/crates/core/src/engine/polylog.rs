//! Formal algebra of `Li_m(z)`, `I_m(z)`, `log(z)` and `log(1-z)`.
//!
//! `I_m` is normalized by `z·d/dz I_m(z) = z/(1-z)·log(z)^(m-1)`, so that
//! `Li_1 = I_1 = -log(1-z)` and `Li_2 = -I_2 - log(1-z)·log(z)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FSym {
    Li(u32),
    I(u32),
    /// log(z)
    LogZ,
    /// log(1 - z)
    LogOneMinusZ,
    /// z/(1 - z)
    Ratio,
}

type FMono = BTreeMap<FSym, u32>;

/// A polynomial in the formal symbols with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Formal(BTreeMap<FMono, BigRational>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    LiToI,
    IToLi,
}

impl Formal {
    pub fn zero() -> Self {
        Formal::default()
    }

    pub fn one() -> Self {
        Formal::sym_pow(None, 0)
    }

    pub fn sym(s: FSym) -> Self {
        Formal::sym_pow(Some(s), 1)
    }

    fn sym_pow(s: Option<FSym>, e: u32) -> Self {
        let mut m = FMono::new();
        if let Some(s) = s {
            if e > 0 {
                m.insert(s, e);
            }
        }
        let mut f = Formal::zero();
        f.add_term(m, BigRational::one());
        f
    }

    fn add_term(&mut self, m: FMono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(m.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Monomials (symbol to exponent) with their coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (&BTreeMap<FSym, u32>, &BigRational)> {
        self.0.iter()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut r = Formal::zero();
        for (m, x) in &self.0 {
            r.add_term(m.clone(), x * c);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Formal::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                let mut m = m1.clone();
                for (s, e) in m2 {
                    *m.entry(*s).or_insert(0) += e;
                }
                r.add_term(m, c1 * c2);
            }
        }
        r
    }

    /// The operator `z·d/dz`.
    pub fn zdz(&self) -> Self {
        let mut r = Formal::zero();
        for (m, c) in &self.0 {
            for (s, e) in m {
                let mut rest = m.clone();
                if *e == 1 {
                    rest.remove(s);
                } else {
                    rest.insert(*s, e - 1);
                }
                let rest = Formal(BTreeMap::from([(rest, c * BigRational::from_integer(BigInt::from(*e)))]));
                let ds = match s {
                    FSym::Li(1) => Formal::sym(FSym::Ratio),
                    FSym::Li(j) => Formal::sym(FSym::Li(j - 1)),
                    FSym::I(j) => Formal::sym(FSym::Ratio).mul(&Formal::sym_pow(Some(FSym::LogZ), j - 1)),
                    FSym::LogZ => Formal::one(),
                    FSym::LogOneMinusZ => Formal::sym(FSym::Ratio).scale(&-BigRational::one()),
                    // z/(1-z) ↦ z/(1-z)^2 = R + R^2
                    FSym::Ratio => Formal::sym(FSym::Ratio).add(&Formal::sym_pow(Some(FSym::Ratio), 2)),
                };
                r = r.add(&rest.mul(&ds));
            }
        }
        r
    }

    /// Replaces every occurrence of `s` by `by`.
    pub fn substitute(&self, s: FSym, by: &Formal) -> Self {
        let mut r = Formal::zero();
        for (m, c) in &self.0 {
            let mut t = Formal(BTreeMap::from([(FMono::new(), c.clone())]));
            for (v, e) in m {
                let f = if *v == s { by.clone() } else { Formal::sym(*v) };
                for _ in 0..*e {
                    t = t.mul(&f);
                }
            }
            r = r.add(&t);
        }
        r
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

fn sign(k: u32) -> BigRational {
    if k.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn log_pow(k: u32) -> Formal {
    Formal::sym_pow(Some(FSym::LogZ), k)
}

/// `Li_m = ((-1)^{m-1}/(m-1)!)·I_m − Σ_{k=1}^{m-1} ((-1)^k/k!)·Li_{m-k}·log(z)^k`
/// with the `Li` on the right kept symbolic.
fn li_step(m: u32) -> Formal {
    let lead = sign(m - 1) / BigRational::from_integer(factorial(m - 1));
    let mut r = Formal::sym(FSym::I(m)).scale(&lead);
    for k in 1..m {
        let c = -(sign(k) / BigRational::from_integer(factorial(k)));
        r = r.add(&Formal::sym(FSym::Li(m - k)).mul(&log_pow(k)).scale(&c));
    }
    r
}

/// `Li_m` in terms of `I_1..I_m` and `log(z)` (LiToI), or `I_m` in terms of
/// `Li_1..Li_m` and `log(z)` (IToLi).
pub fn li_i_convert(m: u32, dir: Direction) -> Result<Formal> {
    if m < 1 {
        return Err(Error::Domain("polylog index must be at least 1".into()));
    }
    match dir {
        Direction::LiToI => {
            let mut r = li_step(m);
            for j in (1..m).rev() {
                let sub = li_i_convert(j, Direction::LiToI)?;
                r = r.substitute(FSym::Li(j), &sub);
            }
            Ok(r)
        }
        Direction::IToLi => {
            // solve the defining relation for I_m
            let lead = sign(m - 1) / BigRational::from_integer(factorial(m - 1));
            let rest = li_step(m).add(&Formal::sym(FSym::I(m)).scale(&-lead.clone()));
            let r = Formal::sym(FSym::Li(m)).add(&rest.scale(&-BigRational::one()));
            Ok(r.scale(&(BigRational::one() / lead)))
        }
    }
}

/// `z·d/dz` of the converted `Li_m` equals the converted `Li_{m-1}`; for
/// `m = 1` it equals `z·d/dz(-log(1-z))`.
pub fn recurrence_holds(m: u32) -> Result<bool> {
    let lhs = li_i_convert(m, Direction::LiToI)?.zdz();
    let rhs = if m == 1 {
        Formal::sym(FSym::LogOneMinusZ).scale(&-BigRational::one()).zdz()
    } else {
        li_i_convert(m - 1, Direction::LiToI)?
    };
    Ok(lhs == rhs)
}

impl fmt::Display for FSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FSym::Li(j) => write!(f, "Li({j}, z)"),
            FSym::I(j) => write!(f, "I({j}, z)"),
            FSym::LogZ => write!(f, "log(z)"),
            FSym::LogOneMinusZ => write!(f, "log(1 - z)"),
            FSym::Ratio => write!(f, "z/(1 - z)"),
        }
    }
}

impl fmt::Display for Formal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let factors: Vec<String> = m
                .iter()
                .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn low_orders() {
        assert_eq!(li_i_convert(1, Direction::LiToI).unwrap(), Formal::sym(FSym::I(1)));
        // Li_2 = -I_2 - log(1-z) log(z), with I_1 = -log(1-z)
        let li2 = li_i_convert(2, Direction::LiToI).unwrap();
        let want = Formal::sym(FSym::I(2))
            .scale(&q(-1))
            .add(&Formal::sym(FSym::LogOneMinusZ).mul(&Formal::sym(FSym::LogZ)).scale(&q(-1)));
        assert_eq!(li2.substitute(FSym::I(1), &Formal::sym(FSym::LogOneMinusZ).scale(&q(-1))), want);
        assert!(li_i_convert(0, Direction::LiToI).is_err());
    }

    #[test]
    fn recurrence_up_to_five() {
        for m in 1..=5 {
            assert!(recurrence_holds(m).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn inverse_direction() {
        for m in 1..=5 {
            let mut e = li_i_convert(m, Direction::IToLi).unwrap();
            for j in 1..=m {
                e = e.substitute(FSym::Li(j), &li_i_convert(j, Direction::LiToI).unwrap());
            }
            assert_eq!(e, Formal::sym(FSym::I(m)));
        }
    }
}
