//! Differential towers Q(x)(θ_1, ..., θ_n) of transcendental monomials.

pub mod elem;
pub mod linrel;

pub use elem::{EPoly, Elem};

use crate::arith::{Constant, FieldOps, Poly};
use crate::error::{Error, Result};
use crate::frontend::render::render_elem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialKind {
    BaseVariable,
    Log(Elem),
    Exp(Elem),
    Primitive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub kind: MonomialKind,
    /// Display name used for base variables and primitives.
    pub name: String,
    /// D(θ) in the tower below (for exponentials, the product (Du)·θ).
    pub deriv: Elem,
}

/// Description of a generator to append, arguments already in the tower.
#[derive(Clone, Debug)]
pub enum MonomialSpec {
    Base(String),
    Log(Elem),
    Exp(Elem),
    Primitive { name: String, deriv: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    gens: Vec<Monomial>,
}

pub fn build_tower(spec: &[MonomialSpec]) -> Result<Tower> {
    let mut it = spec.iter();
    let mut t = match it.next() {
        Some(MonomialSpec::Base(name)) => Tower::new(name),
        _ => return Err(Error::Domain("a tower starts with its base variable".into())),
    };
    for s in it {
        match s {
            MonomialSpec::Base(_) => return Err(Error::Domain("base variable may occur only once".into())),
            MonomialSpec::Log(u) => t.push_log(u.clone())?,
            MonomialSpec::Exp(u) => t.push_exp(u.clone())?,
            MonomialSpec::Primitive { name, deriv } => t.push_primitive(name, deriv.clone())?,
        };
    }
    Ok(t)
}

impl Tower {
    pub fn new(var: &str) -> Self {
        Tower {
            gens: vec![Monomial { kind: MonomialKind::BaseVariable, name: var.to_string(), deriv: Elem::int(1) }],
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Monomial {
        &self.gens[i]
    }

    pub fn var_name(&self) -> &str {
        &self.gens[0].name
    }

    pub fn top(&self) -> usize {
        self.gens.len() - 1
    }

    /// The tower truncated to generators `0..=level`.
    pub fn truncate(&self, level: usize) -> Tower {
        Tower { gens: self.gens[..=level].to_vec() }
    }

    fn check_arg(&self, u: &Elem) -> Result<()> {
        if let Some(l) = u.level() {
            if l >= self.gens.len() {
                return Err(Error::Domain("argument outside the tower".into()));
            }
        }
        Ok(())
    }

    /// Index of an existing generator equal to `kind`, if any.
    pub fn find(&self, kind: &MonomialKind) -> Option<usize> {
        self.gens.iter().position(|g| &g.kind == kind)
    }

    /// Appends `log(u)`, returning its index (or the index of an identical
    /// existing generator).
    pub fn push_log(&mut self, u: Elem) -> Result<usize> {
        self.check_arg(&u)?;
        if u.is_zero() {
            return Err(Error::Domain("log(0) is undefined".into()));
        }
        if u.is_const() {
            return Err(Error::Domain(format!("log of the constant {} is not a tower monomial", render_elem(self, &u))));
        }
        if let Some(i) = self.find(&MonomialKind::Log(u.clone())) {
            return Ok(i);
        }
        let du = self.derive(&u).div(&u);
        if let Some(rel) = self.log_relation(&du) {
            return Err(Error::DependentGenerator(format!(
                "log({}) - ({}) is constant",
                render_elem(self, &u),
                rel
            )));
        }
        self.gens.push(Monomial { kind: MonomialKind::Log(u), name: String::new(), deriv: du });
        Ok(self.gens.len() - 1)
    }

    pub fn push_exp(&mut self, u: Elem) -> Result<usize> {
        self.check_arg(&u)?;
        if u.is_const() {
            return Err(Error::Domain(format!("exp of the constant {} is not a tower monomial", render_elem(self, &u))));
        }
        if let Some(i) = self.find(&MonomialKind::Exp(u.clone())) {
            return Ok(i);
        }
        let du = self.derive(&u);
        if let Some(rel) = self.exp_relation(&du) {
            return Err(Error::DependentGenerator(format!(
                "{} - ({}) is constant",
                render_elem(self, &u),
                rel
            )));
        }
        let v = self.gens.len();
        let deriv = du.mul(&Elem::gen(v));
        self.gens.push(Monomial { kind: MonomialKind::Exp(u), name: String::new(), deriv });
        Ok(v)
    }

    pub fn push_primitive(&mut self, name: &str, deriv: Elem) -> Result<usize> {
        self.check_arg(&deriv)?;
        if let Some(i) = self
            .gens
            .iter()
            .position(|g| g.kind == MonomialKind::Primitive && g.name == name)
        {
            if self.gens[i].deriv == deriv {
                return Ok(i);
            }
            return Err(Error::Domain(format!("primitive {name} redefined")));
        }
        self.gens.push(Monomial { kind: MonomialKind::Primitive, name: name.to_string(), deriv });
        Ok(self.gens.len() - 1)
    }

    /// Logarithmic derivatives of existing generators whose logs are in the
    /// tower: log monomials, base and primitive generators (their own
    /// derivatives) and exponential arguments.
    fn log_spanning(&self) -> Vec<(Elem, String)> {
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            let name = render_elem(self, &Elem::gen(i));
            match &g.kind {
                MonomialKind::Exp(u) => out.push((self.derive(u), render_elem(self, u))),
                _ => out.push((g.deriv.clone(), name)),
            }
        }
        out
    }

    fn relation_text(&self, coeffs: &[Constant], names: &[String]) -> String {
        let mut s = String::new();
        for (c, n) in coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            if c.is_one() {
                s.push_str(n);
            } else {
                s.push_str(&format!("({c})*{n}"));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    fn log_relation(&self, dlog: &Elem) -> Option<String> {
        let span = self.log_spanning();
        let cols: Vec<Vec<Elem>> = span.iter().map(|(e, _)| vec![e.clone()]).collect();
        let c = linrel::solve_constant_combination(std::slice::from_ref(dlog), &cols)?;
        let names: Vec<String> = span.into_iter().map(|(_, n)| n).collect();
        Some(self.relation_text(&c, &names))
    }

    fn exp_relation(&self, du: &Elem) -> Option<String> {
        let mut span = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            match &g.kind {
                MonomialKind::Log(_) => span.push((g.deriv.clone(), render_elem(self, &Elem::gen(i)))),
                MonomialKind::Exp(u) => span.push((self.derive(u), render_elem(self, u))),
                _ => {}
            }
        }
        if span.is_empty() {
            return None;
        }
        let cols: Vec<Vec<Elem>> = span.iter().map(|(e, _)| vec![e.clone()]).collect();
        let c = linrel::solve_constant_combination(std::slice::from_ref(du), &cols)?;
        let names: Vec<String> = span.into_iter().map(|(_, n)| n).collect();
        Some(self.relation_text(&c, &names))
    }

    /// The derivation of the tower.
    pub fn derive(&self, e: &Elem) -> Elem {
        match e {
            Elem::C(_) => Elem::int(0),
            Elem::F(f) => {
                let v = f.var;
                let dtheta = &self.gens[v].deriv;
                let coeffwise = |p: &EPoly| -> EPoly { Poly::new(p.coeffs().iter().map(|c| self.derive(c)).collect()) };
                let (n, d) = (&f.num, &f.den);
                let a = coeffwise(n).mul(d).sub(&n.mul(&coeffwise(d)));
                let b = n.derivative().mul(d).sub(&n.mul(&d.derivative()));
                let top = Elem::from_poly(v, a).add(&Elem::from_poly(v, b).mul(dtheta));
                top.div(&Elem::from_poly(v, d.mul(d)))
            }
        }
    }

    pub fn is_constant(&self, e: &Elem) -> bool {
        self.derive(e).is_zero()
    }

    /// Canonical form; elements are always stored canonically, so this is a
    /// structural rebuild that also validates generator indices.
    pub fn normalize(&self, e: &Elem) -> Result<Elem> {
        match e {
            Elem::C(_) => Ok(e.clone()),
            Elem::F(f) => {
                if f.var >= self.gens.len() {
                    return Err(Error::Domain("generator outside the tower".into()));
                }
                let rebuild = |p: &EPoly| -> Result<EPoly> {
                    Ok(Poly::new(p.coeffs().iter().map(|c| self.normalize(c)).collect::<Result<Vec<_>>>()?))
                };
                let num = rebuild(&f.num)?;
                let den = rebuild(&f.den)?;
                if den.is_zero() {
                    return Err(Error::Domain("division by zero".into()));
                }
                Ok(Elem::from_frac(f.var, num, den))
            }
        }
    }

    /// Quotient `num/den` with a domain error on zero division.
    pub fn checked_div(&self, num: &Elem, den: &Elem) -> Result<Elem> {
        if den.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(num.div(den))
    }

    /// η = Dθ/θ for exponentials (the derivative of the argument).
    pub fn exp_eta(&self, v: usize) -> Option<Elem> {
        match &self.gens[v].kind {
            MonomialKind::Exp(u) => Some(self.derive(u)),
            _ => None,
        }
    }

    pub fn is_primitive_like(&self, v: usize) -> bool {
        !matches!(self.gens[v].kind, MonomialKind::Exp(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Elem {
        Elem::gen(0)
    }

    #[test]
    fn example_tower_derivatives() {
        let t = build_tower(&[MonomialSpec::Base("x".into()), MonomialSpec::Log(x()), MonomialSpec::Exp(x())]).unwrap();
        assert_eq!(t.gen(1).deriv, Elem::int(1).div(&x()));
        assert_eq!(t.gen(2).deriv, Elem::gen(2));
    }

    #[test]
    fn log_zero_rejected() {
        let r = build_tower(&[MonomialSpec::Base("x".into()), MonomialSpec::Log(Elem::int(0))]);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn dependent_log_of_exp() {
        let r = build_tower(&[
            MonomialSpec::Base("x".into()),
            MonomialSpec::Exp(x()),
            MonomialSpec::Log(Elem::gen(1)),
        ]);
        match r {
            Err(Error::DependentGenerator(msg)) => assert!(msg.contains("log(exp(x))"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dependent_exp_of_logs() {
        let mut t = Tower::new("x");
        t.push_log(x()).unwrap();
        let u = Elem::gen(1).mul(&Elem::int(3));
        assert!(matches!(t.push_exp(u), Err(Error::DependentGenerator(_))));
        // log(x^2) = 2 log(x)
        assert!(matches!(t.push_log(x().mul(&x())), Err(Error::DependentGenerator(_))));
        assert!(t.push_log(x().add(&Elem::int(1))).is_ok());
    }

    #[test]
    fn derive_examples() {
        let mut t = Tower::new("x");
        t.push_log(x()).unwrap();
        let th = Elem::gen(1);
        assert_eq!(t.derive(&th.mul(&th)), th.mul(&Elem::int(2)).div(&x()));
        t.push_exp(x().mul(&x())).unwrap();
        assert_eq!(t.derive(&Elem::gen(2)), x().mul(&Elem::int(2)).mul(&Elem::gen(2)));
        assert!(t.derive(&Elem::rat(7, 3)).is_zero());
        assert!(t.is_constant(&th.mul(&Elem::int(0)).add(&Elem::int(2))));
        assert!(!t.is_constant(&x()));
    }
}
