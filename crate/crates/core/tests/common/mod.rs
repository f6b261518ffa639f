//! Random inputs shared by the integration tests.
#![allow(dead_code)]

use polyint::arith::{Constant, FieldOps};
use polyint::engine::{Ctx, DilogTerm, IntegralExpr};
use polyint::tower::Elem;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn x() -> Elem {
    Elem::gen(0)
}

/// Polynomial of exact degree `deg` in generator `v` with small integer
/// coefficients.
pub fn poly_in(rng: &mut TestRng, v: usize, deg: usize) -> Elem {
    let t = Elem::gen(v);
    let mut p = Elem::int(0);
    for k in 0..=deg {
        let mut c = rng.gen_range(-4..=4);
        if k == deg && c == 0 {
            c = 1;
        }
        p = p.add(&t.pow(k as i64).mul(&Elem::int(c)));
    }
    p
}

/// Non-constant `h ∈ Q(x)` with numerator and denominator of degree at most
/// `max_deg`, `h ∉ {0, 1}`.
pub fn rational_h(rng: &mut TestRng, max_deg: usize) -> Elem {
    loop {
        let (dn, dd) = (rng.gen_range(0..=max_deg), rng.gen_range(0..=max_deg));
        let n = poly_in(rng, 0, dn);
        let d = poly_in(rng, 0, dd);
        if d.is_zero() || n.is_zero() {
            continue;
        }
        let h = n.div(&d);
        if !h.is_const() {
            return h;
        }
    }
}

pub fn rational_d(rng: &mut TestRng) -> Constant {
    loop {
        let n = rng.gen_range(-5..=5);
        if n != 0 {
            return Constant::rat(n, rng.gen_range(1..=4));
        }
    }
}

pub fn term(d: i64, h: Elem) -> DilogTerm {
    DilogTerm { d: Constant::int(d), h, k: 1 }
}

/// Adds `T(H) + T(1−H) − D(log H·log(1−H))` and `T(1/G) + T(G) − D(log²G/2)`,
/// both zero, so the derivative of `e` is unchanged.
pub fn obfuscate(ctx: &mut Ctx, e: &IntegralExpr, big_h: &Elem, big_g: &Elem) -> IntegralExpr {
    let one = Elem::int(1);
    let lh = ctx.log_of(big_h).unwrap();
    let l1h = ctx.log_of(&one.sub(big_h)).unwrap();
    let lg = ctx.log_of(big_g).unwrap();
    let mut out = e.clone();
    out.elementary = out.elementary.sub(&lh.mul(&l1h)).sub(&lg.mul(&lg).scale(&Elem::rat(1, 2)));
    out.terms.extend([term(1, big_h.clone()), term(1, one.sub(big_h)), term(1, big_g.inv()), term(1, big_g.clone())]);
    out
}
