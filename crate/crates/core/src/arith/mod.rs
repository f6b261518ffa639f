//! Exact arithmetic kernels: fields, dense polynomials, factorization over Q,
//! algebraic constants and integer/rational linear algebra.

pub mod constant;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod qpoly;

pub use constant::{Constant, NumberField};
pub use field::FieldOps;
pub use poly::Poly;
pub use qpoly::QPoly;
