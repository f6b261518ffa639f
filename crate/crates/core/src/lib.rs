//! Exact symbolic integration with dilogarithm and polylogarithm terms over
//! towers of transcendental log/exp/primitive extensions of Q(x).

pub mod arith;
pub mod engine;
pub mod error;
pub mod frontend;
pub mod logsym;
pub mod places;
pub mod tensor2;
pub mod tower;

pub use error::{Error, Result};
