//! Expression grammar, rendering and the command-line driver.

pub mod render;
pub mod parse;
pub mod cli;
pub mod output;
