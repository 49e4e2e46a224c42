//! Expression grammar, normalization modulo the compacts, and rendering of
//! canonical decompositions.

pub mod ast;
pub mod normalize;
pub mod parser;
pub mod render;

pub use ast::{MapLetter, MapWord, OperatorExpression};
pub use normalize::normalize;
pub use parser::parse;
pub use render::{render, to_composition_sum};
