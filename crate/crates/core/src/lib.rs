//! Symbol calculus for the C*-algebra generated by the shift and a
//! linear-fractional composition operator on the Hardy space.
//!
//! * [`moebius`]: linear-fractional maps, Krein adjoints, boundary contact.
//! * [`symbol`]: canonical quintuples, local 2x2 symbols, essential spectra and norms.
//! * [`rewriter`]: expression grammar, normalization modulo compacts, canonical rendering.
//! * [`oracle`]: finite compressions on the monomial basis as numerical ground truth.
//! * [`verify`]: the built-in claim battery used by `hardy verify`.

pub mod error;
pub mod moebius;
pub mod oracle;
pub mod rewriter;
pub mod symbol;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use moebius::{AutomorphismKind, ContactData, MapClass, MoebiusMap};
pub use rewriter::{normalize, parse, render, to_composition_sum, OperatorExpression};
pub use symbol::{HalfPolynomial, LambdaPoint, Mat2, SymbolElement, TrigPolynomial};
pub use tolerance::Tolerances;
