//! Canonical quintuples `(w; f, g, h, k)` for cosets modulo the compacts and
//! their 2x2 local symbols.

mod element;
mod half;
mod mat2;
pub mod spectrum;
mod trig;

pub use element::{LambdaPoint, SymbolElement};
pub use half::HalfPolynomial;
pub use mat2::Mat2;
pub use spectrum::{
    essential_norm, essential_spectrum, is_fredholm, GridEstimate, LocalSymbol, Locus, SampledSymbol,
    SpectrumPoint, SpectrumSource,
};
pub use trig::TrigPolynomial;
