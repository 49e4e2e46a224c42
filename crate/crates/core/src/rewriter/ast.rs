use std::fmt;

use num_complex::Complex64;

use crate::moebius::MoebiusMap;
use crate::symbol::TrigPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapLetter {
    Phi,
    Sigma,
}

/// A composition word, outermost map first: `[Phi, Sigma]` is `φ∘σ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MapWord(pub Vec<MapLetter>);

impl MapWord {
    pub fn letters(&self) -> &[MapLetter] {
        &self.0
    }

    pub fn then(mut self, other: &MapWord) -> MapWord {
        self.0.extend_from_slice(&other.0);
        self
    }

    pub fn repeat(&self, n: usize) -> MapWord {
        MapWord(self.0.repeat(n))
    }

    /// The composed map, given `φ`; `σ` is its Krein adjoint.
    pub fn to_map(&self, phi: &MoebiusMap) -> MoebiusMap {
        let sigma = phi.krein_adjoint();
        self.0.iter().fold(MoebiusMap::identity(), |acc, l| {
            acc.compose(match l {
                MapLetter::Phi => phi,
                MapLetter::Sigma => &sigma,
            })
        })
    }
}

impl fmt::Display for MapWord {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(out, "id");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(out, "∘")?;
            }
            write!(
                out,
                "{}",
                match l {
                    MapLetter::Phi => "φ",
                    MapLetter::Sigma => "σ",
                }
            )?;
        }
        Ok(())
    }
}

/// Words in Toeplitz and composition operators.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorExpression {
    Identity,
    Toeplitz(TrigPolynomial),
    /// `C`, the composition operator of `φ`.
    Cphi,
    /// `S`, the composition operator of the Krein adjoint `σ`.
    Csigma,
    /// `C_{word}`.
    Composition(MapWord),
    /// `K`, an unspecified compact operator.
    Compact,
    Adjoint(Box<OperatorExpression>),
    Sum(Vec<OperatorExpression>),
    Product(Vec<OperatorExpression>),
    Scalar(Complex64, Box<OperatorExpression>),
}

impl OperatorExpression {
    pub fn adjoint(self) -> Self {
        OperatorExpression::Adjoint(Box::new(self))
    }

    pub fn scaled(self, c: Complex64) -> Self {
        OperatorExpression::Scalar(c, Box::new(self))
    }

    /// Whether an explicit `K` occurs anywhere.
    pub fn mentions_compact(&self) -> bool {
        use OperatorExpression::*;
        match self {
            Compact => true,
            Adjoint(e) | Scalar(_, e) => e.mentions_compact(),
            Sum(es) | Product(es) => es.iter().any(Self::mentions_compact),
            Identity | Toeplitz(_) | Cphi | Csigma | Composition(_) => false,
        }
    }
}

fn write_scalar(out: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 && c.re >= 0.0 {
        write!(out, "{}", c.re)
    } else {
        write!(out, "({},{})", c.re, c.im)
    }
}

impl fmt::Display for OperatorExpression {
    /// Fully parenthesized grammar form; parses back to an equal tree.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use OperatorExpression::*;
        let join = |out: &mut fmt::Formatter<'_>, es: &[OperatorExpression], sep: &str| {
            write!(out, "(")?;
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    write!(out, "{sep}")?;
                }
                write!(out, "{e}")?;
            }
            write!(out, ")")
        };
        match self {
            Identity => write!(out, "I"),
            Toeplitz(w) => write!(out, "T{{{w}}}"),
            Cphi => write!(out, "C"),
            Csigma => write!(out, "S"),
            Composition(word) => write!(out, "C_{{{word}}}"),
            Compact => write!(out, "K"),
            Adjoint(e) => write!(out, "({e})'"),
            Sum(es) => join(out, es, " + "),
            Product(es) => join(out, es, " * "),
            Scalar(c, e) => {
                write!(out, "(")?;
                write_scalar(out, *c)?;
                write!(out, " * ({e}))")
            }
        }
    }
}
