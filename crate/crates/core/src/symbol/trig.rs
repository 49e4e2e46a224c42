use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

/// Finite Fourier series `w(e^{i theta}) = sum_n c_n e^{i n theta}`.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// the function.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
}

impl TrigPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_terms([(0, c)])
    }

    /// `z^k` (negative `k` gives powers of `conj(z)` on the circle).
    pub fn monomial(k: i64) -> Self {
        Self::from_terms([(k, Complex64::new(1.0, 0.0))])
    }

    /// Sums repeated frequencies and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    /// Nonzero `(frequency, coefficient)` pairs in increasing frequency.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|n|` with a nonzero coefficient.
    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Value at a point of the unit circle.
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.terms().map(|(k, c)| c * lambda.powi(k as i32)).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms().chain(other.terms()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k, c * v)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms()
                .flat_map(|(j, a)| other.terms().map(move |(k, b)| (j + k, a * b))),
        )
    }

    /// Pointwise complex conjugate on the circle: `c_n -> conj(c_{-n})`.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (-k, c.conj())))
    }
}

impl fmt::Display for TrigPolynomial {
    /// Grammar form, e.g. `1 + (0,2)z^-1 - z^3`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            let power = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            crate::rewriter::render::write_term(out, i == 0, c, &power, "")?;
        }
        Ok(())
    }
}
