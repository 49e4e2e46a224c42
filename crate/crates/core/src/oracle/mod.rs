//! Finite compressions on the monomial basis `1, z, z^2, ...` of the Hardy space.
//!
//! Column `j` of a matrix holds the coefficients of the operator applied to
//! `z^j`. Expressions are evaluated at twice the requested size and then cut,
//! so products see most of the tail that a plain product of compressions
//! would drop.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::MoebiusMap;
use crate::rewriter::OperatorExpression;
use crate::symbol::TrigPolynomial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// An `n x n` compression.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    entries: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() != entries.ncols() {
            return Err(Error::InvalidArgument("compressions are square with dimension >= 1".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            entries: &self.entries * &other.entries,
        }
    }

    /// Leading `n x n` block.
    pub fn leading(&self, n: usize) -> Self {
        let n = n.min(self.dim());
        Self {
            entries: self.entries.view((0, 0), (n, n)).into_owned(),
        }
    }

    /// `||M e_n||`.
    pub fn column_norm(&self, n: usize) -> f64 {
        self.entries.column(n).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// CSV with header `row,col,re,im`, row-major.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["row", "col", "re", "im"]).map_err(csv_error)?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let z = self.get(i, j);
                writer
                    .write_record([i.to_string(), j.to_string(), z.re.to_string(), z.im.to_string()])
                    .map_err(csv_error)?;
            }
        }
        finish_csv(writer)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Serialization(e.to_string())
}

fn finish_csv(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

fn check_pole(m: &MoebiusMap) -> Result<MoebiusMap> {
    let m = m.normalized();
    if m.c != ZERO && (m.d / m.c).norm() <= 1.0 {
        return Err(Error::PoleInDisk);
    }
    Ok(m)
}

/// The first `n` Taylor coefficients of `m` at 0.
pub fn taylor_coeffs(m: &MoebiusMap, n: usize) -> Result<Vec<Complex64>> {
    let m = check_pole(m)?;
    // (cz + d) y = az + b, solved term by term
    let mut y = vec![ZERO; n];
    for k in 0..n {
        let rhs = match k {
            0 => m.b,
            1 => m.a,
            _ => ZERO,
        };
        let carry = if k > 0 { m.c * y[k - 1] } else { ZERO };
        y[k] = (rhs - carry) / m.d;
    }
    Ok(y)
}

/// Column `j` holds the first `n` coefficients of `m(z)^j`.
///
/// Uses `(cz + d) m^{j+1} = (az + b) m^j` coefficientwise, which involves only
/// lower-order coefficients and so is exact through degree `n - 1`.
pub fn composition_matrix(m: &MoebiusMap, n: usize) -> Result<TruncatedOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let m = check_pole(m)?;
    let mut entries = DMatrix::<Complex64>::zeros(n, n);
    entries[(0, 0)] = ONE;
    for j in 0..n - 1 {
        for k in 0..n {
            let mut acc = m.b * entries[(k, j)];
            if k > 0 {
                acc += m.a * entries[(k - 1, j)] - m.c * entries[(k - 1, j + 1)];
            }
            entries[(k, j + 1)] = acc / m.d;
        }
    }
    TruncatedOperator::from_matrix(entries)
}

/// Entry `(i, j)` is the Fourier coefficient of index `i - j`.
pub fn toeplitz_matrix(w: &TrigPolynomial, n: usize) -> Result<TruncatedOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let mut entries = DMatrix::<Complex64>::zeros(n, n);
    for (k, c) in w.terms() {
        for j in 0..n as i64 {
            let i = j + k;
            if (0..n as i64).contains(&i) {
                entries[(i as usize, j as usize)] = c;
            }
        }
    }
    TruncatedOperator::from_matrix(entries)
}

fn evaluate(e: &OperatorExpression, phi: &MoebiusMap, size: usize) -> Result<DMatrix<Complex64>> {
    use OperatorExpression::*;
    Ok(match e {
        Identity => DMatrix::identity(size, size),
        Toeplitz(w) => toeplitz_matrix(w, size)?.entries,
        Cphi => composition_matrix(phi, size)?.entries,
        Csigma => composition_matrix(&phi.krein_adjoint(), size)?.entries,
        Composition(word) => composition_matrix(&word.to_map(phi), size)?.entries,
        Compact => DMatrix::zeros(size, size),
        Adjoint(inner) => evaluate(inner, phi, size)?.adjoint(),
        Scalar(c, inner) => evaluate(inner, phi, size)? * *c,
        Sum(terms) => {
            let mut acc = DMatrix::zeros(size, size);
            for t in terms {
                acc += evaluate(t, phi, size)?;
            }
            acc
        }
        Product(factors) => {
            let mut acc: Option<DMatrix<Complex64>> = None;
            for f in factors {
                let m = evaluate(f, phi, size)?;
                acc = Some(match acc {
                    None => m,
                    Some(a) => a * m,
                });
            }
            acc.unwrap_or_else(|| DMatrix::identity(size, size))
        }
    })
}

/// The `n x n` compression of `e`, with `C` the composition operator of `phi`
/// and `S` that of its Krein adjoint. Evaluated at size `2n`, then cut.
pub fn truncate(e: &OperatorExpression, phi: &MoebiusMap, n: usize) -> Result<TruncatedOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let full = evaluate(e, phi, 2 * n)?;
    TruncatedOperator::from_matrix(full.view((0, 0), (n, n)).into_owned())
}

/// `||M z^n||` for `n < window`, with `M = truncate(e, phi, n_trunc)`.
pub fn vanishing_sequence(e: &OperatorExpression, phi: &MoebiusMap, n_trunc: usize, window: usize) -> Result<Vec<f64>> {
    if 2 * window > n_trunc {
        return Err(Error::WindowTooLarge { window, n: n_trunc });
    }
    let m = truncate(e, phi, n_trunc)?;
    Ok((0..window).map(|n| m.column_norm(n)).collect())
}

/// Ascending eigenvalues of a self-adjoint compression.
pub fn compression_eigs(e: &OperatorExpression, phi: &MoebiusMap, n: usize) -> Result<Vec<f64>> {
    hermitian_eigs(&truncate(e, phi, n)?, 1e-8)
}

/// Ascending eigenvalues of `(M + M*)/2`, provided `M` is self-adjoint to
/// `tol` relative to its largest entry.
pub fn hermitian_eigs(m: &TruncatedOperator, tol: f64) -> Result<Vec<f64>> {
    let deviation = m.max_abs_diff(&m.adjoint());
    if deviation > tol * m.max_abs().max(1.0) {
        return Err(Error::NotSelfAdjoint(deviation));
    }
    let sym = (&m.entries + m.entries.adjoint()) * Complex64::new(0.5, 0.0);
    let mut eigs: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

/// One-sided distance: the farthest predicted point from its nearest eigenvalue.
pub fn fill_distance(predicted: &[f64], eigs: &[f64]) -> Result<f64> {
    if predicted.is_empty() || eigs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = eigs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nearest = |x: f64| {
        let i = sorted.partition_point(|e| *e < x);
        let above = sorted.get(i).map_or(f64::INFINITY, |e| e - x);
        let below = i.checked_sub(1).map_or(f64::INFINITY, |j| x - sorted[j]);
        above.min(below)
    };
    Ok(predicted.iter().map(|x| nearest(*x)).fold(0.0, f64::max))
}

/// `count` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| if i == count - 1 { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 })
            .collect(),
    }
}

/// CSV with header `n,norm`.
pub fn norms_csv(norms: &[f64]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["n", "norm"]).map_err(csv_error)?;
    for (n, v) in norms.iter().enumerate() {
        writer.write_record([n.to_string(), v.to_string()]).map_err(csv_error)?;
    }
    finish_csv(writer)
}

/// One line of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    /// Truncation size, for claims that use compressions.
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub window: Option<usize>,
    pub floor_or_fill: f64,
    pub pass: bool,
}
