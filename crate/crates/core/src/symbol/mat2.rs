use std::ops::{Add, Mul};

use num_complex::Complex64;

/// A complex 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(a, z, z, d)
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::diag(c, c)
    }

    pub fn identity() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Largest singular value: `sigma^2 = (F + sqrt(F^2 - 4|det|^2)) / 2`
    /// with `F` the squared Frobenius norm.
    pub fn norm(&self) -> f64 {
        let f = self.frobenius_sqr();
        let d = self.det().norm();
        let gap = ((f - 2.0 * d) * (f + 2.0 * d)).max(0.0);
        ((f + gap.sqrt()) / 2.0).sqrt()
    }

    /// Both eigenvalues, `(tr ± sqrt(tr^2 - 4 det)) / 2` on the principal branch.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let m = &self.0;
        let half_sum = (m[0][0] + m[1][1]) / 2.0;
        let half_diff = (m[1][1] - m[0][0]) / 2.0;
        let root = (half_diff * half_diff + m[0][1] * m[1][0]).sqrt();
        [half_sum + root, half_sum - root]
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}
