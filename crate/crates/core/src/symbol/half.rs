use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A function `p(t) + sqrt(t) q(t)` on `[0, s]` with polynomials `p`, `q`
/// and `p(0) = 0`.
///
/// This ring is closed under the product table of the quotient algebra, so
/// all symbol arithmetic on it is exact polynomial arithmetic. Equivalently it
/// is the set of polynomials in `u = sqrt(t)` without constant term: even
/// powers of `u` live in `p`, odd powers in `q`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HalfPolynomial {
    p: Vec<Complex64>,
    q: Vec<Complex64>,
}

fn trim(v: &mut Vec<Complex64>) {
    while v.last() == Some(&ZERO) {
        v.pop();
    }
}

fn poly_eval(coeffs: &[Complex64], t: f64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * t + c)
}

fn poly_add(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    (0..x.len().max(y.len()))
        .map(|i| x.get(i).copied().unwrap_or(ZERO) + y.get(i).copied().unwrap_or(ZERO))
        .collect()
}

fn poly_mul(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

impl HalfPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds `p(t) + sqrt(t) q(t)` from coefficient lists in increasing
    /// degree. Fails unless `p(0) = 0`.
    pub fn new(p: Vec<Complex64>, q: Vec<Complex64>) -> Result<Self> {
        if p.first().is_some_and(|c| *c != ZERO) {
            return Err(Error::NonzeroAtOrigin);
        }
        let mut out = Self { p, q };
        out.normalize();
        Ok(out)
    }

    fn normalize(&mut self) {
        if let Some(first) = self.p.first_mut() {
            *first = ZERO;
        }
        trim(&mut self.p);
        trim(&mut self.q);
    }

    /// `c t^n` for `n >= 1`.
    pub fn t_power(n: usize, c: Complex64) -> Self {
        assert!(n >= 1, "t^0 does not vanish at the origin");
        let mut p = vec![ZERO; n + 1];
        p[n] = c;
        let mut out = Self { p, q: Vec::new() };
        out.normalize();
        out
    }

    /// `c sqrt(t) t^n` for `n >= 0`.
    pub fn sqrt_t_power(n: usize, c: Complex64) -> Self {
        let mut q = vec![ZERO; n + 1];
        q[n] = c;
        let mut out = Self { p: Vec::new(), q };
        out.normalize();
        out
    }

    pub fn p(&self) -> &[Complex64] {
        &self.p
    }

    pub fn q(&self) -> &[Complex64] {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_empty() && self.q.is_empty()
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        poly_eval(&self.p, t) + t.max(0.0).sqrt() * poly_eval(&self.q, t)
    }

    /// Value at `t = u^2`, evaluated as a polynomial in `u`.
    pub fn eval_sqrt(&self, u: f64) -> Complex64 {
        let t = u * u;
        poly_eval(&self.p, t) + u * poly_eval(&self.q, t)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.p.iter().chain(&self.q).map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self {
            p: poly_add(&self.p, &other.p),
            q: poly_add(&self.q, &other.q),
        };
        out.normalize();
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self {
            p: self.p.iter().map(|x| c * x).collect(),
            q: self.q.iter().map(|x| c * x).collect(),
        };
        out.normalize();
        out
    }

    /// `(p1 + sqrt(t) q1)(p2 + sqrt(t) q2) = p1 p2 + t q1 q2 + sqrt(t)(p1 q2 + q1 p2)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut tq = vec![ZERO];
        tq.extend(poly_mul(&self.q, &other.q));
        let mut out = Self {
            p: poly_add(&poly_mul(&self.p, &other.p), &tq),
            q: poly_add(&poly_mul(&self.p, &other.q), &poly_mul(&self.q, &other.p)),
        };
        out.normalize();
        out
    }

    /// Pointwise conjugate on the real interval.
    pub fn conj(&self) -> Self {
        Self {
            p: self.p.iter().map(|c| c.conj()).collect(),
            q: self.q.iter().map(|c| c.conj()).collect(),
        }
    }
}

impl fmt::Display for HalfPolynomial {
    /// `t - 2t^2 + (0,1)√t·t`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        let terms = self
            .p
            .iter()
            .enumerate()
            .map(|(n, c)| (n, c, false))
            .chain(self.q.iter().enumerate().map(|(n, c)| (n, c, true)));
        for (n, c, root) in terms {
            if *c == ZERO {
                continue;
            }
            let power = match n {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{n}"),
            };
            let name = match (root, power.is_empty()) {
                (false, _) => power,
                (true, true) => "√t".to_string(),
                (true, false) => format!("√t·{power}"),
            };
            crate::rewriter::render::write_term(out, first, *c, &name, "")?;
            first = false;
        }
        Ok(())
    }
}
