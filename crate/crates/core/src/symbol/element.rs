use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{HalfPolynomial, Mat2, TrigPolynomial};
use crate::error::{Error, Result};
use crate::moebius::ContactData;
use crate::tolerance::Tolerances;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A coset `t_w + f(x*x) + g(xx*) + u h(x*x) + u* k(xx*)` of the quotient
/// algebra, where `x` is the coset of `C_phi` and `u` its unitary polar factor.
///
/// The quintuple `(w; f, g, h, k)` is unique, so equality of elements is
/// equality of the five parts.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolElement {
    pub w: TrigPolynomial,
    pub f: HalfPolynomial,
    pub g: HalfPolynomial,
    pub h: HalfPolynomial,
    pub k: HalfPolynomial,
    pub contact: ContactData,
}

/// A point of the maximal ideal space: the circle and the interval `[0, s]`
/// glued at `zeta ~ eta ~ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaPoint {
    /// A point of the circle other than `zeta`, `eta`.
    Circle(Complex64),
    /// The glued point `zeta ~ eta ~ 0`.
    TriplePoint,
    /// `t` in `(0, s]`.
    Interval(f64),
}

impl LambdaPoint {
    pub fn circle(lambda: Complex64, contact: &ContactData) -> Result<Self> {
        let tol = Tolerances::default();
        if (lambda.norm() - 1.0).abs() > tol.boundary {
            return Err(Error::InvalidPoint(format!("{lambda} is not unimodular")));
        }
        if (lambda - contact.zeta).norm() <= tol.boundary || (lambda - contact.eta).norm() <= tol.boundary {
            return Ok(Self::TriplePoint);
        }
        Ok(Self::Circle(lambda))
    }

    pub fn interval(t: f64, contact: &ContactData) -> Result<Self> {
        if t == 0.0 {
            return Ok(Self::TriplePoint);
        }
        if !(t > 0.0 && t <= contact.s) {
            return Err(Error::InvalidPoint(format!("{t} is outside (0, {}]", contact.s)));
        }
        Ok(Self::Interval(t))
    }
}

impl SymbolElement {
    pub fn zero(contact: ContactData) -> Self {
        Self {
            w: TrigPolynomial::zero(),
            f: HalfPolynomial::zero(),
            g: HalfPolynomial::zero(),
            h: HalfPolynomial::zero(),
            k: HalfPolynomial::zero(),
            contact,
        }
    }

    pub fn identity(contact: ContactData) -> Self {
        Self::embed_toeplitz(TrigPolynomial::constant(ONE), contact)
    }

    /// `T_w -> (w; 0, 0, 0, 0)`.
    pub fn embed_toeplitz(w: TrigPolynomial, contact: ContactData) -> Self {
        Self { w, ..Self::zero(contact) }
    }

    /// `C_phi -> x = u sqrt(x*x)`, i.e. `h(t) = sqrt(t)`.
    pub fn embed_cphi(contact: ContactData) -> Self {
        Self {
            h: HalfPolynomial::sqrt_t_power(0, ONE),
            ..Self::zero(contact)
        }
    }

    /// `C_sigma -> x*/s`, i.e. `k(t) = sqrt(t)/s`.
    pub fn embed_csigma(contact: ContactData) -> Self {
        Self {
            k: HalfPolynomial::sqrt_t_power(0, Complex64::new(1.0 / contact.s, 0.0)),
            ..Self::zero(contact)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero() && self.f.is_zero() && self.g.is_zero() && self.h.is_zero() && self.k.is_zero()
    }

    fn check_contact(&self, other: &Self) -> Result<()> {
        let (a, b) = (&self.contact, &other.contact);
        // dphi is determined by (zeta, eta, s)
        if a.zeta != b.zeta || a.eta != b.eta || a.s != b.s {
            return Err(Error::ContactMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_contact(other)?;
        Ok(Self {
            w: self.w.add(&other.w),
            f: self.f.add(&other.f),
            g: self.g.add(&other.g),
            h: self.h.add(&other.h),
            k: self.k.add(&other.k),
            contact: self.contact,
        })
    }

    pub fn scalar_mul(&self, c: Complex64) -> Self {
        Self {
            w: self.w.scale(c),
            f: self.f.scale(c),
            g: self.g.scale(c),
            h: self.h.scale(c),
            k: self.k.scale(c),
            contact: self.contact,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scalar_mul(-ONE))
    }

    /// Product in the quotient algebra, from the relations
    /// `t_w x = w(zeta) x`, `x t_w = w(eta) x`, `x^2 = 0` and
    /// `u f(x*x) = f(xx*) u`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_contact(other)?;
        let (zeta, eta) = (self.contact.zeta, self.contact.eta);
        let (w1z, w1e) = (self.w.eval(zeta), self.w.eval(eta));
        let (w2z, w2e) = (other.w.eval(zeta), other.w.eval(eta));
        let (b1, b2) = (self, other);
        let sum = |parts: [HalfPolynomial; 4]| {
            parts
                .into_iter()
                .fold(HalfPolynomial::zero(), |acc, p| acc.add(&p))
        };
        Ok(Self {
            w: b1.w.mul(&b2.w),
            f: sum([b2.f.scale(w1e), b1.f.scale(w2e), b1.f.mul(&b2.f), b1.k.mul(&b2.h)]),
            g: sum([b2.g.scale(w1z), b1.g.scale(w2z), b1.g.mul(&b2.g), b1.h.mul(&b2.k)]),
            h: sum([b2.h.scale(w1z), b1.h.scale(w2e), b1.g.mul(&b2.h), b1.h.mul(&b2.f)]),
            k: sum([b2.k.scale(w1e), b1.k.scale(w2z), b1.k.mul(&b2.g), b1.f.mul(&b2.k)]),
            contact: self.contact,
        })
    }

    /// `(w; f, g, h, k)* = (conj w; conj f, conj g, conj k, conj h)`.
    pub fn adjoint(&self) -> Self {
        Self {
            w: self.w.conj(),
            f: self.f.conj(),
            g: self.g.conj(),
            h: self.k.conj(),
            k: self.h.conj(),
            contact: self.contact,
        }
    }

    /// The matrix `[[w(zeta)+g(t), h(t)], [k(t), w(eta)+f(t)]]` at `t`.
    /// At `t = 0` this is the triple-point value.
    pub fn interval_matrix(&self, t: f64) -> Mat2 {
        Mat2::new(
            self.w.eval(self.contact.zeta) + self.g.eval(t),
            self.h.eval(t),
            self.k.eval(t),
            self.w.eval(self.contact.eta) + self.f.eval(t),
        )
    }

    /// [`SymbolElement::interval_matrix`] at `t = u^2`.
    pub fn interval_matrix_sqrt(&self, u: f64) -> Mat2 {
        Mat2::new(
            self.w.eval(self.contact.zeta) + self.g.eval_sqrt(u),
            self.h.eval_sqrt(u),
            self.k.eval_sqrt(u),
            self.w.eval(self.contact.eta) + self.f.eval_sqrt(u),
        )
    }

    /// The local symbol at a point of the maximal ideal space.
    pub fn phi_lambda(&self, lambda: LambdaPoint) -> Mat2 {
        match lambda {
            LambdaPoint::Circle(z) => Mat2::scalar(self.w.eval(z)),
            LambdaPoint::TriplePoint => {
                Mat2::diag(self.w.eval(self.contact.zeta), self.w.eval(self.contact.eta))
            }
            LambdaPoint::Interval(t) => self.interval_matrix(t),
        }
    }

    pub fn is_central(&self) -> bool {
        self.is_central_with(&Tolerances::default())
    }

    /// `h = k = 0`, `f = g` and `w(zeta) = w(eta)`, all to coefficient tolerance.
    pub fn is_central_with(&self, tol: &Tolerances) -> bool {
        let eps = tol.coefficient * (1.0 + self.max_abs_coeff());
        self.h.max_abs_coeff() <= eps
            && self.k.max_abs_coeff() <= eps
            && self.f.add(&self.g.scale(-ONE)).max_abs_coeff() <= eps
            && (self.w.eval(self.contact.zeta) - self.w.eval(self.contact.eta)).norm() <= eps
    }

    /// Gelfand transform `t_w + f(a) -> w + f` of a central element, with `w`
    /// extended by `w(zeta)` on the interval and `f` extended by zero on the circle.
    pub fn gelfand_value(&self, lambda: LambdaPoint) -> Result<Complex64> {
        if !self.is_central() {
            return Err(Error::NotCentral);
        }
        Ok(match lambda {
            LambdaPoint::Circle(z) => self.w.eval(z),
            LambdaPoint::TriplePoint => self.w.eval(self.contact.zeta),
            LambdaPoint::Interval(t) => self.w.eval(self.contact.zeta) + self.f.eval(t),
        })
    }

    pub fn max_abs_coeff(&self) -> f64 {
        [
            self.w.max_abs_coeff(),
            self.f.max_abs_coeff(),
            self.g.max_abs_coeff(),
            self.h.max_abs_coeff(),
            self.k.max_abs_coeff(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

// JSON: {"w": [[n, re, im], ...], "f": {"p": [[re, im], ...], "q": [...]}, ...,
//        "s": s, "zeta": [re, im], "eta": [re, im]}

#[derive(Serialize, Deserialize)]
struct HalfJson {
    p: Vec<[f64; 2]>,
    q: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    w: Vec<(i64, f64, f64)>,
    f: HalfJson,
    g: HalfJson,
    h: HalfJson,
    k: HalfJson,
    s: f64,
    zeta: [f64; 2],
    eta: [f64; 2],
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn half_to_json(h: &HalfPolynomial) -> HalfJson {
    HalfJson {
        p: pairs(h.p()),
        q: pairs(h.q()),
    }
}

fn half_from_json(h: HalfJson) -> Result<HalfPolynomial> {
    let z = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
    HalfPolynomial::new(z(h.p), z(h.q))
}

impl Serialize for SymbolElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let c = &self.contact;
        ElementJson {
            w: self.w.terms().map(|(n, z)| (n, z.re, z.im)).collect(),
            f: half_to_json(&self.f),
            g: half_to_json(&self.g),
            h: half_to_json(&self.h),
            k: half_to_json(&self.k),
            s: c.s,
            zeta: [c.zeta.re, c.zeta.im],
            eta: [c.eta.re, c.eta.im],
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymbolElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ElementJson::deserialize(deserializer)?;
        let build = || -> Result<SymbolElement> {
            let contact = ContactData::from_boundary(
                Complex64::new(raw.zeta[0], raw.zeta[1]),
                Complex64::new(raw.eta[0], raw.eta[1]),
                raw.s,
            )?;
            Ok(SymbolElement {
                w: TrigPolynomial::from_terms(raw.w.iter().map(|&(n, re, im)| (n, Complex64::new(re, im)))),
                f: half_from_json(raw.f)?,
                g: half_from_json(raw.g)?,
                h: half_from_json(raw.h)?,
                k: half_from_json(raw.k)?,
                contact,
            })
        };
        build().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn phi0_contact() -> ContactData {
        ContactData::from_boundary(c(1.0, 0.0), c(-1.0, 0.0), 2.0).unwrap()
    }

    fn root() -> HalfPolynomial {
        HalfPolynomial::sqrt_t_power(0, ONE)
    }

    #[test]
    fn embeddings() {
        let k = phi0_contact();
        assert_eq!(
            SymbolElement::identity(k).w,
            TrigPolynomial::constant(ONE)
        );
        let x = SymbolElement::embed_cphi(k);
        assert_eq!(x.h, root());
        let t = 0.7;
        let m = x.phi_lambda(LambdaPoint::Interval(t));
        assert_eq!(m, Mat2::new(ZERO, c(t.sqrt(), 0.0), ZERO, ZERO));
        let sig = SymbolElement::embed_csigma(k);
        assert_eq!(sig.k, HalfPolynomial::sqrt_t_power(0, c(0.5, 0.0)));
    }

    #[test]
    fn linear_structure() {
        let k = phi0_contact();
        let x = SymbolElement::embed_cphi(k);
        assert_eq!(x.add(&SymbolElement::zero(k)).unwrap(), x);
        let re = x.add(&x.adjoint()).unwrap();
        assert_eq!(re.h, root());
        assert_eq!(re.k, root());
        assert!(re.f.is_zero() && re.g.is_zero() && re.w.is_zero());
        let z2 = SymbolElement::embed_toeplitz(TrigPolynomial::monomial(1), k).scalar_mul(c(2.0, 0.0));
        assert_eq!(z2.w, TrigPolynomial::monomial(1).scale(c(2.0, 0.0)));
    }

    #[test]
    fn mismatched_contact_rejected() {
        let a = SymbolElement::embed_cphi(phi0_contact());
        let other = ContactData::from_boundary(c(1.0, 0.0), c(0.0, 1.0), 2.0).unwrap();
        let b = SymbolElement::embed_cphi(other);
        assert_eq!(a.add(&b), Err(Error::ContactMismatch));
        assert_eq!(a.multiply(&b), Err(Error::ContactMismatch));
    }

    #[test]
    fn product_examples() {
        let k = phi0_contact();
        let x = SymbolElement::embed_cphi(k);
        assert!(x.multiply(&x).unwrap().is_zero());
        let xsx = x.adjoint().multiply(&x).unwrap();
        assert_eq!(xsx.f, HalfPolynomial::t_power(1, ONE));
        assert!(xsx.g.is_zero() && xsx.h.is_zero() && xsx.k.is_zero());
        let tz = SymbolElement::embed_toeplitz(TrigPolynomial::monomial(1), k);
        let left = tz.multiply(&x).unwrap();
        assert_eq!(left, x);
        let right = x.multiply(&tz).unwrap();
        assert_eq!(right, x.scalar_mul(c(-1.0, 0.0)));
    }

    #[test]
    fn adjoint_examples() {
        let k = phi0_contact();
        let x = SymbolElement::embed_cphi(k);
        assert_eq!(x.adjoint().k, root());
        assert_eq!(x.adjoint().adjoint(), x);
        let tz = SymbolElement::embed_toeplitz(TrigPolynomial::monomial(1), k);
        assert_eq!(tz.adjoint().w, TrigPolynomial::monomial(-1));
    }

    #[test]
    fn phi_lambda_examples() {
        let k = phi0_contact();
        let id = SymbolElement::identity(k);
        for lam in [
            LambdaPoint::TriplePoint,
            LambdaPoint::Interval(1.3),
            LambdaPoint::Circle(c(0.0, 1.0)),
        ] {
            assert_eq!(id.phi_lambda(lam), Mat2::identity());
        }
        let w = TrigPolynomial::from_terms([(1, c(2.0, 0.0)), (0, c(0.5, 0.0))]);
        let tw = SymbolElement::embed_toeplitz(w, k);
        assert_eq!(tw.phi_lambda(LambdaPoint::TriplePoint), Mat2::diag(c(2.5, 0.0), c(-1.5, 0.0)));
    }

    #[test]
    fn lambda_point_validation() {
        let k = phi0_contact();
        assert_eq!(LambdaPoint::interval(0.0, &k).unwrap(), LambdaPoint::TriplePoint);
        assert!(LambdaPoint::interval(2.5, &k).is_err());
        assert!(LambdaPoint::circle(c(0.5, 0.0), &k).is_err());
        assert_eq!(LambdaPoint::circle(c(-1.0, 0.0), &k).unwrap(), LambdaPoint::TriplePoint);
    }

    #[test]
    fn centrality_and_gelfand() {
        let k = phi0_contact();
        let x = SymbolElement::embed_cphi(k);
        let a = x.multiply(&x.adjoint()).unwrap().add(&x.adjoint().multiply(&x).unwrap()).unwrap();
        assert!(a.is_central());
        assert!((a.gelfand_value(LambdaPoint::Interval(1.25)).unwrap() - c(1.25, 0.0)).norm() < 1e-15);
        assert!(!x.is_central());
        assert_eq!(x.gelfand_value(LambdaPoint::TriplePoint), Err(Error::NotCentral));
        // w(1) = w(-1): z^2
        let w = TrigPolynomial::monomial(2);
        let tw = SymbolElement::embed_toeplitz(w.clone(), k);
        assert!(tw.is_central());
        let lam = Complex64::from_polar(1.0, 0.9);
        assert_eq!(tw.gelfand_value(LambdaPoint::Circle(lam)).unwrap(), w.eval(lam));
        assert!(!SymbolElement::embed_toeplitz(TrigPolynomial::monomial(1), k).is_central());
    }

    #[test]
    fn json_round_trip() {
        let k = phi0_contact();
        let x = SymbolElement::embed_cphi(k);
        let b = x
            .add(&SymbolElement::embed_toeplitz(TrigPolynomial::monomial(-2).scale(c(0.25, -1.0)), k))
            .unwrap()
            .add(&x.adjoint().multiply(&x).unwrap())
            .unwrap();
        let text = serde_json::to_string(&b).unwrap();
        assert!(text.contains(r#""w":[[-2,0.25,-1.0]]"#), "{text}");
        let back: SymbolElement = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
    }
}
