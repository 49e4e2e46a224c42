//! Linear-fractional self-maps of the unit disk.
//!
//! A map `z -> (az+b)/(cz+d)` is stored by its coefficient quadruple, which is
//! only meaningful up to a nonzero scalar. Composition is the 2x2 matrix
//! product, and the Krein adjoint is `(conj(a) z - conj(c)) / (-conj(b) z + conj(d))`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `z -> (az+b)/(cz+d)` with `ad - bc != 0`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "MapJson", into = "MapJson")]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
}

impl TryFrom<MapJson> for MoebiusMap {
    type Error = Error;

    fn try_from(raw: MapJson) -> Result<Self> {
        let z = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        MoebiusMap::new(z(raw.a), z(raw.b), z(raw.c), z(raw.d))
    }
}

impl From<MoebiusMap> for MapJson {
    fn from(m: MoebiusMap) -> Self {
        let p = |z: Complex64| [z.re, z.im];
        MapJson {
            a: p(m.a),
            b: p(m.b),
            c: p(m.c),
            d: p(m.d),
        }
    }
}

/// Boundary contact of a non-automorphism: `phi(zeta) = eta` with both on the
/// circle, the angular derivative `dphi = phi'(zeta)` and `s = 1/|dphi|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactData {
    pub zeta: Complex64,
    pub eta: Complex64,
    pub dphi: Complex64,
    pub s: f64,
}

impl ContactData {
    /// Rebuilds contact data from the boundary points and `s`.
    ///
    /// For a linear-fractional map the angular derivative at a contact point
    /// is `conj(zeta) * eta * |phi'(zeta)|`, so `(zeta, eta, s)` determine it.
    pub fn from_boundary(zeta: Complex64, eta: Complex64, s: f64) -> Result<Self> {
        let tol = Tolerances::default().boundary;
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
        }
        if (zeta.norm() - 1.0).abs() > tol || (eta.norm() - 1.0).abs() > tol {
            return Err(Error::InvalidArgument("contact points must be unimodular".into()));
        }
        Ok(Self {
            zeta,
            eta,
            dphi: zeta.conj() * eta / s,
            s,
        })
    }

    /// True when the contact point is a fixed point.
    pub fn is_fixed(&self, tol: &Tolerances) -> bool {
        (self.zeta - self.eta).norm() <= tol.boundary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutomorphismKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Classification of a linear-fractional map relative to the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapClass {
    NotSelfMap,
    /// `sup |phi| < 1` on the circle.
    StrictContraction,
    /// Non-automorphism touching the circle at exactly one point.
    Contact { contact: ContactData, parabolic: bool },
    Automorphism(AutomorphismKind),
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Self { a, b, c, d };
        let scale = m.coefficient_norm_sqr();
        if !scale.is_finite() || m.determinant().norm() <= 1e-14 * scale {
            return Err(Error::Degenerate);
        }
        Ok(m)
    }

    /// Convenience constructor for real coefficients.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    /// `U(z) = alpha z`.
    pub fn rotation(alpha: Complex64) -> Self {
        Self {
            a: alpha,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    fn coefficient_norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Same map with coefficients scaled to unit Euclidean norm.
    pub fn normalized(&self) -> Self {
        let k = self.coefficient_norm_sqr().sqrt();
        Self {
            a: self.a / k,
            b: self.b / k,
            c: self.c / k,
            d: self.d / k,
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm() <= f64::EPSILON * (self.c.norm() * z.norm() + self.d.norm()) {
            return Err(Error::PoleAt(z));
        }
        Ok((self.a * z + self.b) / den)
    }

    /// `phi'(z) = (ad - bc) / (cz + d)^2`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm() <= f64::EPSILON * (self.c.norm() * z.norm() + self.d.norm()) {
            return Err(Error::PoleAt(z));
        }
        Ok(self.determinant() / (den * den))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MoebiusMap) -> MoebiusMap {
        let (u, v) = (self, inner);
        MoebiusMap {
            a: u.a * v.a + u.b * v.c,
            b: u.a * v.b + u.b * v.d,
            c: u.c * v.a + u.d * v.c,
            d: u.c * v.b + u.d * v.d,
        }
    }

    pub fn krein_adjoint(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.a.conj(),
            b: -self.c.conj(),
            c: -self.b.conj(),
            d: self.d.conj(),
        }
    }

    /// n-fold composition; `iterate(0)` is the identity.
    pub fn iterate(&self, n: u32) -> MoebiusMap {
        let mut result = MoebiusMap::identity();
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base).rescaled();
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base).rescaled();
            }
        }
        result
    }

    /// Rescales by a power of two (exact in binary floating point) to keep
    /// the coefficients near unit size.
    fn rescaled(self) -> MoebiusMap {
        let biggest = self
            .coefficients()
            .iter()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(0.0_f64, f64::max);
        if biggest == 0.0 || (2f64.powi(-32)..2f64.powi(32)).contains(&biggest) {
            return self;
        }
        let k = 2f64.powi(-(biggest.log2().floor() as i32));
        MoebiusMap {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k,
            d: self.d * k,
        }
    }

    /// Projective equality: all 2x2 minors of the stacked quadruples vanish.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        let u = self.coefficients();
        let v = other.coefficients();
        let scale = (self.coefficient_norm_sqr() * other.coefficient_norm_sqr()).sqrt();
        (0..4).all(|i| (i + 1..4).all(|j| (u[i] * v[j] - u[j] * v[i]).norm() <= tol * scale))
    }

    pub fn commutes_with(&self, other: &MoebiusMap, tol: f64) -> bool {
        self.compose(other).approx_eq(&other.compose(self), tol)
    }

    /// Coefficients `(A, K)` of the contact quadratic `A z^2 + K z + conj(A)`,
    /// which is `z (|az+b|^2 - |cz+d|^2)` on the circle.
    fn contact_quadratic(&self) -> (Complex64, f64) {
        let a_coef = self.a * self.b.conj() - self.c * self.d.conj();
        let k_coef = self.a.norm_sqr() + self.b.norm_sqr() - self.c.norm_sqr() - self.d.norm_sqr();
        (a_coef, k_coef)
    }

    fn is_automorphism_like(&self, tol: &Tolerances) -> bool {
        let (a_coef, k_coef) = self.normalized().contact_quadratic();
        a_coef.norm() <= tol.boundary && k_coef.abs() <= tol.boundary
    }

    /// The scalar `(conj(c) conj(zeta) + conj(d)) / (-conj(b) eta + conj(d))`
    /// relating `C_phi^*` to `C_sigma` modulo compacts.
    pub fn adjoint_scalar(&self, zeta: Complex64, eta: Complex64) -> Complex64 {
        (self.c.conj() * zeta.conj() + self.d.conj()) / (-self.b.conj() * eta + self.d.conj())
    }

    pub fn classify(&self) -> MapClass {
        self.classify_with(&Tolerances::default())
    }

    pub fn classify_with(&self, tol: &Tolerances) -> MapClass {
        let m = self.normalized();
        if m.c.norm() > 0.0 && (m.d / m.c).norm() <= 1.0 + tol.boundary {
            return MapClass::NotSelfMap;
        }
        let sampled_max = (0..tol.circle_samples)
            .map(|j| {
                let z = Complex64::from_polar(1.0, TAU * j as f64 / tol.circle_samples as f64);
                m.eval(z).map(|w| w.norm()).unwrap_or(f64::INFINITY)
            })
            .fold(0.0_f64, f64::max);
        if sampled_max > 1.0 + tol.self_map {
            return MapClass::NotSelfMap;
        }
        if m.is_automorphism_like(tol) {
            return MapClass::Automorphism(m.automorphism_kind(tol));
        }
        // On the circle |phi|^2 - 1 has the same sign as K + 2 Re(A z), whose max is K + 2|A|.
        let (a_coef, k_coef) = m.contact_quadratic();
        let excess = k_coef + 2.0 * a_coef.norm();
        if excess > tol.self_map {
            return MapClass::NotSelfMap;
        }
        if excess < -tol.self_map {
            return MapClass::StrictContraction;
        }
        match self.boundary_contact_with(tol) {
            Some(contact) => {
                let parabolic =
                    contact.is_fixed(tol) && (contact.dphi - ONE).norm() <= tol.boundary;
                MapClass::Contact { contact, parabolic }
            }
            None => MapClass::StrictContraction,
        }
    }

    fn automorphism_kind(&self, tol: &Tolerances) -> AutomorphismKind {
        let det = self.determinant();
        let tr = self.a + self.d;
        let invariant = tr * tr / det;
        if (invariant - 4.0).norm() <= tol.discriminant.sqrt() {
            AutomorphismKind::Parabolic
        } else if invariant.re > 4.0 {
            AutomorphismKind::Hyperbolic
        } else {
            AutomorphismKind::Elliptic
        }
    }

    pub fn boundary_contact(&self) -> Option<ContactData> {
        self.boundary_contact_with(&Tolerances::default())
    }

    /// Solves `|az+b| = |cz+d|` on the circle. For a non-automorphism self-map
    /// the contact point is a double root of `A z^2 + K z + conj(A) = 0`.
    pub fn boundary_contact_with(&self, tol: &Tolerances) -> Option<ContactData> {
        if self.is_automorphism_like(tol) {
            return None;
        }
        let (a_coef, k_coef) = self.contact_quadratic();
        let scale = self.coefficient_norm_sqr();
        let zeta = if a_coef.norm() <= tol.discriminant * scale {
            self.contact_by_sampling(tol)?
        } else {
            let disc = k_coef * k_coef - 4.0 * a_coef.norm_sqr();
            let disc_scale = (k_coef * k_coef).max(4.0 * a_coef.norm_sqr());
            if disc.abs() > tol.discriminant * disc_scale {
                return None;
            }
            -k_coef / (2.0 * a_coef)
        };
        if (zeta.norm() - 1.0).abs() > tol.boundary.sqrt() {
            return None;
        }
        let zeta = zeta / zeta.norm();
        let eta = self.eval(zeta).ok()?;
        if (eta.norm() - 1.0).abs() > tol.boundary.sqrt() {
            return None;
        }
        let eta = eta / eta.norm();
        let dphi = self.derivative(zeta).ok()?;
        Some(ContactData {
            zeta,
            eta,
            dphi,
            s: 1.0 / dphi.norm(),
        })
    }

    /// Fallback when the quadratic degenerates: locate the maximum of `|phi|`
    /// on a dense circle grid and refine it.
    fn contact_by_sampling(&self, tol: &Tolerances) -> Option<Complex64> {
        let modulus = |theta: f64| {
            self.eval(Complex64::from_polar(1.0, theta))
                .map(|w| w.norm())
                .unwrap_or(f64::INFINITY)
        };
        let n = tol.circle_samples;
        let mut h = TAU / n as f64;
        let mut best = (0..n)
            .map(|j| j as f64 * h)
            .max_by(|x, y| modulus(*x).total_cmp(&modulus(*y)))?;
        for _ in 0..8 {
            best = (-10..=10)
                .map(|j| best + j as f64 * h / 10.0)
                .max_by(|x, y| modulus(*x).total_cmp(&modulus(*y)))?;
            h /= 10.0;
        }
        ((modulus(best) - 1.0).abs() <= tol.self_map).then(|| Complex64::from_polar(1.0, best))
    }

    /// The unique boundary fixed point of a parabolic map, if there is one.
    pub fn parabolic_fixed_point(&self, tol: &Tolerances) -> Option<Complex64> {
        let m = self.normalized();
        if m.c.norm() <= tol.discriminant {
            return None;
        }
        let b_coef = m.d - m.a;
        let disc = b_coef * b_coef + 4.0 * m.b * m.c;
        if disc.norm() > tol.discriminant {
            return None;
        }
        let z0 = -b_coef / (2.0 * m.c);
        if (z0.norm() - 1.0).abs() > tol.boundary.sqrt() {
            return None;
        }
        Some(z0 / z0.norm())
    }

    /// Translation number `t` with `Phi(m(z)) = Phi(z) + t` for the Cayley
    /// map `Phi(z) = (eta+z)/(eta-z)` at the boundary fixed point `eta`.
    pub fn parabolic_translation(&self) -> Result<Complex64> {
        self.parabolic_translation_with(&Tolerances::default())
    }

    pub fn parabolic_translation_with(&self, tol: &Tolerances) -> Result<Complex64> {
        let eta = self.parabolic_fixed_point(tol).ok_or(Error::NotParabolic)?;
        let cayley = |z: Complex64| (eta + z) / (eta - z);
        let samples = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -0.5),
        ];
        let mut shifts = Vec::with_capacity(samples.len());
        for z in samples {
            let image = self.eval(z).map_err(|_| Error::NotParabolic)?;
            shifts.push(cayley(image) - cayley(z));
        }
        let t = shifts[0];
        let spread = shifts.iter().map(|u| (u - t).norm()).fold(0.0, f64::max);
        if spread > 1e-9 * (1.0 + t.norm()) || t.re < -tol.boundary {
            return Err(Error::NotParabolic);
        }
        Ok(t)
    }

    /// Boundary contact for a map satisfying the standing assumptions of the
    /// adjoint formula: a self-map, not an automorphism, touching the circle.
    pub fn contact(&self) -> Result<ContactData> {
        match self.classify() {
            MapClass::Contact { contact, .. } => Ok(contact),
            MapClass::Automorphism(_) => Err(Error::Automorphism),
            MapClass::NotSelfMap => Err(Error::NotSelfMap),
            MapClass::StrictContraction => Err(Error::NoBoundaryContact),
        }
    }

    /// As [`MoebiusMap::contact`], additionally requiring `zeta != eta`.
    pub fn quotient_contact(&self) -> Result<ContactData> {
        let contact = self.contact()?;
        if contact.is_fixed(&Tolerances::default()) {
            return Err(Error::FixedContact);
        }
        Ok(contact)
    }
}

impl PartialEq for MoebiusMap {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, Tolerances::default().projective)
    }
}

pub fn maps_equal(m1: &MoebiusMap, m2: &MoebiusMap) -> bool {
    m1 == m2
}

pub fn maps_commute(m1: &MoebiusMap, m2: &MoebiusMap) -> bool {
    m1.commutes_with(m2, Tolerances::default().projective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn phi0() -> MoebiusMap {
        MoebiusMap::real(-1.0, -1.0, 0.0, 2.0).unwrap()
    }

    fn sigma0() -> MoebiusMap {
        MoebiusMap::real(-1.0, 0.0, 1.0, 2.0).unwrap()
    }

    fn psi(t: f64) -> MoebiusMap {
        MoebiusMap::real(2.0 - t, t, -t, 2.0 + t).unwrap()
    }

    fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
        (x - y).norm() <= tol
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(MoebiusMap::real(1.0, 2.0, 2.0, 4.0), Err(Error::Degenerate));
    }

    #[test]
    fn compose_examples() {
        let m = phi0();
        assert_eq!(MoebiusMap::identity().compose(&m), m);
        let tau = phi0().compose(&sigma0());
        assert_eq!(tau, MoebiusMap::real(0.0, -1.0, 1.0, 2.0).unwrap());
        for z in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 1.0)] {
            let lhs = tau.eval(z).unwrap();
            let rhs = phi0().eval(sigma0().eval(z).unwrap()).unwrap();
            assert!(close(lhs, rhs, 1e-14));
            assert!(close(lhs, -1.0 / (z + 2.0), 1e-14));
        }
        let (alpha, beta) = (Complex64::from_polar(1.0, 0.3), Complex64::from_polar(1.0, -1.1));
        assert_eq!(
            MoebiusMap::rotation(alpha).compose(&MoebiusMap::rotation(beta)),
            MoebiusMap::rotation(alpha * beta)
        );
    }

    #[test]
    fn krein_adjoint_examples() {
        let sigma = phi0().krein_adjoint();
        assert_eq!(sigma, sigma0());
        assert!(close(sigma.eval(c(0.3, 0.0)).unwrap(), c(-0.3 / 2.3, 0.0), 1e-15));
        let alpha = Complex64::from_polar(1.0, 0.7);
        let u = MoebiusMap::rotation(alpha);
        assert_eq!(u.krein_adjoint(), MoebiusMap::rotation(alpha.conj()));
        assert_eq!(u.krein_adjoint().compose(&u), MoebiusMap::identity());
    }

    #[test]
    fn classify_examples() {
        match phi0().classify() {
            MapClass::Contact { contact, parabolic } => {
                assert!(!parabolic);
                assert!(close(contact.zeta, c(1.0, 0.0), 1e-12));
                assert!(close(contact.eta, c(-1.0, 0.0), 1e-12));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            MoebiusMap::real(0.5, 0.0, 0.0, 1.0).unwrap().classify(),
            MapClass::StrictContraction
        );
        match psi(2.0).classify() {
            MapClass::Contact { contact, parabolic } => {
                assert!(parabolic);
                assert!(close(contact.zeta, c(1.0, 0.0), 1e-12));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(MoebiusMap::real(2.0, 0.0, 0.0, 1.0).unwrap().classify(), MapClass::NotSelfMap);
        // pole inside the disk, |phi| = 1/2 on the circle
        assert_eq!(MoebiusMap::real(0.0, 1.0, 2.0, 0.0).unwrap().classify(), MapClass::NotSelfMap);
    }

    #[test]
    fn classify_automorphisms() {
        let rot = MoebiusMap::rotation(Complex64::from_polar(1.0, 1.0));
        assert_eq!(rot.classify(), MapClass::Automorphism(AutomorphismKind::Elliptic));
        // z -> (z + 1/2)/(1 + z/2) fixes +-1
        let hyp = MoebiusMap::real(1.0, 0.5, 0.5, 1.0).unwrap();
        assert_eq!(hyp.classify(), MapClass::Automorphism(AutomorphismKind::Hyperbolic));
        let par = parabolic_automorphism(1.0);
        assert_eq!(par.classify(), MapClass::Automorphism(AutomorphismKind::Parabolic));
        assert_eq!(par.contact(), Err(Error::Automorphism));
    }

    /// Conjugate of `w -> w + i y` under the Cayley map at 1.
    fn parabolic_automorphism(y: f64) -> MoebiusMap {
        let cayley = MoebiusMap::real(1.0, 1.0, -1.0, 1.0).unwrap();
        let inv = MoebiusMap::real(1.0, -1.0, 1.0, 1.0).unwrap();
        let shift = MoebiusMap::new(ONE, c(0.0, y), ZERO, ONE).unwrap();
        inv.compose(&shift).compose(&cayley)
    }

    #[test]
    fn boundary_contact_examples() {
        let k = phi0().boundary_contact().unwrap();
        assert!(close(k.zeta, c(1.0, 0.0), 1e-15));
        assert!(close(k.eta, c(-1.0, 0.0), 1e-15));
        assert!(close(k.dphi, c(-0.5, 0.0), 1e-15));
        assert!((k.s - 2.0).abs() < 1e-15);
        assert!(close(phi0().adjoint_scalar(k.zeta, k.eta), c(2.0, 0.0), 1e-15));

        let rho = MoebiusMap::real(1.0, 1.0, 0.0, 2.0).unwrap();
        let k = rho.boundary_contact().unwrap();
        assert!(close(k.zeta, ONE, 1e-15) && close(k.eta, ONE, 1e-15));
        assert!(close(k.dphi, c(0.5, 0.0), 1e-15));
        assert!((k.s - 2.0).abs() < 1e-15);

        assert!(MoebiusMap::real(0.5, 0.0, 0.0, 1.0).unwrap().boundary_contact().is_none());
    }

    #[test]
    fn contact_from_boundary_matches_map() {
        let k = phi0().boundary_contact().unwrap();
        let rebuilt = ContactData::from_boundary(k.zeta, k.eta, k.s).unwrap();
        assert!(close(rebuilt.dphi, k.dphi, 1e-15));
    }

    #[test]
    fn derivative_examples() {
        assert!(close(phi0().derivative(ONE).unwrap(), c(-0.5, 0.0), 1e-15));
        assert!(close(MoebiusMap::identity().derivative(c(0.3, -0.2)).unwrap(), ONE, 0.0));
        for t in [0.5, 1.0, 2.0, 3.7] {
            assert!(close(psi(t).derivative(ONE).unwrap(), ONE, 1e-14));
        }
        assert_eq!(sigma0().derivative(c(-2.0, 0.0)), Err(Error::PoleAt(c(-2.0, 0.0))));
    }

    #[test]
    fn parabolic_translation_examples() {
        let tau = phi0().compose(&sigma0());
        assert!(close(tau.parabolic_translation().unwrap(), c(2.0, 0.0), 1e-12));
        for t in [0.25, 1.0, 2.0, 5.0] {
            assert!(close(psi(t).parabolic_translation().unwrap(), c(t, 0.0), 1e-12));
        }
        let t = parabolic_automorphism(0.8).parabolic_translation().unwrap();
        assert!(t.re.abs() < 1e-12 && (t.im.abs() - 0.8).abs() < 1e-12);
        assert_eq!(phi0().parabolic_translation(), Err(Error::NotParabolic));
        assert_eq!(MoebiusMap::identity().parabolic_translation(), Err(Error::NotParabolic));
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(phi0().iterate(0), MoebiusMap::identity());
        let alpha = Complex64::from_polar(1.0, 0.9);
        assert_eq!(MoebiusMap::rotation(alpha).iterate(5), MoebiusMap::rotation(alpha.powi(5)));
        let tau = phi0().compose(&sigma0());
        assert!(close(tau.iterate(2).parabolic_translation().unwrap(), c(4.0, 0.0), 1e-12));
        assert!(close(tau.iterate(200).parabolic_translation().unwrap(), c(400.0, 0.0), 1e-8));
    }

    #[test]
    fn equality_and_commutation() {
        assert!(maps_equal(
            &MoebiusMap::real(1.0, 0.0, 0.0, 1.0).unwrap(),
            &MoebiusMap::real(2.0, 0.0, 0.0, 2.0).unwrap()
        ));
        assert!(!maps_commute(&phi0(), &sigma0()));
        assert!(maps_commute(&phi0(), &phi0()));
    }

    #[test]
    fn json_shape() {
        let text = serde_json::to_string(&phi0()).unwrap();
        assert_eq!(text, r#"{"a":[-1.0,0.0],"b":[-1.0,0.0],"c":[0.0,0.0],"d":[2.0,0.0]}"#);
        let back: MoebiusMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, phi0());
        let bad = r#"{"a":[1,0],"b":[2,0],"c":[2,0],"d":[4,0]}"#;
        assert!(serde_json::from_str::<MoebiusMap>(bad).is_err());
    }

    fn unit(theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, theta)
    }

    /// Disk automorphism `e^{i theta} (z - p)/(1 - conj(p) z)`.
    fn automorphism(theta: f64, p: Complex64) -> MoebiusMap {
        let r = unit(theta);
        MoebiusMap::new(r, -r * p, -p.conj(), ONE).unwrap()
    }

    prop_compose! {
        fn any_map()(v in prop::array::uniform8(-2.0f64..2.0)) -> MoebiusMap {
            let m = MoebiusMap { a: c(v[0], v[1]), b: c(v[2], v[3]), c: c(v[4], v[5]), d: c(v[6], v[7]) };
            if m.determinant().norm() < 1e-3 { MoebiusMap::identity() } else { m }
        }
    }

    prop_compose! {
        /// A ∘ (z -> r z + 1 - r) ∘ B with disk automorphisms A, B: a
        /// non-automorphism touching the circle at one point.
        fn admissible_map()(
            r in 0.05f64..0.95,
            t1 in 0.0f64..TAU, t2 in 0.0f64..TAU,
            p1 in (0.0f64..0.8, 0.0f64..TAU), p2 in (0.0f64..0.8, 0.0f64..TAU),
            scale in (0.1f64..10.0, 0.0f64..TAU),
        ) -> MoebiusMap {
            let inner = automorphism(t1, Complex64::from_polar(p1.0, p1.1));
            let outer = automorphism(t2, Complex64::from_polar(p2.0, p2.1));
            let core = MoebiusMap::real(r, 1.0 - r, 0.0, 1.0).unwrap();
            let m = outer.compose(&core).compose(&inner);
            let k = Complex64::from_polar(scale.0, scale.1);
            MoebiusMap { a: m.a * k, b: m.b * k, c: m.c * k, d: m.d * k }
        }
    }

    proptest! {
        #[test]
        fn krein_adjoint_is_involution(m in any_map()) {
            prop_assert!(m.krein_adjoint().krein_adjoint() == m);
        }

        #[test]
        fn krein_adjoint_reverses_composition(m1 in any_map(), m2 in any_map()) {
            let lhs = m1.compose(&m2).krein_adjoint();
            let rhs = m2.krein_adjoint().compose(&m1.krein_adjoint());
            prop_assert!(lhs == rhs);
        }

        #[test]
        fn contact_duality_and_derivative_product(m in admissible_map()) {
            let k = m.boundary_contact().expect("admissible map has contact");
            let sigma = m.krein_adjoint();
            let ks = sigma.boundary_contact().expect("Krein adjoint has contact");
            prop_assert!(close(ks.zeta, k.eta, 1e-8));
            prop_assert!(close(ks.eta, k.zeta, 1e-8));
            let product = m.derivative(k.zeta).unwrap() * sigma.derivative(k.eta).unwrap();
            prop_assert!(close(product, ONE, 1e-12), "product {}", product);
            let q = m.adjoint_scalar(k.zeta, k.eta);
            prop_assert!(close(q, c(k.s, 0.0), 1e-9 * k.s), "quotient {} vs s {}", q, k.s);
        }

        #[test]
        fn contact_invariant_under_rescaling(m in admissible_map(), lam in (0.01f64..100.0, 0.0f64..TAU)) {
            let k = Complex64::from_polar(lam.0, lam.1);
            let scaled = MoebiusMap { a: m.a * k, b: m.b * k, c: m.c * k, d: m.d * k };
            let k1 = m.boundary_contact().unwrap();
            let k2 = scaled.boundary_contact().unwrap();
            prop_assert!(close(k1.zeta, k2.zeta, 1e-12));
            prop_assert!(close(k1.eta, k2.eta, 1e-12));
            prop_assert!((k1.s - k2.s).abs() <= 1e-12 * k1.s);
        }

        #[test]
        fn phi_sigma_is_positive_parabolic(m in admissible_map()) {
            let tau = m.compose(&m.krein_adjoint());
            let t = tau.parabolic_translation().expect("phi∘sigma is parabolic");
            prop_assert!(t.re > 0.0);
            prop_assert!(t.im.abs() <= 1e-7 * t.re, "translation {}", t);
            match tau.classify() {
                MapClass::Contact { parabolic, .. } => prop_assert!(parabolic),
                other => prop_assert!(false, "unexpected {:?}", other),
            }
        }
    }
}
