//! The built-in claim battery, one entry per acceptance criterion.
//!
//! Every claim is parametrized by the map; the fixed-point commutator claim
//! additionally uses `z -> (1 + z)/2`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::moebius::{ContactData, MapClass, MoebiusMap};
use crate::oracle::{self, VerificationReport};
use crate::rewriter::{normalize, parse, to_composition_sum, OperatorExpression};
use crate::symbol::{HalfPolynomial, LambdaPoint, SpectrumPoint, SpectrumSource, SymbolElement, TrigPolynomial};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub resolution: usize,
    pub n: usize,
    pub window: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            resolution: 1000,
            n: 512,
            window: 64,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<VerificationReport>,
}

impl CriterionResult {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "Krein adjoint and contact data"),
    (2, "spectrum of C + C' is [-sqrt(s), sqrt(s)]"),
    (3, "self-commutator and anti-commutator spectra"),
    (4, "parabolic curve y^2 + iy"),
    (5, "two complex line segments"),
    (6, "circle |z - 1/2| = 1/2"),
    (7, "essential norm closed form and Toeplitz deformation"),
    (8, "local symbols are *-homomorphisms"),
    (9, "compression vanishing sequences"),
    (10, "compression eigenvalue fill"),
    (11, "canonical decomposition round trip"),
];

fn check(claim: impl Into<String>, n: Option<usize>, window: Option<usize>, value: f64, pass: bool) -> VerificationReport {
    VerificationReport {
        claim: claim.into(),
        n,
        window,
        floor_or_fill: value,
        pass,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Runs every criterion, or only those listed in `only`.
pub fn run(map: &MoebiusMap, config: &VerifyConfig, only: Option<&[u8]>) -> Result<Vec<CriterionResult>> {
    let contact = map.quotient_contact()?;
    let mut out = Vec::new();
    for (id, title) in CRITERIA {
        if only.is_some_and(|ids| !ids.contains(&id)) {
            continue;
        }
        let checks = match id {
            1 => krein_battery(map, &contact)?,
            2 => example_one(&contact, config)?,
            3 => example_two(&contact, config)?,
            4 => example_three(&contact, config)?,
            5 => example_four(&contact, config)?,
            6 => example_five(&contact, config)?,
            7 => example_seven(&contact, config)?,
            8 => homomorphism(&contact, config)?,
            9 => vanishing(map, &contact, config)?,
            10 => fill(map, &contact, config)?,
            _ => round_trip(&contact, config)?,
        };
        out.push(CriterionResult { id, title, checks });
    }
    Ok(out)
}

fn krein_battery(map: &MoebiusMap, k: &ContactData) -> Result<Vec<VerificationReport>> {
    let sigma = map.krein_adjoint();
    let product = map.derivative(k.zeta)? * sigma.derivative(k.eta)?;
    let product_err = (product - 1.0).norm();
    let s_sigma = sigma.derivative(k.eta)?.norm();
    let s_quotient = map.adjoint_scalar(k.zeta, k.eta);
    let s_err = (s_sigma - k.s).abs().max((s_quotient - k.s).norm());
    let back = sigma.eval(k.eta)?;
    let tau = map.compose(&sigma);
    let parabolic = matches!(tau.classify(), MapClass::Contact { parabolic: true, .. });
    let translation = tau.parabolic_translation().ok();
    let t_ok = translation.is_some_and(|t| t.re > 0.0 && t.im.abs() <= 1e-12 * (1.0 + t.norm()));
    Ok(vec![
        check("1a: phi'(zeta) sigma'(eta) = 1", None, None, product_err, product_err <= 1e-12),
        check("1b: s = |sigma'(eta)| = adjoint quotient", None, None, s_err, s_err <= 1e-12),
        check("1c: sigma(eta) = zeta", None, None, (back - k.zeta).norm(), (back - k.zeta).norm() <= 1e-12),
        check(
            "1d: phi o sigma positive parabolic",
            None,
            None,
            translation.map_or(f64::NAN, |t| t.re),
            parabolic && t_ok,
        ),
    ])
}

fn spectrum_of(text: &str, k: &ContactData, resolution: usize) -> Result<Vec<SpectrumPoint>> {
    normalize(&parse(text)?, k)?.essential_spectrum(resolution)
}

fn interval_points(points: &[SpectrumPoint]) -> impl Iterator<Item = Complex64> + '_ {
    points.iter().filter(|p| p.source != SpectrumSource::Circle).map(|p| p.z)
}

fn real_extremes(points: &[SpectrumPoint]) -> (f64, f64, f64) {
    let max_im = points.iter().map(|p| p.z.im.abs()).fold(0.0, f64::max);
    let lo = points.iter().map(|p| p.z.re).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.z.re).fold(f64::NEG_INFINITY, f64::max);
    (max_im, lo, hi)
}

fn example_one(k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let res = config.resolution;
    let pts = spectrum_of("C + C'", k, res)?;
    let (max_im, lo, hi) = real_extremes(&pts);
    let r = k.s.sqrt();
    let end_err = (lo + r).abs().max((hi - r).abs());
    let spacing = r / (res - 1) as f64;
    let mut reals: Vec<f64> = pts.iter().map(|p| p.z.re).collect();
    reals.sort_by(f64::total_cmp);
    let probe = oracle::linspace(-r, r, 10 * res + 1);
    let gap = oracle::fill_distance(&probe, &reals)?;
    Ok(vec![
        check("2a: spectrum real", None, None, max_im, max_im <= 1e-9),
        check("2b: endpoints -+sqrt(s)", None, None, end_err, end_err <= 1e-9),
        check("2c: interval covered within grid spacing", None, None, gap, gap <= spacing),
    ])
}

fn example_two(k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let res = config.resolution;
    let mut out = Vec::new();
    for (label, text, lo_expected) in [("3a: self-commutator", "C'*C - C*C'", -k.s), ("3b: anti-commutator", "C'*C + C*C'", 0.0)] {
        let pts = spectrum_of(text, k, res)?;
        let (max_im, lo, hi) = real_extremes(&pts);
        let err = (lo - lo_expected).abs().max((hi - k.s).abs()).max(max_im);
        out.push(check(format!("{label} endpoints"), None, None, err, err <= 1e-9));
    }
    Ok(out)
}

fn example_three(k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let res = config.resolution;
    let pts = spectrum_of("C_{φ∘σ} + C_{σ∘φ} + C_φ - C_σ", k, res)?;
    let mut residual: f64 = 0.0;
    let mut range_ok = true;
    for z in interval_points(&pts) {
        let y = z.im;
        residual = residual.max((z - c(y * y, y)).norm());
        range_ok &= y.abs() <= 1.0 + 1e-9;
    }
    Ok(vec![check("4: z = y^2 + iy, |y| <= 1", None, None, residual, residual < 1e-9 && range_ok)])
}

fn example_four(k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let res = config.resolution;
    let pts = spectrum_of("C_{φ∘σ} - C_{σ∘φ} + 0.5*C_φ - C_σ", k, res)?;
    let real_half = 0.5_f64.sqrt();
    let mut residual: f64 = 0.0;
    let (mut re_max, mut re_min, mut im_max, mut im_min) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for z in interval_points(&pts) {
        let to_real = z.im.abs() + (z.re.abs() - real_half).max(0.0);
        let to_imag = z.re.abs() + (z.im.abs() - 0.25).max(0.0);
        residual = residual.max(to_real.min(to_imag));
        re_max = re_max.max(z.re);
        re_min = re_min.min(z.re);
        im_max = im_max.max(z.im);
        im_min = im_min.min(z.im);
    }
    let accuracy = k.s.sqrt() / (res - 1) as f64;
    let extreme = (re_max - real_half)
        .abs()
        .max((re_min + real_half).abs())
        .max((im_max - 0.25).abs())
        .max((im_min + 0.25).abs());
    Ok(vec![
        check("5a: points on the two segments", None, None, residual, residual < 1e-9),
        check("5b: extreme points attained", None, None, extreme, extreme <= accuracy),
    ])
}

fn example_five(k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let res = config.resolution;
    let pts = spectrum_of("2*C_{φ∘σ} + C_φ - C_σ", k, res)?;
    let residual = interval_points(&pts)
        .map(|z| ((z - 0.5).norm() - 0.5).abs())
        .fold(0.0, f64::max);
    Ok(vec![check("6: |z - 1/2| = 1/2", None, None, residual, residual < 1e-9)])
}

/// Degree-one trig polynomial with `w(zeta) = -a`, `w(eta) = a`.
pub fn deformation_symbol(k: &ContactData, a: Complex64) -> TrigPolynomial {
    let alpha = -2.0 * a / (k.zeta - k.eta);
    let beta = a - alpha * k.eta;
    TrigPolynomial::from_terms([(1, alpha), (0, beta)])
}

/// `1 + s + sqrt(2s) sqrt(1 + Re(zeta eta))`, the squared norm at `t = s`.
pub fn example_seven_closed_form(k: &ContactData) -> f64 {
    let inv = 1.0 / k.dphi.norm();
    let sq = 1.0 + inv + (2.0 * inv).sqrt() * (1.0 + (k.zeta * k.eta).re).sqrt();
    sq.sqrt().max(1.0)
}

fn example_seven(k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let res = config.resolution;
    let b = normalize(&parse("T{z} + C + C'")?, k)?;
    let norm = b.essential_norm(res)?.value;
    let err = (norm - example_seven_closed_form(k)).abs();
    let mut out = vec![check("7a: essential norm of T_z + C + C'", None, None, err, err <= 1e-6)];
    for r in [0.0, 1.0] {
        let a = c(r, r) / 2.0_f64.sqrt();
        let w = deformation_symbol(k, a);
        let y = normalize(&parse("C + C'")?, k)?;
        let b = SymbolElement::embed_toeplitz(w, *k).add(&y)?;
        let mut residual: f64 = 0.0;
        for (u, m) in crate::symbol::LocalSymbol::interval_samples(&b, res) {
            let target = c(u * u, r * r);
            for z in m.eigenvalues() {
                residual = residual.max((z * z - target).norm());
            }
        }
        out.push(check(format!("7b: branch +-sqrt(t + {r}^2 i)"), None, None, residual, residual < 1e-9));
    }
    Ok(out)
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A random element with trig degree and polynomial degrees up to `deg`.
pub fn random_element(rng: &mut ChaCha8Rng, k: &ContactData, deg: usize) -> SymbolElement {
    let trig = |rng: &mut ChaCha8Rng| {
        TrigPolynomial::from_terms((-(deg as i64)..=deg as i64).map(|n| (n, random_complex(rng))))
    };
    let half = |rng: &mut ChaCha8Rng| {
        let mut p = vec![c(0.0, 0.0)];
        p.extend((0..deg).map(|_| random_complex(rng)));
        let q = (0..deg).map(|_| random_complex(rng)).collect();
        HalfPolynomial::new(p, q).expect("p(0) = 0")
    };
    SymbolElement {
        w: trig(rng),
        f: half(rng),
        g: half(rng),
        h: half(rng),
        k: half(rng),
        contact: *k,
    }
}

/// A random point of the maximal ideal space, avoiding `zeta`, `eta` on the circle.
pub fn random_point(rng: &mut ChaCha8Rng, k: &ContactData) -> LambdaPoint {
    loop {
        match rng.gen_range(0..3) {
            0 => {
                let lambda = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                if let Ok(p @ LambdaPoint::Circle(_)) = LambdaPoint::circle(lambda, k) {
                    return p;
                }
            }
            1 => return LambdaPoint::TriplePoint,
            _ => {
                if let Ok(p) = LambdaPoint::interval(k.s * (1.0 - rng.gen::<f64>()), k) {
                    return p;
                }
            }
        }
    }
}

fn homomorphism(k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mut mult, mut star): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let b1 = random_element(&mut rng, k, 3);
        let b2 = random_element(&mut rng, k, 3);
        let lambda = random_point(&mut rng, k);
        let lhs = b1.multiply(&b2)?.phi_lambda(lambda);
        let rhs = b1.phi_lambda(lambda) * b2.phi_lambda(lambda);
        mult = mult.max(lhs.max_abs_diff(&rhs));
        star = star.max(b1.adjoint().phi_lambda(lambda).max_abs_diff(&b1.phi_lambda(lambda).adjoint()));
    }
    Ok(vec![
        check("8a: Phi(b1 b2) = Phi(b1) Phi(b2), 1000 samples", None, None, mult, mult <= 1e-10),
        check("8b: Phi(b*) = Phi(b)^*, 1000 samples", None, None, star, star <= 1e-10),
    ])
}

fn floor_of(e: &OperatorExpression, map: &MoebiusMap, n: usize, window: usize) -> Result<f64> {
    Ok(oracle::vanishing_sequence(e, map, n, window)?.into_iter().fold(f64::INFINITY, f64::min))
}

fn vanishing(map: &MoebiusMap, k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let (n, w) = (config.n, config.window);
    let rho = MoebiusMap::real(1.0, 1.0, 0.0, 2.0)?;
    let adjoint = parse(&format!("C' - {}*S", k.s))?;
    let toeplitz = parse("T{z}*T{z^-1 + z^2} - T{1 + z^3}")?;
    let commutator = parse("T{z}*C - C*T{z}")?;
    let a = floor_of(&adjoint, map, n, w)?;
    let b = floor_of(&toeplitz, map, n, w)?;
    let r = floor_of(&commutator, &rho, n, w)?;
    let p = floor_of(&commutator, map, n, w)?;
    Ok(vec![
        check(format!("9a: C' - {}*S decays below 0.01", k.s), Some(n), Some(w), a, a < 0.01),
        check("9b: T{v}*T{w} - T{vw} decays below 0.01", Some(n), Some(w), b, b < 0.01),
        check("9c: [T_z, C] on (1+z)/2 decays below 0.01", Some(n), Some(w), r, r < 0.01),
        check("9d: [T_z, C] stays above 0.1", Some(n), Some(w), p, p > 0.1),
    ])
}

fn fill(map: &MoebiusMap, k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let s = k.s;
    let sizes = [config.n / 4, config.n / 2, config.n];
    let mut out = Vec::new();
    for (label, text, lo, hi) in [
        ("anti-commutator", "C'*C + C*C'", 0.0, s),
        ("C + C'", "C + C'", -s.sqrt(), s.sqrt()),
        ("self-commutator", "C'*C - C*C'", -s, s),
    ] {
        let e = parse(text)?;
        let grid = oracle::linspace(lo, hi, 101);
        let mut fills = Vec::new();
        for n in sizes {
            fills.push(oracle::fill_distance(&grid, &oracle::compression_eigs(&e, map, n)?)?);
        }
        let last = *fills.last().unwrap();
        out.push(check(format!("10: {label} fill below 0.05"), Some(config.n), None, last, last < 0.05));
        let monotone = fills.windows(2).all(|p| p[1] <= 1.1 * p[0]);
        let worst_ratio = fills.windows(2).map(|p| p[1] / p[0]).fold(0.0, f64::max);
        out.push(check(
            format!("10: {label} fill non-increasing {sizes:?}"),
            Some(config.n),
            None,
            worst_ratio,
            monotone,
        ));
    }
    Ok(out)
}

/// A random element of the generator ring: `f, g` integral powers, `h, k` odd.
pub fn random_generator_element(rng: &mut ChaCha8Rng, k: &ContactData, deg: usize) -> SymbolElement {
    let pick = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.3) {
            c(rng.gen_range(-4.0..4.0), 0.0)
        } else {
            random_complex(rng)
        }
    };
    let w = TrigPolynomial::from_terms((-(deg as i64)..=deg as i64).map(|n| (n, pick(rng))));
    let integral = |rng: &mut ChaCha8Rng| {
        let mut p = vec![c(0.0, 0.0)];
        p.extend((0..deg).map(|_| pick(rng)));
        HalfPolynomial::new(p, Vec::new()).expect("p(0) = 0")
    };
    let f = integral(rng);
    let g = integral(rng);
    let odd = |rng: &mut ChaCha8Rng| HalfPolynomial::new(Vec::new(), (0..=deg).map(|_| pick(rng)).collect()).expect("no p part");
    SymbolElement {
        w,
        f,
        g,
        h: odd(rng),
        k: odd(rng),
        contact: *k,
    }
}

/// The nonzero `(slot, degree)` coordinates of an element.
pub fn support(b: &SymbolElement) -> BTreeSet<(char, i64, bool)> {
    let mut out = BTreeSet::new();
    for (n, _) in b.w.terms() {
        out.insert(('w', n, false));
    }
    let zero = c(0.0, 0.0);
    for (slot, x) in [('f', &b.f), ('g', &b.g), ('h', &b.h), ('k', &b.k)] {
        for (n, a) in x.p().iter().enumerate() {
            if *a != zero {
                out.insert((slot, n as i64, false));
            }
        }
        for (n, a) in x.q().iter().enumerate() {
            if *a != zero {
                out.insert((slot, n as i64, true));
            }
        }
    }
    out
}

/// The generators `T_{z^j}`, `C_{(φ∘σ)_n}`, `C_{(σ∘φ)_n}`, `C_{(φ∘σ)_n∘φ}`, `C_{(σ∘φ)_n∘σ}`.
pub fn generator_expressions(max: usize) -> Vec<String> {
    let mut out = Vec::new();
    for j in -(max as i64)..=max as i64 {
        out.push(format!("T{{z^{j}}}"));
    }
    for n in 1..=max {
        out.push(format!("C_{{(φ∘σ)_{n}}}"));
        out.push(format!("C_{{(σ∘φ)_{n}}}"));
    }
    for n in 0..=max {
        out.push(format!("C_{{(φ∘σ)_{n}∘φ}}"));
        out.push(format!("C_{{(σ∘φ)_{n}∘σ}}"));
    }
    out
}

fn round_trip(k: &ContactData, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x11);
    let dyadic = k.s.log2().fract() == 0.0;
    let mut failures = 0usize;
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let b = random_generator_element(&mut rng, k, 4);
        let text = to_composition_sum(&b)?;
        let back = normalize(&parse(&text)?, k)?;
        let diff = back.sub(&b)?.max_abs_coeff();
        worst = worst.max(diff);
        let ok = if dyadic { back == b } else { diff <= 1e-12 * (1.0 + b.max_abs_coeff()) };
        failures += usize::from(!ok);
    }
    let generators = generator_expressions(6);
    let mut seen = BTreeSet::new();
    let mut independent = true;
    for g in &generators {
        let coords = support(&normalize(&parse(g)?, k)?);
        independent &= coords.len() == 1 && seen.insert(coords.into_iter().next().unwrap());
    }
    Ok(vec![
        check(
            if dyadic { "11a: round trip exact, 200 samples" } else { "11a: round trip to 1e-12, 200 samples" },
            None,
            None,
            worst,
            failures == 0,
        ),
        check(
            format!("11b: {} generators linearly independent", generators.len()),
            None,
            None,
            0.0,
            independent,
        ),
    ])
}
