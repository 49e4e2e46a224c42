//! Essential spectra, essential norms and Fredholmness from the local symbols.
//!
//! The circle contributes `w(lambda)`; each interval point `t` contributes the
//! two eigenvalues of the 2x2 local symbol. Interval grids are uniform in
//! `u = sqrt(t)` over `[0, sqrt(s)]`, since every symbol entry is a polynomial
//! in `u`. Circle grids always contain `zeta` and `eta` exactly.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::{Mat2, SymbolElement};
use crate::error::{Error, Result};
use crate::moebius::ContactData;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectrumSource {
    #[serde(rename = "circle")]
    Circle,
    #[serde(rename = "interval+")]
    IntervalPlus,
    #[serde(rename = "interval-")]
    IntervalMinus,
}

impl SpectrumSource {
    pub fn label(&self) -> &'static str {
        match self {
            SpectrumSource::Circle => "circle",
            SpectrumSource::IntervalPlus => "interval+",
            SpectrumSource::IntervalMinus => "interval-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub z: Complex64,
    pub source: SpectrumSource,
}

/// Where a sup or inf was located.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Locus {
    /// Angle on the circle.
    Circle(f64),
    /// Interval point `t`.
    Interval(f64),
}

/// Result of a grid search with local refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridEstimate {
    pub value: f64,
    pub locus: Locus,
    /// Final grid spacing (radians on the circle, `sqrt(t)` units on the interval).
    pub spacing: f64,
    /// Final spacing times the largest difference quotient seen on the final grid.
    pub accuracy: f64,
}

/// Anything with a local symbol that can be sampled on the standard grids.
pub trait LocalSymbol {
    fn contact(&self) -> &ContactData;

    /// `(angle, lambda, w(lambda))` on the circle grid, sorted by angle.
    fn circle_samples(&self, resolution: usize) -> Vec<(f64, Complex64, Complex64)>;

    /// `(u, Phi_{u^2})` on the interval grid, increasing in `u`.
    fn interval_samples(&self, resolution: usize) -> Vec<(f64, Mat2)>;

    /// Off-grid evaluation; `None` when only tabulated values exist.
    fn circle_value(&self, angle: f64) -> Option<Complex64>;

    fn interval_value(&self, u: f64) -> Option<Mat2>;
}

/// Circle grid: `resolution` equally spaced angles plus `arg zeta`, `arg eta`.
pub fn circle_grid(resolution: usize, contact: &ContactData) -> Vec<(f64, Complex64)> {
    let angle = |z: Complex64| z.arg().rem_euclid(TAU);
    // special points first so the stable sort and dedup keep their exact values
    let mut grid = vec![(angle(contact.zeta), contact.zeta), (angle(contact.eta), contact.eta)];
    grid.extend((0..resolution).map(|j| {
        let theta = TAU * j as f64 / resolution as f64;
        (theta, Complex64::from_polar(1.0, theta))
    }));
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    grid.dedup_by(|a, b| a.0 == b.0);
    grid
}

/// Interval grid in `u = sqrt(t)`: `resolution` points from 0 to `sqrt(s)`.
///
/// The top point is the largest float with `u * u <= s`, so no sample lies
/// past `s`; at a double eigenvalue there, one rounding step beyond the
/// endpoint moves the spectrum by about `sqrt(eps)`.
pub fn interval_grid(resolution: usize, contact: &ContactData) -> Vec<f64> {
    let top = sqrt_within(contact.s);
    let last = resolution.saturating_sub(1).max(1);
    (0..resolution.max(2))
        .map(|i| if i == last { top } else { top * i as f64 / last as f64 })
        .collect()
}

/// Largest float `u` with `u * u <= x`.
pub fn sqrt_within(x: f64) -> f64 {
    let mut u = x.sqrt();
    while u > 0.0 && u * u > x {
        u = u.next_down();
    }
    u
}

impl LocalSymbol for SymbolElement {
    fn contact(&self) -> &ContactData {
        &self.contact
    }

    fn circle_samples(&self, resolution: usize) -> Vec<(f64, Complex64, Complex64)> {
        circle_grid(resolution, &self.contact)
            .into_iter()
            .map(|(theta, lambda)| (theta, lambda, self.w.eval(lambda)))
            .collect()
    }

    fn interval_samples(&self, resolution: usize) -> Vec<(f64, Mat2)> {
        interval_grid(resolution, &self.contact)
            .into_iter()
            .map(|u| (u, self.interval_matrix_sqrt(u)))
            .collect()
    }

    fn circle_value(&self, angle: f64) -> Option<Complex64> {
        Some(self.w.eval(Complex64::from_polar(1.0, angle)))
    }

    fn interval_value(&self, u: f64) -> Option<Mat2> {
        Some(self.interval_matrix_sqrt(u))
    }
}

/// A symbol given by tables of values: `w` on a circle grid and
/// `(f, g, h, k)` on an interval grid. Supports continuous symbols outside the
/// exact polynomial ring, for spectra and norms only.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSymbol {
    contact: ContactData,
    w_zeta: Complex64,
    w_eta: Complex64,
    circle: Vec<(f64, Complex64, Complex64)>,
    /// `(u, f, g, h, k)` at `t = u^2`.
    interval: Vec<(f64, [Complex64; 4])>,
}

impl SampledSymbol {
    /// Tabulates `w` and `f, g, h, k` on the standard grids of the given
    /// resolution. The interval functions must vanish at 0.
    pub fn from_fns(
        contact: ContactData,
        resolution: usize,
        w: impl Fn(Complex64) -> Complex64,
        fghk: impl Fn(f64) -> [Complex64; 4],
    ) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidArgument("resolution must be at least 2".into()));
        }
        let tol = Tolerances::default();
        if fghk(0.0).iter().any(|v| v.norm() > tol.coefficient) {
            return Err(Error::NonzeroAtOrigin);
        }
        let circle = circle_grid(resolution, &contact)
            .into_iter()
            .map(|(theta, lambda)| (theta, lambda, w(lambda)))
            .collect();
        let interval = interval_grid(resolution, &contact)
            .into_iter()
            .map(|u| (u, fghk(u * u)))
            .collect();
        Ok(Self {
            w_zeta: w(contact.zeta),
            w_eta: w(contact.eta),
            contact,
            circle,
            interval,
        })
    }

    fn matrix(&self, v: &[Complex64; 4]) -> Mat2 {
        let [f, g, h, k] = *v;
        Mat2::new(self.w_zeta + g, h, k, self.w_eta + f)
    }

    fn table_spacing(&self) -> f64 {
        let gaps = |xs: Vec<f64>| xs.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max);
        gaps(self.interval.iter().map(|r| r.0).collect())
            .max(gaps(self.circle.iter().map(|r| r.0).collect()))
    }
}

impl LocalSymbol for SampledSymbol {
    fn contact(&self) -> &ContactData {
        &self.contact
    }

    fn circle_samples(&self, _resolution: usize) -> Vec<(f64, Complex64, Complex64)> {
        self.circle.clone()
    }

    fn interval_samples(&self, _resolution: usize) -> Vec<(f64, Mat2)> {
        self.interval.iter().map(|(u, v)| (*u, self.matrix(v))).collect()
    }

    fn circle_value(&self, _angle: f64) -> Option<Complex64> {
        None
    }

    fn interval_value(&self, _u: f64) -> Option<Mat2> {
        None
    }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 2 {
        return Err(Error::InvalidArgument("resolution must be at least 2".into()));
    }
    Ok(())
}

/// `w` over the circle grid together with both eigenvalues of the interval
/// symbol over the interval grid.
pub fn essential_spectrum<S: LocalSymbol + ?Sized>(b: &S, resolution: usize) -> Result<Vec<SpectrumPoint>> {
    check_resolution(resolution)?;
    let mut points: Vec<SpectrumPoint> = b
        .circle_samples(resolution)
        .into_iter()
        .map(|(_, _, w)| SpectrumPoint {
            z: w,
            source: SpectrumSource::Circle,
        })
        .collect();
    for (_, m) in b.interval_samples(resolution) {
        let [plus, minus] = m.eigenvalues();
        points.push(SpectrumPoint {
            z: plus,
            source: SpectrumSource::IntervalPlus,
        });
        points.push(SpectrumPoint {
            z: minus,
            source: SpectrumSource::IntervalMinus,
        });
    }
    Ok(points)
}

#[derive(Clone, Copy)]
enum Goal {
    Max,
    Min,
}

impl Goal {
    fn better(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Goal::Max => candidate > incumbent,
            Goal::Min => candidate < incumbent,
        }
    }
}

/// Grid search over the whole space followed by local refinement rounds
/// around the running optimum.
fn search<S: LocalSymbol + ?Sized>(
    b: &S,
    resolution: usize,
    rounds: usize,
    goal: Goal,
    on_circle: impl Fn(Complex64) -> f64,
    on_interval: impl Fn(&Mat2) -> f64,
) -> GridEstimate {
    let circle = b.circle_samples(resolution);
    let interval = b.interval_samples(resolution);
    let mut best: Option<(f64, Locus)> = None;
    let mut consider = |value: f64, locus: Locus| {
        if best.is_none_or(|(v, _)| goal.better(value, v)) {
            best = Some((value, locus));
        }
    };
    for (theta, _, w) in &circle {
        consider(on_circle(*w), Locus::Circle(*theta));
    }
    for (u, m) in &interval {
        consider(on_interval(m), Locus::Interval(*u));
    }
    let (mut value, mut locus) = best.expect("grids are never empty");

    let circle_h = TAU / resolution as f64;
    let top = sqrt_within(b.contact().s);
    let interval_h = top / (resolution - 1) as f64;
    let mut h = match locus {
        Locus::Circle(_) => circle_h,
        Locus::Interval(_) => interval_h,
    };
    let mut slope: f64 = 0.0;
    let refinable = match locus {
        Locus::Circle(x) => b.circle_value(x).is_some(),
        Locus::Interval(x) => b.interval_value(x).is_some(),
    };
    if !refinable {
        let spacing = circle_h.max(interval_h);
        return GridEstimate {
            value,
            locus: to_t(locus),
            spacing,
            accuracy: f64::NAN,
        };
    }
    for _ in 0..rounds {
        let center = match locus {
            Locus::Circle(x) | Locus::Interval(x) => x,
        };
        let step = h / 10.0;
        let mut previous: Option<f64> = None;
        slope = 0.0;
        for j in -10..=10 {
            let x = center + j as f64 * step;
            let (v, here) = match locus {
                Locus::Circle(_) => (on_circle(b.circle_value(x).unwrap()), Locus::Circle(x)),
                Locus::Interval(_) => {
                    let x = x.clamp(0.0, top);
                    (on_interval(&b.interval_value(x).unwrap()), Locus::Interval(x))
                }
            };
            if let Some(p) = previous {
                slope = slope.max((v - p).abs() / step);
            }
            previous = Some(v);
            if goal.better(v, value) {
                value = v;
                locus = here;
            }
        }
        h = step;
    }
    GridEstimate {
        value,
        locus: to_t(locus),
        spacing: h,
        accuracy: h * slope,
    }
}

fn to_t(locus: Locus) -> Locus {
    match locus {
        Locus::Interval(u) => Locus::Interval(u * u),
        other => other,
    }
}

/// `sup` over the maximal ideal space of the norm of the local symbol.
pub fn essential_norm<S: LocalSymbol + ?Sized>(b: &S, resolution: usize) -> Result<GridEstimate> {
    essential_norm_with(b, resolution, &Tolerances::default())
}

pub fn essential_norm_with<S: LocalSymbol + ?Sized>(
    b: &S,
    resolution: usize,
    tol: &Tolerances,
) -> Result<GridEstimate> {
    check_resolution(resolution)?;
    Ok(search(b, resolution, tol.refinement_rounds, Goal::Max, |w| w.norm(), |m| m.norm()))
}

/// Smallest of `|w|` on the circle and `|det Phi_t|` on the interval.
pub fn fredholm_margin<S: LocalSymbol + ?Sized>(b: &S, resolution: usize, tol: &Tolerances) -> Result<GridEstimate> {
    check_resolution(resolution)?;
    Ok(search(b, resolution, tol.refinement_rounds, Goal::Min, |w| w.norm(), |m| m.det().norm()))
}

/// Invertibility modulo compacts: every local symbol is invertible.
pub fn is_fredholm<S: LocalSymbol + ?Sized>(b: &S, resolution: usize) -> Result<bool> {
    let tol = Tolerances::default();
    Ok(fredholm_margin(b, resolution, &tol)?.value > tol.fredholm)
}

impl SymbolElement {
    pub fn essential_spectrum(&self, resolution: usize) -> Result<Vec<SpectrumPoint>> {
        essential_spectrum(self, resolution)
    }

    pub fn essential_norm(&self, resolution: usize) -> Result<GridEstimate> {
        essential_norm(self, resolution)
    }

    pub fn is_fredholm(&self, resolution: usize) -> Result<bool> {
        is_fredholm(self, resolution)
    }
}

impl SampledSymbol {
    pub fn essential_spectrum(&self) -> Result<Vec<SpectrumPoint>> {
        essential_spectrum(self, self.circle.len().max(2))
    }

    pub fn essential_norm(&self) -> Result<GridEstimate> {
        let mut est = essential_norm(self, self.interval.len().max(2))?;
        est.spacing = self.table_spacing();
        Ok(est)
    }
}

/// CSV with header `re,im,source`.
pub fn spectrum_csv(points: &[SpectrumPoint]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Serialization(e.to_string());
    writer.write_record(["re", "im", "source"]).map_err(io)?;
    for p in points {
        writer
            .write_record([p.z.re.to_string(), p.z.im.to_string(), p.source.label().to_string()])
            .map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}
