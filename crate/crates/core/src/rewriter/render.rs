use std::fmt::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symbol::{HalfPolynomial, SymbolElement, TrigPolynomial};

/// Appends `c·name` to a running sum. Real coefficients print with a sign
/// separator and unit magnitudes are dropped; complex ones print as `(re,im)`.
pub(crate) fn write_term<W: Write + ?Sized>(out: &mut W, first: bool, c: Complex64, name: &str, sep: &str) -> fmt::Result {
    if c.im == 0.0 {
        let magnitude = c.re.abs();
        match (first, c.re.is_sign_negative()) {
            (true, true) => out.write_str("-")?,
            (true, false) => {}
            (false, true) => out.write_str(" - ")?,
            (false, false) => out.write_str(" + ")?,
        }
        if name.is_empty() {
            write!(out, "{magnitude}")
        } else if magnitude == 1.0 {
            out.write_str(name)
        } else {
            write!(out, "{magnitude}{sep}{name}")
        }
    } else {
        if !first {
            out.write_str(" + ")?;
        }
        write!(out, "({},{})", c.re, c.im)?;
        if name.is_empty() {
            Ok(())
        } else {
            write!(out, "{sep}{name}")
        }
    }
}

/// The quintuple as `(w; f, g, h, k)`.
pub fn render(b: &SymbolElement) -> String {
    format!("({}; {}, {}, {}, {})", b.w, b.f, b.g, b.h, b.k)
}

fn toeplitz_name(w: &TrigPolynomial) -> String {
    if *w == TrigPolynomial::monomial(1) {
        "T_z".to_string()
    } else {
        format!("T_{{{w}}}")
    }
}

/// `pair` iterated `n >= 1` times; `grouped` keeps parentheses for `n = 1`.
fn iterated(pair: &str, n: usize, grouped: bool) -> String {
    match (n, grouped) {
        (1, false) => pair.to_string(),
        (1, true) => format!("({pair})"),
        _ => format!("({pair})_{n}"),
    }
}

/// The canonical decomposition as a sum of one Toeplitz operator and
/// scalar multiples of composition operators of iterates, plus `K`.
///
/// Fails when `f` or `g` has a `√t` part, or `h` or `k` has an integral-power part.
pub fn to_composition_sum(b: &SymbolElement) -> Result<String> {
    let s = b.contact.s;
    let pure = |x: &HalfPolynomial, slot: &'static str| {
        if x.q().is_empty() {
            Ok(())
        } else {
            Err(Error::NotInGeneratorRing { slot })
        }
    };
    let odd = |x: &HalfPolynomial, slot: &'static str| {
        if x.p().is_empty() {
            Ok(())
        } else {
            Err(Error::NotInGeneratorRing { slot })
        }
    };
    pure(&b.f, "f")?;
    pure(&b.g, "g")?;
    odd(&b.h, "h")?;
    odd(&b.k, "k")?;

    let mut terms: Vec<(Complex64, String)> = Vec::new();
    if !b.w.is_zero() {
        terms.push((Complex64::new(1.0, 0.0), toeplitz_name(&b.w)));
    }
    let zero = Complex64::new(0.0, 0.0);
    for (n, a) in b.f.p().iter().enumerate().skip(1).filter(|(_, a)| **a != zero) {
        terms.push((a * s.powi(n as i32), format!("C_{{{}}}", iterated("φ∘σ", n, false))));
    }
    for (n, a) in b.g.p().iter().enumerate().skip(1).filter(|(_, a)| **a != zero) {
        terms.push((a * s.powi(n as i32), format!("C_{{{}}}", iterated("σ∘φ", n, false))));
    }
    for (n, a) in b.h.q().iter().enumerate().filter(|(_, a)| **a != zero) {
        let name = match n {
            0 => "C_φ".to_string(),
            _ => format!("C_{{{}∘φ}}", iterated("φ∘σ", n, true)),
        };
        terms.push((a * s.powi(n as i32), name));
    }
    for (n, a) in b.k.q().iter().enumerate().filter(|(_, a)| **a != zero) {
        let name = match n {
            0 => "C_σ".to_string(),
            _ => format!("C_{{{}∘σ}}", iterated("σ∘φ", n, true)),
        };
        terms.push((a * s.powi(n as i32 + 1), name));
    }

    let mut out = String::new();
    let compact = !(b.f.is_zero() && b.g.is_zero() && b.h.is_zero() && b.k.is_zero());
    if terms.is_empty() {
        out.push('0');
    }
    for (i, (c, name)) in terms.iter().enumerate() {
        write_term(&mut out, i == 0, *c, name, "·").expect("writing to a String");
    }
    if compact || terms.is_empty() {
        out.push_str(" + K");
    }
    Ok(out)
}
