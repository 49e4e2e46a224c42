use super::ast::{MapLetter, OperatorExpression};
use crate::error::{Error, Result};
use crate::moebius::ContactData;
use crate::symbol::SymbolElement;

/// The canonical quintuple of the coset of `e` modulo the compacts.
///
/// `C_{m1∘m2}` is `C_{m2} C_{m1}`, so composition words evaluate as reversed
/// products of `C` and `S`. An explicit `K` contributes nothing.
pub fn normalize(e: &OperatorExpression, contact: &ContactData) -> Result<SymbolElement> {
    use OperatorExpression::*;
    let contact = *contact;
    if contact.zeta == contact.eta {
        return Err(Error::FixedContact);
    }
    let go = |e: &OperatorExpression| normalize(e, &contact);
    Ok(match e {
        Identity => SymbolElement::identity(contact),
        Toeplitz(w) => SymbolElement::embed_toeplitz(w.clone(), contact),
        Cphi => SymbolElement::embed_cphi(contact),
        Csigma => SymbolElement::embed_csigma(contact),
        Compact => SymbolElement::zero(contact),
        Composition(word) => {
            let mut acc = SymbolElement::identity(contact);
            for letter in word.letters().iter().rev() {
                let factor = match letter {
                    MapLetter::Phi => SymbolElement::embed_cphi(contact),
                    MapLetter::Sigma => SymbolElement::embed_csigma(contact),
                };
                acc = acc.multiply(&factor)?;
            }
            acc
        }
        Adjoint(inner) => go(inner)?.adjoint(),
        Scalar(c, inner) => go(inner)?.scalar_mul(*c),
        Sum(terms) => {
            let mut acc = SymbolElement::zero(contact);
            for t in terms {
                acc = acc.add(&go(t)?)?;
            }
            acc
        }
        Product(factors) => {
            let mut acc = SymbolElement::identity(contact);
            for f in factors {
                acc = acc.multiply(&go(f)?)?;
            }
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::rewriter::parse;
    use crate::symbol::{HalfPolynomial, LambdaPoint};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn phi0() -> ContactData {
        ContactData::from_boundary(c(1.0, 0.0), c(-1.0, 0.0), 2.0).unwrap()
    }

    fn n(text: &str) -> SymbolElement {
        normalize(&parse(text).unwrap(), &phi0()).unwrap()
    }

    #[test]
    fn square_of_cphi_is_compact() {
        assert!(n("C*C").is_zero());
        assert!(n("C'*C'").is_zero());
    }

    #[test]
    fn cphi_star_cphi_is_t() {
        let b = n("C'*C");
        assert_eq!(b.f, HalfPolynomial::t_power(1, c(1.0, 0.0)));
        assert!(b.g.is_zero() && b.h.is_zero() && b.k.is_zero() && b.w.is_zero());
        assert_eq!(b, n("2*C_{φ∘σ}"));
    }

    #[test]
    fn shift_does_not_commute_with_cphi_essentially() {
        let b = n("T{z}*C - C*T{z}");
        assert_eq!(b.h, HalfPolynomial::sqrt_t_power(0, c(2.0, 0.0)));
        assert!(b.f.is_zero() && b.g.is_zero() && b.k.is_zero() && b.w.is_zero());
    }

    #[test]
    fn adjoint_relation_between_generators() {
        assert_eq!(n("C'"), n("S").scalar_mul(c(2.0, 0.0)));
        assert!(n("C' - 2*S").is_zero());
        assert!(n("C - 2*S'").is_zero());
    }

    #[test]
    fn composition_words_follow_reversed_products() {
        assert_eq!(n("C_φ"), n("C"));
        assert_eq!(n("C_σ"), n("S"));
        assert_eq!(n("C_{φ∘σ}"), n("S*C"));
        assert_eq!(n("C_{σ∘φ}"), n("C*S"));
        assert_eq!(n("C_{(φ∘σ)_3}").f, HalfPolynomial::t_power(3, c(0.125, 0.0)));
        assert_eq!(n("C_{(φ∘σ)_2∘φ}").h, HalfPolynomial::sqrt_t_power(2, c(0.25, 0.0)));
        assert_eq!(n("C_{(σ∘φ)_2∘σ}").k, HalfPolynomial::sqrt_t_power(2, c(0.125, 0.0)));
        assert_eq!(n("C_{id}"), n("I"));
    }

    #[test]
    fn compact_token_vanishes() {
        assert_eq!(n("C + K"), n("C"));
        assert!(n("K").is_zero());
    }

    #[test]
    fn examples_three_to_five() {
        let b1 = n("C_{φ∘σ} + C_{σ∘φ} + C_φ - C_σ");
        assert_eq!(b1.f, HalfPolynomial::t_power(1, c(0.5, 0.0)));
        assert_eq!(b1.g, HalfPolynomial::t_power(1, c(0.5, 0.0)));
        assert_eq!(b1.h, HalfPolynomial::sqrt_t_power(0, c(1.0, 0.0)));
        assert_eq!(b1.k, HalfPolynomial::sqrt_t_power(0, c(-0.5, 0.0)));
        let b3 = n("2*C_{φ∘σ} + C_φ - C_σ");
        assert_eq!(b3.f, HalfPolynomial::t_power(1, c(1.0, 0.0)));
        assert!(b3.g.is_zero());
    }

    #[test]
    fn fixed_contact_is_rejected() {
        let fixed = ContactData::from_boundary(c(1.0, 0.0), c(1.0, 0.0), 2.0).unwrap();
        assert_eq!(normalize(&parse("C").unwrap(), &fixed), Err(Error::FixedContact));
    }

    #[test]
    fn zero_quintuple_has_zero_symbol() {
        let b = n("C*S*C - 0.5*C*C' * C + C'*C' * T{z^-3 + 1}");
        let k = phi0();
        assert!(b.is_zero());
        for lambda in [
            LambdaPoint::TriplePoint,
            LambdaPoint::interval(0.7, &k).unwrap(),
            LambdaPoint::circle(c(0.0, 1.0), &k).unwrap(),
        ] {
            assert_eq!(b.phi_lambda(lambda).max_abs_diff(&crate::symbol::Mat2::scalar(c(0.0, 0.0))), 0.0);
        }
    }
}
