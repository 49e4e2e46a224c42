//! Recursive-descent parser for operator expressions.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor (('*'|'·') factor)*
//! factor   := atom "'"*
//! atom     := 'I' | 'S' | 'K' | 'C' ['_' maps] | 'T' trig | number | '(' re ',' im ')' | '(' expr ')'
//! trig     := '{' trigpoly '}' | '_' ('z' | '{' trigpoly '}')
//! maps     := letter | '{' word '}'
//! word     := item (('∘'|'o') item)*
//! item     := letter | 'id' | '(' word ')' ['_' int]
//! letter   := 'φ' | 'phi' | 'σ' | 'sigma'
//! trigpoly := ['+'|'-'] mono (('+'|'-') mono)*
//! mono     := [coef ['*'|'·']] ['z' ['^' int]]
//! ```
//!
//! Whitespace is ignored everywhere. Positions in errors are 0-based
//! character offsets.

use num_complex::Complex64;

use super::ast::{MapLetter, MapWord, OperatorExpression};
use crate::error::{Error, Result};
use crate::symbol::TrigPolynomial;

pub fn parse(text: &str) -> Result<OperatorExpression> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(&["+", "-", "*", "'", "end of input"]));
    }
    Ok(e.into_expr())
}

/// A parsed factor: literals are kept apart so products can fold them.
enum Item {
    Literal(Complex64),
    Expr(OperatorExpression),
}

impl Item {
    fn into_expr(self) -> OperatorExpression {
        match self {
            Item::Literal(c) => OperatorExpression::Identity.scaled(c),
            Item::Expr(e) => e,
        }
    }

    fn negate(self) -> Item {
        match self {
            Item::Literal(c) => Item::Literal(-c),
            Item::Expr(OperatorExpression::Scalar(c, e)) => Item::Expr(OperatorExpression::Scalar(-c, e)),
            Item::Expr(e) => Item::Expr(e.scaled(Complex64::new(-1.0, 0.0))),
        }
    }

    fn adjoint(self) -> Item {
        match self {
            Item::Literal(c) => Item::Literal(c.conj()),
            Item::Expr(e) => Item::Expr(e.adjoint()),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.pos + n <= self.chars.len() && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&c.to_string()]))
        }
    }

    fn error(&mut self, expected: &[&str]) -> Error {
        let found = match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        Error::Syntax {
            position: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn expr(&mut self) -> Result<Item> {
        let mut terms = Vec::new();
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.term()?;
            terms.push(if negative { t.negate() } else { t });
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') || self.eat('−') {
                negative = true;
            } else {
                break;
            }
        }
        if terms.len() == 1 {
            return Ok(terms.pop().unwrap());
        }
        Ok(Item::Expr(OperatorExpression::Sum(
            terms.into_iter().map(Item::into_expr).collect(),
        )))
    }

    fn term(&mut self) -> Result<Item> {
        let mut scalar: Option<Complex64> = None;
        let mut factors = Vec::new();
        loop {
            match self.factor()? {
                Item::Literal(c) => scalar = Some(scalar.map_or(c, |s| s * c)),
                Item::Expr(e) => factors.push(e),
            }
            if !(self.eat('*') || self.eat('·')) {
                break;
            }
        }
        let body = match factors.len() {
            0 => return Ok(Item::Literal(scalar.expect("a term has at least one factor"))),
            1 => factors.pop().unwrap(),
            _ => OperatorExpression::Product(factors),
        };
        Ok(Item::Expr(match scalar {
            Some(c) => body.scaled(c),
            None => body,
        }))
    }

    fn factor(&mut self) -> Result<Item> {
        let mut item = self.atom()?;
        while self.eat('\'') {
            item = item.adjoint();
        }
        Ok(item)
    }

    fn atom(&mut self) -> Result<Item> {
        const ATOMS: &[&str] = &["I", "C", "S", "K", "T{", "C_{", "number", "(re,im)", "("];
        let Some(c) = self.peek() else {
            return Err(self.error(ATOMS));
        };
        match c {
            'I' => {
                self.pos += 1;
                Ok(Item::Expr(OperatorExpression::Identity))
            }
            'S' => {
                self.pos += 1;
                Ok(Item::Expr(OperatorExpression::Csigma))
            }
            'K' => {
                self.pos += 1;
                Ok(Item::Expr(OperatorExpression::Compact))
            }
            'C' => {
                self.pos += 1;
                if self.eat('_') {
                    let word = if self.eat('{') {
                        let w = self.word()?;
                        self.expect('}')?;
                        w
                    } else {
                        MapWord(vec![self.letter()?])
                    };
                    return Ok(Item::Expr(OperatorExpression::Composition(word)));
                }
                Ok(Item::Expr(OperatorExpression::Cphi))
            }
            'T' => {
                self.pos += 1;
                let w = if self.eat('_') {
                    if self.eat('z') {
                        TrigPolynomial::monomial(1)
                    } else {
                        self.braced_trig()?
                    }
                } else {
                    self.braced_trig()?
                };
                Ok(Item::Expr(OperatorExpression::Toeplitz(w)))
            }
            '(' => {
                let start = self.pos;
                if let Some(c) = self.complex_literal() {
                    return Ok(Item::Literal(c));
                }
                self.pos = start + 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            c if c.is_ascii_digit() || c == '.' => Ok(Item::Literal(Complex64::new(self.number()?, 0.0))),
            _ => Err(self.error(ATOMS)),
        }
    }

    fn braced_trig(&mut self) -> Result<TrigPolynomial> {
        self.expect('{')?;
        let w = self.trigpoly()?;
        self.expect('}')?;
        Ok(w)
    }

    /// `(re, im)` with optional signs; `None` (position unspecified) if absent.
    fn complex_literal(&mut self) -> Option<Complex64> {
        if !self.eat('(') {
            return None;
        }
        let re = self.signed_number().ok()?;
        if !self.eat(',') {
            return None;
        }
        let im = self.signed_number().ok()?;
        if !self.eat(')') {
            return None;
        }
        Some(Complex64::new(re, im))
    }

    fn signed_number(&mut self) -> Result<f64> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let x = self.number()?;
        Ok(if negative { -x } else { x })
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Parser| {
            let from = p.pos;
            while p.chars.get(p.pos).is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - from
        };
        let mut count = digits(self);
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            self.pos = start;
            return Err(self.error(&["number"]));
        }
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.chars.get(self.pos), Some('+' | '-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>().map_err(|_| {
            self.pos = start;
            self.error(&["number"])
        })
    }

    fn integer(&mut self) -> Result<i64> {
        let negative = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(&["integer"]));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let n: i64 = text.parse().map_err(|_| {
            self.pos = start;
            self.error(&["integer"])
        })?;
        Ok(if negative { -n } else { n })
    }

    /// An integer, optionally in braces.
    fn exponent(&mut self) -> Result<i64> {
        if self.eat('{') {
            let n = self.integer()?;
            self.expect('}')?;
            Ok(n)
        } else {
            self.integer()
        }
    }

    fn letter(&mut self) -> Result<MapLetter> {
        if self.eat('φ') || self.eat_str("phi") {
            Ok(MapLetter::Phi)
        } else if self.eat('σ') || self.eat_str("sigma") {
            Ok(MapLetter::Sigma)
        } else {
            Err(self.error(&["φ", "σ"]))
        }
    }

    fn word(&mut self) -> Result<MapWord> {
        let mut word = self.word_item()?;
        while self.eat('∘') || self.eat('o') {
            let next = self.word_item()?;
            word = word.then(&next);
        }
        Ok(word)
    }

    fn word_item(&mut self) -> Result<MapWord> {
        if self.eat_str("id") {
            return Ok(MapWord::default());
        }
        if self.eat('(') {
            let inner = self.word()?;
            self.expect(')')?;
            if self.eat('_') {
                let at = self.pos;
                let n = self.exponent()?;
                if n < 0 {
                    self.pos = at;
                    return Err(self.error(&["nonnegative integer"]));
                }
                return Ok(inner.repeat(n as usize));
            }
            return Ok(inner);
        }
        match self.letter() {
            Ok(l) => Ok(MapWord(vec![l])),
            Err(_) => Err(self.error(&["φ", "σ", "id", "("])),
        }
    }

    fn trigpoly(&mut self) -> Result<TrigPolynomial> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        loop {
            let (k, c) = self.monomial()?;
            terms.push((k, c * sign));
            if self.eat('+') {
                sign = 1.0;
            } else if self.eat('-') {
                sign = -1.0;
            } else {
                break;
            }
        }
        let mut w = TrigPolynomial::zero();
        for (k, c) in terms {
            w = w.add(&TrigPolynomial::from_terms([(k, c)]));
        }
        Ok(w)
    }

    fn monomial(&mut self) -> Result<(i64, Complex64)> {
        let coeff = match self.peek() {
            Some('(') => Some(self.complex_literal().ok_or_else(|| self.error(&["(re,im)"]))?),
            Some(c) if c.is_ascii_digit() || c == '.' => Some(Complex64::new(self.number()?, 0.0)),
            _ => None,
        };
        if coeff.is_some() {
            let _ = self.eat('*') || self.eat('·');
        }
        if self.eat('z') {
            let k = if self.eat('^') { self.exponent()? } else { 1 };
            return Ok((k, coeff.unwrap_or(Complex64::new(1.0, 0.0))));
        }
        match coeff {
            Some(c) => Ok((0, c)),
            None => Err(self.error(&["number", "(re,im)", "z"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use OperatorExpression::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn products_and_adjoints() {
        assert_eq!(parse("C' * C").unwrap(), Product(vec![Cphi.adjoint(), Cphi]));
        assert_eq!(parse("C''").unwrap(), Cphi.adjoint().adjoint());
    }

    #[test]
    fn sums_of_atoms() {
        assert_eq!(
            parse("T{z} + C + C'").unwrap(),
            Sum(vec![Toeplitz(TrigPolynomial::monomial(1)), Cphi, Cphi.adjoint()])
        );
    }

    #[test]
    fn scalars_fold_into_products() {
        let expected = Sum(vec![
            Product(vec![Cphi, Csigma]),
            Product(vec![Csigma, Cphi]).scaled(c(-1.0, 0.0)),
        ])
        .scaled(c(2.0, 0.0));
        assert_eq!(parse("2*(C*S - S*C)").unwrap(), expected);
        assert_eq!(parse("C' - 2*S").unwrap(), Sum(vec![Cphi.adjoint(), Csigma.scaled(c(-2.0, 0.0))]));
        assert_eq!(parse("(1,-2.5)*C*(0.5,0)").unwrap(), Cphi.scaled(c(0.5, -1.25)));
        assert_eq!(parse("3").unwrap(), Identity.scaled(c(3.0, 0.0)));
        assert_eq!(parse("(1,2)'").unwrap(), Identity.scaled(c(1.0, -2.0)));
        assert_eq!(parse("-C").unwrap(), Cphi.scaled(c(-1.0, 0.0)));
    }

    #[test]
    fn trig_payloads() {
        let w = parse("T{1 - 2z^-1 + (0,1)z^3}").unwrap();
        let expected = TrigPolynomial::from_terms([(0, c(1.0, 0.0)), (-1, c(-2.0, 0.0)), (3, c(0.0, 1.0))]);
        assert_eq!(w, Toeplitz(expected.clone()));
        assert_eq!(parse("T_{1-2·z^{-1}+(0,1)*z^3}").unwrap(), Toeplitz(expected));
        assert_eq!(parse("T_z").unwrap(), Toeplitz(TrigPolynomial::monomial(1)));
        assert_eq!(parse("T{z - z}").unwrap(), Toeplitz(TrigPolynomial::zero()));
        assert_eq!(parse("T{1.5e-3z^2}").unwrap(), Toeplitz(TrigPolynomial::from_terms([(2, c(1.5e-3, 0.0))])));
    }

    #[test]
    fn composition_words() {
        use MapLetter::*;
        assert_eq!(parse("C_φ").unwrap(), Composition(MapWord(vec![Phi])));
        assert_eq!(parse("C_sigma").unwrap(), Composition(MapWord(vec![Sigma])));
        assert_eq!(parse("C_{φ∘σ}").unwrap(), Composition(MapWord(vec![Phi, Sigma])));
        assert_eq!(
            parse("C_{(phi o sigma)_2 o phi}").unwrap(),
            Composition(MapWord(vec![Phi, Sigma, Phi, Sigma, Phi]))
        );
        assert_eq!(parse("C_{(σ∘φ)_0∘σ}").unwrap(), Composition(MapWord(vec![Sigma])));
        assert_eq!(parse("C_{id}").unwrap(), Composition(MapWord(vec![])));
        assert_eq!(parse("2·C_{φ∘σ} + K").unwrap(), Sum(vec![
            Composition(MapWord(vec![Phi, Sigma])).scaled(c(2.0, 0.0)),
            Compact
        ]));
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse(" C '*\tC ").unwrap(), parse("C'*C").unwrap());
        assert_eq!(parse("T { z ^ - 1 }").unwrap(), parse("T{z^-1}").unwrap());
    }

    fn syntax_position(text: &str) -> (usize, Vec<String>) {
        match parse(text) {
            Err(Error::Syntax { position, expected, .. }) => (position, expected),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn errors_report_character_offsets() {
        assert_eq!(syntax_position("C +").0, 3);
        assert_eq!(syntax_position("C * X").0, 4);
        assert_eq!(syntax_position("(C + S").0, 6);
        let (pos, expected) = syntax_position("C C");
        assert_eq!(pos, 2);
        assert!(expected.contains(&"end of input".to_string()));
        // offsets count characters, not bytes
        assert_eq!(syntax_position("C_{φ∘x}").0, 5);
        assert_eq!(syntax_position("T{z^}").0, 4);
        assert_eq!(syntax_position("").0, 0);
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "2*(C*S - S*C)",
            "T{1 - 2z^-1 + (0,1)z^3}' * C_{(φ∘σ)_2∘φ} - (0.25,-1)*S'",
            "C'*C + C*C' + K + I",
        ] {
            let e = parse(text).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{text}");
        }
    }
}
