//! Text grammar for polynomials and the canonical printer.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' integer]
//! atom   := integer ['/' integer] | ident | 'L' | '(' expr ')'
//! ```
//!
//! `L` is the square root of the discriminant. The printer emits the same
//! grammar with terms in descending monomial order.

use num_bigint::BigInt;
use num_traits::Signed;

use super::{Monomial, Poly, Ring};
use crate::error::{Error, Result};
use crate::field::{FieldElem, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat(&Tok::Minus) {
            -&self.term()?
        } else {
            self.eat(&Tok::Plus);
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Star) {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat(&Tok::Minus) {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let field = self.ring.field().clone();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut value = Rational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            value /= Rational::from_integer(d);
                        }
                        Some(Tok::Int(_)) => return self.err("zero denominator"),
                        _ => return self.err("expected an integer denominator"),
                    }
                }
                Ok(Poly::constant(self.ring, field.from_rational(value)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "L" {
                    return Ok(Poly::constant(self.ring, field.lambda()));
                }
                match self.ring.vars().index(&name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(Error::UnknownVariable(name)),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as a polynomial in `ring`.
pub fn parse_poly(text: &str, ring: &Ring) -> Result<Poly> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        ring,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| {
            if *e == 1 {
                n.clone()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

/// Splits a coefficient into a sign and a magnitude text.
fn signed_coeff(c: &FieldElem) -> (bool, Option<String>) {
    let negative = if c.re().is_positive() || c.re().is_negative() {
        if c.im().is_positive() || c.im().is_negative() {
            // mixed a + bL: keep the sign inside the parentheses
            return (false, Some(c.render(true)));
        }
        c.re().is_negative()
    } else {
        c.im().is_negative()
    };
    let mag = if negative { -c } else { c.clone() };
    if mag.is_one() {
        (negative, None)
    } else {
        (negative, Some(mag.render(true)))
    }
}

pub(crate) fn render(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let names = p.ring().vars().names();
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let (negative, mag) = signed_coeff(c);
        let body = match (mag, m.is_one()) {
            (None, true) => "1".to_string(),
            (Some(s), true) => s,
            (None, false) => render_monomial(m, names),
            (Some(s), false) => format!("{s}*{}", render_monomial(m, names)),
        };
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, rat};
    use crate::poly::{build_f, MonomialOrder, PolyRing};

    fn ring() -> Ring {
        let k = make_field(rat(1), rat(2), rat(3)).unwrap();
        PolyRing::from_names(["x0", "x1", "y1"], &k, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn parses_tower_generator() {
        let r = ring();
        let g = parse_poly("y1^2 - x0^2*(x1^3 - 6*x1^2 + 11*x1 - 6)", &r).unwrap();
        let f = build_f(&r, "x1").unwrap();
        let y = Poly::var(&r, 2);
        let x0 = Poly::var(&r, 0);
        assert_eq!(g, &(&y * &y) - &(&(&x0 * &x0) * &f));
    }

    #[test]
    fn zero_and_errors() {
        let r = ring();
        assert!(parse_poly("0", &r).unwrap().is_zero());
        assert_eq!(
            parse_poly("x9", &r),
            Err(Error::UnknownVariable("x9".into()))
        );
        assert!(matches!(
            parse_poly("x0 +", &r),
            Err(Error::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_poly("x0 $ 1", &r),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse_poly("(x0", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", &r), Err(Error::Syntax { .. })));
    }

    #[test]
    fn lambda_and_rationals() {
        let r = ring();
        let k = r.field().clone();
        let p = parse_poly("L*x0 - 3/2", &r).unwrap();
        let pt = [k.lambda(), k.zero(), k.zero()];
        // L*L - 3/2 = -6 - 3/2
        assert_eq!(
            p.evaluate(&pt).unwrap(),
            k.from_rational(crate::field::ratio(-15, 2))
        );
    }

    #[test]
    fn printer_is_canonical() {
        let r = ring();
        let p = parse_poly("-(1 - 2*L)*x0*y1 + 3/2 - L*x1^2 + x0^3", &r).unwrap();
        assert_eq!(p.to_string(), "x0^3 - L*x1^2 + (-1 + 2*L)*x0*y1 + 3/2");
        assert_eq!(parse_poly(&p.to_string(), &r).unwrap(), p);
    }
}
