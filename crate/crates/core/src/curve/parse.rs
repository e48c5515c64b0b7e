//! Parser for curve equations.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary | unary)*     juxtaposition multiplies
//! unary := ('+' | '-') unary | power
//! power := atom ('^' integer)?
//! atom  := integer | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants, so `1/2*x^2` and
//! `(1/6)y^2` are fine. The Unicode minus sign `−` is accepted as `-`.
//! Error positions are 1-based character columns.

use num_bigint::BigInt;

use crate::algebra::{BivarPoly, Field, FieldElem, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str) -> Result<Lexer> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                toks.push((Tok::Num(digits.parse().unwrap()), col));
            }
            'x' => toks.push((Tok::X, col)),
            'y' => toks.push((Tok::Y, col)),
            '+' => toks.push((Tok::Plus, col)),
            '-' | '\u{2212}' => toks.push((Tok::Minus, col)),
            '*' | '\u{00b7}' => toks.push((Tok::Star, col)),
            '/' => toks.push((Tok::Slash, col)),
            '^' => toks.push((Tok::Caret, col)),
            '(' => toks.push((Tok::LParen, col)),
            ')' => toks.push((Tok::RParen, col)),
            other => {
                return Err(Error::Syntax {
                    position: col,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
        i += 1;
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(Lexer { toks })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax { position: self.col(), message: message.to_string() })
    }

    fn expr(&mut self) -> Result<BivarPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BivarPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    let col = self.col();
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(Error::Syntax {
                            position: col,
                            message: "division is only allowed by a nonzero constant".into(),
                        });
                    }
                    let inv = d.coeff(0, 0).inv().unwrap();
                    acc = acc.scale(&inv);
                }
                Tok::Num(_) | Tok::X | Tok::Y | Tok::LParen => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<BivarPoly> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BivarPoly> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.peek().clone() {
                Tok::Num(n) => {
                    self.bump();
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::Syntax { position: self.col(), message: "exponent too large".into() })?;
                    Ok(base.pow(e))
                }
                _ => self.error("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<BivarPoly> {
        let field = Field::Rationals;
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(BivarPoly::constant(FieldElem::Q(Rational::from_integer(n))))
            }
            Tok::X => {
                self.bump();
                Ok(BivarPoly::x(field))
            }
            Tok::Y => {
                self.bump();
                Ok(BivarPoly::y(field))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => self.error("unexpected end of input"),
            _ => self.error("expected a number, a variable or '('"),
        }
    }
}

/// Parses an equation in `x`, `y` with rational coefficients into its
/// canonical sparse form.
pub fn parse_curve(text: &str) -> Result<BivarPoly> {
    let lexer = lex(text)?;
    let mut parser = Parser { toks: lexer.toks, pos: 0 };
    let poly = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.error("unexpected trailing input");
    }
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cusp() {
        let f = parse_curve("y^2 - x^3").unwrap();
        let expect = BivarPoly::from_i64_terms(Field::Rationals, &[(0, 2, 1), (3, 0, -1)]);
        assert_eq!(f, expect);
    }

    #[test]
    fn expands_products() {
        let f = parse_curve("(y-x)*(y+x) - x^3").unwrap();
        assert_eq!(f.to_string(), "y^2 - x^2 - x^3");
    }

    #[test]
    fn doubled_caret_is_reported_at_column_three() {
        match parse_curve("y^^2") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rational_literals_and_juxtaposition() {
        let f = parse_curve("(1/6)y^2 - x^3").unwrap();
        assert_eq!(f.to_string(), "1/6*y^2 - x^3");
        let g = parse_curve("1/2*x^2 + y").unwrap();
        assert_eq!(g.to_string(), "y + 1/2*x^2");
        assert_eq!(parse_curve("2x y").unwrap().to_string(), "2*x*y");
        assert_eq!(parse_curve("y^2 \u{2212} x^3").unwrap().to_string(), "y^2 - x^3");
    }

    #[test]
    fn zero_and_bad_division() {
        assert_eq!(parse_curve("x - x"), Err(Error::ZeroPolynomial));
        assert!(matches!(parse_curve("1/x"), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(parse_curve("x/0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_curve("(x + y"), Err(Error::Syntax { position: 7, .. })));
        assert!(matches!(parse_curve("x $ y"), Err(Error::Syntax { position: 3, .. })));
    }
}
