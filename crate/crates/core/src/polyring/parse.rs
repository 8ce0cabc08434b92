//! Text grammar for polynomials:
//!
//! ```text
//! expression  := term (('+' | '-') term)*
//! term        := coefficient ('*'? factor)*
//! factor      := var ('^' nat)?
//! coefficient := integer | integer '/' positive-integer
//! var         := t1 | t2 | t3 | t4 | t12 | t13 | t23
//! ```
//!
//! A leading sign and an implicit coefficient of 1 (`t12^2 - 2`, `-t1*t2`)
//! are accepted. Whitespace separates tokens and is otherwise ignored.

use super::mono::Mono;
use super::{Poly, Rat, Var};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at position {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("expected {expected} at position {pos}")]
    Expected { pos: usize, expected: &'static str },
    #[error("zero denominator at position {pos}")]
    ZeroDenominator { pos: usize },
    #[error("exponent too large at position {pos}")]
    ExponentOverflow { pos: usize },
    #[error("empty input")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1
            }
            b'/' => {
                out.push((i, Tok::Slash));
                i += 1
            }
            b'^' => {
                out.push((i, Tok::Caret));
                i += 1
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::from_str(&src[start..i]).expect("digits");
                out.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &src[start..i];
                let v = Var::from_name(name).ok_or_else(|| ParseError::UnknownVariable {
                    pos: start,
                    name: name.to_string(),
                })?;
                out.push((start, Tok::Var(v)));
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::UnexpectedChar { pos: i, ch });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expression(&mut self) -> Result<Poly, ParseError> {
        let mut terms: Vec<(Mono, Rat)> = Vec::new();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -1
            }
            Some(Tok::Plus) => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            let (m, c) = self.term()?;
            terms.push((m, if sign < 0 { -c } else { c }));
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                None => break,
                Some(_) => {
                    return Err(ParseError::Expected {
                        pos: self.here(),
                        expected: "`+`, `-` or end of input",
                    })
                }
            }
            self.bump();
        }
        Ok(Poly::from_terms(terms))
    }

    fn term(&mut self) -> Result<(Mono, Rat), ParseError> {
        let mut coef = Rat::one();
        let mut mono = Mono::ONE;
        let mut have_any = false;
        if let Some(Tok::Int(_)) = self.peek() {
            coef = self.coefficient()?;
            have_any = true;
        }
        loop {
            match self.peek() {
                Some(Tok::Star) if have_any => {
                    self.bump();
                    match self.peek() {
                        Some(Tok::Var(_)) => {}
                        _ => {
                            return Err(ParseError::Expected {
                                pos: self.here(),
                                expected: "variable after `*`",
                            })
                        }
                    }
                }
                Some(Tok::Var(_)) => {}
                _ => break,
            }
            mono = mono.mul(&self.factor()?);
            have_any = true;
        }
        if !have_any {
            return Err(ParseError::Expected {
                pos: self.here(),
                expected: "coefficient or variable",
            });
        }
        Ok((mono, coef))
    }

    fn coefficient(&mut self) -> Result<Rat, ParseError> {
        let Some(Tok::Int(n)) = self.bump() else {
            unreachable!("caller checked for an integer")
        };
        if let Some(Tok::Slash) = self.peek() {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some(Tok::Int(d)) if d.is_zero() => Err(ParseError::ZeroDenominator { pos: at }),
                Some(Tok::Int(d)) => Ok(Rat::new(n, d)),
                _ => Err(ParseError::Expected {
                    pos: at,
                    expected: "positive integer denominator",
                }),
            }
        } else {
            Ok(Rat::from_integer(n))
        }
    }

    fn factor(&mut self) -> Result<Mono, ParseError> {
        let Some(Tok::Var(v)) = self.bump() else {
            unreachable!("caller checked for a variable")
        };
        let mut m = Mono::ONE;
        let mut e: u16 = 1;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    e = u16::try_from(n).map_err(|_| ParseError::ExponentOverflow { pos: at })?;
                }
                _ => {
                    return Err(ParseError::Expected {
                        pos: at,
                        expected: "exponent",
                    })
                }
            }
        }
        m.0[v.index()] = e;
        Ok(m)
    }
}

impl FromStr for Poly {
    type Err = ParseError;

    fn from_str(src: &str) -> Result<Poly, ParseError> {
        let toks = lex(src)?;
        if toks.is_empty() {
            return Err(ParseError::Empty);
        }
        let mut p = Parser {
            toks,
            pos: 0,
            end: src.len(),
        };
        p.expression()
    }
}
