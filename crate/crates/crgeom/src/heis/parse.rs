//! Recursive-descent parser for boundary-data expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := 'z'uint | 'zb'uint | 't' | 'i' | rational | '(' expr ')'
//! rational := int ('/' uint)?
//! ```
//! Whitespace between tokens is ignored. A leading `-` on a term is accepted.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::poly::HeisPoly;
use crate::exact::{GaussianRational as Gr, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable index {index} at byte {offset} outside 1..{n}")]
    IndexOutOfRange {
        offset: usize,
        index: usize,
        n: usize,
    },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

/// Parses `text` as a polynomial on the Heisenberg group of CR dimension `n`.
pub fn parse_expression(text: &str, n: usize) -> Result<HeisPoly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        n,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let d = self
            .digits()
            .ok_or_else(|| self.err("expected unsigned integer"))?;
        d.parse().map_err(|_| ParseError::Syntax {
            offset: at,
            message: "integer too large".into(),
        })
    }

    fn expr(&mut self) -> Result<HeisPoly, ParseError> {
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                acc.add_assign(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<HeisPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<HeisPoly, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn var_index(&mut self, at: usize) -> Result<usize, ParseError> {
        let d = self
            .digits()
            .ok_or_else(|| self.err("expected variable index"))?;
        let index: usize = d.parse().map_err(|_| self.err("index too large"))?;
        if index == 0 || index > self.n {
            return Err(ParseError::IndexOutOfRange {
                offset: at,
                index,
                n: self.n,
            });
        }
        Ok(index)
    }

    fn atom(&mut self) -> Result<HeisPoly, ParseError> {
        let at = match self.peek() {
            None => return Err(self.err("unexpected end of input")),
            Some(_) => self.pos,
        };
        match self.src[at] {
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            b't' => {
                self.pos += 1;
                Ok(HeisPoly::t())
            }
            b'i' => {
                self.pos += 1;
                Ok(HeisPoly::constant(Gr::i()))
            }
            b'z' => {
                self.pos += 1;
                if self.src.get(self.pos) == Some(&b'b') {
                    self.pos += 1;
                    Ok(HeisPoly::zb(self.var_index(at)?))
                } else {
                    Ok(HeisPoly::z(self.var_index(at)?))
                }
            }
            c if c.is_ascii_digit() => {
                let num: BigInt = self.digits().unwrap().parse().unwrap();
                let den = if self.eat(b'/') {
                    self.skip_ws();
                    let d_at = self.pos;
                    let d: BigInt = self
                        .digits()
                        .ok_or_else(|| self.err("expected denominator"))?
                        .parse()
                        .unwrap();
                    if d.is_zero() {
                        return Err(ParseError::Syntax {
                            offset: d_at,
                            message: "zero denominator".into(),
                        });
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(HeisPoly::constant(Gr::real(Rational::new(num, den))))
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}
