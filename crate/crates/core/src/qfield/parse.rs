//! Parser for the text form `q1 + q2*sqrt(m2) + …`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := integer | 'sqrt(' integer ')' | '(' expr ')' | '-' factor
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;

use super::AlgebraicQuad;
use crate::{Error, Result};

impl FromStr for AlgebraicQuad {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = s
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut p = Parser {
            chars: &chars,
            pos: 0,
            len: s.len(),
        };
        let v = p.expr()?;
        if p.pos != chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(v)
    }
}

struct Parser<'a> {
    chars: &'a [(usize, char)],
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(o, _)| o)
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<AlgebraicQuad> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc += &self.term()?;
            } else if self.eat('-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraicQuad> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.peek() == Some('/') {
                let at = self.offset();
                self.pos += 1;
                let d = self.factor()?;
                acc = acc.checked_div(&d).map_err(|_| Error::Parse {
                    offset: at,
                    message: "division by zero".to_string(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<AlgebraicQuad> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(AlgebraicQuad::from_bigint(self.integer()?)),
            Some('s') => {
                for expected in "sqrt(".chars() {
                    if !self.eat(expected) {
                        return Err(self.error("expected 'sqrt('"));
                    }
                }
                let at = self.offset();
                let n = self.integer()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                let m = u64::try_from(&n).map_err(|_| Error::Parse {
                    offset: at,
                    message: "radicand out of range".to_string(),
                })?;
                if m == 0 {
                    return Ok(AlgebraicQuad::zero());
                }
                AlgebraicQuad::sqrt(m).map_err(|_| Error::Parse {
                    offset: at,
                    message: alloc::format!("radicand {m} is not squarefree"),
                })
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(self.error("expected an integer"));
        }
        Ok(digits.parse().expect("ascii digits"))
    }
}
