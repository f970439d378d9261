//! Expression grammar for polynomials in job files and on the command line.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant, so `3/4` is a rational
//! literal and `x/2` means `(1/2)·x`. Whitespace is ignored.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{GradedPolynomial, Rational, VariableTable};
use crate::{Error, Result};

/// Parses `text` into a polynomial over `table`.
pub fn parse_polynomial(text: &str, table: &Arc<VariableTable>) -> Result<GradedPolynomial> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        table,
        len: text.len(),
    };
    let p = parser.expr()?;
    if let Some((offset, tok)) = parser.tokens.get(parser.pos) {
        return Err(Error::Parse {
            offset: *offset,
            message: format!("unexpected {tok:?}"),
        });
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (offset, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                i += 1;
            }
            let digits: String = bytes[start..i].iter().map(|(_, c)| c).collect();
            let n = digits.parse::<BigInt>().expect("ascii digits");
            out.push((offset, Token::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].1.is_ascii_alphanumeric() || bytes[i].1 == '_') {
                i += 1;
            }
            let ident: String = bytes[start..i].iter().map(|(_, c)| c).collect();
            out.push((offset, Token::Ident(ident)));
        } else if "+-*/^()".contains(c) {
            out.push((offset, Token::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                offset,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    table: &'a Arc<VariableTable>,
    len: usize,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some((_, Token::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.len)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<GradedPolynomial> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GradedPolynomial> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let at = self.offset();
            let rhs = self.unary()?;
            if op == '*' {
                acc = &acc * &rhs;
            } else {
                let c = rhs.constant_term();
                if rhs.len() > 1 || (rhs.len() == 1 && c.is_zero()) {
                    return Err(Error::Parse {
                        offset: at,
                        message: "division is only allowed by a constant".into(),
                    });
                }
                if c.is_zero() {
                    return Err(Error::Parse {
                        offset: at,
                        message: "division by zero".into(),
                    });
                }
                acc = acc.scale(&(Rational::from_integer(1.into()) / c));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<GradedPolynomial> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.peek_op() == Some('+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<GradedPolynomial> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some((_, Token::Int(n))) => {
                    let n: u32 = n
                        .try_into()
                        .map_err(|_| self.error("exponent too large"))?;
                    self.pos += 1;
                    Ok(base.pow(n, None))
                }
                _ => Err(self.error("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<GradedPolynomial> {
        let Some((offset, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.error("unexpected end of expression"));
        };
        match tok {
            Token::Int(n) => {
                self.pos += 1;
                Ok(GradedPolynomial::constant(
                    self.table,
                    Rational::from_integer(n),
                ))
            }
            Token::Ident(name) => {
                self.pos += 1;
                GradedPolynomial::var(self.table, &name).map_err(|_| Error::Parse {
                    offset,
                    message: format!("unknown variable `{name}`"),
                })
            }
            Token::Op('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Op(c) => Err(Error::Parse {
                offset,
                message: format!("unexpected `{c}`"),
            }),
        }
    }
}
