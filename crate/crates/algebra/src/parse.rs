//! Polynomial text format.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' uint)?
//! atom  := number | variable | '(' expr ')'
//! ```
//!
//! Numbers are integers or decimals; `/` only divides by nonzero constants.
//! Variables are `x`, `y`, `z`, `x<n>` and `mu<n>`.

use crate::error::{AlgebraError, Result};
use crate::multipoly::{sort_vars, MultiPoly};
use crate::rational::{fmt_q, parse_rational, Q};
use num_traits::{One, Signed};

const MAX_EXPONENT: u32 = 4096;

pub fn is_known_variable(name: &str) -> bool {
    fn indexed(name: &str, head: &str) -> bool {
        name.strip_prefix(head).is_some_and(|t| {
            !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) && !t.starts_with('0')
        })
    }
    matches!(name, "x" | "y" | "z") || indexed(name, "x") || indexed(name, "mu")
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, at: usize, msg: &str) -> Result<T> {
        Err(AlgebraError::Syntax {
            offset: at,
            message: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly<Q>> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly<Q>> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    let c = match d.total_degree() {
                        Some(0) => d.terms().values().next().unwrap().clone(),
                        None => return self.err(at, "division by zero"),
                        Some(_) => return self.err(at, "division by a non-constant"),
                    };
                    acc = acc.scale(&c.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly<Q>> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly<Q>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err(start, "expected a nonnegative integer exponent");
            }
            let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
            let e: u32 = match txt.parse() {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.err(start, "exponent too large"),
            };
            return Ok(base.pow(e, &Q::one()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly<Q>> {
        let at = match self.peek() {
            None => return self.err(self.s.len(), "unexpected end of input"),
            Some(_) => self.pos,
        };
        let c = self.s[at];
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            if self.peek() != Some(b')') {
                return self.err(self.pos, "expected `)`");
            }
            self.pos += 1;
            return Ok(e);
        }
        if c.is_ascii_digit() || c == b'.' {
            while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
                self.pos += 1;
            }
            let txt = std::str::from_utf8(&self.s[at..self.pos]).unwrap();
            return match parse_rational(txt) {
                Some(v) => Ok(MultiPoly::constant(&self.vars, v)),
                None => self.err(at, "malformed number"),
            };
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.s[at..self.pos]).unwrap().to_string();
            if !is_known_variable(&name) {
                return Err(AlgebraError::UnknownVariable { name, offset: at });
            }
            let mut v = vec![name.clone()];
            sort_vars(&mut v);
            let mut p = MultiPoly::var_q(&v, &name);
            if !self.vars.contains(&name) {
                self.vars.push(name);
                sort_vars(&mut self.vars);
            }
            p = p.with_vars(&self.vars);
            return Ok(p);
        }
        self.err(at, &format!("unexpected character `{}`", c as char))
    }
}

/// Parse a polynomial; the variable list is the sorted set of names used.
pub fn parse_poly(src: &str) -> Result<MultiPoly<Q>> {
    let mut p = Parser {
        s: src.as_bytes(),
        pos: 0,
        vars: Vec::new(),
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err(p.pos, "unexpected trailing input");
    }
    let vars = p.vars.clone();
    Ok(e.with_vars(&vars))
}

/// Parse and embed into the given (sorted) variable list.
pub fn parse_poly_in(src: &str, vars: &[String]) -> Result<MultiPoly<Q>> {
    let p = parse_poly(src)?;
    for v in p.vars() {
        if !vars.contains(v) {
            return Err(AlgebraError::UnknownVariable {
                name: v.clone(),
                offset: src.find(v.as_str()).unwrap_or(0),
            });
        }
    }
    Ok(p.with_vars(vars))
}

/// Canonical text: terms by decreasing total degree, then decreasing
/// exponents in variable order; coefficients as `p` or `p/q`.
pub fn format_poly(p: &MultiPoly<Q>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Vec<u32>, &Q)> = p.terms().iter().collect();
    terms.sort_by(|a, b| {
        let da: u32 = a.0.iter().sum();
        let db: u32 = b.0.iter().sum();
        db.cmp(&da).then_with(|| b.0.cmp(a.0))
    });
    let mut out = String::new();
    for (i, (e, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| {
                if k == 1 {
                    p.vars()[j].clone()
                } else {
                    format!("{}^{}", p.vars()[j], k)
                }
            })
            .collect();
        if mono.is_empty() {
            out.push_str(&fmt_q(&a));
        } else {
            if !a.is_one() {
                out.push_str(&fmt_q(&a));
                out.push('*');
            }
            out.push_str(&mono.join("*"));
        }
    }
    out
}
