//! Parser for tower element expressions such as `-z^2*u + 3/2*s`.
//!
//! Grammar: `expr := term (('+' | '-') term)*`, `term := unary (('*' | '/') unary)*`,
//! `unary := '-' unary | power`, `power := atom ('^' integer)?`,
//! `atom := integer | generator | '(' expr ')'`. Division is only by nonzero
//! rational subexpressions.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Tower, TowerElement};
use crate::algebra::{Field, Rational};
use crate::error::{Error, Result};

struct Parser<'a> {
    tower: &'a Tower,
    src: &'a str,
    pos: usize,
}

pub(super) fn parse_element(tower: &Tower, src: &str) -> Result<TowerElement> {
    let mut p = Parser { tower, src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<TowerElement> {
        let t = self.tower;
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = t.add(&acc, &self.term()?);
            } else if self.eat('-') {
                acc = t.sub(&acc, &self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<TowerElement> {
        let t = self.tower;
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = t.mul(&acc, &self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let q = d.as_rational().ok_or_else(|| self.error("division by a non-rational value"))?;
                if q.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = t.mul(&acc, &t.rational(q.recip()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<TowerElement> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(self.tower.neg(&inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<TowerElement> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let n: u64 = digits.parse().map_err(|_| self.error("expected exponent"))?;
            return Ok(self.tower.pow(&base, n));
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += self.peek().map(char::len_utf8).unwrap_or(0);
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<TowerElement> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit()).to_string();
                let n: BigInt = digits.parse().map_err(|_| self.error("invalid integer"))?;
                Ok(self.tower.rational(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
                self.tower
                    .generator(&name)
                    .map_err(|_| self.error(&format!("unknown generator `{name}`")))
            }
            _ => Err(self.error("expected a number, generator or `(`")),
        }
    }
}
