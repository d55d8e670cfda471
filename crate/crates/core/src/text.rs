//! Parser for the polynomial text format shared by field elements and
//! elements of A.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*
//! factor := atom ['^' integer]
//! atom   := integer | 'x' | 'T' | '(' expr ')'
//! ```
//! Integers are reduced into the prime field, `x` is the generator of F_q
//! over F_p (only meaningful when q is not prime) and `T` is the variable of A.

use crate::error::{Error, Result};
use crate::gf::FieldDesc;
use crate::polyring::PolyA;

struct Parser<'a> {
    field: &'a FieldDesc,
    src: Vec<char>,
    pos: usize,
}

pub(crate) fn parse_poly(field: &FieldDesc, s: &str) -> Result<PolyA> {
    let mut p = Parser {
        field,
        src: s.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    if p.src.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let v = p.expr()?;
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!(
            "unexpected '{}' at offset {} in '{s}'",
            p.src[p.pos], p.pos
        )));
    }
    Ok(v)
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<PolyA> {
        let mut acc = PolyA::zero(self.field);
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<PolyA> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c.is_ascii_digit() || c == 'x' || c == 'T' || c == '(' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<PolyA> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let e = u64::try_from(e).map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u128> {
        let start = self.pos;
        let mut v: u128 = 0;
        while let Some(c) = self.peek() {
            match c.to_digit(10) {
                Some(d) => {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d as u128))
                        .ok_or_else(|| Error::Parse("integer too large".into()))?;
                    self.pos += 1;
                }
                None => break,
            }
        }
        if self.pos == start {
            return Err(Error::Parse(format!("expected an integer at offset {start}")));
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<PolyA> {
        let f = self.field;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                let c = (v % f.p() as u128) as u32;
                Ok(PolyA::constant(f, c))
            }
            Some('x') => {
                self.pos += 1;
                if f.is_prime_field() {
                    return Err(Error::Parse(
                        "'x' is undefined over a prime field; write integers".into(),
                    ));
                }
                Ok(PolyA::constant(f, f.gen()))
            }
            Some('T') => {
                self.pos += 1;
                Ok(PolyA::t(f))
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse(format!("missing ')' at offset {}", self.pos)));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) => Err(Error::Parse(format!("unexpected '{c}' at offset {}", self.pos))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}
