//! Recursive-descent parser for polynomial text.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := unary (('*'|'/') unary)*`,
//! `unary := '-' unary | power`, `power := atom ('^' integer)?`,
//! `atom := integer | identifier | '(' expr ')'`. Division is only allowed by
//! nonzero constants. The canonical text form of a polynomial parses back to it.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::monomial::Monomial;
use super::table::VariableTable;
use super::{Coeff, RingError};

type Terms = FxHashMap<Monomial, Coeff>;

/// Parses `text` into raw terms over `table` (rewrite rules not applied).
pub fn parse_terms(table: &VariableTable, text: &str) -> Result<Vec<(Monomial, Coeff)>, RingError> {
    let mut p = Parser {
        table,
        src: text.as_bytes(),
        pos: 0,
    };
    let t = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(t.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

struct Parser<'a> {
    table: &'a VariableTable,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> RingError {
        RingError::Parse(format!(
            "{what} at byte {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
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

    fn expr(&mut self) -> Result<Terms, RingError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    add_into(&mut acc, rhs, false);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    add_into(&mut acc, rhs, true);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Terms, RingError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = mul(&acc, &rhs);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let c = constant_of(&rhs).ok_or_else(|| self.error("division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    let inv = c.recip();
                    for v in acc.values_mut() {
                        *v *= &inv;
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Terms, RingError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let mut t = self.unary()?;
            for v in t.values_mut() {
                *v = -v.clone();
            }
            return Ok(t);
        }
        if self.peek() == Some(b'+') {
            self.pos += 1;
            return self.unary();
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent out of range"))?;
            return Ok(pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Terms, RingError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(constant(Coeff::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                let v = self.table.var(name)?;
                let mut t = Terms::default();
                t.insert(Monomial::var(v), Coeff::one());
                Ok(t)
            }
            _ => Err(self.error("unexpected token")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, RingError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0");
        s.parse::<BigInt>().map_err(|_| self.error("bad integer"))
    }
}

fn constant(c: Coeff) -> Terms {
    let mut t = Terms::default();
    t.insert(Monomial::one(), c);
    t
}

fn constant_of(t: &Terms) -> Option<Coeff> {
    let mut c = Coeff::zero();
    for (m, v) in t {
        if !m.is_one() {
            if v.is_zero() {
                continue;
            }
            return None;
        }
        c = v.clone();
    }
    Some(c)
}

fn add_into(acc: &mut Terms, rhs: Terms, negate: bool) {
    for (m, c) in rhs {
        let c = if negate { -c } else { c };
        *acc.entry(m).or_insert_with(Coeff::zero) += c;
    }
}

fn mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::default();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(ma.mul(mb)).or_insert_with(Coeff::zero) += ca * cb;
        }
    }
    out
}

fn pow(base: &Terms, e: u32) -> Terms {
    let mut acc = constant(Coeff::one());
    for _ in 0..e {
        acc = mul(&acc, base);
    }
    acc
}
