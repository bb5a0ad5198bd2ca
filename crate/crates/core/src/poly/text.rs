//! Text grammar: `term (('+'|'-') term)*`, `term = [coeff ['*']] factor ('*' factor)*`,
//! `factor = x<i>['^'<e>]`, coefficients in the field text form.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::monomial::Monomial;
use crate::poly::polynomial::Polynomial;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<u64> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("number out of range"))
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }
}

impl Polynomial {
    /// Parses the text grammar in `n` variables.
    pub fn parse(field: &Field, n: usize, s: &str) -> Result<Polynomial> {
        let mut c = Cursor { s: s.as_bytes(), pos: 0, src: s };
        let mut out = Polynomial::zero(field, n);
        let mut negative = if c.eat(b'-') {
            true
        } else {
            c.eat(b'+');
            false
        };
        loop {
            let t = parse_term(&mut c, field, n)?;
            out = out.add(&if negative { t.neg() } else { t });
            if c.eat(b'+') {
                negative = false;
            } else if c.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        if c.peek().is_some() {
            return Err(c.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

fn parse_term(c: &mut Cursor, field: &Field, n: usize) -> Result<Polynomial> {
    let coeff = match c.peek() {
        Some(b) if b.is_ascii_digit() => {
            let v = c.digits()?;
            Some(field.from_int((v % field.characteristic() as u64) as i64))
        }
        Some(b'g') => {
            c.pos += 1;
            let k = if c.eat(b'^') {
                let neg = c.eat(b'-');
                let k = c.digits()? as i64;
                if neg {
                    -k
                } else {
                    k
                }
            } else {
                1
            };
            Some(field.gen_pow(k))
        }
        _ => None,
    };
    let mut exps = vec![0u32; n];
    let mut factors = 0;
    if coeff.is_some() && !c.eat(b'*') && c.peek() != Some(b'x') {
        return Ok(Polynomial::constant(field, n, coeff.unwrap()));
    }
    loop {
        if c.peek() != Some(b'x') {
            if factors == 0 {
                return Err(c.err("expected a term"));
            }
            break;
        }
        c.pos += 1;
        let i = c.digits()? as usize;
        if i == 0 || i > n {
            return Err(c.err(&format!("variable x{i} outside x1..x{n}")));
        }
        let e = if c.eat(b'^') { c.digits()? as u32 } else { 1 };
        exps[i - 1] += e;
        factors += 1;
        if !c.eat(b'*') {
            break;
        }
    }
    Ok(Polynomial::monomial(field, Monomial(exps), coeff.unwrap_or(Fe::ONE)))
}
