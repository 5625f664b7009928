//! Text input for Laurent polynomials.
//!
//! ```text
//! poly   := term (("+"|"-") term)* ;
//! term   := [coeff "*"?] factor ("*" factor)* | coeff ;
//! factor := ("x"|"y") ["^" ["-"] digits] ;
//! coeff  := digits ;
//! ```
//!
//! Whitespace is ignored. A leading sign and juxtaposed factors (`xy`) are
//! also accepted. Subtraction multiplies the following term by `p - 1`.

use super::{Exponent, LaurentPoly};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    p: PrimeModulus,
}

pub fn parse_poly(text: &str, p: PrimeModulus) -> Result<LaurentPoly> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        p,
    };
    parser.poly()
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn poly(&mut self) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(self.p);
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.bump();
                true
            }
            Some(b'+') => {
                self.bump();
                false
            }
            None => return self.err("empty polynomial"),
            _ => false,
        };
        loop {
            let (e, mut c) = self.term()?;
            if negate {
                c = self.p.neg(c);
            }
            out.add_term(e, c);
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                None => return Ok(out),
                Some(ch) => return self.err(format!("unexpected '{}'", ch as char)),
            }
            self.bump();
        }
    }

    fn term(&mut self) -> Result<(Exponent, u32)> {
        let mut coeff = 1 % self.p.get();
        let mut exp = Exponent::ZERO;
        match self.peek() {
            Some(ch) if ch.is_ascii_digit() => {
                coeff = self.coeff();
                match self.peek() {
                    Some(b'*') => {
                        self.bump();
                        if !matches!(self.peek(), Some(b'x' | b'y')) {
                            return self.err("expected 'x' or 'y' after '*'");
                        }
                    }
                    Some(b'x' | b'y') => {}
                    _ => return Ok((exp, coeff)),
                }
            }
            Some(b'x' | b'y') => {}
            Some(ch) => return self.err(format!("expected a term, found '{}'", ch as char)),
            None => return self.err("expected a term"),
        }
        loop {
            exp = exp + self.factor()?;
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    if !matches!(self.peek(), Some(b'x' | b'y')) {
                        return self.err("expected 'x' or 'y' after '*'");
                    }
                }
                Some(b'x' | b'y') => {}
                _ => return Ok((exp, coeff)),
            }
        }
    }

    fn factor(&mut self) -> Result<Exponent> {
        let var = self.peek();
        self.bump();
        let mut power = 1i64;
        if self.peek() == Some(b'^') {
            self.bump();
            let negative = if self.peek() == Some(b'-') {
                self.bump();
                true
            } else {
                false
            };
            power = self.exponent()?;
            if negative {
                power = -power;
            }
        }
        Ok(match var {
            Some(b'x') => Exponent::new(power, 0),
            _ => Exponent::new(0, power),
        })
    }

    fn digits(&mut self) -> Option<std::ops::Range<usize>> {
        self.peek()?;
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then_some(start..self.pos)
    }

    fn coeff(&mut self) -> u32 {
        let range = self.digits().expect("caller checked for a digit");
        let p = self.p.get() as u64;
        self.src[range]
            .iter()
            .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p) as u32
    }

    fn exponent(&mut self) -> Result<i64> {
        let Some(range) = self.digits() else {
            return self.err("expected exponent digits");
        };
        let text = std::str::from_utf8(&self.src[range]).expect("ascii digits");
        match text.parse::<i64>() {
            Ok(v) if v <= i32::MAX as i64 => Ok(v),
            _ => self.err("exponent out of range"),
        }
    }
}
