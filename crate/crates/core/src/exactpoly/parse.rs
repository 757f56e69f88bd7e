//! Text syntax for polynomials: `4*u^12 + 27*v^12`, `-(x - 1)^2*y`, `3/2 x`.
//!
//! Variables are single letters. Juxtaposition multiplies. Division is
//! only allowed by nonzero constants.

use num_traits::Zero;

use super::{Poly, Rat};
use crate::error::{Error, Result};

pub fn parse_poly(src: &str) -> Result<Poly> {
    let mut p = Parser {
        chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    if p.chars.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let out = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!(
            "unexpected {:?} at offset {} in {src:?}",
            p.chars[p.pos], p.pos
        )));
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    match d.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        _ => return Err(Error::Parse("division by a non-constant or zero".into())),
                    }
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 = e
                .parse()
                .map_err(|_| Error::Parse(format!("exponent {e} out of range")))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected an integer at offset {start}")));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.integer()?;
                let n: Rat = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer {digits}")))?;
                Ok(Poly::constant(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                Ok(Poly::var(&c.to_string()))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.bump() != Some(')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                Ok(inner)
            }
            Some(c) => Err(Error::Parse(format!("unexpected {c:?} at offset {}", self.pos))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat_frac;

    #[test]
    fn juxtaposition_and_fractions() {
        let a = parse_poly("3/2 x y^2").unwrap();
        let b = Poly::monomial(&["x", "y"], &[1, 2], rat_frac(3, 2));
        assert_eq!(a, b);
        assert_eq!(parse_poly("2(x+1)").unwrap(), parse_poly("2*x + 2").unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("x / y").is_err());
        assert!(parse_poly("(x").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x $ y").is_err());
    }
}
