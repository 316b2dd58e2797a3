//! Text syntax for polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := coeff | coeff '*' mono | mono
//! coeff  := int | int '/' int
//! mono   := factor ('*' factor)*
//! factor := name | name '^' int
//! ```
//! Whitespace is ignored.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::ring::RingRef;
use super::Q;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), col));
        } else {
            return Err(Error::Parse {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ring: &'a RingRef,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.col(),
            message: message.into(),
        })
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected integer"),
        }
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        let name = match self.peek() {
            Some(Tok::Name(n)) => n.clone(),
            _ => return self.err("expected variable"),
        };
        let col = self.col();
        let idx = self.ring.index_of(&name).ok_or(Error::Parse {
            column: col,
            message: format!("unknown variable `{name}`"),
        })?;
        self.pos += 1;
        let mut e: u32 = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let n = self.int()?;
            e = match u32::try_from(n) {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
        }
        exps[idx] += e;
        Ok(())
    }

    fn term(&mut self) -> Result<(Monomial, Q)> {
        let mut exps = vec![0u32; self.ring.len()];
        let mut coeff = Q::one();
        let mut need_mono = true;
        if let Some(Tok::Int(_)) = self.peek() {
            let num = self.int()?;
            let mut c = Q::from_integer(num);
            if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                let den = self.int()?;
                if den.is_zero() {
                    return self.err("zero denominator");
                }
                c /= Q::from_integer(den);
            }
            coeff = c;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                need_mono = false;
            }
        }
        if need_mono {
            self.factor(&mut exps)?;
            while self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                self.factor(&mut exps)?;
            }
        }
        Ok((Monomial(exps), coeff))
    }
}

pub(crate) fn parse_polynomial(ring: &RingRef, text: &str) -> Result<Polynomial> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            column: 1,
            message: "empty polynomial".into(),
        });
    }
    let end = text.chars().count() + 1;
    let mut p = Parser {
        toks,
        pos: 0,
        ring,
        end,
    };
    let mut terms = Vec::new();
    let mut sign = Q::one();
    match p.peek() {
        Some(Tok::Minus) => {
            sign = -Q::one();
            p.pos += 1;
        }
        Some(Tok::Plus) => p.pos += 1,
        _ => {}
    }
    loop {
        let (m, c) = p.term()?;
        terms.push((m, c * &sign));
        match p.peek() {
            None => break,
            Some(Tok::Plus) => sign = Q::one(),
            Some(Tok::Minus) => sign = -Q::one(),
            Some(_) => return p.err("expected `+` or `-`"),
        }
        p.pos += 1;
    }
    Ok(Polynomial::from_terms(ring, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Ring;

    #[test]
    fn parses_mixed_terms() {
        let r = Ring::new(["q1", "q2", "p1", "p2"]).unwrap();
        let f = parse_polynomial(&r, "3/2*q1^2*p2 - q2 + 1").unwrap();
        assert_eq!(f.to_string(), "3/2*q1^2*p2 - q2 + 1");
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn reports_column() {
        let r = Ring::new(["x"]).unwrap();
        match parse_polynomial(&r, "x + y") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial(&r, "x +").is_err());
        assert!(parse_polynomial(&r, "1/0").is_err());
    }

    #[test]
    fn repeated_factors_accumulate() {
        let r = Ring::new(["x", "y"]).unwrap();
        let f = parse_polynomial(&r, "x*y*x").unwrap();
        assert_eq!(f.to_string(), "x^2*y");
        assert!(parse_polynomial(&r, "x - x").unwrap().is_zero());
    }
}
