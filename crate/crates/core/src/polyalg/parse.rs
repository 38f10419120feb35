use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::polyalg::{Limits, PolyError, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(src[start..i].parse().unwrap())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(PolyError::Parse {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    limits: &'a Limits,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc += &self.product()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc -= &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = acc.try_mul(&rhs, self.limits)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return self.err("expected a non-negative integer exponent");
            };
            let e = match n.to_u32() {
                Some(e) if e <= self.limits.max_exponent => e,
                _ => {
                    return Err(PolyError::ExponentLimit {
                        exponent: n.to_u64().unwrap_or(u64::MAX),
                        limit: self.limits.max_exponent,
                    })
                }
            };
            self.pos += 1;
            return base.pow(e, self.limits);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(a)) => {
                self.pos += 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    let Some(Tok::Num(b)) = self.peek().cloned() else {
                        return self.err("expected an integer denominator");
                    };
                    if b.is_zero() {
                        return self.err("zero denominator in literal");
                    }
                    self.pos += 1;
                    Ok(Polynomial::constant(Rational::new(a, b)))
                } else {
                    Ok(Polynomial::constant(Rational::from_integer(a)))
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Polynomial::var(&name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial with the default limits.
pub fn parse_polynomial(src: &str) -> Result<Polynomial, PolyError> {
    parse_polynomial_with(src, &Limits::default())
}

/// Parses a polynomial. Byte offsets in errors are relative to `src`.
pub fn parse_polynomial_with(src: &str, limits: &Limits) -> Result<Polynomial, PolyError> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        limits,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a rational literal such as `3`, `-2/7` or `1/2`.
pub fn parse_rational(src: &str) -> Result<Rational, PolyError> {
    let p = parse_polynomial(src)?;
    p.as_constant().ok_or_else(|| PolyError::Parse {
        pos: 0,
        msg: format!("'{src}' is not a rational constant"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rat;

    #[test]
    fn grammar_examples() {
        let f = parse_polynomial("x*y + 1 - x").unwrap();
        assert_eq!(f.to_string(), "x*y - x + 1");
        let g = parse_polynomial("(1 - x)^2").unwrap();
        assert_eq!(g.to_string(), "x^2 - 2*x + 1");
        assert_eq!(
            parse_polynomial(" - 3/6 ").unwrap(),
            Polynomial::constant(rat(-1, 2))
        );
        assert_eq!(parse_polynomial("y_1'").unwrap().to_string(), "y_1'");
    }

    #[test]
    fn rejects_implicit_multiplication() {
        assert!(matches!(
            parse_polynomial("2x"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("x y"),
            Err(PolyError::Parse { .. })
        ));
    }

    #[test]
    fn rejects_bad_exponents_and_literals() {
        assert!(matches!(
            parse_polynomial("x^-1"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("x/2"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("1/0"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("x^2000000"),
            Err(PolyError::ExponentLimit { .. })
        ));
    }

    #[test]
    fn error_positions_point_at_offending_token() {
        match parse_polynomial("x + * y") {
            Err(PolyError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
    }
}
