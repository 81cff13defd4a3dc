//! Series expressions in t for command parameters, e.g. `t^2*(1+t)`, `3t`, `1/(1-t)`, `(1+i)t^3`.
//!
//! Grammar: sums and differences of products; `*` or juxtaposition multiplies, `/` divides by
//! a unit series, `^` takes a non-negative integer power; atoms are integers, `t`, `i` and
//! parenthesized expressions. All arithmetic is modulo t^order.

use crate::error::{Error, Result};
use crate::series::{Scalar, TSeries};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    T,
    I,
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let cs: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < cs.len() {
        let c = cs[k];
        match c {
            _ if c.is_whitespace() => k += 1,
            '0'..='9' => {
                let start = k;
                while k < cs.len() && cs[k].is_ascii_digit() {
                    k += 1;
                }
                out.push((start, Tok::Num(cs[start..k].iter().collect())));
            }
            't' => {
                out.push((k, Tok::T));
                k += 1;
            }
            'i' => {
                out.push((k, Tok::I));
                k += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push((k, Tok::Op(c)));
                k += 1;
            }
            _ => return Err(Error::parse(format!("column {}", k + 1), format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    order: usize,
    len: usize,
}

const MAX_DEPTH: usize = 64;
const MAX_BITS: u64 = 1 << 16;

fn guard(s: TSeries) -> Result<TSeries> {
    if s.coeffs().iter().any(|c| c.bit_size() > MAX_BITS) {
        return Err(Error::Domain(format!("coefficients exceed {MAX_BITS} bits")));
    }
    Ok(s)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err(&self, msg: &str) -> Error {
        let col = self.toks.get(self.pos).map_or(self.len + 1, |(c, _)| c + 1);
        Error::parse(format!("column {col}"), msg.to_string())
    }

    fn expr(&mut self, depth: usize) -> Result<TSeries> {
        if depth > MAX_DEPTH {
            return Err(self.err("expression nested too deeply"));
        }
        let mut acc = match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                -self.term(depth)?
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.term(depth)?
            }
            _ => self.term(depth)?,
        };
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let c = *c;
            self.pos += 1;
            let rhs = self.term(depth)?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::T | Tok::I | Tok::Op('(')))
    }

    fn term(&mut self, depth: usize) -> Result<TSeries> {
        let mut acc = self.power(depth)?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = guard(&acc * &self.power(depth)?)?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.power(depth)?;
                    acc = match acc.div_unit(&d) {
                        Ok(q) => guard(q)?,
                        Err(_) => {
                            self.pos = at;
                            return Err(self.err("division by a series with zero constant term"));
                        }
                    };
                }
                _ if self.starts_atom() => acc = guard(&acc * &self.power(depth)?)?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self, depth: usize) -> Result<TSeries> {
        let base = self.atom(depth)?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return Err(self.err("expected a non-negative integer exponent"));
            };
            let e: u32 = n.parse().map_err(|_| self.err("exponent too large"))?;
            self.pos += 1;
            return pow(&base, e, self.order);
        }
        Ok(base)
    }

    fn atom(&mut self, depth: usize) -> Result<TSeries> {
        let n = self.order;
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let c: Scalar = s.parse().map_err(|_| self.err("invalid number"))?;
                guard(TSeries::constant(c, n))
            }
            Some(Tok::T) => {
                self.pos += 1;
                Ok(TSeries::var(n))
            }
            Some(Tok::I) => {
                self.pos += 1;
                Ok(TSeries::constant(Scalar::i(), n))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr(depth + 1)?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("expected a number, t, i or '('")),
        }
    }
}

fn pow(base: &TSeries, e: u32, order: usize) -> Result<TSeries> {
    // t^e vanishes once e ≥ order when the base has no constant term
    if base.coeff(0).is_zero() && e as usize >= order {
        return Ok(TSeries::zero(order));
    }
    let mut out = TSeries::one(order);
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            out = guard(&out * &b)?;
        }
        e >>= 1;
        if e > 0 {
            b = guard(&b * &b)?;
        }
    }
    Ok(out)
}

/// Parses `text` as a series in t modulo t^order.
pub fn parse_series(text: &str, order: usize) -> Result<TSeries> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::parse("column 1", "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, order, len: text.chars().count() };
    let out = p.expr(0)?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(cs: &[i64], n: usize) -> TSeries {
        TSeries::from_ints(cs, n)
    }

    #[test]
    fn polynomials() {
        assert_eq!(parse_series("2", 4).unwrap(), ints(&[2], 4));
        assert_eq!(parse_series("3t", 4).unwrap(), ints(&[0, 3], 4));
        assert_eq!(parse_series("t^2*(1+t)", 5).unwrap(), ints(&[0, 0, 1, 1], 5));
        assert_eq!(parse_series("t^2(1+t)", 5).unwrap(), ints(&[0, 0, 1, 1], 5));
        assert_eq!(parse_series("t^3 + t^4", 5).unwrap(), ints(&[0, 0, 0, 1, 1], 5));
        assert_eq!(parse_series("-t + 1/2", 3).unwrap(), TSeries::from_coeffs(vec![Scalar::frac(1, 2), Scalar::int(-1)], 3));
        let z = parse_series("(1+i)t", 3).unwrap();
        assert_eq!(z.coeff(1), &"1+i".parse::<Scalar>().unwrap());
    }

    #[test]
    fn unit_division_and_truncation() {
        assert_eq!(parse_series("1/(1-t)", 4).unwrap(), ints(&[1, 1, 1, 1], 4));
        assert_eq!(parse_series("t^100", 4).unwrap(), TSeries::zero(4));
        assert!(parse_series("1/t", 4).is_err());
    }

    #[test]
    fn errors_carry_columns() {
        match parse_series("1 + x", 3) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "column 5"),
            other => panic!("{other:?}"),
        }
        assert!(parse_series("(1+t", 3).is_err());
        assert!(parse_series("", 3).is_err());
        assert!(parse_series("t^", 3).is_err());
        assert!(parse_series(&"(".repeat(200), 3).is_err());
        assert!(matches!(parse_series("2^4000000000", 3), Err(Error::Domain(_))));
    }
}
