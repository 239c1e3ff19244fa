//! Recursive-descent parser for the text form of [`SuperPolynomial`].
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' factor) | ('/' uint))*
//! factor := base ['^' uint]
//! base   := uint | 'h' | 'i' | 's' | 'x' uint | 'p' uint | 'xi' uint | '(' expr ')'
//! ```
//!
//! `h` also accepts a negative exponent (`h^-1`). Variable indices are 1-based.

use num_bigint::BigInt;

use crate::coeff::{Rational, Scalar};
use crate::error::{Error, Result};
use crate::superpoly::{SuperPolynomial, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        if c.is_ascii_whitespace() {
            pos += 1;
        } else if c.is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let n: BigInt = text[start..pos].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_alphabetic() {
                pos += 1;
            }
            out.push((start, Tok::Ident(text[start..pos].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            pos += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    n: usize,
    end: usize,
    _src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = v.clone();
                self.idx += 1;
                Ok(v)
            }
            _ => self.err("expected an unsigned integer"),
        }
    }

    fn small_uint(&mut self) -> Result<u32> {
        let v = self.uint()?;
        u32::try_from(v).or_else(|_| self.err("integer too large"))
    }

    fn expr(&mut self) -> Result<SuperPolynomial> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                acc += &self.term()?;
            } else if self.eat('-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SuperPolynomial> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let f = self.factor()?;
                acc = &acc * &f;
            } else if self.eat('/') {
                let d = self.uint()?;
                if d == BigInt::from(0) {
                    return self.err("division by zero");
                }
                acc = acc.scale_rat(&Rational::new(BigInt::from(1), d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<SuperPolynomial> {
        let n = self.n;
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        match tok {
            Tok::Num(v) => {
                self.idx += 1;
                let base = SuperPolynomial::constant(n, Scalar::rational(Rational::from_integer(v)));
                self.power(base)
            }
            Tok::Sym('(') => {
                self.idx += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                self.power(inner)
            }
            Tok::Ident(name) => {
                let start = self.pos();
                self.idx += 1;
                match name.as_str() {
                    "h" => {
                        if self.eat('^') {
                            let neg = self.eat('-');
                            let k = self.small_uint()? as i32;
                            let k = if neg { -k } else { k };
                            Ok(SuperPolynomial::constant(n, Scalar::h_pow(k)))
                        } else {
                            Ok(SuperPolynomial::constant(n, Scalar::h()))
                        }
                    }
                    "i" => self.power(SuperPolynomial::constant(n, Scalar::i())),
                    "s" => self.power(SuperPolynomial::constant(n, Scalar::s())),
                    "x" | "p" | "xi" => {
                        let k = self.small_uint()? as usize;
                        if k == 0 || k > n {
                            return Err(Error::Parse { pos: start, msg: format!("index {k} out of range 1..={n}") });
                        }
                        let v = match name.as_str() {
                            "x" => Var::X(k - 1),
                            "p" => Var::P(k - 1),
                            _ => Var::Xi(k - 1),
                        };
                        self.power(SuperPolynomial::var(n, v))
                    }
                    other => Err(Error::Parse { pos: start, msg: format!("unknown symbol {other:?}") }),
                }
            }
            Tok::Sym(c) => self.err(format!("unexpected {c:?}")),
        }
    }

    fn power(&mut self, base: SuperPolynomial) -> Result<SuperPolynomial> {
        if self.eat('^') {
            let k = self.small_uint()?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }
}

pub fn parse_polynomial(text: &str, n: usize) -> Result<SuperPolynomial> {
    if n == 0 || n > crate::superpoly::MAX_DIM {
        return Err(Error::InvalidArgument(format!("invalid dimension {n}")));
    }
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, idx: 0, n, end: text.len(), _src: text };
    let out = p.expr()?;
    if p.idx != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{PolyShape, Sampler};
    use crate::superpoly::Monomial;

    #[test]
    fn examples() {
        let d = parse_polynomial("p1*xi1 + p2*xi2", 2).unwrap();
        let expect = &(&SuperPolynomial::p(2, 0) * &SuperPolynomial::xi(2, 0))
            + &(&SuperPolynomial::p(2, 1) * &SuperPolynomial::xi(2, 1));
        assert_eq!(d, expect);
        let f = parse_polynomial("xi2*xi1", 2).unwrap();
        assert_eq!(f, -(&SuperPolynomial::xi(2, 0) * &SuperPolynomial::xi(2, 1)));
        let g = parse_polynomial("h/2 * xi1*xi2", 2).unwrap();
        let mut m = Monomial::one(2);
        m.xi = 0b11;
        assert_eq!(g, SuperPolynomial::from_term(m, Scalar::h().scale(&crate::coeff::rat(1, 2))));
    }

    #[test]
    fn errors_carry_position() {
        match parse_polynomial("x1 + x3", 2) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_polynomial("x1 +", 2).is_err());
        assert!(parse_polynomial("(x1", 2).is_err());
        assert!(parse_polynomial("x1 $", 2).is_err());
        assert!(parse_polynomial("q1", 2).is_err());
        assert!(parse_polynomial("", 2).is_err());
    }

    #[test]
    fn powers_and_parentheses() {
        let a = parse_polynomial("(x1 + p1)^2 - x1^2 - 2*x1*p1", 1).unwrap();
        assert_eq!(a, parse_polynomial("p1^2", 1).unwrap());
        let b = parse_polynomial("h^-1*h^2", 1).unwrap();
        assert_eq!(b, parse_polynomial("h", 1).unwrap());
        assert_eq!(parse_polynomial("s^2 + i^2", 1).unwrap(), parse_polynomial("1", 1).unwrap());
    }

    #[test]
    fn print_parse_round_trip() {
        let mut s = Sampler::new(5);
        let shape = PolyShape { max_x: 2, max_p: 2, max_xi: 3, terms: 5 };
        for _ in 0..300 {
            let n = s.dim(1, 4);
            let f = s.poly_rich(n, &shape);
            let text = f.to_string();
            assert_eq!(parse_polynomial(&text, n).unwrap(), f, "{text}");
        }
    }
}
