//! Expression mini-language for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | atom
//! atom   := rational | gen | '(' expr ')' | 'sum' '(' ident ',' expr ')'
//! gen    := 'q[' idx ',' idx ']' | 'u[' idx ',' idx ']' | 'u*[' idx ',' idx ']' | 'w' | 'w*'
//! idx    := integer | ident
//! ```
//!
//! Indices are 1-based. `sum(k, e)` ranges `k` over the whole index set.
//! `w*` is always the adjoint of `w`; write `w * x` for a product.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::generator::Gen;
use super::poly::NCPoly;
use crate::error::{Error, Result};
use crate::exact::Q;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    UStar,
    WStar,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((col, Tok::Num(s.parse().expect("digits parse"))));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if (s == "u" || s == "w") && chars.get(i) == Some(&'*') {
                i += 1;
                out.push((col, if s == "u" { Tok::UStar } else { Tok::WStar }));
            } else {
                out.push((col, Tok::Ident(s)));
            }
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            other => {
                return Err(Error::Expr {
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((col, t));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
    n: usize,
    env: HashMap<String, usize>,
}

impl Parser {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Expr {
            column: self.col(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<NCPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NCPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<NCPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.atom()
    }

    fn index(&mut self) -> Result<usize> {
        match self.next() {
            Some(Tok::Num(v)) => {
                let v: usize = v.try_into().unwrap_or(0);
                if v == 0 || v > self.n {
                    self.pos -= 1;
                    return self.err(format!("index {v} outside 1..={}", self.n));
                }
                Ok(v - 1)
            }
            Some(Tok::Ident(name)) => match self.env.get(&name) {
                Some(&v) => Ok(v),
                None => {
                    self.pos -= 1;
                    self.err(format!("unbound index variable `{name}`"))
                }
            },
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected an index")
            }
        }
    }

    fn matrix_gen(&mut self, make: fn(usize, usize) -> Gen) -> Result<NCPoly> {
        self.expect(Tok::LBracket, "`[`")?;
        let i = self.index()?;
        self.expect(Tok::Comma, "`,`")?;
        let j = self.index()?;
        self.expect(Tok::RBracket, "`]`")?;
        Ok(NCPoly::gen(make(i, j)))
    }

    fn atom(&mut self) -> Result<NCPoly> {
        let start = self.pos;
        match self.next() {
            Some(Tok::Num(a)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Num(b)) if b != BigInt::from(0) => Ok(NCPoly::constant(Q::new(a, b))),
                        _ => {
                            self.pos -= 1;
                            self.err("expected a nonzero denominator")
                        }
                    }
                } else {
                    Ok(NCPoly::constant(Q::from_integer(a)))
                }
            }
            Some(Tok::UStar) => self.matrix_gen(Gen::u_star),
            Some(Tok::WStar) => Ok(NCPoly::gen(Gen::WStar)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "q" => self.matrix_gen(Gen::q),
                "u" => self.matrix_gen(Gen::u),
                "w" => Ok(NCPoly::gen(Gen::W)),
                "sum" => {
                    self.expect(Tok::LParen, "`(` after sum")?;
                    let var = match self.next() {
                        Some(Tok::Ident(v)) => v,
                        _ => {
                            self.pos -= 1;
                            return self.err("expected a summation variable");
                        }
                    };
                    self.expect(Tok::Comma, "`,`")?;
                    let body_start = self.pos;
                    let mut total = NCPoly::zero();
                    let mut body_end = body_start;
                    let saved = self.env.get(&var).copied();
                    for k in 0..self.n {
                        self.pos = body_start;
                        self.env.insert(var.clone(), k);
                        total = &total + &self.expr()?;
                        body_end = self.pos;
                    }
                    match saved {
                        Some(v) => self.env.insert(var, v),
                        None => self.env.remove(&var),
                    };
                    if self.n == 0 {
                        return self.err("empty index set");
                    }
                    self.pos = body_end;
                    self.expect(Tok::RParen, "`)` closing sum")?;
                    Ok(total)
                }
                other => {
                    self.pos = start;
                    self.err(format!("unknown identifier `{other}`"))
                }
            },
            Some(_) => {
                self.pos = start;
                self.err("unexpected token")
            }
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses `src` into a polynomial over an index set of size `n`.
pub fn parse_poly(src: &str, n: usize) -> Result<NCPoly> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: src.chars().count() + 1,
        n,
        env: HashMap::new(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    #[test]
    fn parses_generators_and_sums() {
        let p = parse_poly("sum(k, q[1,k]) - 1", 3).unwrap();
        assert_eq!(p.to_string(), "-1 + q[1,1] + q[1,2] + q[1,3]");
        let p = parse_poly("u*[2,1] * u[2,1] + w * w* - 1/2", 2).unwrap();
        assert_eq!(p.to_string(), "-1/2 + u*[2,1] u[2,1] + w w*");
        let p = parse_poly("-(q[1,2] - 2) * q[1,2]", 2).unwrap();
        assert_eq!(p.coeff(&crate::nc::Word(vec![Gen::q(0, 1)])), frac(2, 1));
        let nested = parse_poly("sum(i, sum(j, q[i,j]))", 2).unwrap();
        assert_eq!(nested.len(), 4);
    }

    #[test]
    fn errors_are_located() {
        let e = parse_poly("q[1,4]", 3).unwrap_err();
        assert!(matches!(e, Error::Expr { column: 5, .. }), "{e}");
        let e = parse_poly("q[1,k]", 3).unwrap_err();
        assert!(matches!(e, Error::Expr { column: 5, .. }), "{e}");
        let e = parse_poly("q[1,1] $", 3).unwrap_err();
        assert!(matches!(e, Error::Expr { column: 8, .. }), "{e}");
        assert!(parse_poly("(q[1,1]", 3).is_err());
        assert!(parse_poly("1/0", 3).is_err());
        assert!(parse_poly("foo", 3).is_err());
    }
}
