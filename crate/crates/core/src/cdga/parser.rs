//! CDGA descriptions.
//!
//! ```text
//! # minimal model of the 2-sphere
//! generators: x:2, y:3
//! d(y) = x^2
//! cap: 8
//! ```
//!
//! Generators without a `d` line are closed. Expressions are sums of
//! products with rational coefficients: `3*x*y - 1/2 x^2`, parentheses
//! allowed. Factors multiply in the order written, so odd factors pick up
//! Koszul signs. Without a `cap:` line the cap is the sum of the generator
//! degrees.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::algebra::{Cdga, Element, Generator};
use crate::abelian::linalg::Q;
use crate::error::{Error, Result};
use crate::simplicial::parser::logical_lines;

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let n: String = cs[start..i].iter().collect();
            out.push(Tok::Num(n.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(perr(line, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    a: &'a Cdga,
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Element> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = self.a.mul(&acc, &self.power()?);
            } else if self.eat('/') {
                match self.peek().cloned() {
                    Some(Tok::Num(n)) if !n.is_zero() => {
                        self.pos += 1;
                        acc = acc.scale(&Q::new(BigInt::one(), n));
                    }
                    _ => return Err(perr(self.line, "division only by a nonzero integer")),
                }
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_)) | Some(Tok::Op('('))) {
                acc = self.a.mul(&acc, &self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Element> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let e: u32 = n.try_into().map_err(|_| perr(self.line, "exponent too large"))?;
                Ok((0..e).fold(self.a.one(), |acc, _| self.a.mul(&acc, &base)))
            }
            _ => Err(perr(self.line, "expected an exponent after `^`")),
        }
    }

    fn atom(&mut self) -> Result<Element> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.a.one().scale(&Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .a
                    .generator_index(&name)
                    .ok_or_else(|| perr(self.line, format!("unknown generator `{name}`")))?;
                Ok(self.a.generator(i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(perr(self.line, "missing `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(perr(self.line, format!("unexpected token {t:?}"))),
            None => Err(perr(self.line, "unexpected end of expression")),
        }
    }
}

fn parse_expr_at(a: &Cdga, text: &str, line: usize) -> Result<Element> {
    let toks = tokenize(text, line)?;
    if toks.is_empty() {
        return Err(perr(line, "empty expression"));
    }
    let mut p = ExprParser { a, toks, pos: 0, line };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr(line, format!("trailing input after position {}", p.pos)));
    }
    Ok(e)
}

/// Parses an element of `a`, e.g. `3*x` or `x*y + 1/2 z`.
pub fn parse_element(a: &Cdga, text: &str) -> Result<Element> {
    parse_expr_at(a, text, 1)
}

fn parse_generators(s: &str, line: usize) -> Result<Vec<Generator>> {
    let s = s.trim();
    let s = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(s);
    s.split(',')
        .map(|item| {
            let (name, deg) = item
                .split_once(':')
                .ok_or_else(|| perr(line, format!("expected `name:degree`, found `{}`", item.trim())))?;
            let name = name.trim();
            if name.is_empty()
                || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
                || name.starts_with(|c: char| c.is_ascii_digit())
            {
                return Err(perr(line, format!("bad generator name `{name}`")));
            }
            let degree: usize = deg.trim().parse().map_err(|_| perr(line, format!("bad degree `{}`", deg.trim())))?;
            Ok(Generator::new(name, degree))
        })
        .collect()
}

pub fn parse_cdga(text: &str) -> Result<Cdga> {
    let mut gens: Option<Vec<Generator>> = None;
    let mut cap = None;
    let mut diffs: Vec<(usize, String, String)> = Vec::new();
    for (line, s) in logical_lines(text)? {
        if let Some(rest) = s.strip_prefix("generators:") {
            if gens.is_some() {
                return Err(perr(line, "generators declared twice"));
            }
            gens = Some(parse_generators(rest, line)?);
        } else if let Some(rest) = s.strip_prefix("cap:") {
            cap = Some(rest.trim().parse::<usize>().map_err(|_| perr(line, format!("bad cap `{}`", rest.trim())))?);
        } else if let Some(rest) = s.strip_prefix('d') {
            let (lhs, rhs) = rest.split_once('=').ok_or_else(|| perr(line, "expected `d(x) = ...`"))?;
            let lhs = lhs.trim();
            let name = lhs.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(lhs).trim();
            diffs.push((line, name.to_string(), rhs.trim().to_string()));
        } else {
            return Err(perr(line, format!("unrecognized line `{s}`")));
        }
    }
    let gens = gens.ok_or_else(|| perr(1, "missing `generators:` line"))?;
    let cap = cap.unwrap_or_else(|| gens.iter().map(|g| g.degree).sum());
    let zero = vec![Element::zero(); gens.len()];
    let bare = Cdga::new(gens.clone(), zero, cap)?;
    let mut d = vec![Element::zero(); gens.len()];
    let mut seen = vec![false; gens.len()];
    for (line, name, rhs) in diffs {
        let i = bare.generator_index(&name).ok_or_else(|| perr(line, format!("unknown generator `{name}`")))?;
        if seen[i] {
            return Err(perr(line, format!("d({name}) given twice")));
        }
        seen[i] = true;
        d[i] = parse_expr_at(&bare, &rhs, line)?;
    }
    Cdga::new(gens, d, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_two_model() {
        let a = parse_cdga("generators: x:2, y:3\nd(y) = x^2\ncap: 8\n").unwrap();
        assert_eq!(a.cap(), 8);
        assert_eq!(a.d(&a.generator(1)), a.mul(&a.generator(0), &a.generator(0)));
    }

    #[test]
    fn coefficients_and_signs() {
        let a = parse_cdga("generators: a:1, b:1").unwrap();
        let ab = parse_element(&a, "a*b").unwrap();
        let ba = parse_element(&a, "b a").unwrap();
        assert_eq!(ab, ba.neg());
        let half = parse_element(&a, "1/2 a - (a)/2").unwrap();
        assert!(half.is_zero());
    }

    #[test]
    fn rejects_d_squared_nonzero() {
        // d z = x y, d x = 0, d y = x²: d(xy) = x³ ≠ 0
        let err = parse_cdga("generators: x:2, y:3, z:4\nd y = x^2\nd z = x*y\n").unwrap_err();
        assert!(matches!(err, Error::InvalidCdga(_)), "{err:?}");
    }

    #[test]
    fn rejects_wrong_degree() {
        assert!(matches!(parse_cdga("generators: x:2, y:3\nd(y) = x\n"), Err(Error::InvalidCdga(_))));
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(parse_cdga("generators: x:2\n\nd(q) = x\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_cdga("generators: x:two\n"), Err(Error::Parse { line: 1, .. })));
    }
}
