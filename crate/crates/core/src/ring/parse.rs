//! Recursive-descent parser for polynomials and polyvector fields.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?  |  '@'var ('^' '@'var)*
//! base   := rational | var | '(' expr ')'
//! ```
//!
//! `@v` is the coordinate vector field of `v`; `^` between two `@` tokens
//! is the wedge product. Juxtaposition such as `2x` is rejected.

use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

use super::poly::{Poly, Vars};
use super::rational::Rational;
use crate::{Error, Result};

/// Sum of `coefficient · ∂_I` terms keyed by strictly increasing index
/// tuples. Degree zero is the empty tuple.
pub type GradedTerms = BTreeMap<Vec<usize>, Poly>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    At(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if i < b.len() && (b[i].is_ascii_alphabetic() || b[i] == b'_') {
                return Err(Error::parse(i, "implicit multiplication is not allowed; use `*`"));
            }
            if i < b.len() && b[i] == b'.' {
                return Err(Error::parse(i, "decimal literals are not allowed; write p/q"));
            }
            out.push((Tok::Num(text[start..i].parse().expect("digits")), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'@' {
            let at = c == b'@';
            if at {
                i += 1;
                if i >= b.len() || !b[i].is_ascii_alphabetic() {
                    return Err(Error::parse(i, "expected a variable name after `@`"));
                }
            }
            let s = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            let name = text[s..i].to_string();
            out.push((if at { Tok::At(name) } else { Tok::Ident(name) }, start));
            continue;
        }
        let t = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[i..].chars().next().expect("in range");
                return Err(Error::parse(i, format!("unexpected character `{ch}`")));
            }
        };
        out.push((t, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a Vars,
}

fn wedge_terms(a: &GradedTerms, b: &GradedTerms, vars: &Vars) -> GradedTerms {
    let mut out = GradedTerms::new();
    for (i, p) in a {
        for (j, q) in b {
            if let Some((idx, sign)) = super::merge_indices(i, j) {
                let c = &(p * q) * &Poly::constant(vars, Rational::from_integer(sign.into()));
                add_into(&mut out, idx, c);
            }
        }
    }
    out
}

fn add_into(map: &mut GradedTerms, idx: Vec<usize>, c: Poly) {
    if c.is_zero() {
        return;
    }
    match map.remove(&idx) {
        Some(old) => {
            let s = &old + &c;
            if !s.is_zero() {
                map.insert(idx, s);
            }
        }
        None => {
            map.insert(idx, c);
        }
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn scalar(&self, c: Rational) -> GradedTerms {
        let mut m = GradedTerms::new();
        add_into(&mut m, vec![], Poly::constant(self.vars, c));
        m
    }

    fn expr(&mut self) -> Result<GradedTerms> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                neg = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = negate(acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    for (k, v) in t {
                        add_into(&mut acc, k, v);
                    }
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = negate(self.term()?);
                    for (k, v) in t {
                        add_into(&mut acc, k, v);
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GradedTerms> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            let f = self.factor()?;
            acc = wedge_terms(&acc, &f, self.vars);
        }
        if let Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::At(_)) | Some(Tok::LParen) = self.peek() {
            return Err(Error::parse(self.offset(), "implicit multiplication is not allowed; use `*`"));
        }
        Ok(acc)
    }

    fn var_index(&self, name: &str, offset: usize) -> Result<usize> {
        let _ = offset;
        self.vars.index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn factor(&mut self) -> Result<GradedTerms> {
        let off = self.offset();
        if let Some(Tok::At(_)) = self.peek() {
            let mut idx = Vec::new();
            loop {
                let o = self.offset();
                match self.bump() {
                    Some(Tok::At(name)) => idx.push(self.var_index(&name, o)?),
                    _ => return Err(Error::parse(o, "expected `@variable`")),
                }
                let is_wedge = matches!(self.peek(), Some(Tok::Caret))
                    && matches!(self.toks.get(self.pos + 1).map(|t| &t.0), Some(Tok::At(_)));
                if !is_wedge {
                    break;
                }
                self.bump();
            }
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            let mut out = GradedTerms::new();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Ok(out);
            }
            let sign = super::permutation_sign(&idx);
            add_into(&mut out, sorted, Poly::constant(self.vars, Rational::from_integer(sign.into())));
            return Ok(out);
        }
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let o = self.offset();
            let k = match self.bump() {
                Some(Tok::Num(n)) => u32::try_from(n).map_err(|_| Error::parse(o, "exponent too large"))?,
                _ => return Err(Error::parse(o, "expected a non-negative integer exponent")),
            };
            if base.keys().any(|k| !k.is_empty()) {
                if k == 1 {
                    return Ok(base);
                }
                return Err(Error::parse(off, "powers of polyvector fields are not defined"));
            }
            let p = base.get(&vec![]).cloned().unwrap_or_else(|| Poly::zero(self.vars));
            let mut out = GradedTerms::new();
            add_into(&mut out, vec![], p.pow(k));
            return Ok(out);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<GradedTerms> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut value = Rational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let o = self.offset();
                    match self.bump() {
                        Some(Tok::Num(d)) => {
                            if d.is_zero() {
                                return Err(Error::DivisionByZero);
                            }
                            value /= Rational::from_integer(d);
                        }
                        _ => return Err(Error::parse(o, "expected an integer denominator")),
                    }
                }
                Ok(self.scalar(value))
            }
            Some(Tok::Ident(name)) => {
                let i = self.var_index(&name, off)?;
                let mut m = GradedTerms::new();
                add_into(&mut m, vec![], Poly::var(self.vars, i));
                Ok(m)
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let o = self.offset();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::parse(o, "expected `)`")),
                }
            }
            Some(Tok::Slash) => Err(Error::parse(off, "division is only allowed inside a rational literal")),
            Some(_) => Err(Error::parse(off, "expected a number, variable or `(`")),
            None => Err(Error::parse(off, "unexpected end of input")),
        }
    }
}

fn negate(m: GradedTerms) -> GradedTerms {
    m.into_iter().map(|(k, v)| (k, -&v)).collect()
}

/// Parse a sum of polyvector terms of any degrees.
pub fn parse_graded(text: &str, vars: &Vars) -> Result<GradedTerms> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), vars };
    if p.toks.is_empty() {
        return Err(Error::parse(0, "empty expression"));
    }
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_poly(text: &str, vars: &Vars) -> Result<Poly> {
    let g = parse_graded(text, vars)?;
    if g.keys().any(|k| !k.is_empty()) {
        return Err(Error::parse(0, "expected a polynomial, found vector-field terms"));
    }
    Ok(g.get(&vec![]).cloned().unwrap_or_else(|| Poly::zero(vars)))
}
