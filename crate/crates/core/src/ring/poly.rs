//! Sparse multivariate polynomials with exact rational coefficients.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::rational::{fmt_rational, Rational};
use crate::{Error, Result};

/// Largest supported number of chart variables.
pub const MAX_VARS: usize = 8;

/// Ordered list of chart variable names, cheap to clone.
// `eq` only adds a pointer shortcut, so it agrees with the derived hash.
#[allow(clippy::derived_hash_with_manual_eq)]
#[derive(Clone, Debug, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim().to_string();
            let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::pre(format!("invalid variable name `{n}`")));
            }
            if out.contains(&n) {
                return Err(Error::pre(format!("duplicate variable `{n}`")));
            }
            out.push(n);
        }
        Ok(Vars(out.into()))
    }

    /// Parse a comma or whitespace separated list.
    pub fn parse(text: &str) -> Result<Self> {
        let names: Vec<&str> =
            text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        Vars::new(&names)
    }

    pub fn xyz() -> Self {
        Vars::new(&["x", "y", "z"]).expect("static names")
    }

    pub fn xy() -> Self {
        Vars::new(&["x", "y"]).expect("static names")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// This list with one extra variable appended; the name avoids clashes.
    pub fn with_extra(&self, preferred: &str) -> Result<(Vars, usize)> {
        let mut name = preferred.to_string();
        let mut k = 1;
        while self.index(&name).is_some() {
            name = format!("{preferred}{k}");
            k += 1;
        }
        let mut names: Vec<String> = self.0.to_vec();
        names.push(name);
        let v = Vars::new(&names)?;
        let i = v.len() - 1;
        Ok((v, i))
    }

    pub fn joined(&self) -> String {
        self.0.join(",")
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// Exponent vector. Unused slots beyond the chart dimension stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    e: [u16; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::one();
        m.e[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut m = Monomial::one();
        for (i, &x) in exps.iter().enumerate() {
            m.e[i] = u16::try_from(x).expect("exponent overflow");
        }
        m
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn set(&mut self, i: usize, v: u32) {
        self.e[i] = u16::try_from(v).expect("exponent overflow");
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.e[..n].iter().map(|&x| x as u32).collect()
    }

    pub fn degree(&self) -> u32 {
        self.e.iter().map(|&x| x as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.e[i] = m.e[i].checked_add(other.e[i]).expect("exponent overflow");
        }
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.e[i] <= other.e[i])
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        let mut m = *other;
        for i in 0..MAX_VARS {
            m.e[i] -= self.e[i];
        }
        m
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.e[i] == 0 || other.e[i] == 0)
    }

    pub fn render(&self, vars: &Vars) -> String {
        let mut parts = Vec::new();
        for i in 0..vars.len() {
            match self.e[i] {
                0 => {}
                1 => parts.push(vars.name(i).to_string()),
                k => parts.push(format!("{}^{}", vars.name(i), k)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Graded order; within a degree, larger exponents of earlier variables
/// come first. This is a monomial order, so the last key of a term map is
/// a valid leading monomial.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.e.cmp(&self.e))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over a named chart. An optional cap `N` marks a truncated
/// power series: terms of total degree `>= N` are dropped.
#[derive(Clone, Debug)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
    cap: Option<u32>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for Poly {}

fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new(), cap: None }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Poly::constant(vars, Rational::one())
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Poly::monomial(vars, Monomial::var(i), Rational::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self> {
        let i = vars.index(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(Poly::var(vars, i))
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(text: &str, vars: &Vars) -> Result<Self> {
        super::parse::parse_poly(text, vars)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    /// Truncate to degree `< n` and record the cap.
    pub fn with_cap(mut self, n: Option<u32>) -> Self {
        self.cap = min_cap(self.cap, n);
        self.apply_cap();
        self
    }

    /// Forget the cap without changing terms.
    pub fn uncapped(mut self) -> Self {
        self.cap = None;
        self
    }

    fn apply_cap(&mut self) {
        if let Some(n) = self.cap {
            self.terms.retain(|m, _| m.degree() < n);
        }
    }

    /// Same terms over another variable list of equal length.
    pub fn relabel(&self, vars: &Vars) -> Self {
        assert_eq!(vars.len(), self.vars.len());
        Poly { vars: vars.clone(), terms: self.terms.clone(), cap: self.cap }
    }

    /// Embed into a list extending this one (extra variables at the end).
    pub fn extend_vars(&self, vars: &Vars) -> Self {
        assert!(vars.len() >= self.vars.len());
        assert_eq!(&vars.names()[..self.vars.len()], self.vars.names());
        Poly { vars: vars.clone(), terms: self.terms.clone(), cap: self.cap }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        if let Some(n) = self.cap {
            if m.degree() >= n {
                return;
            }
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Order of vanishing at the origin; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(i)).max()
    }

    /// Variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.terms.keys().any(|m| m.exp(i) > 0)).collect()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.last_key_value()
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        let mut p = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                p.terms.insert(*m, c.clone());
            }
        }
        p
    }

    /// Terms of degree `< n`.
    pub fn truncated(&self, n: u32) -> Poly {
        let mut p = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.degree() < n {
                p.terms.insert(*m, c.clone());
            }
        }
        p.cap = self.cap;
        p
    }

    /// `x_i^k`-coefficients, indexed by `k`, as polynomials free of `x_i`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Poly> {
        let d = self.degree_in(i).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(&self.vars); d + 1];
        for (m, c) in &self.terms {
            let k = m.exp(i) as usize;
            let mut mm = *m;
            mm.set(i, 0);
            out[k].terms.insert(mm, c.clone());
        }
        for p in &mut out {
            p.cap = self.cap;
        }
        out
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch(self.vars.joined(), other.vars.joined()))
        }
    }

    fn assert_same(&self, other: &Poly) {
        if let Err(e) = self.check(other) {
            panic!("{e}");
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut p = Poly::zero(&self.vars);
        p.cap = self.cap;
        if c.is_zero() {
            return p;
        }
        for (m, v) in &self.terms {
            p.terms.insert(*m, v * c);
        }
        p
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Rational) -> Poly {
        let mut p = Poly::zero(&self.vars);
        p.cap = self.cap;
        for (m, v) in &self.terms {
            p.add_term(m.mul(mono), v * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one(&self.vars).with_cap(self.cap);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative. A cap `N` becomes `N - 1`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut p = Poly::zero(&self.vars);
        p.cap = self.cap.map(|n| n.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                let mut mm = *m;
                mm.set(i, e - 1);
                p.add_term(mm, c * Rational::from_integer(e.into()));
            }
        }
        p
    }

    pub fn derivative_named(&self, name: &str) -> Result<Poly> {
        let i = self.vars.index(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(self.derivative(i))
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.nvars()).map(|i| self.derivative(i)).collect()
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, p) in point.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    v *= num_traits::pow(p.clone(), e as usize);
                }
            }
            acc += v;
        }
        acc
    }

    /// Substitute `x_i ↦ images[i]`; images share one target variable list.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars() {
            return Err(Error::pre(format!(
                "substitution needs {} images, got {}",
                self.nvars(),
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        let mut cap = self.cap;
        for im in images {
            if im.vars != target {
                return Err(Error::VariableMismatch(target.joined(), im.vars.joined()));
            }
            cap = min_cap(cap, im.cap);
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(&target).with_cap(cap), p.clone()]).collect();
        let mut out = Poly::zero(&target).with_cap(cap);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(&target, c.clone()).with_cap(cap);
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = &pw[pw.len() - 1] * &pw[1];
                    pw.push(next);
                }
                term = &term * &pw[e];
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Substitute by name; unnamed variables map to the same-named target
    /// variable, which must exist.
    pub fn substitute_named(&self, assignment: &[(&str, Poly)], target: &Vars) -> Result<Poly> {
        let mut images = Vec::with_capacity(self.nvars());
        for name in self.vars.names() {
            match assignment.iter().find(|(n, _)| n == name) {
                Some((_, p)) => images.push(p.clone()),
                None => images.push(Poly::var_named(target, name)?),
            }
        }
        for (n, _) in assignment {
            if self.vars.index(n).is_none() {
                return Err(Error::UnknownVariable((*n).to_string()));
            }
        }
        self.substitute(&images)
    }

    /// `f(x + p)`: move the point `p` to the origin.
    pub fn translate(&self, point: &[Rational]) -> Poly {
        if point.iter().all(|c| c.is_zero()) {
            return self.clone();
        }
        let imgs: Vec<Poly> = (0..self.nvars())
            .map(|i| &Poly::var(&self.vars, i) + &Poly::constant(&self.vars, point[i].clone()))
            .collect();
        self.substitute(&imgs).expect("same variables")
    }

    /// Set `x_i = value`, keeping the variable list.
    pub fn restrict(&self, i: usize, value: &Rational) -> Poly {
        let mut p = Poly::zero(&self.vars);
        p.cap = self.cap;
        for (m, c) in &self.terms {
            let e = m.exp(i);
            let mut mm = *m;
            mm.set(i, 0);
            p.add_term(mm, c * num_traits::pow(value.clone(), e as usize));
        }
        p
    }

    /// Linear change of coordinates `x_i ↦ Σ_j a[i][j] x_j`.
    pub fn linear_change(&self, a: &[Vec<Rational>]) -> Poly {
        let imgs: Vec<Poly> = (0..self.nvars())
            .map(|i| {
                let mut p = Poly::zero(&self.vars);
                for (j, c) in a[i].iter().enumerate() {
                    p.add_term(Monomial::var(j), c.clone());
                }
                p
            })
            .collect();
        self.substitute(&imgs).expect("same variables")
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder. Operates on stored terms, ignoring caps.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        self.assert_same(divisor);
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (*lm, lc.clone());
        let mut rem = self.clone().uncapped();
        let mut q = Poly::zero(&self.vars);
        let div = divisor.clone().uncapped();
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient(m);
            let qc = c / &lc;
            q.add_term(qm, qc.clone());
            rem = &rem - &div.mul_monomial(&qm, &qc);
        }
        Some(q)
    }

    /// Remainder of multivariate division by `gens` in the crate's monomial
    /// order. Zero certifies ideal membership.
    pub fn reduce(&self, gens: &[Poly]) -> Poly {
        let mut p = self.clone().uncapped();
        let mut r = Poly::zero(&self.vars);
        let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.clone().uncapped()).collect();
        while let Some((m, c)) = p.leading() {
            let (m, c) = (*m, c.clone());
            let mut divided = false;
            for g in &gens {
                let (gm, gc) = g.leading().expect("nonzero");
                if gm.divides(&m) {
                    let qm = gm.quotient(&m);
                    let qc = &c / gc;
                    p = &p - &g.mul_monomial(&qm, &qc);
                    divided = true;
                    break;
                }
            }
            if !divided {
                r.add_term(m, c.clone());
                p.terms.remove(&m);
            }
        }
        r
    }

    /// Multiply by the lcm of denominators and divide by the content, so
    /// the result has coprime integer coefficients and positive leading
    /// coefficient.
    pub fn primitive(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut l = num_bigint::BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            let n = (c * Rational::from_integer(l.clone())).to_integer();
            g = g.gcd(&n);
        }
        let mut s = Rational::new(l, g);
        if self.leading().expect("nonzero").1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Monic normalisation (leading coefficient one).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, other: &Poly) -> Poly {
        self.assert_same(other);
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut p = big.clone();
        p.cap = min_cap(self.cap, other.cap);
        for (m, c) in &small.terms {
            p.add_term(*m, c.clone());
        }
        p.apply_cap();
        p
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, other: &Poly) -> Poly {
        self.assert_same(other);
        let mut p = self.clone();
        p.cap = min_cap(self.cap, other.cap);
        for (m, c) in &other.terms {
            p.add_term(*m, -c.clone());
        }
        p.apply_cap();
        p
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, other: &Poly) -> Poly {
        self.assert_same(other);
        let mut p = Poly::zero(&self.vars);
        p.cap = min_cap(self.cap, other.cap);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            let body = if m.degree() == 0 {
                fmt_rational(&a)
            } else if a.is_one() {
                m.render(&self.vars)
            } else {
                format!("{}*{}", fmt_rational(&a), m.render(&self.vars))
            };
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// `f | g`: returns `q` with `g = f·q` when it exists.
pub fn divides(f: &Poly, g: &Poly) -> Option<Poly> {
    g.div_exact(f)
}

/// Ideal membership by division. `Some(true)` is always a proof;
/// `Some(false)` is returned only when the generators' leading monomials
/// are pairwise coprime, which makes them a Gröbner basis. Otherwise an
/// undecided case yields `None`.
pub fn ideal_contains(gens: &[Poly], h: &Poly) -> Option<bool> {
    if h.reduce(gens).is_zero() {
        return Some(true);
    }
    let lms: Vec<Monomial> = gens.iter().filter_map(|g| g.leading().map(|(m, _)| *m)).collect();
    let coprime = lms.iter().enumerate().all(|(i, a)| lms[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        Some(false)
    } else {
        None
    }
}
