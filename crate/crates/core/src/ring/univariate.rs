//! Dense univariate polynomials, resultants and rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Monomial, Poly, Vars};
use super::rational::Rational;
use crate::{Error, Result};

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    c: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> Self {
        UniPoly { c: vec![] }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Read a polynomial in which only variable `i` occurs.
    pub fn from_poly(p: &Poly, i: usize) -> Result<Self> {
        let mut c = vec![Rational::zero(); p.degree_in(i).unwrap_or(0) as usize + 1];
        for (m, v) in p.terms() {
            if m.degree() != m.exp(i) {
                return Err(Error::pre(format!("`{p}` is not univariate in {}", p.vars().name(i))));
            }
            c[m.exp(i) as usize] = v.clone();
        }
        Ok(UniPoly::new(c))
    }

    pub fn to_poly(&self, vars: &Vars, i: usize) -> Poly {
        let mut p = Poly::zero(vars);
        for (k, v) in self.c.iter().enumerate() {
            let mut m = Monomial::one();
            m.set(i, k as u32);
            p.add_term(m, v.clone());
        }
        p
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for v in self.c.iter().rev() {
            acc = acc * x + v;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.c.iter().enumerate().skip(1).map(|(k, v)| v * Rational::from_integer(BigInt::from(k))).collect(),
        )
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.c[dd].clone();
        let mut r = self.c.clone();
        if r.len() < d.c.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] / &lc;
            if !coef.is_zero() {
                for j in 0..=dd {
                    r[k + j] -= &coef * &d.c[j];
                }
            }
            q[k] = coef;
        }
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        match self.c.last() {
            Some(l) => {
                let l = l.clone();
                UniPoly::new(self.c.iter().map(|v| v / &l).collect())
            }
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Divide out `(x - r)` once; caller guarantees `r` is a root.
    pub fn deflate(&self, r: &Rational) -> UniPoly {
        let lin = UniPoly::new(vec![-r.clone(), Rational::one()]);
        self.div_rem(&lin).0
    }

    /// Rational roots with multiplicity, via the rational root theorem.
    pub fn rational_roots(&self) -> Result<Vec<(Rational, u32)>> {
        if self.is_zero() {
            return Err(Error::pre("rational roots of the zero polynomial"));
        }
        let mut out = Vec::new();
        let mut p = self.clone();
        let mut zero_mult = 0;
        while p.c.first().is_some_and(|v| v.is_zero()) {
            p.c.remove(0);
            zero_mult += 1;
        }
        if zero_mult > 0 {
            out.push((Rational::zero(), zero_mult));
        }
        if p.degree().unwrap_or(0) == 0 {
            return Ok(out);
        }
        let ints = integer_coefficients(&p.c);
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let ps = divisors(&a0)?;
        let qs = divisors(&an)?;
        let mut cands: Vec<Rational> = Vec::new();
        for pp in &ps {
            for qq in &qs {
                for s in [1i64, -1] {
                    let r = Rational::new(pp * BigInt::from(s), qq.clone());
                    if !cands.contains(&r) {
                        cands.push(r);
                    }
                }
            }
        }
        cands.sort();
        for r in cands {
            let mut m = 0;
            while p.degree().unwrap_or(0) > 0 && p.eval(&r).is_zero() {
                p = p.deflate(&r);
                m += 1;
            }
            if m > 0 {
                out.push((r, m));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Quotient by all rational linear factors.
    pub fn without_rational_roots(&self) -> Result<UniPoly> {
        let mut p = self.clone();
        for (r, m) in self.rational_roots()? {
            for _ in 0..m {
                p = p.deflate(&r);
            }
        }
        Ok(p.monic())
    }
}

fn integer_coefficients(c: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for v in c {
        l = l.lcm(v.denom());
    }
    let ints: Vec<BigInt> = c.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    ints.into_iter().map(|v| v / &g).collect()
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.to_u64().filter(|&v| v <= DIVISOR_LIMIT).ok_or_else(|| {
        Error::Indeterminate(format!("coefficient {n} too large for rational root search"))
    })?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Ok(small)
}

/// Rational roots of a polynomial in which at most one variable occurs.
pub fn rational_roots(f: &Poly) -> Result<Vec<(Rational, u32)>> {
    let sv = f.support_vars();
    if sv.len() > 1 {
        return Err(Error::pre(format!("`{f}` is not univariate")));
    }
    let i = sv.first().copied().unwrap_or(0);
    if f.nvars() == 0 {
        return Ok(vec![]);
    }
    UniPoly::from_poly(f, i)?.rational_roots()
}

/// Sylvester resultant of `f` and `g` with respect to variable `v`.
///
/// Rows of `f` come first, each listing coefficients from the top degree
/// down. With `deg_v f = 0` the result is `f^{deg_v g}`. For instance
/// `res_y(y^2 - x^3, 2y) = -4x^3` and `res_y(y - x, y + x) = 2x`.
pub fn resultant(f: &Poly, g: &Poly, v: usize) -> Result<Poly> {
    if f.vars() != g.vars() {
        return Err(Error::VariableMismatch(f.vars().joined(), g.vars().joined()));
    }
    let vars = f.vars().clone();
    if f.is_zero() || g.is_zero() {
        return Ok(Poly::zero(&vars));
    }
    let fc = f.coefficients_in(v);
    let gc = g.coefficients_in(v);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let size = m + n;
    if size == 0 {
        return Ok(Poly::one(&vars));
    }
    let zero = Poly::zero(&vars);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = fc[m - k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = gc[n - k].clone();
        }
    }
    Ok(bareiss_det(mat))
}

/// Fraction-free determinant of a square polynomial matrix.
pub fn bareiss_det(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    let vars = a[0][0].vars().clone();
    let mut sign = 1i64;
    let mut prev = Poly::one(&vars);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Poly::zero(&vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero(&vars);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -&d
    } else {
        d
    }
}
