//! Polyvector fields with polynomial coefficients, the Schouten bracket
//! and Poisson/tangency checks.

pub mod lie;

use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::ring::parse::parse_graded;
use crate::ring::rational::fmt_rational;
use crate::ring::{ideal_contains, merge_indices, Monomial, Poly, Rational, Vars};
use crate::{Error, Result};

pub use lie::{classify_lie, linearize, Lie3Class, LieAlgebra, LieSummary};

/// A `j`-vector field `Σ_I ξ^I ∂_I` over strictly increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyvector {
    vars: Vars,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Poly>,
}

impl Polyvector {
    pub fn zero(vars: &Vars, degree: usize) -> Self {
        Polyvector { vars: vars.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn from_poly(f: &Poly) -> Self {
        let mut p = Polyvector::zero(f.vars(), 0);
        p.add_term(vec![], f.clone());
        p
    }

    /// `c · ∂_{idx}` with `idx` in any order (sign applied).
    pub fn basis(vars: &Vars, idx: &[usize], c: Poly) -> Self {
        let mut p = Polyvector::zero(vars, idx.len());
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return p;
        }
        let s = crate::ring::permutation_sign(idx);
        p.add_term(sorted, c.scale(&Rational::from_integer(s.into())));
        p
    }

    /// `∂_1∧…∧∂_n`.
    pub fn volume(vars: &Vars) -> Self {
        let idx: Vec<usize> = (0..vars.len()).collect();
        Polyvector::basis(vars, &idx, Poly::one(vars))
    }

    /// Parse a homogeneous polyvector; `0` parses with degree `default_degree`.
    pub fn parse_with_degree(text: &str, vars: &Vars, default_degree: usize) -> Result<Self> {
        let g = parse_graded(text, vars)?;
        let degs: Vec<usize> = g.keys().map(|k| k.len()).collect();
        let degree = match degs.first() {
            Some(&d) => d,
            None => default_degree,
        };
        if degs.iter().any(|&d| d != degree) {
            return Err(Error::parse(0, "polyvector terms of mixed degree"));
        }
        let mut p = Polyvector::zero(vars, degree);
        for (k, v) in g {
            p.add_term(k, v);
        }
        Ok(p)
    }

    /// Parse a bivector (the default degree for `0`).
    pub fn parse(text: &str, vars: &Vars) -> Result<Self> {
        Polyvector::parse_with_degree(text, vars, 2)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &[usize]) -> Poly {
        self.terms.get(idx).cloned().unwrap_or_else(|| Poly::zero(&self.vars))
    }

    /// Coefficients of all terms, in index order.
    pub fn coefficients(&self) -> Vec<Poly> {
        self.terms.values().cloned().collect()
    }

    /// Smallest cap among the coefficients.
    pub fn cap(&self) -> Option<u32> {
        self.terms.values().filter_map(|p| p.cap()).min()
    }

    pub fn with_cap(&self, cap: Option<u32>) -> Self {
        self.map_coefficients(|p| p.clone().with_cap(cap))
    }

    pub fn add_term(&mut self, idx: Vec<usize>, c: Poly) {
        debug_assert_eq!(idx.len(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(idx, s);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    /// Bracket `{x_i, x_j}` of a bivector, with the antisymmetric sign.
    pub fn bracket_coeff(&self, i: usize, j: usize) -> Poly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coeff(&[i, j]),
            std::cmp::Ordering::Greater => -&self.coeff(&[j, i]),
            std::cmp::Ordering::Equal => Poly::zero(&self.vars),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut p = Polyvector::zero(&self.vars, self.degree);
        for (k, v) in &self.terms {
            p.add_term(k.clone(), f(v));
        }
        p
    }

    pub fn try_map_coefficients(&self, vars: &Vars, f: impl Fn(&Poly) -> Result<Poly>) -> Result<Self> {
        let mut p = Polyvector::zero(vars, self.degree);
        for (k, v) in &self.terms {
            p.add_term(k.clone(), f(v)?);
        }
        Ok(p)
    }

    pub fn scale_poly(&self, g: &Poly) -> Self {
        self.map_coefficients(|c| c * g)
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|c| -c)
    }

    pub fn translate(&self, point: &[Rational]) -> Self {
        self.map_coefficients(|c| c.translate(point))
    }

    /// Same terms over another list of equal length.
    pub fn relabel(&self, vars: &Vars) -> Self {
        let mut p = Polyvector::zero(vars, self.degree);
        for (k, v) in &self.terms {
            p.add_term(k.clone(), v.relabel(vars));
        }
        p
    }

    /// Embed into a variable list extending this one.
    pub fn extend_vars(&self, vars: &Vars) -> Self {
        let mut p = Polyvector::zero(vars, self.degree);
        for (k, v) in &self.terms {
            p.add_term(k.clone(), v.extend_vars(vars));
        }
        p
    }

    fn check(&self, other: &Polyvector) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(self.vars.joined(), other.vars.joined()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polyvector) -> Result<Self> {
        self.check(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::pre("adding polyvectors of different degree"));
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut p = self.clone();
        for (k, v) in &other.terms {
            p.add_term(k.clone(), v.clone());
        }
        Ok(p)
    }

    pub fn sub(&self, other: &Polyvector) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn wedge(&self, other: &Polyvector) -> Result<Self> {
        self.check(other)?;
        let mut p = Polyvector::zero(&self.vars, self.degree + other.degree);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some((idx, s)) = merge_indices(i, j) {
                    let c = a * b;
                    p.add_term(idx, if s < 0 { -&c } else { c });
                }
            }
        }
        Ok(p)
    }

    /// Left contraction `ι_{dx_i}`.
    pub fn contract_var(&self, i: usize) -> Self {
        let mut p = Polyvector::zero(&self.vars, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return p;
        }
        for (k, v) in &self.terms {
            if let Some(pos) = k.iter().position(|&a| a == i) {
                let mut rest = k.clone();
                rest.remove(pos);
                p.add_term(rest, if pos % 2 == 1 { -v } else { v.clone() });
            }
        }
        p
    }

    /// `ι_{df}`.
    pub fn contract(&self, f: &Poly) -> Result<Self> {
        if f.vars() != &self.vars {
            return Err(Error::VariableMismatch(self.vars.joined(), f.vars().joined()));
        }
        let mut p = Polyvector::zero(&self.vars, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return Ok(p);
        }
        for i in 0..self.nvars() {
            let d = f.derivative(i);
            if d.is_zero() {
                continue;
            }
            let c = self.contract_var(i).scale_poly(&d);
            p = p.add(&c)?;
        }
        Ok(p)
    }

    /// Right derivative with respect to the odd variable `θ_i = ∂_i`.
    fn right_theta(&self, i: usize) -> Self {
        let mut p = Polyvector::zero(&self.vars, self.degree.saturating_sub(1));
        for (k, v) in &self.terms {
            if let Some(pos) = k.iter().position(|&a| a == i) {
                let mut rest = k.clone();
                rest.remove(pos);
                let after = k.len() - 1 - pos;
                p.add_term(rest, if after % 2 == 1 { -v } else { v.clone() });
            }
        }
        p
    }

    fn derivative(&self, i: usize) -> Self {
        self.map_coefficients(|c| c.derivative(i))
    }

    /// Linear part of the coefficients at the origin.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.map_coefficients(|c| c.homogeneous_part(d))
    }

    /// Vanishes at a point?
    pub fn vanishes_at(&self, point: &[Rational]) -> bool {
        self.terms.values().all(|c| c.eval(point).is_zero())
    }

    /// Push forward along a coordinate change. `new_in_old[a]` expresses
    /// the new coordinate `y_a` in the old chart, `old_in_new[i]` the old
    /// coordinate `x_i` in the new chart (over `new_vars`).
    pub fn change_coordinates(&self, new_in_old: &[Poly], old_in_new: &[Poly], new_vars: &Vars) -> Result<Self> {
        let n = self.nvars();
        if new_in_old.len() != n || old_in_new.len() != n {
            return Err(Error::pre("coordinate change must be square"));
        }
        let jac: Vec<Vec<Poly>> = new_in_old.iter().map(|y| (0..n).map(|i| y.derivative(i)).collect()).collect();
        let mut out = Polyvector::zero(new_vars, self.degree);
        for target in subsets(n, self.degree) {
            let mut acc = Poly::zero(&self.vars);
            for (src, c) in &self.terms {
                let minor: Vec<Vec<Poly>> =
                    target.iter().map(|&a| src.iter().map(|&i| jac[a][i].clone()).collect()).collect();
                acc = &acc + &(c * &leibniz_det(&minor, &self.vars));
            }
            let acc = acc.substitute(old_in_new)?;
            out.add_term(target, acc);
        }
        Ok(out)
    }

    /// Push forward under the linear change `x_i = Σ_j a[i][j] y_j`, the
    /// same substitution as [`Poly::linear_change`]: brackets of `f∘A`
    /// and `g∘A` are `{f, g}∘A`.
    pub fn linear_change(&self, a: &[Vec<Rational>]) -> Result<Self> {
        let inv = crate::ring::linalg::inverse(&a.to_vec()).ok_or_else(|| Error::pre("singular change"))?;
        let lin = |m: &[Vec<Rational>]| -> Vec<Poly> {
            m.iter()
                .map(|row| {
                    Poly::from_terms(&self.vars, row.iter().enumerate().map(|(j, c)| (Monomial::var(j), c.clone())))
                })
                .collect()
        };
        self.change_coordinates(&lin(&inv), &lin(a), &self.vars)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn leibniz_det(m: &[Vec<Poly>], vars: &Vars) -> Poly {
    let k = m.len();
    if k == 0 {
        return Poly::one(vars);
    }
    let mut acc = Poly::zero(vars);
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, &mut |p| {
        let s = crate::ring::permutation_sign(p);
        let mut t = Poly::constant(vars, Rational::from_integer(s.into()));
        for (r, &c) in p.iter().enumerate() {
            t = &t * &m[r][c];
            if t.is_zero() {
                return;
            }
        }
        acc = &acc + &t;
    });
    acc
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Schouten–Nijenhuis bracket, with `[X, f] = X(f)`, the Lie bracket on
/// vector fields, and `[∂_1∧∂_2∧∂_3, f] = ι_{df}(∂_1∧∂_2∧∂_3)`:
///
/// `[P, Q] = Σ_i (P ∂⃖_{θ_i}) ∧ ∂_i Q − (−1)^{(p−1)(q−1)} (Q ∂⃖_{θ_i}) ∧ ∂_i P`.
pub fn schouten(p: &Polyvector, q: &Polyvector) -> Result<Polyvector> {
    p.check(q)?;
    let deg = (p.degree + q.degree).checked_sub(1);
    let Some(deg) = deg else { return Ok(Polyvector::zero(&p.vars, 0)) };
    let mut out = Polyvector::zero(&p.vars, deg);
    let eps_odd = ((p.degree as i64 - 1) * (q.degree as i64 - 1)).rem_euclid(2) == 1;
    for i in 0..p.nvars() {
        let a = p.right_theta(i).wedge(&q.derivative(i))?;
        let b = q.right_theta(i).wedge(&p.derivative(i))?;
        out = out.add(&a)?;
        out = if eps_odd { out.add(&b)? } else { out.sub(&b)? };
    }
    Ok(out)
}

/// `[∂_x∧∂_y∧∂_z, f] = f_x ∂_y∧∂_z + f_y ∂_z∧∂_x + f_z ∂_x∧∂_y`.
pub fn jacobian_poisson(f: &Poly) -> Polyvector {
    schouten(&Polyvector::volume(f.vars()), &Polyvector::from_poly(f)).expect("same variables")
}

/// Poisson check with certificate `[σ, σ]`.
pub fn is_poisson(sigma: &Polyvector) -> (bool, Polyvector) {
    let c = schouten(sigma, sigma).expect("same variables");
    (c.is_zero(), c)
}

/// Tangency to the hypersurface `f = 0`: every coefficient of `ι_{df}ξ`
/// is divisible by `f`.
pub fn is_tangent(xi: &Polyvector, f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::pre("tangency to the zero function"));
    }
    let c = xi.contract(f)?;
    Ok(c.terms.values().all(|v| v.div_exact(f).is_some()))
}

/// Tangency to `V(J)` for `J = (gens)`: `ι_{dg}ξ ∈ J` coefficientwise for
/// each generator. `None` when membership cannot be decided.
pub fn is_tangent_ideal(xi: &Polyvector, gens: &[Poly]) -> Result<Option<bool>> {
    let mut undecided = false;
    for g in gens {
        let c = xi.contract(g)?;
        for v in c.terms.values() {
            match ideal_contains(gens, v) {
                Some(true) => {}
                Some(false) => return Ok(Some(false)),
                None => undecided = true,
            }
        }
    }
    Ok(if undecided { None } else { Some(true) })
}

fn fmt_term(coef: &Poly, basis: &str, first: bool) -> String {
    let single = coef.len() == 1;
    let (neg, body) = if single {
        let (m, c) = coef.terms().next().expect("one term");
        let a = c.abs();
        let mono = if m.degree() == 0 { None } else { Some(m.render(coef.vars())) };
        let s = match (a.is_one(), mono) {
            (true, None) => basis.to_string(),
            (true, Some(mm)) => format!("{mm}*{basis}"),
            (false, None) => format!("{}*{basis}", fmt_rational(&a)),
            (false, Some(mm)) => format!("{}*{mm}*{basis}", fmt_rational(&a)),
        };
        (c.is_negative(), s)
    } else {
        (false, format!("({coef})*{basis}"))
    };
    match (first, neg) {
        (true, false) => body,
        (true, true) => format!("-{body}"),
        (false, false) => format!(" + {body}"),
        (false, true) => format!(" - {body}"),
    }
}

impl fmt::Display for Polyvector {
    /// Bivectors on three variables print in the cyclic basis
    /// `∂y∧∂z, ∂z∧∂x, ∂x∧∂y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.degree == 0 {
            return write!(f, "{}", self.coeff(&[]));
        }
        let name = |i: usize| format!("@{}", self.vars.name(i));
        let mut items: Vec<(Poly, String)> = Vec::new();
        if self.degree == 2 && self.nvars() == 3 {
            for (i, j) in [(1, 2), (2, 0), (0, 1)] {
                let c = self.bracket_coeff(i, j);
                if !c.is_zero() {
                    items.push((c, format!("{}^{}", name(i), name(j))));
                }
            }
        } else {
            for (k, v) in &self.terms {
                let b: Vec<String> = k.iter().map(|&i| name(i)).collect();
                items.push((v.clone(), b.join("^")));
            }
        }
        for (n, (c, b)) in items.iter().enumerate() {
            write!(f, "{}", fmt_term(c, b, n == 0))?;
        }
        Ok(())
    }
}
