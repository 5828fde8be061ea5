//! Pullback to the degeneration space and to the slice charts.
//!
//! With reduced weights `w̄`, the substitution is `x_i = t^{w̄_i} x̃_i` and
//! `∂_{x_i} = t^{−w̄_i} ∂_{x̃_i}`. A `j`-vector `ξ` corresponds to the
//! `(j+1)`-vector `Ẽ∧ξ̃` with `Ẽ = t∂_t − Σ w̄_i x̃_i ∂_{x̃_i}`; it is regular
//! on the blowup iff no negative power of `t` survives. On the slice
//! `x̃_i = 1` the chart field is `−(1/w̄_i) ι_{dx̃_i}(Ẽ∧ξ̃)`.

use crate::centre::Centre;
use crate::polyvector::Polyvector;
use crate::ring::{Monomial, Poly, Rational, Vars};
use crate::{Error, Result};

/// `t^shift · body` with `body` polynomial and not divisible by `t`
/// (unless zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent<T> {
    pub shift: i64,
    pub body: T,
}

/// A chart of the blowup: the slice `x̃_i = 1` with residual cyclic group
/// of order `w̄_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceChart {
    pub slice_var: usize,
    pub residual_order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionPullback {
    /// Chart variables followed by the exceptional parameter `t`.
    pub vars: Vars,
    pub t_index: usize,
    /// `m = ord_C f / gcd(w)`.
    pub t_power: i64,
    /// Strict transform `f̃ / t^m` on the degeneration space.
    pub proper: Poly,
    pub reduced: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyvectorPullback {
    pub vars: Vars,
    pub t_index: usize,
    /// `ξ̃` with the power of `t` factored out.
    pub lifted: Laurent<Polyvector>,
    /// `Ẽ∧ξ̃`.
    pub euler_wedge: Laurent<Polyvector>,
    /// Minimal `t`-exponent of `Ẽ∧ξ̃`; `None` when `ξ = 0`.
    pub min_t_exponent: Option<i64>,
    pub regular: bool,
    pub exceptional_tangent: bool,
    pub reduced: Vec<i64>,
}

fn split_t(p: &Poly, t: usize) -> Option<i64> {
    p.terms().map(|(m, _)| m.exp(t) as i64).min()
}

/// Divide out `t^k` from every term (`k ≤` minimal exponent).
fn divide_t(p: &Poly, t: usize, k: i64) -> Poly {
    Poly::from_terms(
        p.vars(),
        p.terms().map(|(m, c)| {
            let mut mm = *m;
            mm.set(t, (m.exp(t) as i64 - k) as u32);
            (mm, c.clone())
        }),
    )
}

fn normalise_pv(shift: i64, body: Polyvector, t: usize) -> Laurent<Polyvector> {
    let min = body.terms().filter_map(|(_, c)| split_t(c, t)).min();
    match min {
        None => Laurent { shift: 0, body },
        Some(k) => {
            let b = body.map_coefficients(|c| divide_t(c, t, k));
            Laurent { shift: shift + k, body: b }
        }
    }
}

/// Raw pullback `x^m ↦ t^{w̄·m} x^m` of a centred polynomial, embedded in
/// the extended chart.
fn substitute_monomials(f: &Poly, ext: &Vars, t: usize, reduced: &[i64], offset: i64) -> (Poly, i64) {
    let mut terms = Vec::new();
    let mut min = i64::MAX;
    for (m, c) in f.terms() {
        let e: i64 = (0..f.nvars()).map(|i| reduced[i] * m.exp(i) as i64).sum::<i64>() + offset;
        min = min.min(e);
        terms.push((m, c, e));
    }
    if terms.is_empty() {
        return (Poly::zero(ext), 0);
    }
    let p = Poly::from_terms(
        ext,
        terms.into_iter().map(|(m, c, e)| {
            let mut mm = *m;
            mm.set(t, (e - min) as u32);
            (mm, c.clone())
        }),
    );
    (p, min)
}

/// Strict transform of `f` on the degeneration space.
pub fn pullback_function(f: &Poly, c: &Centre) -> Result<FunctionPullback> {
    let wd = c.weight_data()?;
    if f.is_zero() {
        return Err(Error::pre("pullback of the zero function"));
    }
    let g = c.centred_poly(f);
    let (ext, t) = f.vars().with_extra("t")?;
    let (proper, m) = substitute_monomials(&g, &ext, t, &wd.reduced, 0);
    let proper = proper.with_cap(f.cap());
    Ok(FunctionPullback { vars: ext, t_index: t, t_power: m, proper, reduced: wd.reduced })
}

/// `Ẽ = t∂_t − Σ w̄_i x̃_i ∂_{x̃_i}` on the extended chart.
pub fn tilde_euler(ext: &Vars, t: usize, reduced: &[i64]) -> Polyvector {
    let mut e = Polyvector::zero(ext, 1);
    e.add_term(vec![t], Poly::var(ext, t));
    for (i, &w) in reduced.iter().enumerate() {
        if w != 0 {
            e.add_term(vec![i], Poly::var(ext, i).scale(&Rational::from_integer((-w).into())));
        }
    }
    e
}

/// Lift of a polyvector to the degeneration space with regularity and
/// exceptional tangency read off the `t`-exponents.
pub fn pullback_polyvector(xi: &Polyvector, c: &Centre) -> Result<PolyvectorPullback> {
    let wd = c.weight_data()?;
    let g = c.centred_polyvector(xi);
    let (ext, t) = xi.vars().with_extra("t")?;
    let mut pieces = Vec::new();
    let mut min = i64::MAX;
    for (idx, coef) in g.terms() {
        let off: i64 = -idx.iter().map(|&i| wd.reduced[i]).sum::<i64>();
        let (p, m) = substitute_monomials(coef, &ext, t, &wd.reduced, off);
        if !p.is_zero() {
            min = min.min(m);
            pieces.push((idx.clone(), p, m));
        }
    }
    let mut body = Polyvector::zero(&ext, xi.degree());
    for (idx, p, m) in pieces {
        let lift = Poly::monomial(&ext, {
            let mut mm = Monomial::one();
            mm.set(t, (m - min) as u32);
            mm
        }, Rational::from_integer(1.into()));
        body.add_term(idx, &p * &lift);
    }
    let shift = if min == i64::MAX { 0 } else { min };
    let lifted = normalise_pv(shift, body, t);
    let e = tilde_euler(&ext, t, &wd.reduced);
    let ew_body = e.wedge(&lifted.body)?;
    let euler_wedge = normalise_pv(lifted.shift, ew_body, t);
    let min_t_exponent = if euler_wedge.body.is_zero() { None } else { Some(euler_wedge.shift) };
    let regular = min_t_exponent.is_none_or(|k| k >= 0);
    let dt_min = euler_wedge
        .body
        .terms()
        .filter(|(idx, _)| idx.contains(&t))
        .filter_map(|(_, p)| split_t(p, t))
        .min()
        .map(|k| k + euler_wedge.shift);
    let exceptional_tangent = regular && dt_min.is_none_or(|k| k >= 1);
    Ok(PolyvectorPullback {
        vars: ext,
        t_index: t,
        lifted,
        euler_wedge,
        min_t_exponent,
        regular,
        exceptional_tangent,
        reduced: wd.reduced,
    })
}

/// One slice per variable of positive weight.
pub fn slice_charts(c: &Centre) -> Result<Vec<SliceChart>> {
    let wd = c.weight_data()?;
    Ok((0..wd.reduced.len())
        .filter(|&i| wd.reduced[i] > 0)
        .map(|i| SliceChart { slice_var: i, residual_order: wd.reduced[i] })
        .collect())
}

/// Strict transform in a slice chart (`x̃_i = 1`).
pub fn chart_function(pb: &FunctionPullback, chart: &SliceChart) -> Poly {
    pb.proper.restrict(chart.slice_var, &Rational::from_integer(1.into()))
}

/// The lifted polyvector in a slice chart; errors when it has a pole.
pub fn chart_polyvector(pb: &PolyvectorPullback, chart: &SliceChart) -> Result<Polyvector> {
    let i = chart.slice_var;
    let one = Rational::from_integer(1.into());
    let contracted = pb.euler_wedge.body.contract_var(i);
    let scale = Rational::new((-1).into(), chart.residual_order.into());
    let eta = contracted.map_coefficients(|c| c.restrict(i, &one).scale(&scale));
    let l = normalise_pv(pb.euler_wedge.shift, eta, pb.t_index);
    if l.body.is_zero() {
        return Ok(l.body);
    }
    if l.shift < 0 {
        return Err(Error::Certification(format!(
            "lifted field has a pole t^{} in the chart x̃_{} = 1",
            l.shift,
            pb.vars.name(i)
        )));
    }
    let tpow = Poly::monomial(&pb.vars, {
        let mut mm = Monomial::one();
        mm.set(pb.t_index, l.shift as u32);
        mm
    }, one);
    Ok(l.body.scale_poly(&tpow))
}

/// Images sending the extended chart `(x, t)` with `x_i = 1` onto the
/// original variable list, `t` taking the place of the slice variable.
fn slice_images(ext: &Vars, t: usize, slice: usize, target: &Vars) -> Vec<Poly> {
    (0..ext.len())
        .map(|k| {
            if k == t {
                Poly::var(target, slice)
            } else if k == slice {
                Poly::one(target)
            } else {
                Poly::var(target, k)
            }
        })
        .collect()
}

/// A chart function on the original variable names, `t` renamed to the
/// slice variable.
pub fn to_slice_vars(p: &Poly, t: usize, slice: usize, target: &Vars) -> Poly {
    p.substitute(&slice_images(p.vars(), t, slice, target)).expect("chart variables").with_cap(p.cap())
}

/// A chart polyvector on the original variable names. The chart field has
/// no `∂_{x_i}` component, so `∂_t` takes its place.
pub fn to_slice_vars_pv(xi: &Polyvector, t: usize, slice: usize, target: &Vars) -> Result<Polyvector> {
    let imgs = slice_images(xi.vars(), t, slice, target);
    let mut out = Polyvector::zero(target, xi.degree());
    for (idx, c) in xi.terms() {
        if idx.contains(&slice) {
            return Err(Error::pre("chart field has a component along the slice variable"));
        }
        let mapped: Vec<usize> = idx.iter().map(|&k| if k == t { slice } else { k }).collect();
        let sign = crate::ring::permutation_sign(&mapped);
        let mut sorted = mapped;
        sorted.sort_unstable();
        let c = c.substitute(&imgs)?.scale(&Rational::from_integer(sign.into()));
        out.add_term(sorted, c);
    }
    Ok(out)
}
