//! Lifting criteria along weighted blowups, the coordinate conditions on
//! a bivector, and the degeneration-space pullback.

pub mod pullback;
pub mod solve;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::centre::Centre;
use crate::polyvector::{is_poisson, Polyvector};
use crate::ring::{ExtRational, Poly, Rational};
use crate::{Error, Result};

pub use pullback::{
    chart_function, chart_polyvector, pullback_function, pullback_polyvector, slice_charts, to_slice_vars, to_slice_vars_pv, FunctionPullback, Laurent,
    PolyvectorPullback, SliceChart,
};
pub use solve::{
    common_zeros, is_smooth_plane_strict_transform, is_smooth_plane_strict_transform_on, plane_singular_points, CommonZeros,
    Smoothness,
};

/// Which condition a witness violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessTag {
    /// `ord{x_i,x_j} ≥ max(w_i, w_j)`.
    P,
    /// `ord{x_i,x_j} ≥ w_i + w_j − gcd(w)`.
    CD1,
    /// `ord(w_i x_i{x_j,x_k} + cyclic) ≥ w_i + w_j + w_k`.
    CD2,
    /// `ord{x_i,x_j} ≥ w_i + w_j`.
    CN,
    /// `ord ξ ≥ −gcd(w)`.
    ORD,
    /// `ord(E∧ξ) ≥ 0`.
    EULER,
}

/// A failed inequality with the offending indices and values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub tag: WitnessTag,
    pub indices: Vec<usize>,
    pub order: ExtRational,
    pub threshold: Rational,
}

impl Witness {
    pub fn describe(&self, c: &Centre) -> String {
        let names: Vec<&str> = self.indices.iter().map(|&i| c.vars().name(i)).collect();
        format!(
            "{:?}[{}]: order {} < {}",
            self.tag,
            names.join(","),
            self.order,
            crate::ring::fmt_rational(&self.threshold)
        )
    }
}

/// Outcome of the lifting criterion for a polyvector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftCheck {
    pub lifts: bool,
    pub exceptional_tangent: bool,
    pub order: ExtRational,
    pub euler_order: ExtRational,
    pub witnesses: Vec<Witness>,
}

/// `ξ` lifts to the weighted blowup iff `ord ξ ≥ −gcd(w)` and
/// `ord(E∧ξ) ≥ 0`; the lift is tangent to the exceptional divisor iff
/// `ord ξ ≥ 0`.
pub fn check_lift(xi: &Polyvector, c: &Centre) -> Result<LiftCheck> {
    let wd = c.weight_data()?;
    let (order, _) = c.ord_polyvector(xi)?;
    let ew = c.euler_field().wedge(xi)?;
    let (euler_order, _) = c.ord_polyvector(&ew)?;
    let mut witnesses = Vec::new();
    let neg_gcd = -wd.gcd.clone();
    if !order.ge_rat(&neg_gcd) {
        witnesses.push(Witness { tag: WitnessTag::ORD, indices: vec![], order: order.clone(), threshold: neg_gcd });
    }
    if !euler_order.ge_rat(&Rational::zero()) {
        witnesses.push(Witness {
            tag: WitnessTag::EULER,
            indices: vec![],
            order: euler_order.clone(),
            threshold: Rational::zero(),
        });
    }
    let lifts = witnesses.is_empty();
    let exceptional_tangent = lifts && order.ge_rat(&Rational::zero());
    Ok(LiftCheck { lifts, exceptional_tangent, order, euler_order, witnesses })
}

/// Coordinate conditions of a bivector with respect to a centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentreCheck {
    pub poisson: bool,
    pub codegenerate: bool,
    pub conilpotent: bool,
    pub lift_ok: bool,
    pub order: ExtRational,
    pub witnesses: Vec<Witness>,
}

impl CentreCheck {
    pub fn witness_tags(&self) -> Vec<WitnessTag> {
        let mut t: Vec<WitnessTag> = self.witnesses.iter().map(|w| w.tag).collect();
        t.dedup();
        t
    }

    pub fn first(&self, tag: WitnessTag) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.tag == tag)
    }
}

/// Evaluate (P), (CD1), (CD2), (CN) on the brackets of `σ` and the lifting
/// criterion. `codegenerate ⇔ lift_ok` is checked for every bivector; the
/// chain conilpotent ⇒ codegenerate ⇒ poisson uses `[σ,σ] = 0` and
/// codimension at least two (a divisorial centre blows up to the identity,
/// so every `σ` lifts), and is checked only then.
pub fn check_centre(sigma: &Polyvector, c: &Centre) -> Result<CentreCheck> {
    if sigma.degree() != 2 {
        return Err(Error::pre("check_centre needs a bivector"));
    }
    let wd = c.weight_data()?;
    let s = c.centred_polyvector(sigma);
    let cc = c.centred();
    let w = &wd.weights;
    let n = s.nvars();
    let mut witnesses = Vec::new();
    let (mut pw, mut cd1, mut cd2, mut cn) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        for j in i + 1..n {
            let o = cc.ord(&s.bracket_coeff(i, j))?;
            let tp = w[i].clone().max(w[j].clone());
            let t1 = &w[i] + &w[j] - &wd.gcd;
            let tn = &w[i] + &w[j];
            if !o.ge_rat(&tp) {
                pw.push(Witness { tag: WitnessTag::P, indices: vec![i, j], order: o.clone(), threshold: tp });
            }
            if !o.ge_rat(&t1) {
                cd1.push(Witness { tag: WitnessTag::CD1, indices: vec![i, j], order: o.clone(), threshold: t1 });
            }
            if !o.ge_rat(&tn) {
                cn.push(Witness { tag: WitnessTag::CN, indices: vec![i, j], order: o, threshold: tn });
            }
        }
    }
    let vars = s.vars().clone();
    let xw = |i: usize| Poly::var(&vars, i).scale(&w[i]);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let sum = &(&(&xw(i) * &s.bracket_coeff(j, k)) + &(&xw(j) * &s.bracket_coeff(k, i)))
                    + &(&xw(k) * &s.bracket_coeff(i, j));
                let o = cc.ord(&sum)?;
                let t = &w[i] + &w[j] + &w[k];
                if !o.ge_rat(&t) {
                    cd2.push(Witness { tag: WitnessTag::CD2, indices: vec![i, j, k], order: o, threshold: t });
                }
            }
        }
    }
    let poisson = pw.is_empty();
    let codegenerate = cd1.is_empty() && cd2.is_empty();
    let conilpotent = cn.is_empty();
    let lift = check_lift(sigma, c)?;
    witnesses.extend(pw);
    witnesses.extend(cd1);
    witnesses.extend(cd2);
    witnesses.extend(cn);
    witnesses.extend(lift.witnesses.iter().cloned());
    let chain_broken = (conilpotent && !codegenerate) || (codegenerate && !poisson);
    if codegenerate != lift.lifts || (chain_broken && c.support().len() >= 2 && is_poisson(sigma).0) {
        return Err(Error::Certification(format!(
            "inconsistent centre conditions: P={poisson} CD={codegenerate} CN={conilpotent} lift={}",
            lift.lifts
        )));
    }
    Ok(CentreCheck { poisson, codegenerate, conilpotent, lift_ok: lift.lifts, order: lift.order, witnesses })
}

/// Shortcut for codimension-two centres: codegenerate ⇔ Poisson ∧
/// `ord σ ≥ −gcd(w)`.
pub fn codim2_codegenerate(sigma: &Polyvector, c: &Centre) -> Result<bool> {
    let wd = c.weight_data()?;
    let chk = check_centre(sigma, c)?;
    Ok(chk.poisson && chk.order.ge_rat(&-wd.gcd))
}
