//! Point detectors for Poisson triples: non-nilpotent points on curves and
//! Du Val points on surfaces.

use num_traits::Zero;

use super::surface::{classify_surface, quasi_homogeneous_exponents, SingularityClass};
use super::{local_quotient_dim, DEFAULT_CAP};
use crate::centre::Centre;
use crate::polyvector::lie::{classify_lie, linearize, Lie3Class, LieSummary};
use crate::polyvector::{is_tangent, is_tangent_ideal, jacobian_poisson, Polyvector};
use crate::ring::{ExtRational, Poly, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct TripleReport {
    pub point: Vec<Rational>,
    pub lie: Option<LieSummary>,
    pub nonnilpotent: Option<bool>,
    pub surface_class: Option<SingularityClass>,
    pub duval: Option<bool>,
    /// Centre at which `lt σ` matches the Jacobian structure of `lt f`.
    pub witness_centre: Option<Centre>,
    pub isolated_sigma_zero: bool,
    pub diagnostics: Vec<String>,
}

impl TripleReport {
    fn new(point: &[Rational]) -> Self {
        TripleReport {
            point: point.to_vec(),
            lie: None,
            nonnilpotent: None,
            surface_class: None,
            duval: None,
            witness_centre: None,
            isolated_sigma_zero: false,
            diagnostics: vec![],
        }
    }
}

fn isolated_zero(sigma: &Polyvector, cap: u32) -> bool {
    let s = sigma.coefficients();
    if s.iter().any(|c| !c.constant_term().is_zero()) {
        return false;
    }
    let gens: Vec<Poly> = s.into_iter().filter(|c| !c.is_zero()).collect();
    if gens.is_empty() {
        return false;
    }
    local_quotient_dim(&gens, cap).finite().is_some()
}

/// Classify the linearisation of `σ` at `p` for a curve triple
/// `(X, Y = V(gens), σ)`.
pub fn detect_nonnilpotent_point(sigma: &Polyvector, gens: &[Poly], p: &[Rational]) -> Result<TripleReport> {
    match is_tangent_ideal(sigma, gens)? {
        Some(true) => {}
        Some(false) => return Err(Error::pre("σ is not tangent to the curve")),
        None => return Err(Error::Indeterminate("tangency to the curve could not be decided".into())),
    }
    if !sigma.vanishes_at(p) {
        return Err(Error::pre("σ does not vanish at the point"));
    }
    let mut rep = TripleReport::new(p);
    let lie = classify_lie(&linearize(sigma, p)?);
    if lie.class == Lie3Class::Other {
        rep.diagnostics.push(format!("dim[h,h] = {} ≥ 2 cannot occur on a curve triple", lie.derived_dim));
    }
    rep.nonnilpotent = Some(lie.class == Lie3Class::SplitNonabelian);
    rep.isolated_sigma_zero = isolated_zero(&sigma.translate(p), DEFAULT_CAP);
    rep.lie = Some(lie);
    Ok(rep)
}

/// Whether `lt_C σ = λ·J(lt_C f)` for some `λ ≠ 0`.
fn leading_terms_match(sigma: &Polyvector, f: &Poly, c: &Centre) -> Result<bool> {
    let lf = c.leading_term_poly(f)?;
    let j = jacobian_poisson(&lf);
    let ls = c.leading_term_polyvector(sigma)?;
    let Some((idx, coef)) = j.terms().next() else { return Ok(false) };
    let (m, a) = coef.leading().expect("nonzero coefficient");
    let b = ls.coeff(idx).coeff(m);
    if b.is_zero() {
        return Ok(false);
    }
    let lambda = &b / a;
    Ok(ls == j.map_coefficients(|p| p.scale(&lambda)))
}

fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Du Val test for a surface triple `(X, f = 0, σ)` at `p`: isolated zero of
/// `σ`, an ADE point of `f`, and the leading term of `σ` at the weights of
/// the class equal to the Jacobian structure of the leading form of `f`.
pub fn detect_duval_point(sigma: &Polyvector, f: &Poly, p: &[Rational]) -> Result<TripleReport> {
    if f.nvars() != 3 {
        return Err(Error::pre("Du Val detection needs three variables"));
    }
    if !f.eval(p).is_zero() {
        return Err(Error::pre("f does not vanish at the point"));
    }
    if !is_tangent(sigma, f)? {
        return Err(Error::pre("σ is not tangent to f"));
    }
    let mut rep = TripleReport::new(p);
    let s = sigma.translate(p);
    let g = f.translate(p);
    rep.isolated_sigma_zero = isolated_zero(&s, DEFAULT_CAP);
    let sr = classify_surface(&g, DEFAULT_CAP)?;
    rep.diagnostics.extend(sr.diagnostics.iter().cloned());
    let class = sr.class.clone();
    rep.surface_class = Some(class.clone());
    let mut lt_ok = false;
    if class.is_ade() {
        let exps = quasi_homogeneous_exponents(&class).expect("ADE classes have weights");
        for perm in permutations3() {
            let e: Vec<ExtRational> = perm.iter().map(|&k| ExtRational::Finite(exps[k].clone())).collect();
            let c = Centre::new(g.vars(), e, None)?;
            if c.ord(&g)? != ExtRational::int(1) {
                continue;
            }
            if leading_terms_match(&s, &g, &c)? {
                rep.witness_centre = Some(c);
                lt_ok = true;
                break;
            }
        }
        if !lt_ok {
            rep.diagnostics.push("no coordinate order of the class weights matches the leading terms".into());
        }
    }
    if !rep.isolated_sigma_zero {
        rep.diagnostics.push("σ has no isolated zero at the point".into());
    }
    rep.duval = Some(rep.isolated_sigma_zero && class.is_ade() && lt_ok);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, Vars};

    fn v() -> Vars {
        Vars::xyz()
    }
    fn p(s: &str) -> Poly {
        Poly::parse(s, &v()).unwrap()
    }
    fn pv(s: &str) -> Polyvector {
        Polyvector::parse(s, &v()).unwrap()
    }
    fn origin() -> Vec<Rational> {
        vec![int(0); 3]
    }

    #[test]
    fn curve_triples() {
        let y = [p("x"), p("y^2 - z^3")];
        let r = detect_nonnilpotent_point(&pv("x*@x^@y"), &y, &origin()).unwrap();
        assert_eq!(r.nonnilpotent, Some(true));
        assert_eq!(r.lie.unwrap().class, Lie3Class::SplitNonabelian);
        let r = detect_nonnilpotent_point(&pv("x*@y^@z"), &y, &origin()).unwrap();
        assert_eq!(r.nonnilpotent, Some(false));
        assert_eq!(r.lie.unwrap().class, Lie3Class::Heisenberg);
        let r = detect_nonnilpotent_point(&pv("x^2*@y^@z"), &y, &origin()).unwrap();
        assert_eq!(r.lie.unwrap().class, Lie3Class::Abelian);
        assert!(detect_nonnilpotent_point(&pv("@y^@z"), &y, &origin()).is_err());
    }

    #[test]
    fn duval_examples() {
        let f = p("x^2 + y^3 + z^5");
        let r = detect_duval_point(&jacobian_poisson(&f), &f, &origin()).unwrap();
        assert_eq!(r.duval, Some(true));
        let f = p("x^2 + y^2 + z^2");
        let s = jacobian_poisson(&f).scale_poly(&p("1 + x"));
        assert_eq!(detect_duval_point(&s, &f, &origin()).unwrap().duval, Some(true));
        let f = p("x^2 - y^2*z");
        let r = detect_duval_point(&jacobian_poisson(&f), &f, &origin()).unwrap();
        assert_eq!(r.duval, Some(false));
        assert!(!r.isolated_sigma_zero);
    }

    #[test]
    fn unit_multiples_are_duval() {
        let f = p("x^2 + y^2 + z^2");
        let s = jacobian_poisson(&f).scale_poly(&p("1 + x + y*z"));
        assert_eq!(detect_duval_point(&s, &f, &origin()).unwrap().duval, Some(true));
    }

    #[test]
    fn translated_point() {
        let f = p("(x-1)^2 + y^3 + z^4");
        let pt = vec![int(1), int(0), int(0)];
        let r = detect_duval_point(&jacobian_poisson(&f), &f, &pt).unwrap();
        assert_eq!(r.duval, Some(true));
        assert_eq!(r.surface_class, Some(SingularityClass::E6));
    }
}
