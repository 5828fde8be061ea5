//! Symbolic verification of the formal normal forms of Poisson triples.
//!
//! Each family is built as a polyvector with coefficients truncated to
//! degree at most `cap`; the Poisson check is then exact in degrees below
//! `cap`.

use num_traits::{One, Zero};

use super::surface::{classify_surface, quasi_homogeneous_exponents};
use super::triple::detect_duval_point;
use super::{vanish_on_line, DEFAULT_CAP};
use crate::centre::Centre;
use crate::polyvector::{is_poisson, is_tangent, is_tangent_ideal, jacobian_poisson, schouten, Polyvector};
use crate::ring::{int, ExtRational, Monomial, Poly, Rational, UniPoly, Vars};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum NormalForm {
    /// `(x∂x + z^{k+1}/(1+λz^k) ∂z)∧∂y`.
    SplitLog { k: u32, lambda: Rational },
    /// `(x + A(f))∂y∧∂z + [∂x∧∂y∧∂z, B(f)]` with `f = f(y,z)`.
    HeisenbergPencil { f: Poly, a: UniPoly, b: UniPoly },
    /// `σ₀ + W·A(W)∂y∧∂z` with `W = x² − y²z` and `σ₀ = J(W)`.
    WhitneyFamily { a: UniPoly },
    /// `g·J(f)` with `g(0) = 1`.
    DuvalFamily { f: Poly, g: Poly },
}

impl NormalForm {
    pub fn kind(&self) -> &'static str {
        match self {
            NormalForm::SplitLog { .. } => "split_log",
            NormalForm::HeisenbergPencil { .. } => "heisenberg_pencil",
            NormalForm::WhitneyFamily { .. } => "whitney_family",
            NormalForm::DuvalFamily { .. } => "duval_family",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NormalFormReport {
    pub kind: &'static str,
    pub sigma: Polyvector,
    pub cap: u32,
    /// `[σ,σ] = 0` in degrees `< cap`.
    pub poisson: bool,
    pub leading_term: bool,
    pub tangency: bool,
    /// Family-specific checks.
    pub extra: Vec<(String, bool)>,
}

impl NormalFormReport {
    pub fn certified(&self) -> bool {
        self.poisson && self.leading_term && self.tangency && self.extra.iter().all(|(_, ok)| *ok)
    }
}

/// `u(p)` by Horner's rule.
pub fn compose(u: &UniPoly, p: &Poly) -> Poly {
    let mut out = Poly::zero(p.vars());
    for c in u.coeffs().iter().rev() {
        out = &(&out * p) + &Poly::constant(p.vars(), c.clone());
    }
    out
}

fn capped_pv(s: &Polyvector, cap: u32) -> Polyvector {
    s.map_coefficients(|c| c.clone().with_cap(Some(cap + 1)))
}

fn poisson_below(s: &Polyvector, cap: u32) -> bool {
    let b = schouten(s, s).expect("same variables");
    let ok = b.terms().all(|(_, c)| c.truncated(cap).is_zero());
    ok
}

fn unweighted(vars: &Vars) -> Centre {
    Centre::new(vars, vec![ExtRational::int(1); vars.len()], None).expect("valid centre")
}

fn pure(vars: &Vars, i: usize, e: u32) -> Poly {
    let mut m = Monomial::one();
    m.set(i, e);
    Poly::monomial(vars, m, Rational::one())
}

/// For `σ = (x + g)∂y∧∂z + [μ, h]` with `g, h` functions of `y, z`: the
/// Poisson verdict and whether `dg∧dh = 0`.
pub fn heisenberg_criterion(g: &Poly, h: &Poly) -> Result<(bool, bool)> {
    let vars = g.vars();
    let x = Poly::var(vars, 0);
    let mut s = Polyvector::zero(vars, 2);
    s.add_term(vec![1, 2], &x + g);
    let s = s.add(&jacobian_poisson(h))?;
    let dgdh = &(&g.derivative(1) * &h.derivative(2)) - &(&g.derivative(2) * &h.derivative(1));
    Ok((is_poisson(&s).0, dgdh.is_zero()))
}

fn vanishing_order(u: &UniPoly) -> usize {
    u.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(usize::MAX)
}

/// Build the family member and certify it at `cap`.
pub fn verify_normal_form(nf: &NormalForm, cap: u32) -> Result<NormalFormReport> {
    let v = Vars::xyz();
    let (x, y, z) = (Poly::var(&v, 0), Poly::var(&v, 1), Poly::var(&v, 2));
    let mut extra = Vec::new();
    let (sigma, poisson, leading_term, tangency) = match nf {
        NormalForm::SplitLog { k, lambda } => {
            let k = *k;
            if k == 0 {
                return Err(Error::pre("split_log needs k > 0"));
            }
            if cap <= k + 1 {
                return Err(Error::Refused(format!("cap {cap} cannot see the term z^{} of split_log", k + 1)));
            }
            // z^{k+1} Σ_j (−λ z^k)^j up to degree cap.
            let mut series = Poly::zero(&v);
            let step = pure(&v, 2, k).scale(&-lambda.clone());
            let mut term = pure(&v, 2, k + 1);
            while !term.is_zero() && term.min_degree().unwrap_or(0) <= cap {
                series = &series + &term;
                if lambda.is_zero() {
                    break;
                }
                term = (&term * &step).truncated(cap + 1);
            }
            let mut s = Polyvector::zero(&v, 2);
            s.add_term(vec![0, 1], x.clone());
            s.add_term(vec![1, 2], -&series);
            let s = capped_pv(&s, cap);
            let lt = unweighted(&v).leading_term_polyvector(&s)?;
            let want = Polyvector::parse("x*@x^@y", &v)?;
            let tan = is_tangent(&s, &x)? && is_tangent(&s, &z)?;
            let p = poisson_below(&s, cap);
            (s, p, lt == want, tan)
        }
        NormalForm::HeisenbergPencil { f, a, b } => {
            let f = f.relabel(&v);
            if f.degree_in(0).unwrap_or(0) > 0 {
                return Err(Error::pre("the pencil function must not involve x"));
            }
            if vanishing_order(a) < 1 || vanishing_order(b) < 1 {
                return Err(Error::pre("A and B must vanish at 0"));
            }
            let g = compose(a, &f);
            let h = compose(b, &f);
            let mut s = Polyvector::zero(&v, 2);
            s.add_term(vec![1, 2], &x + &g);
            let s = s.add(&jacobian_poisson(&h))?;
            let lt = unweighted(&v).leading_term_polyvector(&s)?;
            let want = Polyvector::parse("x*@y^@z", &v)?;
            let (p, crit) = heisenberg_criterion(&g, &h)?;
            extra.push(("poisson agrees with dA(f)∧dB(f) = 0".to_string(), p == crit));
            // The control pair (y², z³) is not functionally dependent.
            let (cp, cc) = heisenberg_criterion(&(&y * &y), &(&(&z * &z) * &z))?;
            extra.push(("control pair is neither Poisson nor dependent".to_string(), !cp && !cc));
            // (x + A(f), f) = (x, f) since A(0) = 0; tangency is only
            // claimed when B ∈ f²K[f].
            let tan = if vanishing_order(b) >= 2 {
                is_tangent_ideal(&s, &[x.clone(), f.clone()])? == Some(true)
            } else {
                true
            };
            (s, p, lt == want, tan)
        }
        NormalForm::WhitneyFamily { a } => {
            let w = Poly::parse("x^2 - y^2*z", &v)?;
            let s0 = jacobian_poisson(&w);
            let mut corr = Polyvector::zero(&v, 2);
            corr.add_term(vec![1, 2], &w * &compose(a, &w));
            let s = s0.add(&corr)?;
            let c = Centre::from_ints(&v, &[Some(2), Some(3), Some(3)])?;
            let lt = c.leading_term_polyvector(&s)?;
            let tan = is_tangent(&s, &w)?;
            let line = vanish_on_line(&s.coefficients(), &[int(0), int(0), int(1)]);
            extra.push(("V(σ) contains the z-axis".to_string(), line));
            let p = poisson_below(&capped_pv(&s, cap), cap);
            (s, p, lt == s0, tan)
        }
        NormalForm::DuvalFamily { f, g } => {
            let f = f.relabel(&v);
            let g = g.relabel(&v);
            if g.constant_term() != Rational::one() {
                return Err(Error::pre("the unit must satisfy g(0) = 1"));
            }
            let s = jacobian_poisson(&f).scale_poly(&g);
            let class = classify_surface(&f, DEFAULT_CAP)?.class;
            let Some(exps) = quasi_homogeneous_exponents(&class).filter(|_| class.is_ade()) else {
                return Err(Error::pre(format!("f is {class}, not a Du Val normal form")));
            };
            let c = Centre::new(&v, exps.into_iter().map(ExtRational::Finite).collect(), None)?;
            let lt = c.leading_term_polyvector(&s)? == jacobian_poisson(&c.leading_term_poly(&f)?);
            let tan = is_tangent(&s, &f)?;
            let origin = vec![Rational::zero(); 3];
            let d = detect_duval_point(&s, &f, &origin)?;
            extra.push((format!("detected as a Du Val point of type {class}"), d.duval == Some(true)));
            let p = poisson_below(&capped_pv(&s, cap), cap);
            (s, p, lt, tan)
        }
    };
    Ok(NormalFormReport { kind: nf.kind(), sigma, cap, poisson, leading_term, tangency, extra })
}
