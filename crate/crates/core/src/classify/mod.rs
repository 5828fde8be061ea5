//! Local classification: Milnor numbers and isolatedness by degree-bounded
//! linear algebra, surface singularities, point detectors for Poisson
//! triples and verification of the formal normal forms.

pub mod normal_form;
pub mod surface;
pub mod triple;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::ring::linalg::SparseEchelon;
use crate::ring::{Monomial, Poly, Rational};
use crate::{Error, Result};

pub use normal_form::{heisenberg_criterion, verify_normal_form, NormalForm, NormalFormReport};
pub use surface::{classify_surface, quasi_homogeneous_exponents, SingularityClass, SurfaceReport};
pub use triple::{detect_duval_point, detect_nonnilpotent_point, TripleReport};

/// Default degree bound for the local linear algebra.
pub const DEFAULT_CAP: u32 = 12;

/// `dim K[[x]]/J`, certified by `q_D = q_{D+1}` where
/// `q_D = dim K[x]/(J + m^D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientDim {
    Finite { dim: usize, stable_degree: u32 },
    /// No stabilisation up to the cap; `last` is `q_cap`.
    Unbounded { last: usize },
}

impl QuotientDim {
    pub fn finite(&self) -> Option<usize> {
        match self {
            QuotientDim::Finite { dim, .. } => Some(*dim),
            QuotientDim::Unbounded { .. } => None,
        }
    }
}

fn monomials_below(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![Monomial::one()];
    for _ in 1..d {
        let mut next = Vec::new();
        for m in &frontier {
            // Only raise variables at or after the last one used, so each
            // monomial is produced once.
            let last = (0..n).rev().find(|&i| m.exp(i) > 0).unwrap_or(0);
            for i in last..n {
                let mut mm = *m;
                mm.set(i, m.exp(i) + 1);
                next.push(mm);
            }
        }
        out.extend(next.iter().copied());
        frontier = next;
    }
    out
}

/// `q_D = dim K[x]/(J + m^D)`.
pub fn quotient_dim_at(gens: &[Poly], d: u32) -> usize {
    let Some(first) = gens.first() else { return 0 };
    let n = first.nvars();
    let monos = monomials_below(n, d);
    let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut ech = SparseEchelon::new();
    let one = Rational::from_integer(1.into());
    for g in gens {
        let g = g.truncated(d);
        let Some(og) = g.min_degree() else { continue };
        for m in &monos {
            if m.degree() + og >= d {
                continue;
            }
            let row: BTreeMap<usize, Rational> = g
                .mul_monomial(m, &one)
                .terms()
                .filter(|(mm, _)| mm.degree() < d)
                .map(|(mm, c)| (index[mm], c.clone()))
                .collect();
            ech.insert(row);
            if ech.rank() == monos.len() {
                return 0;
            }
        }
    }
    monos.len() - ech.rank()
}

/// Local quotient dimension at the origin with stabilisation certificate.
pub fn local_quotient_dim(gens: &[Poly], cap: u32) -> QuotientDim {
    let mut prev = quotient_dim_at(gens, 1);
    for d in 1..cap {
        let next = quotient_dim_at(gens, d + 1);
        if next == prev {
            return QuotientDim::Finite { dim: prev, stable_degree: d };
        }
        prev = next;
    }
    QuotientDim::Unbounded { last: prev }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Milnor {
    Finite(usize),
    Unbounded,
}

impl Milnor {
    pub fn finite(self) -> Option<usize> {
        match self {
            Milnor::Finite(m) => Some(m),
            Milnor::Unbounded => None,
        }
    }
}

impl fmt::Display for Milnor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Milnor::Finite(m) => write!(f, "{m}"),
            Milnor::Unbounded => write!(f, "unbounded"),
        }
    }
}

fn check_origin(f: &Poly) -> Result<()> {
    if !f.constant_term().is_zero() {
        return Err(Error::pre("f does not vanish at the origin"));
    }
    Ok(())
}

/// Milnor number of `f` at the origin.
pub fn milnor_number(f: &Poly, cap: u32) -> Result<Milnor> {
    check_origin(f)?;
    Ok(match local_quotient_dim(&f.gradient(), cap).finite() {
        Some(m) => Milnor::Finite(m),
        None => Milnor::Unbounded,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Isolation {
    Isolated { milnor: usize },
    /// `f` and its gradient vanish identically on the line spanned by
    /// `direction`.
    NonIsolated {
        #[serde(serialize_with = "ser_vec")]
        direction: Vec<Rational>,
    },
    Indeterminate { reason: String },
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&crate::ring::fmt_rational(r))?;
    }
    seq.end()
}

impl Isolation {
    pub fn is_isolated(&self) -> Option<bool> {
        match self {
            Isolation::Isolated { .. } => Some(true),
            Isolation::NonIsolated { .. } => Some(false),
            Isolation::Indeterminate { .. } => None,
        }
    }
}

/// Whether every polynomial in `ps` vanishes on the line `t·d`.
pub fn vanish_on_line(ps: &[Poly], d: &[Rational]) -> bool {
    let Some(first) = ps.first() else { return true };
    let vars = first.vars();
    let t = Poly::var(vars, 0);
    let imgs: Vec<Poly> = d.iter().map(|c| t.scale(c)).collect();
    ps.iter().all(|p| p.substitute(&imgs).map(|q| q.is_zero()).unwrap_or(false))
}

/// Primitive integer directions with entries in `-3..=3`, one per line.
pub fn small_directions(n: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    let total = 7usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let e = (c % 7) as i64 - 3;
                c /= 7;
                e
            })
            .collect();
        let Some(&lead) = v.iter().find(|&&e| e != 0) else { continue };
        if lead < 0 {
            continue;
        }
        let g = v.iter().fold(0i64, |g, &e| num_integer::gcd(g, e));
        if g != 1 {
            continue;
        }
        out.push(v.into_iter().map(|e| Rational::from_integer(e.into())).collect());
    }
    out
}

/// Isolatedness of the singularity of `f` at the origin: isolated when the
/// Milnor number stabilises, non-isolated when `f` and `∇f` vanish on a
/// line through the origin (tried along `hints`, then small integer
/// directions), indeterminate otherwise.
pub fn is_isolated_singularity(f: &Poly, cap: u32, hints: &[Vec<Rational>]) -> Result<Isolation> {
    check_origin(f)?;
    if let Milnor::Finite(m) = milnor_number(f, cap)? {
        return Ok(Isolation::Isolated { milnor: m });
    }
    let mut sys = vec![f.clone()];
    sys.extend(f.gradient());
    for d in hints.iter().cloned().chain(small_directions(f.nvars())) {
        if d.iter().any(|c| !c.is_zero()) && vanish_on_line(&sys, &d) {
            return Ok(Isolation::NonIsolated { direction: d });
        }
    }
    Ok(Isolation::Indeterminate {
        reason: format!("no stabilisation below degree {cap} and no line of singular points found"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, Vars};

    fn p(s: &str) -> Poly {
        Poly::parse(s, &Vars::xyz()).unwrap()
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_below(3, 3).len(), 10);
        assert_eq!(monomials_below(2, 4).len(), 10);
    }

    /// Independent oracle for monomial ideals: count standard monomials.
    fn standard_monomials(gens: &[Vec<u32>], n: usize, bound: u32) -> usize {
        monomials_below(n, bound)
            .into_iter()
            .filter(|m| !gens.iter().any(|g| (0..n).all(|i| m.exp(i) >= g[i])))
            .count()
    }

    #[test]
    fn milnor_a_series() {
        for n in 1..=5u32 {
            let f = p(&format!("x^2 + y^2 + z^{}", n + 1));
            assert_eq!(milnor_number(&f, DEFAULT_CAP).unwrap(), Milnor::Finite(n as usize), "A{n}");
            // Gradient ideal is (x, y, z^n) up to units.
            assert_eq!(standard_monomials(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, n]], 3, 20), n as usize);
        }
    }

    #[test]
    fn milnor_e8_and_d4() {
        assert_eq!(milnor_number(&p("x^2 + y^3 + z^5"), DEFAULT_CAP).unwrap(), Milnor::Finite(8));
        assert_eq!(standard_monomials(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 4]], 3, 20), 8);
        assert_eq!(milnor_number(&p("x^2 + y^2*z + z^3"), DEFAULT_CAP).unwrap(), Milnor::Finite(4));
        assert_eq!(milnor_number(&p("x^2 + y^3 + y*z^3"), DEFAULT_CAP).unwrap(), Milnor::Finite(7));
    }

    #[test]
    fn whitney_unbounded() {
        assert_eq!(milnor_number(&p("x^2 - y^2*z"), DEFAULT_CAP).unwrap(), Milnor::Unbounded);
        assert_eq!(
            is_isolated_singularity(&p("x^2 - y^2*z"), DEFAULT_CAP, &[]).unwrap(),
            Isolation::NonIsolated { direction: vec![int(0), int(0), int(1)] }
        );
        assert!(matches!(
            is_isolated_singularity(&p("x*y"), DEFAULT_CAP, &[]).unwrap(),
            Isolation::NonIsolated { .. }
        ));
        assert_eq!(
            is_isolated_singularity(&p("x^2 + y^2*z + z^3"), DEFAULT_CAP, &[]).unwrap(),
            Isolation::Isolated { milnor: 4 }
        );
    }

    #[test]
    fn large_milnor_is_not_guessed() {
        let r = is_isolated_singularity(&p("x^2 + y^2 + z^15"), DEFAULT_CAP, &[]).unwrap();
        assert!(matches!(r, Isolation::Indeterminate { .. }));
    }

    #[test]
    fn unit_ideal() {
        assert_eq!(local_quotient_dim(&[p("1 + x")], 4), QuotientDim::Finite { dim: 0, stable_degree: 1 });
    }
}
