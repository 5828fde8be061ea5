//! Rational common zeros of plane polynomial systems and the Jacobian
//! smoothness test for strict transforms.

use num_traits::Zero;
use serde::Serialize;

use crate::ring::{resultant, Poly, Rational, UniPoly};
use crate::{Error, Result};

/// Common zeros of a system in two variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonZeros {
    pub points: Vec<Vec<Rational>>,
    /// Set when some common zero may have non-rational coordinates.
    pub indeterminate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "detail")]
pub enum Smoothness {
    Smooth,
    Singular(Vec<Vec<String>>),
    Indeterminate(String),
}

impl Smoothness {
    pub fn is_smooth(&self) -> bool {
        matches!(self, Smoothness::Smooth)
    }
}

fn univariate(p: &Poly, i: usize) -> Result<UniPoly> {
    UniPoly::from_poly(p, i)
}

fn gcd_all(ps: &[UniPoly]) -> UniPoly {
    let mut g = UniPoly::zero();
    for p in ps {
        g = g.gcd(p);
    }
    g
}

/// An eliminant in variable `u`: a univariate polynomial vanishing at the
/// `u`-coordinate of every common zero. `None` when all candidates vanish.
fn eliminant(sys: &[Poly], u: usize, v: usize) -> Result<Option<UniPoly>> {
    let mut cands = Vec::new();
    for p in sys {
        if p.degree_in(v).unwrap_or(0) == 0 {
            cands.push(univariate(p, u)?);
        }
    }
    if cands.is_empty() {
        for a in 0..sys.len() {
            for b in a + 1..sys.len() {
                let r = resultant(&sys[a], &sys[b], v)?;
                if !r.is_zero() {
                    cands.push(univariate(&r, u)?);
                }
            }
        }
    }
    let g = gcd_all(&cands);
    Ok(if g.is_zero() { None } else { Some(g) })
}

fn restrict_all(sys: &[Poly], i: usize, r: &Rational) -> Vec<Poly> {
    sys.iter().map(|p| p.restrict(i, r)).filter(|p| !p.is_zero()).collect()
}

/// Common zeros of `sys` in a chart with exactly two variables.
pub fn common_zeros(sys: &[Poly]) -> Result<CommonZeros> {
    let Some(first) = sys.first() else {
        return Err(Error::pre("empty system"));
    };
    if first.nvars() != 2 {
        return Err(Error::pre("common zeros need a chart with two variables"));
    }
    let sys: Vec<Poly> = sys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if sys.is_empty() {
        return Err(Error::Indeterminate("every equation vanishes identically".into()));
    }
    if sys.iter().any(|p| p.is_constant()) {
        return Ok(CommonZeros { points: vec![], indeterminate: None });
    }
    let e0 = eliminant(&sys, 0, 1)?;
    let e1 = eliminant(&sys, 1, 0)?;
    let (Some(e0), Some(e1)) = (e0, e1) else {
        return Err(Error::Indeterminate("the equations share a curve component".into()));
    };
    // Enumerate along the variable whose eliminant splits over ℚ when possible.
    let r0 = e0.without_rational_roots()?;
    let r1 = e1.without_rational_roots()?;
    let (u, v, eu) = if r0.degree().unwrap_or(0) == 0 {
        (0, 1, e0)
    } else if r1.degree().unwrap_or(0) == 0 {
        (1, 0, e1)
    } else {
        return Ok(CommonZeros {
            points: vec![],
            indeterminate: Some("common zeros with non-rational coordinates cannot be excluded".into()),
        });
    };
    let mut points = Vec::new();
    let mut indeterminate = None;
    if eu.degree().unwrap_or(0) == 0 {
        return Ok(CommonZeros { points, indeterminate });
    }
    for (a, _) in eu.rational_roots()? {
        let sub = restrict_all(&sys, u, &a);
        if sub.is_empty() {
            return Err(Error::Indeterminate("a whole line of common zeros".into()));
        }
        if sub.iter().any(|p| p.is_constant()) {
            continue;
        }
        let us: Vec<UniPoly> = sub.iter().map(|p| univariate(p, v)).collect::<Result<_>>()?;
        let g = gcd_all(&us);
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (b, _) in g.rational_roots()? {
            let mut pt = vec![Rational::zero(), Rational::zero()];
            pt[u] = a.clone();
            pt[v] = b;
            points.push(pt);
        }
        if g.without_rational_roots()?.degree().unwrap_or(0) > 0 {
            indeterminate = Some("a common zero has a non-rational coordinate".into());
        }
    }
    points.sort();
    Ok(CommonZeros { points, indeterminate })
}

/// Rational singular points of the plane curve `f = 0`.
pub fn plane_singular_points(f: &Poly) -> Result<CommonZeros> {
    let mut sys = vec![f.clone()];
    sys.extend(f.gradient());
    common_zeros(&sys)
}

/// Jacobian criterion away from the excluded locus, the common zero set of
/// the variables listed in `excluded` (nothing is excluded when the list is
/// empty). Extra `constraints` restrict the search to a subvariety.
pub fn is_smooth_plane_strict_transform_on(f: &Poly, excluded: &[usize], constraints: &[Poly]) -> Result<Smoothness> {
    let mut sys = vec![f.clone()];
    sys.extend(f.gradient());
    sys.extend(constraints.iter().cloned());
    let cz = common_zeros(&sys)?;
    let bad: Vec<Vec<String>> = cz
        .points
        .iter()
        .filter(|p| excluded.is_empty() || excluded.iter().any(|&i| !p[i].is_zero()))
        .map(|p| p.iter().map(crate::ring::fmt_rational).collect())
        .collect();
    if !bad.is_empty() {
        return Ok(Smoothness::Singular(bad));
    }
    Ok(match cz.indeterminate {
        Some(r) => Smoothness::Indeterminate(r),
        None => Smoothness::Smooth,
    })
}

pub fn is_smooth_plane_strict_transform(f: &Poly, excluded: &[usize]) -> Result<Smoothness> {
    is_smooth_plane_strict_transform_on(f, excluded, &[])
}
