//! Linearisation of a bivector at a zero and the resulting Lie algebra on
//! the cotangent space.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Polyvector;
use crate::ring::linalg::row_space_basis;
use crate::ring::{Monomial, Rational};
use crate::{Error, Result};

/// Structure constants `[e_i, e_j] = Σ_k c[i][j][k] e_k` with `e_i = dx_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub dim: usize,
    pub c: Vec<Vec<Vec<Rational>>>,
}

/// Coarse class of a Lie algebra of dimension three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lie3Class {
    Abelian,
    Heisenberg,
    SplitNonabelian,
    Other,
}

impl Lie3Class {
    pub fn name(self) -> &'static str {
        match self {
            Lie3Class::Abelian => "abelian",
            Lie3Class::Heisenberg => "heisenberg",
            Lie3Class::SplitNonabelian => "split_nonabelian",
            Lie3Class::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieSummary {
    pub class: Lie3Class,
    pub derived_dim: usize,
    pub nilpotent: bool,
    /// Dimensions of `g_1 = [h,h]`, `g_2 = [h,g_1]`, ...
    pub lower_central: Vec<usize>,
}

impl LieAlgebra {
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let s = &u[i] * &v[j];
                for k in 0..n {
                    if !self.c[i][j][k].is_zero() {
                        out[k] += &s * &self.c[i][j][k];
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); self.dim];
        e[i] = Rational::from_integer(1.into());
        e
    }

    /// Jacobi identity on basis elements.
    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (ea, eb, ec) = (self.unit(a), self.unit(b), self.unit(c));
                    let t1 = self.bracket(&ea, &self.bracket(&eb, &ec));
                    let t2 = self.bracket(&eb, &self.bracket(&ec, &ea));
                    let t3 = self.bracket(&ec, &self.bracket(&ea, &eb));
                    if (0..n).any(|k| !(&t1[k] + &t2[k] + &t3[k]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Linear part of `σ` at a zero `p`, as a Lie algebra on `T*_p`.
pub fn linearize(sigma: &Polyvector, point: &[Rational]) -> Result<LieAlgebra> {
    if sigma.degree() != 2 {
        return Err(Error::pre("linearisation needs a bivector"));
    }
    let n = sigma.nvars();
    if point.len() != n {
        return Err(Error::pre("point has the wrong dimension"));
    }
    if !sigma.vanishes_at(point) {
        return Err(Error::pre("bivector does not vanish at the point"));
    }
    let s = sigma.translate(point);
    let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let b = s.bracket_coeff(i, j);
            for (k, ck) in c[i][j].iter_mut().enumerate() {
                *ck = b.coeff(&Monomial::var(k));
            }
        }
    }
    Ok(LieAlgebra { dim: n, c })
}

/// Derived dimension and lower central series, then the class:
/// abelian when `[h,h] = 0`; Heisenberg when `[h,h]` is a line and `h` is
/// nilpotent; split non-abelian when `[h,h]` is a line and `h` is not
/// nilpotent; other otherwise.
pub fn classify_lie(h: &LieAlgebra) -> LieSummary {
    let n = h.dim;
    let mut all = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            all.push(h.bracket(&h.unit(i), &h.unit(j)));
        }
    }
    let mut cur = row_space_basis(&all);
    let derived_dim = cur.len();
    let mut lower = vec![derived_dim];
    let mut nilpotent = derived_dim == 0;
    for _ in 0..n {
        if cur.is_empty() {
            nilpotent = true;
            break;
        }
        let mut next = Vec::new();
        for i in 0..n {
            for v in &cur {
                next.push(h.bracket(&h.unit(i), v));
            }
        }
        let nb = row_space_basis(&next);
        lower.push(nb.len());
        if nb.len() == cur.len() {
            break;
        }
        cur = nb;
    }
    if cur.is_empty() {
        nilpotent = true;
    }
    let class = match (derived_dim, nilpotent) {
        (0, _) => Lie3Class::Abelian,
        (1, true) => Lie3Class::Heisenberg,
        (1, false) => Lie3Class::SplitNonabelian,
        _ => Lie3Class::Other,
    };
    LieSummary { class, derived_dim, nilpotent, lower_central: lower }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Vars;

    fn cls(s: &str) -> LieSummary {
        let sigma = Polyvector::parse(s, &Vars::xyz()).unwrap();
        let zero = vec![Rational::zero(); 3];
        let h = linearize(&sigma, &zero).unwrap();
        assert!(h.satisfies_jacobi());
        classify_lie(&h)
    }

    #[test]
    fn model_structures() {
        assert_eq!(cls("x*@x^@y").class, Lie3Class::SplitNonabelian);
        assert_eq!(cls("x*@y^@z").class, Lie3Class::Heisenberg);
        assert_eq!(cls("0").class, Lie3Class::Abelian);
        assert_eq!(cls("x^2*@y^@z").class, Lie3Class::Abelian);
        let so3 = cls("x*@y^@z + y*@z^@x + z*@x^@y");
        assert_eq!((so3.class, so3.derived_dim), (Lie3Class::Other, 3));
    }

    #[test]
    fn refuses_nonzero_point() {
        let sigma = Polyvector::parse("@x^@y", &Vars::xyz()).unwrap();
        assert!(linearize(&sigma, &vec![Rational::zero(); 3]).is_err());
    }
}
