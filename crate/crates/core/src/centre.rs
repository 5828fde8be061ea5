//! Monomial weighted centres, their weights and the order filtration.

use num_traits::Zero;
use std::fmt;

use crate::polyvector::Polyvector;
use crate::ring::rational::{fmt_rational, gcd_rationals, to_i64};
use crate::ring::{parse_rational, ExtRational, Monomial, Poly, Rational, Vars};
use crate::{Error, Result};

/// A centre `(x_1^{a_1}, …, x_n^{a_n})` at a base point; `a_i = ∞` means
/// the coordinate does not occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Centre {
    vars: Vars,
    exponents: Vec<ExtRational>,
    base: Vec<Rational>,
    w: Vec<Rational>,
}

/// Weight data derived from a non-trivial centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightData {
    /// `w_i = 1/a_i` per chart variable.
    pub weights: Vec<Rational>,
    /// Positive weights in decreasing order.
    pub sorted: Vec<Rational>,
    /// Finite exponents in increasing order.
    pub exponent_seq: Vec<Rational>,
    /// `κ_0 = 0, κ_j = w_(1) + … + w_(j)`.
    pub kappa: Vec<Rational>,
    pub gcd: Rational,
    /// `w_i / gcd` per chart variable.
    pub reduced: Vec<i64>,
}

impl WeightData {
    /// `κ_j` for a polyvector degree `j`, saturating at the support size.
    pub fn kappa_at(&self, j: usize) -> Rational {
        self.kappa[j.min(self.kappa.len() - 1)].clone()
    }
}

impl Centre {
    pub fn new(vars: &Vars, exponents: Vec<ExtRational>, base: Option<Vec<Rational>>) -> Result<Self> {
        if exponents.len() != vars.len() {
            return Err(Error::InvalidCentre(format!(
                "{} exponents for {} variables",
                exponents.len(),
                vars.len()
            )));
        }
        for e in &exponents {
            if let ExtRational::Finite(r) = e {
                if *r <= Rational::zero() {
                    return Err(Error::InvalidCentre(format!("exponent {e} is not positive")));
                }
            }
        }
        let base = base.unwrap_or_else(|| vec![Rational::zero(); vars.len()]);
        if base.len() != vars.len() {
            return Err(Error::InvalidCentre("base point has the wrong dimension".into()));
        }
        let w = exponents.iter().map(|e| e.reciprocal_weight()).collect();
        Ok(Centre { vars: vars.clone(), exponents, base, w })
    }

    /// Exponents given as integers or `None` for ∞, at the origin.
    pub fn from_ints(vars: &Vars, exps: &[Option<i64>]) -> Result<Self> {
        let e = exps.iter().map(|a| a.map(ExtRational::int).unwrap_or(ExtRational::Infinity)).collect();
        Centre::new(vars, e, None)
    }

    /// Parse `x:2 y:3 z:inf [@ (p1,p2,p3)]`. Unlisted variables get ∞.
    pub fn parse(text: &str, vars: &Vars) -> Result<Self> {
        let (spec, base) = match text.split_once('@') {
            Some((a, b)) => (a, Some(b)),
            None => (text, None),
        };
        let mut exps = vec![ExtRational::Infinity; vars.len()];
        let mut seen = vec![false; vars.len()];
        for item in spec.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
            let (name, val) = item
                .split_once(':')
                .ok_or_else(|| Error::InvalidCentre(format!("expected `var:exponent`, got `{item}`")))?;
            let i = vars.index(name.trim()).ok_or_else(|| Error::UnknownVariable(name.trim().into()))?;
            if seen[i] {
                return Err(Error::InvalidCentre(format!("variable `{name}` listed twice")));
            }
            seen[i] = true;
            exps[i] = ExtRational::parse(val).map_err(|_| Error::InvalidCentre(format!("bad exponent `{val}`")))?;
        }
        let base = match base {
            Some(b) => {
                let inner = b.trim().trim_start_matches('(').trim_end_matches(')');
                let pts: Result<Vec<Rational>> = inner.split(',').map(|s| parse_rational(s.trim())).collect();
                Some(pts.map_err(|_| Error::InvalidCentre(format!("bad base point `{}`", b.trim())))?)
            }
            None => None,
        };
        Centre::new(vars, exps, base)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn exponents(&self) -> &[ExtRational] {
        &self.exponents
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn with_base(&self, base: Vec<Rational>) -> Result<Self> {
        Centre::new(&self.vars, self.exponents.clone(), Some(base))
    }

    pub fn at_origin(&self) -> bool {
        self.base.iter().all(|b| b.is_zero())
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|e| e.is_infinite())
    }

    /// Variables with finite exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| !self.exponents[i].is_infinite()).collect()
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.w.clone()
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.w[i]
    }

    pub fn weight_data(&self) -> Result<WeightData> {
        if self.is_trivial() {
            return Err(Error::InvalidCentre("trivial centre: every exponent is infinite".into()));
        }
        let weights = self.weights();
        let mut sorted: Vec<Rational> = weights.iter().filter(|w| !w.is_zero()).cloned().collect();
        sorted.sort_by(|a, b| b.cmp(a));
        let exponent_seq: Vec<Rational> = sorted.iter().map(|w| w.recip()).collect();
        let mut kappa = vec![Rational::zero()];
        for w in &sorted {
            let last = kappa.last().expect("nonempty").clone();
            kappa.push(last + w);
        }
        let gcd = gcd_rationals(sorted.iter()).expect("nonzero weights");
        let reduced = weights.iter().map(|w| to_i64(&(w / &gcd)).expect("integral reduced weight")).collect();
        Ok(WeightData { weights, sorted, exponent_seq, kappa, gcd, reduced })
    }

    /// Replace every ∞ by `b`, which must be at least the largest finite
    /// exponent.
    pub fn b_completion(&self, b: &Rational) -> Result<Centre> {
        let max = self.exponents.iter().filter_map(|e| e.finite()).max().cloned();
        if let Some(m) = &max {
            if b < m {
                return Err(Error::InvalidCentre(format!(
                    "b-completion needs b >= {}, got {}",
                    fmt_rational(m),
                    fmt_rational(b)
                )));
            }
        }
        if *b <= Rational::zero() {
            return Err(Error::InvalidCentre("b-completion needs b > 0".into()));
        }
        let e = self
            .exponents
            .iter()
            .map(|a| if a.is_infinite() { ExtRational::Finite(b.clone()) } else { a.clone() })
            .collect();
        Centre::new(&self.vars, e, Some(self.base.clone()))
    }

    /// Move the base point to the origin.
    pub fn centred_poly(&self, f: &Poly) -> Poly {
        f.translate(&self.base)
    }

    pub fn centred_polyvector(&self, xi: &Polyvector) -> Polyvector {
        xi.translate(&self.base)
    }

    pub fn centred(&self) -> Centre {
        Centre::new(&self.vars, self.exponents.clone(), None).expect("valid centre")
    }

    pub fn monomial_order(&self, m: &Monomial) -> Rational {
        let mut s = Rational::zero();
        for (i, wi) in self.w.iter().enumerate() {
            let e = m.exp(i);
            if e > 0 {
                s += wi * Rational::from_integer(e.into());
            }
        }
        s
    }

    fn check_vars(&self, v: &Vars) -> Result<()> {
        if &self.vars != v {
            return Err(Error::VariableMismatch(self.vars.joined(), v.joined()));
        }
        Ok(())
    }

    /// `ord_C f` with a witness monomial of minimal order.
    pub fn ord_poly(&self, f: &Poly) -> Result<(ExtRational, Option<Monomial>)> {
        self.check_vars(f.vars())?;
        let g = self.centred_poly(f);
        let mut best: Option<(Rational, Monomial)> = None;
        for (m, _) in g.terms() {
            let o = self.monomial_order(m);
            if best.as_ref().is_none_or(|(b, _)| o < *b) {
                best = Some((o, *m));
            }
        }
        Ok(match best {
            Some((o, m)) => (ExtRational::Finite(o), Some(m)),
            None => (ExtRational::Infinity, None),
        })
    }

    pub fn ord(&self, f: &Poly) -> Result<ExtRational> {
        Ok(self.ord_poly(f)?.0)
    }

    /// Order of a term `x^m ∂_I`.
    pub fn term_order(&self, idx: &[usize], m: &Monomial) -> Rational {
        let mut o = self.monomial_order(m);
        for &i in idx {
            o -= &self.w[i];
        }
        o
    }

    /// `ord_C ξ = min_I (ord ξ^I − Σ_{i∈I} w_i)` with a witness term.
    pub fn ord_polyvector(&self, xi: &Polyvector) -> Result<(ExtRational, Option<(Vec<usize>, Monomial)>)> {
        self.check_vars(xi.vars())?;
        let g = self.centred_polyvector(xi);
        let mut best: Option<(Rational, Vec<usize>, Monomial)> = None;
        for (idx, c) in g.terms() {
            for (m, _) in c.terms() {
                let o = self.term_order(idx, m);
                if best.as_ref().is_none_or(|(b, _, _)| o < *b) {
                    best = Some((o, idx.clone(), *m));
                }
            }
        }
        Ok(match best {
            Some((o, i, m)) => (ExtRational::Finite(o), Some((i, m))),
            None => (ExtRational::Infinity, None),
        })
    }

    /// Minimal-order part of `f`, in coordinates centred at the base point.
    pub fn leading_term_poly(&self, f: &Poly) -> Result<Poly> {
        let (o, _) = self.ord_poly(f)?;
        let g = self.centred_poly(f);
        let Some(o) = o.finite().cloned() else { return Ok(g) };
        Ok(Poly::from_terms(
            f.vars(),
            g.terms().filter(|(m, _)| self.monomial_order(m) == o).map(|(m, c)| (*m, c.clone())),
        ))
    }

    /// Minimal-order part of `ξ`, in coordinates centred at the base point.
    pub fn leading_term_polyvector(&self, xi: &Polyvector) -> Result<Polyvector> {
        let (o, _) = self.ord_polyvector(xi)?;
        let g = self.centred_polyvector(xi);
        let Some(o) = o.finite().cloned() else { return Ok(g) };
        let mut out = Polyvector::zero(xi.vars(), xi.degree());
        for (idx, c) in g.terms() {
            let part =
                Poly::from_terms(xi.vars(), c.terms().filter(|(m, _)| self.term_order(idx, m) == o).map(|(m, c)| (*m, c.clone())));
            out.add_term(idx.clone(), part);
        }
        Ok(out)
    }

    /// `E = Σ w_i (x_i − p_i) ∂_i`.
    pub fn euler_field(&self) -> Polyvector {
        let w = self.weights();
        let mut e = Polyvector::zero(&self.vars, 1);
        for (i, wi) in w.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            let xi = &Poly::var(&self.vars, i) - &Poly::constant(&self.vars, self.base[i].clone());
            e.add_term(vec![i], xi.scale(wi));
        }
        e
    }

    /// The same centre with every exponent multiplied by `k`.
    pub fn scaled(&self, k: &Rational) -> Centre {
        let e = self.exponents.iter().map(|a| a.scale(k)).collect();
        Centre::new(&self.vars, e, Some(self.base.clone())).expect("positive scale")
    }
}

impl fmt::Display for Centre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            (0..self.vars.len()).map(|i| format!("{}:{}", self.vars.name(i), self.exponents[i].to_decimal_string())).collect();
        write!(f, "{}", parts.join(" "))?;
        if !self.at_origin() {
            let b: Vec<String> = self.base.iter().map(fmt_rational).collect();
            write!(f, " @ ({})", b.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat};

    fn v() -> Vars {
        Vars::xyz()
    }

    #[test]
    fn weight_data_examples() {
        let c = Centre::parse("x:2 y:3 z:inf", &v()).unwrap();
        let wd = c.weight_data().unwrap();
        assert_eq!(wd.weights, vec![rat(1, 2), rat(1, 3), int(0)]);
        assert_eq!(wd.gcd, rat(1, 6));
        assert_eq!(wd.reduced, vec![3, 2, 0]);
        assert_eq!(wd.kappa, vec![int(0), rat(1, 2), rat(5, 6)]);
        let c = Centre::parse("x:1/3 y:1/2", &Vars::xy()).unwrap();
        assert_eq!(c.weight_data().unwrap().kappa, vec![int(0), int(3), int(5)]);
        assert!(Centre::parse("x:inf", &v()).unwrap().weight_data().is_err());
        assert!(Centre::parse("x:0", &v()).is_err());
        assert!(Centre::parse("w:1", &v()).is_err());
    }

    #[test]
    fn orders() {
        let c = Centre::parse("x:2 y:3 z:inf", &v()).unwrap();
        let f = Poly::parse("x^5 + x^2*y^4*z^5", &v()).unwrap();
        assert_eq!(c.ord(&f).unwrap(), ExtRational::rat(7, 3));
        assert_eq!(c.ord(&Poly::zero(&v())).unwrap(), ExtRational::Infinity);
        let c233 = Centre::parse("x:2 y:3 z:3", &v()).unwrap();
        let s = crate::polyvector::jacobian_poisson(&Poly::parse("x^2 - y^2*z", &v()).unwrap());
        assert_eq!(c233.ord_polyvector(&s).unwrap().0, ExtRational::rat(-1, 6));
        assert_eq!(c233.leading_term_polyvector(&s).unwrap(), s);
        let c111 = Centre::parse("x:1 y:1 z:1", &v()).unwrap();
        assert_eq!(c111.ord_polyvector(&s).unwrap().0, ExtRational::int(-1));
        let c11 = Centre::parse("x:1 y:1 z:inf", &v()).unwrap();
        assert_eq!(c11.ord_polyvector(&s).unwrap().0, ExtRational::int(0));
    }

    #[test]
    fn base_point_translation() {
        let c = Centre::parse("x:1 y:1 z:1 @ (1,0,0)", &v()).unwrap();
        let f = Poly::parse("(x - 1)^2 + y^3", &v()).unwrap();
        assert_eq!(c.ord(&f).unwrap(), ExtRational::int(2));
        assert_eq!(c.leading_term_poly(&f).unwrap(), Poly::parse("x^2", &v()).unwrap());
        assert_eq!(c.to_string(), "x:1 y:1 z:1 @ (1,0,0)");
    }

    #[test]
    fn completion() {
        let c = Centre::parse("x:1 y:inf z:inf", &v()).unwrap();
        let d = c.b_completion(&int(2)).unwrap();
        assert_eq!(d.to_string(), "x:1 y:2 z:2");
        let c = Centre::parse("x:3 y:inf", &Vars::xy()).unwrap();
        assert!(c.b_completion(&int(2)).is_err());
    }
}
