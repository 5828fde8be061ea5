//! Resolution invariants: exponent sequences, their numerical constraints,
//! lexicographically maximal monomial centres and plane-curve invariants.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::centre::Centre;
use crate::exec::Exec;
use crate::ring::{ExtRational, Monomial, Poly, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "at")]
pub enum Validity {
    Valid,
    /// The constraint fails at this (1-based) position.
    Invalid(usize),
    Unchecked,
}

/// A weakly increasing exponent sequence, implicitly padded with ∞.
/// Equality compares entries only.
#[derive(Clone, Debug)]
pub struct InvariantSeq {
    entries: Vec<ExtRational>,
    pub validity: Validity,
}

impl InvariantSeq {
    /// Trailing ∞ entries are dropped.
    pub fn new(mut entries: Vec<ExtRational>) -> Result<Self> {
        while entries.last().is_some_and(|e| e.is_infinite()) {
            entries.pop();
        }
        for w in entries.windows(2) {
            if w[0] > w[1] {
                return Err(Error::pre(format!("sequence is not weakly increasing at {} > {}", w[0], w[1])));
            }
        }
        if entries.iter().any(|e| e.finite().is_some_and(|r| !r.is_positive())) {
            return Err(Error::pre("entries must be positive"));
        }
        Ok(InvariantSeq { entries, validity: Validity::Unchecked })
    }

    pub fn from_rationals(v: &[Rational]) -> Result<Self> {
        Self::new(v.iter().cloned().map(ExtRational::Finite).collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Self::new(vec![]);
        }
        let entries = t.split(',').map(|s| ExtRational::parse(s.trim())).collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[ExtRational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn finite(&self) -> Vec<Rational> {
        self.entries.iter().filter_map(|e| e.finite().cloned()).collect()
    }

    /// `κ_j = 1/a_1 + … + 1/a_j`.
    pub fn kappa(&self, j: usize) -> Rational {
        self.entries.iter().take(j).map(|e| e.reciprocal_weight()).sum()
    }

    pub fn validated(mut self) -> Self {
        self.validity = validate_invariant(&self);
        self
    }

    pub fn scale(&self, k: &Rational) -> InvariantSeq {
        InvariantSeq { entries: self.entries.iter().map(|e| e.scale(k)).collect(), validity: Validity::Unchecked }
    }
}

impl fmt::Display for InvariantSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|e| e.to_decimal_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl PartialEq for InvariantSeq {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for InvariantSeq {}

impl PartialOrd for InvariantSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for InvariantSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

/// For every `j` there are `n_1, …, n_j ≥ 0` with `Σ n_i/a_i = 1` and
/// `n_j ≠ 0`; `n_i ≤ ⌊a_i⌋` bounds the search.
pub fn validate_invariant(a: &InvariantSeq) -> Validity {
    let fin = a.finite();
    let mut reach = BTreeSet::from([Rational::zero()]);
    for (j, aj) in fin.iter().enumerate() {
        if !admits(&reach, aj) {
            return Validity::Invalid(j + 1);
        }
        reach = reachable_sums_extend(reach, aj);
    }
    Validity::Valid
}

fn reachable_sums_extend(reach: BTreeSet<Rational>, a: &Rational) -> BTreeSet<Rational> {
    let one = Rational::one();
    let step = a.recip();
    let mut next = reach.clone();
    for s in &reach {
        let mut t = s + &step;
        while t <= one {
            next.insert(t.clone());
            t += &step;
        }
    }
    next
}

/// Lexicographic order with missing entries read as ∞.
pub fn lex_compare(a: &InvariantSeq, b: &InvariantSeq) -> Ordering {
    let n = a.len().max(b.len());
    for i in 0..n {
        let x = a.entries.get(i).cloned().unwrap_or(ExtRational::Infinity);
        let y = b.entries.get(i).cloned().unwrap_or(ExtRational::Infinity);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalNumerics {
    pub below_236: bool,
    pub kappa3_above_1_or_22: bool,
    pub in_ade_list: bool,
    #[serde(serialize_with = "crate::ring::rational::serialize_rational")]
    pub kappa3: Rational,
}

fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

/// The three equivalent conditions on an invariant of length two or three
/// with `a_1 > 1`. Disagreement is reported as a certification failure.
pub fn canonical_numerics(a: &InvariantSeq) -> Result<CanonicalNumerics> {
    if !(2..=3).contains(&a.len()) {
        return Err(Error::pre(format!("{a} does not have length two or three")));
    }
    let fin = a.finite();
    if fin[0] <= Rational::one() {
        return Err(Error::pre(format!("{a} has a_1 <= 1")));
    }
    if let Validity::Invalid(j) = validate_invariant(a) {
        return Err(Error::pre(format!("{a} is not an invariant (fails at entry {j})")));
    }
    let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let two = r(2, 1);
    let three = r(3, 1);
    let bound = InvariantSeq::from_rationals(&[two.clone(), three.clone(), r(6, 1)])?;
    let below_236 = lex_compare(a, &bound) == Ordering::Less;
    let kappa3 = a.kappa(3);
    let is_22 = fin == vec![two.clone(), two.clone()];
    let kappa3_above_1_or_22 = kappa3 > Rational::one() || is_22;
    let in_ade_list = match fin.as_slice() {
        [x, y] => *x == two && *y == two,
        [x, y, z] if *x == two && *y == two => is_integer(z) && *z >= two,
        [x, y, z] if *x == two && *y == three => [r(3, 1), r(4, 1), r(9, 2), r(5, 1)].contains(z),
        _ => false,
    };
    if below_236 != kappa3_above_1_or_22 || below_236 != in_ade_list {
        return Err(Error::Certification(format!(
            "conditions disagree on {a}: below (2,3,6)={below_236}, kappa={kappa3_above_1_or_22}, list={in_ade_list}"
        )));
    }
    Ok(CanonicalNumerics { below_236, kappa3_above_1_or_22, in_ade_list, kappa3 })
}

/// All weakly increasing sequences of the given length with entries `p/q`,
/// `q ≤ max_den`, `p/q ≤ max_value`, passing the constraints.
pub fn enumerate_valid(len: usize, max_den: i64, max_value: i64, exec: Exec) -> Vec<InvariantSeq> {
    let mut values: BTreeSet<Rational> = BTreeSet::new();
    for q in 1..=max_den {
        for p in 1..=max_value * q {
            values.insert(Rational::new(p.into(), q.into()));
        }
    }
    let values: Vec<Rational> = values.into_iter().collect();
    let firsts: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_integer()).collect();
    let chunks = exec.map(&firsts, |&i| {
        let mut out = Vec::new();
        let mut reach = BTreeSet::from([Rational::zero()]);
        if admits(&reach, &values[i]) {
            reach = reachable_sums_extend(reach, &values[i]);
            extend_valid(&values, i, vec![values[i].clone()], reach, len, &mut out);
        }
        out
    });
    chunks.into_iter().flatten().collect()
}

fn admits(reach: &BTreeSet<Rational>, a: &Rational) -> bool {
    let one = Rational::one();
    let step = a.recip();
    let mut t = step.clone();
    while t <= one {
        if reach.contains(&(&one - &t)) {
            return true;
        }
        t += &step;
    }
    false
}

fn extend_valid(
    values: &[Rational],
    from: usize,
    prefix: Vec<Rational>,
    reach: BTreeSet<Rational>,
    len: usize,
    out: &mut Vec<InvariantSeq>,
) {
    if prefix.len() == len {
        let mut s = InvariantSeq::from_rationals(&prefix).expect("increasing");
        s.validity = Validity::Valid;
        out.push(s);
        return;
    }
    for k in from..values.len() {
        if admits(&reach, &values[k]) {
            let mut p = prefix.clone();
            p.push(values[k].clone());
            extend_valid(values, k, p, reachable_sums_extend(reach.clone(), &values[k]), len, out);
        }
    }
}

/// `ord_C f = 1`.
pub fn is_admissible(c: &Centre, f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::pre("admissibility of the zero function"));
    }
    Ok(c.ord(f)? == ExtRational::int(1))
}

/// Support exponents and their componentwise-minimal elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    pub points: Vec<Vec<u32>>,
    pub minimal_points: Vec<Vec<u32>>,
}

impl NewtonPolyhedron {
    pub fn of(f: &Poly) -> Self {
        let n = f.nvars();
        let points: Vec<Vec<u32>> = f.terms().map(|(m, _)| m.exponents(n)).collect();
        let minimal_points = points
            .iter()
            .filter(|p| !points.iter().any(|q| q != *p && q.iter().zip(p.iter()).all(|(a, b)| a <= b)))
            .cloned()
            .collect();
        NewtonPolyhedron { points, minimal_points }
    }
}

/// Result of the monomial-restricted maximisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialInvariant {
    pub centre: Centre,
    pub invariant: InvariantSeq,
    /// Variables in order of decreasing weight.
    pub order: Vec<usize>,
    pub warnings: Vec<String>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Lex-minimal decreasing weights along a fixed variable order.
fn greedy_weights(points: &[Vec<u32>], order: &[usize]) -> Option<Vec<Rational>> {
    let one = Rational::one();
    let mut u: Vec<Rational> = Vec::with_capacity(order.len());
    for k in 0..order.len() {
        let mut best = Rational::zero();
        for p in points {
            let prefix: Rational = (0..k).map(|l| &u[l] * Rational::from_integer(p[order[l]].into())).sum();
            if prefix >= one {
                continue;
            }
            let s: u32 = (k..order.len()).map(|l| p[order[l]]).sum();
            if s == 0 {
                return None;
            }
            let need = (&one - &prefix) / Rational::from_integer(s.into());
            if need > best {
                best = need;
            }
        }
        u.push(best);
    }
    Some(u)
}

fn weights_to_exponents(u: &[Rational]) -> Vec<ExtRational> {
    u.iter().map(ExtRational::from_weight).collect()
}

fn max_monomial_core(f: &Poly) -> Result<(Centre, InvariantSeq, Vec<usize>)> {
    if f.is_zero() {
        return Err(Error::pre("zero function"));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::pre(format!("`{f}` is a unit at the origin")));
    }
    let n = f.nvars();
    let newton = NewtonPolyhedron::of(f);
    let vars = f.vars();
    let mut perms = permutations(n);
    perms.sort_by(|a, b| {
        let an: Vec<&str> = a.iter().map(|&i| vars.name(i)).collect();
        let bn: Vec<&str> = b.iter().map(|&i| vars.name(i)).collect();
        an.cmp(&bn)
    });
    let mut best: Option<(InvariantSeq, Vec<usize>, Vec<Rational>)> = None;
    for p in perms {
        let Some(u) = greedy_weights(&newton.minimal_points, &p) else { continue };
        let seq = InvariantSeq::new(weights_to_exponents(&u))?;
        let better = best.as_ref().is_none_or(|(b, _, _)| lex_compare(&seq, b) == Ordering::Greater);
        if better {
            best = Some((seq, p, u));
        }
    }
    let (seq, order, u) = best.ok_or_else(|| Error::pre("no admissible monomial centre"))?;
    let mut exps = vec![ExtRational::Infinity; n];
    for (k, &i) in order.iter().enumerate() {
        exps[i] = ExtRational::from_weight(&u[k]);
    }
    let centre = Centre::new(vars, exps, None)?;
    Ok((centre, seq, order))
}

/// Small integer shears `x_i ↦ x_i + c·x_j`.
pub fn shear_catalogue(n: usize) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for c in [1, -1, 2, -2, 3, -3] {
                    out.push((i, j, c));
                }
            }
        }
    }
    out
}

pub fn apply_shear(f: &Poly, i: usize, j: usize, c: i64) -> Poly {
    let vars = f.vars();
    let images: Vec<Poly> = (0..f.nvars())
        .map(|k| {
            if k == i {
                &Poly::var(vars, i) + &Poly::var(vars, j).scale(&Rational::from_integer(c.into()))
            } else {
                Poly::var(vars, k)
            }
        })
        .collect();
    f.substitute(&images).expect("same chart")
}

/// The lexicographically maximal admissible monomial centre in the given
/// coordinates. This bounds the invariant from below; a warning is attached
/// when the sequence violates the constraints or a small shear does better.
pub fn max_monomial_centre(f: &Poly) -> Result<MonomialInvariant> {
    let (centre, seq, order) = max_monomial_core(f)?;
    let mut warnings = Vec::new();
    if !is_admissible(&centre, f)? {
        return Err(Error::Certification(format!("centre {centre} is not admissible for `{f}`")));
    }
    let validity = validate_invariant(&seq);
    if let Validity::Invalid(j) = validity {
        warnings.push(format!("{seq} fails the invariant constraints at entry {j}; lower bound only"));
    }
    for (i, j, c) in shear_catalogue(f.nvars()) {
        let g = apply_shear(f, i, j, c);
        if let Ok((_, s, _)) = max_monomial_core(&g) {
            if lex_compare(&s, &seq) == Ordering::Greater {
                let vars = f.vars();
                warnings.push(format!(
                    "lower bound: {} -> {} + {}*{} gives {s}",
                    vars.name(i),
                    vars.name(i),
                    c,
                    vars.name(j)
                ));
                break;
            }
        }
    }
    let invariant = InvariantSeq { validity, ..seq };
    Ok(MonomialInvariant { centre, invariant, order, warnings })
}

/// One step of the plane-curve preparation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneCurveInvariant {
    #[serde(skip)]
    pub invariant: InvariantSeq,
    /// Exact for multiplicity two, otherwise a lower bound.
    pub exact: bool,
    /// The variable of maximal contact, after preparation.
    pub main_var: usize,
    #[serde(skip)]
    pub prepared: Poly,
    pub log: Vec<String>,
}

fn plane_linear_catalogue() -> Vec<(usize, usize, i64)> {
    shear_catalogue(2)
}

/// `(d, a_2)` for a plane-curve germ at the origin.
pub fn plane_curve_invariant(f: &Poly) -> Result<PlaneCurveInvariant> {
    if f.nvars() != 2 {
        return Err(Error::pre("plane curve invariant needs two variables"));
    }
    if f.is_zero() || !f.constant_term().is_zero() {
        return Err(Error::pre(format!("`{f}` does not vanish at the origin")));
    }
    let d = f.min_degree().expect("nonzero");
    let mut log = Vec::new();
    let mut g = f.clone();
    let pure = |i: usize| {
        let mut m = Monomial::one();
        m.set(i, d);
        m
    };
    // Prefer a variable in which `g` is monic of degree `d`.
    let find_pure = |g: &Poly| {
        let cands: Vec<usize> = (0..2).filter(|&i| !g.coeff(&pure(i)).is_zero()).collect();
        let monic = cands.iter().copied().find(|&i| g.degree_in(i) == Some(d) && g.coefficients_in(i)[d as usize].is_constant());
        monic.or(cands.first().copied())
    };
    let mut u = find_pure(&g);
    if u.is_none() {
        for (i, j, c) in plane_linear_catalogue() {
            let h = apply_shear(f, i, j, c);
            if let Some(k) = find_pure(&h) {
                log.push(format!("shear {} -> {} + {}*{}", f.vars().name(i), f.vars().name(i), c, f.vars().name(j)));
                g = h;
                u = Some(k);
                break;
            }
        }
    }
    let vars = f.vars().clone();
    let fallback = |g: &Poly, mut log: Vec<String>, why: &str| -> Result<PlaneCurveInvariant> {
        let m = max_monomial_centre(g)?;
        log.push(format!("{why}; monomial lower bound"));
        Ok(PlaneCurveInvariant { invariant: m.invariant, exact: false, main_var: m.order[0], prepared: g.clone(), log })
    };
    let Some(u) = u else {
        return fallback(&g, log, "no pure power of the multiplicity after the shear catalogue");
    };
    let v = 1 - u;
    let coeffs = g.coefficients_in(u);
    let deg_u = coeffs.len() as u32 - 1;
    let lead = coeffs[deg_u as usize].clone();
    if d == 1 {
        let inv = InvariantSeq::from_rationals(&[Rational::one()])?.validated();
        return Ok(PlaneCurveInvariant { invariant: inv, exact: true, main_var: u, prepared: g, log });
    }
    if deg_u == d && lead.is_constant() && d == 2 {
        // a u^2 + b u + c with discriminant b^2 - 4ac in v alone.
        let a = &coeffs[2];
        let b = &coeffs[1];
        let c = &coeffs[0];
        let disc = &(b * b) - &(a * c).scale(&Rational::from_integer(4.into()));
        let a2 = match disc.min_degree() {
            None => ExtRational::Infinity,
            Some(k) => ExtRational::int(k as i64),
        };
        log.push(format!("complete the square in {}", vars.name(u)));
        let shift = &Poly::var(&vars, u) - &b.scale(&(Rational::one() / (lead.constant_term() * Rational::from_integer(2.into()))));
        let prepared = substitute_var(&g, u, &shift);
        let inv = InvariantSeq::new(vec![ExtRational::int(2), a2])?.validated();
        return Ok(PlaneCurveInvariant { invariant: inv, exact: true, main_var: u, prepared, log });
    }
    if deg_u == d && lead.is_constant() {
        let lc = lead.constant_term();
        let shift_poly = coeffs[(d - 1) as usize].scale(&(Rational::one() / (lc * Rational::from_integer(d.into()))));
        let prepared = if shift_poly.is_zero() {
            g.clone()
        } else {
            log.push(format!("Tschirnhaus shift in {}", vars.name(u)));
            substitute_var(&g, u, &(&Poly::var(&vars, u) - &shift_poly))
        };
        let mut a2 = ExtRational::Infinity;
        for (m, _) in prepared.terms() {
            let i = m.exp(u);
            if i < d {
                let val = Rational::new((m.exp(v) * d).into(), (d - i).into());
                a2 = a2.min(ExtRational::Finite(val));
            }
        }
        let inv = InvariantSeq::new(vec![ExtRational::int(d as i64), a2])?.validated();
        return Ok(PlaneCurveInvariant { invariant: inv, exact: false, main_var: u, prepared, log });
    }
    fallback(&g, log, "not monic in the variable of maximal contact")
}

fn substitute_var(g: &Poly, u: usize, image: &Poly) -> Poly {
    let vars = g.vars();
    let images: Vec<Poly> = (0..g.nvars()).map(|k| if k == u { image.clone() } else { Poly::var(vars, k) }).collect();
    g.substitute(&images).expect("same chart")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, Vars};

    fn seq(s: &str) -> InvariantSeq {
        InvariantSeq::parse(s).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert_eq!(validate_invariant(&seq("2,3,4.5")), Validity::Valid);
        assert_eq!(validate_invariant(&seq("2,3,5.5")), Validity::Invalid(3));
        assert_eq!(validate_invariant(&seq("3/2,2")), Validity::Invalid(1));
        assert_eq!(validate_invariant(&seq("2,3,4.5,inf")), Validity::Valid);
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_compare(&seq("2,3,3"), &seq("2,3,6")), Ordering::Less);
        assert_eq!(lex_compare(&seq("2,2"), &seq("2,2,7")), Ordering::Greater);
        assert_eq!(lex_compare(&seq("2,2"), &seq("2,2,inf")), Ordering::Equal);
        assert!(seq("1,1") < seq("1,2"));
    }

    #[test]
    fn numerics_examples() {
        let c = canonical_numerics(&seq("2,2,7")).unwrap();
        assert!(c.below_236 && c.in_ade_list && c.kappa3_above_1_or_22);
        assert_eq!(c.kappa3, rat(8, 7));
        let c = canonical_numerics(&seq("2,3,6")).unwrap();
        assert!(!c.below_236 && !c.in_ade_list);
        assert_eq!(canonical_numerics(&seq("2,3,5")).unwrap().kappa3, rat(31, 30));
        assert!(canonical_numerics(&seq("1,2")).is_err());
    }

    fn p3(s: &str) -> Poly {
        Poly::parse(s, &Vars::xyz()).unwrap()
    }

    #[test]
    fn table_invariants() {
        assert_eq!(max_monomial_centre(&p3("x^2 + y^3 + z^5")).unwrap().invariant, seq("2,3,5"));
        for n in 4..=7 {
            let f = p3(&format!("x^2 + y^2*z + z^{}", n - 1));
            assert_eq!(max_monomial_centre(&f).unwrap().invariant, seq("2,3,3"));
        }
        assert_eq!(max_monomial_centre(&p3("x^2 + y^3 + y*z^3")).unwrap().invariant, seq("2,3,4.5"));
    }

    #[test]
    fn shear_warning() {
        let m = max_monomial_centre(&Poly::parse("(x+y)^2", &Vars::xy()).unwrap()).unwrap();
        assert_eq!(m.invariant, seq("2,2"));
        assert!(m.warnings.iter().any(|w| w.contains("(2)")));
    }

    #[test]
    fn plane_curves() {
        let f = |s: &str| plane_curve_invariant(&Poly::parse(s, &Vars::xy()).unwrap()).unwrap();
        assert_eq!(f("y^2 - x^3").invariant, seq("2,3"));
        assert_eq!(f("y^2 - x^4").invariant, seq("2,4"));
        assert_eq!(f("y^2 - x^2").invariant, seq("2,2"));
        assert!(f("y^2 - x^2").exact);
        let e8 = f("y^3 - x^5");
        assert_eq!((e8.invariant.clone(), e8.exact), (seq("3,5"), false));
        assert_eq!(f("y^2 + 2*x*y + x^2 - x^3").invariant, seq("2,3"));
    }

    #[test]
    fn newton_minimal_points() {
        let n = NewtonPolyhedron::of(&p3("x^2 + x^3*y + y^2*z"));
        assert_eq!(n.minimal_points.len(), 2);
    }
}
