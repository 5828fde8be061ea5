//! Surface singularities in three variables.
//!
//! The class is read off the rank of the quadratic part, the splitting
//! lemma in the Morse directions, the root pattern of the binary cubic
//! that remains in corank two, and the Milnor number. The invariant
//! reported is the one of the class; a monomial lower bound on the
//! prepared equation is attached for comparison.

use std::fmt;

use num_traits::{One, Zero};

use super::{is_isolated_singularity, milnor_number, Isolation, Milnor};
use crate::centre::Centre;
use crate::invariant::{lex_compare, max_monomial_centre, InvariantSeq};
use crate::ring::linalg::Matrix;
use crate::ring::{int, rat, Monomial, Poly, Rational, UniPoly};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularityClass {
    Smooth,
    NormalCrossings2,
    WhitneyUmbrella,
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
    Other(Vec<String>),
}

impl SingularityClass {
    pub fn tag(&self) -> String {
        match self {
            SingularityClass::Smooth => "smooth".into(),
            SingularityClass::NormalCrossings2 => "normal_crossings_2".into(),
            SingularityClass::WhitneyUmbrella => "whitney_umbrella".into(),
            SingularityClass::A(n) => format!("A{n}"),
            SingularityClass::D(n) => format!("D{n}"),
            SingularityClass::E6 => "E6".into(),
            SingularityClass::E7 => "E7".into(),
            SingularityClass::E8 => "E8".into(),
            SingularityClass::Other(_) => "other".into(),
        }
    }

    pub fn is_ade(&self) -> bool {
        matches!(
            self,
            SingularityClass::A(_) | SingularityClass::D(_) | SingularityClass::E6 | SingularityClass::E7 | SingularityClass::E8
        )
    }

    /// Invariant of the class, `None` for `other`.
    pub fn table_invariant(&self) -> Option<InvariantSeq> {
        let v = |xs: &[Rational]| InvariantSeq::from_rationals(xs).expect("table entries are valid");
        Some(match self {
            SingularityClass::Smooth => v(&[int(1)]),
            SingularityClass::NormalCrossings2 => v(&[int(2), int(2)]),
            SingularityClass::WhitneyUmbrella | SingularityClass::D(_) => v(&[int(2), int(3), int(3)]),
            SingularityClass::A(n) => v(&[int(2), int(2), int(*n as i64 + 1)]),
            SingularityClass::E6 => v(&[int(2), int(3), int(4)]),
            SingularityClass::E7 => v(&[int(2), int(3), rat(9, 2)]),
            SingularityClass::E8 => v(&[int(2), int(3), int(5)]),
            SingularityClass::Other(_) => return None,
        })
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Weights at which the normal form of the class is quasi-homogeneous of
/// order one, as exponents in variable order `x, y, z`.
pub fn quasi_homogeneous_exponents(class: &SingularityClass) -> Option<Vec<Rational>> {
    Some(match class {
        SingularityClass::A(n) => vec![int(2), int(2), int(*n as i64 + 1)],
        SingularityClass::D(n) => {
            let n = *n as i64;
            vec![int(2), int(2) + rat(2, n - 2), int(n - 1)]
        }
        SingularityClass::E6 => vec![int(2), int(3), int(4)],
        SingularityClass::E7 => vec![int(2), int(3), rat(9, 2)],
        SingularityClass::E8 => vec![int(2), int(3), int(5)],
        SingularityClass::WhitneyUmbrella => vec![int(2), int(3), int(3)],
        _ => return None,
    })
}

#[derive(Clone, Debug)]
pub struct SurfaceReport {
    pub class: SingularityClass,
    /// Invariant of the class, or the monomial bound for `other`.
    pub invariant: Option<InvariantSeq>,
    /// Monomial lower bound on the prepared equation.
    pub monomial_bound: Option<InvariantSeq>,
    pub centre: Option<Centre>,
    pub milnor: Option<Milnor>,
    pub isolation: Option<Isolation>,
    /// Prepared equation `d₀x² + h(y,z)` (or `d₀x² + d₁y² + k(z)`) below
    /// the cap.
    pub prepared: Option<Poly>,
    pub cap: u32,
    pub diagnostics: Vec<String>,
}

/// Congruence diagonalisation `Pᵀ A P = diag` of a symmetric matrix, with
/// the nonzero entries first.
pub fn diagonalize(a: &Matrix) -> (Vec<Rational>, Matrix) {
    let n = a.len();
    let mut a = a.clone();
    let mut p = crate::ring::linalg::identity(n);
    let add_col = |m: &mut Matrix, dst: usize, src: usize, c: &Rational| {
        for row in m.iter_mut() {
            let v = &row[src] * c;
            row[dst] += v;
        }
    };
    let add_row = |m: &mut Matrix, dst: usize, src: usize, c: &Rational| {
        let r = m[src].clone();
        for (x, y) in m[dst].iter_mut().zip(r) {
            *x += y * c;
        }
    };
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
                for row in p.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                let one = Rational::one();
                add_col(&mut a, k, j, &one);
                add_row(&mut a, k, j, &one);
                add_col(&mut p, k, j, &one);
            } else {
                continue;
            }
        }
        for j in k + 1..n {
            if a[j][k].is_zero() {
                continue;
            }
            let c = -(&a[j][k] / &a[k][k]);
            add_col(&mut a, j, k, &c);
            add_row(&mut a, j, k, &c);
            add_col(&mut p, j, k, &c);
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| !a[i][i].is_zero()).collect();
    order.extend((0..n).filter(|&i| a[i][i].is_zero()));
    let diag = order.iter().map(|&i| a[i][i].clone()).collect();
    let p = p.iter().map(|row| order.iter().map(|&i| row[i].clone()).collect()).collect();
    (diag, p)
}

/// Symmetric matrix of the quadratic part.
pub fn quadratic_form(f: &Poly) -> Matrix {
    let n = f.nvars();
    let q = f.homogeneous_part(2);
    let mut a = vec![vec![Rational::zero(); n]; n];
    for (m, c) in q.terms() {
        let idx: Vec<usize> = (0..n).filter(|&i| m.exp(i) > 0).collect();
        if idx.len() == 1 {
            a[idx[0]][idx[0]] = c.clone();
        } else {
            let h = c / int(2);
            a[idx[0]][idx[1]] = h.clone();
            a[idx[1]][idx[0]] = h;
        }
    }
    a
}

fn replace_var(g: &Poly, v: usize, phi: &Poly) -> Poly {
    let imgs: Vec<Poly> = (0..g.nvars()).map(|i| if i == v { phi.clone() } else { Poly::var(g.vars(), i) }).collect();
    g.substitute(&imgs).expect("same variables")
}

/// Splitting lemma in the variable `v`, where the quadratic part of `g`
/// involves `x_v` only through `d·x_v²`: returns `h` free of `x_v` with
/// `g = u·(x_v − φ)² + h`, exact below degree `cap`.
pub fn morse_split(g: &Poly, v: usize, cap: u32) -> Poly {
    let d = g.coeff(&{
        let mut m = Monomial::one();
        m.set(v, 2);
        m
    });
    let xv = Poly::var(g.vars(), v);
    let r = g - &(&xv * &xv).scale(&d);
    let dr = r.derivative(v);
    let scale = -(Rational::one() / (int(2) * &d));
    let mut phi = Poly::zero(g.vars());
    for _ in 0..cap {
        let next = replace_var(&dr, v, &phi).scale(&scale).truncated(cap);
        if next == phi {
            break;
        }
        phi = next;
    }
    replace_var(g, v, &phi).truncated(cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CubicType {
    Zero,
    Distinct,
    Double,
    Triple,
}

fn cubic_coeffs(h: &Poly, y: usize, z: usize) -> [Rational; 4] {
    let c = |a: u32, b: u32| {
        let mut m = Monomial::one();
        m.set(y, a);
        m.set(z, b);
        h.coeff(&m)
    };
    [c(3, 0), c(2, 1), c(1, 2), c(0, 3)]
}

fn cubic_type(k: &[Rational; 4]) -> CubicType {
    let [a, b, c, d] = k;
    if k.iter().all(|x| x.is_zero()) {
        return CubicType::Zero;
    }
    let disc = b * b * c * c - int(4) * a * c * c * c - int(4) * b * b * b * d - int(27) * a * a * d * d
        + int(18) * a * b * c * d;
    if !disc.is_zero() {
        return CubicType::Distinct;
    }
    let h0 = b * b - int(3) * a * c;
    let h1 = b * c - int(9) * a * d;
    let h2 = c * c - int(3) * b * d;
    if h0.is_zero() && h1.is_zero() && h2.is_zero() {
        CubicType::Triple
    } else {
        CubicType::Double
    }
}

/// Direction `(v_y, v_z)` killed by the squared factor of a binary cubic
/// with exactly one double root.
fn double_root_direction(k: &[Rational; 4]) -> Option<[Rational; 2]> {
    let [a, b, c, d] = k;
    if a.is_zero() && b.is_zero() {
        return Some([int(1), int(0)]);
    }
    let p = UniPoly::new(vec![d.clone(), c.clone(), b.clone(), a.clone()]);
    let g = p.gcd(&p.derivative());
    if g.degree() != Some(1) {
        return None;
    }
    let r = -(&g.coeffs()[0] / &g.coeffs()[1]);
    Some([r, int(1)])
}

fn apply(p: &Matrix, v: &[Rational]) -> Vec<Rational> {
    p.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Classify the surface `f = 0` at the origin.
pub fn classify_surface(f: &Poly, cap: u32) -> Result<SurfaceReport> {
    if f.nvars() != 3 {
        return Err(Error::pre("classify_surface needs three variables"));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::pre("f does not vanish at the origin"));
    }
    let mut rep = SurfaceReport {
        class: SingularityClass::Other(vec![]),
        invariant: None,
        monomial_bound: None,
        centre: None,
        milnor: None,
        isolation: None,
        prepared: None,
        cap,
        diagnostics: vec![],
    };
    if !f.homogeneous_part(1).is_zero() {
        rep.class = SingularityClass::Smooth;
        rep.invariant = rep.class.table_invariant();
        return Ok(rep);
    }
    let (diag, p) = diagonalize(&quadratic_form(f));
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let g = f.linear_change(&p).truncated(cap);
    let milnor = milnor_number(f, cap)?;
    rep.milnor = Some(milnor);
    let mut diags = Vec::new();
    let isolation = |hint: Option<Vec<Rational>>, rep: &mut SurfaceReport| -> Result<Isolation> {
        let hints: Vec<Vec<Rational>> = hint.into_iter().collect();
        let iso = is_isolated_singularity(f, cap, &hints)?;
        rep.isolation = Some(iso.clone());
        Ok(iso)
    };
    let (class, prepared) = match rank {
        0 => {
            diags.push("quadratic part vanishes: multiplicity at least three".into());
            (SingularityClass::Other(vec![]), g.clone())
        }
        3 => {
            if milnor != Milnor::Finite(1) {
                diags.push(format!("Milnor number {milnor} disagrees with a Morse point"));
            }
            (SingularityClass::A(1), g.clone())
        }
        2 => {
            let h = morse_split(&g, 0, cap);
            let k = morse_split(&h, 1, cap);
            let x = Poly::var(g.vars(), 0);
            let y = Poly::var(g.vars(), 1);
            let prepared = &(&(&x * &x).scale(&diag[0]) + &(&y * &y).scale(&diag[1])) + &k;
            match k.min_degree() {
                Some(e) => {
                    let n = e - 1;
                    if milnor != Milnor::Finite(n as usize) {
                        diags.push(format!("Milnor number {milnor} disagrees with A{n}"));
                        (SingularityClass::Other(vec![]), prepared)
                    } else {
                        (SingularityClass::A(n), prepared)
                    }
                }
                None => match milnor {
                    Milnor::Finite(m) => (SingularityClass::A(m as u32), prepared),
                    Milnor::Unbounded => {
                        let hint = apply(&p, &[int(0), int(0), int(1)]);
                        match isolation(Some(hint), &mut rep)? {
                            Isolation::NonIsolated { .. } => (SingularityClass::NormalCrossings2, prepared),
                            _ => {
                                diags.push(format!("corank one beyond degree {cap}: isolatedness undecided"));
                                (SingularityClass::Other(vec![]), prepared)
                            }
                        }
                    }
                },
            }
        }
        _ => {
            let h = morse_split(&g, 0, cap);
            let x = Poly::var(g.vars(), 0);
            let prepared = &(&x * &x).scale(&diag[0]) + &h;
            let k3 = cubic_coeffs(&h, 1, 2);
            let class = match cubic_type(&k3) {
                CubicType::Zero => {
                    diags.push("cubic part vanishes in the kernel of the quadratic form".into());
                    SingularityClass::Other(vec![])
                }
                CubicType::Distinct => {
                    if milnor != Milnor::Finite(4) {
                        diags.push(format!("Milnor number {milnor} disagrees with D4"));
                        SingularityClass::Other(vec![])
                    } else {
                        SingularityClass::D(4)
                    }
                }
                CubicType::Double => match milnor {
                    Milnor::Finite(m) if m >= 5 => SingularityClass::D(m as u32),
                    Milnor::Finite(m) => {
                        diags.push(format!("Milnor number {m} too small for a double-root cubic"));
                        SingularityClass::Other(vec![])
                    }
                    Milnor::Unbounded => {
                        let hint = double_root_direction(&k3).map(|[a, b]| apply(&p, &[int(0), a, b]));
                        match isolation(hint, &mut rep)? {
                            Isolation::NonIsolated { .. } => SingularityClass::WhitneyUmbrella,
                            _ => {
                                diags.push(format!("D-type beyond degree {cap} or undecided isolatedness"));
                                SingularityClass::Other(vec![])
                            }
                        }
                    }
                },
                CubicType::Triple => match milnor {
                    Milnor::Finite(6) => SingularityClass::E6,
                    Milnor::Finite(7) => SingularityClass::E7,
                    Milnor::Finite(8) => SingularityClass::E8,
                    m => {
                        diags.push(format!("triple-root cubic with Milnor number {m}: beyond E8"));
                        SingularityClass::Other(vec![])
                    }
                },
            };
            (class, prepared)
        }
    };
    let prepared = prepared.uncapped();
    match max_monomial_centre(&prepared) {
        Ok(mi) => {
            diags.extend(mi.warnings.iter().cloned());
            rep.monomial_bound = Some(mi.invariant.clone());
            rep.centre = Some(mi.centre.clone());
        }
        Err(e) => diags.push(format!("monomial bound unavailable: {e}")),
    }
    rep.invariant = class.table_invariant().or_else(|| rep.monomial_bound.clone());
    if let (Some(t), Some(b)) = (class.table_invariant(), &rep.monomial_bound) {
        if lex_compare(b, &t) == std::cmp::Ordering::Greater {
            diags.push(format!("monomial bound {b} exceeds the invariant {t} of the class"));
        }
    }
    rep.class = match class {
        SingularityClass::Other(_) => SingularityClass::Other(diags.clone()),
        c => c,
    };
    rep.prepared = Some(prepared);
    rep.diagnostics = diags;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::DEFAULT_CAP;
    use crate::ring::linalg::{mat_mul, transpose};
    use crate::ring::Vars;

    fn p(s: &str) -> Poly {
        Poly::parse(s, &Vars::xyz()).unwrap()
    }

    fn class(s: &str) -> SingularityClass {
        classify_surface(&p(s), DEFAULT_CAP).unwrap().class
    }

    #[test]
    fn diagonalisation_is_a_congruence() {
        let a = quadratic_form(&p("x*y + y*z + 2*x*z"));
        let (d, q) = diagonalize(&a);
        let m = mat_mul(&mat_mul(&transpose(&q), &a), &q);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d[i].clone() } else { int(0) };
                assert_eq!(m[i][j], want);
            }
        }
        assert_eq!(d.iter().filter(|x| !x.is_zero()).count(), 3);
    }

    #[test]
    fn table_rows() {
        assert_eq!(class("x*y"), SingularityClass::NormalCrossings2);
        assert_eq!(class("x^2 - y^2*z"), SingularityClass::WhitneyUmbrella);
        for n in 1..=5u32 {
            assert_eq!(class(&format!("x^2 + y^2 + z^{}", n + 1)), SingularityClass::A(n));
        }
        for n in 4..=7u32 {
            assert_eq!(class(&format!("x^2 + y^2*z + z^{}", n - 1)), SingularityClass::D(n));
        }
        assert_eq!(class("x^2 + y^3 + z^4"), SingularityClass::E6);
        assert_eq!(class("x^2 + y^3 + y*z^3"), SingularityClass::E7);
        assert_eq!(class("x^2 + y^3 + z^5"), SingularityClass::E8);
    }

    #[test]
    fn examples() {
        assert_eq!(class("x^2 + y^2*z + z^4"), SingularityClass::D(5));
        assert_eq!(class("x + y^2"), SingularityClass::Smooth);
        assert!(matches!(class("x^3 + y^3 + z^3"), SingularityClass::Other(_)));
        assert!(matches!(class("x^2 + y^3 + z^7"), SingularityClass::Other(_)));
        let r = classify_surface(&p("x^2 + y^3 + y*z^3"), DEFAULT_CAP).unwrap();
        assert_eq!(r.invariant.unwrap().to_string(), "(2,3,4.5)");
        assert_eq!(r.monomial_bound.unwrap().to_string(), "(2,3,4.5)");
    }

    #[test]
    fn after_linear_change() {
        // x ↦ x + y + z, y ↦ y − 2z, z ↦ z + x.
        let t = vec![
            vec![int(1), int(1), int(1)],
            vec![int(0), int(1), int(-2)],
            vec![int(1), int(0), int(1)],
        ];
        for (s, c) in [
            ("x^2 + y^2 + z^4", SingularityClass::A(3)),
            ("x^2 + y^3 + z^4", SingularityClass::E6),
            ("x^2 + y^3 + z^5", SingularityClass::E8),
            ("x^2 + y^2*z + z^4", SingularityClass::D(5)),
            ("x^2 - y^2*z", SingularityClass::WhitneyUmbrella),
            ("x*y", SingularityClass::NormalCrossings2),
        ] {
            let f = p(s).linear_change(&t);
            assert_eq!(classify_surface(&f, DEFAULT_CAP).unwrap().class, c, "{s}");
        }
    }

    #[test]
    fn morse_split_of_nonsplit_a2() {
        // (x + y^2)^2 + y^2 + z^3 has h = y^2 + z^3 after the split.
        let g = p("(x + y^2)^2 + y^2 + z^3");
        assert_eq!(morse_split(&g, 0, 8), p("y^2 + z^3"));
    }
}
