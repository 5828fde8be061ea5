//! Centre selection for Poisson triples given in normal-form coordinates,
//! and certification of a single blowup step.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::Serialize;

use crate::blowup::{
    chart_function, chart_polyvector, check_centre, common_zeros, pullback_function, pullback_polyvector, slice_charts,
    to_slice_vars, to_slice_vars_pv, CentreCheck, WitnessTag,
};
use crate::centre::Centre;
use crate::classify::{classify_surface, detect_duval_point, detect_nonnilpotent_point, Isolation, SingularityClass, DEFAULT_CAP};
use crate::invariant::{lex_compare, max_monomial_centre, plane_curve_invariant, InvariantSeq, MonomialInvariant};
use crate::polyvector::lie::Lie3Class;
use crate::polyvector::{is_poisson, is_tangent, is_tangent_ideal, Polyvector};
use crate::ring::{int, ExtRational, Poly, Rational};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    #[serde(rename = "a1_gt_1")]
    A1Gt1,
    #[serde(rename = "ab_point")]
    AbPoint,
    #[serde(rename = "heis_curve_vanishing")]
    HeisCurveVanishing,
    #[serde(rename = "heis_surface_vanishing")]
    HeisSurfaceVanishing,
    #[serde(rename = "inv_233_surface")]
    Inv233Surface,
    #[serde(rename = "generic_assoc")]
    GenericAssoc,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::A1Gt1 => "a1_gt_1",
            CaseTag::AbPoint => "ab_point",
            CaseTag::HeisCurveVanishing => "heis_curve_vanishing",
            CaseTag::HeisSurfaceVanishing => "heis_surface_vanishing",
            CaseTag::Inv233Surface => "inv_233_surface",
            CaseTag::GenericAssoc => "generic_assoc",
        }
    }
}

/// A selected centre at one point. `sigma`, `objects` and `centre` live in
/// the selection coordinates: translated to the point and, for the
/// Heisenberg surface case, with `x` replaced by `x + A(f)`.
#[derive(Clone, Debug)]
pub struct CentreSelection {
    pub case: CaseTag,
    pub point: Vec<Rational>,
    pub centre: Centre,
    /// New coordinates in terms of the translated old ones, when changed.
    pub coordinates: Option<Vec<Poly>>,
    pub sigma: Polyvector,
    pub objects: Vec<Poly>,
    pub ideal: bool,
    pub invariant: Option<InvariantSeq>,
    pub check: CentreCheck,
    pub rationale: String,
    pub extra: Vec<(String, bool)>,
}

#[derive(Clone, Debug)]
pub struct ChartCertificate {
    pub slice_var: String,
    pub residual_order: i64,
    pub sigma: Option<Polyvector>,
    pub strict: Vec<Poly>,
    pub poisson: Option<bool>,
    pub tangent_strict: Option<bool>,
    pub tangent_exceptional: Option<bool>,
    pub invariant: Option<InvariantSeq>,
    pub descent: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct StepReport {
    pub centre: Centre,
    pub check: Option<CentreCheck>,
    pub regular: Option<bool>,
    pub exceptional_tangent: Option<bool>,
    pub parent_invariant: Option<InvariantSeq>,
    pub charts: Vec<ChartCertificate>,
    pub flags: Vec<String>,
}

impl StepReport {
    pub fn passed(&self) -> bool {
        self.charts.iter().all(|c| {
            c.poisson != Some(false) && c.tangent_strict != Some(false) && c.tangent_exceptional != Some(false)
        }) && self.regular != Some(false)
    }
}

/// Monomial invariant of the ideal generated by `gens`, from a linear
/// combination whose support is the union of the supports.
pub fn ideal_monomial_invariant(gens: &[Poly]) -> Result<MonomialInvariant> {
    let Some(first) = gens.first() else { return Err(Error::pre("empty ideal")) };
    let union: std::collections::BTreeSet<_> = gens.iter().flat_map(|g| g.terms().map(|(m, _)| *m)).collect();
    for shift in 1..8i64 {
        let mut h = Poly::zero(first.vars());
        for (k, g) in gens.iter().enumerate() {
            h = &h + &g.scale(&int(shift + 2 * k as i64));
        }
        let supp: std::collections::BTreeSet<_> = h.terms().map(|(m, _)| *m).collect();
        if supp == union {
            return max_monomial_centre(&h);
        }
    }
    Err(Error::Indeterminate("generators cancel in every tried combination".into()))
}

fn origin(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

fn unweighted(vars: &crate::ring::Vars, infinite: &[usize]) -> Result<Centre> {
    let e = (0..vars.len()).map(|i| if infinite.contains(&i) { ExtRational::Infinity } else { ExtRational::int(1) }).collect();
    Centre::new(vars, e, None)
}

fn assert_conilpotent(sigma: &Polyvector, c: &Centre) -> Result<CentreCheck> {
    let chk = check_centre(sigma, c)?;
    if !chk.conilpotent {
        let w: Vec<String> = chk.witnesses.iter().map(|w| w.describe(c)).collect();
        return Err(Error::Certification(format!("selected centre {c} is not conilpotent: {}", w.join("; "))));
    }
    Ok(chk)
}

/// Heisenberg normal form `(x + g)∂y∧∂z + [μ, h]` with `g, h` free of `x`:
/// returns `(g, h is zero)`.
fn heisenberg_shape(s: &Polyvector) -> Option<(Poly, bool)> {
    let vars = s.vars();
    let x = Poly::var(vars, 0);
    let g = &s.bracket_coeff(1, 2) - &x;
    let hy = s.bracket_coeff(2, 0);
    let hz = s.bracket_coeff(0, 1);
    let free = |p: &Poly| p.degree_in(0).unwrap_or(0) == 0;
    if !(free(&g) && free(&hy) && free(&hz)) {
        return None;
    }
    if hy.derivative(2) != hz.derivative(1) {
        return None;
    }
    Some((g, hy.is_zero() && hz.is_zero()))
}

/// Centre selection on a curve triple `(X, Y = V(gens), σ)` at each of the
/// given points of maximal invariant.
pub fn select_centre_31(sigma: &Polyvector, gens: &[Poly], points: &[Vec<Rational>]) -> Result<Vec<CentreSelection>> {
    if sigma.nvars() != 3 || sigma.degree() != 2 {
        return Err(Error::pre("curve triples need a bivector in three variables"));
    }
    let mut out = Vec::new();
    for p in points {
        let s = sigma.translate(p);
        let gs: Vec<Poly> = gens.iter().map(|g| g.translate(p)).collect();
        if gs.iter().any(|g| !g.constant_term().is_zero()) {
            return Err(Error::pre("the point is not on the curve"));
        }
        let o = origin(3);
        let rep = detect_nonnilpotent_point(&s, &gs, &o)?;
        if rep.nonnilpotent == Some(true) {
            return Err(Error::pre("non-nilpotent points are excluded before centre selection"));
        }
        let lie = rep.lie.expect("linearised").class;
        let mi = ideal_monomial_invariant(&gs)?;
        let a1 = mi.invariant.entries()[0].clone();
        let vars = s.vars().clone();
        let (case, centre, sel_sigma, objects, coords, rationale) = if a1 > ExtRational::int(1) {
            (CaseTag::A1Gt1, mi.centre.clone(), s, gs, None, "associated centre of the curve".to_string())
        } else {
            match lie {
                Lie3Class::Abelian => (
                    CaseTag::AbPoint,
                    unweighted(&vars, &[])?,
                    s,
                    gs,
                    None,
                    "unweighted centre of the point".to_string(),
                ),
                Lie3Class::Heisenberg => {
                    let Some((g, surface)) = heisenberg_shape(&s) else {
                        return Err(Error::Refused(
                            "σ is not in the Heisenberg normal form (x + A(f))∂y∧∂z + [μ, B(f)]".into(),
                        ));
                    };
                    if surface {
                        let x = Poly::var(&vars, 0);
                        let new_in_old = vec![&x + &g, Poly::var(&vars, 1), Poly::var(&vars, 2)];
                        let old_in_new = vec![&x - &g, Poly::var(&vars, 1), Poly::var(&vars, 2)];
                        let s2 = s.change_coordinates(&new_in_old, &old_in_new, &vars)?;
                        let gs2: Vec<Poly> = gs.iter().map(|h| h.substitute(&old_in_new)).collect::<Result<_>>()?;
                        let mi2 = ideal_monomial_invariant(&gs2)?;
                        let Some(b) = mi2.invariant.entries().get(1).and_then(|e| e.finite().cloned()) else {
                            return Err(Error::Refused("a₂ is not finite in the normal-form coordinates".into()));
                        };
                        let c = Centre::new(
                            &vars,
                            vec![ExtRational::int(1), ExtRational::Finite(b.clone()), ExtRational::Finite(b.clone())],
                            None,
                        )?;
                        (
                            CaseTag::HeisSurfaceVanishing,
                            c,
                            s2,
                            gs2,
                            Some(new_in_old),
                            format!("b-completion of the unweighted centre of V(σ) with b = a₂ = {}", crate::ring::fmt_rational(&b)),
                        )
                    } else {
                        (
                            CaseTag::HeisCurveVanishing,
                            mi.centre.clone(),
                            s,
                            gs,
                            None,
                            "associated centre; V(σ) is a curve".to_string(),
                        )
                    }
                }
                other => {
                    return Err(Error::Refused(format!("linearisation of class {} is outside the recognised cases", other.name())));
                }
            }
        };
        let check = assert_conilpotent(&sel_sigma, &centre)?;
        let inv = ideal_monomial_invariant(&objects).ok().map(|m| m.invariant);
        out.push(CentreSelection {
            case,
            point: p.clone(),
            centre,
            coordinates: coords,
            sigma: sel_sigma,
            objects,
            ideal: true,
            invariant: inv,
            check,
            rationale,
            extra: vec![],
        });
    }
    Ok(out)
}

/// `σ` lies in the span of `x_i∂_i ∧ x_j∂_j`, `x_i∂_i ∧ ∂_k`, `x_j∂_j ∧ ∂_k`.
fn log_tangent(s: &Polyvector, i: usize, j: usize) -> bool {
    let vars = s.vars();
    let xi = Poly::var(vars, i);
    let xj = Poly::var(vars, j);
    let k = 3 - i - j;
    let div = |p: Poly, d: &Poly| p.is_zero() || p.div_exact(d).is_some();
    div(s.bracket_coeff(i, j), &(&xi * &xj)) && div(s.bracket_coeff(i, k), &xi) && div(s.bracket_coeff(j, k), &xj)
}

/// Centre selection on a surface triple `(X, f = 0, σ)`.
pub fn select_centre_32(sigma: &Polyvector, f: &Poly, points: &[Vec<Rational>]) -> Result<Vec<CentreSelection>> {
    if f.nvars() != 3 || sigma.degree() != 2 {
        return Err(Error::pre("surface triples need a bivector in three variables"));
    }
    let inv233 = InvariantSeq::from_rationals(&[int(2), int(3), int(3)])?;
    let mut out = Vec::new();
    for p in points {
        let s = sigma.translate(p);
        let g = f.translate(p);
        let o = origin(3);
        let d = detect_duval_point(&s, &g, &o)?;
        if d.duval == Some(true) {
            return Err(Error::pre("Du Val points are excluded before centre selection"));
        }
        let sr = classify_surface(&g, DEFAULT_CAP)?;
        let vars = g.vars().clone();
        let mut extra = Vec::new();
        let line_axis = match &sr.isolation {
            Some(Isolation::NonIsolated { direction }) => {
                let nz: Vec<usize> = (0..3).filter(|&i| !direction[i].is_zero()).collect();
                if nz.len() == 1 {
                    Some(nz[0])
                } else {
                    None
                }
            }
            _ => None,
        };
        let (case, centre, rationale) = match (&sr.class, sr.invariant.as_ref()) {
            (SingularityClass::WhitneyUmbrella, _) => {
                let Some(k) = line_axis else {
                    return Err(Error::Refused("the singular curve is not a coordinate axis".into()));
                };
                (CaseTag::Inv233Surface, unweighted(&vars, &[k])?, "unweighted centre of the singular curve C".to_string())
            }
            (SingularityClass::NormalCrossings2, _) => {
                let Some(k) = line_axis else {
                    return Err(Error::Refused("the double curve is not a coordinate axis".into()));
                };
                let (i, j) = match k {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                extra.push(("σ is logarithmic along the two branches".to_string(), log_tangent(&s, i, j)));
                (CaseTag::GenericAssoc, unweighted(&vars, &[k])?, "unweighted centre of the double curve".to_string())
            }
            (_, Some(inv)) => {
                let mi = max_monomial_centre(&g)?;
                if lex_compare(&mi.invariant, inv) != Ordering::Equal {
                    return Err(Error::Refused(format!(
                        "monomial centre {} does not realise the invariant {inv}: not in normal-form coordinates",
                        mi.centre
                    )));
                }
                if *inv == inv233 {
                    (CaseTag::Inv233Surface, mi.centre, "associated centre at an isolated D-type point".to_string())
                } else {
                    (CaseTag::GenericAssoc, mi.centre, "associated centre".to_string())
                }
            }
            (_, None) => return Err(Error::Refused("no invariant available at the point".into())),
        };
        let check = assert_conilpotent(&s, &centre)?;
        out.push(CentreSelection {
            case,
            point: p.clone(),
            centre,
            coordinates: None,
            sigma: s,
            objects: vec![g],
            ideal: false,
            invariant: sr.invariant.clone(),
            check,
            rationale,
            extra,
        });
    }
    Ok(out)
}

fn object_invariant(objects: &[Poly], ideal: bool) -> Option<InvariantSeq> {
    if objects.iter().any(|g| !g.constant_term().is_zero()) {
        return None;
    }
    if objects.len() == 1 && objects[0].nvars() == 2 {
        return plane_curve_invariant(&objects[0]).ok().map(|p| p.invariant);
    }
    if ideal || objects.len() > 1 {
        return ideal_monomial_invariant(objects).ok().map(|m| m.invariant);
    }
    max_monomial_centre(&objects[0]).ok().map(|m| m.invariant)
}

/// Largest plane-curve invariant over the rational singular points on the
/// exceptional divisor of a chart.
fn plane_chart_invariant(f: &Poly, constraints: &[Poly]) -> Result<Option<InvariantSeq>> {
    let mut sys = vec![f.clone()];
    sys.extend(f.gradient());
    sys.extend(constraints.iter().cloned());
    let cz = common_zeros(&sys)?;
    if cz.indeterminate.is_some() {
        return Ok(None);
    }
    let mut best = InvariantSeq::new(vec![ExtRational::int(1)])?;
    for q in &cz.points {
        let inv = plane_curve_invariant(&f.translate(q))?.invariant;
        if lex_compare(&inv, &best) == Ordering::Greater {
            best = inv;
        }
    }
    Ok(Some(best))
}

/// Lift `σ` and the objects through the blowup at `centre` and certify
/// regularity, tangency and invariant descent chart by chart.
pub fn certify_blowup_step(sigma: Option<&Polyvector>, objects: &[Poly], ideal: bool, centre: &Centre) -> Result<StepReport> {
    let mut flags = Vec::new();
    let vars = centre.vars().clone();
    let check = match sigma {
        Some(s) => {
            let chk = check_centre(s, centre)?;
            if !chk.codegenerate {
                let w = chk
                    .witnesses
                    .iter()
                    .find(|w| matches!(w.tag, WitnessTag::P | WitnessTag::CD1 | WitnessTag::CD2))
                    .or(chk.witnesses.first())
                    .map(|w| w.describe(centre))
                    .unwrap_or_default();
                return Err(Error::Certification(format!("centre {centre} is not codegenerate: {w}")));
            }
            Some(chk)
        }
        None => None,
    };
    let conilpotent = check.as_ref().is_some_and(|c| c.conilpotent);
    let pb = match sigma {
        Some(s) => {
            let pb = pullback_polyvector(s, centre)?;
            if !pb.regular {
                return Err(Error::Certification(format!("lift of σ has a pole along the exceptional divisor of {centre}")));
            }
            if conilpotent && !pb.exceptional_tangent {
                return Err(Error::Certification("conilpotent centre but the lift is not tangent to the exceptional divisor".into()));
            }
            Some(pb)
        }
        None => None,
    };
    let parent_invariant = object_invariant(objects, ideal);
    let fpbs: Vec<_> = objects.iter().map(|g| pullback_function(g, centre)).collect::<Result<_>>()?;
    let charts = slice_charts(centre)?;
    let mut certs = Vec::new();
    for (ci, ch) in charts.iter().enumerate() {
        let i = ch.slice_var;
        let strict: Vec<Poly> = fpbs
            .iter()
            .map(|fp| to_slice_vars(&chart_function(fp, ch), fp.t_index, i, &vars))
            .collect();
        let eta = match &pb {
            Some(pb) => Some(to_slice_vars_pv(&chart_polyvector(pb, ch)?, pb.t_index, i, &vars)?),
            None => None,
        };
        let poisson = eta.as_ref().map(|e| is_poisson(e).0);
        let mut tangent_strict = None;
        if let Some(e) = &eta {
            let live: Vec<Poly> = strict.iter().filter(|g| !g.is_constant()).cloned().collect();
            if !live.is_empty() {
                if ideal {
                    match is_tangent_ideal(e, &live)? {
                        Some(v) => {
                            if !v {
                                flags.push(format!("chart {}: generator-wise tangency fails", vars.name(i)));
                            }
                        }
                        None => flags.push(format!("chart {}: ideal tangency undecided", vars.name(i))),
                    }
                } else {
                    let mut ok = true;
                    for g in &live {
                        ok &= is_tangent(e, g)?;
                    }
                    tangent_strict = Some(ok);
                }
            }
        }
        let tangent_exceptional = match (&eta, conilpotent) {
            (Some(e), true) => Some(is_tangent(e, &Poly::var(&vars, i))?),
            _ => None,
        };
        let invariant = if vars.len() == 2 && strict.len() == 1 {
            let mut cons = vec![Poly::var(&vars, i)];
            cons.extend(charts[..ci].iter().map(|e| Poly::var(&vars, e.slice_var)));
            plane_chart_invariant(&strict[0], &cons)?
        } else {
            object_invariant(&strict, ideal)
        };
        let descent = match (&invariant, &parent_invariant) {
            (Some(c), Some(p)) => Some(lex_compare(c, p) == Ordering::Less),
            _ => None,
        };
        if descent == Some(false) {
            flags.push(format!(
                "chart {}: invariant {} does not drop below {} (lower bounds)",
                vars.name(i),
                invariant.as_ref().expect("compared"),
                parent_invariant.as_ref().expect("compared")
            ));
        }
        certs.push(ChartCertificate {
            slice_var: vars.name(i).to_string(),
            residual_order: ch.residual_order,
            sigma: eta,
            strict,
            poisson,
            tangent_strict,
            tangent_exceptional,
            invariant,
            descent,
        });
    }
    Ok(StepReport {
        centre: centre.clone(),
        check,
        regular: pb.as_ref().map(|p| p.regular),
        exceptional_tangent: pb.as_ref().map(|p| p.exceptional_tangent),
        parent_invariant,
        charts: certs,
        flags,
    })
}

/// A named triple of the bundled corpus.
pub struct TripleCase {
    pub name: &'static str,
    pub sigma: &'static str,
    /// Curve generators, or the surface equation.
    pub objects: Vec<&'static str>,
    pub surface: bool,
    pub expected: CaseTag,
}

pub fn triple_corpus() -> Vec<TripleCase> {
    vec![
        TripleCase {
            name: "heisenberg-curve",
            sigma: "(x + y^2 + z^2)*@y^@z + 4*z*(y^2 + z^2)*@x^@y - 4*y*(y^2 + z^2)*@x^@z",
            objects: vec!["x", "y^2 + z^2"],
            surface: false,
            expected: CaseTag::HeisCurveVanishing,
        },
        TripleCase {
            name: "heisenberg-surface",
            sigma: "(x + y^2 + z^3)*@y^@z",
            objects: vec!["x + y^2 + z^3", "y^2 - z^5"],
            surface: false,
            expected: CaseTag::HeisSurfaceVanishing,
        },
        TripleCase {
            name: "abelian-point",
            sigma: "x^2*@y^@z",
            objects: vec!["x", "y^2 - z^3"],
            surface: false,
            expected: CaseTag::AbPoint,
        },
        TripleCase {
            name: "space-curve",
            sigma: "(x^2 + y^3)*@x^@y",
            objects: vec!["x^2 + y^3", "x^3 + z^2"],
            surface: false,
            expected: CaseTag::A1Gt1,
        },
        TripleCase {
            name: "whitney",
            sigma: "2*x*@y^@z - 2*y*z*@z^@x - y^2*@x^@y",
            objects: vec!["x^2 - y^2*z"],
            surface: true,
            expected: CaseTag::Inv233Surface,
        },
        TripleCase {
            name: "normal-crossings",
            sigma: "x*y*@x^@z",
            objects: vec!["x*y"],
            surface: true,
            expected: CaseTag::GenericAssoc,
        },
        TripleCase {
            name: "a2-cubed",
            sigma: "",
            objects: vec!["x^2 + y^2 + z^3"],
            surface: true,
            expected: CaseTag::GenericAssoc,
        },
    ]
}

impl TripleCase {
    /// `σ` of the case; the empty string stands for `[μ, f³]`.
    pub fn sigma(&self, vars: &crate::ring::Vars) -> Result<Polyvector> {
        if self.sigma.is_empty() {
            let f = Poly::parse(self.objects[0], vars)?;
            return Ok(crate::polyvector::jacobian_poisson(&f.pow(3)));
        }
        Polyvector::parse(self.sigma, vars)
    }

    pub fn select(&self) -> Result<Vec<CentreSelection>> {
        let vars = crate::ring::Vars::xyz();
        let s = self.sigma(&vars)?;
        let objs: Vec<Poly> = self.objects.iter().map(|o| Poly::parse(o, &vars)).collect::<Result<_>>()?;
        let o = vec![origin(3)];
        if self.surface {
            select_centre_32(&s, &objs[0], &o)
        } else {
            select_centre_31(&s, &objs, &o)
        }
    }
}
