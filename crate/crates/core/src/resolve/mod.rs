//! Resolution drivers: embedded resolution of plane curves by weighted
//! blowups, and centre selection for Poisson triples in normal-form
//! coordinates.

pub mod poisson;

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::blowup::{chart_function, pullback_function, slice_charts, to_slice_vars, common_zeros, SliceChart};
use crate::centre::Centre;
use crate::exec::Exec;
use crate::invariant::{lex_compare, plane_curve_invariant, InvariantSeq};
use crate::polyvector::Polyvector;
use crate::ring::{fmt_rational, resultant, ExtRational, Poly, Rational};
use crate::{Error, Result};

pub use poisson::{
    certify_blowup_step, ideal_monomial_invariant, select_centre_31, select_centre_32, triple_corpus, CaseTag, CentreSelection,
    ChartCertificate, StepReport, TripleCase,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Singular,
    Smooth,
    TerminalNonNilpotent,
    TerminalDuval,
    Excluded,
    Indeterminate,
    MaxSteps,
}

/// Blowup of one singular point of a chart.
#[derive(Clone, Debug)]
pub struct PointStep {
    /// Chart coordinates of the point.
    pub point: Vec<Rational>,
    pub invariant: InvariantSeq,
    pub exact: bool,
    /// Centre at the origin of the prepared coordinates.
    pub centre: Centre,
    /// The germ after translation and preparation.
    pub prepared: Poly,
    pub log: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ResolutionNode {
    pub id: usize,
    pub parent: Option<usize>,
    /// Index into the parent's `points`.
    pub parent_point: Option<usize>,
    /// Slice variable (named as the chart variable that carries `t`) and
    /// residual group order.
    pub chart: Option<(String, i64)>,
    pub equation: Poly,
    pub sigma: Option<Polyvector>,
    /// Largest invariant over the singular points searched in this chart;
    /// `(1)` when there are none.
    pub invariant_here: InvariantSeq,
    pub status: NodeStatus,
    pub points: Vec<PointStep>,
    pub children: Vec<usize>,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub nodes: Vec<ResolutionNode>,
}

impl Resolution {
    pub fn root(&self) -> &ResolutionNode {
        &self.nodes[0]
    }

    pub fn blowups(&self) -> usize {
        self.nodes.iter().map(|n| n.points.len()).sum()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &ResolutionNode> {
        self.nodes.iter().filter(|n| n.children.is_empty())
    }

    /// Every leaf is certified smooth.
    pub fn complete(&self) -> bool {
        self.leaves().all(|n| n.status == NodeStatus::Smooth)
            && self.nodes.iter().all(|n| n.status != NodeStatus::Indeterminate)
    }

    /// Longest chain of blowups from the root.
    pub fn depth(&self) -> usize {
        fn go(r: &Resolution, i: usize) -> usize {
            let n = &r.nodes[i];
            n.children.iter().map(|&c| 1 + go(r, c)).max().unwrap_or(0)
        }
        go(self, 0)
    }

    /// Human-readable indented transcript.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        fn go(r: &Resolution, i: usize, depth: usize, out: &mut String) {
            let n = &r.nodes[i];
            let pad = "  ".repeat(depth);
            let chart = match &n.chart {
                Some((v, k)) => format!(" chart {v}=1 (order {k})"),
                None => String::new(),
            };
            let _ = writeln!(out, "{pad}#{}{chart}: {}  [{:?}] inv={}", n.id, n.equation, n.status, n.invariant_here);
            for p in &n.points {
                let pt: Vec<String> = p.point.iter().map(fmt_rational).collect();
                let _ = writeln!(
                    out,
                    "{pad}  point ({}) inv={}{} centre {}",
                    pt.join(","),
                    p.invariant,
                    if p.exact { "" } else { " (lower bound)" },
                    p.centre
                );
            }
            for f in &n.flags {
                let _ = writeln!(out, "{pad}  ! {f}");
            }
            for &c in &n.children {
                go(r, c, depth + 1, out);
            }
        }
        go(self, 0, 0, &mut out);
        out
    }
}

/// `f` is squarefree iff `res_v(f, ∂_v f) ≠ 0` for every variable `v` that
/// occurs.
pub fn is_squarefree(f: &Poly) -> Result<bool> {
    for v in 0..f.nvars() {
        if f.degree_in(v).unwrap_or(0) == 0 {
            continue;
        }
        if resultant(f, &f.derivative(v), v)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Sub {
    chart: Option<(String, i64)>,
    parent_point: Option<usize>,
    equation: Poly,
    invariant_here: InvariantSeq,
    status: NodeStatus,
    points: Vec<PointStep>,
    flags: Vec<String>,
    children: Vec<Sub>,
}

fn smooth_seq() -> InvariantSeq {
    InvariantSeq::new(vec![ExtRational::int(1)]).expect("valid")
}

fn point_step(eq: &Poly, q: &[Rational]) -> Result<PointStep> {
    let g = eq.translate(q);
    let pci = plane_curve_invariant(&g)?;
    let e = pci.invariant.entries();
    if e.len() < 2 {
        return Err(Error::Certification(format!("point {q:?} of `{eq}` is not singular")));
    }
    let u = pci.main_var;
    let mut exps = vec![ExtRational::Infinity; 2];
    exps[u] = e[0].clone();
    exps[1 - u] = e[1].clone();
    let centre = Centre::new(eq.vars(), exps, None)?;
    Ok(PointStep { point: q.to_vec(), invariant: pci.invariant, exact: pci.exact, centre, prepared: pci.prepared, log: pci.log })
}

fn explore(
    eq: Poly,
    constraints: Vec<Poly>,
    chart: Option<(String, i64)>,
    parent_point: Option<usize>,
    parent_inv: Option<(InvariantSeq, bool)>,
    steps_left: usize,
    exec: Exec,
) -> Result<Sub> {
    let mut sys = vec![eq.clone()];
    sys.extend(eq.gradient());
    sys.extend(constraints.iter().cloned());
    let mut flags = Vec::new();
    let mut sub = Sub {
        chart,
        parent_point,
        equation: eq.clone(),
        invariant_here: smooth_seq(),
        status: NodeStatus::Smooth,
        points: vec![],
        flags: vec![],
        children: vec![],
    };
    let cz = match common_zeros(&sys) {
        Ok(cz) => cz,
        Err(Error::Indeterminate(r)) => {
            sub.status = NodeStatus::Indeterminate;
            sub.flags.push(r);
            return Ok(sub);
        }
        Err(e) => return Err(e),
    };
    if let Some(r) = &cz.indeterminate {
        flags.push(r.clone());
        sub.status = NodeStatus::Indeterminate;
    }
    let mut steps = Vec::new();
    for q in &cz.points {
        steps.push(point_step(&eq, q)?);
    }
    let mut exact_here = true;
    if let Some(best) = steps.iter().max_by(|a, b| lex_compare(&a.invariant, &b.invariant)) {
        sub.invariant_here = best.invariant.clone();
        exact_here = best.exact;
        if sub.status != NodeStatus::Indeterminate {
            sub.status = NodeStatus::Singular;
        }
    }
    if let Some((pinv, pexact)) = parent_inv {
        if lex_compare(&sub.invariant_here, &pinv) != Ordering::Less {
            let msg = format!("invariant {} does not drop below {pinv}", sub.invariant_here);
            if pexact && exact_here {
                return Err(Error::Certification(msg));
            }
            flags.push(format!("{msg} (lower bounds)"));
        }
    }
    sub.flags = flags;
    if steps.is_empty() {
        return Ok(sub);
    }
    if steps_left == 0 {
        sub.status = NodeStatus::MaxSteps;
        sub.points = steps;
        return Ok(sub);
    }
    // One task per (point, chart) pair.
    let mut tasks = Vec::new();
    for (k, st) in steps.iter().enumerate() {
        let pb = pullback_function(&st.prepared, &st.centre)?;
        let charts: Vec<SliceChart> = slice_charts(&st.centre)?;
        for (ci, ch) in charts.iter().enumerate() {
            let f = to_slice_vars(&chart_function(&pb, ch), pb.t_index, ch.slice_var, eq.vars());
            let mut cons = vec![Poly::var(eq.vars(), ch.slice_var)];
            cons.extend(charts[..ci].iter().map(|e| Poly::var(eq.vars(), e.slice_var)));
            let label = (eq.vars().name(ch.slice_var).to_string(), ch.residual_order);
            tasks.push((f.primitive(), cons, label, k, (st.invariant.clone(), st.exact)));
        }
    }
    let children = exec.map(&tasks, |(f, cons, label, k, pinv)| {
        explore(f.clone(), cons.clone(), Some(label.clone()), Some(*k), Some(pinv.clone()), steps_left - 1, exec)
    });
    sub.children = children.into_iter().collect::<Result<_>>()?;
    sub.points = steps;
    Ok(sub)
}

fn flatten(sub: Sub, parent: Option<usize>, nodes: &mut Vec<ResolutionNode>) -> usize {
    let id = nodes.len();
    nodes.push(ResolutionNode {
        id,
        parent,
        parent_point: sub.parent_point,
        chart: sub.chart,
        equation: sub.equation,
        sigma: None,
        invariant_here: sub.invariant_here,
        status: sub.status,
        points: sub.points,
        children: vec![],
        flags: sub.flags,
    });
    for c in sub.children {
        let cid = flatten(c, Some(id), nodes);
        nodes[id].children.push(cid);
    }
    id
}

/// Embedded resolution of the plane curve `f = 0`. Node ids follow a
/// depth-first traversal with slice charts in variable order.
pub fn resolve_plane_curve(f: &Poly, max_steps: usize, exec: Exec) -> Result<Resolution> {
    if f.nvars() != 2 {
        return Err(Error::pre("plane-curve resolution needs two variables"));
    }
    if f.is_constant() {
        return Err(Error::pre("constant equation"));
    }
    if !is_squarefree(f)? {
        return Err(Error::pre(format!("`{f}` is not squarefree")));
    }
    let sub = explore(f.clone(), vec![], None, None, None, max_steps, exec)?;
    let mut nodes = Vec::new();
    flatten(sub, None, &mut nodes);
    Ok(Resolution { nodes })
}

/// The bundled plane-curve corpus.
pub fn curve_corpus() -> Vec<(&'static str, &'static str)> {
    vec![
        ("node", "y^2 - x^2*(x + 1)"),
        ("cusp", "y^2 - x^3"),
        ("tacnode", "y^2 - x^4"),
        ("ramphoid", "y^2 - x^5"),
        ("e8", "y^3 - x^5"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, Vars};

    fn p(s: &str) -> Poly {
        Poly::parse(s, &Vars::xy()).unwrap()
    }

    fn run(s: &str) -> Resolution {
        resolve_plane_curve(&p(s), 4, Exec::Sequential).unwrap()
    }

    #[test]
    fn cusp_one_blowup() {
        let r = run("y^2 - x^3");
        assert_eq!(r.blowups(), 1);
        assert!(r.complete());
        let root = r.root();
        assert_eq!(root.points[0].centre.to_string(), "x:3 y:2");
        let eqs: Vec<String> = r.nodes[1..].iter().map(|n| n.equation.to_string()).collect();
        assert_eq!(eqs, vec!["-1 + y^2", "-1 + x^3"]);
    }

    #[test]
    fn corpus_resolves() {
        for (name, f) in curve_corpus() {
            let r = run(f);
            assert!(r.complete(), "{name}:\n{}", r.transcript());
            assert!(r.blowups() <= 4, "{name}");
            for n in &r.nodes {
                assert!(n.flags.is_empty(), "{name}: {:?}", n.flags);
            }
        }
        assert_eq!(run("y^2 - x^2").blowups(), 1);
        assert_eq!(run("y^2 - x^4").blowups(), 1);
    }

    #[test]
    fn modes_agree() {
        for (_, f) in curve_corpus() {
            let a = resolve_plane_curve(&p(f), 4, Exec::Sequential).unwrap().transcript();
            let b = resolve_plane_curve(&p(f), 4, Exec::Parallel).unwrap().transcript();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn node_point_is_found() {
        let r = run("y^2 - x^2*(x + 1)");
        assert_eq!(r.root().points[0].point, vec![int(0), int(0)]);
        assert_eq!(r.root().invariant_here.to_string(), "(2,2)");
    }

    #[test]
    fn quartic_with_two_cusps() {
        let r = run("(y^2 - x^3)*(y^2 + x^3)");
        assert!(r.complete(), "{}", r.transcript());
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(resolve_plane_curve(&p("(y - x^2)^2"), 4, Exec::Sequential).is_err());
    }
}
