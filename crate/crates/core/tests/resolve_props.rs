use std::cmp::Ordering;

use wblow::exec::Exec;
use wblow::invariant::lex_compare;
use wblow::polyvector::is_poisson;
use wblow::resolve::{certify_blowup_step, curve_corpus, resolve_plane_curve, triple_corpus, NodeStatus};
use wblow::ring::{Poly, Vars};

#[test]
fn curve_corpus_terminates_with_descent() {
    for (name, f) in curve_corpus() {
        let f = Poly::parse(f, &Vars::xy()).unwrap();
        let r = resolve_plane_curve(&f, 4, Exec::Sequential).unwrap();
        assert!(r.complete(), "{name}");
        assert!(r.blowups() <= 4, "{name}");
        for n in &r.nodes {
            if let Some(p) = n.parent {
                let parent = &r.nodes[p];
                let step = &parent.points[n.parent_point.unwrap()];
                assert_eq!(lex_compare(&n.invariant_here, &step.invariant), Ordering::Less, "{name} node {}", n.id);
            }
            if n.children.is_empty() {
                assert_eq!(n.status, NodeStatus::Smooth, "{name} node {}", n.id);
            }
        }
    }
}

#[test]
fn poisson_steps_are_certified() {
    for case in triple_corpus() {
        for sel in case.select().unwrap() {
            assert!(sel.check.conilpotent, "{}", case.name);
            let step = certify_blowup_step(Some(&sel.sigma), &sel.objects, sel.ideal, &sel.centre).unwrap();
            for ch in &step.charts {
                assert_eq!(ch.poisson, Some(true), "{} chart {}", case.name, ch.slice_var);
                assert!(is_poisson(ch.sigma.as_ref().unwrap()).0);
                assert_ne!(ch.tangent_strict, Some(false), "{} chart {}", case.name, ch.slice_var);
                assert_eq!(ch.tangent_exceptional, Some(true), "{} chart {}", case.name, ch.slice_var);
            }
        }
    }
}
