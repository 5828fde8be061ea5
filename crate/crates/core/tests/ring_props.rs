mod common;

use common::{nonzero_poly, poly, vars};
use proptest::prelude::*;
use wblow::ring::{divides, int, resultant, Poly};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(f in poly(3, 3, 4), g in poly(3, 3, 4), h in poly(3, 3, 4)) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn substitution_composes(f in poly(2, 3, 4), a in prop::collection::vec(poly(2, 2, 3), 2), b in prop::collection::vec(poly(2, 2, 3), 2)) {
        let ba: Vec<Poly> = a.iter().map(|p| p.substitute(&b).unwrap()).collect();
        prop_assert_eq!(f.substitute(&a).unwrap().substitute(&b).unwrap(), f.substitute(&ba).unwrap());
    }

    #[test]
    fn exact_division(f in nonzero_poly(3, 3, 4), q in poly(3, 3, 4)) {
        prop_assert_eq!(divides(&f, &(&f * &q)), Some(q));
    }

    #[test]
    fn resultant_detects_common_factors(c in nonzero_poly(2, 2, 3), f in nonzero_poly(2, 2, 3), g in nonzero_poly(2, 2, 3)) {
        // A common factor that involves x forces a zero resultant in x.
        let v = vars(2);
        let c = &c + &Poly::var(&v, 0);
        prop_assume!(c.degree_in(0).unwrap_or(0) > 0);
        let r = resultant(&(&c * &f), &(&c * &g), 0).unwrap();
        prop_assert!(r.is_zero(), "c={} f={} g={} r={}", c, f, g, r);
    }
}

#[test]
fn resultant_of_coprime_pairs() {
    let v = vars(2);
    let p = |s: &str| Poly::parse(s, &v).unwrap();
    for (f, g) in [("x^2 - y", "x - 1"), ("x^3 + y*x + 1", "x^2 - y^2"), ("x*y - 1", "x + y")] {
        assert!(!resultant(&p(f), &p(g), 0).unwrap().is_zero(), "{f}, {g}");
    }
    assert_eq!(resultant(&p("x - y"), &p("x + y"), 0).unwrap(), p("2*y").scale(&int(1)));
}
