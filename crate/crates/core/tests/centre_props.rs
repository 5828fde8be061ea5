mod common;

use common::{centre, nonzero_poly, poly, subsets};
use proptest::prelude::*;
use wblow::polyvector::Polyvector;
use wblow::ring::{ExtRational, Poly};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn order_is_a_valuation(f in poly(3, 4, 4), g in poly(3, 4, 4), c in centre(3, 4)) {
        let of = c.ord(&f).unwrap();
        let og = c.ord(&g).unwrap();
        prop_assert_eq!(c.ord(&(&f * &g)).unwrap(), of.add(&og));
        let os = c.ord(&(&f + &g)).unwrap();
        let m = of.clone().min(og.clone());
        prop_assert!(os >= m);
        if of != og {
            prop_assert_eq!(os, m);
        }
    }

    #[test]
    fn leading_terms_multiply(f in nonzero_poly(3, 4, 4), g in nonzero_poly(3, 4, 4), c in centre(3, 4)) {
        let lf = c.leading_term_poly(&f).unwrap();
        let lg = c.leading_term_poly(&g).unwrap();
        prop_assert_eq!(c.leading_term_poly(&(&f * &g)).unwrap(), &lf * &lg);
    }

    #[test]
    fn minimal_polyvector_order(k in 1usize..=3, c in centre(3, 4)) {
        let v = common::vars(3);
        let wd = c.weight_data().unwrap();
        let kappa = wd.kappa_at(k);
        let mut least = ExtRational::Infinity;
        for idx in subsets(3, k) {
            let (o, _) = c.ord_polyvector(&Polyvector::basis(&v, &idx, Poly::one(&v))).unwrap();
            prop_assert!(o >= ExtRational::Finite(-kappa.clone()));
            least = least.min(o);
        }
        prop_assert_eq!(least, ExtRational::Finite(-kappa));
    }

    #[test]
    fn reduction_scales_orders(f in poly(3, 4, 4), c in centre(3, 4)) {
        let g = c.weight_data().unwrap().gcd;
        let reduced = c.scaled(&g);
        let lhs = c.ord(&f).unwrap();
        let rhs = reduced.ord(&f).unwrap().scale(&g);
        prop_assert_eq!(lhs, rhs);
        for w in reduced.weights() {
            prop_assert!(w.is_integer());
        }
    }
}
