//! Strategies shared by the property suites.
#![allow(dead_code)]

use proptest::prelude::*;
use wblow::centre::Centre;
use wblow::polyvector::Polyvector;
use wblow::ring::linalg::det;
use wblow::ring::{int, ExtRational, Monomial, Poly, Rational, Vars};

pub fn vars(n: usize) -> Vars {
    Vars::new(&["x", "y", "z"][..n]).unwrap()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

fn exps(n: usize, max_deg: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max_deg, n).prop_filter("total degree", move |e| e.iter().sum::<u32>() <= max_deg)
}

/// Polynomials with at most `terms` terms of total degree at most `max_deg`.
pub fn poly(n: usize, max_deg: u32, terms: usize) -> impl Strategy<Value = Poly> {
    let v = vars(n);
    prop::collection::vec((exps(n, max_deg), -4i64..=4), 0..=terms).prop_map(move |ts| {
        Poly::from_terms(&v, ts.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), int(c))))
    })
}

pub fn nonzero_poly(n: usize, max_deg: u32, terms: usize) -> impl Strategy<Value = Poly> {
    poly(n, max_deg, terms.max(1)).prop_filter("nonzero", |p| !p.is_zero())
}

/// Degree-`k` polyvectors whose coefficients have total degree at most
/// `max_deg`.
pub fn polyvector(n: usize, k: usize, max_deg: u32, terms: usize) -> impl Strategy<Value = Polyvector> {
    let v = vars(n);
    let sets = subsets(n, k);
    let count = sets.len();
    prop::collection::vec((0..count, exps(n, max_deg), -3i64..=3), 0..=terms).prop_map(move |ts| {
        let mut xi = Polyvector::zero(&v, k);
        for (s, e, c) in ts {
            let m = Poly::monomial(&v, Monomial::from_exponents(&e), int(c));
            xi = xi.add(&Polyvector::basis(&v, &sets[s], m)).unwrap();
        }
        xi
    })
}

fn exponent(max_den: i64) -> impl Strategy<Value = ExtRational> {
    prop_oneof![
        1 => Just(ExtRational::Infinity),
        4 => (1..=max_den).prop_flat_map(|q| (1..=4 * q, Just(q))).prop_map(|(p, q)| ExtRational::rat(p, q)),
    ]
}

/// Centres at the origin with exponents `p/q`, `q ≤ max_den`, not all
/// infinite.
pub fn centre(n: usize, max_den: i64) -> impl Strategy<Value = Centre> {
    let v = vars(n);
    prop::collection::vec(exponent(max_den), n)
        .prop_filter("not trivial", |e| e.iter().any(|a| !a.is_infinite()))
        .prop_map(move |e| Centre::new(&v, e, None).unwrap())
}

/// Centres with finite exponents only.
pub fn finite_centre(n: usize, max_den: i64) -> impl Strategy<Value = Centre> {
    let v = vars(n);
    prop::collection::vec((1..=max_den).prop_flat_map(|q| (1..=4 * q, Just(q))), n).prop_map(move |e| {
        Centre::new(&v, e.into_iter().map(|(p, q)| ExtRational::rat(p, q)).collect(), None).unwrap()
    })
}

/// Invertible integer matrices with small entries.
pub fn invertible(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, n), n)
        .prop_map(|m| m.into_iter().map(|r| r.into_iter().map(int).collect()).collect::<Vec<Vec<Rational>>>())
        .prop_filter("invertible", |m| !num_traits::Zero::is_zero(&det(m)))
}
