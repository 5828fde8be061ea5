//! Exact arithmetic: rationals, polynomials, resultants and small linear
//! algebra over ℚ.

pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod univariate;

pub use poly::{divides, ideal_contains, Monomial, Poly, Vars, MAX_VARS};
pub use rational::{fmt_rational, int, parse_rational, rat, ExtRational, Rational};
pub use univariate::{rational_roots, resultant, UniPoly};

/// Sign of the permutation sorting `idx` (distinct entries).
pub fn permutation_sign(idx: &[usize]) -> i64 {
    let mut inv = 0usize;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] > idx[b] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Concatenate two sorted index tuples into a sorted one with the Koszul
/// sign of the reordering; `None` when they overlap.
pub fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut inv = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inv += 1;
            }
        }
    }
    let mut out: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    out.sort_unstable();
    Some((out, if inv.is_multiple_of(2) { 1 } else { -1 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_signs() {
        assert_eq!(merge_indices(&[0], &[1]), Some((vec![0, 1], 1)));
        assert_eq!(merge_indices(&[1], &[0]), Some((vec![0, 1], -1)));
        assert_eq!(merge_indices(&[0, 2], &[1]), Some((vec![0, 1, 2], -1)));
        assert_eq!(merge_indices(&[0], &[0, 1]), None);
        assert_eq!(permutation_sign(&[2, 0, 1]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
    }
}
