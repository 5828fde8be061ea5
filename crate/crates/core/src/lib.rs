//! Exact weighted blowups of Poisson structures on smooth charts.
//!
//! The crate works entirely over the rationals. Polynomials and polyvector
//! fields live on an affine chart with named coordinates; weighted centres
//! are monomial in those coordinates. On top of that sit the lifting
//! criteria for weighted blowups, the ordered blowup invariant, local
//! classification of surface singularities and Poisson triples, and small
//! resolution drivers.

// Index loops mirror the matrix and structure-constant formulas.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod blowup;
pub mod centre;
pub mod classify;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod invariant;
pub mod polyvector;
pub mod resolve;
pub mod ring;

pub use error::{Error, Result};
