//! Exact one-row colored sl₃ Jones polynomials `J_{(n,0)}` of pretzel links
//! and `(2,m)`-torus knots, their stable tails, and an independent A₂ web
//! skein oracle used to validate the closed-form multi-sums.
//!
//! Module map:
//! - [`qcalc`]: Laurent polynomials in `q^{1/6}` and q-combinatorics.
//! - [`coeffs`]: twist, bubble and junction coefficients.
//! - [`links`]: the nested-sum engine and family descriptions.
//! - [`tails`]: normalization, minimum degree and tail stability.
//! - [`reference`]: published values used as regression fixtures.
//! - [`webs`]: planar web rewriting and link evaluation by skein relations.

pub mod coeffs;
pub mod error;
pub mod links;
pub mod qcalc;
pub mod reference;
pub mod tails;
pub mod webs;

pub use error::{Error, Result};
pub use qcalc::{QLaurent, QSeries};
