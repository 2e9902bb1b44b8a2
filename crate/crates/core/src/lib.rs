//! Numerical toolkit for the argument function S(t) of the Riemann zeta
//! function and of Dirichlet L-functions.
//!
//! The crate provides:
//!
//! * scalar special functions (complex log-gamma, digamma, trigamma, the
//!   Riemann-Siegel theta function) and a von Mangoldt sieve ([`specfun`]);
//! * Beurling's signum majorant/minorant and Selberg's interval
//!   majorant/minorant with closed-form Fourier transforms ([`extremal`]);
//! * L-function descriptors for zeta and primitive Dirichlet characters
//!   ([`lfunc`]);
//! * critical-line evaluation, zero location, zero counting and
//!   continuous argument tracking ([`critical_line`]);
//! * the Guinand-Weil explicit formula with an itemized report
//!   ([`explicit_formula`]);
//! * the majorant/minorant sandwich, theorem envelopes, kernel-sum
//!   representations and the lowest-zero bound ([`bounds`]);
//! * a command-line front end ([`cli`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod critical_line;
pub mod error;
pub mod explicit_formula;
pub mod extremal;
pub mod lfunc;
pub mod par;
pub mod quad;
pub mod specfun;
pub mod table;

pub use error::{Error, Result};
pub use num_complex::Complex64;
