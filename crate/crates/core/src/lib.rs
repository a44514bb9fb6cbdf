//! Exact computation of the uncentered Hardy–Littlewood maximal function of
//! rational step functions.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactnum`]: arbitrary-precision rationals, quadratic surds held as
//!   certified enclosures, and extended-real endpoints.
//! - [`stepfn`]: step functions with explicit point values, their variation,
//!   BV norm, jump sets and (adjusted) modulus.
//! - [`maximal`]: pointwise evaluation of the maximal function through a
//!   finite candidate set of intervals.
//! - [`envelope`]: the global piecewise-Möbius profile of the maximal
//!   function, its detachment set, derivative and certified variation.
//! - [`verify`]: brute-force oracles, random generators, property suites and
//!   the convergence / counterexample experiments.

pub mod envelope;
pub mod error;
pub mod exactnum;
pub mod maximal;
pub mod stepfn;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{AlgebraicValue, Enclosure, Ext, Rat};
pub use stepfn::StepFunction;
