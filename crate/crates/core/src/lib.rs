//! Symbolic-numeric tensor calculus for checking exact vacuum solutions of
//! the Einstein field equations.
//!
//! The crate is layered bottom-up:
//!
//! * [`expr`] is a small expression language: parsing, exact symbolic
//!   differentiation, simplification and pointwise evaluation.
//! * [`tensor`] turns a 4×4 metric of expressions into curvature data at a
//!   point (Christoffel symbols, Riemann, Ricci, Einstein, Kretschmann).
//! * [`catalog`] builds the time-periodic metric family and the reference
//!   metrics, and compares the staged Ricci closed forms against the engine.
//! * [`analysis`] covers signature classification, singularity scans, radial
//!   null curves, t-slices and Killing residuals.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod catalog;
pub mod expr;
pub mod tensor;
pub mod tolerance;

pub use expr::{parse, Bindings, EvalError, Expr, ParseError};
pub use tensor::{CurvatureBundle, DerivedMetric, MetricSpec, Point, RiemannSign, TensorError};
pub use tolerance::Tolerance;
