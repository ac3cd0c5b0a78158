//! Coordinate calculus for Lie algebroids with momentum sections.
//!
//! Every geometric object is a dense array of symbolic [`expr::Expr`]
//! coefficients over a single [`manifold::Chart`]. Identities are never
//! assumed; they are evaluated as residual fields at sampled points and
//! reported through [`manifold::ResidualReport`].
#![no_std]

extern crate alloc;

pub mod algebroid;
pub mod connection;
pub mod courant;
pub mod expr;
pub mod geometry;
pub mod graded;
pub mod manifold;
pub mod momentum;
pub mod morphism;

pub use expr::{parse, EvalError, Expr, ParseError};
pub use manifold::{Chart, CheckError, Probe, ResidualReport, SamplePlan};

/// Default absolute residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
