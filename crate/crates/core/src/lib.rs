//! Exact computation in quantale-enriched categories.
//!
//! Scalars live in one of four quantales: the Booleans `2`, Lawvere's
//! `[0,∞]`, the unit interval `[0,1]`, and `Δ`, the quantale of distribution
//! functions (represented by finite step functions). On top of these the crate
//! provides finite enriched categories, modules between them, presheaves and
//! Cauchy completeness tests, change of base, and exponentiability checks.
//! Everything is computed with exact rationals.

pub mod app;
pub mod basechange;
pub mod cauchy;
pub mod delta;
pub mod expinj;
pub mod json;
pub mod error;
pub mod laws;
pub mod matrix;
pub mod quantale;
pub mod rational;
pub mod report;
pub mod vcat;
pub mod vmod;
pub mod value;

pub use delta::{Delta, StepFn};
pub use error::{Error, Result, Violation};
pub use quantale::{Bool2, Cost, Lawvere, Prob, Quantale, UnitInterval};
pub use value::{QValue, QuantaleId};
