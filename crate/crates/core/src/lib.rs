//! Hölder-type inequality bounds on finite discrete measure spaces.
//!
//! A measure space is a list of positive atom weights ([`DiscreteMeasure`]);
//! functions are nonnegative values per atom ([`SampledFunction`]). Step
//! functions on `[0, 1)` are represented exactly by weighting atoms with the
//! lengths of their pieces.
//!
//! | Module | Provides |
//! |--------|----------|
//! | [`measure`] | integration, `L^r` means, pointwise max/min/product/positive part |
//! | [`transforms`] | product-preserving maps `T = (T1, T2)` and the bound they induce |
//! | [`bounds`] | Hölder bound, max-min bound `B_p`, `B_p ∧ B_q`, Cauchy-Schwarz identity |
//! | [`family`] | two-step counterexample family, gap curves, derivative at `t = 0` |
//! | [`search`] | seeded random search for `B_p ∧ B_q > Hölder` |
//! | [`cli`] | the `holder-bounds` command line |
//!
//! ```
//! use holder_bounds::{bounds, DiscreteMeasure, ExponentPair, SampledFunction};
//!
//! let mu = DiscreteMeasure::new(vec![0.5, 0.5]).unwrap();
//! let f = SampledFunction::new(vec![1.0, 2.0]).unwrap();
//! let g = SampledFunction::new(vec![2.0, 1.0]).unwrap();
//! let e = ExponentPair::new(2.0).unwrap();
//! let b2 = bounds::maxmin_bound(&mu, &f, &g, e).unwrap();
//! assert!((b2 - 2.0).abs() < 1e-15);
//! ```

pub mod bounds;
pub mod cli;
mod error;
pub mod family;
pub mod format;
pub mod measure;
pub mod search;
pub mod transforms;

pub use error::{Error, Result};
pub use measure::{DiscreteMeasure, ExponentPair, PointwiseOp, SampledFunction};
pub use transforms::TransformSpec;

/// Relative margin for inequality ordering checks, applied as `ORDER_TOL * (1 + value)`.
pub const ORDER_TOL: f64 = 1e-9;

/// Relative margin for algebraic identities, applied as `IDENTITY_TOL * (1 + value)`.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Default step for the finite-difference check of the gap derivative.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// `ORDER_TOL * (1 + |value|)`.
pub fn order_margin(value: f64) -> f64 {
    ORDER_TOL * (1.0 + value.abs())
}

/// `IDENTITY_TOL * (1 + |value|)`.
pub fn identity_margin(value: f64) -> f64 {
    IDENTITY_TOL * (1.0 + value.abs())
}
