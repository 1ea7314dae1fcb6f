//! Solutions of the composite functional equation `F(x + F(x)) = -F(x)` and
//! the frozen wave fields they generate.
//!
//! The crate has two halves that meet in the generator `G = g^{-1}`:
//!
//! - [`funceq`] builds and checks solutions `F` through their involutions
//!   `phi(x) = x + F(x)`, with closed-form families and the conjugacy, shift
//!   and reflection symmetries.
//! - [`freezing`] takes a freezing-time profile `T` and a terminal velocity
//!   profile `h` on `[-a, a]`, inverts `g(x) = x - T(x)`, forms the wave
//!   profile `f = h(g^{-1}) / 2` and synthesizes the fields
//!   `sigma = f(x - t) + f(-x - t)`, `mu = f(x - t) - f(-x - t)`, clamped to
//!   `sigma = 0`, `mu = h(x)` once `t >= T(x)`.
//!
//! [`inversion`] provides the certified monotone inversion both halves rely
//! on, and [`fixtures`] carries the worked examples with closed-form oracles.
//!
//! ```
//! use frozen_wave::fixtures::fixture;
//! use frozen_wave::freezing::synthesize_fields;
//!
//! let fx = fixture("ex51").unwrap();
//! let fields = synthesize_fields(fx.problem().unwrap()).unwrap();
//! let s = fields.sigma(0.0, 0.0);
//! assert!((s - (2.0 * 2f64.ln() + 4.0)).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod freezing;
pub mod funceq;
pub mod interval;
pub mod inversion;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use interval::Interval;
pub use report::{ResidualReport, Sample};
pub use scalar::{numeric_derivative, ScalarFn};
