//! From a freezing-time profile `T` and terminal velocity `h` to the frozen
//! wave fields `(sigma, mu)`, and the numerical checks on them.
//!
//! The pipeline is [`generator_pair`] (invert `g(x) = x - T(x)`),
//! [`build_wave_profile`] (`f = h(g^{-1}) / 2` plus an extension off the
//! core interval) and [`synthesize_fields`].

mod checks;
mod field;
mod problem;
mod profile;

pub use checks::{
    bridge_identity, reflection_identity_check, residual_pde, verify_freezing_boundary, BoundaryOptions,
    BoundaryReport, PdeOptions, PdeResidualReport,
};
pub use field::{sample_grid, synthesize_fields, FieldGrid, FieldPair};
pub use problem::{validate_problem, Finding, FreezingProblem, Hypothesis, Mode, VALIDATION_SAMPLES};
pub use profile::{
    build_wave_profile, freezing_time_from_generator, generator_involution, generator_pair, generator_solution,
    Extension, WaveProfile,
};

/// Values of `sigma` at or below this count as zero.
pub const SIGMA_FLOOR: f64 = 1e-12;

/// Default finite-difference step.
pub const DEFAULT_DELTA: f64 = 1e-3;

/// Half-width of the exclusion band around kink lines, in units of the step.
pub const KINK_BAND: f64 = 3.0;
