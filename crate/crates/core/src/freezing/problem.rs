use std::fmt;

use serde::Serialize;

use super::Extension;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::ScalarFn;

/// Samples used for admissibility checks.
pub const VALIDATION_SAMPLES: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// All hypotheses must hold.
    Strict,
    /// Findings are reported but do not block synthesis.
    Lenient,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strict" => Ok(Mode::Strict),
            "lenient" => Ok(Mode::Lenient),
            other => Err(format!("unknown mode `{other}` (expected strict or lenient)")),
        }
    }
}

/// Freezing-time profile `T` and terminal velocity `h` on `[-a, a]`.
#[derive(Debug, Clone)]
pub struct FreezingProblem {
    a: f64,
    spatial: Interval,
    freezing_time: ScalarFn,
    terminal_velocity: ScalarFn,
    mode: Mode,
    kinks: Vec<f64>,
    extension: Extension,
}

impl FreezingProblem {
    pub fn new(a: f64, freezing_time: ScalarFn, terminal_velocity: ScalarFn) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("half-width a = {a} must be positive")));
        }
        Ok(Self {
            a,
            spatial: Interval::closed(-a, a),
            freezing_time,
            terminal_velocity,
            mode: Mode::Strict,
            kinks: Vec::new(),
            extension: Extension::LinearC1,
        })
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn lenient(self) -> Self {
        self.with_mode(Mode::Lenient)
    }

    /// Positions where `T` or `h` is not differentiable.
    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks;
        self
    }

    pub fn with_extension(mut self, extension: Extension) -> Self {
        self.extension = extension;
        self
    }

    /// Poses the problem on the open interval `(-a, a)`.
    pub fn on_open_interval(mut self) -> Self {
        self.spatial = Interval::open(-self.a, self.a);
        self
    }

    pub fn half_width(&self) -> f64 {
        self.a
    }

    pub fn spatial(&self) -> Interval {
        self.spatial
    }

    pub fn freezing_time(&self) -> &ScalarFn {
        &self.freezing_time
    }

    pub fn terminal_velocity(&self) -> &ScalarFn {
        &self.terminal_velocity
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    /// `T(x)`.
    pub fn t(&self, x: f64) -> f64 {
        self.freezing_time.eval(x)
    }

    /// `h(x)`.
    pub fn h(&self, x: f64) -> f64 {
        self.terminal_velocity.eval(x)
    }

    /// Latest freezing time, `T(0)` for admissible profiles.
    pub fn latest_freezing(&self) -> f64 {
        self.t(0.0)
    }

    /// Errors with the first failing hypothesis in strict mode.
    pub fn check_admissible(&self) -> Result<()> {
        if self.mode == Mode::Lenient {
            return Ok(());
        }
        match validate_problem(self).into_iter().find(|f| !f.passed) {
            None => Ok(()),
            Some(f) => Err(Error::NotAdmissible { hypothesis: f.hypothesis.to_string(), witness: f.witness }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    FreezingTimeEven,
    FreezingTimeDifferentiable,
    FreezingTimeDecreasing,
    FreezingTimeSlope,
    VelocityOdd,
    VelocityIncreasing,
    VelocityDifferentiable,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::FreezingTimeEven => "T even",
            Hypothesis::FreezingTimeDifferentiable => "T differentiable",
            Hypothesis::FreezingTimeDecreasing => "T strictly decreasing on (0, a]",
            Hypothesis::FreezingTimeSlope => "|T'| < 1 on (-a, a)",
            Hypothesis::VelocityOdd => "h odd",
            Hypothesis::VelocityIncreasing => "h strictly increasing",
            Hypothesis::VelocityDifferentiable => "h differentiable",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub hypothesis: Hypothesis,
    pub passed: bool,
    pub witness: Option<f64>,
    pub detail: String,
}

impl Finding {
    fn pass(hypothesis: Hypothesis) -> Self {
        Self { hypothesis, passed: true, witness: None, detail: String::new() }
    }

    fn fail(hypothesis: Hypothesis, x: f64, detail: String) -> Self {
        Self { hypothesis, passed: false, witness: Some(x), detail }
    }
}

/// Checks each hypothesis on `VALIDATION_SAMPLES` uniform points of
/// `[-a, a]`, reporting a witness for every failure.
pub fn validate_problem(p: &FreezingProblem) -> Vec<Finding> {
    let a = p.a;
    let xs = Interval::closed(-a, a).sample(VALIDATION_SAMPLES);
    let interior = &xs[1..xs.len() - 1];
    let t = &p.freezing_time;
    let h = &p.terminal_velocity;
    let mut out = Vec::with_capacity(7);

    out.push(
        xs.iter()
            .find_map(|&x| {
                let d = (t.eval(x) - t.eval(-x)).abs();
                (!(d <= 1e-12 * (1.0 + t.eval(x).abs()))).then(|| {
                    Finding::fail(Hypothesis::FreezingTimeEven, x, format!("|T(x) - T(-x)| = {d:e}"))
                })
            })
            .unwrap_or_else(|| Finding::pass(Hypothesis::FreezingTimeEven)),
    );
    out.push(kink_finding(t, interior, Hypothesis::FreezingTimeDifferentiable));

    let positive: Vec<f64> = xs.iter().copied().filter(|&x| x > 0.0).collect();
    out.push(
        positive
            .windows(2)
            .find_map(|w| {
                (!(t.eval(w[1]) < t.eval(w[0]))).then(|| {
                    Finding::fail(
                        Hypothesis::FreezingTimeDecreasing,
                        w[1],
                        format!("T({}) = {} is not below T({}) = {}", w[1], t.eval(w[1]), w[0], t.eval(w[0])),
                    )
                })
            })
            .unwrap_or_else(|| Finding::pass(Hypothesis::FreezingTimeDecreasing)),
    );
    out.push(
        interior
            .iter()
            .find_map(|&x| match t.derivative(x) {
                Ok(s) if s.abs() < 1.0 => None,
                Ok(s) => Some(Finding::fail(Hypothesis::FreezingTimeSlope, x, format!("T'(x) = {s}"))),
                Err(e) => Some(Finding::fail(Hypothesis::FreezingTimeSlope, x, e.to_string())),
            })
            .unwrap_or_else(|| Finding::pass(Hypothesis::FreezingTimeSlope)),
    );
    out.push(
        xs.iter()
            .find_map(|&x| {
                let d = (h.eval(x) + h.eval(-x)).abs();
                (!(d <= 1e-12 * (1.0 + h.eval(x).abs())))
                    .then(|| Finding::fail(Hypothesis::VelocityOdd, x, format!("|h(x) + h(-x)| = {d:e}")))
            })
            .unwrap_or_else(|| Finding::pass(Hypothesis::VelocityOdd)),
    );
    out.push(
        xs.windows(2)
            .find_map(|w| {
                (!(h.eval(w[1]) > h.eval(w[0]))).then(|| {
                    Finding::fail(
                        Hypothesis::VelocityIncreasing,
                        w[1],
                        format!("h({}) = {} is not above h({}) = {}", w[1], h.eval(w[1]), w[0], h.eval(w[0])),
                    )
                })
            })
            .unwrap_or_else(|| Finding::pass(Hypothesis::VelocityIncreasing)),
    );
    out.push(kink_finding(h, interior, Hypothesis::VelocityDifferentiable));
    out
}

/// Flags a kink where the one-sided difference quotients disagree.
fn kink_finding(f: &ScalarFn, xs: &[f64], hyp: Hypothesis) -> Finding {
    for &x in xs {
        let eta = 1e-6 * (1.0 + x.abs());
        let fx = f.eval(x);
        let right = (f.eval(x + eta) - fx) / eta;
        let left = (fx - f.eval(x - eta)) / eta;
        if !((right - left).abs() <= 1e-3 * (1.0 + right.abs().max(left.abs()))) {
            return Finding::fail(hyp, x, format!("one-sided slopes {left} and {right} differ"));
        }
    }
    Finding::pass(hyp)
}
