//! Residual reports shared by every verification routine.

use serde::{Deserialize, Serialize};

/// A sample location: a point on the line or a space-time point `[x, t]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sample {
    X(f64),
    XT([f64; 2]),
}

impl std::fmt::Display for Sample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sample::X(x) => write!(f, "x = {x}"),
            Sample::XT([x, t]) => write!(f, "(x, t) = ({x}, {t})"),
        }
    }
}

/// Per-point residuals with their sup-norm and a pass flag.
///
/// `sup_norm` is the maximum of `|residuals|` (a NaN residual counts as
/// infinite) and `pass` holds exactly when `sup_norm <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub label: String,
    pub grid: Vec<Sample>,
    pub residuals: Vec<f64>,
    pub sup_norm: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(label: impl Into<String>, grid: Vec<Sample>, residuals: Vec<f64>, tolerance: f64) -> Self {
        debug_assert_eq!(grid.len(), residuals.len());
        let sup_norm = residuals.iter().fold(0.0_f64, |m, r| {
            let a = if r.is_nan() { f64::INFINITY } else { r.abs() };
            m.max(a)
        });
        Self {
            label: label.into(),
            grid,
            residuals,
            sup_norm,
            tolerance,
            pass: sup_norm <= tolerance,
        }
    }

    /// Re-evaluates `pass` against a different tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.sup_norm <= tolerance;
        self
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The sample with the largest residual.
    pub fn worst(&self) -> Option<(Sample, f64)> {
        self.grid
            .iter()
            .zip(&self.residuals)
            .max_by(|a, b| {
                let ka = if a.1.is_nan() { f64::INFINITY } else { a.1.abs() };
                let kb = if b.1.is_nan() { f64::INFINITY } else { b.1.abs() };
                ka.total_cmp(&kb)
            })
            .map(|(s, r)| (*s, *r))
    }

    pub fn len(&self) -> usize {
        self.residuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
