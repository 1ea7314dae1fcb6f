//! Evaluable real functions of one real variable.
//!
//! [`ScalarFn`] is the common carrier for every function the crate handles:
//! candidate solutions `F`, involutions `phi`, even profiles `psi`, freezing
//! times `T`, terminal velocities `h`, generators `g` and their inverses, and
//! wave profiles `f`. It is a shared closure plus a domain, an optional
//! analytic derivative and a label used in diagnostics.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interval::Interval;

pub type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Base step of the central difference; scaled by `1 + |x|`.
pub const DIFF_STEP: f64 = 1e-6;

/// How a function's values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    /// Built on top of a numerical inversion somewhere down the line.
    Numeric,
}

#[derive(Clone)]
pub struct ScalarFn {
    eval: Eval,
    derivative: Option<Eval>,
    domain: Interval,
    label: String,
    provenance: Provenance,
}

impl ScalarFn {
    pub fn new(
        label: impl Into<String>,
        domain: Interval,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(f),
            derivative: None,
            domain,
            label: label.into(),
            provenance: Provenance::ClosedForm,
        }
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub(crate) fn with_derivative_arc(mut self, d: Option<Eval>) -> Self {
        self.derivative = d;
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_numeric(&self) -> bool {
        self.provenance == Provenance::Numeric
    }

    /// Raw evaluation; no domain check.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn try_eval(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(self.out_of_domain(x));
        }
        let y = self.eval(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite { label: self.label.clone(), x })
        }
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn analytic_derivative(&self, x: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(x))
    }

    pub(crate) fn derivative_arc(&self) -> Option<Eval> {
        self.derivative.clone()
    }

    pub(crate) fn eval_arc(&self) -> Eval {
        self.eval.clone()
    }

    /// Analytic derivative when present, central difference otherwise.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        match &self.derivative {
            Some(d) => Ok(d(x)),
            None => numeric_derivative(self, x),
        }
    }

    pub(crate) fn out_of_domain(&self, x: f64) -> Error {
        Error::OutOfDomain {
            label: self.label.clone(),
            x,
            domain: self.domain.to_string(),
        }
    }

    /// Compares the analytic derivative against central differences on `n`
    /// interior samples. Returns the worst point and both values on mismatch.
    pub fn check_derivative(&self, n: usize) -> std::result::Result<(), (f64, f64, f64)> {
        let Some(d) = &self.derivative else { return Ok(()) };
        let window = self.domain.finite_window();
        let xs = Interval::open(window.lo, window.hi).sample(n);
        for x in xs {
            let Ok(num) = numeric_derivative(self, x) else { continue };
            let ana = d(x);
            if (ana - num).abs() > 1e-4 * (1.0 + ana.abs()) {
                return Err((x, ana, num));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFn")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("derivative", &self.derivative.is_some())
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// Central difference `(f(x+h) - f(x-h)) / 2h` with `h = 1e-6 (1 + |x|)`.
pub fn numeric_derivative(f: &ScalarFn, x: f64) -> Result<f64> {
    numeric_derivative_with_step(f, x, DIFF_STEP * (1.0 + x.abs()))
}

pub fn numeric_derivative_with_step(f: &ScalarFn, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("difference step {h} must be positive")));
    }
    let dom = f.domain();
    for p in [x, x - h, x + h] {
        if !dom.contains(p) {
            return Err(f.out_of_domain(p));
        }
    }
    let d = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFinite { label: f.label().to_string(), x })
    }
}
