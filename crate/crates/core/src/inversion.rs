//! Certified inversion of strictly monotone continuous functions.
//!
//! Every inversion keeps a bracket `[a, b]` around the preimage. Newton steps
//! (when an analytic derivative is available) are taken only if they land
//! strictly inside the bracket; otherwise the bracket is bisected. A result
//! is returned once `|f(x) - y| <= tol` and the bracket is no wider than
//! `2 tol`, or once the bracket has collapsed to adjacent floats.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{Provenance, ScalarFn};

pub const MAX_ITERATIONS: usize = 200;

/// Tolerance used for inverses that feed further compositions.
pub const INVERSION_TOL: f64 = 1e-15;

/// Number of samples used to certify monotonicity.
pub const MONOTONE_SAMPLES: usize = 201;

/// Slope below which the inverse derivative switches to central differences.
const FLAT_SLOPE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A function certified (on samples) to be strictly monotone on `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct MonotoneFn {
    f: ScalarFn,
    lo: f64,
    hi: f64,
    direction: Direction,
}

/// Outcome of a single inversion with its final bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub x: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
}

impl MonotoneFn {
    /// Infers the direction from the endpoint values and checks strict
    /// ordering on `MONOTONE_SAMPLES` uniform points.
    pub fn new(f: ScalarFn, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "monotone interval [{lo}, {hi}] must be finite and non-degenerate"
            )));
        }
        let xs = Interval::closed(lo, hi).sample(MONOTONE_SAMPLES);
        let mut ys = Vec::with_capacity(xs.len());
        for &x in &xs {
            let y = f.eval(x);
            if !y.is_finite() {
                return Err(Error::NonFinite { label: f.label().to_string(), x });
            }
            ys.push(y);
        }
        let direction = if ys[ys.len() - 1] > ys[0] {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        for (k, w) in ys.windows(2).enumerate() {
            let ok = match direction {
                Direction::Increasing => w[1] > w[0],
                Direction::Decreasing => w[1] < w[0],
            };
            if !ok {
                return Err(Error::NonMonotone { label: f.label().to_string(), x: xs[k + 1] });
            }
        }
        Ok(Self { f, lo, hi, direction })
    }

    pub fn increasing(f: ScalarFn, lo: f64, hi: f64) -> Result<Self> {
        let m = Self::new(f, lo, hi)?;
        match m.direction {
            Direction::Increasing => Ok(m),
            Direction::Decreasing => Err(Error::NonMonotone { label: m.f.label().to_string(), x: lo }),
        }
    }

    pub fn function(&self) -> &ScalarFn {
        &self.f
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.f.eval(x)
    }

    /// `(min, max)` of the function over its interval.
    pub fn value_range(&self) -> (f64, f64) {
        let a = self.f.eval(self.lo);
        let b = self.f.eval(self.hi);
        (a.min(b), a.max(b))
    }

    /// Smallest sampled `|f(x_{k+1}) - f(x_k)| / (x_{k+1} - x_k)`.
    pub fn min_sampled_slope(&self, n: usize) -> f64 {
        let xs = Interval::closed(self.lo, self.hi).sample(n.max(2));
        xs.windows(2)
            .map(|w| ((self.f.eval(w[1]) - self.f.eval(w[0])) / (w[1] - w[0])).abs())
            .fold(f64::INFINITY, f64::min)
    }

    fn sign(&self) -> f64 {
        match self.direction {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        }
    }
}

/// Returns `x` in the interval with `|f(x) - y| <= tol`.
pub fn invert_at(m: &MonotoneFn, y: f64, tol: f64) -> Result<f64> {
    invert_detailed(m, y, tol).map(|inv| inv.x)
}

pub fn invert_detailed(m: &MonotoneFn, y: f64, tol: f64) -> Result<Inversion> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let (ylo, yhi) = m.value_range();
    let slack = 4.0 * f64::EPSILON * (1.0 + y.abs());
    // evaluation noise tolerated by the monotonicity guard
    let noise = 16.0 * f64::EPSILON * (1.0 + y.abs());
    if !(y >= ylo - slack && y <= yhi + slack) {
        return Err(Error::OutOfRange { y, lo: ylo, hi: yhi });
    }
    let s = m.sign();
    // h is increasing with h(a) <= 0 <= h(b)
    let h = |x: f64| s * (m.f.eval(x) - y);
    let (mut a, mut b) = (m.lo, m.hi);
    let (mut ha, mut hb) = (h(a), h(b));
    if ha >= 0.0 {
        return Ok(Inversion { x: a, bracket: (a, a), residual: ha.abs(), iterations: 0 });
    }
    if hb <= 0.0 {
        return Ok(Inversion { x: b, bracket: (b, b), residual: hb.abs(), iterations: 0 });
    }
    let label = m.f.label();
    let mut x = 0.5 * (a + b);
    for iter in 1..=MAX_ITERATIONS {
        let hx = h(x);
        if !hx.is_finite() {
            return Err(Error::NonFinite { label: label.to_string(), x });
        }
        if hx < ha - noise || hx > hb + noise {
            return Err(Error::NonMonotone { label: label.to_string(), x });
        }
        if hx == 0.0 {
            return Ok(Inversion { x, bracket: (x, x), residual: 0.0, iterations: iter });
        }
        if hx < 0.0 {
            a = x;
            ha = hx;
        } else {
            b = x;
            hb = hx;
        }
        if hx.abs() <= tol {
            if b - a <= 2.0 * tol {
                return Ok(Inversion { x, bracket: (a, b), residual: hx.abs(), iterations: iter });
            }
            // certify a narrow bracket around x
            let xl = (x - tol).max(a);
            let xr = (x + tol).min(b);
            let (hl, hr) = (h(xl), h(xr));
            if hl <= 0.0 && hr >= 0.0 {
                return Ok(Inversion { x, bracket: (xl, xr), residual: hx.abs(), iterations: iter });
            }
            if hl > 0.0 {
                b = xl;
                hb = hl;
            } else {
                a = xr;
                ha = hr;
            }
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // adjacent floats
            let (xb, rb) = if ha.abs() <= hb.abs() { (a, ha.abs()) } else { (b, hb.abs()) };
            if rb > tol && rb > f64::EPSILON.sqrt() * (1.0 + y.abs()) {
                return Err(Error::Discontinuous { label: label.to_string(), x: xb, y });
            }
            return Ok(Inversion { x: xb, bracket: (a, b), residual: rb, iterations: iter });
        }
        x = match m.f.analytic_derivative(x) {
            Some(d) if s * d > 0.0 => {
                let xn = x - hx / (s * d);
                if xn > a && xn < b { xn } else { mid }
            }
            _ => mid,
        };
        if x <= a || x >= b {
            x = mid;
        }
    }
    Err(Error::IterationLimit { y, iterations: MAX_ITERATIONS, lo: a, hi: b })
}

/// The inverse as a [`ScalarFn`] on the (order-normalized) value range.
///
/// Evaluations outside the range or failing inversions yield NaN; use
/// [`ScalarFn::try_eval`] to surface them. The derivative is `1 / f'(x(y))`
/// when `f'` is analytic and not flat; near flat points it falls back to a
/// central difference of the inverse itself.
pub fn build_inverse(m: &MonotoneFn, tol: f64) -> Result<ScalarFn> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let (ylo, yhi) = m.value_range();
    let domain = Interval::closed(ylo, yhi);
    let label = format!("inverse of {}", m.f.label());
    let inv = {
        let m = m.clone();
        move |y: f64| invert_at(&m, y, tol).unwrap_or(f64::NAN)
    };
    let mut out = ScalarFn::new(label, domain, inv.clone()).with_provenance(Provenance::Numeric);
    if m.f.has_derivative() {
        let m = m.clone();
        out = out.with_derivative(move |y| {
            let x = inv(y);
            let d = m.f.analytic_derivative(x).unwrap_or(f64::NAN);
            if d.abs() >= FLAT_SLOPE {
                1.0 / d
            } else {
                let step = 1e-6 * (1.0 + y.abs());
                let lo = (y - step).max(ylo);
                let hi = (y + step).min(yhi);
                (inv(hi) - inv(lo)) / (hi - lo)
            }
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(label: &str, lo: f64, hi: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> MonotoneFn {
        MonotoneFn::new(ScalarFn::new(label, Interval::closed(lo, hi), f), lo, hi).unwrap()
    }

    #[test]
    fn shift_by_one() {
        // g(x) = x - 1 for T = 1
        let m = mono("x-1", 0.0, 2.0, |x| x - 1.0);
        assert!((invert_at(&m, 0.25, 1e-12).unwrap() - 1.25).abs() < 1e-12);
    }

    #[test]
    fn identity() {
        let m = mono("x", -1.0, 1.0, |x| x);
        assert!((invert_at(&m, 0.3, 1e-12).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn decreasing_functions() {
        let m = mono("-x^3", -2.0, 2.0, |x| -x * x * x);
        assert_eq!(m.direction(), Direction::Decreasing);
        let x = invert_at(&m, -1.0, 1e-13).unwrap();
        assert!((x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range() {
        let m = mono("x", -1.0, 1.0, |x| x);
        assert!(matches!(invert_at(&m, 1.5, 1e-12), Err(Error::OutOfRange { .. })));
        assert!(matches!(invert_at(&m, 0.0, 0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn non_monotone_is_rejected() {
        let f = ScalarFn::new("x^2", Interval::closed(-1.0, 2.0), |x| x * x);
        assert!(matches!(MonotoneFn::new(f, -1.0, 2.0), Err(Error::NonMonotone { .. })));
    }

    #[test]
    fn jump_is_reported() {
        let m = mono("step", 0.0, 1.0, |x| if x < 0.5 { x } else { x + 1.0 });
        assert!(matches!(invert_at(&m, 1.0, 1e-12), Err(Error::Discontinuous { .. })));
    }

    #[test]
    fn bracket_is_tight_with_newton() {
        let f = ScalarFn::new("e^x", Interval::closed(-3.0, 3.0), f64::exp).with_derivative(f64::exp);
        let m = MonotoneFn::new(f, -3.0, 3.0).unwrap();
        let inv = invert_detailed(&m, 2.0, 1e-12).unwrap();
        assert!(inv.bracket.0 <= inv.x && inv.x <= inv.bracket.1);
        assert!(inv.bracket.1 - inv.bracket.0 <= 2e-12);
        assert!((inv.x - 2f64.ln()).abs() < 1e-12);
        assert!(inv.iterations < 20, "{}", inv.iterations);
    }

    #[test]
    fn inverse_of_doubling() {
        let f = ScalarFn::new("2x", Interval::closed(0.0, 1.0), |x| 2.0 * x).with_derivative(|_| 2.0);
        let m = MonotoneFn::new(f, 0.0, 1.0).unwrap();
        let inv = build_inverse(&m, 1e-14).unwrap();
        assert_eq!(inv.domain(), Interval::closed(0.0, 2.0));
        for y in [0.0, 0.3, 1.0, 1.7, 2.0] {
            assert!((inv.eval(y) - y / 2.0).abs() < 1e-14);
            assert!((inv.analytic_derivative(y).unwrap() - 0.5).abs() < 1e-12);
        }
        assert!(inv.eval(3.0).is_nan());
        assert!(inv.is_numeric());
    }

    #[test]
    fn flat_point_derivative_falls_back() {
        // x^3 is flat at 0: the inverse cube root has an infinite slope there,
        // away from it the fallback must agree with the closed form.
        let f = ScalarFn::new("x^3", Interval::closed(-1.0, 1.0), |x| x * x * x).with_derivative(|x| 3.0 * x * x);
        let m = MonotoneFn::new(f, -1.0, 1.0).unwrap();
        let inv = build_inverse(&m, 1e-15).unwrap();
        let d = inv.analytic_derivative(0.5).unwrap();
        let exact = 1.0 / (3.0 * 0.5f64.powf(2.0 / 3.0));
        assert!((d - exact).abs() < 1e-9);
        assert!(inv.analytic_derivative(0.0).unwrap() > 1e3);
    }

    #[test]
    fn rounding_noise_is_not_non_monotone() {
        let (k, c) = (0.43516234411325183, 1.2956716138303632);
        let f = ScalarFn::new("x + k(x^2 - 1)/2 + c", Interval::closed(-1.0, 1.0), move |x| x + (k * (x * x - 1.0) / 2.0 + c))
            .with_derivative(move |x| 1.0 + k * x);
        let m = MonotoneFn::new(f.clone(), -1.0, 1.0).unwrap();
        let y = 0.6756716138303631;
        let x = invert_at(&m, y, INVERSION_TOL).unwrap();
        assert!((f.eval(x) - y).abs() < 1e-15);
    }
}
