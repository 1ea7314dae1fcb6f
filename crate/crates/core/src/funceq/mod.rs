//! Solutions of the functional equation `F(x + F(x)) = -F(x)`.
//!
//! A solution `F` is tied to the map `phi(x) = x + F(x)`, which is an
//! involution on each piece `I ∪ J` of the domain (with `phi(I) = J` and
//! `phi(J) = I`). Conversely every continuous strictly monotone involution
//! swapping two intervals gives a solution `F = phi - id`. This module builds
//! solutions from involutions, involutions from even profiles (by rotating the
//! graph of the profile by 45 degrees), applies the conjugacy / shift /
//! reflection symmetries and checks residuals on grids.

mod families;

pub use families::{builtin_family, Family, FAMILY_NAMES};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::inversion::{build_inverse, invert_at, MonotoneFn, INVERSION_TOL};
use crate::report::{ResidualReport, Sample};
use crate::scalar::{Provenance, ScalarFn};

/// Functional-equation tolerance for closed-form solutions.
pub const TOL_FEQ_CLOSED: f64 = 1e-9;
/// Functional-equation tolerance for solutions built on numerical inverses.
pub const TOL_FEQ_NUMERIC: f64 = 1e-6;
/// Involution round-trip tolerance (relative to `1 + |x|`).
pub const TOL_INV: f64 = 1e-10;
/// Fixed point tolerance.
pub const TOL_ROOT: f64 = 1e-12;
/// Radius of the ball around poles excluded from residual grids.
pub const POLE_RADIUS: f64 = 1e-6;
/// Samples used by evenness, slope and involution checks.
pub const CHECK_SAMPLES: usize = 201;
/// Evenness tolerance `|psi(x) - psi(-x)|`.
pub const EVEN_TOL: f64 = 1e-12;

/// Two intervals exchanged by the involution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalPair {
    pub i: Interval,
    pub j: Interval,
}

impl IntervalPair {
    pub fn new(i: Interval, j: Interval) -> Self {
        Self { i, j }
    }

    /// `I ∪ J` when it is an interval.
    pub fn union(&self) -> Option<Interval> {
        self.i.union(&self.j)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.i.contains(x) || self.j.contains(x)
    }

    fn map(&self, f: impl Fn(&Interval) -> Interval) -> Self {
        Self { i: f(&self.i), j: f(&self.j) }
    }
}

/// A candidate solution with its domain decomposition.
#[derive(Debug, Clone)]
pub struct SolutionF {
    f: ScalarFn,
    pieces: Vec<IntervalPair>,
    fixed_points: Vec<f64>,
    poles: Vec<f64>,
    window: Interval,
    tolerance: f64,
}

impl SolutionF {
    /// Assembles a solution. The residual window defaults to the finite part
    /// of `F`'s domain and the tolerance to the provenance-based budget.
    pub fn new(f: ScalarFn, pieces: Vec<IntervalPair>, fixed_points: Vec<f64>) -> Self {
        let window = f.domain().finite_window();
        let tolerance = if f.is_numeric() { TOL_FEQ_NUMERIC } else { TOL_FEQ_CLOSED };
        Self { f, pieces, fixed_points, poles: Vec::new(), window, tolerance }
    }

    pub fn with_poles(mut self, poles: Vec<f64>) -> Self {
        self.poles = poles;
        self
    }

    pub fn with_window(mut self, window: Interval) -> Self {
        self.window = window;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn function(&self) -> &ScalarFn {
        &self.f
    }

    pub fn label(&self) -> &str {
        self.f.label()
    }

    pub fn pieces(&self) -> &[IntervalPair] {
        &self.pieces
    }

    pub fn fixed_points(&self) -> &[f64] {
        &self.fixed_points
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.f.eval(x)
    }

    /// `phi(x) = x + F(x)`.
    pub fn phi(&self, x: f64) -> f64 {
        x + self.f.eval(x)
    }

    /// The involution `x + F(x)` as a function.
    pub fn involution(&self) -> ScalarFn {
        let f = self.f.eval_arc();
        let d = self.f.derivative_arc();
        ScalarFn::new(format!("x + {}", self.f.label()), self.f.domain(), move |x| x + f(x))
            .with_derivative_arc(d.map(|d| Arc::new(move |x| 1.0 + d(x)) as crate::scalar::Eval))
            .with_provenance(self.f.provenance())
    }

    /// Membership in the domain: the union of the pieces when any are given,
    /// otherwise the domain of `F`.
    pub fn in_domain(&self, x: f64) -> bool {
        if self.pieces.is_empty() {
            self.f.domain().contains(x)
        } else {
            self.pieces.iter().any(|p| p.contains(x))
        }
    }

    fn near_pole(&self, x: f64) -> bool {
        self.poles.iter().any(|p| (x - p).abs() < POLE_RADIUS)
    }
}

/// Builds the involution `phi(u) = u - 2 x(u)`, where `x(u)` inverts
/// `x -> x + psi(x)`, from an even profile `psi` on `[-a, a]` with
/// `|psi'| < 1`. The result lives on `[-a + psi(a), a + psi(a)]`.
pub fn involution_from_even_profile(psi: &ScalarFn, a: f64) -> Result<ScalarFn> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("half-width a = {a} must be positive")));
    }
    let xs = Interval::closed(-a, a).sample(CHECK_SAMPLES);
    for &x in &xs {
        let diff = (psi.eval(x) - psi.eval(-x)).abs();
        if !(diff <= EVEN_TOL) {
            return Err(Error::NotEven { x, diff });
        }
    }
    // slope bound on the open interval
    for &x in &xs[1..xs.len() - 1] {
        let slope = psi.derivative(x)?;
        if !(slope.abs() < 1.0) {
            return Err(Error::SlopeTooLarge { x, slope });
        }
    }

    let rotated = {
        let p = psi.eval_arc();
        let mut s = ScalarFn::new(format!("x + {}", psi.label()), Interval::closed(-a, a), move |x| x + p(x));
        if let Some(d) = psi.derivative_arc() {
            s = s.with_derivative(move |x| 1.0 + d(x));
        }
        s
    };
    let m = MonotoneFn::increasing(rotated, -a, a)?;
    let x_of_u = build_inverse(&m, INVERSION_TOL)?;
    let (lo, hi) = m.value_range();
    let domain = Interval::closed(lo, hi);

    let inv = x_of_u.clone();
    let mut phi = ScalarFn::new(format!("involution from {}", psi.label()), domain, move |u| {
        u - 2.0 * inv.eval(u)
    })
    .with_provenance(Provenance::Numeric);
    if x_of_u.has_derivative() {
        phi = phi.with_derivative(move |u| 1.0 - 2.0 * x_of_u.analytic_derivative(u).unwrap_or(f64::NAN));
    }

    let report = involution_residual(&phi, &domain.sample(CHECK_SAMPLES), TOL_INV);
    if !report.pass {
        let (s, err) = report.worst().expect("non-empty");
        let Sample::X(x) = s else { unreachable!() };
        return Err(Error::NotInvolution { x, err });
    }
    Ok(phi)
}

/// `|phi(phi(u)) - u| / (1 + |u|)` at each point.
pub fn involution_residual(phi: &ScalarFn, points: &[f64], tolerance: f64) -> ResidualReport {
    let residuals = points
        .iter()
        .map(|&u| (phi.eval(phi.eval(u)) - u).abs() / (1.0 + u.abs()))
        .collect();
    ResidualReport::new(
        format!("involution {}", phi.label()),
        points.iter().map(|&u| Sample::X(u)).collect(),
        residuals,
        tolerance,
    )
}

/// `F(x) = phi(x) - x` on `I ∪ J` for an involution exchanging `I` and `J`.
pub fn solution_from_involution(phi: &ScalarFn, i: Interval, j: Interval) -> Result<SolutionF> {
    let pair = IntervalPair::new(i, j);
    let si = i.finite_window().sample(CHECK_SAMPLES);
    let sj = j.finite_window().sample(CHECK_SAMPLES);
    let slack = |y: f64| 1e-12 * (1.0 + y.abs());

    for (dst, pts) in [(&j, &si), (&i, &sj)] {
        for &x in pts.iter() {
            let y = phi.eval(x);
            if !dst.contains_approx(y, slack(y)) {
                return Err(Error::DomainMismatch { x, y, target: dst.to_string() });
            }
            let err = (phi.eval(y) - x).abs();
            if !(err <= TOL_INV * (1.0 + x.abs())) {
                return Err(Error::NotInvolution { x, err });
            }
        }
    }
    let increasing_on_i = strictly_monotone(phi, &si)?;

    let domain = i.hull(&j);
    let f = {
        let p = phi.eval_arc();
        let mut f = ScalarFn::new(format!("{} - x", phi.label()), domain, move |x| p(x) - x)
            .with_provenance(phi.provenance());
        if let Some(d) = phi.derivative_arc() {
            f = f.with_derivative(move |x| d(x) - 1.0);
        }
        f
    };

    let mut fixed = Vec::new();
    if let Some(k) = pair.union() {
        let mut pts = k.finite_window().sample(CHECK_SAMPLES);
        pts.dedup();
        if !increasing_on_i && !strictly_monotone(phi, &pts)? {
            fixed.push(find_fixed_point(phi, k)?);
        }
    }
    let sol = SolutionF::new(f, vec![pair], fixed);
    let report = residual_functional_eq(&sol, CHECK_SAMPLES)?;
    if !report.pass {
        let (s, residual) = report.worst().expect("non-empty");
        let Sample::X(x) = s else { unreachable!() };
        return Err(Error::ResidualTooLarge { x, residual, tolerance: report.tolerance });
    }
    Ok(sol)
}

/// True if strictly increasing, false if strictly decreasing on the samples.
fn strictly_monotone(phi: &ScalarFn, pts: &[f64]) -> Result<bool> {
    let ys: Vec<f64> = pts.iter().map(|&x| phi.eval(x)).collect();
    if ys.len() < 2 {
        return Ok(true);
    }
    let up = ys.windows(2).all(|w| w[1] > w[0]);
    let down = ys.windows(2).all(|w| w[1] < w[0]);
    match (up, down) {
        (true, _) => Ok(true),
        (_, true) => Ok(false),
        _ => {
            let k = ys
                .windows(2)
                .position(|w| (w[1] > w[0]) != (ys[1] > ys[0]) || w[1] == w[0])
                .unwrap_or(0);
            Err(Error::NonMonotone { label: phi.label().to_string(), x: pts[k + 1] })
        }
    }
}

/// The symmetries of the equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// `x -> a^{-1} F(a x)` on `A / a`.
    Conjugate,
    /// `x -> F(a + x)` on `A - a`.
    Shift,
    /// `x -> -F(-x)` on `-A`.
    Reflect,
}

pub fn transform(sol: &SolutionF, kind: TransformKind, a: f64) -> Result<SolutionF> {
    let f = sol.f.eval_arc();
    let d = sol.f.derivative_arc();
    let label = sol.f.label();
    let prov = sol.f.provenance();
    // x -> the point where F is sampled
    let (new_f, point): (ScalarFn, Box<dyn Fn(f64) -> f64>) = match kind {
        TransformKind::Conjugate => {
            if a == 0.0 {
                return Err(Error::ZeroScale);
            }
            let dom = sol.f.domain().scale(1.0 / a);
            let g = ScalarFn::new(format!("{label} conjugated by {a}"), dom, move |x| f(a * x) / a)
                .with_derivative_arc(d.map(|d| Arc::new(move |x: f64| d(a * x)) as crate::scalar::Eval));
            (g, Box::new(move |x| x / a))
        }
        TransformKind::Shift => {
            let dom = sol.f.domain().translate(-a);
            let g = ScalarFn::new(format!("{label} shifted by {a}"), dom, move |x| f(a + x))
                .with_derivative_arc(d.map(|d| Arc::new(move |x: f64| d(a + x)) as crate::scalar::Eval));
            (g, Box::new(move |x| x - a))
        }
        TransformKind::Reflect => {
            let dom = sol.f.domain().negate();
            let g = ScalarFn::new(format!("{label} reflected"), dom, move |x| -f(-x))
                .with_derivative_arc(d.map(|d| Arc::new(move |x: f64| d(-x)) as crate::scalar::Eval));
            (g, Box::new(|x: f64| -x))
        }
    };
    let map_iv = |iv: &Interval| match kind {
        TransformKind::Conjugate => iv.scale(1.0 / a),
        TransformKind::Shift => iv.translate(-a),
        TransformKind::Reflect => iv.negate(),
    };
    Ok(SolutionF {
        f: new_f.with_provenance(prov),
        pieces: sol.pieces.iter().map(|p| p.map(map_iv)).collect(),
        fixed_points: sol.fixed_points.iter().map(|&x| point(x)).collect(),
        poles: sol.poles.iter().map(|&x| point(x)).collect(),
        window: map_iv(&sol.window),
        tolerance: sol.tolerance,
    })
}

/// `|F(x + F(x)) + F(x)|` over `grid_size` points of the solution's window,
/// skipping pole neighbourhoods and points whose image leaves the domain.
pub fn residual_functional_eq(sol: &SolutionF, grid_size: usize) -> Result<ResidualReport> {
    if grid_size < 2 {
        return Err(Error::InvalidParameter(format!("grid size {grid_size} must be at least 2")));
    }
    let mut grid = Vec::with_capacity(grid_size);
    let mut residuals = Vec::with_capacity(grid_size);
    for x in sol.window.sample(grid_size) {
        if sol.near_pole(x) || !sol.in_domain(x) {
            continue;
        }
        let fx = sol.eval(x);
        let y = x + fx;
        if !sol.in_domain(y) || sol.near_pole(y) {
            continue;
        }
        grid.push(Sample::X(x));
        residuals.push((sol.eval(y) + fx).abs());
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid(sol.label().to_string()));
    }
    Ok(ResidualReport::new(sol.label(), grid, residuals, sol.tolerance))
}

/// Unique fixed point of a strictly decreasing involution on the interval
/// `k`, by bracketing `phi(x) - x`.
pub fn find_fixed_point(phi: &ScalarFn, k: Interval) -> Result<f64> {
    let w = k.finite_window();
    // open ends are nudged inward
    let nudge = |e: f64| 1e-12 * (1.0 + e.abs()).max(w.width());
    let lo = if w.lo_closed { w.lo } else { w.lo + nudge(w.lo) };
    let hi = if w.hi_closed { w.hi } else { w.hi - nudge(w.hi) };
    let p = phi.eval_arc();
    let mut gap = ScalarFn::new(format!("{} - x", phi.label()), Interval::closed(lo, hi), move |x| p(x) - x);
    if let Some(d) = phi.derivative_arc() {
        gap = gap.with_derivative(move |x| d(x) - 1.0);
    }
    let (g_lo, g_hi) = (gap.eval(lo), gap.eval(hi));
    if g_lo.signum() == g_hi.signum() && g_lo != 0.0 && g_hi != 0.0 {
        return Err(Error::NoSignChange(k.to_string()));
    }
    let m = MonotoneFn::new(gap, lo, hi)?;
    let x0 = invert_at(&m, 0.0, TOL_ROOT).map_err(|e| match e {
        Error::OutOfRange { .. } => Error::NoSignChange(k.to_string()),
        other => other,
    })?;
    Ok(x0)
}
