use rayon::prelude::*;
use serde::Serialize;

use super::{generator_involution, generator_pair, Extension, FieldPair, FreezingProblem, DEFAULT_DELTA, KINK_BAND, SIGMA_FLOOR};
use crate::error::{Error, Result};
use crate::funceq::TOL_INV;
use crate::interval::Interval;
use crate::report::{ResidualReport, Sample};

/// Tolerance of the reflection identities.
pub const REFLECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeOptions {
    pub n_x: usize,
    pub n_t: usize,
    /// Defaults to `T(0)`.
    pub t_max: Option<f64>,
    pub delta: f64,
    /// Overrides the calibrated `max(1e-8, C delta^2)`.
    pub tolerance: Option<f64>,
}

impl Default for PdeOptions {
    fn default() -> Self {
        Self { n_x: 101, n_t: 101, t_max: None, delta: DEFAULT_DELTA, tolerance: None }
    }
}

/// Central-difference residuals of the first-order system and the wave
/// equation, at step `delta` and again at `delta / 2`.
#[derive(Debug, Clone, Serialize)]
pub struct PdeResidualReport {
    pub delta: f64,
    /// Truncation constant estimated from third and fourth differences of `f`.
    pub c_estimate: f64,
    pub tolerance: f64,
    /// `d_t mu + d_x sigma`.
    pub momentum: ResidualReport,
    /// `d_t sigma + d_x mu`.
    pub continuity: ResidualReport,
    /// `d_tt sigma - d_xx sigma`.
    pub wave: ResidualReport,
    /// Sup-norms of the three residuals at `delta / 2`.
    pub halved: [f64; 3],
    /// `sup(delta) / sup(delta / 2)` for each residual.
    pub richardson: [f64; 3],
    pub pass: bool,
}

impl PdeResidualReport {
    pub fn reports(&self) -> [&ResidualReport; 3] {
        [&self.momentum, &self.continuity, &self.wave]
    }

    /// Whether every Richardson ratio lies in `[lo, hi]`.
    pub fn richardson_within(&self, lo: f64, hi: f64) -> bool {
        self.richardson.iter().all(|r| (lo..=hi).contains(r))
    }
}

fn near_kink(fp: &FieldPair, x: f64, t: f64, band: f64) -> bool {
    let kinks = fp.profile().kinks();
    if kinks.is_empty() {
        return false;
    }
    ((x.abs() - t).abs() < band) || kinks.iter().any(|&z| (x - t - z).abs() < band || (-x - t - z).abs() < band)
}

fn stencil(fp: &FieldPair, x: f64, t: f64, d: f64) -> [f64; 3] {
    let s = |x, t| fp.sigma(x, t);
    let m = |x, t| fp.mu(x, t);
    let (s0, sxp, sxm, stp, stm) = (s(x, t), s(x + d, t), s(x - d, t), s(x, t + d), s(x, t - d));
    let r1 = (m(x, t + d) - m(x, t - d)) / (2.0 * d) + (sxp - sxm) / (2.0 * d);
    let r2 = (stp - stm) / (2.0 * d) + (m(x + d, t) - m(x - d, t)) / (2.0 * d);
    let rw = (stp - 2.0 * s0 + stm) / (d * d) - (sxp - 2.0 * s0 + sxm) / (d * d);
    [r1, r2, rw]
}

/// Estimates `C` with `|residual| <= C delta^2` from samples of `f'''` and
/// `f''''` over the characteristic arguments in `[lo, hi]`, away from kinks.
fn truncation_constant(fp: &FieldPair, lo: f64, hi: f64, delta: f64) -> f64 {
    let f = fp.profile().function();
    let core = fp.profile().core();
    let eta = 2e-3;
    let mut avoid: Vec<f64> = fp.profile().kinks().to_vec();
    avoid.extend([core.lo, core.hi]);
    let guard = 2.0 * eta + KINK_BAND * delta;
    let (mut d3, mut d4) = (0.0_f64, 0.0_f64);
    for z in Interval::closed(lo, hi).sample(401) {
        if avoid.iter().any(|&k| (z - k).abs() < guard) {
            continue;
        }
        let v = [f.eval(z - 2.0 * eta), f.eval(z - eta), f.eval(z), f.eval(z + eta), f.eval(z + 2.0 * eta)];
        let third = (v[4] - 2.0 * v[3] + 2.0 * v[1] - v[0]) / (2.0 * eta.powi(3));
        let fourth = (v[4] - 4.0 * v[3] + 6.0 * v[2] - 4.0 * v[1] + v[0]) / eta.powi(4);
        if third.is_finite() && fourth.is_finite() {
            d3 = d3.max(third.abs());
            d4 = d4.max(fourth.abs());
        }
    }
    // central differences: first derivative error f'''d^2/6, second f''''d^2/12,
    // four terms each
    (4.0 / 6.0 * d3).max(4.0 / 12.0 * d4)
}

/// Admissible interior points: two grid steps from the spatial boundary and
/// the freezing front, `sigma > SIGMA_FLOOR`, outside kink bands.
fn pde_points(fp: &FieldPair, opts: &PdeOptions, t_max: f64) -> Vec<(f64, f64)> {
    let p = fp.problem();
    let a = p.half_width();
    let xs = Interval::closed(-a, a).sample(opts.n_x);
    let ts = Interval::closed(0.0, t_max).sample(opts.n_t);
    let dx = 2.0 * a / (opts.n_x - 1) as f64;
    let dt = t_max / (opts.n_t - 1) as f64;
    let band = KINK_BAND * opts.delta;
    let slack = 1e-12 * (1.0 + a);
    let mut pts = Vec::new();
    for &x in &xs {
        if x < -a + 2.0 * dx - slack || x > a - 2.0 * dx + slack {
            continue;
        }
        let front = [x - 2.0 * dx, x, x + 2.0 * dx].iter().map(|&y| p.t(y)).fold(f64::INFINITY, f64::min);
        for &t in &ts {
            if t < 2.0 * dt - slack || t > front - 2.0 * dt {
                continue;
            }
            if near_kink(fp, x, t, band) || !(fp.sigma(x, t) > SIGMA_FLOOR) {
                continue;
            }
            pts.push((x, t));
        }
    }
    pts
}

pub fn residual_pde(fp: &FieldPair, opts: &PdeOptions) -> Result<PdeResidualReport> {
    if opts.n_x < 3 || opts.n_t < 3 {
        return Err(Error::EmptyGrid(format!("grid {}x{} needs at least 3 points per axis", opts.n_x, opts.n_t)));
    }
    if !(opts.delta > 0.0) {
        return Err(Error::InvalidParameter(format!("step delta = {} must be positive", opts.delta)));
    }
    let t_max = opts.t_max.unwrap_or_else(|| fp.problem().latest_freezing());
    if !(t_max > 0.0) {
        return Err(Error::InvalidParameter(format!("t_max = {t_max} must be positive")));
    }
    let pts = pde_points(fp, opts, t_max);
    if pts.is_empty() {
        return Err(Error::EmptyGrid("no admissible interior points for the PDE residual".into()));
    }
    let delta = opts.delta;
    let values: Vec<([f64; 3], [f64; 3])> =
        pts.par_iter().map(|&(x, t)| (stencil(fp, x, t, delta), stencil(fp, x, t, delta / 2.0))).collect();

    let (zlo, zhi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, t)| {
        let (u, v) = (x - t, -x - t);
        (lo.min(u.min(v)), hi.max(u.max(v)))
    });
    let c = truncation_constant(fp, zlo - delta, zhi + delta, delta);
    let tolerance = opts.tolerance.unwrap_or_else(|| (c * delta * delta).max(1e-8));

    let grid: Vec<Sample> = pts.iter().map(|&(x, t)| Sample::XT([x, t])).collect();
    let report = |k: usize, label: &str| {
        ResidualReport::new(label, grid.clone(), values.iter().map(|v| v.0[k]).collect(), tolerance)
    };
    let momentum = report(0, "d_t mu + d_x sigma");
    let continuity = report(1, "d_t sigma + d_x mu");
    let wave = report(2, "d_tt sigma - d_xx sigma");
    let mut halved = [0.0; 3];
    for (k, h) in halved.iter_mut().enumerate() {
        *h = values.iter().fold(0.0_f64, |m, v| m.max(if v.1[k].is_nan() { f64::INFINITY } else { v.1[k].abs() }));
    }
    let sups = [momentum.sup_norm, continuity.sup_norm, wave.sup_norm];
    let richardson = [sups[0] / halved[0], sups[1] / halved[1], sups[2] / halved[2]];
    let pass = momentum.pass && continuity.pass && wave.pass;
    Ok(PdeResidualReport { delta, c_estimate: c, tolerance, momentum, continuity, wave, halved, richardson, pass })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryOptions {
    pub n_x: usize,
    /// The time step is `T(0) / steps`.
    pub steps: usize,
    pub terminal_tol: f64,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        Self { n_x: 51, steps: 1000, terminal_tol: 1e-8 }
    }
}

/// Checks along the freezing front `t = T(x)`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub time_step: f64,
    /// `|t_hat(x) - T(x)|` for the first grid time `t_hat` with `sigma <= SIGMA_FLOOR`.
    pub first_zero: ResidualReport,
    /// `|mu(x, T(x)) - h(x)|` from the unclamped formula.
    pub terminal: ResidualReport,
    /// `|f(x - T(x)) + f(-x - T(x))|`.
    pub antisymmetry: ResidualReport,
    /// Number of times `t < T(x) - dt` with `sigma(x, t) <= 0`.
    pub positivity: ResidualReport,
    /// Number of time steps before `T(x)` where `sigma` fails to decrease.
    /// Only for affine extensions.
    pub monotone_decay: Option<ResidualReport>,
}

impl BoundaryReport {
    pub fn reports(&self) -> Vec<&ResidualReport> {
        let mut v = vec![&self.first_zero, &self.terminal, &self.antisymmetry, &self.positivity];
        v.extend(self.monotone_decay.as_ref());
        v
    }

    pub fn pass(&self) -> bool {
        self.reports().iter().all(|r| r.pass)
    }
}

pub fn verify_freezing_boundary(fp: &FieldPair, opts: &BoundaryOptions) -> Result<BoundaryReport> {
    if opts.n_x < 3 {
        return Err(Error::EmptyGrid(format!("{} boundary samples, need at least 3", opts.n_x)));
    }
    let p = fp.problem();
    let t0 = p.latest_freezing();
    if !(t0 > 0.0) {
        return Err(Error::InvalidParameter(format!("T(0) = {t0} must be positive")));
    }
    let dt = t0 / opts.steps as f64;
    let last = 2 * opts.steps + 1;
    let xs = p.spatial().sample(opts.n_x);
    let decay = p.extension() == Extension::LinearC1;

    let rows: Vec<[f64; 5]> = xs
        .par_iter()
        .map(|&x| {
            let tx = p.t(x);
            let time = |k: usize| k as f64 * t0 / opts.steps as f64;
            let t_hat = (0..=last).map(time).find(|&t| fp.sigma_active(x, t) <= SIGMA_FLOOR).unwrap_or(f64::INFINITY);
            let terminal = (fp.mu_active(x, tx) - p.h(x)).abs();
            let anti = fp.sigma_active(x, tx).abs();
            let mut negative = 0usize;
            let mut rising = 0usize;
            let mut prev = f64::INFINITY;
            for k in 0..=last {
                let t = time(k);
                if t > tx {
                    break;
                }
                let s = fp.sigma_active(x, t);
                if t < tx - dt && s <= 0.0 {
                    negative += 1;
                }
                if s >= prev {
                    rising += 1;
                }
                prev = s;
            }
            [(t_hat - tx).abs(), terminal, anti, negative as f64, rising as f64]
        })
        .collect();

    let grid: Vec<Sample> = xs.iter().map(|&x| Sample::X(x)).collect();
    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    Ok(BoundaryReport {
        time_step: dt,
        first_zero: ResidualReport::new("first zero of sigma vs T(x)", grid.clone(), col(0), dt * (1.0 + 1e-9)),
        terminal: ResidualReport::new("mu(x, T(x)) - h(x)", grid.clone(), col(1), opts.terminal_tol),
        antisymmetry: ResidualReport::new("f(x - T(x)) + f(-x - T(x))", grid.clone(), col(2), opts.terminal_tol),
        positivity: ResidualReport::new("sigma > 0 before T(x)", grid.clone(), col(3), 0.0),
        monotone_decay: decay.then(|| ResidualReport::new("sigma decreasing in t", grid, col(4), 0.0)),
    })
}

/// `|phi(x - T(x)) - (-x - T(x))|` and the mirrored identity, maximum of the
/// two at each of `n` samples, with `phi(z) = z - 2 g^{-1}(z)`.
pub fn reflection_identity_check(p: &FreezingProblem, n: usize) -> Result<ResidualReport> {
    if n < 2 {
        return Err(Error::EmptyGrid(format!("{n} samples, need at least 2")));
    }
    let (_, g_inv) = generator_pair(p)?;
    let phi = generator_involution(&g_inv);
    let xs = p.spatial().sample(n);
    let res: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let t = p.t(x);
            let a = (phi.eval(x - t) - (-x - t)).abs();
            let b = (phi.eval(-x - t) - (x - t)).abs();
            a.max(b)
        })
        .collect();
    Ok(ResidualReport::new("phi(+-x - T(x)) = -+x - T(x)", xs.into_iter().map(Sample::X).collect(), res, REFLECTION_TOL))
}

/// `|g^{-1}(z - 2 g^{-1}(z)) + g^{-1}(z)|` on `n` points of the core interval.
pub fn bridge_identity(p: &FreezingProblem, n: usize) -> Result<ResidualReport> {
    if n < 2 {
        return Err(Error::EmptyGrid(format!("{n} samples, need at least 2")));
    }
    let (_, g_inv) = generator_pair(p)?;
    let zs = g_inv.domain().sample(n);
    let res: Vec<f64> = zs
        .iter()
        .map(|&z| {
            let w = g_inv.eval(z);
            (g_inv.eval(z - 2.0 * w) + w).abs()
        })
        .collect();
    Ok(ResidualReport::new("g^-1(z - 2 g^-1(z)) + g^-1(z)", zs.into_iter().map(Sample::X).collect(), res, TOL_INV))
}
