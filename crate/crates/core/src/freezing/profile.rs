use std::sync::Arc;

use serde::Serialize;

use super::FreezingProblem;
use crate::error::{Error, Result};
use crate::funceq::{IntervalPair, SolutionF, TOL_INV};
use crate::interval::Interval;
use crate::inversion::{build_inverse, invert_at, MonotoneFn, INVERSION_TOL};
use crate::scalar::{Provenance, ScalarFn};

/// How the wave profile is continued outside the core interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extension {
    /// Affine continuation matching value and one-sided slope at each end.
    LinearC1,
    /// Mirror image about the nearest core endpoint (folded periodically).
    EvenReflection,
}

/// `g(x) = x - T(x)` as a certified increasing function, and its inverse.
pub fn generator_pair(p: &FreezingProblem) -> Result<(MonotoneFn, ScalarFn)> {
    p.check_admissible()?;
    let a = p.half_width();
    let t = p.freezing_time().clone();
    let tf = t.eval_arc();
    let mut g = ScalarFn::new(format!("x - {}", t.label()), Interval::closed(-a, a), move |x| x - tf(x));
    if let Some(d) = t.derivative_arc() {
        g = g.with_derivative(move |x| 1.0 - d(x));
    }
    let g = MonotoneFn::increasing(g, -a, a)?;
    let g_inv = build_inverse(&g, INVERSION_TOL)?.relabel("g^-1");
    for x in Interval::closed(-a, a).sample(101) {
        let err = (g_inv.eval(g.eval(x)) - x).abs();
        if !(err <= TOL_INV * (1.0 + x.abs())) {
            return Err(Error::RoundTrip { x, err });
        }
    }
    Ok((g, g_inv))
}

/// Recovers `T(x) = x - G^{-1}(x)` from a generator `G` (increasing on its
/// finite domain).
pub fn freezing_time_from_generator(generator: &ScalarFn, x: f64) -> Result<f64> {
    let dom = generator.domain();
    let m = MonotoneFn::increasing(generator.clone(), dom.lo, dom.hi)?;
    Ok(x - invert_at(&m, x, INVERSION_TOL)?)
}

/// The solution `F(z) = -2 g^{-1}(z)` on the core interval, whose involution
/// `z - 2 g^{-1}(z)` fixes `-T(0)`.
pub fn generator_solution(p: &FreezingProblem) -> Result<SolutionF> {
    let (_, g_inv) = generator_pair(p)?;
    let core = g_inv.domain();
    let gi = g_inv.clone();
    let mut f = ScalarFn::new("-2 g^-1(z)", core, move |z| -2.0 * gi.eval(z)).with_provenance(Provenance::Numeric);
    if g_inv.has_derivative() {
        let gi = g_inv.clone();
        f = f.with_derivative(move |z| -2.0 * gi.analytic_derivative(z).unwrap_or(f64::NAN));
    }
    let x0 = -p.t(0.0);
    let pair = IntervalPair::new(Interval::closed(core.lo, x0), Interval::closed(x0, core.hi));
    Ok(SolutionF::new(f, vec![pair], vec![x0]).with_window(core))
}

/// The involution `phi(z) = z - 2 g^{-1}(z)` on the core interval.
pub fn generator_involution(g_inv: &ScalarFn) -> ScalarFn {
    let gi = g_inv.clone();
    let mut phi = ScalarFn::new("z - 2 g^-1(z)", g_inv.domain(), move |z| z - 2.0 * gi.eval(z))
        .with_provenance(Provenance::Numeric);
    if g_inv.has_derivative() {
        let gi = g_inv.clone();
        phi = phi.with_derivative(move |z| 1.0 - 2.0 * gi.analytic_derivative(z).unwrap_or(f64::NAN));
    }
    phi
}

/// `f(z) = h(g^{-1}(z)) / 2` on the core interval `g([-a, a])`, continued to
/// the whole line.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    f: ScalarFn,
    core: Interval,
    extension: Extension,
    kinks: Vec<f64>,
    g_inv: ScalarFn,
}

impl WaveProfile {
    pub fn function(&self) -> &ScalarFn {
        &self.f
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.f.eval(z)
    }

    /// `[-a - T(a), a - T(a)]`.
    pub fn core(&self) -> Interval {
        self.core
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    /// Points where `f` may fail to be differentiable.
    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn generator_inverse(&self) -> &ScalarFn {
        &self.g_inv
    }
}

pub fn build_wave_profile(p: &FreezingProblem) -> Result<WaveProfile> {
    let (g, g_inv) = generator_pair(p)?;
    let a = p.half_width();
    let (lo, hi) = (g.eval(-a), g.eval(a));
    let core = Interval::closed(lo, hi);
    let h = p.terminal_velocity().clone();

    let core_f: Arc<dyn Fn(f64) -> f64 + Send + Sync> = {
        let (h, gi) = (h.clone(), g_inv.clone());
        Arc::new(move |z| 0.5 * h.eval(gi.eval(z)))
    };
    let core_df: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>> = match (h.has_derivative(), g_inv.has_derivative()) {
        (true, true) => {
            let (h, gi) = (h.clone(), g_inv.clone());
            Some(Arc::new(move |z| {
                0.5 * h.analytic_derivative(gi.eval(z)).unwrap_or(f64::NAN) * gi.analytic_derivative(z).unwrap_or(f64::NAN)
            }))
        }
        _ => None,
    };
    // one-sided slopes at the core ends, second order when no derivative
    let slope_at = |e: f64, inward: f64| -> f64 {
        if let Some(d) = &core_df {
            return d(e);
        }
        let eta = 1e-6 * (1.0 + e.abs()) * inward;
        (-3.0 * core_f(e) + 4.0 * core_f(e + eta) - core_f(e + 2.0 * eta)) / (2.0 * eta)
    };

    let extension = p.extension();
    let (f_lo, f_hi) = (core_f(lo), core_f(hi));
    let (s_lo, s_hi) = (slope_at(lo, 1.0), slope_at(hi, -1.0));
    let width = hi - lo;
    let eval = {
        let core_f = core_f.clone();
        move |z: f64| -> f64 {
            if z >= lo && z <= hi {
                return core_f(z);
            }
            match extension {
                Extension::LinearC1 => {
                    if z < lo { f_lo + s_lo * (z - lo) } else { f_hi + s_hi * (z - hi) }
                }
                Extension::EvenReflection => {
                    let r = (z - lo).rem_euclid(2.0 * width);
                    let folded = if r <= width { lo + r } else { lo + 2.0 * width - r };
                    core_f(folded.clamp(lo, hi))
                }
            }
        }
    };
    let mut f = ScalarFn::new("f", Interval::real_line(), eval).with_provenance(Provenance::Numeric);
    if let Some(d) = core_df {
        f = f.with_derivative(move |z| {
            if z >= lo && z <= hi {
                return d(z);
            }
            match extension {
                Extension::LinearC1 => {
                    if z < lo { s_lo } else { s_hi }
                }
                Extension::EvenReflection => {
                    let r = (z - lo).rem_euclid(2.0 * width);
                    if r <= width { d(lo + r) } else { -d(lo + 2.0 * width - r) }
                }
            }
        });
    }

    let mut kinks: Vec<f64> = p.kinks().iter().map(|&x| g.eval(x)).collect();
    if extension == Extension::EvenReflection {
        kinks.extend([lo, hi]);
    }
    kinks.sort_by(f64::total_cmp);
    kinks.dedup();
    Ok(WaveProfile { f, core, extension, kinks, g_inv })
}
