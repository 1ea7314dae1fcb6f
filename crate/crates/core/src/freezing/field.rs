use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use super::{build_wave_profile, FreezingProblem, WaveProfile};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Eval;

/// The fields `sigma` and `mu` of a freezing problem.
///
/// Before the freezing time they are the d'Alembert pair
/// `f(x - t) +- f(-x - t)`; from `t = T(x)` on they are clamped to
/// `sigma = 0`, `mu = h(x)`.
#[derive(Clone)]
pub struct FieldPair {
    problem: FreezingProblem,
    profile: WaveProfile,
    sigma_defect: Option<Eval>,
}

impl std::fmt::Debug for FieldPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldPair")
            .field("problem", &self.problem)
            .field("profile", &self.profile)
            .field("sigma_defect", &self.sigma_defect.is_some())
            .finish()
    }
}

pub fn synthesize_fields(p: &FreezingProblem) -> Result<FieldPair> {
    let profile = build_wave_profile(p)?;
    Ok(FieldPair { problem: p.clone(), profile, sigma_defect: None })
}

impl FieldPair {
    pub fn problem(&self) -> &FreezingProblem {
        &self.problem
    }

    pub fn profile(&self) -> &WaveProfile {
        &self.profile
    }

    /// Adds `d(x - t) + d(-x - t)` to `sigma` only, leaving `mu` intact.
    pub fn with_sigma_perturbation(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.sigma_defect = Some(Arc::new(d));
        self
    }

    pub fn is_perturbed(&self) -> bool {
        self.sigma_defect.is_some()
    }

    pub fn is_frozen(&self, x: f64, t: f64) -> bool {
        t >= self.problem.t(x)
    }

    /// `f(x - t) + f(-x - t)` with no clamp.
    pub fn sigma_active(&self, x: f64, t: f64) -> f64 {
        let (l, r) = (x - t, -x - t);
        let s = self.profile.eval(l) + self.profile.eval(r);
        match &self.sigma_defect {
            Some(d) => s + d(l) + d(r),
            None => s,
        }
    }

    /// `f(x - t) - f(-x - t)` with no clamp.
    pub fn mu_active(&self, x: f64, t: f64) -> f64 {
        self.profile.eval(x - t) - self.profile.eval(-x - t)
    }

    pub fn sigma(&self, x: f64, t: f64) -> f64 {
        if self.is_frozen(x, t) { 0.0 } else { self.sigma_active(x, t) }
    }

    pub fn mu(&self, x: f64, t: f64) -> f64 {
        if self.is_frozen(x, t) { self.problem.h(x) } else { self.mu_active(x, t) }
    }
}

/// Fields sampled on a uniform `n_x` by `n_t` grid of `[-a, a] x [0, t_max]`.
/// Matrices are stored row-major with `x` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub sigma: Vec<f64>,
    pub mu: Vec<f64>,
    pub frozen: Vec<bool>,
}

impl FieldGrid {
    pub fn shape(&self) -> (usize, usize) {
        (self.xs.len(), self.ts.len())
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.ts.len() + j
    }

    pub fn sigma_at(&self, i: usize, j: usize) -> f64 {
        self.sigma[self.idx(i, j)]
    }

    pub fn mu_at(&self, i: usize, j: usize) -> f64 {
        self.mu[self.idx(i, j)]
    }

    pub fn frozen_at(&self, i: usize, j: usize) -> bool {
        self.frozen[self.idx(i, j)]
    }

    pub fn frozen_fraction(&self) -> f64 {
        self.frozen.iter().filter(|&&b| b).count() as f64 / self.frozen.len() as f64
    }

    /// `x,t,sigma,mu,frozen`, one row per grid point, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(96 * (self.sigma.len() + 1));
        out.push_str("x,t,sigma,mu,frozen\n");
        for (i, &x) in self.xs.iter().enumerate() {
            for (j, &t) in self.ts.iter().enumerate() {
                let k = self.idx(i, j);
                let _ = writeln!(out, "{x:.16e},{t:.16e},{:.16e},{:.16e},{}", self.sigma[k], self.mu[k], self.frozen[k]);
            }
        }
        out
    }
}

pub fn sample_grid(fp: &FieldPair, n_x: usize, n_t: usize, t_max: f64) -> Result<FieldGrid> {
    if n_x < 3 || n_t < 3 {
        return Err(Error::EmptyGrid(format!("grid {n_x}x{n_t} needs at least 3 points per axis")));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_max = {t_max} must be positive")));
    }
    let a = fp.problem.half_width();
    let xs = Interval::closed(-a, a).sample(n_x);
    let ts = Interval::closed(0.0, t_max).sample(n_t);
    let rows: Vec<(Vec<f64>, Vec<f64>, Vec<bool>)> = xs
        .par_iter()
        .map(|&x| {
            let mut s = Vec::with_capacity(n_t);
            let mut m = Vec::with_capacity(n_t);
            let mut fr = Vec::with_capacity(n_t);
            for &t in &ts {
                s.push(fp.sigma(x, t));
                m.push(fp.mu(x, t));
                fr.push(fp.is_frozen(x, t));
            }
            (s, m, fr)
        })
        .collect();
    let mut grid = FieldGrid {
        xs,
        ts,
        sigma: Vec::with_capacity(n_x * n_t),
        mu: Vec::with_capacity(n_x * n_t),
        frozen: Vec::with_capacity(n_x * n_t),
    };
    for (s, m, fr) in rows {
        grid.sigma.extend(s);
        grid.mu.extend(m);
        grid.frozen.extend(fr);
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freezing::Extension;
    use crate::scalar::ScalarFn;

    fn tent() -> FieldPair {
        let t = ScalarFn::new("1", Interval::closed(-1.0, 1.0), |_| 1.0).with_derivative(|_| 0.0);
        let h = ScalarFn::new("2x", Interval::closed(-1.0, 1.0), |x| 2.0 * x).with_derivative(|_| 2.0);
        let p = FreezingProblem::new(1.0, t, h)
            .unwrap()
            .lenient()
            .on_open_interval()
            .with_extension(Extension::EvenReflection);
        synthesize_fields(&p).unwrap()
    }

    #[test]
    fn tent_fields() {
        let fp = tent();
        assert!((fp.sigma(0.5, 0.75) - 0.5).abs() < 1e-14);
        assert!((fp.mu(0.5, 0.75) - 1.0).abs() < 1e-14);
        assert!((fp.sigma(0.8, 0.25) - 0.4).abs() < 1e-14);
        assert!((fp.mu(0.8, 0.25) - 0.5).abs() < 1e-14);
        assert_eq!(fp.sigma(0.3, 1.0), 0.0);
        assert_eq!(fp.mu(0.3, 1.5), 0.6);
    }

    #[test]
    fn grid_freezes_on_last_row() {
        let g = sample_grid(&tent(), 5, 5, 1.0).unwrap();
        assert_eq!(g.shape(), (5, 5));
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(g.frozen_at(i, j), j == 4, "({i}, {j})");
            }
        }
        assert_eq!(g.sigma_at(2, 4), 0.0);
        assert_eq!(g.mu_at(2, 4), 0.0);
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), 26);
        assert!(csv.lines().next().unwrap() == "x,t,sigma,mu,frozen");
    }

    #[test]
    fn degenerate_grids() {
        assert!(matches!(sample_grid(&tent(), 2, 5, 1.0), Err(Error::EmptyGrid(_))));
        assert!(sample_grid(&tent(), 3, 3, 0.0).is_err());
        assert_eq!(sample_grid(&tent(), 3, 7, 1.0).unwrap().shape(), (3, 7));
    }

    #[test]
    fn sigma_only_perturbation() {
        let fp = tent().with_sigma_perturbation(|z| 0.01 * z * z);
        assert!(fp.is_perturbed());
        let (x, t) = (0.8, 0.25);
        assert!((fp.sigma(x, t) - (0.4 + 0.01 * (0.55f64.powi(2) + 1.05f64.powi(2)))).abs() < 1e-14);
        assert!((fp.mu(x, t) - 0.5).abs() < 1e-14);
    }
}
