//! Worked examples with closed-form oracles.
//!
//! The five solution families are exposed under their family names. The
//! three freezing problems are `ex51`, `ex52` and `ex53`:
//!
//! - `ex51`: `T = 2 - sqrt(x^2 + e^-4)`, `h = 2 log(sqrt(x^2 + e^-4) + x) + 4`
//!   on `[-a, a]`, `a = sqrt(4 - e^-4)`, with `f(z) = log(z + 2) + 2`.
//! - `ex52`: `T = 1`, `h = 2x` on `(-1, 1)` with the tent profile
//!   `f(z) = 1 - |z|`, freezing everywhere at `t = 1`.
//! - `ex53`: `T = 1 - |x|/2` for `|x| >= 1`, `1/2` inside, `h = x` on `(-2, 2)`;
//!   piecewise affine fields with five branches.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freezing::{synthesize_fields, Extension, FreezingProblem};
use crate::funceq::{builtin_family, IntervalPair, SolutionF, FAMILY_NAMES};
use crate::interval::Interval;
use crate::report::{ResidualReport, Sample};
use crate::scalar::ScalarFn;

pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Exclusion = Arc<dyn Fn(f64, f64) -> bool + Send + Sync>;

pub const FIXTURE_NAMES: [&str; 8] =
    ["linear", "golab_schinzel", "piecewise_constant", "hyperbolic", "quadratic", "ex51", "ex52", "ex53"];

/// Closed-form expressions attached to a fixture.
#[derive(Clone, Default)]
pub struct ClosedForms {
    /// The solution `F` of the functional equation.
    pub solution: Option<ScalarFn>,
    pub phi: Option<ScalarFn>,
    /// Wave profile.
    pub f: Option<ScalarFn>,
    pub g_inv: Option<ScalarFn>,
    pub sigma: Option<FieldFn>,
    pub mu: Option<FieldFn>,
    /// Space-time points left out of oracle comparisons.
    pub exclude: Option<Exclusion>,
}

impl ClosedForms {
    pub fn sigma_at(&self, x: f64, t: f64) -> Option<f64> {
        self.sigma.as_ref().map(|s| s(x, t))
    }

    pub fn mu_at(&self, x: f64, t: f64) -> Option<f64> {
        self.mu.as_ref().map(|m| m(x, t))
    }

    pub fn excluded(&self, x: f64, t: f64) -> bool {
        self.exclude.as_ref().is_some_and(|e| e(x, t))
    }
}

impl std::fmt::Debug for ClosedForms {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosedForms")
            .field("solution", &self.solution.as_ref().map(|s| s.label().to_string()))
            .field("phi", &self.phi.is_some())
            .field("f", &self.f.is_some())
            .field("g_inv", &self.g_inv.is_some())
            .field("sigma", &self.sigma.is_some())
            .field("mu", &self.mu.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    name: String,
    notes: String,
    problem: Option<FreezingProblem>,
    solution: Option<SolutionF>,
    closed: ClosedForms,
    oracle_tolerance: f64,
    oracle_grid: (usize, usize),
    boundary_tolerance: f64,
}

impl Fixture {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn notes(&self) -> &str {
        &self.notes
    }

    pub fn problem(&self) -> Result<&FreezingProblem> {
        self.problem.as_ref().ok_or_else(|| self.missing("freezing problem"))
    }

    pub fn solution(&self) -> Result<&SolutionF> {
        self.solution.as_ref().ok_or_else(|| self.missing("functional-equation solution"))
    }

    pub fn closed_forms(&self) -> &ClosedForms {
        &self.closed
    }

    pub fn oracle_tolerance(&self) -> f64 {
        self.oracle_tolerance
    }

    /// Tolerance of `|mu(x, T(x)) - h(x)|` on the freezing front.
    pub fn boundary_tolerance(&self) -> f64 {
        self.boundary_tolerance
    }

    /// Default `(n_x, n_t)` for [`oracle_compare`].
    pub fn oracle_grid(&self) -> (usize, usize) {
        self.oracle_grid
    }

    fn missing(&self, what: &str) -> Error {
        Error::MissingClosedForm { fixture: self.name.clone(), what: what.to_string() }
    }
}

/// Normalizes case and separators (`Golab-Schinzel`, `EX51`) to a fixture name.
pub fn canonical_name(name: &str) -> Result<&'static str> {
    let n = name.trim().to_ascii_lowercase().replace(['.', '-'], "_");
    FIXTURE_NAMES.iter().find(|&&f| f == n).copied().ok_or(Error::UnknownFixture(name.into()))
}

pub fn fixture(name: &str) -> Result<Fixture> {
    fixture_with_params(name, &[])
}

/// Family fixtures take the family parameters; freezing fixtures take none.
pub fn fixture_with_params(name: &str, params: &[f64]) -> Result<Fixture> {
    let canon = canonical_name(name)?;
    if FAMILY_NAMES.contains(&canon) {
        return family_fixture(canon, params);
    }
    if !params.is_empty() {
        return Err(Error::InvalidParameter(format!("fixture `{canon}` takes no parameters")));
    }
    Ok(match canon {
        "ex51" => ex51(),
        "ex52" => ex52(),
        _ => ex53(),
    })
}

fn family_fixture(name: &str, params: &[f64]) -> Result<Fixture> {
    let sol = builtin_family(name, params)?;
    let closed = ClosedForms { solution: Some(sol.function().clone()), phi: Some(sol.involution()), ..Default::default() };
    Ok(Fixture {
        name: name.to_string(),
        notes: format!("closed-form family {}", sol.label()),
        problem: None,
        solution: Some(sol),
        closed,
        oracle_tolerance: 0.0,
        oracle_grid: (0, 0),
        boundary_tolerance: 0.0,
    })
}

fn e4() -> f64 {
    (-4.0f64).exp()
}

fn ex51() -> Fixture {
    let c = e4();
    let a = (4.0 - c).sqrt();
    let dom = Interval::closed(-a, a);
    let t = ScalarFn::new("2 - sqrt(x^2 + e^-4)", dom, move |x| 2.0 - (x * x + c).sqrt())
        .with_derivative(move |x| -x / (x * x + c).sqrt());
    // odd by construction: log(s - |x|) = log(e^-4) - log(s + |x|)
    let h = ScalarFn::new("2 log(sqrt(x^2 + e^-4) + x) + 4", dom, move |x: f64| {
        if x == 0.0 {
            return 0.0;
        }
        let v = 2.0 * ((x * x + c).sqrt() + x.abs()).ln() + 4.0;
        v.copysign(x)
    })
    .with_derivative(move |x| 2.0 / (x * x + c).sqrt());
    let problem = FreezingProblem::new(a, t, h).expect("positive half-width");

    let f = ScalarFn::new("log(z + 2) + 2", Interval::open(-2.0, f64::INFINITY), |z| (z + 2.0).ln() + 2.0)
        .with_derivative(|z| 1.0 / (z + 2.0));
    let g_inv = ScalarFn::new("((z + 2)^2 - e^-4) / (2(z + 2))", dom, move |z| {
        let w = z + 2.0;
        (w * w - c) / (2.0 * w)
    })
    .with_derivative(move |z| {
        let w = z + 2.0;
        0.5 * (1.0 + c / (w * w))
    });
    let gi = g_inv.clone();
    let phi = ScalarFn::new("z - 2 g^-1(z)", dom, move |z| z - 2.0 * gi.eval(z));
    let big_f = ScalarFn::new("-((2x + 2)^2 - e^-4) / (4x + 4)", Interval::real_line(), move |x| {
        if x == -1.0 { 0.0 } else { -((2.0 * x + 2.0).powi(2) - c) / (4.0 * x + 4.0) }
    });
    let sigma: FieldFn = Arc::new(|x, t| (x - t + 2.0).ln() + (-x - t + 2.0).ln() + 4.0);
    let mu: FieldFn = Arc::new(|x, t| (x - t + 2.0).ln() - (-x - t + 2.0).ln());
    let solution = builtin_family("quadratic", &[2.0, 4.0, 2.0 - c / 2.0]).expect("nonzero discriminant");
    Fixture {
        name: "ex51".into(),
        notes: "smooth freezing profile with logarithmic wave profile; F is the quadratic family (2, 4, 2 - e^-4/2)".into(),
        problem: Some(problem),
        solution: Some(solution),
        closed: ClosedForms {
            solution: Some(big_f),
            phi: Some(phi),
            f: Some(f),
            g_inv: Some(g_inv),
            sigma: Some(sigma),
            mu: Some(mu),
            exclude: None,
        },
        oracle_tolerance: 1e-8,
        oracle_grid: (101, 101),
        boundary_tolerance: 1e-8,
    }
}

fn ex52() -> Fixture {
    let dom = Interval::closed(-1.0, 1.0);
    let t = ScalarFn::new("1", dom, |_| 1.0).with_derivative(|_| 0.0);
    let h = ScalarFn::new("2x", dom, |x| 2.0 * x).with_derivative(|_| 2.0);
    let problem = FreezingProblem::new(1.0, t, h)
        .expect("positive half-width")
        .lenient()
        .on_open_interval()
        .with_extension(Extension::EvenReflection);

    let f = ScalarFn::new("1 - |z|", Interval::real_line(), |z: f64| if z <= 0.0 { 1.0 + z } else { 1.0 - z });
    let g_inv = ScalarFn::new("z + 1", Interval::closed(-2.0, 0.0), |z| z + 1.0).with_derivative(|_| 1.0);
    let phi = ScalarFn::new("-z - 2", Interval::closed(-2.0, 0.0), |z| -z - 2.0).with_derivative(|_| -1.0);
    let sigma: FieldFn = Arc::new(|x: f64, t| if x.abs() > t { 2.0 - 2.0 * x.abs() } else { 2.0 - 2.0 * t });
    // odd in x, as mu must be for odd h
    let mu: FieldFn = Arc::new(|x: f64, t| if x.abs() > t { 2.0 * t * x.signum() } else { 2.0 * x });
    let band = 3e-3;
    let exclude: Exclusion = Arc::new(move |x: f64, t| (x.abs() - t).abs() < band);
    let solution = builtin_family("linear", &[0.5]).expect("linear family");
    Fixture {
        name: "ex52".into(),
        notes: "simultaneous freezing at t = 1 with a tent profile; F(x) = -2(x + 1/2)".into(),
        problem: Some(problem),
        solution: Some(solution.clone()),
        closed: ClosedForms {
            solution: Some(solution.function().clone()),
            phi: Some(phi),
            f: Some(f),
            g_inv: Some(g_inv),
            sigma: Some(sigma),
            mu: Some(mu),
            exclude: Some(exclude),
        },
        oracle_tolerance: 1e-10,
        oracle_grid: (101, 101),
        boundary_tolerance: 1e-8,
    }
}

/// Branch predicates of the five-region formulas, in the listed order.
fn ex53_regions(x: f64, t: f64) -> [bool; 5] {
    let band = |lo: f64, hi: f64| lo <= t && t <= hi;
    [
        band(x + 1.5, -x - 0.5),
        band(x - 0.5, x + 1.5) && t <= -x - 0.5,
        band(x - 0.5, x + 1.5) && band(-x - 0.5, -x + 1.5),
        t <= x - 0.5 && band(-x - 0.5, -x + 1.5),
        band(-x + 1.5, x - 0.5),
    ]
}

fn ex53_branch(x: f64, t: f64) -> Option<usize> {
    ex53_regions(x, t).iter().position(|&b| b)
}

fn ex53() -> Fixture {
    let dom = Interval::closed(-2.0, 2.0);
    let t = ScalarFn::new("1 - |x|/2 (|x| >= 1), 1/2", dom, |x: f64| if x.abs() >= 1.0 { 1.0 - x.abs() / 2.0 } else { 0.5 });
    let h = ScalarFn::new("x", dom, |x| x).with_derivative(|_| 1.0);
    let problem = FreezingProblem::new(2.0, t, h)
        .expect("positive half-width")
        .lenient()
        .on_open_interval()
        .with_kinks(vec![-1.0, 1.0]);

    let g_inv_eval = |z: f64| {
        if z >= 0.5 {
            2.0 / 3.0 * (z + 1.0)
        } else if z > -1.5 {
            z + 0.5
        } else {
            2.0 * (z + 1.0)
        }
    };
    let g_inv = ScalarFn::new("g^-1 (three branches)", dom, g_inv_eval);
    let f = ScalarFn::new("g^-1(z) / 2", dom, move |z| 0.5 * g_inv_eval(z));
    let unit = Interval::closed(-1.0, 1.0);
    let big_f = ScalarFn::new("-g^-1(2x)", unit, move |x| -g_inv_eval(2.0 * x));
    let phi = ScalarFn::new("x - g^-1(2x)", unit, move |x| x - g_inv_eval(2.0 * x));

    let sigma: FieldFn = Arc::new(|x, t| match ex53_branch(x, t) {
        Some(0) => 2.0 / 3.0 * x - 4.0 / 3.0 * t + 4.0 / 3.0,
        Some(1) => x / 6.0 - 5.0 / 6.0 * t + 7.0 / 12.0,
        Some(2) => 0.5 - t,
        Some(3) => -x / 6.0 - 5.0 / 6.0 * t + 7.0 / 12.0,
        Some(4) => -2.0 / 3.0 * x - 4.0 / 3.0 * t + 4.0 / 3.0,
        _ => f64::NAN,
    });
    let mu: FieldFn = Arc::new(|x, t| match ex53_branch(x, t) {
        Some(0) => 4.0 / 3.0 * x - 2.0 / 3.0 * t + 2.0 / 3.0,
        Some(1) => 5.0 / 6.0 * x - t / 6.0 - 1.0 / 12.0,
        Some(2) => x,
        Some(3) => 5.0 / 6.0 * x + t / 6.0 + 1.0 / 12.0,
        Some(4) => 4.0 / 3.0 * x + 2.0 / 3.0 * t - 2.0 / 3.0,
        _ => f64::NAN,
    });
    let exclude: Exclusion = Arc::new(|x, t| ex53_regions(x, t).iter().filter(|&&b| b).count() != 1);

    let solution = SolutionF::new(
        big_f.clone(),
        vec![
            IntervalPair::new(Interval::closed(-1.0, -0.75), Interval::closed(0.25, 1.0)),
            IntervalPair::new(Interval::closed(-0.75, 0.25), Interval::closed(-0.75, 0.25)),
        ],
        vec![-0.25],
    )
    .with_window(unit);
    Fixture {
        name: "ex53".into(),
        notes: "mixed freezing: continuous in the outer regions, simultaneous at t = 1/2 for |x| < 1".into(),
        problem: Some(problem),
        solution: Some(solution),
        closed: ClosedForms {
            solution: Some(big_f),
            phi: Some(phi),
            f: Some(f),
            g_inv: Some(g_inv),
            sigma: Some(sigma),
            mu: Some(mu),
            exclude: Some(exclude),
        },
        oracle_tolerance: 1e-8,
        oracle_grid: (161, 81),
        boundary_tolerance: 1e-6,
    }
}

/// Largest deviation of the synthesized `(sigma, mu)` from the closed forms
/// over the unfrozen points of an `n_x` by `n_t` grid of
/// `[-a, a] x [0, T(0)]`, skipping excluded points.
pub fn oracle_compare(name: &str, n_x: usize, n_t: usize) -> Result<ResidualReport> {
    let fx = fixture(name)?;
    let p = fx.problem()?;
    let (sigma, mu) = match (&fx.closed.sigma, &fx.closed.mu) {
        (Some(s), Some(m)) => (s.clone(), m.clone()),
        _ => return Err(fx.missing("closed-form sigma and mu")),
    };
    if n_x < 3 || n_t < 3 {
        return Err(Error::EmptyGrid(format!("grid {n_x}x{n_t} needs at least 3 points per axis")));
    }
    let fp = synthesize_fields(p)?;
    let a = p.half_width();
    let xs = Interval::closed(-a, a).sample(n_x);
    let ts = Interval::closed(0.0, p.latest_freezing()).sample(n_t);
    let rows: Vec<Vec<(Sample, f64)>> = xs
        .par_iter()
        .map(|&x| {
            ts.iter()
                .filter(|&&t| !fp.is_frozen(x, t) && !fx.closed.excluded(x, t))
                .map(|&t| {
                    let ds = (fp.sigma(x, t) - sigma(x, t)).abs();
                    let dm = (fp.mu(x, t) - mu(x, t)).abs();
                    (Sample::XT([x, t]), if ds.is_nan() || dm.is_nan() { f64::NAN } else { ds.max(dm) })
                })
                .collect()
        })
        .collect();
    let (grid, res): (Vec<Sample>, Vec<f64>) = rows.into_iter().flatten().unzip();
    if grid.is_empty() {
        return Err(Error::EmptyGrid(format!("no unfrozen points for `{}`", fx.name)));
    }
    Ok(ResidualReport::new(format!("{} synthesized vs closed-form sigma, mu", fx.name), grid, res, fx.oracle_tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freezing::{build_wave_profile, generator_pair, validate_problem};

    #[test]
    fn name_normalization() {
        assert_eq!(canonical_name("EX51").unwrap(), "ex51");
        assert_eq!(canonical_name("Golab-Schinzel").unwrap(), "golab_schinzel");
        assert_eq!(canonical_name("hyperbolic").unwrap(), "hyperbolic");
        assert!(matches!(fixture("ex54"), Err(Error::UnknownFixture(_))));
        assert!(fixture_with_params("ex51", &[1.0]).is_err());
    }

    #[test]
    fn closed_form_spot_values() {
        let fx = fixture("ex51").unwrap();
        let s = fx.closed_forms().sigma_at(0.0, 0.0).unwrap();
        assert!((s - (2.0 * 2f64.ln() + 4.0)).abs() < 1e-15);
        assert_eq!(fixture("ex52").unwrap().problem().unwrap().t(0.3), 1.0);
        assert_eq!(fixture("ex53").unwrap().closed_forms().sigma_at(0.0, 0.0), Some(0.5));
        assert!(fixture("linear").unwrap().problem().is_err());
    }

    #[test]
    fn ex51_core_is_the_spatial_interval() {
        let p = fixture("ex51").unwrap().problem().unwrap().clone();
        let a = p.half_width();
        assert!(p.t(a).abs() < 1e-15);
        let w = build_wave_profile(&p).unwrap();
        assert!((w.core().lo + a).abs() < 1e-15 && (w.core().hi - a).abs() < 1e-15);
        assert!((w.eval(-1.0) - 2.0).abs() < 1e-12);
        assert!(validate_problem(&p).iter().all(|f| f.passed));
    }

    #[test]
    fn ex53_generator_matches_three_branches() {
        let fx = fixture("ex53").unwrap();
        let (_, g_inv) = generator_pair(fx.problem().unwrap()).unwrap();
        let oracle = fx.closed_forms().g_inv.clone().unwrap();
        for z in Interval::closed(-2.0, 2.0).sample(81) {
            assert!((g_inv.eval(z) - oracle.eval(z)).abs() < 1e-12, "{z}");
        }
    }

    #[test]
    fn ex53_involution_maps_the_stated_intervals() {
        let phi = fixture("ex53").unwrap().closed_forms().phi.clone().unwrap();
        assert!((phi.eval(-1.0) - 1.0).abs() < 1e-15);
        assert!((phi.eval(-0.75) - 0.25).abs() < 1e-15);
        assert!((phi.eval(0.25) + 0.75).abs() < 1e-15);
        assert!((phi.eval(-0.25) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn ex53_boundary_points_are_excluded() {
        let cf = fixture("ex53").unwrap().closed_forms().clone();
        assert!(cf.excluded(-0.5, 0.0));
        assert!(!cf.excluded(0.0, 0.0));
        assert!(!cf.excluded(-1.8, 0.1));
    }
}
