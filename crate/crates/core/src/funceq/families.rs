//! Closed-form solution families.

use super::{IntervalPair, SolutionF};
use crate::error::{Error, Result};
use crate::interval::{Interval, DEFAULT_SPAN};
use crate::scalar::ScalarFn;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `F(x) = -2 (x + a)`.
    Linear { a: f64 },
    /// `F(x) = 1 - 2x`, the `rho = -2` member of the Golab-Schinzel family.
    GolabSchinzel,
    /// `F(x) = (-1)^k` for `k < x <= k + 1`.
    PiecewiseConstant,
    /// `F(x) = -(x + c / x)`, `F(0) = 0`.
    Hyperbolic { c: f64 },
    /// `G(x) = -2 (a x^2 + b x + c) / (2 a x + b)`, `G(-b / 2a) = 0`.
    Quadratic { a: f64, b: f64, c: f64 },
}

pub const FAMILY_NAMES: [&str; 5] = ["linear", "golab_schinzel", "piecewise_constant", "hyperbolic", "quadratic"];

impl Family {
    /// Parses a family name with its parameter list. Missing parameters take
    /// the defaults `linear(0)`, `hyperbolic(1)`, `quadratic(1, 0, -1)`.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let p = |k: usize, default: f64| params.get(k).copied().unwrap_or(default);
        let arity = |n: usize| {
            if params.len() > n {
                Err(Error::InvalidParameter(format!("`{name}` takes at most {n} parameter(s), got {}", params.len())))
            } else {
                Ok(())
            }
        };
        let fam = match name {
            "linear" => {
                arity(1)?;
                Family::Linear { a: p(0, 0.0) }
            }
            "golab_schinzel" => {
                arity(0)?;
                Family::GolabSchinzel
            }
            "piecewise_constant" => {
                arity(0)?;
                Family::PiecewiseConstant
            }
            "hyperbolic" => {
                arity(1)?;
                Family::Hyperbolic { c: p(0, 1.0) }
            }
            "quadratic" => {
                arity(3)?;
                Family::Quadratic { a: p(0, 1.0), b: p(1, 0.0), c: p(2, -1.0) }
            }
            other => return Err(Error::UnknownFixture(other.to_string())),
        };
        if params.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite parameter for `{name}`")));
        }
        Ok(fam)
    }

    pub fn solution(&self) -> Result<SolutionF> {
        match *self {
            Family::Linear { a } => Ok(linear(a, format!("-2(x + {a})"))),
            Family::GolabSchinzel => Ok(linear(-0.5, "1 - 2x".to_string())),
            Family::PiecewiseConstant => Ok(piecewise_constant()),
            Family::Hyperbolic { c } => hyperbolic(c),
            Family::Quadratic { a, b, c } => quadratic(a, b, c),
        }
    }
}

/// Closed-form solution by family name.
pub fn builtin_family(name: &str, params: &[f64]) -> Result<SolutionF> {
    Family::from_name(name, params)?.solution()
}

fn linear(a: f64, label: String) -> SolutionF {
    let f = ScalarFn::new(label, Interval::real_line(), move |x| -2.0 * (x + a)).with_derivative(|_| -2.0);
    let pair = IntervalPair::new(
        Interval::new(f64::NEG_INFINITY, -a, false, true),
        Interval::new(-a, f64::INFINITY, true, false),
    );
    SolutionF::new(f, vec![pair], vec![-a]).with_window(Interval::closed(-DEFAULT_SPAN, DEFAULT_SPAN))
}

fn piecewise_constant() -> SolutionF {
    let f = ScalarFn::new("(-1)^k on (k, k+1]", Interval::real_line(), |x: f64| {
        let k = x.ceil() - 1.0;
        if k.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 }
    })
    .with_derivative(|_| 0.0);
    let span = DEFAULT_SPAN as i64;
    // (2m, 2m+1] <-> (2m+1, 2m+2] over the window
    let pieces = (-span / 2..span / 2)
        .map(|m| {
            let k = 2.0 * m as f64;
            IntervalPair::new(Interval::left_open(k, k + 1.0), Interval::left_open(k + 1.0, k + 2.0))
        })
        .collect();
    SolutionF::new(f, pieces, vec![]).with_window(Interval::closed(-DEFAULT_SPAN, DEFAULT_SPAN))
}

/// Pieces and fixed points of `-(u + c/u)` in the shifted variable `u = x - p`.
fn hyperbolic_pieces(c: f64, p: f64) -> (Vec<IntervalPair>, Vec<f64>) {
    let inf = f64::INFINITY;
    if c > 0.0 {
        let pair = IntervalPair::new(Interval::open(p, inf), Interval::open(-inf, p));
        (vec![pair], vec![])
    } else {
        let r = (-c).sqrt();
        let right = IntervalPair::new(Interval::left_open(p, p + r), Interval::right_open(p + r, inf));
        let left = IntervalPair::new(Interval::new(-inf, p - r, false, true), Interval::right_open(p - r, p));
        (vec![right, left], vec![p + r, p - r])
    }
}

fn hyperbolic(c: f64) -> Result<SolutionF> {
    if c == 0.0 {
        return Err(Error::DegenerateFamily("hyperbolic family needs c != 0".into()));
    }
    let f = ScalarFn::new(format!("-(x + {c}/x)"), Interval::real_line(), move |x| {
        if x == 0.0 { 0.0 } else { -(x + c / x) }
    })
    .with_derivative(move |x| -(1.0 - c / (x * x)));
    let (pieces, fixed) = hyperbolic_pieces(c, 0.0);
    Ok(SolutionF::new(f, pieces, fixed)
        .with_poles(vec![0.0])
        .with_window(Interval::closed(-DEFAULT_SPAN, DEFAULT_SPAN)))
}

fn quadratic(a: f64, b: f64, c: f64) -> Result<SolutionF> {
    let disc = b * b - 4.0 * a * c;
    if a == 0.0 && b == 0.0 {
        return Err(Error::DegenerateFamily("quadratic family needs a or b nonzero".into()));
    }
    if disc == 0.0 {
        return Err(Error::DegenerateFamily(format!("discriminant of ({a}, {b}, {c}) vanishes")));
    }
    let label = format!("-2({a}x^2 + {b}x + {c})/(2*{a}x + {b})");
    if a == 0.0 {
        // -2(x + c/b)
        let shift = c / b;
        let mut sol = linear(shift, label);
        sol = sol.with_window(Interval::closed(-shift - DEFAULT_SPAN, -shift + DEFAULT_SPAN));
        return Ok(sol);
    }
    let pole = -b / (2.0 * a);
    let f = ScalarFn::new(label, Interval::real_line(), move |x| {
        if x == pole { 0.0 } else { -2.0 * (a * x * x + b * x + c) / (2.0 * a * x + b) }
    })
    .with_derivative(move |x| {
        let num = a * x * x + b * x + c;
        let den = 2.0 * a * x + b;
        -2.0 * (den * den - 2.0 * a * num) / (den * den)
    });
    // G(x) = -(u + c'/u), u = x - pole, c' = -disc / (4 a^2)
    let c_shifted = -disc / (4.0 * a * a);
    let (pieces, fixed) = hyperbolic_pieces(c_shifted, pole);
    Ok(SolutionF::new(f, pieces, fixed)
        .with_poles(vec![pole])
        .with_window(Interval::closed(pole - DEFAULT_SPAN, pole + DEFAULT_SPAN)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funceq::residual_functional_eq;

    #[test]
    fn piecewise_constant_values() {
        let f = builtin_family("piecewise_constant", &[]).unwrap();
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(1.5), -1.0);
        assert_eq!(f.eval(1.0), 1.0);
        assert_eq!(f.eval(2.0), -1.0);
        assert_eq!(f.eval(0.5 + f.eval(0.5)), -f.eval(0.5));
        assert!(f.fixed_points().is_empty());
    }

    #[test]
    fn quadratic_matches_hyperbolic_minus_one() {
        let q = builtin_family("quadratic", &[1.0, 0.0, -1.0]).unwrap();
        let h = builtin_family("hyperbolic", &[-1.0]).unwrap();
        for x in [-3.0, -0.5, 0.25, 2.0, 7.5] {
            assert!((q.eval(x) - h.eval(x)).abs() < 1e-14);
            assert!((q.eval(x) + (x - 1.0 / x)).abs() < 1e-14);
        }
        assert_eq!(q.fixed_points(), &[1.0, -1.0]);
    }

    #[test]
    fn golab_schinzel_at_one() {
        let f = builtin_family("golab_schinzel", &[]).unwrap();
        assert_eq!(f.eval(1.0), -1.0);
        assert_eq!(f.eval(1.0 + f.eval(1.0)), 1.0);
        assert_eq!(f.fixed_points(), &[0.5]);
    }

    #[test]
    fn degenerate_parameters() {
        assert!(matches!(builtin_family("quadratic", &[1.0, 2.0, 1.0]), Err(Error::DegenerateFamily(_))));
        assert!(matches!(builtin_family("quadratic", &[0.0, 0.0, 1.0]), Err(Error::DegenerateFamily(_))));
        assert!(matches!(builtin_family("hyperbolic", &[0.0]), Err(Error::DegenerateFamily(_))));
        assert!(matches!(builtin_family("linear", &[1.0, 2.0]), Err(Error::InvalidParameter(_))));
        assert!(matches!(builtin_family("cubic", &[]), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn residual_of_shifted_line() {
        let f = builtin_family("linear", &[3.0]).unwrap();
        let r = residual_functional_eq(&f, 101).unwrap();
        assert_eq!(r.len(), 101);
        assert_eq!(r.sup_norm, 0.0);
    }

    #[test]
    fn residual_of_hyperbolic_on_positive_axis() {
        let f = builtin_family("hyperbolic", &[2.0]).unwrap().with_window(Interval::closed(0.1, 10.0));
        let r = residual_functional_eq(&f, 200).unwrap();
        assert!(r.sup_norm <= 1e-12, "{}", r.sup_norm);
    }

    #[test]
    fn derivative_at_zero_of_rootless_constant() {
        let q = builtin_family("quadratic", &[1.5, -2.0, 0.0]).unwrap();
        assert_eq!(q.eval(0.0), 0.0);
        let d = crate::scalar::numeric_derivative(q.function(), 0.0).unwrap();
        assert!((d + 2.0).abs() < 1e-6, "{d}");
    }
}
