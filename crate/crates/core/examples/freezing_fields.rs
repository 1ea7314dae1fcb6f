//! Synthesizes the frozen wave fields for a freezing profile and writes them
//! as CSV.
//!
//! ```text
//! cargo run --example freezing_fields -- fields.csv
//! ```

use frozen_wave::freezing::{build_wave_profile, sample_grid, synthesize_fields, FreezingProblem};
use frozen_wave::{Interval, ScalarFn};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // T(x) = (1 - x^2) / 2 freezes the middle last; h is odd
    let dom = Interval::closed(-1.0, 1.0);
    let t = ScalarFn::new("(1 - x^2)/2", dom, |x| (1.0 - x * x) / 2.0).with_derivative(|x| -x);
    let h = ScalarFn::new("sin x", dom, f64::sin).with_derivative(f64::cos);
    let p = FreezingProblem::new(1.0, t, h)?;

    let w = build_wave_profile(&p)?;
    println!("wave profile core {:?}, extension {:?}", w.core(), w.extension());

    let fp = synthesize_fields(&p)?;
    let grid = sample_grid(&fp, 41, 21, p.latest_freezing())?;
    println!("{:?} grid, {:.1}% frozen", grid.shape(), 100.0 * grid.frozen_fraction());
    for &(x, tt) in &[(0.0, 0.0), (0.0, 0.25), (0.0, 0.5), (0.6, 0.1), (0.6, 0.4)] {
        println!("sigma({x}, {tt}) = {:+.6}  mu = {:+.6}  frozen {}", fp.sigma(x, tt), fp.mu(x, tt), fp.is_frozen(x, tt));
    }

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, grid.to_csv())?;
        println!("wrote {path}");
    }
    Ok(())
}
