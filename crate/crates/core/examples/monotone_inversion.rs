//! Certified inversion of a monotone function.

use frozen_wave::inversion::{build_inverse, invert_detailed, MonotoneFn, INVERSION_TOL};
use frozen_wave::{Interval, ScalarFn};

fn main() -> frozen_wave::Result<()> {
    let f = ScalarFn::new("x + x^3 / 3", Interval::closed(-2.0, 2.0), |x| x + x * x * x / 3.0)
        .with_derivative(|x| 1.0 + x * x);
    let m = MonotoneFn::new(f.clone(), -2.0, 2.0)?;
    println!("{:?} on {:?}, values {:?}", m.direction(), m.interval(), m.value_range());

    for y in [-4.0, -1.0, 0.0, 0.5, 3.0] {
        let inv = invert_detailed(&m, y, 1e-13)?;
        println!(
            "y = {y:5.2}: x = {:+.15}  bracket width {:.1e}  residual {:.1e}  in {} steps",
            inv.x,
            inv.bracket.1 - inv.bracket.0,
            inv.residual,
            inv.iterations
        );
    }

    let g = build_inverse(&m, INVERSION_TOL)?;
    let worst = g.domain().sample(1001).into_iter().map(|y| (f.eval(g.eval(y)) - y).abs()).fold(0.0, f64::max);
    println!("round trip over 1001 points: {worst:e}");
    Ok(())
}
