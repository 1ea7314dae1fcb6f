//! Builds an involution from an even profile and reads off a solution of
//! `F(x + F(x)) = -F(x)`.

use frozen_wave::funceq::{involution_from_even_profile, residual_functional_eq, solution_from_involution};
use frozen_wave::{Interval, ScalarFn};

fn main() -> frozen_wave::Result<()> {
    let psi = ScalarFn::new("(x^2 - 1)/2", Interval::closed(-1.0, 1.0), |x| (x * x - 1.0) / 2.0).with_derivative(|x| x);
    let phi = involution_from_even_profile(&psi, 1.0)?;
    println!("phi lives on {:?}", phi.domain());
    for u in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        println!("phi({u:5.2}) = {:+.12}   phi(phi) = {:+.12}", phi.eval(u), phi.eval(phi.eval(u)));
    }

    // phi(-1) = 1 and phi(-1/2) = -1/2: the two halves are swapped
    let x0 = -0.5;
    let sol = solution_from_involution(&phi, Interval::closed(-1.0, x0), Interval::closed(x0, 1.0))?;
    println!("fixed points {:?}", sol.fixed_points());
    let r = residual_functional_eq(&sol, 1001)?;
    println!("sup |F(x + F(x)) + F(x)| = {:e} (tolerance {:e}, pass {})", r.sup_norm, r.tolerance, r.pass);
    Ok(())
}
