//! Finite-difference PDE residuals, freezing-front checks and a corrupted
//! control that must fail.

use frozen_wave::fixtures::fixture;
use frozen_wave::freezing::{residual_pde, synthesize_fields, verify_freezing_boundary, BoundaryOptions, PdeOptions};

fn main() -> frozen_wave::Result<()> {
    for name in ["ex51", "ex52", "ex53"] {
        let fx = fixture(name)?;
        let fp = synthesize_fields(fx.problem()?)?;
        let r = residual_pde(&fp, &PdeOptions::default())?;
        println!("{name}: C ~ {:.3e}, tolerance {:.1e}, pass {}", r.c_estimate, r.tolerance, r.pass);
        for (rep, q) in r.reports().iter().zip(r.richardson) {
            println!("  {:<28} sup {:.3e}  halving ratio {:.2}", rep.label, rep.sup_norm, q);
        }
        let opts = BoundaryOptions { terminal_tol: fx.boundary_tolerance(), ..BoundaryOptions::default() };
        let b = verify_freezing_boundary(&fp, &opts)?;
        for rep in b.reports() {
            println!("  {:<28} sup {:.3e}  pass {}", rep.label, rep.sup_norm, rep.pass);
        }
    }

    let bad = synthesize_fields(fixture("ex52")?.problem()?)?.with_sigma_perturbation(|z| 0.01 * z * z);
    let r = residual_pde(&bad, &PdeOptions::default())?;
    println!("corrupted ex52: pass {}", r.pass);
    if let Some((at, v)) = r.continuity.worst() {
        println!("  worst {} = {v:.3e} at {at:?}", r.continuity.label);
    }
    Ok(())
}
