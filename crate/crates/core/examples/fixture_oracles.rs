//! Compares every worked example against its closed forms.

use frozen_wave::fixtures::{fixture, oracle_compare, FIXTURE_NAMES};
use frozen_wave::freezing::bridge_identity;
use frozen_wave::funceq::residual_functional_eq;

fn main() -> frozen_wave::Result<()> {
    for name in FIXTURE_NAMES {
        let fx = fixture(name)?;
        println!("{name}: {}", fx.notes());
        let sol = fx.solution()?;
        println!("  functional equation sup {:.2e}", residual_functional_eq(sol, 1001)?.sup_norm);
        if let Ok(p) = fx.problem() {
            let (nx, nt) = fx.oracle_grid();
            let r = oracle_compare(name, nx, nt)?;
            println!("  fields vs closed form  sup {:.2e} over {} points (tolerance {:.0e})", r.sup_norm, r.len(), fx.oracle_tolerance());
            println!("  bridge identity        sup {:.2e}", bridge_identity(p, 101)?.sup_norm);
        }
    }
    Ok(())
}
