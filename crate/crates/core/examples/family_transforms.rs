//! Closed-form families and the conjugate, shift and reflect symmetries.

use frozen_wave::funceq::{builtin_family, residual_functional_eq, transform, TransformKind, FAMILY_NAMES};

fn main() -> frozen_wave::Result<()> {
    for name in FAMILY_NAMES {
        let sol = builtin_family(name, &[])?;
        let r = residual_functional_eq(&sol, 1001)?;
        println!("{:<20} {:<40} sup {:.2e}  fixed {:?}", name, sol.label(), r.sup_norm, sol.fixed_points());
    }

    let base = builtin_family("hyperbolic", &[-4.0])?;
    for (kind, a) in [(TransformKind::Conjugate, 0.5), (TransformKind::Shift, 1.25), (TransformKind::Reflect, 0.0)] {
        let t = transform(&base, kind, a)?;
        let r = residual_functional_eq(&t, 1001)?;
        println!("{kind:?}({a}): {}  sup {:.2e}  fixed {:?}", t.label(), r.sup_norm, t.fixed_points());
    }
    Ok(())
}
