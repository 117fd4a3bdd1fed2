//! The representations `π_s` on `L²(∂F_2, ν)`: unitarity at `s = 1/2`, the adjoint relation
//! and the restricted coefficients on the horospherical cells.

use hyprd::group::GroupModel;
use hyprd::reps::{apply_pi, coeff_on_ak, pairing};
use hyprd::stepfun::StepFunction;

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let gamma = model.parse("abA")?;
    let v = StepFunction::from_fn(model, 3, |g| 1.0 + (g.0[2] as f64).sin().abs());
    let w = StepFunction::from_fn(model, 4, |g| 1.0 + g.0[3] as f64 / 4.0);

    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let image = apply_pi(s, &gamma, &v);
        let lhs = pairing(s, &gamma, &v, &w);
        let rhs = pairing(1.0 - s, &gamma.inverse(), &w, &v);
        println!(
            "s = {s:4.2}  ‖π_s(γ)v‖/‖v‖ = {:.6}  ⟨π_s(γ)v,w⟩ = {lhs:.9}  ⟨v,π_(1-s)(γ⁻¹)w⟩ = {rhs:.9}",
            image.norm() / v.norm()
        );
    }

    println!("\nsplit of ⟨π_s(γ)v, w⟩ over A_k(γ), s = 0.3:");
    let parts = coeff_on_ak(0.3, &gamma, &v, &w, 1.0)?;
    let mut total = 0.0;
    for c in &parts {
        total += c.value;
        println!("  k = {}  value {:.6}  R_kN {:.6}  bound shape {:.6}", c.k, c.value, c.r_kn, c.cs1_shape);
    }
    println!("  sum {:.9} vs pairing {:.9}", total, pairing(0.3, &gamma, &v, &w));
    Ok(())
}
