//! The cocycle `b_s` of `ρ_s = π_s ⊗ π_s`: exact norms, the cocycle identity,
//! the integrability threshold and properness curves.

use hyprd::cocycle::{b_norm_exact, cocycle_residual, integrability_threshold, properness_curve};
use hyprd::group::GroupModel;

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    println!("‖b_0(a)‖ = {:.10}  (√1.5 = {:.10})", b_norm_exact(&model, 0.0, 1, 1.0)?, 1.5f64.sqrt());
    println!("‖b_0(ab)‖ = {:.10}  (√(28/9) = {:.10})", b_norm_exact(&model, 0.0, 2, 1.0)?, (28.0f64 / 9.0).sqrt());

    let (a, b) = (model.parse("a")?, model.parse("b")?);
    let (res, norm) = cocycle_residual(&model, 0.1, &a, &b, 4, 1.0)?;
    println!("\nb(ab) − b(a) − ρ(a)b(b): residual {res:.3e}, ‖b(ab)‖ = {norm:.6}");

    println!("\nintegrability of d^(-4sα/ε), ε = 1:");
    for s in [0.1, 0.2, 0.24, 0.25, 0.3] {
        let t = integrability_threshold(&model, s, 1.0, 14)?;
        println!(
            "  s = {s:4.2}  ratio {:.6}  diverging {}  partial sum {:.4}",
            t.ratio,
            t.diverging,
            t.partial_sums.last().unwrap_or(&0.0)
        );
    }

    println!("\n‖b_s(γ)‖² along |γ| = n:");
    for s in [0.0, 0.1, 0.2] {
        let (rows, _) = properness_curve(&model, s, 20, 1.0)?;
        let pick: Vec<String> = rows
            .iter()
            .filter(|r| [1, 2, 5, 10, 20].contains(&r.n))
            .map(|r| format!("n={} {:.4}", r.n, r.b_norm * r.b_norm))
            .collect();
        println!("  s = {s:3.1}: {}", pick.join("  "));
    }
    Ok(())
}
