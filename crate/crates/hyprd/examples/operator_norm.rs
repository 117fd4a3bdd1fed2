//! Lower estimates of `‖π_s(f)‖_op` by power iteration on `E_N`.
//!
//! For a single group element the estimate matches `e^{|2s-1|α|γ|/2}`.
//! For `f = 1_{S_1}` the sequence in `N` increases towards the norm.

use hyprd::group::GroupModel;
use hyprd::reps::{delta_norm_closed_form, operator_norm_lower, FiniteFn};

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let gamma = model.parse("abA")?;
    println!("f = delta_{gamma}");
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let est = operator_norm_lower(&model, s, &FiniteFn::delta(gamma.clone()), gamma.len() + 2, 1e-12)?;
        let exact = delta_norm_closed_form(&model, s, gamma.len());
        println!(
            "  s = {s:4.2}  estimate {:.12}  closed form {:.12}  iterations {}",
            est.value, exact, est.iterations
        );
    }

    println!("\nf = 1_S1, s = 1/2");
    let f = FiniteFn::sphere(&model, 1);
    for n in 1..=6 {
        match operator_norm_lower(&model, 0.5, &f, n, 1e-10) {
            Ok(est) => println!("  N = {n}  {:.8}  ({} iterations)", est.value, est.iterations),
            Err(e) => println!("  N = {n}  {e}"),
        }
    }
    println!("  limit 2*sqrt(3) = {:.8}", 2.0 * 3f64.sqrt());
    Ok(())
}
