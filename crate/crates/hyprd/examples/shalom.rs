//! Lower estimates of `‖λ(f)‖` on `ℓ²(B_m)` next to `‖π_{1/2}(f)‖` on `E_N`.

use hyprd::group::GroupModel;
use hyprd::rd::{lambda_norm_truncated, shalom_compare};
use hyprd::reps::FiniteFn;

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let f = FiniteFn::sphere(&model, 1);
    println!("f = 1_S1 (limit 2√3 = {:.6})", 2.0 * 3f64.sqrt());
    for m in 2..=8 {
        println!("  m = {m}  ‖λ(f)‖ on B_m ≥ {:.6}", lambda_norm_truncated(&model, &f, m, 1e-10)?);
    }
    let (lam, pi) = shalom_compare(&model, &f, 4, 5)?;
    println!("matched truncation: λ {lam:.6} ≤ π_1/2 {pi:.6}");
    Ok(())
}
