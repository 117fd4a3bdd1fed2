//! Spherical functions `φ_s(n)` against the decay envelope `(1 + ω_{|s-1/2|}(n)) e^{-αn/2}`.
//!
//! ```bash
//! cargo run --release --example spherical_decay
//! ```

use hyprd::group::GroupModel;
use hyprd::reps::spherical_table;

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    let rows = spherical_table(&model, &grid, 40, 1.0);

    let lo = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    println!("ratio phi/envelope over n <= 40, s in 0:0.05:1");
    println!("  min {lo:.6}  max {hi:.6}  spread {:.4}", hi / lo);

    println!("\n   s     n         phi    envelope   ratio");
    for r in rows.iter().filter(|r| r.n % 10 == 0 && (r.s * 4.0).fract() == 0.0) {
        println!("{:5.2} {:5} {:11.4e} {:11.4e} {:7.4}", r.s, r.n, r.phi, r.envelope, r.ratio);
    }
    Ok(())
}
