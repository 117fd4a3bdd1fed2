//! The witness `f = φ_s|_{S_n}`, `v = w = 1` showing the envelope `1 + ω_{|s-1/2|}(n)` is sharp.

use hyprd::group::GroupModel;
use hyprd::rd::optimality_witness;

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    print!("  n");
    for s in grid {
        print!("   s={s:<5}");
    }
    println!();
    let mut lo = f64::INFINITY;
    for n in (1..=30).step_by(3) {
        print!("{n:3}");
        for s in grid {
            let (ratio, _) = optimality_witness(&model, s, n)?;
            lo = lo.min(ratio);
            print!(" {ratio:9.6}");
        }
        println!();
    }
    println!("lower constant c = {lo:.6}");
    Ok(())
}
