//! The spectral inequality `⟨π_s(f)v,w⟩ ≤ C(1+ω_{|s-1/2|}(n))‖f‖₂‖v‖‖w‖`
//! sampled over random positive `f` on `S_n` and `v, w ∈ E_{n+1}`.

use hyprd::group::GroupModel;
use hyprd::rd::rd_rows;

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    println!("  n     s   max ratio");
    let mut c: f64 = 0.0;
    for n in 1..=6 {
        for row in rd_rows(&model, &grid, n, n + 1, 100, 42)? {
            c = c.max(row.max_ratio);
            println!("{:3} {:5.2} {:11.6}", row.n, row.s, row.max_ratio);
        }
    }
    println!("fitted C = {c:.6}");
    Ok(())
}
