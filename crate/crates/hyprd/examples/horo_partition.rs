//! The horospherical partition `A_{k,R}(γ)`: cell measures, Busemann bounds and inverse inclusions.

use hyprd::boundary::{
    busemann_cell_bounds, busemann_cell_violation, cell_ahlfors_constant, horo_partition, inverse_cells_contained,
    PSMeasure,
};
use hyprd::group::GroupModel;

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let mu = PSMeasure::new(model, 1.0)?;
    let gamma = model.parse("abAb")?;
    let p = horo_partition(&model, &gamma, 1.0)?;
    println!("γ = {gamma}, n = {}", p.n);
    println!("  k  strata      ν(A_k)     e^(-αk)   β bounds");
    for (i, cell) in p.cells.iter().enumerate() {
        let k = i + 1;
        let (lo, hi) = busemann_cell_bounds(k, p.n, 1.0);
        println!(
            "{:3}  {:<10} {:10.6} {:10.6}   [{lo:+}, {hi:+}]",
            k,
            format!("{:?}", p.strata[i]),
            mu.measure(cell),
            (-mu.alpha() * k as f64).exp()
        );
    }
    println!("Busemann violation: {}", busemann_cell_violation(&p)?);
    println!("γ⁻¹A_k inclusions hold: {}", inverse_cells_contained(&model, &p)?);

    let mut c: f64 = 1.0;
    for len in 2..=8 {
        for i in 0..model.sphere_size(len) {
            let p = horo_partition(&model, &model.word_at(len, i), 1.0)?;
            c = c.max(cell_ahlfors_constant(&mu, &p));
        }
    }
    println!("cell measure constant over 2 ≤ |γ| ≤ 8: {c:.6}");
    Ok(())
}
