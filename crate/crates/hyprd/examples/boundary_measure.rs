//! Cylinders, the Patterson-Sullivan measure, Busemann values and shadows.

use hyprd::boundary::{busemann, rn_derivative, shadow, visual_distance, Cylinder, PSMeasure};
use hyprd::group::{boundary_extension, GroupModel};

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let mu = PSMeasure::new(model, 1.0)?;
    println!("α = {:.6}, Ahlfors dimension α/ε = {:.6}", mu.alpha(), mu.dimension());

    for w in ["a", "ab", "abA"] {
        let c = Cylinder::new(model.parse(w)?);
        println!("ν(C_{w}) = {:.6}", mu.cyl_measure(&c));
    }

    let gamma = model.parse("ab")?;
    println!("\nβ(o, γo) and dγ_*ν/dν on depth-2 cylinders, γ = {gamma}:");
    let mut total = 0.0;
    for i in 0..model.sphere_size(2) {
        let c = Cylinder::new(model.word_at(2, i));
        let rn = rn_derivative(&model, &gamma, &c)?;
        total += rn * mu.cyl_measure(&c);
        println!("  C_{:<3} β = {:+.0}  rn = {:.4}", c.prefix, busemann(&c, &gamma)?, rn);
    }
    println!("  mass of γ_*ν = {total:.12}");

    let x = model.parse("abb")?;
    let sh = shadow(&x, 0.5)?;
    println!("\nshadow O_0.5(o, {x}) = {:?}, ν = {:.6}", sh.prefixes().iter().map(|p| p.to_string()).collect::<Vec<_>>(), mu.measure(&sh));
    let xi = boundary_extension(&x);
    let eta = boundary_extension(&model.parse("aB")?);
    println!("d_o({xi}, {eta}) = {:.6}", visual_distance(&xi, &eta, 1.0));
    println!("Ahlfors constant up to radius e^-8: {:.6}", mu.ahlfors_constant(8));
    Ok(())
}
