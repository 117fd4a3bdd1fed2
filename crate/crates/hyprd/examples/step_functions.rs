//! Step functions on depth-`N` cylinders: refinement, projection and the Vitali cover cells.

use hyprd::boundary::{Cylinder, PSMeasure};
use hyprd::group::GroupModel;
use hyprd::stepfun::{inner, project_pn, vitali_cover, StepFunction};

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let ab = Cylinder::new(model.parse("ab")?);
    let v = StepFunction::indicator(model, &ab, 2);
    let w = StepFunction::from_fn(model, 3, |g| g.len() as f64 + g.0[0] as f64);
    println!("‖1_C_ab‖ = {:.6} (√ν = {:.6})", v.norm(), (1.0f64 / 12.0).sqrt());
    println!("⟨1_C_ab, w⟩ = {:.6}", inner(&v, &w));
    println!("refined to depth 5: {:.6}", inner(&v.refine(5), &w.refine(5)));
    let p1 = project_pn(&v, 1)?;
    println!("p_1(1_C_ab) = {:?}", p1.coeffs);

    let mu = PSMeasure::new(model, 1.0)?;
    let cover = vitali_cover(&mu, 3, 1.0, 0.5)?;
    println!(
        "\ncover at N = 3: {} cells at depth {}, covers = {}, shadows inside cells = {}",
        cover.len(),
        cover.resolution,
        cover.covers(),
        cover.inner_shadows_contained(&model)
    );
    println!("norm comparison constant: {:.6}", cover.norm_constant(&mu));
    println!("count constant |S*|e^(-αN) vs 1: {:.6}", cover.count_constant(&model));
    Ok(())
}
