//! Reduced words in `F_2`, Gromov products, spheres and boundary points.

use hyprd::group::{gromov, BoundaryPoint, GroupModel, Word};

fn main() -> hyprd::Result<()> {
    let model = GroupModel::new(2)?;
    let x = model.parse("abA")?;
    let y = model.parse("aBBa")?;
    println!("x = {x}, y = {y}");
    println!("x·y = {}", x.multiply(&y));
    println!("x⁻¹ = {}, x·x⁻¹ = {}", x.inverse(), x.multiply(&x.inverse()));
    println!("(x,y)_o = {}", gromov(&x, &y));

    println!("\n|S_n| and |B_n|:");
    for n in 0..=6 {
        println!("  n = {n}: {:5} {:5}", model.sphere_size(n), model.ball_size(n));
    }
    let s2: Vec<String> = model.sphere_enum(2, 1.0).map(|w| w.to_string()).collect();
    println!("\nS_2 in lexicographic order: {}", s2.join(" "));

    let i = model.index_of(&y.0);
    println!("index of {y} among words of length {}: {i} -> {}", y.len(), model.word_at(y.len(), i));

    let xi = BoundaryPoint::new(model.parse("ab")?, 0).expect("reduced");
    let eta = BoundaryPoint::new(model.parse("aB")?, 0).expect("reduced");
    println!("\nξ = {xi}, η = {eta}, (ξ,η)_o = {:?}", xi.gromov(&eta));
    println!("a⁻¹·ξ = {}", xi.translate(&Word::letter(1)));
    Ok(())
}
