//! Vitali cover of the sphere shadows and the sampling multiplicities over `γ ∈ S_n`.
//!
//! ```bash
//! cargo run --release --example sampling
//! ```

use hyprd::boundary::PSMeasure;
use hyprd::group::GroupModel;
use hyprd::stepfun::{covering_multiplicity, sampling_report, vitali_cover};

fn main() -> hyprd::Result<()> {
    let mu = PSMeasure::new(GroupModel::new(2)?, 1.0)?;

    println!("shadow multiplicity at r = 0.5");
    for big_n in 1..=6 {
        let m = covering_multiplicity(&mu, big_n, 1.0, 0.5)?;
        println!("  N = {big_n}  overlap {}  covers {}", m.max_overlap, m.covers);
    }

    println!("\n  n  N  |S*|    m  n_mult  mid  counting C  diam ratio");
    for n in 2..=4 {
        let cover = vitali_cover(&mu, n + 2, 1.0, 0.5)?;
        let rep = sampling_report(&mu, &cover, n)?;
        println!(
            "{:3} {:2} {:5} {:4} {:7} {:4} {:11.4} {:11.4}",
            n,
            n + 2,
            cover.len(),
            rep.m,
            rep.n_mult,
            rep.n_mult_mid,
            rep.counting_constant,
            rep.diameter_ratio
        );
    }
    Ok(())
}
