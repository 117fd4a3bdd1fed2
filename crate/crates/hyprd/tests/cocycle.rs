mod common;

use common::{lcp, reduce, word, words, Lcg};
use hyprd::cocycle::{
    b_norm_exact, cocycle_grid, cocycle_residual, integrability_threshold, properness_curve, rho_apply, tensor_inner,
    TensorStep,
};
use hyprd::group::{boundary_extension, GroupModel, Word};
use hyprd::reps::apply_pi;
use hyprd::stepfun::StepFunction;
use proptest::prelude::*;

fn f2() -> GroupModel {
    GroupModel::new(2).unwrap()
}

fn busemann_metric(gamma: &[u8], xi: &[u8]) -> f64 {
    let mut z: Vec<u8> = gamma.iter().rev().map(|l| l ^ 1).collect();
    z.extend_from_slice(xi);
    xi.len() as f64 - reduce(&z).len() as f64
}

fn random_step(g: GroupModel, depth: usize, rng: &mut Lcg) -> StepFunction {
    StepFunction::new(g, depth, (0..g.sphere_size(depth)).map(|_| rng.unit() - 0.5).collect())
}

fn random_tensor(g: GroupModel, depth: usize, rng: &mut Lcg) -> TensorStep {
    let side = g.sphere_size(depth);
    TensorStep::new(g, depth, (0..side * side).map(|_| rng.unit() - 0.5).collect())
}

#[test]
fn grid_matches_pointwise_definition() {
    let g = f2();
    for (gamma, depth) in [(vec![0u8], 2usize), (vec![0, 2], 2), (vec![0, 2, 1], 3), (vec![3, 3], 3)] {
        for (s, eps) in [(0.0, 1.0), (0.2, 1.0), (0.1, 0.5)] {
            let grid = cocycle_grid(&g, s, &word(&gamma), eps, depth);
            let cells = words(2, depth);
            let pts: Vec<Vec<u8>> = cells
                .iter()
                .map(|w| boundary_extension(&word(w)).truncate(depth + 8).0)
                .collect();
            for (i, x) in pts.iter().enumerate() {
                for (j, y) in pts.iter().enumerate() {
                    let expect = if i == j {
                        0.0
                    } else {
                        let d = (-eps * lcp(x, y) as f64).exp();
                        (busemann_metric(&gamma, x) - busemann_metric(&gamma, y)) / d.powf(2.0 * s * g.alpha / eps)
                    };
                    let got = grid.coeffs[i * cells.len() + j];
                    assert!((got - expect).abs() < 1e-9 * expect.abs().max(1.0));
                }
            }
            let exact = b_norm_exact(&g, s, gamma.len(), eps).unwrap();
            assert!((grid.norm() - exact).abs() < 1e-12 * exact);
        }
    }
}

#[test]
fn exact_norm_stabilizes_in_depth() {
    let g = f2();
    let gamma = g.parse("abA").unwrap();
    let b3 = cocycle_grid(&g, 0.15, &gamma, 1.0, 3).norm();
    let b4 = cocycle_grid(&g, 0.15, &gamma, 1.0, 4).norm();
    assert!((b3 - b4).abs() < 1e-12);
    assert!(b_norm_exact(&g, -0.1, 2, 1.0).is_err());
}

#[test]
fn rho_on_elementary_tensors() {
    let g = f2();
    let mut rng = Lcg(9);
    for _ in 0..10 {
        let u = random_step(g, 1, &mut rng);
        let v = random_step(g, 1, &mut rng);
        let gamma = g.word_at(2, rng.below(12));
        let s = rng.unit();
        let lhs = rho_apply(s, &gamma, &TensorStep::elementary(&u, &v));
        let rhs = TensorStep::elementary(&apply_pi(s, &gamma, &u), &apply_pi(s, &gamma, &v));
        assert!(lhs.sub(&rhs).norm() < 1e-12);
    }
}

#[test]
fn rho_identity_and_unitarity() {
    let g = f2();
    let mut rng = Lcg(21);
    let f = random_tensor(g, 2, &mut rng);
    assert_eq!(rho_apply(0.3, &Word::identity(), &f), f);
    for n in 1..=2 {
        let gamma = g.word_at(n, rng.below(g.sphere_size(n)));
        let image = rho_apply(0.5, &gamma, &f);
        assert!((image.norm() - f.norm()).abs() < 1e-12);
        assert!((tensor_inner(&image, &image) - f.norm().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn cocycle_relation_holds() {
    let g = f2();
    for (a, b) in [("a", "b"), ("ab", "B"), ("a", "A"), ("bA", "ab"), ("BB", "a")] {
        let (g1, g2) = (g.parse(a).unwrap(), g.parse(b).unwrap());
        for s in [0.0, 0.1, 0.2] {
            let depth = g1.len() + g2.len();
            let (r, n) = cocycle_residual(&g, s, &g1, &g2, depth, 1.0).unwrap();
            assert!(r <= 1e-10 * n.max(1.0), "{a}·{b}, s = {s}: {r}");
        }
    }
    assert!(cocycle_residual(&g, 0.1, &g.parse("ab").unwrap(), &g.parse("a").unwrap(), 2, 1.0).is_err());
}

#[test]
fn inverse_relation() {
    // b(γ⁻¹) = −ρ(γ⁻¹) b(γ)
    let g = f2();
    let gamma = g.parse("aB").unwrap();
    let inv = gamma.inverse();
    let b = cocycle_grid(&g, 0.1, &gamma, 1.0, 2);
    let moved = rho_apply(0.1, &inv, &b);
    let b_inv = cocycle_grid(&g, 0.1, &inv, 1.0, 4);
    let mut neg = moved.clone();
    neg.coeffs.iter_mut().for_each(|c| *c = -*c);
    assert!(b_inv.sub(&neg).norm() < 1e-10);
}

#[test]
fn integrability_threshold_is_one_quarter() {
    let g = f2();
    for eps in [0.5, 1.0, 2.0] {
        for s in [0.0, 0.1, 0.2, 0.24, 0.25, 0.3, 0.5] {
            let t = integrability_threshold(&g, s, eps, 12).unwrap();
            assert_eq!(t.diverging, s >= 0.25, "ε = {eps}, s = {s}");
            assert!(t.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        }
    }
    assert!(integrability_threshold(&g, 0.1, 1.0, 15).is_err());
}

#[test]
fn properness_curve_rows() {
    let g = f2();
    let (rows, flagged) = properness_curve(&g, 0.1, 12, 1.0).unwrap();
    assert!(!flagged);
    assert_eq!(rows.len(), 12);
    assert!(rows[0].slope_estimate.is_none());
    assert!(rows.windows(2).all(|w| w[1].b_norm >= w[0].b_norm));
    assert!(properness_curve(&g, 0.3, 2, 1.0).unwrap().1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn refinement_preserves_inner(seed in any::<u64>()) {
        let g = f2();
        let mut rng = Lcg(seed);
        let a = random_tensor(g, 1, &mut rng);
        let b = random_tensor(g, 1, &mut rng);
        let base = tensor_inner(&a, &b);
        prop_assert!((tensor_inner(&a.refine(2), &b) - base).abs() < 1e-12);
        prop_assert!((a.refine(2).norm() - a.norm()).abs() < 1e-12);
    }
}
