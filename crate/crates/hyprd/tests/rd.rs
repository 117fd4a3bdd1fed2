mod common;

use hyprd::group::GroupModel;
use hyprd::rd::{
    envelope, lambda_norm_truncated, omega, optimality_witness, padding_sum, positive_uniform, rd_rows,
    rd_sphere_check, shalom_compare, sphere_blocks, trial_rng, weighted_norm,
};
use hyprd::reps::{apply_pi_f_at, spherical_exact, FiniteFn};
use hyprd::stepfun::{inner, StepFunction};
use proptest::prelude::*;

fn f2() -> GroupModel {
    GroupModel::new(2).unwrap()
}

#[test]
fn single_trial_matches_direct_pairing() {
    let g = f2();
    for (n, big_n) in [(1, 3), (2, 3), (2, 4), (3, 4)] {
        for s in [0.0, 0.3, 0.5, 1.0] {
            let row = rd_sphere_check(&g, s, n, big_n, 1, 17).unwrap();
            let mut rng = trial_rng(17, n, s, 0);
            let f = FiniteFn::new(g.sphere_enum(n, 1.0).map(|w| (w, positive_uniform(&mut rng))).collect());
            let cells = g.sphere_size(big_n);
            let v = StepFunction::new(g, big_n, (0..cells).map(|_| positive_uniform(&mut rng)).collect());
            let w = StepFunction::new(g, big_n, (0..cells).map(|_| positive_uniform(&mut rng)).collect());
            let pair = inner(&apply_pi_f_at(s, &f, &v, big_n), &w);
            let env = 1.0 + omega((s - 0.5).abs(), n as f64, g.alpha);
            let ratio = pair / (env * f.l2_norm() * v.norm() * w.norm());
            assert!((row.max_ratio - ratio).abs() < 1e-12 * ratio, "n = {n}, s = {s}");
        }
    }
}

#[test]
fn rows_are_deterministic_and_bounded() {
    let g = f2();
    let grid = [0.0, 0.5, 1.0];
    let a = rd_rows(&g, &grid, 3, 5, 20, 42).unwrap();
    let b = rd_rows(&g, &grid, 3, 5, 20, 42).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|r| r.max_ratio > 0.0 && r.max_ratio < 1.0));
    assert!(rd_rows(&g, &grid, 3, 3, 1, 0).is_err());
    assert!(rd_rows(&g, &[1.5], 2, 3, 1, 0).is_err());
    assert!(rd_rows(&g, &grid, 2, 3, 0, 0).is_err());
}

#[test]
fn omega_closed_forms() {
    let a = 3f64.ln();
    for t in [0.0, 0.5, 1.0, 4.0, 10.0] {
        let half = 2.0 * (a * t / 2.0).sinh() / (1.0 - 1.0 / 3.0);
        assert!((omega(0.5, t, a) - half).abs() < 1e-12 * half.max(1.0));
        assert_eq!(omega(0.0, t, a), t);
        for sigma in [1e-9, 1e-7, 1e-5] {
            let direct = 2.0 * (sigma * a * t).sinh() / (1.0 - (-2.0 * sigma * a).exp());
            let tol = if sigma < 1e-6 { 1e-6 } else { 1e-9 };
            assert!((omega(sigma, t, a) - direct).abs() <= tol * direct.max(t).max(1e-300));
        }
        assert!((envelope(0.0, t, a) - (1.0 + t) * (-a * t / 2.0).exp()).abs() < 1e-15);
    }
}

#[test]
fn witness_matches_pairing() {
    let g = f2();
    for n in 1..=3 {
        for s in [0.0, 0.25, 0.5, 0.9] {
            let (ratio, env) = optimality_witness(&g, s, n).unwrap();
            let f = FiniteFn::spherical(&g, s, n);
            let one = StepFunction::constant(g, n, 1.0);
            let pair = inner(&apply_pi_f_at(s, &f, &one, n), &one);
            let expect = pair / (env * f.l2_norm());
            assert!((ratio - expect).abs() < 1e-12 * expect);
            assert!((pair - g.sphere_size(n) as f64 * spherical_exact(&g, s, n).powi(2)).abs() < 1e-10 * pair);
        }
    }
    assert!(optimality_witness(&g, 0.5, 0).is_err());
}

/// Largest eigenvalue of the radial compression of the adjacency operator on `B_m`.
fn radial_top_eigenvalue(k: usize, m: usize) -> f64 {
    let q = (2 * k - 1) as f64;
    let off: Vec<f64> = (0..m).map(|j| if j == 0 { (2 * k) as f64 } else { q }.sqrt()).collect();
    let apply = |x: &[f64]| -> Vec<f64> {
        (0..=m)
            .map(|i| {
                let mut y = x[i];
                if i > 0 {
                    y += off[i - 1] * x[i - 1];
                }
                if i < m {
                    y += off[i] * x[i + 1];
                }
                y
            })
            .collect()
    };
    let mut x = vec![1.0; m + 1];
    let mut lam = 0.0;
    for _ in 0..100_000 {
        let y = apply(&x);
        let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        let next = y.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / x.iter().map(|a| a * a).sum::<f64>();
        x = y.iter().map(|a| a / norm).collect();
        if (next - lam).abs() < 1e-15 {
            break;
        }
        lam = next;
    }
    lam - 1.0
}

#[test]
fn truncated_lambda_matches_radial_oracle() {
    let g = f2();
    let f = FiniteFn::sphere(&g, 1);
    let mut prev = 0.0;
    for m in 1..=5 {
        let got = lambda_norm_truncated(&g, &f, m, 1e-13).unwrap();
        let oracle = radial_top_eigenvalue(2, m);
        assert!((got - oracle).abs() < 1e-5, "m = {m}: {got} vs {oracle}");
        assert!(got >= prev && got < 2.0 * 3f64.sqrt());
        prev = got;
    }
}

#[test]
fn boundary_norm_dominates_regular() {
    let g = f2();
    let (lambda, pi) = shalom_compare(&g, &FiniteFn::sphere(&g, 1), 4, 5).unwrap();
    assert!(lambda <= pi);
    assert!((pi - 2.0 * 3f64.sqrt()).abs() < 1e-4);
    let neg = FiniteFn::new(vec![(g.parse("a").unwrap(), -1.0)]);
    assert!(shalom_compare(&g, &neg, 3, 3).is_err());
}

#[test]
fn padding_series_converges() {
    let a = 3f64.ln();
    let s200 = padding_sum(0.0, a, 1.0, 200);
    let s400 = padding_sum(0.0, a, 1.0, 400);
    assert!(s400 - s200 < 1.0 / 200.0);
    assert!(padding_sum(0.25, a, 1.0, 100) < padding_sum(0.0, a, 1.0, 100));
}

proptest! {
    #[test]
    fn sphere_blocks_split_the_norm(seed in any::<u64>()) {
        let g = f2();
        let mut rng = common::Lcg(seed);
        let terms: Vec<_> = (0..6)
            .map(|_| {
                let n = rng.below(4);
                (g.word_at(n, rng.below(g.sphere_size(n))), rng.unit() - 0.5)
            })
            .collect();
        let f = FiniteFn::new(terms);
        let blocks = sphere_blocks(&f);
        let split: f64 = blocks.iter().map(|b| b.l2_norm().powi(2)).sum();
        prop_assert!((split - f.l2_norm().powi(2)).abs() < 1e-12);
        for (len, b) in blocks.iter().enumerate() {
            prop_assert!(b.terms.iter().all(|(w, _)| w.len() == len));
        }
        prop_assert!((weighted_norm(&f, 0.0, 0.3, g.alpha) - f.l2_norm()).abs() < 1e-12);
    }
}
