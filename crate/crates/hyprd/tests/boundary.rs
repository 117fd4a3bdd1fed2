mod common;

use common::{counted_measure, lcp, reduce, word, words, Lcg};
use hyprd::boundary::{
    busemann, busemann_cell_bounds, cell_ahlfors_constant, gromov_cyl, horo_partition, inverse_cells_contained,
    rn_derivative, shadow, stratum_measures, visual_distance, Cylinder, CylinderUnion, PSMeasure,
};
use hyprd::group::{boundary_extension, BoundaryPoint, GroupModel, Word};
use hyprd::Error;
use proptest::prelude::*;

fn setup() -> (GroupModel, PSMeasure) {
    let g = GroupModel::new(2).unwrap();
    (g, PSMeasure::new(g, 1.0).unwrap())
}

/// `β_ξ(o, γo) = m − d(γo, ξ_m)` for a long enough prefix `ξ_m`.
fn busemann_metric(gamma: &[u8], xi: &[u8]) -> f64 {
    let inv: Vec<u8> = gamma.iter().rev().map(|l| l ^ 1).collect();
    let mut z = inv;
    z.extend_from_slice(xi);
    xi.len() as f64 - reduce(&z).len() as f64
}

fn cell_rule(j: usize, n: usize) -> usize {
    if j < 2 {
        1
    } else if j >= n {
        n
    } else {
        j
    }
}

#[test]
fn cylinder_measure_matches_counting() {
    let (_, mu) = setup();
    for n in 0..=4 {
        for w in words(2, n) {
            let exact = mu.cyl_measure(&Cylinder::new(word(&w)));
            assert!((exact - counted_measure(2, &w, 6)).abs() < 1e-14);
        }
    }
}

#[test]
fn busemann_matches_metric_limit() {
    let g = GroupModel::new(2).unwrap();
    for gamma in (0..=3).flat_map(|n| words(2, n)) {
        for w in words(2, gamma.len().max(1)) {
            let c = Cylinder::new(word(&w));
            let ext = boundary_extension(&word(&w)).truncate(gamma.len() + 6);
            let oracle = busemann_metric(&gamma, &ext.0);
            assert_eq!(busemann(&c, &word(&gamma)).unwrap(), oracle);
            let rn = rn_derivative(&g, &word(&gamma), &c).unwrap();
            assert!((rn - 3f64.powf(oracle)).abs() < 1e-12 * rn);
        }
    }
}

#[test]
fn documented_busemann_values() {
    let g = GroupModel::new(2).unwrap();
    let ab = g.parse("ab").unwrap();
    assert!((rn_derivative(&g, &ab, &Cylinder::new(ab.clone())).unwrap() - 9.0).abs() < 1e-12);
    assert_eq!(rn_derivative(&g, &Word::identity(), &Cylinder::new(g.parse("B").unwrap())).unwrap(), 1.0);
    assert_eq!(
        gromov_cyl(&g.parse("aba").unwrap(), &Cylinder::new(g.parse("ab").unwrap())),
        Err(Error::AmbiguousStratum)
    );
}

#[test]
fn pushforward_has_unit_mass() {
    let (g, mu) = setup();
    for gamma in (0..=4).flat_map(|n| words(2, n)) {
        for depth in gamma.len()..=gamma.len() + 2 {
            let total: f64 = words(2, depth)
                .iter()
                .map(|w| {
                    let c = Cylinder::new(word(w));
                    rn_derivative(&g, &word(&gamma), &c).unwrap() * mu.cyl_measure(&c)
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn translation_scales_by_rn() {
    let (g, mu) = setup();
    let mut rng = Lcg(7);
    for _ in 0..200 {
        let glen = rng.below(4);
        let all_g = words(2, glen);
        let gamma = word(&all_g[rng.below(all_g.len())]);
        let depth = glen + 1 + rng.below(3);
        let all_c = words(2, depth);
        let c = Cylinder::new(word(&all_c[rng.below(all_c.len())]));
        let image = CylinderUnion::from_prefixes(c.translate(&g, &gamma.inverse()).into_iter().map(|c| c.prefix).collect());
        let expect = rn_derivative(&g, &gamma, &c).unwrap() * mu.cyl_measure(&c);
        assert!((mu.measure(&image) - expect).abs() < 1e-12);
    }
}

#[test]
fn strata_sum_to_one() {
    let g = GroupModel::new(2).unwrap();
    for n in 0..=10 {
        let nu = stratum_measures(&g, n);
        assert!((nu.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn partition_of_aba() {
    let (g, mu) = setup();
    let p = horo_partition(&g, &g.parse("aba").unwrap(), 1.0).unwrap();
    let m: Vec<f64> = p.cells.iter().map(|c| mu.measure(c)).collect();
    let expect = [11.0 / 12.0, 1.0 / 18.0, 1.0 / 36.0];
    for (a, b) in m.iter().zip(expect) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(matches!(
        horo_partition(&g, &g.parse("a").unwrap(), 1.0),
        Err(Error::GammaTooShort { .. })
    ));
}

#[test]
fn partition_matches_brute_force() {
    let (g, mu) = setup();
    for n in 2..=5 {
        for gamma in words(2, n) {
            let p = horo_partition(&g, &word(&gamma), 1.0).unwrap();
            assert_eq!(p.n, n);
            let mut mass = vec![0.0; n];
            let fine = words(2, n + 1);
            for w in &fine {
                let j = lcp(&gamma, w);
                let k = cell_rule(j, n);
                mass[k - 1] += 1.0 / fine.len() as f64;
                let xi = boundary_extension(&word(w));
                assert!(p.cells[k - 1].contains_point(&xi));
                let (lo, hi) = busemann_cell_bounds(k, n, 1.0);
                let beta = 2.0 * j as f64 - n as f64;
                assert!(lo <= beta && beta <= hi, "β = {beta} outside [{lo}, {hi}] on A_{k}");
            }
            for (k, cell) in p.cells.iter().enumerate() {
                assert!((mu.measure(cell) - mass[k]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn inverse_inclusions_brute_force() {
    let g = GroupModel::new(2).unwrap();
    for n in 2..=5 {
        for gamma in words(2, n) {
            let inv: Vec<u8> = gamma.iter().rev().map(|l| l ^ 1).collect();
            for w in words(2, n + 2) {
                let k = cell_rule(lcp(&gamma, &w), n);
                if k == 1 {
                    continue;
                }
                let mut z = inv.clone();
                z.extend_from_slice(&w);
                let image = reduce(&z);
                let k2 = cell_rule(lcp(&inv, &image), n);
                let ok = if k == n { k2 == 1 } else { k2 + 1 == n - k || k2 == n - k };
                assert!(ok, "γ = {gamma:?}, k = {k}, image cell {k2}");
            }
            let p = horo_partition(&g, &word(&gamma), 1.0).unwrap();
            assert!(inverse_cells_contained(&g, &p).unwrap());
        }
    }
}

#[test]
fn cell_measure_constant_is_uniform() {
    let (g, mu) = setup();
    let mut c: f64 = 1.0;
    for n in 2..=8 {
        for i in 0..g.sphere_size(n) {
            let p = horo_partition(&g, &g.word_at(n, i), 1.0).unwrap();
            c = c.max(cell_ahlfors_constant(&mu, &p));
        }
    }
    assert!((c - 2.75).abs() < 1e-12, "constant {c}");
}

#[test]
fn shadows_are_balls() {
    let (g, mu) = setup();
    for n in 1..=4 {
        for x in words(2, n) {
            for r in [0.25, 0.5, 0.9] {
                let sh = shadow(&word(&x), r).unwrap();
                let ball = mu.ball(&boundary_extension(&word(&x)), (-(n as f64 - r)).exp());
                assert_eq!(sh, CylinderUnion::single(ball));
                assert_eq!(sh.prefixes(), &[word(&x)]);
            }
        }
    }
    assert!(matches!(shadow(&g.parse("ab").unwrap(), 0.0), Err(Error::NonPositiveRadius(_))));
}

#[test]
fn visual_ball_matches_distance() {
    let (g, mu) = setup();
    let xi = BoundaryPoint::new(g.parse("abA").unwrap(), 1).unwrap();
    for rho in [0.9, 0.3, 0.1, 0.04] {
        let ball = mu.ball(&xi, rho);
        for w in words(2, 5) {
            let eta = boundary_extension(&word(&w));
            let inside = visual_distance(&xi, &eta, 1.0) <= rho;
            assert_eq!(ball.contains(&eta), inside, "ρ = {rho}, η = {eta}");
        }
    }
}

fn union_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0u8..4, 1..5), 0..6)
}

proptest! {
    #[test]
    fn measure_is_additive(a in union_strategy(), b in union_strategy()) {
        let (_, mu) = setup();
        let mk = |v: Vec<Vec<u8>>| CylinderUnion::from_prefixes(v.into_iter().map(Word::reduce).filter(|w| !w.is_empty()).collect());
        let (u, v) = (mk(a), mk(b));
        let lhs = mu.measure(&u.union(&v)) + mu.measure(&u.intersect(&v));
        let rhs = mu.measure(&u) + mu.measure(&v);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }
}
