//! The invariant suite behind `hyprd verify`.
//!
//! Every check reports measured constants; gating checks decide the exit code.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boundary::{
    busemann_cell_violation, cell_ahlfors_constant, horo_partition, inverse_cells_contained, rn_derivative, shadow,
    Cylinder, CylinderUnion, PSMeasure,
};
use crate::cocycle::{
    b_norm_exact, cocycle_grid, cocycle_residual, integrability_threshold, properness_curve,
};
use crate::config::Config;
use crate::error::Result;
use crate::group::{boundary_extension, gromov, GroupModel, Word};
use crate::rd::{
    envelope, omega, optimality_witness, padding_sum, rd_rows, shalom_compare, sphere_blocks, trial_rng,
    weighted_norm,
};
use crate::reps::{
    apply_pi, apply_pi_f, delta_norm_closed_form, operator_norm_lower, pairing, spherical_exact, spherical_table,
    FiniteFn,
};
use crate::stepfun::{covering_multiplicity, inner, sampling_report, vitali_cover, StepFunction};

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// Whether a failure fails the suite.
    pub gating: bool,
    pub measured: BTreeMap<&'static str, f64>,
}

impl Check {
    fn new(name: &'static str, gating: bool) -> Self {
        Check {
            name,
            pass: true,
            gating,
            measured: BTreeMap::new(),
        }
    }

    fn set(&mut self, key: &'static str, value: f64) -> &mut Self {
        self.measured.insert(key, value);
        self
    }

    fn require(&mut self, ok: bool) -> &mut Self {
        self.pass &= ok;
        self
    }
}

/// The full report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Suite {
    pub config: Config,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn rng_for(cfg: &Config, tag: usize) -> ChaCha8Rng {
    trial_rng(cfg.seed, tag, 0.0, 0)
}

fn random_word(model: &GroupModel, rng: &mut impl Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    model.word_at(len, rng.gen_range(0..model.sphere_size(len)))
}

fn random_step(model: &GroupModel, rng: &mut impl Rng, depth: usize) -> StepFunction {
    let coeffs = (0..model.sphere_size(depth)).map(|_| rng.gen_range(-1.0..1.0)).collect();
    StepFunction::new(*model, depth, coeffs)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn ball_words(model: &GroupModel, m: usize) -> Vec<Word> {
    (0..=m)
        .flat_map(|l| (0..model.sphere_size(l)).map(move |i| (l, i)))
        .map(|(l, i)| model.word_at(l, i))
        .collect()
}

fn group_axioms(model: &GroupModel) -> Check {
    let mut c = Check::new("group_axioms", true);
    let words = ball_words(model, 3);
    let mut ok = true;
    for x in &words {
        for y in &words {
            let gxy = gromov(x, y);
            for z in &words {
                ok &= gxy >= gromov(x, z).min(gromov(z, y));
            }
        }
        ok &= x.inverse().inverse() == *x && x.multiply(&Word::identity()) == *x;
    }
    let k = model.k as u64;
    for n in 1..=8u32 {
        ok &= model.sphere_size(n as usize) as u64 == 2 * k * (2 * k - 1).pow(n - 1);
    }
    c.require(ok).set("triples", (words.len() as f64).powi(3));
    c
}

fn partition_checks(cfg: &Config, mu: &PSMeasure) -> Result<Vec<Check>> {
    let model = mu.model;
    let lo = (2.0 * cfg.big_r).ceil() as usize;
    let hi = cfg.n_max.max(lo);
    let mut mass = Check::new("partition_mass", true);
    let mut ahlfors = Check::new("cell_measure_bounds", true);
    let mut busemann = Check::new("busemann_on_cells", true);
    let mut inverse = Check::new("inverse_cell_containment", true);
    let (mut err, mut c_max, mut viol, mut contained, mut count) = (0.0f64, 0.0f64, f64::NEG_INFINITY, true, 0);
    for len in lo..=hi {
        for i in 0..model.sphere_size(len) {
            let gamma = model.word_at(len, i);
            let p = horo_partition(&model, &gamma, cfg.big_r)?;
            let total: f64 = p.cells.iter().map(|u| mu.measure(u)).sum();
            err = err.max((total - 1.0).abs());
            c_max = c_max.max(cell_ahlfors_constant(mu, &p));
            viol = viol.max(busemann_cell_violation(&p)?);
            contained &= inverse_cells_contained(&model, &p)?;
            count += 1;
        }
    }
    mass.require(err <= 1e-12).set("max_error", err).set("words", count as f64);
    ahlfors.require(c_max.is_finite()).set("constant", c_max);
    busemann.require(viol <= 1e-12).set("max_violation", viol);
    inverse.require(contained).set("words", count as f64);
    Ok(vec![mass, ahlfors, busemann, inverse])
}

fn pushforward(model: &GroupModel, n_max: usize) -> Result<Check> {
    let mut c = Check::new("pushforward_mass", true);
    let mut err: f64 = 0.0;
    for gamma in ball_words(model, n_max.min(4)) {
        for depth in gamma.len()..=gamma.len() + 2 {
            let nu = 1.0 / model.sphere_size(depth) as f64;
            let mut total = 0.0;
            for i in 0..model.sphere_size(depth) {
                let cyl = Cylinder::new(model.word_at(depth, i));
                total += rn_derivative(model, &gamma, &cyl)? * nu;
            }
            err = err.max((total - 1.0).abs());
        }
    }
    c.require(err <= 1e-9).set("max_error", err);
    Ok(c)
}

fn shadow_sandwich(cfg: &Config, mu: &PSMeasure) -> Result<Check> {
    let model = mu.model;
    let mut c = Check::new("shadow_sandwich", true);
    let mut ok = true;
    for x in ball_words(&model, cfg.n_max.min(5)).into_iter().filter(|x| !x.is_empty()) {
        let sh = shadow(&x, cfg.r)?;
        let radius = (-cfg.epsilon * (x.len() as f64 - cfg.r)).exp();
        let ball = CylinderUnion::single(mu.ball(&boundary_extension(&x), radius));
        ok &= ball.is_subset(&model, &sh) && sh.is_subset(&model, &ball);
    }
    c.require(ok);
    Ok(c)
}

fn refine_isometry(cfg: &Config, model: &GroupModel) -> Check {
    let mut c = Check::new("refine_isometry", true);
    let mut rng = rng_for(cfg, 1);
    let mut err: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.gen_range(0..=cfg.big_n.min(5));
        let (u, v) = (random_step(model, &mut rng, d), random_step(model, &mut rng, d));
        let e = d + rng.gen_range(1..=2);
        let a = inner(&u, &v);
        let b = inner(&u.refine(e), &v.refine(e));
        err = err.max((a - b).abs() / (u.norm() * v.norm()));
    }
    c.require(err <= 1e-12).set("max_error", err);
    c
}

fn cover_checks(cfg: &Config, mu: &PSMeasure) -> Result<Vec<Check>> {
    let model = mu.model;
    let mut cover = Check::new("vitali_cover", true);
    let mut mult = Check::new("shadow_multiplicity", false);
    let (mut norm_c, mut count_c, mut outer, mut overlap) = (0.0f64, 0.0f64, 0.0f64, 0usize);
    for n in 1..=cfg.big_n.min(6) {
        let fam = vitali_cover(mu, n, cfg.big_r, cfg.r)?;
        cover.require(fam.covers() && fam.inner_shadows_contained(&model));
        norm_c = norm_c.max(fam.norm_constant(mu));
        count_c = count_c.max(fam.count_constant(&model));
        outer = outer.max(fam.outer_radius());
        let m = covering_multiplicity(mu, n, cfg.big_r, cfg.r)?;
        overlap = overlap.max(m.max_overlap);
        mult.require(m.covers);
    }
    cover
        .set("norm_constant", norm_c)
        .set("count_constant", count_c)
        .set("outer_radius", outer);
    mult.require(overlap == 1).set("max_overlap", overlap as f64);
    Ok(vec![cover, mult])
}

fn sampling_checks(cfg: &Config, mu: &PSMeasure) -> Result<Vec<Check>> {
    let mut mult = Check::new("sampling_multiplicity", true);
    let mut count = Check::new("counting_constant", true);
    let mut diam = Check::new("diameter_bounds", false);
    let (mut ms, mut ns, mut cs) = (Vec::new(), Vec::new(), Vec::new());
    let (mut mid, mut ratio) = (0usize, 0.0f64);
    for n in 2..=cfg.n_max.clamp(2, 4) {
        let cover = vitali_cover(mu, n + 2, cfg.big_r, cfg.r)?;
        let rep = sampling_report(mu, &cover, n)?;
        ms.push(rep.m);
        ns.push(rep.n_mult);
        cs.push(rep.counting_constant);
        mid = mid.max(rep.n_mult_mid);
        ratio = ratio.max(rep.diameter_ratio);
    }
    let constant = |v: &[usize]| v.windows(2).all(|w| w[0] == w[1]);
    mult.require(constant(&ms) && constant(&ns))
        .set("m", *ms.iter().max().unwrap_or(&0) as f64)
        .set("n_mult", *ns.iter().max().unwrap_or(&0) as f64)
        .set("n_mult_at_half", mid as f64);
    let c_max = cs.iter().cloned().fold(0.0, f64::max);
    let c_min = cs.iter().cloned().fold(f64::INFINITY, f64::min);
    count
        .require(c_max.is_finite() && c_max <= 2.0 * c_min)
        .set("constant", c_max);
    diam.require(ratio <= 1.0 + 1e-12).set("max_ratio", ratio);
    Ok(vec![mult, count, diam])
}

fn representation_checks(cfg: &Config, model: &GroupModel) -> Vec<Check> {
    let mut unit = Check::new("unitarity_adjoint", true);
    let mut homo = Check::new("homomorphism", true);
    let mut rng = rng_for(cfg, 2);
    let (mut e_unit, mut e_adj, mut e_hom) = (0.0f64, 0.0f64, 0.0f64);
    let depth_cap = cfg.big_n.min(6);
    for _ in 0..200 {
        let gamma = random_word(model, &mut rng, 4);
        let d = rng.gen_range(0..=depth_cap.saturating_sub(gamma.len()).max(1));
        let s = cfg.s_grid[rng.gen_range(0..cfg.s_grid.len())].clamp(0.0, 1.0);
        let v = random_step(model, &mut rng, d);
        let w = random_step(model, &mut rng, d + gamma.len());
        e_unit = e_unit.max(rel(apply_pi(0.5, &gamma, &v).norm(), v.norm()));
        let lhs = pairing(s, &gamma, &v, &w);
        let rhs = pairing(1.0 - s, &gamma.inverse(), &w, &v);
        e_adj = e_adj.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
    }
    for _ in 0..50 {
        let g1 = random_word(model, &mut rng, 3);
        let g2 = random_word(model, &mut rng, 3);
        let s = cfg.s_grid[rng.gen_range(0..cfg.s_grid.len())].clamp(0.0, 1.0);
        let v = random_step(model, &mut rng, 2);
        let d = v.depth + g1.len() + g2.len();
        let twice = apply_pi(s, &g1, &apply_pi(s, &g2, &v)).refine(d);
        let once = apply_pi(s, &g1.multiply(&g2), &v).refine(d);
        let mut diff = twice.clone();
        diff.axpy(-1.0, &once);
        e_hom = e_hom.max(diff.norm() / (1.0 + once.norm()));
    }
    unit.require(e_unit <= 1e-9 && e_adj <= 1e-9)
        .set("unitarity_error", e_unit)
        .set("adjoint_error", e_adj);
    homo.require(e_hom <= 1e-9).set("max_error", e_hom);
    vec![unit, homo]
}

fn spherical_checks(model: &GroupModel) -> Vec<Check> {
    let mut env = Check::new("spherical_envelope", true);
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    let rows = spherical_table(model, &grid, 40, 1.0);
    let lo = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    env.require(lo > 0.0 && hi / lo < 10.0)
        .set("min_ratio", lo)
        .set("max_ratio", hi);

    let mut spot = Check::new("spherical_values", true);
    let mut sym: f64 = 0.0;
    let mut coeff: f64 = 0.0;
    for n in 0..=12 {
        for &s in &grid {
            sym = sym.max(rel(spherical_exact(model, s, n), spherical_exact(model, 1.0 - s, n)));
        }
    }
    for gamma in ball_words(model, 4) {
        for &s in &[0.0, 0.3, 0.5, 0.8] {
            let one = StepFunction::constant(*model, gamma.len(), 1.0);
            let c = pairing(s, &gamma, &one, &one);
            coeff = coeff.max(rel(c, spherical_exact(model, s, gamma.len())));
        }
    }
    let ends = (0..=40).all(|n| spherical_exact(model, 0.0, n) == 1.0 && spherical_exact(model, 1.0, n) == 1.0);
    let unbounded = [-0.1, 1.1]
        .iter()
        .all(|&s| (0..=80).any(|n| spherical_exact(model, s, n) > 1e3));
    let near = (envelope(1e-9, 30.0, model.alpha) - envelope(0.0, 30.0, model.alpha)).abs();
    spot.require(sym <= 1e-12 && coeff <= 1e-12 && ends && unbounded && near <= 1e-6)
        .set("symmetry_error", sym)
        .set("coefficient_error", coeff)
        .set("envelope_jump_at_half", near);
    if model.k == 2 {
        let a = (spherical_exact(model, 0.5, 1) - 3f64.sqrt() / 2.0).abs();
        let b = (spherical_exact(model, 0.5, 2) - 2.0 / 3.0).abs();
        spot.require(a <= 1e-12 && b <= 1e-12);
    }
    vec![env, spot]
}

fn rd_checks(cfg: &Config, model: &GroupModel) -> Result<Vec<Check>> {
    let mut ineq = Check::new("rd_inequality", true);
    let grid: Vec<f64> = cfg.s_grid.iter().cloned().filter(|s| (0.0..=1.0).contains(s)).collect();
    let mut per_n = Vec::new();
    for n in 1..=cfg.n_max.max(1) {
        let rows = rd_rows(model, &grid, n, n + 1, 100, cfg.seed)?;
        per_n.push(rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max));
    }
    let c = per_n.iter().cloned().fold(0.0, f64::max);
    ineq.require(c.is_finite() && c > 0.0).set("fitted_C", c);
    if per_n.len() >= 3 {
        let drift = per_n[per_n.len() - 1] / per_n[2];
        ineq.require((drift - 1.0).abs() <= 0.2).set("drift_from_n3", drift);
    }

    let mut scale = Check::new("rd_scaling", true);
    let mut rng = rng_for(cfg, 3);
    let mut err: f64 = 0.0;
    for _ in 0..10 {
        let n = rng.gen_range(1..=3);
        let f = FiniteFn::new(
            model
                .sphere_enum(n, 1.0)
                .map(|g| (g, 1.0 - rng.gen::<f64>()))
                .collect(),
        );
        let v = StepFunction::new(*model, n + 1, (0..model.sphere_size(n + 1)).map(|_| 1.0 - rng.gen::<f64>()).collect());
        let s = rng.gen::<f64>();
        let ratio = |f: &FiniteFn, v: &StepFunction| {
            let image = apply_pi_f(s, f, v);
            inner(&image, &v.refine(image.depth)) / (f.l2_norm() * v.norm() * v.norm())
        };
        let (a, b) = (3.7, 0.21);
        let fs = FiniteFn::new(f.terms.iter().map(|(g, x)| (g.clone(), a * x)).collect());
        let mut vs = v.clone();
        vs.scale(b);
        err = err.max(rel(ratio(&fs, &vs), ratio(&f, &v)));
    }
    scale.require(err <= 1e-12).set("max_error", err);

    let mut opt = Check::new("optimality_witness", true);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for n in 1..=30 {
        for &s in &grid {
            let (ratio, _) = optimality_witness(model, s, n)?;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    opt.require(lo > 0.0).set("fitted_c", lo).set("max_ratio", hi);
    Ok(vec![ineq, scale, opt])
}

fn norm_checks(cfg: &Config, model: &GroupModel) -> Result<Vec<Check>> {
    let mut closed = Check::new("operator_norm_closed_form", true);
    let mut err: f64 = 0.0;
    for gamma in ball_words(model, 3) {
        for &s in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let est = operator_norm_lower(model, s, &FiniteFn::delta(gamma.clone()), gamma.len() + 2, 1e-12)?;
            err = err.max(rel(est.value, delta_norm_closed_form(model, s, gamma.len())));
        }
    }
    closed.require(err <= 1e-6).set("max_rel_error", err);

    let mut mono = Check::new("norm_monotone_in_N", true);
    let f = FiniteFn::sphere(model, 1);
    let mut prev: f64 = 0.0;
    let mut ok = true;
    for n in 1..=cfg.big_n.min(6) {
        let v = operator_norm_lower(model, 0.5, &f, n, 1e-10)?.value;
        ok &= v >= prev * (1.0 - 1e-9);
        prev = v;
    }
    mono.require(ok).set("last", prev);

    let mut slow = Check::new("slow_growth", true);
    let mut c: f64 = 0.0;
    for len in 0..=4 {
        let gamma = model.word_at(len, 0);
        for &s in &cfg.s_grid {
            if !(0.0..=1.0).contains(&s) {
                continue;
            }
            let est = operator_norm_lower(model, s, &FiniteFn::delta(gamma.clone()), 6, 1e-10)?.value;
            let shape = (1.0 - (2.0 * s - 1.0).exp()).powi(2) * (-(1.0 - 2.0 * s).abs() * model.alpha * len as f64).exp();
            c = c.max(est * shape);
        }
    }
    slow.require(c.is_finite()).set("constant", c);
    Ok(vec![closed, mono, slow])
}

fn shalom_check(cfg: &Config, model: &GroupModel) -> Result<Check> {
    let mut c = Check::new("shalom_comparison", false);
    let mut rng = rng_for(cfg, 4);
    let mut holds = 0;
    let trials = 20;
    let big_n = cfg.big_n.min(4);
    let (lam, pi) = shalom_compare(model, &FiniteFn::sphere(model, 1), big_n, 5)?;
    c.set("lambda_sphere1", lam).set("pi_sphere1", pi);
    for _ in 0..trials {
        let f = FiniteFn::new(
            ball_words(model, 1)
                .into_iter()
                .map(|g| (g, 1.0 - rng.gen::<f64>()))
                .collect(),
        );
        let (lam, pi) = shalom_compare(model, &f, big_n, 5)?;
        if lam <= pi + cfg.tol {
            holds += 1;
        }
    }
    c.require(holds == trials).set("holding", holds as f64).set("trials", trials as f64);
    Ok(c)
}

fn equivalence_check(cfg: &Config, model: &GroupModel) -> Result<Vec<Check>> {
    let mut eq = Check::new("rd_equivalence", true);
    let mut rng = rng_for(cfg, 5);
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let d_pad = 1.0;
    for &s in &[0.0, 0.5, 1.0] {
        let sigma = (s - 0.5f64).abs();
        let f = FiniteFn::new(
            ball_words(model, 2)
                .into_iter()
                .map(|g| (g, 1.0 - rng.gen::<f64>()))
                .collect(),
        );
        let blocks = sphere_blocks(&f);
        let mut c_block: f64 = 0.0;
        let mut sum = 0.0;
        for (n, b) in blocks.iter().enumerate() {
            let w = (1.0 + omega(sigma, n as f64, model.alpha)) * b.l2_norm();
            ok &= rel(weighted_norm(b, 1.0, sigma, model.alpha), w) <= 1e-12;
            let norm = operator_norm_lower(model, s, b, 3, 1e-10)?.value;
            c_block = c_block.max(norm / w);
            sum += norm;
        }
        let total = operator_norm_lower(model, s, &f, 3, 1e-10)?.value;
        let pad = padding_sum(sigma, model.alpha, d_pad, blocks.len() - 1);
        let bound = c_block * pad.sqrt() * weighted_norm(&f, 1.0 + d_pad, sigma, model.alpha);
        ok &= total <= sum * (1.0 + 1e-6) && sum <= bound * (1.0 + 1e-9);
        worst = worst.max(total / bound);
    }
    eq.require(ok).set("max_bound_ratio", worst);

    let mut cont = Check::new("omega_continuity", true);
    let gaps: Vec<f64> = (1..=6)
        .map(|e| {
            let sigma = 10f64.powi(-e);
            (0..=50)
                .map(|t| (omega(sigma, t as f64, model.alpha) - t as f64).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    cont.require(decreasing && gaps[5] < 1e-3).set("gap_at_1e-6", gaps[5]);
    Ok(vec![eq, cont])
}

fn cocycle_checks(cfg: &Config, model: &GroupModel) -> Result<Vec<Check>> {
    let eps = cfg.epsilon;
    let mut exact = Check::new("cocycle_norm_exact", true);
    let mut err: f64 = 0.0;
    for n in 1..=3 {
        for &s in &[0.0, 0.1, 0.2] {
            let gamma = model.word_at(n, 0);
            let grid = cocycle_grid(model, s, &gamma, eps, n + 1).norm();
            err = err.max(rel(grid, b_norm_exact(model, s, n, eps)?));
        }
    }
    if model.k == 2 {
        err = err.max((b_norm_exact(model, 0.0, 1, eps)? - 1.5f64.sqrt()).abs());
        err = err.max((b_norm_exact(model, 0.0, 2, eps)? - (28.0f64 / 9.0).sqrt()).abs());
    }
    exact.require(err <= 1e-12).set("max_error", err);

    let mut ident = Check::new("cocycle_identity", true);
    let mut rng = rng_for(cfg, 6);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let g1 = random_word(model, &mut rng, 2);
        let g2 = random_word(model, &mut rng, 2);
        let s = rng.gen_range(0.0..eps / 4.0);
        let depth = (g1.len() + g2.len()).max(1);
        let (r, b) = cocycle_residual(model, s, &g1, &g2, depth, eps)?;
        worst = worst.max(r / (1.0 + b));
    }
    ident.require(worst <= 1e-9).set("max_rel_residual", worst);

    let mut integ = Check::new("integrability_threshold", true);
    let probes = [0.0, 0.1, 0.2, 0.25 - 1e-9, 0.25, 0.3, 0.5];
    let mut ok = true;
    for &s in &probes {
        ok &= integrability_threshold(model, s, eps, 14)?.diverging == (s >= 0.25);
    }
    integ
        .require(ok)
        .set("threshold", 0.25)
        .set("epsilon_over_4", eps / 4.0);

    let mut proper = Check::new("properness_monotone", true);
    let mut slope = Check::new("properness_slope", false);
    let mut mono = true;
    for &s in cfg.s_grid.iter().filter(|s| **s >= 0.0 && **s < eps / 4.0) {
        let (rows, _) = properness_curve(model, s, 20, eps)?;
        mono &= rows.windows(2).all(|w| w[1].b_norm > w[0].b_norm);
    }
    for s in [0.0, 0.1, 0.2] {
        if s < eps / 4.0 {
            let (rows, _) = properness_curve(model, s, 20, eps)?;
            mono &= rows.windows(2).all(|w| w[1].b_norm > w[0].b_norm);
        }
    }
    proper.require(mono);
    let (rows, _) = properness_curve(model, 0.2, 20, eps)?;
    let last = rows.last().and_then(|r| r.slope_estimate).unwrap_or(0.0);
    let target = 4.0 * 0.2 * model.alpha;
    slope
        .require((last / target - 1.0).abs() <= 0.1)
        .set("slope_at_20", last)
        .set("target", target)
        .set("b_norm_sq_at_20", rows.last().map(|r| r.b_norm * r.b_norm).unwrap_or(0.0));
    Ok(vec![exact, ident, integ, proper, slope])
}

/// Run every check for `cfg`.
pub fn run_suite(cfg: &Config) -> Result<Suite> {
    cfg.validate()?;
    let model = cfg.model()?;
    let mu = cfg.measure()?;
    let mut checks = vec![group_axioms(&model)];
    checks.extend(partition_checks(cfg, &mu)?);
    checks.push(pushforward(&model, cfg.n_max)?);
    checks.push(shadow_sandwich(cfg, &mu)?);
    checks.push(refine_isometry(cfg, &model));
    checks.extend(cover_checks(cfg, &mu)?);
    checks.extend(sampling_checks(cfg, &mu)?);
    checks.extend(representation_checks(cfg, &model));
    checks.extend(spherical_checks(&model));
    checks.extend(rd_checks(cfg, &model)?);
    checks.extend(norm_checks(cfg, &model)?);
    checks.push(shalom_check(cfg, &model)?);
    checks.extend(equivalence_check(cfg, &model)?);
    checks.extend(cocycle_checks(cfg, &model)?);
    let pass = checks.iter().all(|c| c.pass || !c.gating);
    Ok(Suite {
        config: cfg.clone(),
        checks,
        pass,
    })
}
