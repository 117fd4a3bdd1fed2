//! Rapid-decay harness: the envelope `ω_σ`, weighted norms, sphere-supported
//! spectral tests, the optimality witness and the comparison with `λ_Γ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{common_prefix, inv_letter, GroupModel, Word};
use crate::reps::{operator_norm_lower, spherical_exact, FiniteFn, DEFAULT_NORM_TOL, MAX_POWER_ITERATIONS};
use crate::stepfun::descendant_range;

/// `ω_σ(t) = 2 sinh(σαt)/(1 − e^{-2σα})`, and `ω_0(t) = t`.
pub fn omega(sigma: f64, t: f64, alpha: f64) -> f64 {
    let x = sigma * alpha;
    if x == 0.0 {
        t
    } else if x.abs() < 1e-6 {
        t * (1.0 + x + x * x * (1.0 / 3.0 + t * t / 6.0))
    } else {
        2.0 * (x * t).sinh() / -(-2.0 * x).exp_m1()
    }
}

/// `(1 + ω_σ(t)) e^{-αt/2}`.
pub fn envelope(sigma: f64, t: f64, alpha: f64) -> f64 {
    (1.0 + omega(sigma, t, alpha)) * (-alpha * t / 2.0).exp()
}

/// `(Σ |f(γ)|² (1 + ω_σ(|γ|))^{2d})^{1/2}`.
pub fn weighted_norm(f: &FiniteFn, d: f64, sigma: f64, alpha: f64) -> f64 {
    f.terms
        .iter()
        .map(|(g, c)| c * c * (1.0 + omega(sigma, g.len() as f64, alpha)).powf(2.0 * d))
        .sum::<f64>()
        .sqrt()
}

/// One `(n, s)` row of the spectral test.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RdRow {
    pub n: usize,
    pub s: f64,
    pub trials: usize,
    pub max_ratio: f64,
    pub seed: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one trial, independent of scheduling.
pub fn trial_rng(seed: u64, n: usize, s: f64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = splitmix(splitmix(n as u64) ^ s.to_bits()) ^ splitmix(trial as u64);
    rng.set_stream(stream);
    rng
}

/// Uniform draw on `(0, 1]`.
pub fn positive_uniform(rng: &mut impl Rng) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Where `⟨π_s(γ)v, w⟩` reads `v` for each depth-`N` cell of `w`.
struct PairingPlan {
    big_n: usize,
    sphere: usize,
    /// Per `(γ, g)`: Busemann value offset by `n`, and the slot in the multilevel mean table.
    entries: Vec<(u8, u32)>,
    level_offsets: Vec<usize>,
}

impl PairingPlan {
    fn new(model: &GroupModel, n: usize, big_n: usize) -> Self {
        let lowest = big_n.saturating_sub(n);
        let mut level_offsets = vec![0; big_n + 2];
        for lvl in lowest..=big_n {
            level_offsets[lvl + 1] = level_offsets[lvl] + model.sphere_size(lvl);
        }
        let gammas: Vec<Word> = model.sphere_enum(n, 1.0).collect();
        let cells = model.sphere_size(big_n);
        let mut entries = Vec::with_capacity(gammas.len() * cells);
        let mut buf = Vec::new();
        for g in &gammas {
            for i in 0..cells {
                let w = model.word_at(big_n, i);
                let c = common_prefix(&g.0, &w.0);
                buf.clear();
                buf.extend(g.0[c..].iter().rev().map(|&l| inv_letter(l)));
                buf.extend_from_slice(&w.0[c..]);
                let lvl = buf.len().min(big_n);
                let slot = level_offsets[lvl] + model.index_of(&buf[..lvl]);
                entries.push(((2 * c) as u8, slot as u32));
            }
        }
        PairingPlan {
            big_n,
            sphere: gammas.len(),
            entries,
            level_offsets,
        }
    }

    /// Cell means of `v` at every level the plan reads.
    fn means(&self, model: &GroupModel, v: &[f64]) -> Vec<f64> {
        let mut table = vec![0.0; *self.level_offsets.last().unwrap_or(&0)];
        let lowest = (0..=self.big_n)
            .find(|&l| self.level_offsets[l + 1] > self.level_offsets[l])
            .unwrap_or(self.big_n);
        for lvl in lowest..=self.big_n {
            let base = self.level_offsets[lvl];
            for i in 0..model.sphere_size(lvl) {
                let w = model.word_at(lvl, i);
                let r = descendant_range(model, &w.0, self.big_n);
                let len = r.len() as f64;
                table[base + i] = v[r].iter().sum::<f64>() / len;
            }
        }
        table
    }
}

/// Draw positive `f` on `S_n` and `v, w ∈ E_N` and return the largest
/// `⟨π_s(f)v,w⟩ / ((1+ω_{|s-1/2|}(n))‖f‖₂‖v‖‖w‖)` over the trials.
pub fn rd_sphere_check(
    model: &GroupModel,
    s: f64,
    n: usize,
    big_n: usize,
    trials: usize,
    seed: u64,
) -> Result<RdRow> {
    let plan = PairingPlan::new(model, n, big_n);
    rd_rows_with_plan(model, &plan, &[s], n, trials, seed)?
        .pop()
        .ok_or_else(|| Error::InvalidParameter("empty s grid".into()))
}

/// Rows for every `s` in the grid, sharing one plan.
pub fn rd_rows(
    model: &GroupModel,
    s_grid: &[f64],
    n: usize,
    big_n: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<RdRow>> {
    if big_n <= n {
        return Err(Error::DepthOrderViolation {
            depth: big_n,
            bound: n,
        });
    }
    let plan = PairingPlan::new(model, n, big_n);
    rd_rows_with_plan(model, &plan, s_grid, n, trials, seed)
}

fn rd_rows_with_plan(
    model: &GroupModel,
    plan: &PairingPlan,
    s_grid: &[f64],
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<RdRow>> {
    if plan.big_n <= n {
        return Err(Error::DepthOrderViolation {
            depth: plan.big_n,
            bound: n,
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let cells = model.sphere_size(plan.big_n);
    let nu = 1.0 / cells as f64;
    s_grid
        .iter()
        .map(|&s| {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::InvalidParameter(format!("s = {s} outside [0, 1]")));
            }
            let weights: Vec<f64> = (0..=2 * n)
                .map(|b| (s * model.alpha * (b as f64 - n as f64)).exp())
                .collect();
            let env = 1.0 + omega((s - 0.5).abs(), n as f64, model.alpha);
            let max_ratio = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, n, s, t);
                    let f: Vec<f64> = (0..plan.sphere).map(|_| positive_uniform(&mut rng)).collect();
                    let v: Vec<f64> = (0..cells).map(|_| positive_uniform(&mut rng)).collect();
                    let w: Vec<f64> = (0..cells).map(|_| positive_uniform(&mut rng)).collect();
                    let means = plan.means(model, &v);
                    let mut total = 0.0;
                    for (gi, fg) in f.iter().enumerate() {
                        let row = &plan.entries[gi * cells..(gi + 1) * cells];
                        let part: f64 = row
                            .iter()
                            .zip(&w)
                            .map(|((b, slot), d)| weights[*b as usize] * means[*slot as usize] * d)
                            .sum();
                        total += fg * part;
                    }
                    let pairing = total * nu;
                    let norm = |x: &[f64], m: f64| (x.iter().map(|a| a * a).sum::<f64>() * m).sqrt();
                    pairing / (env * norm(&f, 1.0) * norm(&v, nu) * norm(&w, nu))
                })
                .reduce(|| 0.0, f64::max);
            Ok(RdRow {
                n,
                s,
                trials,
                max_ratio,
                seed,
            })
        })
        .collect()
}

/// The witness `f = φ_s|_{S_n}`, `v = w = 1`: returns the ratio and `1 + ω_{|s-1/2|}(n)`.
pub fn optimality_witness(model: &GroupModel, s: f64, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("optimality witness needs n ≥ 1".into()));
    }
    let phi = spherical_exact(model, s, n);
    let size = model.sphere_size(n) as f64;
    let sum = size * phi * phi;
    let f_norm = size.sqrt() * phi;
    let env = 1.0 + omega((s - 0.5).abs(), n as f64, model.alpha);
    Ok((sum / (f_norm * env), env))
}

/// Positions of `B_m` words in a flat array: `offset[len] + index_of`.
fn ball_offsets(model: &GroupModel, m: usize) -> Vec<usize> {
    let mut off = vec![0; m + 2];
    for l in 0..=m {
        off[l + 1] = off[l] + model.sphere_size(l);
    }
    off
}

/// Power-iteration norm of `λ(f)` compressed to `ℓ²(B_m)`.
pub fn lambda_norm_truncated(model: &GroupModel, f: &FiniteFn, m: usize, tol: f64) -> Result<f64> {
    let off = ball_offsets(model, m);
    let size = off[m + 1];
    let words: Vec<Word> = (0..=m)
        .flat_map(|l| (0..model.sphere_size(l)).map(move |i| (l, i)))
        .map(|(l, i)| model.word_at(l, i))
        .collect();
    let slot = |w: &Word| off[w.len()] + model.index_of(&w.0);
    // (λ(f)v)(x) = Σ_g f(g) v(g⁻¹x).
    let build = |f: &FiniteFn| -> Vec<Vec<(usize, f64)>> {
        words
            .iter()
            .map(|x| {
                f.terms
                    .iter()
                    .filter_map(|(g, c)| {
                        let y = g.inverse().multiply(x);
                        (y.len() <= m).then(|| (slot(&y), *c))
                    })
                    .collect()
            })
            .collect()
    };
    let fwd = build(f);
    let bwd = build(&f.adjoint());
    let apply = |op: &Vec<Vec<(usize, f64)>>, v: &[f64]| -> Vec<f64> {
        op.iter()
            .map(|row| row.iter().map(|(j, c)| c * v[*j]).sum())
            .collect()
    };
    let mut x = vec![1.0; size];
    let mut lambda = 0.0;
    for _ in 0..MAX_POWER_ITERATIONS {
        let xn = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        if xn == 0.0 {
            return Ok(0.0);
        }
        x.iter_mut().for_each(|a| *a /= xn);
        let y = apply(&fwd, &x);
        let next: f64 = y.iter().map(|a| a * a).sum();
        let z = apply(&bwd, &y);
        let done = (next - lambda).abs() <= tol * next;
        lambda = next;
        x = z;
        if done {
            return Ok(lambda.sqrt());
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_POWER_ITERATIONS,
        estimate: lambda.sqrt(),
        residual: f64::NAN,
    })
}

/// Lower estimates of `‖λ_Γ(f)‖` on `B_m` and of `‖π_{1/2}(f)‖` on `E_N`.
pub fn shalom_compare(model: &GroupModel, f: &FiniteFn, big_n: usize, m: usize) -> Result<(f64, f64)> {
    if !f.is_nonnegative() {
        return Err(Error::NegativeInput);
    }
    let lambda = lambda_norm_truncated(model, f, m, DEFAULT_NORM_TOL)?;
    let pi = operator_norm_lower(model, 0.5, f, big_n, DEFAULT_NORM_TOL)?.value;
    Ok((lambda, pi))
}

/// `Σ_{n ≤ n_max} (1 + ω_σ(n))^{-2d′}`, the padding series that turns sphere bounds into a Sobolev bound.
pub fn padding_sum(sigma: f64, alpha: f64, d_pad: f64, n_max: usize) -> f64 {
    (0..=n_max)
        .map(|n| (1.0 + omega(sigma, n as f64, alpha)).powf(-2.0 * d_pad))
        .sum()
}

/// Split `f` by word length.
pub fn sphere_blocks(f: &FiniteFn) -> Vec<FiniteFn> {
    let mut blocks = vec![FiniteFn::default(); f.max_len() + 1];
    for (g, c) in &f.terms {
        blocks[g.len()].terms.push((g.clone(), *c));
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_branches() {
        let a = 3f64.ln();
        assert_eq!(omega(0.0, 2.5, a), 2.5);
        assert_eq!(omega(0.3, 0.0, a), 0.0);
        assert!((omega(0.5, 1.0, a) - 3f64.sqrt()).abs() < 1e-12);
        let tiny = omega(1e-8, 3.0, a);
        assert!((tiny - 3.0).abs() < 1e-6);
    }

    #[test]
    fn weighted_norm_examples() {
        let g = GroupModel::new(2).unwrap();
        let e = FiniteFn::delta(Word::identity());
        assert_eq!(weighted_norm(&e, 3.0, 0.2, g.alpha), 1.0);
        let f = FiniteFn::delta(g.parse("aba").unwrap());
        assert!((weighted_norm(&f, 1.0, 0.0, g.alpha) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn witness_at_half() {
        let g = GroupModel::new(2).unwrap();
        let (ratio, env) = optimality_witness(&g, 0.5, 1).unwrap();
        assert!((ratio - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((env - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_identity() {
        let g = GroupModel::new(2).unwrap();
        let v = lambda_norm_truncated(&g, &FiniteFn::delta(Word::identity()), 3, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }
}
