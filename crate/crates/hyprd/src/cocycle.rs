//! The tensor square `ρ_s = π_s ⊗ π_s` and its 1-cocycle
//! `b_s(γ)(ξ,η) = (β_ξ(o,γo) − β_η(o,γo)) / d_o(ξ,η)^{(2s/ε)α}`.

use rayon::prelude::*;

use crate::boundary::stratum_measures;
use crate::error::{Error, Result};
use crate::group::{common_prefix, inv_letter, GroupModel, Word};
use crate::stepfun::StepFunction;

/// A step function on pairs of depth-`N` cylinders, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorStep {
    pub model: GroupModel,
    pub depth: usize,
    pub coeffs: Vec<f64>,
}

impl TensorStep {
    pub fn new(model: GroupModel, depth: usize, coeffs: Vec<f64>) -> Self {
        let s = model.sphere_size(depth);
        assert_eq!(coeffs.len(), s * s, "coefficient count");
        TensorStep {
            model,
            depth,
            coeffs,
        }
    }

    pub fn side(&self) -> usize {
        self.model.sphere_size(self.depth)
    }

    /// `u ⊗ v` at the common depth.
    pub fn elementary(u: &StepFunction, v: &StepFunction) -> Self {
        let d = u.depth.max(v.depth);
        let (u, v) = (u.refine(d), v.refine(d));
        let coeffs = u
            .coeffs
            .iter()
            .flat_map(|a| v.coeffs.iter().map(move |b| a * b))
            .collect();
        TensorStep::new(u.model, d, coeffs)
    }

    pub fn refine(&self, depth: usize) -> TensorStep {
        assert!(depth >= self.depth, "refine to a shallower depth");
        if depth == self.depth {
            return self.clone();
        }
        let model = self.model;
        let side = model.sphere_size(depth);
        let old = self.side();
        let parent = |i: usize| {
            let w = model.word_at(depth, i);
            model.index_of(&w.0[..self.depth])
        };
        let map: Vec<usize> = (0..side).map(parent).collect();
        let coeffs = (0..side * side)
            .map(|ij| self.coeffs[map[ij / side] * old + map[ij % side]])
            .collect();
        TensorStep::new(model, depth, coeffs)
    }

    pub fn norm(&self) -> f64 {
        let cell = 1.0 / (self.coeffs.len() as f64);
        (self.coeffs.iter().map(|c| c * c).sum::<f64>() * cell).sqrt()
    }

    pub fn sub(&self, other: &TensorStep) -> TensorStep {
        let d = self.depth.max(other.depth);
        let (a, b) = (self.refine(d), other.refine(d));
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        TensorStep::new(self.model, d, coeffs)
    }
}

/// `⟨F, G⟩` with respect to `ν ⊗ ν`.
pub fn tensor_inner(a: &TensorStep, b: &TensorStep) -> f64 {
    let d = a.depth.max(b.depth);
    let (a, b) = (a.refine(d), b.refine(d));
    let cell = 1.0 / a.coeffs.len() as f64;
    a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y).sum::<f64>() * cell
}

/// `ρ_s(γ)F(ξ,η) = e^{sα(β_ξ+β_η)} F(γ⁻¹ξ, γ⁻¹η)`, exact at depth `depth(F) + |γ|`.
pub fn rho_apply(s: f64, gamma: &Word, f: &TensorStep) -> TensorStep {
    let model = f.model;
    let depth = f.depth + gamma.len();
    let side = model.sphere_size(depth);
    let old = f.side();
    let n = gamma.len() as f64;
    let (weight, source): (Vec<f64>, Vec<usize>) = (0..side)
        .map(|i| {
            let w = model.word_at(depth, i);
            let c = common_prefix(&gamma.0, &w.0);
            let mut img: Vec<u8> = gamma.0[c..].iter().rev().map(|&l| inv_letter(l)).collect();
            img.extend_from_slice(&w.0[c..]);
            let beta = 2.0 * c as f64 - n;
            ((s * model.alpha * beta).exp(), model.index_of(&img[..f.depth]))
        })
        .unzip();
    let coeffs = (0..side)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (wi, si) = (weight[i], source[i]);
            let weight = &weight;
            let source = &source;
            (0..side).map(move |j| wi * weight[j] * f.coeffs[si * old + source[j]])
        })
        .collect();
    TensorStep::new(model, depth, coeffs)
}

/// `b_s(γ)` on the depth-`N` grid, `N ≥ |γ|`. It vanishes on diagonal cells.
pub fn cocycle_grid(model: &GroupModel, s: f64, gamma: &Word, epsilon: f64, depth: usize) -> TensorStep {
    assert!(depth >= gamma.len(), "grid depth below |γ|");
    let side = model.sphere_size(depth);
    let words: Vec<Word> = (0..side).map(|i| model.word_at(depth, i)).collect();
    let strata: Vec<usize> = words.iter().map(|w| common_prefix(&gamma.0, &w.0)).collect();
    let exponent = 2.0 * s * model.alpha / epsilon;
    let coeffs = (0..side)
        .into_par_iter()
        .flat_map_iter(|i| {
            let words = &words;
            let strata = &strata;
            (0..side).map(move |j| {
                if i == j || strata[i] == strata[j] {
                    return 0.0;
                }
                let p = common_prefix(&words[i].0, &words[j].0) as f64;
                let d = (-epsilon * p).exp();
                2.0 * (strata[i] as f64 - strata[j] as f64) / d.powf(exponent)
            })
        })
        .collect();
    TensorStep::new(*model, depth, coeffs)
}

/// `b_s(γ)` stored by stratum pair `(j₁, j₂)`, `j_i = (·, γ)_o`.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleVector {
    pub n: usize,
    pub s: f64,
    pub epsilon: f64,
    pub values: Vec<Vec<f64>>,
}

impl CocycleVector {
    pub fn new(model: &GroupModel, s: f64, n: usize, epsilon: f64) -> Self {
        // Off the diagonal, (ξ,η)_o = min(j₁, j₂), so d^{-(2s/ε)α} = e^{2sα min}.
        let values = (0..=n)
            .map(|a| {
                (0..=n)
                    .map(|b| {
                        if a == b {
                            0.0
                        } else {
                            let m = a.min(b) as f64;
                            2.0 * (a as f64 - b as f64) * (2.0 * s * model.alpha * m).exp()
                        }
                    })
                    .collect()
            })
            .collect();
        CocycleVector {
            n,
            s,
            epsilon,
            values,
        }
    }

    pub fn norm(&self, model: &GroupModel) -> f64 {
        let nu = stratum_measures(model, self.n);
        let mut total = 0.0;
        for (a, row) in self.values.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                total += nu[a] * nu[b] * v * v;
            }
        }
        total.sqrt()
    }
}

/// `‖b_s(γ)‖₂` for `|γ| = n`, as an exact stratified double sum.
pub fn b_norm_exact(model: &GroupModel, s: f64, n: usize, epsilon: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidParameter(format!("s = {s} must be nonnegative")));
    }
    Ok(CocycleVector::new(model, s, n, epsilon).norm(model))
}

/// `‖b_s(γ₁γ₂) − b_s(γ₁) − ρ_s(γ₁)b_s(γ₂)‖` and `‖b_s(γ₁γ₂)‖` on the depth-`N` grid.
pub fn cocycle_residual(
    model: &GroupModel,
    s: f64,
    g1: &Word,
    g2: &Word,
    depth: usize,
    epsilon: f64,
) -> Result<(f64, f64)> {
    let need = g1.len() + g2.len();
    if depth < need {
        return Err(Error::DepthOrderViolation {
            depth,
            bound: need,
        });
    }
    let prod = g1.multiply(g2);
    let b12 = cocycle_grid(model, s, &prod, epsilon, depth);
    let b1 = cocycle_grid(model, s, g1, epsilon, depth);
    let b2 = cocycle_grid(model, s, g2, epsilon, depth - g1.len());
    let moved = rho_apply(s, g1, &b2);
    let r = b12.sub(&b1).sub(&moved);
    Ok((r.norm(), b12.norm()))
}

/// Partial sums of `∫∫ d_o^{-(4s/ε)α} dν dν` by common-prefix stratum.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Integrability {
    pub partial_sums: Vec<f64>,
    /// Ratio of consecutive stratum contributions beyond the first.
    pub ratio: f64,
    pub diverging: bool,
}

pub fn integrability_threshold(model: &GroupModel, s: f64, epsilon: f64, depth_max: usize) -> Result<Integrability> {
    if depth_max > 14 {
        return Err(Error::InvalidParameter(format!("depth_max = {depth_max} above 14")));
    }
    let mass = |m: usize| model.sphere_weight(m);
    let exponent = 4.0 * s * model.alpha / epsilon;
    let mut total = 0.0;
    let mut partial_sums = Vec::with_capacity(depth_max + 1);
    for m in 0..=depth_max {
        // ν⊗ν{(ξ,η)_o = m} = 1/|S_m| − 1/|S_{m+1}|.
        let weight = mass(m) - mass(m + 1);
        let d = (-epsilon * m as f64).exp();
        total += weight * d.powf(-exponent);
        partial_sums.push(total);
    }
    // Term ratio e^{4sα}/q, written so that the critical case is exactly 1.
    let ratio = (model.q as f64).powf(4.0 * s - 1.0);
    Ok(Integrability {
        partial_sums,
        ratio,
        diverging: ratio >= 1.0,
    })
}

/// A point of the properness curve.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ProperRow {
    pub n: usize,
    pub s: f64,
    pub b_norm: f64,
    /// `log‖b(n)‖² − log‖b(n−1)‖²`, absent at `n = 1`.
    pub slope_estimate: Option<f64>,
}

/// `‖b_s(γ)‖` for `|γ| = 1..=n_max`; also flags `s ≥ ε/4`.
pub fn properness_curve(model: &GroupModel, s: f64, n_max: usize, epsilon: f64) -> Result<(Vec<ProperRow>, bool)> {
    let flagged = s >= epsilon / 4.0;
    let mut rows: Vec<ProperRow> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let b = b_norm_exact(model, s, n, epsilon)?;
        let slope = rows
            .last()
            .map(|p| 2.0 * (b.ln() - p.b_norm.ln()));
        rows.push(ProperRow {
            n,
            s,
            b_norm: b,
            slope_estimate: slope,
        });
    }
    Ok((rows, flagged))
}
