//! The boundary representations `π_s` acting on step functions, spherical
//! functions, restricted matrix coefficients and operator-norm estimation.

use rayon::prelude::*;

use crate::boundary::{horo_partition, stratum_measures};
use crate::error::{Error, Result};
use crate::group::{common_prefix, inv_letter, GroupModel, Word};
use crate::rd::envelope;
use crate::stepfun::{inner, StepFunction};

/// A finitely supported real function on `F_k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FiniteFn {
    pub terms: Vec<(Word, f64)>,
}

impl FiniteFn {
    pub fn new(terms: Vec<(Word, f64)>) -> Self {
        FiniteFn { terms }
    }

    pub fn delta(g: Word) -> Self {
        FiniteFn::new(vec![(g, 1.0)])
    }

    /// `1_{S_n}`.
    pub fn sphere(model: &GroupModel, n: usize) -> Self {
        FiniteFn::new(model.sphere_enum(n, 1.0).map(|g| (g, 1.0)).collect())
    }

    /// `1_{S_n}/|S_n|`.
    pub fn uniform_sphere(model: &GroupModel, n: usize) -> Self {
        let w = 1.0 / model.sphere_size(n) as f64;
        FiniteFn::new(model.sphere_enum(n, 1.0).map(|g| (g, w)).collect())
    }

    /// `φ_s` restricted to `S_n`.
    pub fn spherical(model: &GroupModel, s: f64, n: usize) -> Self {
        let phi = spherical_exact(model, s, n);
        FiniteFn::new(model.sphere_enum(n, 1.0).map(|g| (g, phi)).collect())
    }

    /// `f*(g) = f(g⁻¹)`.
    pub fn adjoint(&self) -> Self {
        FiniteFn::new(self.terms.iter().map(|(g, c)| (g.inverse(), *c)).collect())
    }

    pub fn l2_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c * c).sum::<f64>().sqrt()
    }

    pub fn max_len(&self) -> usize {
        self.terms.iter().map(|(g, _)| g.len()).max().unwrap_or(0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c >= 0.0)
    }
}

/// Image of the depth-`depth` cylinder word `w` under `γ⁻¹`, with the shared prefix length.
fn pull_back(gamma: &[u8], w: &[u8], buf: &mut Vec<u8>) -> usize {
    let c = common_prefix(gamma, w);
    buf.clear();
    buf.extend(gamma[c..].iter().rev().map(|&l| inv_letter(l)));
    buf.extend_from_slice(&w[c..]);
    c
}

/// `p_D π_s(γ) v` for `D ≥ |γ|`, computed cell by cell.
///
/// On a depth-`D` cylinder `C_g` the Busemann function is constant and `γ⁻¹`
/// maps `C_g` onto the cylinder `C_{γ⁻¹g}` scaling `ν` uniformly, so the cell
/// average is `e^{sαβ_g} · mean(v on C_{γ⁻¹g})`.
pub fn apply_pi_at(s: f64, gamma: &Word, v: &StepFunction, depth: usize) -> StepFunction {
    assert!(depth >= gamma.len(), "output depth below |γ|");
    let model = v.model;
    let n = gamma.len() as f64;
    let g = &gamma.0;
    let coeffs: Vec<f64> = (0..model.sphere_size(depth))
        .into_par_iter()
        .map_init(Vec::new, |buf, i| {
            let w = model.word_at(depth, i);
            let c = pull_back(g, &w.0, buf);
            let beta = 2.0 * c as f64 - n;
            let mean = match g.last() {
                // D = |γ| and w = γ: γ⁻¹C_γ is the complement of C_l, l the inverse of γ's last letter.
                Some(&last) if buf.is_empty() => {
                    let l = inv_letter(last);
                    let share = 1.0 / model.letters() as f64;
                    (v.mean_over(&[]) - share * v.mean_over(&[l])) / (1.0 - share)
                }
                _ => v.mean_over(buf),
            };
            (s * model.alpha * beta).exp() * mean
        })
        .collect();
    StepFunction::new(model, depth, coeffs)
}

/// `π_s(γ)v`, exact at depth `depth(v) + |γ|`.
pub fn apply_pi(s: f64, gamma: &Word, v: &StepFunction) -> StepFunction {
    apply_pi_at(s, gamma, v, v.depth + gamma.len())
}

/// `π_s(f)v = Σ f(γ) π_s(γ)v`.
pub fn apply_pi_f(s: f64, f: &FiniteFn, v: &StepFunction) -> StepFunction {
    let depth = v.depth + f.max_len();
    apply_pi_f_at(s, f, v, depth)
}

/// `p_D π_s(f) v` for `D ≥ max |γ|`.
pub fn apply_pi_f_at(s: f64, f: &FiniteFn, v: &StepFunction, depth: usize) -> StepFunction {
    let mut out = StepFunction::zeros(v.model, depth);
    for (g, c) in &f.terms {
        let part = apply_pi_at(s, g, v, depth);
        out.axpy(*c, &part);
    }
    out
}

/// `⟨π_s(γ)v, w⟩` without materializing the translated function.
pub fn pairing(s: f64, gamma: &Word, v: &StepFunction, w: &StepFunction) -> f64 {
    let depth = w.depth.max(gamma.len());
    let w = w.refine(depth);
    let image = apply_pi_at(s, gamma, v, depth);
    inner(&image, &w)
}

/// `φ_s(n) = Σ_j ν_j q^{s(2j-n)}`, the spherical function on words of length `n`.
pub fn spherical_exact(model: &GroupModel, s: f64, n: usize) -> f64 {
    if s == 0.0 || s == 1.0 {
        // Total mass of ν and of γ_*ν.
        return 1.0;
    }
    let q = model.q as f64;
    stratum_measures(model, n)
        .iter()
        .enumerate()
        .map(|(j, nu)| nu * q.powf(s * (2.0 * j as f64 - n as f64)))
        .sum()
}

/// A row `(n, s, φ_s(n), envelope, ratio)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SphericalRow {
    pub n: usize,
    pub s: f64,
    pub phi: f64,
    pub envelope: f64,
    pub ratio: f64,
}

/// `φ_s(n)` against `(1 + ω_{|s-1/2|}(nR)) e^{-αnR/2}` over the grid.
pub fn spherical_table(model: &GroupModel, s_grid: &[f64], n_max: usize, r: f64) -> Vec<SphericalRow> {
    let mut rows = Vec::with_capacity(s_grid.len() * (n_max + 1));
    for &s in s_grid {
        for n in 0..=n_max {
            let phi = spherical_exact(model, s, n);
            let env = envelope((s - 0.5).abs(), n as f64 * r, model.alpha);
            rows.push(SphericalRow {
                n,
                s,
                phi,
                envelope: env,
                ratio: phi / env,
            });
        }
    }
    rows
}

/// The restricted coefficient on `A_{k,R}(γ)` and its Cauchy-Schwarz bound shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellCoefficient {
    pub k: usize,
    /// `⟨π_s(γ)v, 1_{A_k} w⟩`.
    pub value: f64,
    /// `Σ_{g,h} d_g c_h ν(A_k ∩ γQ_h ∩ Q_g)`.
    pub r_kn: f64,
    /// `e^{(1/2-s)αnR} e^{(2s-1)αkR} |S*|⁻¹ (Σ c_h² d_g²)^{1/2}`, the bound up to its constant.
    pub cs1_shape: f64,
}

/// Split `⟨π_s(γ)v, w⟩` over the horospherical partition of `γ` (cover cells are depth-`N` cylinders).
pub fn coeff_on_ak(
    s: f64,
    gamma: &Word,
    v: &StepFunction,
    w: &StepFunction,
    r: f64,
) -> Result<Vec<CellCoefficient>> {
    if v.min_coeff() < 0.0 || w.min_coeff() < 0.0 {
        return Err(Error::NegativeInput);
    }
    let depth = v.depth.max(w.depth);
    if depth <= gamma.len() {
        return Err(Error::DepthOrderViolation {
            depth,
            bound: gamma.len(),
        });
    }
    let (v, w) = (v.refine(depth), w.refine(depth));
    let model = v.model;
    let part = horo_partition(&model, gamma, r)?;
    let n = gamma.len();
    let nu = 1.0 / model.sphere_size(depth) as f64;
    let cells = part.n;
    let mut value = vec![0.0; cells];
    let mut r_kn = vec![0.0; cells];
    let mut g_sq = vec![0.0; cells];
    let mut h_sets = vec![vec![false; v.len()]; cells];
    let mut buf = Vec::new();
    for (i, d) in w.coeffs.iter().enumerate() {
        let word = model.word_at(depth, i);
        let c = pull_back(&gamma.0, &word.0, &mut buf);
        let k = part.cell_of(c);
        let beta = 2.0 * c as f64 - n as f64;
        let base = d * nu * v.mean_over(&buf);
        value[k - 1] += (s * model.alpha * beta).exp() * base;
        r_kn[k - 1] += base;
        g_sq[k - 1] += d * d;
        // Cells h with γ⁻¹C_g ∩ C_h ≠ ∅.
        if buf.len() >= depth {
            h_sets[k - 1][model.index_of(&buf[..depth])] = true;
        } else {
            for h in crate::stepfun::descendant_range(&model, &buf, depth) {
                h_sets[k - 1][h] = true;
            }
        }
    }
    let big_s = v.len() as f64;
    let alpha = model.alpha;
    Ok((1..=cells)
        .map(|k| {
            let h_sq: f64 = h_sets[k - 1]
                .iter()
                .zip(&v.coeffs)
                .filter(|(m, _)| **m)
                .map(|(_, c)| c * c)
                .sum();
            let shape = ((0.5 - s) * alpha * part.n as f64 * r).exp()
                * ((2.0 * s - 1.0) * alpha * k as f64 * r).exp()
                / big_s
                * (h_sq * g_sq[k - 1]).sqrt();
            CellCoefficient {
                k,
                value: value[k - 1],
                r_kn: r_kn[k - 1],
                cs1_shape: shape,
            }
        })
        .collect())
}

/// A lower estimate of `‖π_s(f)‖_op` on `E_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    /// `‖T*Tx − λx‖ / ‖x‖` at the final iterate.
    pub residual: f64,
}

pub const DEFAULT_NORM_TOL: f64 = 1e-10;
pub const MAX_POWER_ITERATIONS: usize = 10_000;

/// Power iteration on `T*T` for `T = π_s(f): E_N → E_{N+L}`, `L = max |γ|`.
///
/// The adjoint is `p_N ∘ Σ f(γ) π_{1-s}(γ⁻¹)`. Rayleigh quotients of a positive
/// semidefinite operator increase along the iteration, so the result never
/// exceeds the restricted norm.
pub fn operator_norm_lower(
    model: &GroupModel,
    s: f64,
    f: &FiniteFn,
    n: usize,
    tol: f64,
) -> Result<NormEstimate> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("s = {s} outside [0, 1]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be positive")));
    }
    let out_depth = n + f.max_len();
    let adj = f.adjoint();
    let t = |x: &StepFunction| apply_pi_f_at(s, f, x, out_depth);
    let t_star = |y: &StepFunction| apply_pi_f_at(1.0 - s, &adj, y, n);

    let mut x = StepFunction::constant(*model, n, 1.0);
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_POWER_ITERATIONS {
        let xn = x.norm();
        if xn == 0.0 {
            return Ok(NormEstimate {
                value: 0.0,
                iterations: it,
                residual: 0.0,
            });
        }
        x.scale(1.0 / xn);
        let y = t(&x);
        let z = t_star(&y);
        let next = inner(&y, &y);
        let mut r = z.clone();
        r.axpy(-next, &x);
        residual = r.norm();
        let converged = (next - lambda).abs() <= tol * next.abs();
        lambda = next;
        x = z;
        if converged {
            return Ok(NormEstimate {
                value: lambda.sqrt(),
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_POWER_ITERATIONS,
        estimate: lambda.sqrt(),
        residual,
    })
}

/// Closed form `‖π_s(γ)‖ = e^{|2s-1|α|γ|/2}`.
pub fn delta_norm_closed_form(model: &GroupModel, s: f64, len: usize) -> f64 {
    ((2.0 * s - 1.0).abs() * model.alpha * len as f64 / 2.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::Cylinder;

    fn f2() -> GroupModel {
        GroupModel::new(2).unwrap()
    }

    #[test]
    fn pi_half_on_indicator() {
        let g = f2();
        let v = StepFunction::indicator(g, &Cylinder::new(g.parse("a").unwrap()), 1);
        let out = apply_pi(0.5, &g.parse("b").unwrap(), &v);
        let want = StepFunction::indicator(g, &Cylinder::new(g.parse("ba").unwrap()), 2);
        for (a, b) in out.coeffs.iter().zip(&want.coeffs) {
            assert!((a - 3f64.sqrt() * b).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_acts_trivially() {
        let g = f2();
        let v = StepFunction::from_fn(g, 2, |w| w.0.iter().map(|&l| l as f64).sum());
        assert_eq!(apply_pi(0.3, &Word::identity(), &v), v);
    }

    #[test]
    fn spherical_spot_values() {
        let g = f2();
        assert!((spherical_exact(&g, 0.5, 1) - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((spherical_exact(&g, 0.5, 2) - 2.0 / 3.0).abs() < 1e-12);
        for n in 0..10 {
            assert!((spherical_exact(&g, 0.0, n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_of_identity() {
        let g = f2();
        let est = operator_norm_lower(&g, 0.3, &FiniteFn::delta(Word::identity()), 2, 1e-10).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coefficients_need_depth() {
        let g = f2();
        let v = StepFunction::constant(g, 2, 1.0);
        assert!(matches!(
            coeff_on_ak(0.5, &g.parse("ab").unwrap(), &v, &v, 1.0),
            Err(Error::DepthOrderViolation { .. })
        ));
        let neg = StepFunction::constant(g, 3, -1.0);
        assert_eq!(
            coeff_on_ak(0.5, &g.parse("ab").unwrap(), &neg, &v, 1.0),
            Err(Error::NegativeInput)
        );
    }
}
