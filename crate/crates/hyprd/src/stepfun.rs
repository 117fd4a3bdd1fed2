//! Step functions on depth-`N` cylinders, the Vitali cover of the boundary,
//! and the counting and multiplicity diagnostics built on it.

use rayon::prelude::*;

use crate::boundary::{horo_partition, shadow, Cylinder, CylinderUnion, HoroPartition, PSMeasure};
use crate::error::{Error, Result};
use crate::group::{boundary_extension, GroupModel, Word};

/// Index range of the depth-`depth` descendants of `w` (requires `|w| ≤ depth`).
pub fn descendant_range(model: &GroupModel, w: &[u8], depth: usize) -> std::ops::Range<usize> {
    debug_assert!(w.len() <= depth);
    if w.is_empty() {
        return 0..model.sphere_size(depth);
    }
    let width = model.q.pow((depth - w.len()) as u32);
    let start = model.index_of(w) * width;
    start..start + width
}

/// An element of `E_N`: one coefficient per depth-`N` cylinder, in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pub model: GroupModel,
    pub depth: usize,
    pub coeffs: Vec<f64>,
}

impl StepFunction {
    pub fn new(model: GroupModel, depth: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), model.sphere_size(depth), "coefficient count");
        StepFunction {
            model,
            depth,
            coeffs,
        }
    }

    pub fn zeros(model: GroupModel, depth: usize) -> Self {
        StepFunction::constant(model, depth, 0.0)
    }

    pub fn constant(model: GroupModel, depth: usize, value: f64) -> Self {
        StepFunction::new(model, depth, vec![value; model.sphere_size(depth)])
    }

    pub fn from_fn(model: GroupModel, depth: usize, f: impl Fn(&Word) -> f64) -> Self {
        let coeffs = (0..model.sphere_size(depth))
            .map(|i| f(&model.word_at(depth, i)))
            .collect();
        StepFunction::new(model, depth, coeffs)
    }

    /// `1_C` written at depth `max(depth, depth(C))`.
    pub fn indicator(model: GroupModel, c: &Cylinder, depth: usize) -> Self {
        let depth = depth.max(c.depth());
        let mut v = StepFunction::zeros(model, depth);
        for i in descendant_range(&model, &c.prefix.0, depth) {
            v.coeffs[i] = 1.0;
        }
        v
    }

    /// `ν(C)` for each cell.
    pub fn cell_measure(&self) -> f64 {
        1.0 / self.coeffs.len() as f64
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient on the cell containing `C_w`, `|w| ≥ depth`.
    pub fn value_at(&self, w: &[u8]) -> f64 {
        self.coeffs[self.model.index_of(&w[..self.depth])]
    }

    /// The `ν`-average over `C_w` for any `w`.
    pub fn mean_over(&self, w: &[u8]) -> f64 {
        if w.len() >= self.depth {
            return self.value_at(w);
        }
        let r = descendant_range(&self.model, w, self.depth);
        let len = r.len() as f64;
        self.coeffs[r].iter().sum::<f64>() / len
    }

    /// The same function written at a deeper level.
    pub fn refine(&self, depth: usize) -> StepFunction {
        assert!(depth >= self.depth, "refine to a shallower depth");
        if depth == self.depth {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.model.sphere_size(depth));
        if self.depth == 0 {
            out.resize(self.model.sphere_size(depth), self.coeffs[0]);
        } else {
            let width = self.model.q.pow((depth - self.depth) as u32);
            for &c in &self.coeffs {
                out.extend(std::iter::repeat_n(c, width));
            }
        }
        StepFunction::new(self.model, depth, out)
    }

    /// Cell averages at a shallower depth.
    pub fn project(&self, depth: usize) -> StepFunction {
        assert!(depth <= self.depth, "project to a deeper level");
        let coeffs = (0..self.model.sphere_size(depth))
            .map(|i| {
                let w = self.model.word_at(depth, i);
                self.mean_over(&w.0)
            })
            .collect();
        StepFunction::new(self.model, depth, coeffs)
    }

    pub fn norm(&self) -> f64 {
        inner(self, self).sqrt()
    }

    pub fn scale(&mut self, t: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= t);
    }

    /// `self += t·other` after refining both to a common depth.
    pub fn axpy(&mut self, t: f64, other: &StepFunction) {
        if other.depth > self.depth {
            *self = self.refine(other.depth);
        }
        let o = other.refine(self.depth);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += t * b;
        }
    }

    pub fn min_coeff(&self) -> f64 {
        self.coeffs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `⟨u, v⟩ = Σ u_g v_g ν(C_g)` at the common depth.
pub fn inner(u: &StepFunction, v: &StepFunction) -> f64 {
    let d = u.depth.max(v.depth);
    let (u, v) = (u.refine(d), v.refine(d));
    let s: f64 = u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| a * b).sum();
    s * u.cell_measure()
}

/// Orthogonal projection `p_N` onto `E_N`.
pub fn project_pn(v: &StepFunction, n: usize) -> Result<StepFunction> {
    if n == 0 {
        return Err(Error::InvalidParameter("p_N needs N ≥ 1".into()));
    }
    if v.depth <= n {
        return Ok(v.refine(n));
    }
    Ok(v.project(n))
}

/// The Vitali-type partition `∂X = ∐ Q_g` over a subset `S*` of `S_{N,R}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverFamily {
    pub n: usize,
    pub r_shell: f64,
    pub r: f64,
    /// Depth at which every `Q_g` is a union of cylinders.
    pub resolution: usize,
    pub selected: Vec<Word>,
    pub cells: Vec<CylinderUnion>,
    /// Owning cell for every cylinder at `resolution`, `None` if uncovered.
    pub owner: Vec<Option<usize>>,
}

impl CoverFamily {
    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn covers(&self) -> bool {
        self.owner.iter().all(Option::is_some)
    }

    /// Indices of the cells meeting `u`, sorted.
    pub fn cells_meeting(&self, model: &GroupModel, u: &CylinderUnion) -> Vec<usize> {
        let mut out = Vec::new();
        for p in u.prefixes() {
            if p.len() >= self.resolution {
                let i = model.index_of(&p.0[..self.resolution]);
                out.extend(self.owner[i]);
            } else {
                for i in descendant_range(model, &p.0, self.resolution) {
                    out.extend(self.owner[i]);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Smallest `r′ ≥ r` with `Q_g ⊆ O_{r′}(o, g)` for all selected `g`.
    pub fn outer_radius(&self) -> f64 {
        self.selected
            .iter()
            .zip(&self.cells)
            .map(|(g, q)| {
                let t = q
                    .prefixes()
                    .iter()
                    .map(|p| crate::group::common_prefix(&p.0, &g.0))
                    .min()
                    .unwrap_or(g.len());
                (g.len() - t) as f64
            })
            .fold(self.r, f64::max)
    }

    /// Whether `O_r(o, g) ⊆ Q_g` for every selected `g`.
    pub fn inner_shadows_contained(&self, model: &GroupModel) -> bool {
        self.selected.iter().zip(&self.cells).all(|(g, q)| {
            shadow(g, self.r)
                .map(|s| s.is_subset(model, q))
                .unwrap_or(false)
        })
    }

    /// The smallest `C` with `C⁻¹ ≤ |S*| e^{-αNR} ≤ C`.
    pub fn count_constant(&self, model: &GroupModel) -> f64 {
        let t = self.len() as f64 * (-model.alpha * self.n as f64 * self.r_shell).exp();
        t.max(1.0 / t)
    }

    /// The smallest `C` in the two-sided comparison of `‖v‖₂` with `(Σ|d_g|²)^{1/2}/|S*|^{1/2}`.
    pub fn norm_constant(&self, mu: &PSMeasure) -> f64 {
        let s = self.len() as f64;
        self.cells
            .iter()
            .map(|c| {
                let t = (mu.measure(c) * s).sqrt();
                t.max(1.0 / t)
            })
            .fold(1.0, f64::max)
    }
}

/// Ball selection followed by disjointification, in lexicographic order.
pub fn vitali_cover(mu: &PSMeasure, n: usize, r_shell: f64, r: f64) -> Result<CoverFamily> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadius(r));
    }
    if !(r_shell > 0.0) {
        return Err(Error::NonPositiveRadius(r_shell));
    }
    let model = mu.model;
    let eps = mu.epsilon;
    let nr = n as f64 * r_shell;
    let depth_of = |t: f64| t.ceil().max(0.0) as usize;
    let resolution = depth_of(nr - r);
    let star_depth = depth_of(nr - r - 5f64.ln() / eps);

    let mut selected = Vec::new();
    let mut taken = std::collections::HashSet::new();
    for g in model.sphere_enum(n, r_shell) {
        let theta = boundary_extension(&g);
        let ball = theta.truncate(resolution);
        if taken.insert(ball) {
            selected.push(g);
        }
    }

    let size = model.sphere_size(resolution);
    let mut ball_of = vec![None; size];
    for (j, g) in selected.iter().enumerate() {
        let b = boundary_extension(g).truncate(resolution);
        ball_of[model.index_of(&b.0)] = Some(j);
    }
    let mut owner: Vec<Option<usize>> = vec![None; size];
    for (k, g) in selected.iter().enumerate() {
        let star = boundary_extension(g).truncate(star_depth);
        for i in descendant_range(&model, &star.0, resolution) {
            let later_ball = ball_of[i].is_some_and(|j| j > k);
            if owner[i].is_none() && !later_ball {
                owner[i] = Some(k);
            }
        }
    }
    let mut parts: Vec<Vec<Word>> = vec![Vec::new(); selected.len()];
    for (i, o) in owner.iter().enumerate() {
        if let Some(k) = o {
            parts[*k].push(model.word_at(resolution, i));
        }
    }
    let cells = parts.into_iter().map(CylinderUnion::from_prefixes).collect();
    Ok(CoverFamily {
        n,
        r_shell,
        r,
        resolution,
        selected,
        cells,
        owner,
    })
}

/// Result of [`covering_multiplicity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multiplicity {
    pub max_overlap: usize,
    pub covers: bool,
}

/// `max_g |{h ∈ S_{N,R} : O_r(h) ∩ O_r(g) ≠ ∅}|` together with the covering predicate.
pub fn covering_multiplicity(mu: &PSMeasure, n: usize, r_shell: f64, r: f64) -> Result<Multiplicity> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadius(r));
    }
    let words: Vec<Word> = mu.model.sphere_enum(n, r_shell).collect();
    let shadows: Vec<Cylinder> = words
        .iter()
        .map(|g| {
            shadow(g, r).map(|u| u.cylinders().next().unwrap_or_else(Cylinder::whole))
        })
        .collect::<Result<_>>()?;
    let max_overlap = shadows
        .par_iter()
        .map(|a| shadows.iter().filter(|b| !a.is_disjoint(b)).count())
        .max()
        .unwrap_or(0);
    let union = CylinderUnion::from_prefixes(shadows.into_iter().map(|c| c.prefix).collect());
    let covers = (mu.measure(&union) - 1.0).abs() < 1e-12;
    Ok(Multiplicity {
        max_overlap,
        covers,
    })
}

/// `|W_{N,R}(U)|`, the number of cover cells meeting `U`.
pub fn counting_w(model: &GroupModel, cover: &CoverFamily, u: &CylinderUnion) -> usize {
    cover.cells_meeting(model, u).len()
}

/// One row of the sampling report.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SamplingRow {
    pub gamma: String,
    pub k: usize,
    #[serde(rename = "diamU")]
    pub diam_u: f64,
    #[serde(rename = "boundU")]
    pub bound_u: f64,
    #[serde(rename = "diamV")]
    pub diam_v: f64,
    #[serde(rename = "boundV")]
    pub bound_v: f64,
    pub m_count: usize,
}

/// Multiplicities and counting constants over all `γ ∈ S_{n,R}` and `k`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SamplingReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    #[serde(rename = "R")]
    pub r_shell: f64,
    pub rows: Vec<SamplingRow>,
    /// `max |S^Γ_{k,n-k,N}(γ₀)|`.
    pub m: usize,
    /// Overlap multiplicity of the `W` family for `k ≤ ⌊n/2⌋` and of the `W̃` family for `k > ⌊n/2⌋`.
    pub n_mult: usize,
    /// Overlap multiplicity of the `W̃` family at `k = ⌊n/2⌋`.
    pub n_mult_mid: usize,
    /// Largest `|W_{N,k}(γ,h)| e^{-αRp}` with `p = max(n-2k, 0)`, and likewise for `W̃` with `p = max(2k-n, 0)`.
    pub counting_constant: f64,
    /// Largest `Diam/bound` over all `U` and `V` cells.
    pub diameter_ratio: f64,
}

struct CellData {
    s_nk: Vec<u64>,
    s_tilde: Vec<u64>,
    diam_u: f64,
    diam_v: f64,
    w_max: usize,
    wt_max: usize,
    n_mult: usize,
    n_mult_mid: usize,
}

fn bitset(len: usize, items: &[usize]) -> Vec<u64> {
    let mut b = vec![0u64; len.div_ceil(64)];
    for &i in items {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

fn bits_meet(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Largest number of members whose sets meet a given member's set (empty sets excluded).
fn overlap_multiplicity(sets: &[Vec<usize>], universe: usize) -> usize {
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); universe];
    for (h, s) in sets.iter().enumerate() {
        for &g in s {
            holders[g].push(h);
        }
    }
    let mut seen = vec![usize::MAX; sets.len()];
    let mut best = 0;
    for (h0, s) in sets.iter().enumerate() {
        let mut count = 0;
        for &g in s {
            for &h in &holders[g] {
                if seen[h] != h0 {
                    seen[h] = h0;
                    count += 1;
                }
            }
        }
        best = best.max(count);
    }
    best
}

fn cell_data(
    model: &GroupModel,
    eps: f64,
    cover: &CoverFamily,
    p: &HoroPartition,
    k: usize,
) -> CellData {
    let gamma = &p.gamma;
    let ginv = gamma.inverse();
    let a_k = &p.cells[k - 1];
    let universe = cover.len();
    let mut diam_u: f64 = 0.0;
    let mut diam_v: f64 = 0.0;
    let mut w_sets = Vec::with_capacity(universe);
    let mut wt_sets = Vec::with_capacity(universe);
    for q in &cover.cells {
        let u = a_k.intersect(&q.translate(model, gamma));
        diam_u = diam_u.max(u.diameter(eps));
        w_sets.push(cover.cells_meeting(model, &u));
        let v = a_k.intersect(q).translate(model, &ginv);
        diam_v = diam_v.max(v.diameter(eps));
        wt_sets.push(cover.cells_meeting(model, &v));
    }
    let half = p.n / 2;
    let mut n_mult = 0;
    let mut n_mult_mid = 0;
    if k <= half {
        n_mult = overlap_multiplicity(&w_sets, universe);
    }
    if k > half {
        n_mult = overlap_multiplicity(&wt_sets, universe);
    }
    if k == half {
        n_mult_mid = overlap_multiplicity(&wt_sets, universe);
    }
    let s_nk = cover.cells_meeting(model, a_k);
    let s_tilde = cover.cells_meeting(model, &a_k.translate(model, &ginv));
    CellData {
        s_nk: bitset(universe, &s_nk),
        s_tilde: bitset(universe, &s_tilde),
        diam_u,
        diam_v,
        w_max: w_sets.iter().map(Vec::len).max().unwrap_or(0),
        wt_max: wt_sets.iter().map(Vec::len).max().unwrap_or(0),
        n_mult,
        n_mult_mid,
    }
}

/// Diameters, sampling multiplicity `𝔪` and overlap multiplicity `𝔫` for `γ ∈ S_{n,R}`.
pub fn sampling_report(mu: &PSMeasure, cover: &CoverFamily, n: usize) -> Result<SamplingReport> {
    let big_n = cover.n;
    if big_n <= n {
        return Err(Error::DepthOrderViolation {
            depth: big_n,
            bound: n,
        });
    }
    let model = mu.model;
    let eps = mu.epsilon;
    let r = cover.r_shell;
    let gammas: Vec<Word> = model.sphere_enum(n, r).collect();
    let partitions: Vec<HoroPartition> = gammas
        .iter()
        .map(|g| horo_partition(&model, g, r))
        .collect::<Result<_>>()?;
    let data: Vec<Vec<CellData>> = partitions
        .par_iter()
        .map(|p| {
            (1..=p.n)
                .map(|k| cell_data(&model, eps, cover, p, k))
                .collect()
        })
        .collect();

    let mut rows = Vec::new();
    let mut m = 0;
    let mut n_mult = 0;
    let mut n_mult_mid = 0;
    let mut counting_constant: f64 = 0.0;
    let mut diameter_ratio: f64 = 0.0;
    for (i, p) in partitions.iter().enumerate() {
        for k in 1..=p.n {
            let d = &data[i][k - 1];
            let m_count = partitions
                .iter()
                .enumerate()
                .filter(|(j, q)| {
                    q.n >= k
                        && bits_meet(&d.s_nk, &data[*j][k - 1].s_nk)
                        && bits_meet(&d.s_tilde, &data[*j][k - 1].s_tilde)
                })
                .count();
            let span = (p.n as f64 - 2.0 * k as f64) * r;
            let bound_u = (eps * span - eps * big_n as f64 * r).exp();
            let bound_v = (-eps * span - eps * big_n as f64 * r).exp();
            m = m.max(m_count);
            n_mult = n_mult.max(d.n_mult);
            n_mult_mid = n_mult_mid.max(d.n_mult_mid);
            counting_constant = counting_constant
                .max(d.w_max as f64 * (-model.alpha * span.max(0.0)).exp())
                .max(d.wt_max as f64 * (-model.alpha * (-span).max(0.0)).exp());
            diameter_ratio = diameter_ratio
                .max(d.diam_u / bound_u)
                .max(d.diam_v / bound_v);
            rows.push(SamplingRow {
                gamma: p.gamma.to_string(),
                k,
                diam_u: d.diam_u,
                bound_u,
                diam_v: d.diam_v,
                bound_v,
                m_count,
            });
        }
    }
    Ok(SamplingReport {
        n,
        big_n,
        r_shell: r,
        rows,
        m,
        n_mult,
        n_mult_mid,
        counting_constant,
        diameter_ratio,
    })
}
