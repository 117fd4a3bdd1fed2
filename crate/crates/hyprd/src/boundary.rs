//! The boundary of `F_k` as cylinder sets, with its Patterson-Sullivan measure,
//! visual metric, Busemann cocycle and horospherical partition.

use crate::error::{Error, Result};
use crate::group::{boundary_extension, common_prefix, multiply, BoundaryPoint, GroupModel, Word};

/// The cylinder `C_w` of infinite reduced words starting with `w`. The empty prefix is `∂X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub prefix: Word,
}

impl Cylinder {
    pub fn new(prefix: Word) -> Self {
        Cylinder { prefix }
    }

    pub fn whole() -> Self {
        Cylinder {
            prefix: Word::identity(),
        }
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    pub fn contains(&self, xi: &BoundaryPoint) -> bool {
        xi.truncate(self.depth()) == self.prefix
    }

    pub fn contains_cylinder(&self, other: &Cylinder) -> bool {
        other.prefix.starts_with(&self.prefix)
    }

    pub fn is_disjoint(&self, other: &Cylinder) -> bool {
        !self.contains_cylinder(other) && !other.contains_cylinder(self)
    }

    /// Sub-cylinders one level down.
    pub fn children(&self, model: &GroupModel) -> Vec<Cylinder> {
        model
            .successors(self.prefix.last())
            .map(|l| Cylinder::new(self.prefix.pushed(l)))
            .collect()
    }

    /// The image `g·C_w` as a disjoint union of cylinders.
    pub fn translate(&self, model: &GroupModel, g: &Word) -> Vec<Cylinder> {
        if self.prefix.is_empty() {
            return vec![Cylinder::whole()];
        }
        let gw = multiply(g, &self.prefix);
        let cancelled = (g.len() + self.depth() - gw.len()) / 2;
        if cancelled < self.depth() {
            vec![Cylinder::new(gw)]
        } else {
            self.children(model)
                .iter()
                .flat_map(|c| c.translate(model, g))
                .collect()
        }
    }
}

/// A finite union of cylinders stored as a lexicographically sorted antichain.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CylinderUnion {
    prefixes: Vec<Word>,
}

impl CylinderUnion {
    pub fn empty() -> Self {
        CylinderUnion::default()
    }

    pub fn whole() -> Self {
        CylinderUnion {
            prefixes: vec![Word::identity()],
        }
    }

    pub fn single(c: Cylinder) -> Self {
        CylinderUnion {
            prefixes: vec![c.prefix],
        }
    }

    /// Build from arbitrary prefixes, discarding those already covered by a shorter one.
    pub fn from_prefixes(mut prefixes: Vec<Word>) -> Self {
        prefixes.sort();
        prefixes.dedup();
        let mut out: Vec<Word> = Vec::with_capacity(prefixes.len());
        for p in prefixes {
            // Sorted order puts a prefix right before its extensions.
            if out.last().is_some_and(|q| p.starts_with(q)) {
                continue;
            }
            out.push(p);
        }
        CylinderUnion { prefixes: out }
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.prefixes
    }

    pub fn cylinders(&self) -> impl Iterator<Item = Cylinder> + '_ {
        self.prefixes.iter().cloned().map(Cylinder::new)
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn max_depth(&self) -> usize {
        self.prefixes.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn contains_point(&self, xi: &BoundaryPoint) -> bool {
        self.cylinders().any(|c| c.contains(xi))
    }

    pub fn meets(&self, c: &Cylinder) -> bool {
        self.cylinders().any(|d| !d.is_disjoint(c))
    }

    /// Whether `C ⊆ self`, splitting `C` into children when it is shallower than the union.
    pub fn contains_cylinder(&self, model: &GroupModel, c: &Cylinder) -> bool {
        if self.prefixes.iter().any(|p| c.prefix.starts_with(p)) {
            return true;
        }
        if c.depth() >= self.max_depth() || !self.meets(c) {
            return false;
        }
        c.children(model)
            .iter()
            .all(|d| self.contains_cylinder(model, d))
    }

    pub fn is_subset(&self, model: &GroupModel, other: &CylinderUnion) -> bool {
        self.cylinders().all(|c| other.contains_cylinder(model, &c))
    }

    pub fn union(&self, other: &CylinderUnion) -> CylinderUnion {
        let mut all = self.prefixes.clone();
        all.extend(other.prefixes.iter().cloned());
        CylinderUnion::from_prefixes(all)
    }

    pub fn intersect(&self, other: &CylinderUnion) -> CylinderUnion {
        let mut out = Vec::new();
        for p in &self.prefixes {
            for q in &other.prefixes {
                if q.starts_with(p) {
                    out.push(q.clone());
                } else if p.starts_with(q) {
                    out.push(p.clone());
                }
            }
        }
        CylinderUnion::from_prefixes(out)
    }

    pub fn is_disjoint(&self, other: &CylinderUnion) -> bool {
        self.intersect(other).is_empty()
    }

    /// The image under left multiplication by `g`.
    pub fn translate(&self, model: &GroupModel, g: &Word) -> CylinderUnion {
        let parts = self
            .cylinders()
            .flat_map(|c| c.translate(model, g))
            .map(|c| c.prefix)
            .collect();
        CylinderUnion::from_prefixes(parts)
    }

    /// Rewrite every cylinder shallower than `depth` as its descendants at `depth`.
    pub fn refine(&self, model: &GroupModel, depth: usize) -> CylinderUnion {
        let mut out = Vec::new();
        let mut stack: Vec<Cylinder> = self.cylinders().collect();
        while let Some(c) = stack.pop() {
            if c.depth() >= depth {
                out.push(c.prefix);
            } else {
                stack.extend(c.children(model));
            }
        }
        CylinderUnion::from_prefixes(out)
    }

    /// Visual diameter `sup d_o(ξ, η)` over the union.
    pub fn diameter(&self, epsilon: f64) -> f64 {
        match self.prefixes.len() {
            0 => 0.0,
            1 => (-epsilon * self.prefixes[0].len() as f64).exp(),
            _ => {
                let first = &self.prefixes[0];
                let lcp = self.prefixes[1..]
                    .iter()
                    .map(|p| common_prefix(&first.0, &p.0))
                    .min()
                    .unwrap_or(0);
                (-epsilon * lcp as f64).exp()
            }
        }
    }
}

/// The normalized Patterson-Sullivan measure on `∂F_k` with visual parameter `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PSMeasure {
    pub model: GroupModel,
    pub epsilon: f64,
}

impl PSMeasure {
    pub fn new(model: GroupModel, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "visual parameter epsilon = {epsilon} must be positive"
            )));
        }
        Ok(PSMeasure { model, epsilon })
    }

    pub fn alpha(&self) -> f64 {
        self.model.alpha
    }

    /// Hausdorff dimension `D = α/ε`.
    pub fn dimension(&self) -> f64 {
        self.model.alpha / self.epsilon
    }

    pub fn depth_measure(&self, depth: usize) -> f64 {
        self.model.sphere_weight(depth)
    }

    pub fn cyl_measure(&self, c: &Cylinder) -> f64 {
        self.depth_measure(c.depth())
    }

    pub fn measure(&self, u: &CylinderUnion) -> f64 {
        u.prefixes().iter().map(|p| self.depth_measure(p.len())).sum()
    }

    /// Closed ball `{η : d_o(ξ, η) ≤ ρ}`, a cylinder around `ξ`.
    pub fn ball(&self, xi: &BoundaryPoint, radius: f64) -> Cylinder {
        let depth = (-radius.ln() / self.epsilon).ceil().max(0.0) as usize;
        Cylinder::new(xi.truncate(depth))
    }

    /// The smallest `C` with `C⁻¹ρ^D ≤ ν(B(ξ,ρ)) ≤ Cρ^D` over radii `e^{-εm}`, `m ≤ m_max`.
    pub fn ahlfors_constant(&self, m_max: usize) -> f64 {
        let xi = boundary_extension(&Word::identity());
        (0..=m_max)
            .map(|m| {
                let rho = (-self.epsilon * m as f64).exp();
                let ratio = self.cyl_measure(&self.ball(&xi, rho)) / rho.powf(self.dimension());
                ratio.max(1.0 / ratio)
            })
            .fold(1.0, f64::max)
    }
}

/// `(ξ, w)_o` for every `ξ` in `c`, when it does not depend on `ξ`.
pub fn gromov_cyl(w: &Word, c: &Cylinder) -> Result<usize> {
    let l = common_prefix(&w.0, &c.prefix.0);
    if l == c.depth() && l < w.len() {
        Err(Error::AmbiguousStratum)
    } else {
        Ok(l)
    }
}

/// `β_ξ(o, γo) = 2(ξ, γ)_o − |γ|` on the cylinder.
pub fn busemann(c: &Cylinder, gamma: &Word) -> Result<f64> {
    Ok(2.0 * gromov_cyl(gamma, c)? as f64 - gamma.len() as f64)
}

/// `dγ_*ν/dν = e^{αβ}` on the cylinder.
pub fn rn_derivative(model: &GroupModel, gamma: &Word, c: &Cylinder) -> Result<f64> {
    Ok((model.alpha * busemann(c, gamma)?).exp())
}

pub fn visual_distance(x: &BoundaryPoint, y: &BoundaryPoint, epsilon: f64) -> f64 {
    match x.gromov(y) {
        None => 0.0,
        Some(p) => (-epsilon * p as f64).exp(),
    }
}

/// The shadow `O_r(o, x) = {ξ : (ξ, x)_o ≥ |x| − r}`.
pub fn shadow(x: &Word, r: f64) -> Result<CylinderUnion> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    let t = (x.len() as f64 - r).ceil().max(0.0) as usize;
    Ok(CylinderUnion::single(Cylinder::new(Word(x.0[..t].to_vec()))))
}

/// Boundary points whose Gromov product with `γ` is exactly `j`.
pub fn stratum(model: &GroupModel, gamma: &Word, j: usize) -> CylinderUnion {
    let n = gamma.len();
    assert!(j <= n, "stratum {j} beyond |γ| = {n}");
    if j == n {
        return CylinderUnion::single(Cylinder::new(gamma.clone()));
    }
    let base = Word(gamma.0[..j].to_vec());
    let avoid = gamma.0[j];
    let parts = model
        .successors(base.last())
        .filter(|&l| l != avoid)
        .map(|l| base.pushed(l))
        .collect();
    CylinderUnion::from_prefixes(parts)
}

/// `ν{ξ : (ξ, γ)_o = j}` for `j = 0..=n`, depending only on `n = |γ|`.
pub fn stratum_measures(model: &GroupModel, n: usize) -> Vec<f64> {
    let cyl = |d: usize| model.sphere_weight(d);
    (0..=n)
        .map(|j| if j == n { cyl(n) } else { cyl(j) - cyl(j + 1) })
        .collect()
}

/// The cells `A_{1,R}(γ), ..., A_{n,R}(γ)` with `nR ≤ |γ| < (n+1)R`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoroPartition {
    pub gamma: Word,
    pub r: f64,
    pub n: usize,
    /// `strata[k-1]` lists the Gromov products `j` making up `A_k`.
    pub strata: Vec<Vec<usize>>,
    pub cells: Vec<CylinderUnion>,
}

impl HoroPartition {
    pub fn cell(&self, k: usize) -> Option<&CylinderUnion> {
        k.checked_sub(1).and_then(|i| self.cells.get(i))
    }

    /// Index of the cell holding points with `(ξ, γ)_o = j`.
    pub fn cell_of(&self, j: usize) -> usize {
        cell_index(j, self.n, self.r)
    }
}

fn cell_index(j: usize, n: usize, r: f64) -> usize {
    let t = j as f64;
    if t < 2.0 * r {
        1
    } else if t >= n as f64 * r {
        n
    } else {
        (t / r).floor() as usize
    }
}

pub fn horo_partition(model: &GroupModel, gamma: &Word, r: f64) -> Result<HoroPartition> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    let len = gamma.len();
    if (len as f64) < 2.0 * r {
        return Err(Error::GammaTooShort { len, min: 2.0 * r });
    }
    let n = (len as f64 / r).floor() as usize;
    let mut strata = vec![Vec::new(); n];
    for j in 0..=len {
        strata[cell_index(j, n, r) - 1].push(j);
    }
    let cells = strata
        .iter()
        .map(|js| {
            let parts = js
                .iter()
                .flat_map(|&j| stratum(model, gamma, j).prefixes().to_vec())
                .collect();
            CylinderUnion::from_prefixes(parts)
        })
        .collect();
    Ok(HoroPartition {
        gamma: gamma.clone(),
        r,
        n,
        strata,
        cells,
    })
}

/// Lower and upper Busemann bounds on `A_{k,R}(γ)` for the cell count `n`.
pub fn busemann_cell_bounds(k: usize, n: usize, r: f64) -> (f64, f64) {
    let (k, n) = (k as f64, n as f64);
    if k == 1.0 {
        (-n * r - r, -n * r + 2.0 * r)
    } else if k == n {
        (n * r - r, n * r + r)
    } else {
        ((2.0 * k - n) * r - r, (2.0 * k - n) * r + r)
    }
}

/// Largest violation of the cell-wise Busemann bounds, cylinder by cylinder (`≤ 0` means they hold).
pub fn busemann_cell_violation(p: &HoroPartition) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for (i, cell) in p.cells.iter().enumerate() {
        let (lo, hi) = busemann_cell_bounds(i + 1, p.n, p.r);
        for c in cell.cylinders() {
            let b = busemann(&c, &p.gamma)?;
            worst = worst.max(lo - b).max(b - hi);
        }
    }
    Ok(worst)
}

/// Checks `γ⁻¹A_k(γ) ⊆ A_{n-k-1}(γ⁻¹) ∪ A_{n-k}(γ⁻¹)` for `2 ≤ k < n` and `γ⁻¹A_n(γ) ⊆ A_1(γ⁻¹)`.
pub fn inverse_cells_contained(model: &GroupModel, p: &HoroPartition) -> Result<bool> {
    let ginv = p.gamma.inverse();
    let q = horo_partition(model, &ginv, p.r)?;
    let target = |idx: &[usize]| {
        idx.iter()
            .filter_map(|&i| q.cell(i))
            .fold(CylinderUnion::empty(), |acc, c| acc.union(c))
    };
    for k in 2..=p.n {
        let image = p.cells[k - 1].translate(model, &ginv);
        let allowed = if k == p.n {
            target(&[1])
        } else {
            target(&[p.n - k - 1, p.n - k])
        };
        if !image.is_subset(model, &allowed) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The smallest `C` with `C⁻¹e^{-αkR} ≤ ν(A_k) ≤ Ce^{-αkR}` over the cells.
pub fn cell_ahlfors_constant(mu: &PSMeasure, p: &HoroPartition) -> f64 {
    p.cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let ratio = mu.measure(c) * (mu.alpha() * (i + 1) as f64 * p.r).exp();
            ratio.max(1.0 / ratio)
        })
        .fold(1.0, f64::max)
}
