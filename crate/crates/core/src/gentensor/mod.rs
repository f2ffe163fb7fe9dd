//! Generating tensor of the nonlocal stiffness matrix.
//!
//! Entry t_k, for the node offset k = |n − m| taken componentwise, is
//! (h^d/2)·∫_{B_δ} f_k(s) ρ(|s|) ds with
//! f_k(s) = 2∏B₃(k_j+2) − ∏B₃(k_j+2−s_j/h) − ∏B₃(k_j+2+s_j/h).
//! The radial integral is split at r = h: the inner piece is integrated
//! exactly, the outer piece with tensor Gauss–Legendre rules.

mod cache;
mod classical;
mod closed_form;
mod regular;
mod singular;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bspline::cubic;
use crate::error::{invalid, Result};
use crate::kernel::KernelSpec;

pub use cache::{load_tensor, read_tensor, save_tensor, write_tensor};
pub use classical::classical_generating_tensor;
pub use closed_form::{closed_form_integrand_2d, closed_form_table_2d, closed_form_table_3d};
pub use regular::{pre_plateau_slope, quadrature_study, regular_part, QuadAxis, QuadStudyRow, RegularRule};
pub use singular::singular_part;

/// Radial panel layout for the regular part on (h, δ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialPanels {
    /// One Gauss–Legendre panel on (h, δ).
    SingleInterval,
    /// Panels (jh, (j+1)h), the last one clipped at δ.
    UnitShells,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    pub n_radial: usize,
    pub n_angular: usize,
    pub radial_panels: RadialPanels,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { n_radial: 64, n_angular: 64, radial_panels: RadialPanels::SingleInterval }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_radial < 2 || self.n_angular < 2 {
            return invalid("quadrature node counts must be at least 2");
        }
        Ok(())
    }
}

/// Symmetry-reduced stiffness entries stored as a full B^d block,
/// column-major (first offset index fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingTensor {
    pub d: usize,
    /// Grid size per dimension the tensor was assembled for.
    pub n: usize,
    pub band: usize,
    pub h: f64,
    /// `None` for the classical (local) tensor.
    pub kernel: Option<KernelSpec>,
    entries: Vec<f64>,
}

impl GeneratingTensor {
    pub fn from_entries(
        d: usize,
        n: usize,
        band: usize,
        h: f64,
        kernel: Option<KernelSpec>,
        entries: Vec<f64>,
    ) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return invalid(format!("dimension {d} not supported"));
        }
        if entries.len() != band.pow(d as u32) {
            return Err(crate::Error::DimensionMismatch { expected: band.pow(d as u32), actual: entries.len() });
        }
        Ok(GeneratingTensor { d, n, band, h, kernel, entries })
    }

    /// Builds the full block from a function of sorted offsets (k₁ ≥ k₂ ≥ …).
    pub fn from_sorted_fn(
        d: usize,
        n: usize,
        band: usize,
        h: f64,
        kernel: Option<KernelSpec>,
        f: impl Fn(&[usize]) -> f64,
    ) -> Result<Self> {
        let entries = (0..band.pow(d as u32))
            .map(|idx| f(&sorted_desc(&unflatten(idx, d, band))))
            .collect();
        Self::from_entries(d, n, band, h, kernel, entries)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// t_k for nonnegative offsets; zero outside the band.
    pub fn get(&self, k: &[usize]) -> f64 {
        assert_eq!(k.len(), self.d);
        if k.iter().any(|&kj| kj >= self.band) {
            return 0.0;
        }
        self.entries[flatten(k, self.band)]
    }

    /// Maximum entrywise deviation, treating missing offsets as zero.
    pub fn max_abs_diff(&self, other: &GeneratingTensor) -> f64 {
        assert_eq!(self.d, other.d);
        let b = self.band.max(other.band);
        (0..b.pow(self.d as u32))
            .map(|idx| {
                let k = unflatten(idx, self.d, b);
                (self.get(&k) - other.get(&k)).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn flatten(k: &[usize], band: usize) -> usize {
    k.iter().rev().fold(0, |acc, &kj| acc * band + kj)
}

pub(crate) fn unflatten(mut idx: usize, d: usize, band: usize) -> Vec<usize> {
    (0..d)
        .map(|_| {
            let kj = idx % band;
            idx /= band;
            kj
        })
        .collect()
}

fn sorted_desc(k: &[usize]) -> Vec<usize> {
    let mut s = k.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

/// Offsets k₁ ≥ k₂ ≥ … ≥ k_d with k₁ < band.
pub fn sorted_offsets(d: usize, band: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(d: usize, upper: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in 0..upper {
            cur.push(v);
            rec(d, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(d, band, &mut cur, &mut out);
    out
}

/// Number of stored offsets per dimension: min(N, ⌊δ/h⌋ + 3).
pub fn band_size(n: usize, h: f64, delta: f64) -> usize {
    let ratio = delta / h;
    let fl = (ratio * (1.0 + 1e-12)).floor() as usize;
    n.min(fl + 3)
}

/// f_k(σ) with σ = s/h.
pub fn integrand_fk(k: &[usize], sigma: &[f64]) -> f64 {
    assert_eq!(k.len(), sigma.len());
    let mut base = 2.0;
    let mut minus = 1.0;
    let mut plus = 1.0;
    for (&kj, &sj) in k.iter().zip(sigma) {
        let t0 = kj as f64 + 2.0;
        base *= cubic(t0);
        minus *= cubic(t0 - sj);
        plus *= cubic(t0 + sj);
    }
    base - minus - plus
}

/// Unit direction for polar (d = 2: [θ]) or spherical (d = 3: [θ, φ]) angles.
pub fn direction(angles: &[f64]) -> Vec<f64> {
    match angles.len() {
        1 => vec![angles[0].cos(), angles[0].sin()],
        2 => {
            let (st, ct) = angles[0].sin_cos();
            let (sp, cp) = angles[1].sin_cos();
            vec![st * cp, st * sp, ct]
        }
        n => panic!("expected 1 or 2 angles, got {n}"),
    }
}

/// f_k at s = r·(unit direction), with σ = s/h.
pub fn integrand_fk_polar(k: &[usize], r: f64, angles: &[f64], h: f64) -> f64 {
    let u = direction(angles);
    assert_eq!(u.len(), k.len(), "angle count must be d − 1");
    let sigma: Vec<f64> = u.iter().map(|x| x * r / h).collect();
    integrand_fk(k, &sigma)
}

/// Assembles t_k = singular + regular part over the sorted offsets within the
/// band and expands the result by permutation symmetry.
pub fn assemble_generating_tensor(
    d: usize,
    n: usize,
    h: f64,
    kernel: &KernelSpec,
    quad: &QuadConfig,
) -> Result<GeneratingTensor> {
    if kernel.d != d {
        return invalid(format!("kernel dimension {} does not match d = {d}", kernel.d));
    }
    if n < 1 {
        return invalid("grid size N must be at least 1");
    }
    if !(h.is_finite() && h > 0.0) {
        return invalid(format!("mesh size h = {h} must be positive"));
    }
    quad.validate()?;
    let band = band_size(n, h, kernel.delta);
    let offsets = sorted_offsets(d, band);
    let rule = RegularRule::new(kernel, h, quad)?;
    let values: Vec<f64> = offsets
        .par_iter()
        .map(|k| singular_part(k, kernel, h).map(|s| s + rule.entry(k)))
        .collect::<Result<_>>()?;
    let lookup = |k: &[usize]| {
        let pos = offsets.binary_search_by(|o| o.as_slice().cmp(k));
        values[pos.expect("sorted offset present")]
    };
    GeneratingTensor::from_sorted_fn(d, n, band, h, Some(*kernel), lookup)
}
