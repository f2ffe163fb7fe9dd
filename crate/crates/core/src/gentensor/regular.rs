//! Outer part h < r < δ of each entry by tensor Gauss–Legendre quadrature.

use crate::bspline::cubic;
use crate::error::Result;
use crate::gentensor::{QuadConfig, RadialPanels};
use crate::kernel::KernelSpec;
use crate::quadrature::{gauss_legendre_on, sector_directions, Direction};

struct Panel {
    lo: f64,
    hi: f64,
    /// (ρ, weight·ρ^(−1−α)) with ρ = r/h
    nodes: Vec<(f64, f64)>,
}

/// Quadrature points for the regular part, shared by all offsets of one assembly.
pub struct RegularRule {
    d: usize,
    scale: f64,
    panels: Vec<Panel>,
    dirs: Vec<Direction>,
}

impl RegularRule {
    pub fn new(kernel: &KernelSpec, h: f64, quad: &QuadConfig) -> Result<Self> {
        quad.validate()?;
        let d = kernel.d;
        let alpha = kernel.alpha;
        let top = kernel.delta / h;
        let mut bounds = Vec::new();
        if top > 1.0 {
            match quad.radial_panels {
                RadialPanels::SingleInterval => bounds.push((1.0, top)),
                RadialPanels::UnitShells => {
                    let mut lo = 1.0;
                    while lo < top {
                        let hi = (lo + 1.0).min(top);
                        if hi - lo > 1e-12 {
                            bounds.push((lo, hi));
                        }
                        lo += 1.0;
                    }
                }
            }
        }
        let panels = bounds
            .into_iter()
            .map(|(lo, hi)| {
                let nodes = gauss_legendre_on(quad.n_radial, lo, hi)?
                    .into_iter()
                    .map(|(rho, w)| (rho, w * rho.powf(-1.0 - alpha)))
                    .collect();
                Ok(Panel { lo, hi, nodes })
            })
            .collect::<Result<Vec<_>>>()?;
        let dirs = if panels.is_empty() { Vec::new() } else { sector_directions(d, quad.n_angular)? };
        let scale = 0.5 * h.powi(d as i32) * kernel.c * h.powf(-alpha);
        Ok(RegularRule { d, scale, panels, dirs })
    }

    /// Regular part of t_k. Panels on which f_k vanishes identically are skipped.
    pub fn entry(&self, k: &[usize]) -> f64 {
        assert_eq!(k.len(), self.d);
        let kmax = *k.iter().max().unwrap_or(&0) as f64;
        let reach = k.iter().map(|&kj| (kj as f64 + 2.0).powi(2)).sum::<f64>().sqrt();
        let t0: Vec<f64> = k.iter().map(|&kj| kj as f64 + 2.0).collect();
        let base = 2.0 * t0.iter().map(|&t| cubic(t)).product::<f64>();
        let mut total = 0.0;
        for panel in &self.panels {
            if base == 0.0 && (panel.hi <= kmax - 2.0 || panel.lo >= reach) {
                continue;
            }
            let mut sum = 0.0;
            for &(rho, wr) in &panel.nodes {
                let mut inner = 0.0;
                for dir in &self.dirs {
                    let mut minus = 1.0;
                    let mut plus = 1.0;
                    for (&t, &u) in t0.iter().zip(&dir.u).take(self.d) {
                        let s = rho * u;
                        minus *= cubic(t - s);
                        plus *= cubic(t + s);
                    }
                    inner += dir.w * (base - minus - plus);
                }
                sum += wr * inner;
            }
            total += sum;
        }
        self.scale * total
    }
}

/// Regular part (h^d/2)·∫_h^δ ∫_{S^{d−1}} f_k ρ(r) r^{d−1} dσ dr; zero when δ ≤ h.
pub fn regular_part(k: &[usize], kernel: &KernelSpec, h: f64, quad: &QuadConfig) -> Result<f64> {
    if k.len() != kernel.d {
        return Err(crate::Error::DimensionMismatch { expected: kernel.d, actual: k.len() });
    }
    Ok(RegularRule::new(kernel, h, quad)?.entry(k))
}

/// Which node count a quadrature study varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadAxis {
    Radial,
    Angular,
}

impl QuadAxis {
    pub fn name(self) -> &'static str {
        match self {
            QuadAxis::Radial => "radial",
            QuadAxis::Angular => "angular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadStudyRow {
    pub axis: QuadAxis,
    pub n: usize,
    pub value: f64,
    pub error: f64,
}

/// Error of the regular part of t_k against an `n_ref`-node reference while one
/// node count varies over `ns` and the other stays at `n_fixed`.
pub fn quadrature_study(
    k: &[usize],
    kernel: &KernelSpec,
    h: f64,
    axis: QuadAxis,
    ns: &[usize],
    n_fixed: usize,
    n_ref: usize,
) -> Result<Vec<QuadStudyRow>> {
    let config = |n: usize| match axis {
        QuadAxis::Radial => QuadConfig { n_radial: n, n_angular: n_fixed, radial_panels: RadialPanels::SingleInterval },
        QuadAxis::Angular => QuadConfig { n_radial: n_fixed, n_angular: n, radial_panels: RadialPanels::SingleInterval },
    };
    let reference = regular_part(k, kernel, h, &config(n_ref))?;
    ns.iter()
        .map(|&n| {
            let value = regular_part(k, kernel, h, &config(n))?;
            Ok(QuadStudyRow { axis, n, value, error: (value - reference).abs() })
        })
        .collect()
}

/// Log-log slope of error against node count, fitted over the rows up to and
/// including the first one whose error drops below `floor` (the roundoff
/// plateau starts after it). `None` with fewer than two usable rows.
pub fn pre_plateau_slope(rows: &[QuadStudyRow], floor: f64) -> Option<f64> {
    let end = rows.iter().position(|r| r.error < floor).map_or(rows.len(), |i| i + 1);
    let used: Vec<&QuadStudyRow> = rows[..end].iter().filter(|r| r.error > 0.0).collect();
    if used.len() < 2 {
        return None;
    }
    let x: Vec<f64> = used.iter().map(|r| r.n as f64).collect();
    let y: Vec<f64> = used.iter().map(|r| r.error).collect();
    Some(crate::solver::fitted_slope(&x, &y))
}
