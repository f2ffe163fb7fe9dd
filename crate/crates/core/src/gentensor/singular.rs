//! Inner part r < min(h, δ) of each entry, integrated without truncation error.
//!
//! Inside one angular sign sector every factor B₃(k_j+2 ± σ_j) with |σ_j| < 1 stays
//! on a single cubic piece, so f_k(ρu) is a polynomial in ρ = r/h whose
//! coefficients are monomials in the direction u. Monomials are integrated over
//! each sector with Beta functions and the radial moments are exact.

use std::sync::OnceLock;

use crate::bspline::cubic_taylor;
use crate::error::{invalid, Result};
use crate::kernel::KernelSpec;

const MAX_DEGREE: usize = 9;

/// Sector moments A_M = ∫_{S^{d−1}} a_M(u) dσ of the radial coefficients of f_k, M = 0..=3d.
type Moments = [f64; MAX_DEGREE + 1];

/// ∫_0^{π/2} cos^a θ sin^b θ dθ.
fn trig_moment(a: usize, b: usize) -> f64 {
    let (a, b) = (a as f64, b as f64);
    libm::tgamma(0.5 * (a + 1.0)) * libm::tgamma(0.5 * (b + 1.0)) / (2.0 * libm::tgamma(0.5 * (a + b) + 1.0))
}

/// Integral of ∏|u_j|^{m_j} over the positive sector.
fn sector_monomial(m: &[usize]) -> f64 {
    match m.len() {
        2 => trig_moment(m[0], m[1]),
        3 => trig_moment(m[0], m[1]) * trig_moment(m[2], m[0] + m[1] + 1),
        _ => unreachable!(),
    }
}

fn compute_moments(k: &[usize]) -> Moments {
    let d = k.len();
    let mut moments = [0.0; MAX_DEGREE + 1];
    for sector in 0..(1usize << d) {
        let signs: Vec<f64> = (0..d).map(|j| if sector >> j & 1 == 0 { 1.0 } else { -1.0 }).collect();
        // per axis: coefficient of ρ^m u_j^m in B₃(t0 + ρu_j) and B₃(t0 − ρu_j)
        let factors: Vec<([f64; 4], [f64; 4])> = (0..d)
            .map(|j| {
                let t0 = k[j] as i64 + 2;
                let pos = signs[j] > 0.0;
                let plus = cubic_taylor(t0, pos);
                let mut minus = cubic_taylor(t0, !pos);
                minus[1] = -minus[1];
                minus[3] = -minus[3];
                (plus, minus)
            })
            .collect();
        for combo in 0..4usize.pow(d as u32) {
            let m: Vec<usize> = (0..d).map(|j| combo / 4usize.pow(j as u32) % 4).collect();
            let mut cp = 1.0;
            let mut cm = 1.0;
            let mut sign = 1.0;
            for j in 0..d {
                cp *= factors[j].0[m[j]];
                cm *= factors[j].1[m[j]];
                if m[j] % 2 == 1 {
                    sign *= signs[j];
                }
            }
            if cp == 0.0 && cm == 0.0 {
                continue;
            }
            let deg: usize = m.iter().sum();
            moments[deg] -= (cp + cm) * sign * sector_monomial(&m);
        }
    }
    // the constant and linear terms cancel identically
    moments[0] = 0.0;
    moments[1] = 0.0;
    moments
}

fn moment_table(d: usize) -> &'static [Moments] {
    static TABLES: [OnceLock<Vec<Moments>>; 2] = [OnceLock::new(), OnceLock::new()];
    TABLES[d - 2].get_or_init(|| {
        (0..3usize.pow(d as u32))
            .map(|idx| {
                let k: Vec<usize> = (0..d).map(|j| idx / 3usize.pow(j as u32) % 3).collect();
                compute_moments(&k)
            })
            .collect()
    })
}

/// Singular part (h^d/2)·∫_0^{min(h,δ)} ∫_{S^{d−1}} f_k ρ(r) r^{d−1} dσ dr.
pub fn singular_part(k: &[usize], kernel: &KernelSpec, h: f64) -> Result<f64> {
    let d = kernel.d;
    if k.len() != d {
        return Err(crate::Error::DimensionMismatch { expected: d, actual: k.len() });
    }
    if kernel.delta.is_nan() || kernel.delta <= 0.0 {
        return invalid("horizon must be positive");
    }
    if h.is_nan() || h <= 0.0 {
        return invalid("mesh size must be positive");
    }
    if k.iter().any(|&kj| kj >= 3) {
        return Ok(0.0);
    }
    let idx = k.iter().rev().fold(0, |acc, &kj| acc * 3 + kj);
    let moments = &moment_table(d)[idx];
    let alpha = kernel.alpha;
    let rr = (kernel.delta / h).min(1.0);
    let radial: f64 = (2..=3 * d)
        .map(|m| {
            let e = m as f64 - alpha;
            moments[m] * rr.powf(e) / e
        })
        .sum();
    Ok(0.5 * h.powi(d as i32) * kernel.c * h.powf(-alpha) * radial)
}
