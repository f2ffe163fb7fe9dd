//! Gauss rules on intervals and sector-wise rules on the unit circle and sphere.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::num::NonZeroUsize;

use gauss_quad::{GaussJacobi, GaussLegendre};

use crate::error::{invalid, Result};

fn nonzero(n: usize) -> Result<NonZeroUsize> {
    NonZeroUsize::new(n).ok_or_else(|| crate::Error::InvalidParameter("quadrature needs at least one node".into()))
}

/// Gauss–Legendre nodes on [−1, 1] in ascending order, symmetrized so that
/// node i is exactly the negative of node n−1−i.
pub fn gauss_legendre(n: usize) -> Result<Vec<(f64, f64)>> {
    let rule = GaussLegendre::new(nonzero(n)?);
    let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[j].1 + pairs[i].1);
        pairs[i] = (-x, w);
        pairs[j] = (x, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    Ok(pairs)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok(gauss_legendre(n)?.into_iter().map(|(x, w)| (mid + half * x, half * w)).collect())
}

/// Gauss–Jacobi rule for ∫_0^b r^β g(r) dr; the returned weights include r^β.
pub fn gauss_jacobi_origin(n: usize, beta: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let Some(bt) = gauss_quad::FiniteAboveNegOneF64::new(beta) else {
        return invalid(format!("Jacobi exponent {beta} must exceed -1"));
    };
    let zero = gauss_quad::FiniteAboveNegOneF64::new(0.0).expect("0 is above -1");
    let rule = GaussJacobi::new(nonzero(n)?, zero, bt);
    let scale = (0.5 * b).powf(beta + 1.0);
    Ok(rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * b * (1.0 + x), w * scale))
        .collect())
}

/// A direction on the unit sphere with its quadrature weight (surface measure included).
#[derive(Debug, Clone, Copy)]
pub struct Direction {
    pub u: [f64; 3],
    pub w: f64,
}

/// Product rule over the angular sign sectors of S^{d−1}: quadrants in 2D,
/// octants in 3D, with `n` Gauss–Legendre nodes per angle and sector.
///
/// 2D directions are (cosθ, sinθ); 3D directions are
/// (sinθ cosφ, sinθ sinφ, cosθ) with weight sinθ dθ dφ. The rule is exactly
/// invariant under coordinate sign flips and under swapping the first two axes.
pub fn sector_directions(d: usize, n: usize) -> Result<Vec<Direction>> {
    let quarter = quarter_circle(n)?;
    let mut dirs = Vec::new();
    match d {
        2 => {
            for &(sx, sy) in &[(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
                for &(c, s, w) in &quarter {
                    dirs.push(Direction { u: [sx * c, sy * s, 0.0], w });
                }
            }
        }
        3 => {
            for &(ct, st, wt) in &polar_half(n)? {
                for &(sz, szw) in &[(1.0, ct), (-1.0, ct)] {
                    for &(sx, sy) in &[(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
                        for &(cp, sp, wp) in &quarter {
                            dirs.push(Direction {
                                u: [sx * st * cp, sy * st * sp, sz * szw],
                                w: wt * st * wp,
                            });
                        }
                    }
                }
            }
        }
        _ => return invalid(format!("dimension {d} not supported")),
    }
    Ok(dirs)
}

/// Nodes on (0, π/2) as (cos, sin, weight), mirrored so that swapping cos and sin
/// permutes the node set exactly.
fn quarter_circle(n: usize) -> Result<Vec<(f64, f64, f64)>> {
    let gl = gauss_legendre(n)?;
    let mut out = vec![(0.0, 0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let (x, w) = gl[i];
        let theta = FRAC_PI_4 * (1.0 + x);
        let w = FRAC_PI_4 * w;
        let (mut s, mut c) = theta.sin_cos();
        if n % 2 == 1 && i == n / 2 {
            c = FRAC_1_SQRT_2;
            s = FRAC_1_SQRT_2;
        }
        out[i] = (c, s, w);
        out[n - 1 - i] = (s, c, w);
    }
    Ok(out)
}

/// Polar angle nodes on (0, π/2) as (cosθ, sinθ, weight).
fn polar_half(n: usize) -> Result<Vec<(f64, f64, f64)>> {
    Ok(gauss_legendre_on(n, 0.0, FRAC_PI_2)?
        .into_iter()
        .map(|(t, w)| (t.cos(), t.sin(), w))
        .collect())
}
