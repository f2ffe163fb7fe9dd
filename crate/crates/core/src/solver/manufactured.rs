use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{invalid, Result};
use crate::kernel::KernelSpec;
use crate::quadrature::gauss_legendre_on;

/// u_λ(x) = exp(−λ²|x|²).
pub fn manufactured_solution(lambda: f64, x: &[f64]) -> f64 {
    (-lambda * lambda * x.iter().map(|v| v * v).sum::<f64>()).exp()
}

/// erf(λ(δ+a)) − erf(λa), written with erfc on the tails to avoid cancellation.
fn erf_window(lambda: f64, a: f64, delta: f64) -> f64 {
    let lo = lambda * a;
    let hi = lambda * (a + delta);
    if lo >= 0.0 {
        libm::erfc(lo) - libm::erfc(hi)
    } else if hi <= 0.0 {
        libm::erfc(-hi) - libm::erfc(-lo)
    } else {
        libm::erf(hi) - libm::erf(lo)
    }
}

const THETA_PANELS: usize = 4;
const THETA_NODES: usize = 64;

fn theta_rule() -> &'static [(f64, f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        (0..THETA_PANELS)
            .flat_map(|p| {
                let a0 = 2.0 * PI * p as f64 / THETA_PANELS as f64;
                let a1 = 2.0 * PI * (p + 1) as f64 / THETA_PANELS as f64;
                gauss_legendre_on(THETA_NODES, a0, a1).expect("node count is positive")
            })
            .map(|(t, w)| (t.cos(), t.sin(), w))
            .collect()
    })
}

/// f_λ = L_δ u_λ in 2D for the kernel c/r (α = −1):
/// c·∫_0^{2π} [e^{−λ²(|x|²−a²)} (√π/(2λ)) (erf(λ(δ+a)) − erf(λa)) − δ e^{−λ²|x|²}] dθ
/// with a = x₁cosθ + x₂sinθ, the angle integral by Gauss–Legendre on quarter periods.
pub fn manufactured_rhs_2d(lambda: f64, kernel: &KernelSpec, x: &[f64]) -> Result<f64> {
    if kernel.d != 2 || kernel.alpha != -1.0 {
        return invalid("manufactured right-hand side needs the 2D kernel with α = −1");
    }
    if x.len() != 2 {
        return invalid("point must have two coordinates");
    }
    let l2 = lambda * lambda;
    let r2 = x[0] * x[0] + x[1] * x[1];
    let delta = kernel.delta;
    let pref = PI.sqrt() / (2.0 * lambda);
    let mut total = 0.0;
    for &(c, s, w) in theta_rule() {
        let a = x[0] * c + x[1] * s;
        let v = (-l2 * (r2 - a * a)).exp() * pref * erf_window(lambda, a, delta) - delta * (-l2 * r2).exp();
        total += w * v;
    }
    Ok(kernel.c * total)
}
