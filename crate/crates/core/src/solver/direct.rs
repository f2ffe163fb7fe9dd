use crate::gentensor::QuadConfig;
use crate::kernel::KernelSpec;
use crate::quadrature::{gauss_jacobi_origin, sector_directions};

/// L_δ u(x) = ∫_{B_δ} (u(x+s) − u(x)) ρ(|s|) ds by polar/spherical quadrature.
///
/// The ±s values are paired, (u(x+s) + u(x−s))/2 − u(x) = O(r²), and divided
/// by r², which leaves a smooth radial integrand against the Jacobi weight r^(1−α).
pub fn apply_operator_direct<F>(u: F, kernel: &KernelSpec, x: &[f64], quad: &QuadConfig) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let d = kernel.d;
    assert_eq!(x.len(), d);
    let radial = gauss_jacobi_origin(quad.n_radial, 1.0 - kernel.alpha, kernel.delta)
        .expect("α < 2 keeps the Jacobi exponent above −1");
    let dirs = sector_directions(d, quad.n_angular).expect("dimension checked by the kernel");
    let u0 = u(x);
    let mut xp = vec![0.0; d];
    let mut xm = vec![0.0; d];
    let mut total = 0.0;
    for &(r, wr) in &radial {
        let mut inner = 0.0;
        for dir in &dirs {
            for j in 0..d {
                xp[j] = x[j] + r * dir.u[j];
                xm[j] = x[j] - r * dir.u[j];
            }
            inner += dir.w * (0.5 * (u(&xp) + u(&xm)) - u0);
        }
        total += wr * inner / (r * r);
    }
    kernel.c * total
}
