//! Closed forms for δ ≤ h with the default kernel constant: the 2D integrands
//! f̂_{k₁,k₂}(r, θ) for r ≤ 1 and the full 2D/3D tables at h = 1.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Result};

/// f̂_{a,b}(r, θ) at h = 1 for 2 ≥ a ≥ b, 0 < r ≤ 1, θ ∈ [0, π].
///
/// The larger offset a lies along sinθ and b along cosθ, so the value equals
/// `integrand_fk_polar(&[b, a], r, &[θ], 1.0)`.
pub fn closed_form_integrand_2d(k: [usize; 2], r: f64, theta: f64) -> Result<f64> {
    let [a, b] = k;
    if a < b || a > 2 {
        return invalid(format!("offset {k:?} must satisfy 2 ≥ k₁ ≥ k₂"));
    }
    if !(r > 0.0 && r <= 1.0) {
        return invalid(format!("radius {r} outside (0, 1]"));
    }
    if !(0.0..=PI).contains(&theta) {
        return invalid(format!("angle {theta} outside [0, π]"));
    }
    let c = theta.cos().abs();
    let s = theta.sin();
    let upper = theta <= FRAC_PI_2;
    let (c2, c3) = (c * c, c * c * c);
    let (s2, s3) = (s * s, s * s * s);
    let (r2, r3) = (r * r, r * r * r);
    let r4 = r2 * r2;
    let v = match (a, b) {
        (0, 0) => {
            -r2 * (3.0 * c3 * r4 * s3 - 6.0 * c3 * r3 * s2 + 4.0 * c3 * r - 6.0 * c2 * r3 * s3 + 12.0 * c2 * r2 * s2
                - 8.0 * c2
                + 4.0 * r * s3
                - 8.0 * s2)
                / 6.0
        }
        (1, 0) => {
            r2 * (6.0 * c3 * r4 * s3 - 9.0 * c3 * r3 * s2 - 3.0 * c3 * r - 12.0 * c2 * r3 * s3 + 18.0 * c2 * r2 * s2
                + 6.0 * c2
                + 8.0 * r * s3
                - 12.0 * s2)
                / 18.0
        }
        (2, 0) => -r3 * s3 * (3.0 * c3 * r3 - 6.0 * c2 * r2 + 4.0) / 36.0,
        (1, 1) if upper => {
            -r2 * (5.0 * c3 * r4 * s3 - 6.0 * c3 * r3 * s2 - 3.0 * c3 * r2 * s - 2.0 * c3 * r - 6.0 * c2 * r3 * s3
                + 9.0 * c2 * r2 * s2
                + 3.0 * c2
                - 3.0 * c * r2 * s3
                + 9.0 * c * s
                - 2.0 * r * s3
                + 3.0 * s2)
                / 18.0
        }
        (1, 1) => {
            -r2 * (3.0 * c3 * r4 * s3 - 6.0 * c3 * r3 * s2 + 3.0 * c3 * r2 * s - 2.0 * c3 * r - 6.0 * c2 * r3 * s3
                + 9.0 * c2 * r2 * s2
                + 3.0 * c2
                + 3.0 * c * r2 * s3
                - 9.0 * c * s
                - 2.0 * r * s3
                + 3.0 * s2)
                / 18.0
        }
        (2, 1) if upper => r3 * s3 * (3.0 * c3 * r3 - 3.0 * c2 * r2 - 3.0 * c * r - 1.0) / 36.0,
        (2, 1) => -r3 * s3 * (1.0 - c * r).powi(3) / 36.0,
        (2, 2) if upper => -c3 * r3 * r3 * s3 / 36.0,
        (2, 2) => 0.0,
        _ => unreachable!(),
    };
    Ok(v)
}

fn check_ratio(delta_over_h: f64) -> Result<()> {
    if !(delta_over_h > 0.0 && delta_over_h <= 1.0) {
        return invalid(format!("δ/h = {delta_over_h} outside (0, 1]"));
    }
    Ok(())
}

/// t[k₁][k₂] at h = 1 for δ ≤ h; symmetric in (k₁, k₂).
pub fn closed_form_table_2d(alpha: f64, delta_over_h: f64) -> Result<[[f64; 3]; 3]> {
    check_ratio(delta_over_h)?;
    let (al, d) = (alpha, delta_over_h);
    let a = (al - 2.0) / 2.0;
    let (d2, d3, d4) = (d * d, d * d * d, d * d * d * d);
    let t00 = a * (-d4 / (3.0 * PI * (al - 6.0)) + 32.0 * d3 / (15.0 * PI * (al - 5.0)) - d2 / (al - 4.0)
        - 64.0 * d / (9.0 * PI * (al - 3.0)))
        + 8.0 / 3.0;
    let t10 = a * (2.0 * d4 / (9.0 * PI * (al - 6.0)) - 56.0 * d3 / (45.0 * PI * (al - 5.0))
        + d2 / (2.0 * (al - 4.0))
        + 40.0 * d / (27.0 * PI * (al - 3.0)))
        - 1.0 / 3.0;
    let t11 = a * (-4.0 * d4 / (27.0 * PI * (al - 6.0)) + 32.0 * d3 / (45.0 * PI * (al - 5.0))
        - d2 / (4.0 * (al - 4.0))
        + 32.0 * d / (27.0 * PI * (al - 3.0)))
        - 1.0 / 3.0;
    let t20 = a * (-d4 / (18.0 * PI * (al - 6.0)) + 8.0 * d3 / (45.0 * PI * (al - 5.0))
        - 16.0 * d / (27.0 * PI * (al - 3.0)));
    let t21 = a * (d4 / (27.0 * PI * (al - 6.0)) - 4.0 * d3 / (45.0 * PI * (al - 5.0))
        - 4.0 * d / (27.0 * PI * (al - 3.0)));
    let t22 = -a * d4 / (108.0 * PI * (al - 6.0));
    Ok([[t00, t10, t20], [t10, t11, t21], [t20, t21, t22]])
}

/// t[k₁][k₂][k₃] at h = 1 for δ ≤ h; multiply by h for general h.
pub fn closed_form_table_3d(alpha: f64, delta_over_h: f64) -> Result<[[[f64; 3]; 3]; 3]> {
    check_ratio(delta_over_h)?;
    let (al, d) = (alpha, delta_over_h);
    let a = al - 2.0;
    let p = PI;
    let dp = |n: i32| d.powi(n);
    let q = |m: f64| al - m;
    let t000 = 8.0 / 3.0
        + a / 2.0
            * (-dp(7) / (160.0 * p * q(9.0)) + 8.0 * dp(6) / (105.0 * p * q(8.0)) - 3.0 * dp(5) / (32.0 * q(7.0))
                + 4.0 * (p - 4.0) * dp(4) / (35.0 * p * q(6.0))
                + dp(3) / q(5.0)
                - 8.0 * dp(2) / (5.0 * q(4.0))
                - 2.0 * d / q(3.0));
    let t100 = a
        * (dp(7) / (480.0 * p * q(9.0)) - 22.0 * dp(6) / (945.0 * p * q(8.0)) + 5.0 * dp(5) / (192.0 * q(7.0))
            - (9.0 * p - 26.0) * dp(4) / (315.0 * p * q(6.0))
            - 11.0 * dp(3) / (72.0 * q(5.0))
            + dp(2) / (5.0 * q(4.0))
            + d / (18.0 * q(3.0)));
    let t110 = -1.0 / 6.0
        + a * (-dp(7) / (720.0 * p * q(9.0)) + 8.0 * dp(6) / (567.0 * p * q(8.0)) - 11.0 * dp(5) / (768.0 * q(7.0))
            + (27.0 * p - 16.0) * dp(4) / (1890.0 * p * q(6.0))
            + dp(3) / (144.0 * q(5.0))
            + 13.0 * d / (144.0 * q(3.0)));
    let t111 = -1.0 / 12.0
        + a * (dp(7) / (1080.0 * p * q(9.0)) - 8.0 * dp(6) / (945.0 * p * q(8.0)) + dp(5) / (128.0 * q(7.0))
            - (9.0 * p + 32.0) * dp(4) / (1260.0 * p * q(6.0))
            + dp(3) / (24.0 * q(5.0))
            - dp(2) / (20.0 * q(4.0))
            + d / (24.0 * q(3.0)));
    let t200 = a
        * (-dp(7) / (1920.0 * p * q(9.0)) + 4.0 * dp(6) / (945.0 * p * q(8.0)) - dp(5) / (384.0 * q(7.0))
            - 8.0 * dp(4) / (315.0 * p * q(6.0))
            + dp(3) / (36.0 * q(5.0))
            - d / (18.0 * q(3.0)));
    let t210 = a
        * (dp(7) / (2880.0 * p * q(9.0)) - dp(6) / (405.0 * p * q(8.0)) + dp(5) / (768.0 * q(7.0))
            + dp(4) / (189.0 * p * q(6.0))
            - dp(3) / (288.0 * q(5.0))
            - d / (72.0 * q(3.0)));
    let t211 = a
        * (-dp(7) / (4320.0 * p * q(9.0)) + 4.0 * dp(6) / (2835.0 * p * q(8.0)) - dp(5) / (1536.0 * q(7.0))
            + 4.0 * dp(4) / (945.0 * p * q(6.0))
            - dp(3) / (288.0 * q(5.0))
            - d / (288.0 * q(3.0)));
    let t220 = a / 2.0
        * (-dp(7) / (5760.0 * p * q(9.0)) + 2.0 * dp(6) / (2835.0 * p * q(8.0)) - 4.0 * dp(4) / (945.0 * p * q(6.0)));
    let t221 = a / 2.0
        * (dp(7) / (8640.0 * p * q(9.0)) - dp(6) / (2835.0 * p * q(8.0)) - dp(4) / (945.0 * p * q(6.0)));
    let t222 = -a * dp(7) / (69120.0 * p * q(9.0));
    let mut t = [[[0.0; 3]; 3]; 3];
    for (i, plane) in t.iter_mut().enumerate() {
        for (j, row) in plane.iter_mut().enumerate() {
            for (l, v) in row.iter_mut().enumerate() {
                let mut k = [i, j, l];
                k.sort_unstable_by(|x, y| y.cmp(x));
                *v = match k {
                    [0, 0, 0] => t000,
                    [1, 0, 0] => t100,
                    [1, 1, 0] => t110,
                    [1, 1, 1] => t111,
                    [2, 0, 0] => t200,
                    [2, 1, 0] => t210,
                    [2, 1, 1] => t211,
                    [2, 2, 0] => t220,
                    [2, 2, 1] => t221,
                    _ => t222,
                };
            }
        }
    }
    Ok(t)
}
