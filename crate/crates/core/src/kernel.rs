//! Radial power-law kernels ρ(r) = c·r^(−d−α) truncated at the horizon δ.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// How the constant c of the kernel is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// c = 2(2−α)δ^(α−2)/π in 2D and 3(2−α)δ^(α−2)/(2π) in 3D.
    /// The second moment is 2d, which makes the operator tend to Δ.
    PaperPrinted,
    /// Second moment equal to d.
    SecondMomentD,
    /// Second moment equal to 2d. Coincides with `PaperPrinted`.
    SecondMoment2D,
    /// User supplied constant.
    Explicit(f64),
}

impl Normalization {
    pub fn label(&self) -> String {
        match self {
            Normalization::PaperPrinted => "paper_printed".into(),
            Normalization::SecondMomentD => "second_moment_d".into(),
            Normalization::SecondMoment2D => "second_moment_2d".into(),
            Normalization::Explicit(c) => format!("explicit({c})"),
        }
    }
}

/// Surface area of the unit sphere in R^d.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => unreachable!("dimension checked at construction"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub d: usize,
    pub alpha: f64,
    pub delta: f64,
    pub c: f64,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub second_moment: f64,
}

pub fn make_kernel(d: usize, alpha: f64, delta: f64, normalization: Normalization) -> Result<KernelSpec> {
    if d != 2 && d != 3 {
        return invalid(format!("dimension {d} not supported, expected 2 or 3"));
    }
    if !alpha.is_finite() || alpha >= 2.0 {
        return invalid(format!("alpha = {alpha} must be below 2"));
    }
    if alpha < -1.0 {
        return invalid(format!("alpha = {alpha} must be at least -1"));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return invalid(format!("horizon delta = {delta} must be positive"));
    }
    let df = d as f64;
    // constant giving second moment `m`: c·|S|·δ^(2−α)/(2−α) = m
    let for_moment = |m: f64| m * (2.0 - alpha) * delta.powf(alpha - 2.0) / sphere_area(d);
    let c = match normalization {
        Normalization::PaperPrinted => match d {
            2 => 2.0 * (2.0 - alpha) * delta.powf(alpha - 2.0) / PI,
            _ => 3.0 * (2.0 - alpha) * delta.powf(alpha - 2.0) / (2.0 * PI),
        },
        Normalization::SecondMomentD => for_moment(df),
        Normalization::SecondMoment2D => for_moment(2.0 * df),
        Normalization::Explicit(c) => c,
    };
    if !(c.is_finite() && c > 0.0) {
        return invalid(format!("kernel constant c = {c} must be positive"));
    }
    Ok(KernelSpec { d, alpha, delta, c, normalization })
}

impl KernelSpec {
    /// ρ(r) for 0 < r ≤ δ, zero beyond the horizon.
    pub fn density(&self, r: f64) -> f64 {
        if r > self.delta {
            0.0
        } else {
            self.c * r.powf(-(self.d as f64) - self.alpha)
        }
    }

    /// Same kernel family with a different horizon, renormalized under the same policy.
    pub fn with_delta(&self, delta: f64) -> Result<KernelSpec> {
        make_kernel(self.d, self.alpha, delta, self.normalization)
    }
}

/// ∫_{B_δ} |s|² ρ(|s|) ds in closed form.
pub fn second_moment(spec: &KernelSpec) -> MomentReport {
    let a = 2.0 - spec.alpha;
    MomentReport {
        second_moment: spec.c * sphere_area(spec.d) * spec.delta.powf(a) / a,
    }
}

/// Kernel block of the JSON experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub d: usize,
    pub alpha: f64,
    pub delta: f64,
    #[serde(default = "default_normalization")]
    pub normalization: String,
    #[serde(default)]
    pub c: Option<f64>,
}

fn default_normalization() -> String {
    "paper_printed".into()
}

pub fn parse_normalization(name: &str, c: Option<f64>) -> Result<Normalization> {
    match (name, c) {
        ("paper_printed", None) => Ok(Normalization::PaperPrinted),
        ("second_moment_d", None) => Ok(Normalization::SecondMomentD),
        ("second_moment_2d", None) => Ok(Normalization::SecondMoment2D),
        ("explicit", Some(c)) => Ok(Normalization::Explicit(c)),
        ("explicit", None) => invalid("explicit normalization needs a value for c"),
        (_, Some(_)) => invalid("c is only accepted with the explicit normalization"),
        (other, None) => invalid(format!("unknown normalization '{other}'")),
    }
}

impl KernelConfig {
    pub fn to_spec(&self) -> Result<KernelSpec> {
        make_kernel(self.d, self.alpha, self.delta, parse_normalization(&self.normalization, self.c)?)
    }
}
