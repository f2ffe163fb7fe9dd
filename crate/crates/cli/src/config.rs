//! Experiment parameters shared by the command line and the JSON config file.
//! Every field is optional; flags take precedence over the file.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

/// Parses a positive length written as a decimal or as a fraction like `1/64`.
pub fn parse_len(s: &str) -> Result<f64, String> {
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
            a / b
        }
        None => s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?,
    };
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("'{s}' must be positive"))
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelArgs {
    /// Singularity exponent α of ρ(r) = c·r^(−d−α).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Fixed horizon δ.
    #[arg(long, value_parser = parse_len)]
    pub delta: Option<f64>,
    /// Horizon proportional to the mesh size, δ = ratio·h.
    #[arg(long, value_parser = parse_len)]
    pub ratio: Option<f64>,
    /// Total exponent of ρ(r) = c·r^(−e); sets α = e − d and defaults c to 1.
    #[arg(long)]
    pub kernel_exponent: Option<f64>,
    /// paper_printed, second_moment_d, second_moment_2d or explicit.
    #[arg(long)]
    pub normalization: Option<String>,
    /// Kernel constant for the explicit normalization.
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadArgs {
    #[arg(long)]
    pub n_radial: Option<usize>,
    #[arg(long)]
    pub n_angular: Option<usize>,
    /// single_interval or unit_shells.
    #[arg(long)]
    pub panels: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// JSON file with any of these parameters; flags override it.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Lower box corner, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lower: Option<Vec<f64>>,
    /// Upper box corner, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub upper: Option<Vec<f64>>,
    /// Mesh size.
    #[arg(long, value_parser = parse_len)]
    pub h: Option<f64>,
    /// Decreasing mesh sizes of a convergence study, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_len)]
    pub hs: Option<Vec<f64>>,
    /// Interior nodes per dimension (alternative to --h).
    #[arg(long)]
    pub n: Option<usize>,
    /// manufactured2d, hypersingular or constant_source.
    #[arg(long)]
    pub problem: Option<String>,
    /// Width parameter of the manufactured solution exp(−λ²|x|²).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Relative residual at which CG stops.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub maxit: Option<usize>,
    /// Refinement factor of the fine-mesh reference.
    #[arg(long)]
    pub reference_factor: Option<usize>,
    /// Largest accepted deviation for limit-check.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Offset k of the studied entry, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub offset: Option<Vec<usize>>,
    /// Node counts of the quadrature study, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    /// Node count of the axis held fixed in the quadrature study.
    #[arg(long)]
    pub n_fixed: Option<usize>,
    /// Node count of the quadrature-study reference.
    #[arg(long)]
    pub n_ref: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Worker threads, all cores by default.
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    #[serde(default)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    #[serde(default)]
    pub quadrature: QuadArgs,
}

macro_rules! prefer {
    ($a:expr, $b:expr, $($f:ident),+) => {
        $( $a.$f = $a.$f.take().or($b.$f); )+
    };
}

impl Params {
    /// Fills unset fields from the config file named by `--config`, if any.
    pub fn resolve(mut self) -> Result<Self, String> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config(&path)?;
        prefer!(self, file, d, lower, upper, h, hs, n, problem, lambda, tol, maxit, reference_factor, tolerance);
        prefer!(self, file, offset, ns, n_fixed, n_ref, out, cache, threads);
        prefer!(self.kernel, file.kernel, alpha, delta, ratio, kernel_exponent, normalization, c);
        prefer!(self.quadrature, file.quadrature, n_radial, n_angular, panels);
        Ok(self)
    }
}

fn read_config(path: &Path) -> Result<Params, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}
