use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gentensor::{assemble_generating_tensor, classical_generating_tensor, GeneratingTensor, QuadConfig};
use crate::kernel::{make_kernel, Normalization};
use crate::solver::{
    assemble_rhs, discrete_l2_error, manufactured_rhs_2d, manufactured_solution, solve_cg, GridSpec, SolveReport,
};
use crate::toeplitz::build_operator;

pub const CSV_HEADER: &str = "problem,d,alpha,delta,delta_policy,h,N_total,error,rate,assembly_s,solve_s,iters";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Problem {
    /// u = exp(−λ²|x|²) on (−1/2, 1/2)² with the kernel 6/(πδ³r).
    Manufactured2d { lambda: f64 },
    /// f = 1 on (0, 1)^d.
    ConstantSource { d: usize, alpha: f64 },
    /// f = 1 on (0, 1)² with a kernel of singularity α ∈ (0, 2).
    Hypersingular { alpha: f64 },
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Manufactured2d { .. } => "manufactured2d",
            Problem::ConstantSource { .. } => "constant_source",
            Problem::Hypersingular { .. } => "hypersingular",
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Problem::ConstantSource { d, .. } => d,
            _ => 2,
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            Problem::Manufactured2d { .. } => -1.0,
            Problem::ConstantSource { alpha, .. } | Problem::Hypersingular { alpha } => alpha,
        }
    }

    pub fn default_box(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim();
        match self {
            Problem::Manufactured2d { .. } => (vec![-0.5; d], vec![0.5; d]),
            _ => (vec![0.0; d], vec![1.0; d]),
        }
    }

    /// Right-hand side of S u = b: the load of −L_δ u for the manufactured
    /// solution, the load of 1 otherwise.
    pub fn load(&self, grid: &GridSpec, kernel: &crate::KernelSpec) -> Result<Vec<f64>> {
        match *self {
            Problem::Manufactured2d { lambda } => {
                manufactured_rhs_2d(lambda, kernel, &[0.0, 0.0])?;
                Ok(assemble_rhs(grid, |x| -manufactured_rhs_2d(lambda, kernel, x).unwrap_or(f64::NAN)))
            }
            _ => Ok(assemble_rhs(grid, |_| 1.0)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaPolicy {
    /// Same horizon on every mesh.
    Fixed(f64),
    /// δ = ν·h.
    Ratio(f64),
}

impl DeltaPolicy {
    pub fn delta(&self, h: f64) -> f64 {
        match *self {
            DeltaPolicy::Fixed(delta) => delta,
            DeltaPolicy::Ratio(nu) => nu * h,
        }
    }

    pub fn label(&self) -> String {
        match self {
            DeltaPolicy::Fixed(delta) => format!("fixed:{delta}"),
            DeltaPolicy::Ratio(nu) => format!("ratio:{nu}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferencePolicy {
    /// Compare with the known solution (manufactured problem only).
    Exact,
    /// Compare with a solution on the finest mesh refined by `factor`, injected
    /// at the coarse nodes. For a fixed horizon the reference uses the same δ;
    /// for δ = νh the meshes approach the local problem, so the reference is
    /// the classical Q1 solution.
    FineMesh { factor: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub problem: Problem,
    pub hs: Vec<f64>,
    pub delta_policy: DeltaPolicy,
    pub reference: ReferencePolicy,
    #[serde(default = "default_normalization")]
    pub normalization: Normalization,
    #[serde(default)]
    pub quad: QuadConfig,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_maxit")]
    pub maxit: usize,
}

fn default_normalization() -> Normalization {
    Normalization::PaperPrinted
}

fn default_tol() -> f64 {
    1e-10
}

fn default_maxit() -> usize {
    20_000
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub problem: String,
    pub d: usize,
    pub alpha: f64,
    pub delta: f64,
    pub delta_policy: String,
    pub h: f64,
    pub n_total: usize,
    pub error: f64,
    pub rate: Option<f64>,
    pub assembly_s: f64,
    pub solve_s: f64,
    pub iters: usize,
}

/// Discrete solution with the objects that produced it.
pub struct Solution {
    pub grid: GridSpec,
    pub tensor: GeneratingTensor,
    pub values: Vec<f64>,
    pub report: SolveReport,
}

/// Numerical settings shared by every solve of a study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub normalization: Normalization,
    pub quad: QuadConfig,
    pub tol: f64,
    pub maxit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { normalization: default_normalization(), quad: QuadConfig::default(), tol: default_tol(), maxit: default_maxit() }
    }
}

impl StudyConfig {
    pub fn options(&self) -> SolveOptions {
        SolveOptions { normalization: self.normalization, quad: self.quad, tol: self.tol, maxit: self.maxit }
    }
}

/// Assembles and solves one problem on `grid`. A tensor may be supplied (for
/// instance loaded from a cache); otherwise it is assembled from the kernel,
/// or taken as the classical tensor when `local` is set.
pub fn solve_problem(
    problem: &Problem,
    grid: &GridSpec,
    opts: &SolveOptions,
    local: bool,
    tensor: Option<GeneratingTensor>,
) -> Result<Solution> {
    let start = Instant::now();
    let kernel = make_kernel(grid.d, problem.alpha(), grid.delta, opts.normalization)?;
    let tensor = match tensor {
        Some(t) => t,
        None if local => classical_generating_tensor(grid.d, grid.h)?,
        None => assemble_generating_tensor(grid.d, grid.n[0], grid.h, &kernel, &opts.quad)?,
    };
    let op = build_operator(&tensor, &grid.n)?;
    let b = problem.load(grid, &kernel)?;
    let assembly_s = start.elapsed().as_secs_f64();
    let (values, mut report) = solve_cg(&op, &b, opts.tol, opts.maxit)?;
    report.assembly_s = assembly_s;
    Ok(Solution { grid: grid.clone(), tensor, values, report })
}

fn check_hs(hs: &[f64]) -> Result<()> {
    if hs.is_empty() {
        return invalid("empty mesh-size sequence");
    }
    if hs.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("mesh sizes must decrease");
    }
    Ok(())
}

/// Reference solution demanded by `cfg.reference`, or `None` for an exact
/// reference. Studies that share a reference can compute it once and call
/// [`convergence_study_with_reference`].
pub fn reference_solution(cfg: &StudyConfig) -> Result<Option<Solution>> {
    check_hs(&cfg.hs)?;
    match cfg.reference {
        ReferencePolicy::Exact => {
            if !matches!(cfg.problem, Problem::Manufactured2d { .. }) {
                return invalid("exact reference only exists for the manufactured problem");
            }
            Ok(None)
        }
        ReferencePolicy::FineMesh { factor } => {
            if factor < 2 {
                return invalid("reference refinement factor must be at least 2");
            }
            let (lower, upper) = cfg.problem.default_box();
            let h_ref = cfg.hs[cfg.hs.len() - 1] / factor as f64;
            let local = matches!(cfg.delta_policy, DeltaPolicy::Ratio(_));
            let delta = if local { h_ref } else { cfg.delta_policy.delta(h_ref) };
            let grid = GridSpec::new(&lower, &upper, h_ref, delta)?;
            Ok(Some(solve_problem(&cfg.problem, &grid, &cfg.options(), local, None)?))
        }
    }
}

/// Runs the solves over `cfg.hs` and reports errors and observed rates
/// log(e_i/e_{i+1}) / log(h_i/h_{i+1}).
pub fn convergence_study(cfg: &StudyConfig) -> Result<Vec<ConvergenceRecord>> {
    let reference = reference_solution(cfg)?;
    convergence_study_with_reference(cfg, reference.as_ref())
}

/// Same as [`convergence_study`] with a precomputed reference. `None` means
/// the exact solution.
pub fn convergence_study_with_reference(
    cfg: &StudyConfig,
    reference: Option<&Solution>,
) -> Result<Vec<ConvergenceRecord>> {
    check_hs(&cfg.hs)?;
    let (lower, upper) = cfg.problem.default_box();
    let opts = cfg.options();
    let mut records: Vec<ConvergenceRecord> = Vec::with_capacity(cfg.hs.len());
    for &h in &cfg.hs {
        let delta = cfg.delta_policy.delta(h);
        let grid = GridSpec::new(&lower, &upper, h, delta)?;
        let sol = solve_problem(&cfg.problem, &grid, &opts, false, None)?;
        let error = match (reference, cfg.problem) {
            (None, Problem::Manufactured2d { lambda }) => {
                discrete_l2_error(&grid, &sol.values, |x| manufactured_solution(lambda, x))
            }
            (Some(r), _) => {
                let injected = grid.restrict(&r.grid, &r.values)?;
                let diff: f64 = sol.values.iter().zip(&injected).map(|(a, b)| (a - b) * (a - b)).sum();
                (h.powi(grid.d as i32) * diff).sqrt()
            }
            (None, _) => return invalid("a fine-mesh reference is required for this problem"),
        };
        let rate = records.last().map(|prev| (prev.error / error).ln() / (prev.h / h).ln());
        records.push(ConvergenceRecord {
            problem: cfg.problem.name().to_string(),
            d: grid.d,
            alpha: cfg.problem.alpha(),
            delta,
            delta_policy: cfg.delta_policy.label(),
            h,
            n_total: grid.total(),
            error,
            rate,
            assembly_s: sol.report.assembly_s,
            solve_s: sol.report.solve_s,
            iters: sol.report.iterations,
        });
    }
    Ok(records)
}

/// Writes the records with the header line. With `timings` off the timing
/// columns are written as 0 so that repeated runs give identical files.
pub fn write_csv<W: Write>(records: &[ConvergenceRecord], mut w: W, header: bool, timings: bool) -> Result<()> {
    if header {
        writeln!(w, "{CSV_HEADER}")?;
    }
    for r in records {
        let (a, s) = if timings { (r.assembly_s, r.solve_s) } else { (0.0, 0.0) };
        let rate = r.rate.map_or(String::new(), |v| format!("{v:.6}"));
        writeln!(
            w,
            "{},{},{},{:e},{},{:e},{},{:.12e},{},{:.6},{:.6},{}",
            r.problem, r.d, r.alpha, r.delta, r.delta_policy, r.h, r.n_total, r.error, rate, a, s, r.iters
        )?;
    }
    Ok(())
}

/// Least-squares slope of log y against log x.
pub fn fitted_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
