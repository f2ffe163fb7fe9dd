mod config;

use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use nlfem::gentensor::{
    band_size, load_tensor, pre_plateau_slope, quadrature_study, save_tensor, QuadAxis, QuadStudyRow,
};
use nlfem::kernel::parse_normalization;
use nlfem::solver::{
    convergence_study, discrete_l2_error, manufactured_solution, solve_problem, write_csv, DeltaPolicy, GridSpec,
    Problem, ReferencePolicy, SolveOptions, StudyConfig,
};
use nlfem::{assemble_generating_tensor, classical_generating_tensor, make_kernel, KernelSpec, QuadConfig, RadialPanels};
use serde_json::json;

use config::Params;

#[derive(Parser)]
#[command(name = "nlfem", version, about = "Q1 finite elements for the nonlocal Laplacian on uniform grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble the generating tensor and write it to --cache.
    Assemble(Params),
    /// Solve one problem and print a JSON report; --out receives the nodal values.
    Solve(Params),
    /// Run a convergence study and emit its CSV table.
    Convergence {
        #[command(flatten)]
        params: Params,
        /// Write zero timing columns so that repeated runs give identical files.
        #[arg(long)]
        no_timings: bool,
        /// Append to --out without a header instead of overwriting it.
        #[arg(long)]
        append: bool,
    },
    /// Compare a small-horizon tensor with the classical one; fails above --tolerance.
    LimitCheck(Params),
    /// Regular-part quadrature error against node counts along both axes.
    QuadStudy(Params),
}

/// Failure classes with their exit codes.
enum Failure {
    Usage(String),
    Run(String),
    Check(String),
}

impl From<nlfem::Error> for Failure {
    fn from(e: nlfem::Error) -> Self {
        match e {
            nlfem::Error::InvalidParameter(m) => Failure::Usage(m),
            other => Failure::Run(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Assemble(p) => prepare(p).and_then(|p| assemble(&p)),
        Command::Solve(p) => prepare(p).and_then(|p| solve(&p)),
        Command::Convergence { params, no_timings, append } => {
            prepare(params).and_then(|p| convergence(&p, !no_timings, append))
        }
        Command::LimitCheck(p) => prepare(p).and_then(|p| limit_check(&p)),
        Command::QuadStudy(p) => prepare(p).and_then(|p| quad_study(&p)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(3)
        }
    }
}

fn prepare(p: Params) -> Result<Params, Failure> {
    let p = p.resolve().map_err(Failure::Usage)?;
    if let Some(t) = p.threads {
        if t == 0 {
            return usage("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| Failure::Run(e.to_string()))?;
    }
    Ok(p)
}

fn problem(p: &Params) -> Result<Problem, Failure> {
    let name = p.problem.as_deref().unwrap_or("manufactured2d");
    match name {
        "manufactured2d" => {
            if p.d.is_some_and(|d| d != 2) {
                return usage("manufactured2d is a 2D problem");
            }
            if p.kernel.alpha.is_some_and(|a| a != -1.0) || p.kernel.kernel_exponent.is_some() {
                return usage("manufactured2d uses the kernel with alpha = -1");
            }
            Ok(Problem::Manufactured2d { lambda: p.lambda.unwrap_or(12.0) })
        }
        "hypersingular" => {
            if p.d.is_some_and(|d| d != 2) {
                return usage("hypersingular is a 2D problem, use constant_source in 3D");
            }
            Ok(Problem::Hypersingular { alpha: alpha(p, 2)?.unwrap_or(1.5) })
        }
        "constant_source" => {
            let d = p.d.unwrap_or(2);
            let Some(alpha) = alpha(p, d)? else { return usage("constant_source needs --alpha") };
            Ok(Problem::ConstantSource { d, alpha })
        }
        other => usage(format!("unknown problem '{other}'")),
    }
}

/// α from --alpha or --kernel-exponent, which must agree when both are given.
fn alpha(p: &Params, d: usize) -> Result<Option<f64>, Failure> {
    let from_exp = p.kernel.kernel_exponent.map(|e| e - d as f64);
    match (p.kernel.alpha, from_exp) {
        (Some(a), Some(b)) if (a - b).abs() > 1e-12 => usage(format!("--alpha {a} contradicts --kernel-exponent")),
        (a, b) => Ok(a.or(b)),
    }
}

fn normalization(p: &Params) -> Result<nlfem::Normalization, Failure> {
    let default = if p.kernel.kernel_exponent.is_some() { "explicit" } else { "paper_printed" };
    let name = p.kernel.normalization.as_deref().unwrap_or(default);
    let c = match (name, p.kernel.c) {
        ("explicit", None) if p.kernel.kernel_exponent.is_some() => Some(1.0),
        (_, c) => c,
    };
    Ok(parse_normalization(name, c)?)
}

fn quad(p: &Params) -> Result<QuadConfig, Failure> {
    let base = QuadConfig::default();
    let radial_panels = match p.quadrature.panels.as_deref() {
        None | Some("single_interval") => RadialPanels::SingleInterval,
        Some("unit_shells") => RadialPanels::UnitShells,
        Some(other) => return usage(format!("unknown panel layout '{other}'")),
    };
    let q = QuadConfig {
        n_radial: p.quadrature.n_radial.unwrap_or(base.n_radial),
        n_angular: p.quadrature.n_angular.unwrap_or(base.n_angular),
        radial_panels,
    };
    q.validate()?;
    Ok(q)
}

fn options(p: &Params) -> Result<SolveOptions, Failure> {
    Ok(SolveOptions {
        normalization: normalization(p)?,
        quad: quad(p)?,
        tol: p.tol.unwrap_or(1e-10),
        maxit: p.maxit.unwrap_or(20_000),
    })
}

fn delta_policy(p: &Params) -> Result<DeltaPolicy, Failure> {
    match (p.kernel.delta, p.kernel.ratio) {
        (Some(d), None) => Ok(DeltaPolicy::Fixed(d)),
        (None, Some(r)) => Ok(DeltaPolicy::Ratio(r)),
        (Some(_), Some(_)) => usage("give either --delta or --ratio, not both"),
        (None, None) => usage("a horizon is required: --delta or --ratio"),
    }
}

fn grid(p: &Params, d: usize, default_box: (Vec<f64>, Vec<f64>)) -> Result<GridSpec, Failure> {
    let lower = p.lower.clone().unwrap_or(default_box.0);
    let upper = p.upper.clone().unwrap_or(default_box.1);
    if lower.len() != d || upper.len() != d {
        return usage(format!("box corners must have {d} coordinates"));
    }
    let policy = delta_policy(p)?;
    let h = match (p.h, p.n) {
        (Some(h), None) => h,
        (None, Some(n)) if n > 0 => (upper[0] - lower[0]) / (n + 1) as f64,
        (Some(_), Some(_)) => return usage("give either --h or --n, not both"),
        _ => return usage("a mesh is required: --h or --n"),
    };
    Ok(GridSpec::new(&lower, &upper, h, policy.delta(h))?)
}

fn kernel_for(p: &Params, d: usize, delta: f64) -> Result<KernelSpec, Failure> {
    let Some(alpha) = alpha(p, d)? else { return usage("--alpha or --kernel-exponent is required") };
    Ok(make_kernel(d, alpha, delta, normalization(p)?)?)
}

fn open_out(path: Option<&Path>, append: bool) -> Result<(Box<dyn Write>, bool), Failure> {
    Ok(match path {
        None => (Box::new(io::stdout().lock()), true),
        Some(path) => {
            let fresh = !append || std::fs::metadata(path).map_or(true, |m| m.len() == 0);
            let f = OpenOptions::new().create(true).write(true).append(append).truncate(!append).open(path)?;
            (Box::new(BufWriter::new(f)), fresh)
        }
    })
}

fn assemble(p: &Params) -> Outcome {
    let Some(cache) = p.cache.as_deref() else { return usage("assemble needs --cache") };
    let d = p.d.unwrap_or(2);
    let g = grid(p, d, (vec![0.0; d], vec![1.0; d]))?;
    let kernel = kernel_for(p, d, g.delta)?;
    let start = Instant::now();
    let t = assemble_generating_tensor(d, g.n[0], g.h, &kernel, &quad(p)?)?;
    let secs = start.elapsed().as_secs_f64();
    save_tensor(&t, cache)?;
    let summary = json!({
        "d": d, "n": t.n, "band": t.band, "h": t.h, "alpha": kernel.alpha, "delta": kernel.delta,
        "c": kernel.c, "entries": t.entries().len(), "assembly_s": secs, "cache": cache.display().to_string(),
    });
    println!("{summary}");
    Ok(())
}

fn solve(p: &Params) -> Outcome {
    let prob = problem(p)?;
    let d = prob.dim();
    let g = grid(p, d, prob.default_box())?;
    let opts = options(p)?;
    let tensor = match p.cache.as_deref() {
        None => None,
        Some(path) => {
            let t = load_tensor(path)?;
            let k = t.kernel.ok_or_else(|| Failure::Usage("cached tensor has no kernel".into()))?;
            let matches = t.d == d
                && (t.h - g.h).abs() <= 1e-12 * g.h
                && (k.delta - g.delta).abs() <= 1e-12 * g.delta
                && k.alpha == prob.alpha()
                && t.band == band_size(*g.n.iter().max().unwrap(), g.h, g.delta);
            if !matches {
                return usage(format!("cache {} was assembled for a different problem", path.display()));
            }
            Some(t)
        }
    };
    let sol = solve_problem(&prob, &g, &opts, false, tensor)?;
    let error = match prob {
        Problem::Manufactured2d { lambda } => Some(discrete_l2_error(&g, &sol.values, |x| manufactured_solution(lambda, x))),
        _ => None,
    };
    if let Some(out) = p.out.as_deref() {
        let mut w = BufWriter::new(File::create(out)?);
        let coords: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
        writeln!(w, "{},u", coords.join(","))?;
        for (l, v) in sol.values.iter().enumerate() {
            let x = g.node(&g.index(l));
            let xs: Vec<String> = x.iter().map(|c| format!("{c:.17e}")).collect();
            writeln!(w, "{},{v:.17e}", xs.join(","))?;
        }
        w.flush()?;
    }
    let report = json!({
        "problem": prob.name(), "d": d, "alpha": prob.alpha(), "delta": g.delta, "h": g.h,
        "n_total": g.total(), "band": sol.tensor.band, "iterations": sol.report.iterations,
        "relative_residual": sol.report.relative_residual, "error": error,
        "assembly_s": sol.report.assembly_s, "solve_s": sol.report.solve_s,
    });
    println!("{report}");
    Ok(())
}

fn default_hs(prob: &Problem) -> Vec<f64> {
    let (lo, hi) = match prob {
        Problem::Manufactured2d { .. } => (4, 8),
        _ => (3, 6),
    };
    (lo..=hi).map(|e| 0.5f64.powi(e)).collect()
}

fn convergence(p: &Params, timings: bool, append: bool) -> Outcome {
    let prob = problem(p)?;
    if p.lower.is_some() || p.upper.is_some() || p.h.is_some() || p.n.is_some() {
        return usage("convergence uses the problem's own domain and --hs");
    }
    let opts = options(p)?;
    let reference = match (prob, p.reference_factor) {
        (Problem::Manufactured2d { .. }, None) => ReferencePolicy::Exact,
        (_, factor) => ReferencePolicy::FineMesh { factor: factor.unwrap_or(4) },
    };
    let cfg = StudyConfig {
        problem: prob,
        hs: p.hs.clone().unwrap_or_else(|| default_hs(&prob)),
        delta_policy: delta_policy(p)?,
        reference,
        normalization: opts.normalization,
        quad: opts.quad,
        tol: opts.tol,
        maxit: opts.maxit,
    };
    let records = convergence_study(&cfg)?;
    let (mut w, header) = open_out(p.out.as_deref(), append)?;
    write_csv(&records, &mut w, header, timings)?;
    w.flush()?;
    if let Some(last) = records.last().and_then(|r| r.rate) {
        eprintln!("final rate {last:.3}");
    }
    Ok(())
}

fn limit_check(p: &Params) -> Outcome {
    let d = p.d.unwrap_or(2);
    let Some(h) = p.h else { return usage("limit-check needs --h") };
    let Some(delta) = p.kernel.delta else { return usage("limit-check needs --delta") };
    let kernel = kernel_for(p, d, delta)?;
    let n = p.n.unwrap_or(8);
    let t = assemble_generating_tensor(d, n, h, &kernel, &quad(p)?)?;
    let dev = t.max_abs_diff(&classical_generating_tensor(d, h)?);
    let tolerance = p.tolerance.unwrap_or(1e-2);
    println!("{}", json!({ "d": d, "alpha": kernel.alpha, "delta": delta, "h": h, "max_deviation": dev, "tolerance": tolerance }));
    if dev > tolerance {
        return Err(Failure::Check(format!("deviation {dev:.3e} exceeds {tolerance:.3e}")));
    }
    Ok(())
}

fn quad_study(p: &Params) -> Outcome {
    let d = p.d.unwrap_or(2);
    let h = p.h.unwrap_or(1.0);
    let Some(delta) = p.kernel.delta else { return usage("quad-study needs --delta") };
    let kernel = kernel_for(p, d, delta)?;
    let offset = p.offset.clone().unwrap_or_else(|| vec![0; d]);
    if offset.len() != d {
        return usage(format!("--offset needs {d} entries"));
    }
    let ns = p.ns.clone().unwrap_or_else(|| vec![4, 6, 8, 12, 16, 24, 32, 48, 64]);
    if ns.iter().any(|&n| n < 2) {
        return usage("node counts must be at least 2");
    }
    let n_fixed = p.n_fixed.unwrap_or(64);
    let n_ref = p.n_ref.unwrap_or(500);
    let mut rows: Vec<QuadStudyRow> = Vec::new();
    for axis in [QuadAxis::Radial, QuadAxis::Angular] {
        let part = quadrature_study(&offset, &kernel, h, axis, &ns, n_fixed, n_ref)?;
        let slope = pre_plateau_slope(&part, 1e-9);
        match slope {
            Some(s) => eprintln!("{} slope {s:.3}", axis.name()),
            None => eprintln!("{} slope undetermined", axis.name()),
        }
        rows.extend(part);
    }
    let (mut w, _) = open_out(p.out.as_deref(), false)?;
    writeln!(w, "axis,n,value,error")?;
    for r in &rows {
        writeln!(w, "{},{},{:.17e},{:.6e}", r.axis.name(), r.n, r.value, r.error)?;
    }
    w.flush()?;
    Ok(())
}
