use std::time::Instant;

use crate::error::{Error, Result};
use crate::toeplitz::{BlockToeplitzOperator, Workspace};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub relative_residual: f64,
    /// ‖r_k‖/‖b‖ for k = 0..=iterations
    pub residual_history: Vec<f64>,
    pub assembly_s: f64,
    pub matvec_s: f64,
    pub solve_s: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Unpreconditioned conjugate gradients from a zero initial guess, stopping at
/// ‖r‖ ≤ tol·‖b‖. Reductions run sequentially so results are reproducible.
pub fn solve_cg(op: &BlockToeplitzOperator, rhs: &[f64], tol: f64, maxit: usize) -> Result<(Vec<f64>, SolveReport)> {
    let start = Instant::now();
    let n = op.len();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: rhs.len() });
    }
    let mut report = SolveReport::default();
    let mut x = vec![0.0; n];
    let bnorm = dot(rhs, rhs).sqrt();
    if bnorm == 0.0 {
        report.residual_history.push(0.0);
        report.solve_s = start.elapsed().as_secs_f64();
        return Ok((x, report));
    }
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut ws = Workspace::default();
    let mut rr = dot(&r, &r);
    report.residual_history.push(1.0);
    let mut rel = 1.0;
    while rel > tol {
        if report.iterations >= maxit {
            return Err(Error::NotConverged { iterations: report.iterations, residual: rel });
        }
        let t = Instant::now();
        op.matvec_into(&p, &mut ap, &mut ws)?;
        report.matvec_s += t.elapsed().as_secs_f64();
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        report.iterations += 1;
        rel = rr.sqrt() / bnorm;
        report.residual_history.push(rel);
    }
    report.relative_residual = rel;
    report.solve_s = start.elapsed().as_secs_f64();
    Ok((x, report))
}
