use rayon::prelude::*;

use crate::solver::GridSpec;

/// 3-point Gauss–Legendre on (0, 1).
const GL3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_3, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

/// Load vector (f, φ_n) over Ω with a tensor 3-point Gauss rule on each cell.
pub fn assemble_rhs<F>(grid: &GridSpec, f: F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let d = grid.d;
    let h = grid.h;
    let cells: Vec<usize> = grid.n.iter().map(|&nj| nj + 1).collect();
    let ncell: usize = cells.iter().product();
    let nq = 3usize.pow(d as u32);
    // f at every cell quadrature point, weighted by the cell measure
    let mut fq = vec![0.0; ncell * nq];
    fq.par_chunks_mut(nq).enumerate().for_each(|(c, out)| {
        let mut rem = c;
        let corner: Vec<f64> = (0..d)
            .map(|j| {
                let cj = rem % cells[j];
                rem /= cells[j];
                grid.lower[j] + cj as f64 * h
            })
            .collect();
        let mut x = vec![0.0; d];
        for (q, o) in out.iter_mut().enumerate() {
            let mut w = h.powi(d as i32);
            let mut r = q;
            for j in 0..d {
                let (xi, wi) = GL3[r % 3];
                r /= 3;
                x[j] = corner[j] + xi * h;
                w *= wi;
            }
            *o = w * f(&x);
        }
    });
    (0..grid.total())
        .into_par_iter()
        .map(|l| {
            let idx = grid.index(l);
            let mut total = 0.0;
            // cell to the left (node at its right end) or right (node at its left end) per dimension
            for side in 0..(1usize << d) {
                let mut c = 0;
                for j in (0..d).rev() {
                    let cj = idx[j] + (side >> j & 1);
                    c = c * cells[j] + cj;
                }
                for q in 0..nq {
                    let mut phi = 1.0;
                    let mut r = q;
                    for j in 0..d {
                        let xi = GL3[r % 3].0;
                        r /= 3;
                        phi *= if side >> j & 1 == 0 { xi } else { 1.0 - xi };
                    }
                    total += phi * fq[c * nq + q];
                }
            }
            total
        })
        .collect()
}

/// sqrt(h^d Σ (u_h − u)²) over the interior nodes.
pub fn discrete_l2_error<F>(grid: &GridSpec, uh: &[f64], u_exact: F) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    assert_eq!(uh.len(), grid.total());
    let sum: f64 = uh
        .iter()
        .enumerate()
        .map(|(l, &v)| {
            let e = v - u_exact(&grid.node(&grid.index(l)));
            e * e
        })
        .sum();
    (grid.h.powi(grid.d as i32) * sum).sqrt()
}
