//! Multilevel symmetric Toeplitz operators applied through circulant embedding.

use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};
use crate::gentensor::GeneratingTensor;

type C64 = Complex<f64>;

/// Lines gathered per task in the strided passes.
const TILE: usize = 16;

/// Smallest 2·3·5-smooth integer ≥ n.
pub fn fft_size(n: usize) -> usize {
    let smooth = |mut m: usize| {
        for p in [2, 3, 5] {
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        m == 1
    };
    (n.max(1)..).find(|&m| smooth(m)).expect("smooth numbers are unbounded")
}

/// S_δ for a grid of N₁ × … × N_d unknowns in column-major order.
pub struct BlockToeplitzOperator {
    n: Vec<usize>,
    p: Vec<usize>,
    half: usize,
    symbol: Vec<f64>,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
    symbol_imag_residue: f64,
}

impl std::fmt::Debug for BlockToeplitzOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlockToeplitzOperator").field("n", &self.n).field("p", &self.p).finish()
    }
}

/// Scratch space for one matvec; reuse across calls to avoid reallocation.
#[derive(Default)]
pub struct Workspace {
    buf: Vec<C64>,
}

#[derive(Clone, Copy)]
struct SyncPtr(*mut C64);
unsafe impl Send for SyncPtr {}
unsafe impl Sync for SyncPtr {}
impl SyncPtr {
    fn get(self) -> *mut C64 {
        self.0
    }
}

fn decode(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for (o, &dm) in out.iter_mut().zip(dims) {
        *o = idx % dm;
        idx /= dm;
    }
}

pub fn build_operator(g: &GeneratingTensor, n: &[usize]) -> Result<BlockToeplitzOperator> {
    if n.len() != g.d {
        return Err(Error::DimensionMismatch { expected: g.d, actual: n.len() });
    }
    if n.iter().any(|&nj| nj < 1) {
        return invalid("every grid dimension needs at least one unknown");
    }
    let d = n.len();
    let p: Vec<usize> = n.iter().map(|&nj| fft_size(2 * nj - 1)).collect();
    let half = p[0] / 2 + 1;
    let mut real_planner = RealFftPlanner::<f64>::new();
    let mut planner = FftPlanner::<f64>::new();
    let mut op = BlockToeplitzOperator {
        n: n.to_vec(),
        r2c: real_planner.plan_fft_forward(p[0]),
        c2r: real_planner.plan_fft_inverse(p[0]),
        forward: p.iter().map(|&pj| planner.plan_fft_forward(pj)).collect(),
        inverse: p.iter().map(|&pj| planner.plan_fft_inverse(pj)).collect(),
        p,
        half,
        symbol: Vec::new(),
        symbol_imag_residue: 0.0,
    };
    // first column of the embedding circulant
    let total: usize = op.p.iter().product();
    let mut column = vec![0.0; total];
    let mut idx = vec![0; d];
    let mut k = vec![0; d];
    for (l, c) in column.iter_mut().enumerate() {
        decode(l, &op.p, &mut idx);
        let mut inside = true;
        for j in 0..d {
            if idx[j] < n[j] {
                k[j] = idx[j];
            } else if idx[j] > op.p[j] - n[j] {
                k[j] = op.p[j] - idx[j];
            } else {
                inside = false;
            }
        }
        if inside {
            *c = g.get(&k);
        }
    }
    let mut buf = vec![C64::default(); op.spectrum_len()];
    let full = op.p.clone();
    op.transform_forward(&column, &full, &mut buf);
    let scale = buf.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let imag = buf.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    op.symbol_imag_residue = if scale > 0.0 { imag / scale } else { 0.0 };
    op.symbol = buf.iter().map(|z| z.re).collect();
    Ok(op)
}

impl BlockToeplitzOperator {
    pub fn dims(&self) -> &[usize] {
        &self.n
    }

    pub fn padded_dims(&self) -> &[usize] {
        &self.p
    }

    /// Number of unknowns ∏N_j.
    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Relative size of the imaginary part of the computed symbol (zero in exact arithmetic).
    pub fn symbol_imag_residue(&self) -> f64 {
        self.symbol_imag_residue
    }

    /// Rough floating-point operation count of one matvec.
    pub fn flops_per_matvec(&self) -> f64 {
        let total: usize = self.p.iter().product();
        10.0 * total as f64 * (total as f64).log2()
    }

    fn spectrum_len(&self) -> usize {
        self.half * self.p[1..].iter().product::<usize>()
    }

    /// Spectrum dims: half-length first axis, full remaining axes.
    fn spectrum_dims(&self) -> Vec<usize> {
        let mut dims = self.p.clone();
        dims[0] = self.half;
        dims
    }

    /// Zero-padded forward transform of `input` (dims `ext`, column-major) into `buf`.
    fn transform_forward(&self, input: &[f64], ext: &[usize], buf: &mut [C64]) {
        let d = self.p.len();
        let rest: Vec<usize> = self.p[1..].to_vec();
        let p0 = self.p[0];
        buf.par_chunks_mut(self.half).enumerate().for_each_init(
            || (vec![0.0; p0], vec![C64::default(); self.r2c.get_scratch_len()], vec![0; d.max(2) - 1]),
            |(line, scratch, idx), (c, out)| {
                decode(c, &rest, idx);
                if idx.iter().zip(&ext[1..]).any(|(i, e)| i >= e) {
                    out.fill(C64::default());
                    return;
                }
                let mut offset = 0;
                for j in (1..d).rev() {
                    offset = offset * ext[j] + idx[j - 1];
                }
                offset *= ext[0];
                line[..ext[0]].copy_from_slice(&input[offset..offset + ext[0]]);
                line[ext[0]..].fill(0.0);
                self.r2c.process_with_scratch(line, out, scratch).expect("buffer sizes match the plan");
            },
        );
        for axis in 1..d {
            self.axis_pass(buf, axis, ext, false);
        }
    }

    /// Complex FFT along `axis` of the spectrum array; blocks whose outer indices
    /// lie beyond `ext` are skipped (they are zero or not needed).
    fn axis_pass(&self, buf: &mut [C64], axis: usize, ext: &[usize], inverse: bool) {
        let dims = self.spectrum_dims();
        let stride: usize = dims[..axis].iter().product();
        let len = dims[axis];
        let outer_dims = &dims[axis + 1..];
        let outer_ext = &ext[axis + 1..];
        let blocks: usize = outer_dims.iter().product();
        let tiles = stride.div_ceil(TILE);
        let fft = if inverse { &self.inverse[axis] } else { &self.forward[axis] };
        let tasks: Vec<(usize, usize)> = (0..blocks)
            .filter(|&b| {
                let mut idx = vec![0; outer_dims.len()];
                decode(b, outer_dims, &mut idx);
                idx.iter().zip(outer_ext).all(|(i, e)| i < e)
            })
            .flat_map(|b| (0..tiles).map(move |t| (b, t)))
            .collect();
        let ptr = SyncPtr(buf.as_mut_ptr());
        tasks.par_iter().for_each_init(
            || (vec![C64::default(); TILE * len], vec![C64::default(); fft.get_inplace_scratch_len()]),
            |(tile, scratch), &(b, t)| {
                let base = b * stride * len;
                let first = t * TILE;
                let count = TILE.min(stride - first);
                let p = ptr.get();
                // SAFETY: each (block, tile) task touches a disjoint set of
                // indices base + first..first+count + m·stride, all in bounds.
                unsafe {
                    for m in 0..len {
                        for l in 0..count {
                            tile[l * len + m] = *p.add(base + m * stride + first + l);
                        }
                    }
                }
                for l in 0..count {
                    fft.process_with_scratch(&mut tile[l * len..(l + 1) * len], scratch);
                }
                unsafe {
                    for m in 0..len {
                        for l in 0..count {
                            *p.add(base + m * stride + first + l) = tile[l * len + m];
                        }
                    }
                }
            },
        );
    }

    /// y = S_δ v.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len()];
        self.matvec_into(v, &mut out, &mut Workspace::default())?;
        Ok(out)
    }

    /// y = S_δ v using caller-provided scratch space.
    pub fn matvec_into(&self, v: &[f64], out: &mut [f64], ws: &mut Workspace) -> Result<()> {
        let total = self.len();
        if v.len() != total {
            return Err(Error::DimensionMismatch { expected: total, actual: v.len() });
        }
        if out.len() != total {
            return Err(Error::DimensionMismatch { expected: total, actual: out.len() });
        }
        let d = self.p.len();
        ws.buf.resize(self.spectrum_len(), C64::default());
        let buf = &mut ws.buf[..];
        self.transform_forward(v, &self.n, buf);
        buf.par_iter_mut().zip(self.symbol.par_iter()).for_each(|(z, s)| *z *= *s);
        for axis in (1..d).rev() {
            self.axis_pass(buf, axis, &self.n, true);
        }
        let n0 = self.n[0];
        let p0 = self.p[0];
        let scale = 1.0 / self.p.iter().product::<usize>() as f64;
        let line_dims: Vec<usize> = self.n[1..].to_vec();
        let spec_rest: Vec<usize> = self.p[1..].to_vec();
        let buf = &*buf;
        out.par_chunks_mut(n0).enumerate().for_each_init(
            || {
                (
                    vec![C64::default(); self.half],
                    vec![0.0; p0],
                    vec![C64::default(); self.c2r.get_scratch_len()],
                    vec![0; d.max(2) - 1],
                )
            },
            |(spec, line, scratch, idx), (c, y)| {
                decode(c, &line_dims, idx);
                let mut src = 0;
                for j in (0..d - 1).rev() {
                    src = src * spec_rest[j] + idx[j];
                }
                spec.copy_from_slice(&buf[src * self.half..(src + 1) * self.half]);
                // the result is real, so the DC and Nyquist bins are real up to rounding
                spec[0].im = 0.0;
                if p0.is_multiple_of(2) {
                    spec[self.half - 1].im = 0.0;
                }
                self.c2r.process_with_scratch(spec, line, scratch).expect("buffer sizes match the plan");
                for (yi, li) in y.iter_mut().zip(line.iter()) {
                    *yi = li * scale;
                }
            },
        );
        Ok(())
    }
}

/// Dense S_δ with entry (l, l′) = t_{|n−m|}; limited to 4096 unknowns.
pub fn materialize_dense(g: &GeneratingTensor, n: &[usize]) -> Result<DMatrix<f64>> {
    if n.len() != g.d {
        return Err(Error::DimensionMismatch { expected: g.d, actual: n.len() });
    }
    let total: usize = n.iter().product();
    if total > 4096 {
        return Err(Error::TooLarge(total));
    }
    let d = n.len();
    let mut a = vec![0; d];
    let mut b = vec![0; d];
    let mut k = vec![0; d];
    Ok(DMatrix::from_fn(total, total, |l, m| {
        decode(l, n, &mut a);
        decode(m, n, &mut b);
        for j in 0..d {
            k[j] = a[j].abs_diff(b[j]);
        }
        g.get(&k)
    }))
}

/// Writes a matrix as comma-separated rows.
pub fn write_dense_csv<W: Write>(m: &DMatrix<f64>, mut w: W) -> Result<()> {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:e}", m[(i, j)])).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
