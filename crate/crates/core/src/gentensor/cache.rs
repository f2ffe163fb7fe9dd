//! Binary tensor cache: magic `NLGT1`, then d, N, B as u32 and h, δ, α, c as f64
//! (all little-endian), then the B^d entries in column-major order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::gentensor::GeneratingTensor;
use crate::kernel::{make_kernel, Normalization};

const MAGIC: &[u8; 5] = b"NLGT1";

pub fn write_tensor<W: Write>(t: &GeneratingTensor, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    for v in [t.d, t.n, t.band] {
        let v = u32::try_from(v).map_err(|_| Error::Cache(format!("{v} does not fit in u32")))?;
        w.write_all(&v.to_le_bytes())?;
    }
    let (delta, alpha, c) = t.kernel.map_or((0.0, 0.0, 0.0), |k| (k.delta, k.alpha, k.c));
    for v in [t.h, delta, alpha, c] {
        w.write_all(&v.to_le_bytes())?;
    }
    for v in t.entries() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a tensor; the kernel comes back with `Explicit(c)` normalization.
/// A zero constant marks a tensor without kernel (the classical one).
pub fn read_tensor<R: Read>(mut r: R) -> Result<GeneratingTensor> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let mut u = [0u8; 4];
    let mut head = [0usize; 3];
    for v in head.iter_mut() {
        r.read_exact(&mut u)?;
        *v = u32::from_le_bytes(u) as usize;
    }
    let [d, n, band] = head;
    let mut f = [0u8; 8];
    let mut read_f64 = |r: &mut R| -> Result<f64> {
        r.read_exact(&mut f)?;
        Ok(f64::from_le_bytes(f))
    };
    let h = read_f64(&mut r)?;
    let delta = read_f64(&mut r)?;
    let alpha = read_f64(&mut r)?;
    let c = read_f64(&mut r)?;
    if !(1..=3).contains(&d) {
        return Err(Error::Cache(format!("dimension {d} in header")));
    }
    let count = band
        .checked_pow(d as u32)
        .filter(|&c| c <= 1 << 28)
        .ok_or_else(|| Error::Cache("band too large".into()))?;
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        entries.push(read_f64(&mut r)?);
    }
    let kernel = if c == 0.0 { None } else { Some(make_kernel(d, alpha, delta, Normalization::Explicit(c))?) };
    GeneratingTensor::from_entries(d, n, band, h, kernel, entries)
}

pub fn save_tensor(t: &GeneratingTensor, path: &Path) -> Result<()> {
    write_tensor(t, BufWriter::new(File::create(path)?))
}

pub fn load_tensor(path: &Path) -> Result<GeneratingTensor> {
    read_tensor(BufReader::new(File::open(path)?))
}
