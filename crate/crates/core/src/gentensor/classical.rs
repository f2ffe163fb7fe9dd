use crate::error::{invalid, Result};
use crate::gentensor::GeneratingTensor;

/// Tensor of Σ_j M_h ⊗ … ⊗ S_h ⊗ … ⊗ M_h with S_h = tridiag(−1, 2, −1)/h and
/// M_h = h·tridiag(1, 4, 1)/6, the usual Q1 Laplacian stiffness matrix.
pub fn classical_generating_tensor(d: usize, h: f64) -> Result<GeneratingTensor> {
    if d != 2 && d != 3 {
        return invalid(format!("dimension {d} not supported"));
    }
    let s = [2.0 / h, -1.0 / h];
    let m = [4.0 * h / 6.0, h / 6.0];
    let value = |k: &[usize]| {
        (0..d)
            .map(|j| {
                k.iter()
                    .enumerate()
                    .map(|(i, &ki)| if i == j { s[ki] } else { m[ki] })
                    .product::<f64>()
            })
            .sum()
    };
    GeneratingTensor::from_sorted_fn(d, 2, 2, h, None, value)
}
