//! Q1 finite elements for the nonlocal Laplacian on uniform grids.
//!
//! The stiffness matrix of a radial power-law kernel on a uniform grid is
//! multilevel Toeplitz. Its distinct entries (the generating tensor) are
//! reduced to integrals of cubic B-spline products over the horizon ball,
//! applied with an FFT circulant embedding and inverted with conjugate
//! gradients.

pub mod bspline;
pub mod error;
pub mod gentensor;
pub mod kernel;
pub mod quadrature;
pub mod solver;
pub mod toeplitz;

pub use error::{Error, Result};
pub use gentensor::{
    assemble_generating_tensor, classical_generating_tensor, GeneratingTensor, QuadConfig,
    RadialPanels,
};
pub use kernel::{make_kernel, KernelSpec, Normalization};
pub use toeplitz::{build_operator, BlockToeplitzOperator};
