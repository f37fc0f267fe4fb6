//! Dense complex and Hermitian matrix kernel.
//!
//! Everything here is a pure function on immutable values. Tensor products
//! follow one global convention: on `C^{d1} ⊗ C^{d2}` the basis vector
//! `e_i ⊗ e_j` has index `i·d2 + j`.

mod eigen;
mod functions;
mod hermitian;
mod matrix;
mod tensor;

pub use eigen::{herm_eig, herm_eigvals, reconstruction_residual, sym_eig, sym_eigvals};
pub use functions::{
    fidelity_direct, frobenius_norm, herm_fn, inverse_pd, outer, pinv_sqrt, polar_factor, singular_triplets,
    singular_values, spectral_norm, sqrtm_psd, sqrtm_psd_with_tol, trace_norm, unvec, vec, vector_norm,
};
pub(crate) use functions::normalized;
pub use hermitian::{HermitianMatrix, DEFAULT_HERM_TOL, DEFAULT_PSD_TOL};
pub use matrix::{ComplexMatrix, C64};
pub(crate) use matrix::ZERO;
pub use tensor::{identity_kron, kron_identity, partial_trace, swap_factors, swap_operator, swap_row_factors, Keep};
