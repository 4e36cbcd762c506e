//! Dense complex linear algebra kernels.
//!
//! nalgebra supplies the Hermitian eigensolver, QR and the Hessenberg
//! reduction; the generalized eigenvalue solver (complex QZ) and the
//! O(n²) shifted Hessenberg solves are implemented here.

mod hermitian;
mod hessenberg;
mod qz;

pub use hermitian::{herm_eig, HermEig};
pub use hessenberg::ShiftedHessenbergLu;
pub use qz::{generalized_eigenvalues, GenEig};

use crate::error::{Error, Result};
use crate::scalar::{all_finite, CMatrix, Real};
use num_complex::Complex;

/// Eigenvalues of a square complex matrix (Schur form, no vectors).
pub fn eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    if !all_finite(a) {
        return Err(Error::NonFinite("matrix passed to eigenvalues"));
    }
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), T::eps(), 200 * a.nrows().max(10))
        .ok_or(Error::Eigen("Schur iteration did not converge"))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Smallest singular value.
pub fn min_singular_value<T: Real>(m: &CMatrix<T>) -> Result<T> {
    if m.is_empty() {
        return Ok(T::zero());
    }
    let svd = nalgebra::linalg::SVD::try_new(m.clone(), false, false, T::eps(), 200 * m.nrows().max(m.ncols()).max(10))
        .ok_or(Error::Eigen("SVD did not converge"))?;
    Ok(svd.singular_values.iter().fold(T::max_value().unwrap_or(T::one() / T::eps()), |a, &b| a.min(b)))
}
