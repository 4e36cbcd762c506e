use crate::error::{Error, Result};
use crate::scalar::{all_finite, hermitian_part, CMatrix, Real};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermEig<T: Real> {
    pub values: Vec<T>,
    /// Unit eigenvectors stored column-wise, in the order of `values`.
    pub vectors: CMatrix<T>,
}

/// Hermitian eigensolver. The input is symmetrized first.
pub fn herm_eig<T: Real>(m: &CMatrix<T>) -> Result<HermEig<T>> {
    if !m.is_square() {
        return Err(Error::Dimension("Hermitian eigenproblem needs a square matrix".into()));
    }
    if !all_finite(m) {
        return Err(Error::NonFinite("Hermitian eigenproblem"));
    }
    let n = m.nrows();
    let sym = hermitian_part(m);
    let eig = nalgebra::linalg::SymmetricEigen::try_new(sym, T::eps(), 100 * n.max(10))
        .ok_or(Error::Eigen("Hermitian QR iteration did not converge"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::<T>::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermEig { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cplx, creal};

    #[test]
    fn two_by_two_real() {
        let m = CMatrix::<f64>::from_row_slice(
            2,
            2,
            &[creal(2.0), creal(1.0), creal(1.0), creal(4.0)],
        );
        let e = herm_eig(&m).unwrap();
        assert!((e.values[0] - (3.0 - 2f64.sqrt())).abs() < 1e-14);
        assert!((e.values[1] - (3.0 + 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn complex_hermitian_residual() {
        let m = CMatrix::<f64>::from_row_slice(
            3,
            3,
            &[
                creal(1.0),
                cplx(0.5, 0.3),
                cplx(0.0, -1.0),
                cplx(0.5, -0.3),
                creal(-2.0),
                cplx(0.2, 0.1),
                cplx(0.0, 1.0),
                cplx(0.2, -0.1),
                creal(0.7),
            ],
        );
        let e = herm_eig(&m).unwrap();
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        for k in 0..3 {
            let v = e.vectors.column(k);
            let r = &m * v - v * creal(e.values[k]);
            assert!(r.norm() < 1e-13);
            assert!((v.norm() - 1.0).abs() < 1e-13);
        }
    }
}
