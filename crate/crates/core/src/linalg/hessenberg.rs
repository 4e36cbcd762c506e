use crate::error::{Error, Result};
use crate::scalar::{modulus, CMatrix, Real};
use num_complex::Complex;

/// LU factorization of `σI − H` for an upper Hessenberg `H`.
///
/// Partial pivoting only ever swaps adjacent rows, so the factorization and
/// each solve cost O(n²).
#[derive(Debug, Clone)]
pub struct ShiftedHessenbergLu<T: Real> {
    lu: CMatrix<T>,
    swapped: Vec<bool>,
}

impl<T: Real> ShiftedHessenbergLu<T> {
    pub fn factor(h: &CMatrix<T>, shift: Complex<T>) -> Result<Self> {
        let n = h.nrows();
        let mut a = -h.clone();
        let mut scale = T::zero();
        for i in 0..n {
            a[(i, i)] += shift;
        }
        for z in a.iter() {
            scale = scale.max(modulus(*z));
        }
        let tiny = T::eps() * scale;
        let pole = || Error::Pole {
            re: shift.re.as_f64(),
            im: shift.im.as_f64(),
        };
        let mut swapped = vec![false; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            if modulus(a[(k + 1, k)]) > modulus(a[(k, k)]) {
                for j in k..n {
                    a.swap((k, j), (k + 1, j));
                }
                swapped[k] = true;
            }
            let piv = a[(k, k)];
            if modulus(piv) <= tiny {
                return Err(pole());
            }
            let l = a[(k + 1, k)] / piv;
            a[(k + 1, k)] = l;
            for j in (k + 1)..n {
                let u = a[(k, j)];
                a[(k + 1, j)] -= l * u;
            }
        }
        if n > 0 && modulus(a[(n - 1, n - 1)]) <= tiny {
            return Err(pole());
        }
        Ok(Self { lu: a, swapped })
    }

    /// Overwrites `rhs` with `(σI − H)⁻¹ rhs`.
    pub fn solve_in_place(&self, rhs: &mut CMatrix<T>) {
        let n = self.lu.nrows();
        for c in 0..rhs.ncols() {
            for k in 0..n.saturating_sub(1) {
                if self.swapped[k] {
                    rhs.swap((k, c), (k + 1, c));
                }
                let l = self.lu[(k + 1, k)];
                let v = rhs[(k, c)];
                rhs[(k + 1, c)] -= l * v;
            }
            for i in (0..n).rev() {
                let mut s = rhs[(i, c)];
                for j in (i + 1)..n {
                    s -= self.lu[(i, j)] * rhs[(j, c)];
                }
                rhs[(i, c)] = s / self.lu[(i, i)];
            }
        }
    }

    pub fn solve(&self, rhs: &CMatrix<T>) -> CMatrix<T> {
        let mut x = rhs.clone();
        self.solve_in_place(&mut x);
        x
    }
}
