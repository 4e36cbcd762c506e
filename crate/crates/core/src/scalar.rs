//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All algorithms are written once against [`Real`] and operate on complex
//! matrices with entries `Complex<T>`. `f64` is the production scalar; `f32`
//! is supported for the evaluation kernels, with tolerances scaled from the
//! machine epsilon of the type.

use nalgebra::{ComplexField, DMatrix, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};

/// Real floating-point scalar usable by the solvers.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + LowerExp + Display + Debug + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion used for diagnostics and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn eps() -> Self {
        Self::default_epsilon()
    }

    #[inline]
    fn is_finite_real(self) -> bool {
        self.as_f64().is_finite()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex matrix over the scalar `T`.
pub type CMatrix<T> = DMatrix<Complex<T>>;

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `e^{iθ}`.
#[inline]
pub fn unit<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    ComplexField::modulus(z)
}

/// Largest entry modulus; cheap scale for relative tolerances.
pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(modulus(*z)))
}

/// Frobenius norm of a complex matrix.
pub fn fro_norm<T: Real>(m: &CMatrix<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
        .sqrt()
}

pub fn all_finite<T: Real>(m: &CMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite_real() && z.im.is_finite_real())
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle<T: Real>(theta: T) -> T {
    let two_pi = T::two_pi();
    let mut t = theta % two_pi;
    if t > T::pi() {
        t -= two_pi;
    } else if t <= -T::pi() {
        t += two_pi;
    }
    t
}

/// Identity matrix of order `n`.
pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::<T>::identity(n, n)
}

/// `(M + Mᴴ)/2`.
pub fn hermitian_part<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = T::lit(0.5);
    (m + m.adjoint()).map(|z| z * half)
}

/// Converts a real `f64` matrix into a complex matrix of scalar `T`.
pub fn from_real_rows<T: Real>(rows: usize, cols: usize, data: &[f64]) -> CMatrix<T> {
    assert_eq!(rows * cols, data.len());
    CMatrix::<T>::from_fn(rows, cols, |i, j| creal(T::lit(data[i * cols + j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        for k in -20..20 {
            let t = 0.37 * k as f64;
            let w = wrap_angle(t);
            assert!(w > -std::f64::consts::PI && w <= std::f64::consts::PI);
            assert!(((t - w) / std::f64::consts::TAU).fract().abs() < 1e-12);
        }
        assert_eq!(wrap_angle(std::f64::consts::PI), std::f64::consts::PI);
        assert!((wrap_angle(-std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn literal_conversion_f32() {
        assert_eq!(<f32 as Real>::lit(0.5), 0.5f32);
        assert!(<f32 as Real>::eps() > 1e-8);
    }
}
