//! Evaluation of `Φ_ξ` on the stability boundary, `γ = λ_min(Φ_ξ)` and its
//! partial derivatives, using a Hessenberg reduction of `A` so that each
//! point costs O(mn²).

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, HermEig, ShiftedHessenbergLu};
use crate::scalar::{all_finite, cplx, creal, fro_norm, hermitian_part, unit, CMatrix, Real};
use crate::system::{Domain, StateSpaceSystem};
use nalgebra::ComplexField;
use num_complex::Complex;
use std::sync::atomic::{AtomicUsize, Ordering};

/// Hessenberg pre-reduction `A = U H Uᴴ` with the transformed `B` and `C`.
#[derive(Debug)]
pub struct EvalCache<T: Real> {
    h: CMatrix<T>,
    u: CMatrix<T>,
    cu: CMatrix<T>,
    ub: CMatrix<T>,
    d: CMatrix<T>,
    domain: Domain,
    is_real: bool,
    d_sym_min: T,
    system: StateSpaceSystem<T>,
    small_solves: AtomicUsize,
    pencil_solves: AtomicUsize,
}

impl<T: Real> Clone for EvalCache<T> {
    fn clone(&self) -> Self {
        Self {
            h: self.h.clone(),
            u: self.u.clone(),
            cu: self.cu.clone(),
            ub: self.ub.clone(),
            d: self.d.clone(),
            domain: self.domain,
            is_real: self.is_real,
            d_sym_min: self.d_sym_min,
            system: self.system.clone(),
            small_solves: AtomicUsize::new(self.small_solves()),
            pencil_solves: AtomicUsize::new(self.pencil_solves()),
        }
    }
}

/// `γ` at one point with the eigen-information used by the derivatives.
#[derive(Debug, Clone)]
pub struct GammaValue<T: Real> {
    pub gamma: T,
    /// Unit eigenvector for `gamma`.
    pub eigvec: nalgebra::DVector<Complex<T>>,
    /// Distance to the next eigenvalue; infinite when `m = 1`.
    pub multiplicity_gap: T,
    /// Largest eigenvalue modulus of `Φ`.
    pub scale: T,
}

/// `γ` with its first and second derivative along one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaDerivs<T> {
    pub gamma: T,
    pub d1: T,
    pub d2: T,
    pub multiplicity_gap: T,
    /// False when `λ_min` is numerically multiple; `d2` is then meaningless.
    pub reliable: bool,
}

/// Direction of differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Xi,
    Omega,
}

/// Transfer-function data at one boundary point.
struct PointData<T: Real> {
    t: CMatrix<T>,
    z2: Option<CMatrix<T>>,
    z3: Option<CMatrix<T>>,
    /// `e^{iω}` in the discrete case, unused otherwise.
    z: Complex<T>,
}

impl<T: Real> EvalCache<T> {
    pub fn new(system: &StateSpaceSystem<T>) -> Result<Self> {
        if !all_finite(system.a()) {
            return Err(Error::NonFinite("A"));
        }
        let n = system.n();
        let (u, mut h) = nalgebra::linalg::Hessenberg::new(system.a().clone()).unpack();
        let zero = cplx(T::zero(), T::zero());
        for j in 0..n {
            for i in (j + 2)..n {
                h[(i, j)] = zero;
            }
        }
        let resid = fro_norm(&(&u * &h * u.adjoint() - system.a()));
        if resid > T::lit(1e-12).max(T::lit(100.0) * T::eps()) * fro_norm(system.a()).max(T::one()) {
            return Err(Error::Eigen("Hessenberg reduction failed its residual check"));
        }
        let d_sym_min = herm_eig(&system.d_sym())?.values[0];
        Ok(Self {
            cu: system.c() * &u,
            ub: u.adjoint() * system.b(),
            h,
            u,
            d: system.d().clone(),
            domain: system.domain(),
            is_real: system.is_real(),
            d_sym_min,
            system: system.clone(),
            small_solves: AtomicUsize::new(0),
            pencil_solves: AtomicUsize::new(0),
        })
    }

    pub fn h(&self) -> &CMatrix<T> {
        &self.h
    }
    pub fn u(&self) -> &CMatrix<T> {
        &self.u
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }
    pub fn is_real(&self) -> bool {
        self.is_real
    }
    pub fn system(&self) -> &StateSpaceSystem<T> {
        &self.system
    }
    /// `λ_min(Dᴴ + D)`.
    pub fn d_sym_min(&self) -> T {
        self.d_sym_min
    }

    /// Number of order-m Hermitian eigensolves performed so far.
    pub fn small_solves(&self) -> usize {
        self.small_solves.load(Ordering::Relaxed)
    }
    /// Number of order-(2n+m) pencil eigensolves recorded so far.
    pub fn pencil_solves(&self) -> usize {
        self.pencil_solves.load(Ordering::Relaxed)
    }
    pub(crate) fn record_pencil_solve(&self) {
        self.pencil_solves.fetch_add(1, Ordering::Relaxed);
    }
    pub fn reset_counters(&self) {
        self.small_solves.store(0, Ordering::Relaxed);
        self.pencil_solves.store(0, Ordering::Relaxed);
    }

    fn check_xi(&self, xi: T) -> Result<()> {
        if !xi.is_finite_real() {
            return Err(Error::InvalidParameter("xi must be finite".into()));
        }
        if self.domain == Domain::Discrete && xi >= T::one() {
            return Err(Error::InvalidParameter(format!("discrete xi must be < 1, got {xi}")));
        }
        Ok(())
    }

    /// `T_ξ` and, up to `order`, `Z_k = CU (σI − H)^{-k} UB` at the point.
    fn point_raw(&self, xi: T, omega: T, order: usize) -> Result<PointData<T>> {
        self.check_xi(xi)?;
        if !omega.is_finite_real() {
            return Err(Error::InvalidParameter("omega must be finite".into()));
        }
        let half = T::lit(0.5);
        let (sigma, z) = match self.domain {
            Domain::Continuous => (cplx(-xi * half, omega), cplx(T::one(), T::zero())),
            Domain::Discrete => {
                let z = unit(omega);
                (z * creal(T::one() - xi), z)
            }
        };
        let lu = ShiftedHessenbergLu::factor(&self.h, sigma)?;
        let mut x = self.ub.clone();
        lu.solve_in_place(&mut x);
        let g = &self.cu * &x;
        let m = self.d.nrows();
        let eye = CMatrix::<T>::identity(m, m);
        let t = match self.domain {
            Domain::Continuous => g + &self.d - eye * creal(xi * half),
            Domain::Discrete => (g + &self.d - eye * creal(xi)) * creal(T::one() / (T::one() - xi)),
        };
        let mut z2 = None;
        let mut z3 = None;
        if order >= 2 {
            lu.solve_in_place(&mut x);
            z2 = Some(&self.cu * &x);
        }
        if order >= 3 {
            lu.solve_in_place(&mut x);
            z3 = Some(&self.cu * &x);
        }
        Ok(PointData { t, z2, z3, z })
    }

    /// Uses `T(−ω) = conj T(ω)` for real data so that `γ` is exactly even in `ω`.
    fn point(&self, xi: T, omega: T, order: usize) -> Result<PointData<T>> {
        if self.is_real && omega < T::zero() {
            let p = self.point_raw(xi, -omega, order)?;
            let conj = |m: CMatrix<T>| m.map(|v| v.conjugate());
            Ok(PointData {
                t: conj(p.t),
                z2: p.z2.map(conj),
                z3: p.z3.map(conj),
                z: p.z.conjugate(),
            })
        } else {
            self.point_raw(xi, omega, order)
        }
    }

    /// `Φ_ξ = T_ξ + T_ξᴴ` on the boundary, exactly Hermitian.
    pub fn phi_eval(&self, xi: T, omega: T) -> Result<CMatrix<T>> {
        let p = self.point(xi, omega, 1)?;
        Ok(hermitian_part(&p.t) * creal(T::lit(2.0)))
    }

    fn eig(&self, phi: &CMatrix<T>) -> Result<HermEig<T>> {
        self.small_solves.fetch_add(1, Ordering::Relaxed);
        herm_eig(phi)
    }

    pub fn gamma(&self, xi: T, omega: T) -> Result<GammaValue<T>> {
        let phi = self.phi_eval(xi, omega)?;
        let eig = self.eig(&phi)?;
        Ok(gamma_value(&eig))
    }

    /// `γ` alone; convenience wrapper over [`EvalCache::gamma`].
    pub fn gamma_only(&self, xi: T, omega: T) -> Result<T> {
        Ok(self.gamma(xi, omega)?.gamma)
    }

    /// `γ`, `∂γ/∂ω`, `∂²γ/∂ω²`.
    pub fn gamma_derivs_omega(&self, xi: T, omega: T) -> Result<GammaDerivs<T>> {
        self.gamma_derivs(xi, omega, Direction::Omega)
    }

    /// `γ`, `∂γ/∂ξ`, `∂²γ/∂ξ²`.
    pub fn gamma_derivs_xi(&self, xi: T, omega: T) -> Result<GammaDerivs<T>> {
        self.gamma_derivs(xi, omega, Direction::Xi)
    }

    pub fn gamma_derivs(&self, xi: T, omega: T, dir: Direction) -> Result<GammaDerivs<T>> {
        let p = self.point(xi, omega, 3)?;
        let (dphi, d2phi) = self.phi_partials(&p, xi, dir);
        let phi = hermitian_part(&p.t) * creal(T::lit(2.0));
        let eig = self.eig(&phi)?;
        Ok(eigen_derivatives(&eig, &dphi, &d2phi))
    }

    /// First and second partials of `Φ` along `dir`.
    fn phi_partials(&self, p: &PointData<T>, xi: T, dir: Direction) -> (CMatrix<T>, CMatrix<T>) {
        let z2 = p.z2.as_ref().expect("order 2 data");
        let z3 = p.z3.as_ref().expect("order 3 data");
        let m = z2.nrows();
        let eye = CMatrix::<T>::identity(m, m);
        let i = cplx(T::zero(), T::one());
        let (dt, d2t) = match (self.domain, dir) {
            (Domain::Continuous, Direction::Omega) => (z2 * (-i), z3 * creal(T::lit(-2.0))),
            (Domain::Continuous, Direction::Xi) => (
                z2 * creal(T::lit(0.5)) - &eye * creal(T::lit(0.5)),
                z3 * creal(T::lit(0.5)),
            ),
            (Domain::Discrete, Direction::Omega) => {
                let z = p.z;
                (
                    z2 * (-i * z),
                    z2 * z - z3 * (z * z * creal(T::lit(2.0) * (T::one() - xi))),
                )
            }
            (Domain::Discrete, Direction::Xi) => {
                let z = p.z;
                let w = creal(T::one() / (T::one() - xi));
                let dt = (&p.t + z2 * z - &eye) * w;
                let d2t = (z3 * (z * z) + &dt) * (w * creal(T::lit(2.0)));
                (dt, d2t)
            }
        };
        let two = creal(T::lit(2.0));
        (hermitian_part(&dt) * two, hermitian_part(&d2t) * two)
    }

    /// `lim_{ω→∞} γ_ξ(ω) = λ_min(Dᴴ + D) − ξ` (continuous only).
    pub fn gamma_at_infinity(&self, xi: T) -> Result<T> {
        if self.domain != Domain::Continuous {
            return Err(Error::WrongDomain("gamma at infinity is defined for continuous models"));
        }
        Ok(self.d_sym_min - xi)
    }
}

fn gamma_value<T: Real>(eig: &HermEig<T>) -> GammaValue<T> {
    let vals = &eig.values;
    let gap = if vals.len() > 1 {
        vals[1] - vals[0]
    } else {
        T::one() / T::zero()
    };
    let scale = vals[0].abs().max(vals[vals.len() - 1].abs());
    GammaValue {
        gamma: vals[0],
        eigvec: eig.vectors.column(0).into_owned(),
        multiplicity_gap: gap,
        scale,
    }
}

/// First and second derivatives of the smallest eigenvalue of a Hermitian
/// family, given the partials of the matrix.
pub fn eigen_derivatives<T: Real>(
    eig: &HermEig<T>,
    dphi: &CMatrix<T>,
    d2phi: &CMatrix<T>,
) -> GammaDerivs<T> {
    let gv = gamma_value(eig);
    let v = &gv.eigvec;
    let dv = dphi * v;
    let d1 = v.dotc(&dv).re;
    let mut d2 = v.dotc(&(d2phi * v)).re;
    let reliable = gv.multiplicity_gap > T::lit(1e-8) * gv.scale.max(T::eps());
    for j in 1..eig.values.len() {
        let uj = eig.vectors.column(j);
        let c = uj.dotc(&dv);
        let denom = gv.gamma - eig.values[j];
        if denom != T::zero() {
            d2 += T::lit(2.0) * (c.re * c.re + c.im * c.im) / denom;
        }
    }
    GammaDerivs {
        gamma: gv.gamma,
        d1,
        d2,
        multiplicity_gap: gv.multiplicity_gap,
        reliable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::from_real_rows;
    use std::f64::consts::PI;

    fn scalar(domain: Domain, a: f64, b: f64, c: f64, d: f64) -> EvalCache<f64> {
        let f = |v: f64| from_real_rows::<f64>(1, 1, &[v]);
        EvalCache::new(&StateSpaceSystem::new(f(a), f(b), f(c), f(d), domain).unwrap()).unwrap()
    }

    #[test]
    fn scalar_phi_values() {
        let c = scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0);
        assert!((c.phi_eval(0.0, 0.0).unwrap()[(0, 0)].re - 4.0).abs() < 1e-15);
        assert!((c.phi_eval(0.0, 1.0).unwrap()[(0, 0)].re - 3.0).abs() < 1e-15);
        let d = scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0);
        assert!(d.phi_eval(0.0, PI).unwrap()[(0, 0)].re.abs() < 1e-15);
        assert!(d.gamma_only(0.0, PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn scalar_derivative_values() {
        let c = scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0);
        assert_eq!(c.gamma_derivs_omega(0.0, 0.0).unwrap().d1, 0.0);
        assert!(c.gamma_derivs_xi(0.0, 0.0).unwrap().d1.abs() < 1e-15);
        assert!((c.gamma_derivs_xi(0.0, 1.0).unwrap().d1 + 1.0).abs() < 1e-15);
        let d = scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0);
        let g = d.gamma_derivs_omega(0.0, PI).unwrap();
        assert!(g.gamma.abs() < 1e-15 && g.d1.abs() < 1e-15 && (g.d2 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_at_infinity_values() {
        let c = scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0);
        assert_eq!(c.gamma_at_infinity(0.0).unwrap(), 2.0);
        assert_eq!(c.gamma_at_infinity(2.0).unwrap(), 0.0);
        let d = scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0);
        assert!(d.gamma_at_infinity(0.0).is_err());
    }

    #[test]
    fn scalar_cache_is_trivial() {
        let c = scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0);
        assert_eq!(c.h()[(0, 0)].re, -1.0);
        assert!((c.u()[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let c = scalar(Domain::Continuous, 0.0, 1.0, 1.0, 1.0);
        assert!(matches!(c.phi_eval(0.0, 0.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn counters_track_small_solves() {
        let c = scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0);
        c.gamma(0.0, 0.3).unwrap();
        c.gamma_derivs_xi(0.0, 0.3).unwrap();
        assert_eq!(c.small_solves(), 2);
        c.reset_counters();
        assert_eq!(c.small_solves(), 0);
    }
}
