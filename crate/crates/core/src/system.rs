//! State-space models, the parametric shift families and the initial bracket.

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, herm_eig, min_singular_value};
use crate::scalar::{all_finite, creal, fro_norm, modulus, CMatrix, Real};
use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

/// Time domain of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Continuous,
    Discrete,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Continuous => "continuous",
            Domain::Discrete => "discrete",
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuous" => Ok(Domain::Continuous),
            "discrete" => Ok(Domain::Discrete),
            other => Err(Error::Parse(format!("unknown domain '{other}'"))),
        }
    }
}

/// Linear time-invariant model `{A, B, C, D}` with complex entries.
///
/// Fields are private so that `is_real` always reflects the stored data.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceSystem<T: Real> {
    a: CMatrix<T>,
    b: CMatrix<T>,
    c: CMatrix<T>,
    d: CMatrix<T>,
    domain: Domain,
    is_real: bool,
}

impl<T: Real> StateSpaceSystem<T> {
    pub fn new(
        a: CMatrix<T>,
        b: CMatrix<T>,
        c: CMatrix<T>,
        d: CMatrix<T>,
        domain: Domain,
    ) -> Result<Self> {
        let n = a.nrows();
        let m = d.nrows();
        if n == 0 || m == 0 {
            return Err(Error::Dimension("state and port dimensions must be at least 1".into()));
        }
        let shapes = [
            ("A", a.shape(), (n, n)),
            ("B", b.shape(), (n, m)),
            ("C", c.shape(), (m, n)),
            ("D", d.shape(), (m, m)),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return Err(Error::Dimension(format!(
                    "{name} is {}x{}, expected {}x{}",
                    got.0, got.1, want.0, want.1
                )));
            }
        }
        for (name, mat) in [("A", &a), ("B", &b), ("C", &c), ("D", &d)] {
            if !all_finite(mat) {
                return Err(Error::NonFinite(name));
            }
        }
        let is_real = [&a, &b, &c, &d]
            .iter()
            .all(|mat| mat.iter().all(|z| z.im == T::zero()));
        Ok(Self {
            a,
            b,
            c,
            d,
            domain,
            is_real,
        })
    }

    pub fn a(&self) -> &CMatrix<T> {
        &self.a
    }
    pub fn b(&self) -> &CMatrix<T> {
        &self.b
    }
    pub fn c(&self) -> &CMatrix<T> {
        &self.c
    }
    pub fn d(&self) -> &CMatrix<T> {
        &self.d
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }
    pub fn is_real(&self) -> bool {
        self.is_real
    }
    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }
    /// Port dimension.
    pub fn m(&self) -> usize {
        self.d.nrows()
    }

    /// `Dᴴ + D`.
    pub fn d_sym(&self) -> CMatrix<T> {
        &self.d + self.d.adjoint()
    }

    /// Applies `U` as a state-space equivalence: `{UᴴAU, UᴴB, CU, D}`.
    pub fn transform_unitary(&self, u: &CMatrix<T>) -> Result<Self> {
        if u.shape() != (self.n(), self.n()) {
            return Err(Error::Dimension("transformation must be n x n".into()));
        }
        let uh = u.adjoint();
        Self::new(
            &uh * &self.a * u,
            &uh * &self.b,
            &self.c * u,
            self.d.clone(),
            self.domain,
        )
    }
}

/// Enclosure `[xi_lb, xi_ub]` of the extremal parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiBracket<T> {
    pub xi_lb: T,
    pub xi_ub: T,
}

/// Numerical tolerances shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Relative accuracy of the final estimate.
    pub tau: T,
    /// Allowed imaginary part (continuous) or distance from the unit circle
    /// (discrete) of a pencil eigenvalue accepted as a boundary zero.
    pub eig_realness_tol: T,
    /// Relative bound on `|γ|` confirming a candidate zero.
    pub zero_confirm_tol: T,
    /// Relative bound on `|∂γ/∂ω|` declaring a point stationary.
    pub stationarity_tol: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        let eps = T::eps();
        Self {
            tau: T::lit(1e-14).max(T::lit(40.0) * eps),
            eig_realness_tol: T::lit(1e-6).max(T::lit(100.0) * eps),
            zero_confirm_tol: T::lit(1e-6).max(eps.sqrt()),
            stationarity_tol: T::lit(1e-8).max(eps.sqrt()),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// Defaults with a custom `tau`.
    pub fn with_tau(tau: T) -> Result<Self> {
        let t = Self {
            tau,
            ..Self::default()
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: T| v > T::zero() && v.is_finite_real();
        if !(ok(self.tau) && self.tau < T::one()) {
            return Err(Error::InvalidParameter(format!("tau must lie in (0,1), got {}", self.tau)));
        }
        if !(ok(self.eig_realness_tol) && ok(self.zero_confirm_tol) && ok(self.stationarity_tol)) {
            return Err(Error::InvalidParameter("tolerances must be positive and finite".into()));
        }
        Ok(())
    }
}

/// Default relative tolerance of the PBH rank test.
pub const PBH_TOL: f64 = 1e-8;

/// Member `M_ξ` of the parametric family.
///
/// Continuous: `{A + ξ/2·I, B, C, D − ξ/2·I}`.
/// Discrete: `{A, B, C, D − ξI} / (1 − ξ)`, defined for `ξ < 1`.
pub fn shifted_system<T: Real>(m: &StateSpaceSystem<T>, xi: T) -> Result<StateSpaceSystem<T>> {
    if !xi.is_finite_real() {
        return Err(Error::InvalidParameter("shift must be finite".into()));
    }
    let (n, p) = (m.n(), m.m());
    match m.domain() {
        Domain::Continuous => {
            let h = creal(xi * T::lit(0.5));
            let a = &m.a + CMatrix::<T>::identity(n, n) * h;
            let d = &m.d - CMatrix::<T>::identity(p, p) * h;
            StateSpaceSystem::new(a, m.b.clone(), m.c.clone(), d, Domain::Continuous)
        }
        Domain::Discrete => {
            if xi >= T::one() {
                return Err(Error::InvalidParameter(format!(
                    "discrete shift requires xi < 1, got {xi}"
                )));
            }
            let s = creal(T::one() / (T::one() - xi));
            let d = &m.d - CMatrix::<T>::identity(p, p) * creal(xi);
            StateSpaceSystem::new(&m.a * s, &m.b * s, &m.c * s, d * s, Domain::Discrete)
        }
    }
}

fn check_x<T: Real>(x: &CMatrix<T>, n: usize) -> Result<()> {
    if x.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "X is {}x{}, expected {n}x{n}",
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(())
}

/// `[[−AᴴX − XA, Cᴴ − XB], [C − BᴴX, Dᴴ + D]]`, symmetrized.
pub fn passivity_matrix_cont<T: Real>(x: &CMatrix<T>, m: &StateSpaceSystem<T>) -> Result<CMatrix<T>> {
    if m.domain() != Domain::Continuous {
        return Err(Error::WrongDomain("continuous passivity matrix needs a continuous model"));
    }
    let (n, p) = (m.n(), m.m());
    check_x(x, n)?;
    let mut w = CMatrix::<T>::zeros(n + p, n + p);
    let top_left = -(m.a.adjoint() * x) - x * &m.a;
    let top_right = m.c.adjoint() - x * &m.b;
    w.view_mut((0, 0), (n, n)).copy_from(&top_left);
    w.view_mut((0, n), (n, p)).copy_from(&top_right);
    w.view_mut((n, 0), (p, n)).copy_from(&top_right.adjoint());
    w.view_mut((n, n), (p, p)).copy_from(&m.d_sym());
    Ok(crate::scalar::hermitian_part(&w))
}

/// `[[X, XA, XB], [AᴴX, X, Cᴴ], [BᴴX, C, Dᴴ + D]]`, symmetrized.
pub fn passivity_matrix_disc<T: Real>(x: &CMatrix<T>, m: &StateSpaceSystem<T>) -> Result<CMatrix<T>> {
    if m.domain() != Domain::Discrete {
        return Err(Error::WrongDomain("discrete passivity matrix needs a discrete model"));
    }
    let (n, p) = (m.n(), m.m());
    check_x(x, n)?;
    let mut w = CMatrix::<T>::zeros(2 * n + p, 2 * n + p);
    let xa = x * &m.a;
    let xb = x * &m.b;
    w.view_mut((0, 0), (n, n)).copy_from(x);
    w.view_mut((0, n), (n, n)).copy_from(&xa);
    w.view_mut((0, 2 * n), (n, p)).copy_from(&xb);
    w.view_mut((n, 0), (n, n)).copy_from(&xa.adjoint());
    w.view_mut((n, n), (n, n)).copy_from(x);
    w.view_mut((n, 2 * n), (n, p)).copy_from(&m.c.adjoint());
    w.view_mut((2 * n, 0), (p, n)).copy_from(&xb.adjoint());
    w.view_mut((2 * n, n), (p, n)).copy_from(&m.c);
    w.view_mut((2 * n, 2 * n), (p, p)).copy_from(&m.d_sym());
    Ok(crate::scalar::hermitian_part(&w))
}

/// Spectral abscissa and spectral radius of `A`.
pub fn spectral_bounds<T: Real>(m: &StateSpaceSystem<T>) -> Result<(T, T)> {
    let eig = eigenvalues(&m.a)?;
    let alpha = eig.iter().map(|z| z.re).fold(-T::one() / T::zero(), |a, b| a.max(b));
    let rho = eig.iter().map(|z| modulus(*z)).fold(T::zero(), |a, b| a.max(b));
    Ok((alpha, rho))
}

/// Initial enclosure of the extremal parameter.
///
/// Continuous: `[λ_min(W_c(I, M)), min(−2α(A), λ_min(Dᴴ+D))]`.
/// Discrete: `[½λ_min(W_d(2I, M)), 1 − ρ(A)]`.
pub fn xi_bracket<T: Real>(m: &StateSpaceSystem<T>) -> Result<XiBracket<T>> {
    let n = m.n();
    let (alpha, rho) = spectral_bounds(m)?;
    match m.domain() {
        Domain::Continuous => {
            let w = passivity_matrix_cont(&CMatrix::<T>::identity(n, n), m)?;
            let lb = herm_eig(&w)?.values[0];
            let dmin = herm_eig(&m.d_sym())?.values[0];
            Ok(XiBracket {
                xi_lb: lb,
                xi_ub: (-(alpha + alpha)).min(dmin),
            })
        }
        Domain::Discrete => {
            let two = CMatrix::<T>::identity(n, n) * creal(T::lit(2.0));
            let w = passivity_matrix_disc(&two, m)?;
            let lb = herm_eig(&w)?.values[0] * T::lit(0.5);
            Ok(XiBracket {
                xi_lb: lb,
                xi_ub: T::one() - rho,
            })
        }
    }
}

/// PBH rank test at every eigenvalue of `A`; returns (controllable, observable).
///
/// Rank deficiency is declared when the smallest singular value of
/// `[λI − A, B]` (or its dual) is at most `tol · ‖[A, B]‖_F`. An eigensolver
/// failure yields `(false, false)`.
pub fn check_minimality<T: Real>(m: &StateSpaceSystem<T>, tol: T) -> (bool, bool) {
    let (n, p) = (m.n(), m.m());
    let Ok(eig) = eigenvalues(&m.a) else {
        return (false, false);
    };
    let scale_c = (fro_norm(&m.a).powi(2) + fro_norm(&m.b).powi(2)).sqrt();
    let scale_o = (fro_norm(&m.a).powi(2) + fro_norm(&m.c).powi(2)).sqrt();
    let mut controllable = true;
    let mut observable = true;
    for lam in eig {
        let shifted = CMatrix::<T>::identity(n, n) * lam - &m.a;
        let mut ctrb = CMatrix::<T>::zeros(n, n + p);
        ctrb.view_mut((0, 0), (n, n)).copy_from(&shifted);
        ctrb.view_mut((0, n), (n, p)).copy_from(&m.b);
        let mut obsv = CMatrix::<T>::zeros(n + p, n);
        obsv.view_mut((0, 0), (n, n)).copy_from(&shifted);
        obsv.view_mut((n, 0), (p, n)).copy_from(&m.c);
        match min_singular_value(&ctrb) {
            Ok(s) if s > tol * scale_c => {}
            _ => controllable = false,
        }
        match min_singular_value(&obsv) {
            Ok(s) if s > tol * scale_o => {}
            _ => observable = false,
        }
    }
    (controllable, observable)
}

/// Largest entry modulus of `D`, used as an absolute scale.
pub(crate) fn d_scale<T: Real>(m: &StateSpaceSystem<T>) -> T {
    m.d.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cplx, from_real_rows};

    fn scalar(domain: Domain, a: f64, b: f64, c: f64, d: f64) -> StateSpaceSystem<f64> {
        let f = |v: f64| from_real_rows::<f64>(1, 1, &[v]);
        StateSpaceSystem::new(f(a), f(b), f(c), f(d), domain).unwrap()
    }

    fn close(a: &CMatrix<f64>, b: &CMatrix<f64>, tol: f64) -> bool {
        a.shape() == b.shape() && (a - b).iter().all(|z| z.norm() <= tol)
    }

    #[test]
    fn rejects_bad_dimensions() {
        let a = from_real_rows::<f64>(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let b = from_real_rows::<f64>(1, 1, &[1.0]);
        let err = StateSpaceSystem::new(a, b.clone(), b.clone(), b, Domain::Continuous);
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn is_real_flag() {
        let sys = scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0);
        assert!(sys.is_real());
        let mut a = sys.a().clone();
        a[(0, 0)] = cplx(-1.0, 0.5);
        let sys = StateSpaceSystem::new(a, sys.b().clone(), sys.c().clone(), sys.d().clone(), Domain::Continuous)
            .unwrap();
        assert!(!sys.is_real());
    }

    #[test]
    fn shift_examples() {
        let m = scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0);
        assert_eq!(shifted_system(&m, 0.0).unwrap(), m);
        let s = shifted_system(&m, 2.0).unwrap();
        assert_eq!(s.a()[(0, 0)], cplx(0.0, 0.0));
        assert_eq!(s.d()[(0, 0)], cplx(0.0, 0.0));

        let md = scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0);
        let s = shifted_system(&md, 0.5).unwrap();
        assert_eq!(s.a()[(0, 0)].re, 0.0);
        assert_eq!(s.b()[(0, 0)].re, 2.0);
        assert_eq!(s.c()[(0, 0)].re, 2.0);
        assert_eq!(s.d()[(0, 0)].re, 1.0);
        assert!(matches!(shifted_system(&md, 1.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn passivity_matrix_examples() {
        let i1 = CMatrix::<f64>::identity(1, 1);
        let w = passivity_matrix_cont(&i1, &scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!(close(&w, &from_real_rows(2, 2, &[2.0, 0.0, 0.0, 2.0]), 0.0));
        let w = passivity_matrix_cont(&i1, &scalar(Domain::Continuous, -1.0, 1.0, 2.0, 2.0)).unwrap();
        assert!(close(&w, &from_real_rows(2, 2, &[2.0, 1.0, 1.0, 4.0]), 0.0));
        let z = CMatrix::<f64>::zeros(1, 1);
        let w = passivity_matrix_cont(&z, &scalar(Domain::Continuous, -3.0, 5.0, 2.0, 1.5)).unwrap();
        assert!(close(&w, &from_real_rows(2, 2, &[0.0, 2.0, 2.0, 3.0]), 0.0));

        let two = i1 * cplx(2.0, 0.0);
        let w = passivity_matrix_disc(&two, &scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0)).unwrap();
        let want = from_real_rows(3, 3, &[2.0, 0.0, 2.0, 0.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        assert!(close(&w, &want, 0.0));
    }

    #[test]
    fn bracket_examples() {
        let b = xi_bracket(&scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((b.xi_lb - 2.0).abs() < 1e-15 && (b.xi_ub - 2.0).abs() < 1e-15);
        let b = xi_bracket(&scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((b.xi_lb - 0.5 * (2.0 - 5f64.sqrt())).abs() < 1e-14);
        assert_eq!(b.xi_ub, 1.0);
        let b = xi_bracket(&scalar(Domain::Continuous, -1.0, 1.0, 2.0, 2.0)).unwrap();
        assert!((b.xi_lb - (3.0 - 2f64.sqrt())).abs() < 1e-14);
        assert!((b.xi_ub - 2.0).abs() < 1e-15);
    }

    #[test]
    fn spectral_bound_examples() {
        let (a, r) = spectral_bounds(&scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!((a, r), (-1.0, 1.0));
        let rot = StateSpaceSystem::<f64>::new(
            from_real_rows(2, 2, &[0.0, 1.0, -1.0, 0.0]),
            from_real_rows(2, 1, &[1.0, 0.0]),
            from_real_rows(1, 2, &[1.0, 0.0]),
            from_real_rows(1, 1, &[1.0]),
            Domain::Continuous,
        )
        .unwrap();
        let (a, r) = spectral_bounds(&rot).unwrap();
        assert!(a.abs() < 1e-14 && (r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn minimality_examples() {
        let tol = PBH_TOL;
        assert_eq!(check_minimality(&scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0), tol), (true, true));
        let a = from_real_rows(2, 2, &[-1.0, 0.0, 0.0, -2.0]);
        let d = from_real_rows(1, 1, &[1.0]);
        let sys = StateSpaceSystem::new(
            a.clone(),
            from_real_rows(2, 1, &[1.0, 0.0]),
            from_real_rows(1, 2, &[1.0, 1.0]),
            d.clone(),
            Domain::Continuous,
        )
        .unwrap();
        assert_eq!(check_minimality(&sys, tol), (false, true));
        let sys = StateSpaceSystem::new(
            a,
            from_real_rows(2, 1, &[1.0, 1.0]),
            from_real_rows(1, 2, &[0.0, 1.0]),
            d,
            Domain::Continuous,
        )
        .unwrap();
        assert_eq!(check_minimality(&sys, tol), (true, false));
    }
}
