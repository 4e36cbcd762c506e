//! Boundary zeros of `γ_ξ` from structured pencils, negative intervals, and
//! the ξ-roots of `det Φ_ξ` at a fixed frequency.

use crate::error::{Error, Result};
use crate::linalg::{generalized_eigenvalues, herm_eig};
use crate::scalar::{cplx, creal, modulus, unit, wrap_angle, CMatrix, Real};
use crate::spectral::{Direction, EvalCache};
use crate::system::{Domain, StateSpaceSystem, Tolerances};
use num_complex::Complex;

fn require<T: Real>(m: &StateSpaceSystem<T>, domain: Domain) -> Result<()> {
    if m.domain() != domain {
        return Err(Error::WrongDomain(match domain {
            Domain::Continuous => "operation requires a continuous model",
            Domain::Discrete => "operation requires a discrete model",
        }));
    }
    Ok(())
}

fn eye<T: Real>(n: usize, s: Complex<T>) -> CMatrix<T> {
    CMatrix::<T>::identity(n, n) * s
}

/// `(M_ξ, N)` with `M_ξ = [[0, A_ξ, B], [A_ξᴴ, 0, Cᴴ], [Bᴴ, C, D_ξᴴ + D_ξ]]` and
/// `N = [[0, iI, 0], [−iI, 0, 0], [0, 0, 0]]`; real eigenvalues `ω` mark
/// zeros of `det Φ_ξ(iω)`.
pub fn build_pencil_cont<T: Real>(m: &StateSpaceSystem<T>, xi: T) -> Result<(CMatrix<T>, CMatrix<T>)> {
    require(m, Domain::Continuous)?;
    let (n, p) = (m.n(), m.m());
    let half = creal(xi * T::lit(0.5));
    let a = m.a() + eye(n, half);
    let dd = m.d_sym() - eye(p, creal(xi));
    let k = 2 * n + p;
    let mut mx = CMatrix::<T>::zeros(k, k);
    mx.view_mut((0, n), (n, n)).copy_from(&a);
    mx.view_mut((0, 2 * n), (n, p)).copy_from(m.b());
    mx.view_mut((n, 0), (n, n)).copy_from(&a.adjoint());
    mx.view_mut((n, 2 * n), (n, p)).copy_from(&m.c().adjoint());
    mx.view_mut((2 * n, 0), (p, n)).copy_from(&m.b().adjoint());
    mx.view_mut((2 * n, n), (p, n)).copy_from(m.c());
    mx.view_mut((2 * n, 2 * n), (p, p)).copy_from(&dd);
    let i = cplx(T::zero(), T::one());
    let mut nm = CMatrix::<T>::zeros(k, k);
    nm.view_mut((0, n), (n, n)).copy_from(&eye(n, i));
    nm.view_mut((n, 0), (n, n)).copy_from(&eye(n, -i));
    Ok((mx, nm))
}

/// `H_ξ = diag(A_ξ, −A_ξᴴ) − [B; Cᴴ] (D_ξᴴ + D_ξ)^{-1} [C, −Bᴴ]`.
pub fn build_hamiltonian_cont<T: Real>(m: &StateSpaceSystem<T>, xi: T) -> Result<CMatrix<T>> {
    require(m, Domain::Continuous)?;
    let (n, p) = (m.n(), m.m());
    let dd = m.d_sym() - eye(p, creal(xi));
    let r_inv = checked_inverse(&dd, "D_xi^H + D_xi")?;
    let a = m.a() + eye(n, creal(xi * T::lit(0.5)));
    let mut left = CMatrix::<T>::zeros(2 * n, p);
    left.view_mut((0, 0), (n, p)).copy_from(m.b());
    left.view_mut((n, 0), (n, p)).copy_from(&m.c().adjoint());
    let mut right = CMatrix::<T>::zeros(p, 2 * n);
    right.view_mut((0, 0), (p, n)).copy_from(m.c());
    right.view_mut((0, n), (p, n)).copy_from(&(-m.b().adjoint()));
    let mut h = CMatrix::<T>::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&a);
    h.view_mut((n, n), (n, n)).copy_from(&(-a.adjoint()));
    Ok(h - left * r_inv * right)
}

/// `D̃_ξ = Dᴴ + D − 2ξI`.
fn d_tilde<T: Real>(m: &StateSpaceSystem<T>, xi: T) -> CMatrix<T> {
    m.d_sym() - eye(m.m(), creal(xi + xi))
}

/// Inverse of a Hermitian block, rejected when its smallest eigenvalue
/// modulus is below `√ε` times its norm.
fn checked_inverse<T: Real>(r: &CMatrix<T>, name: &'static str) -> Result<CMatrix<T>> {
    let eig = herm_eig(r)?;
    let big = eig.values.iter().fold(T::zero(), |a, v| a.max(v.abs()));
    let small = eig.values.iter().fold(T::one() / T::zero(), |a, v| a.min(v.abs()));
    if !(small > T::eps().sqrt() * big.max(T::eps())) {
        return Err(Error::SingularBlock(name));
    }
    r.clone().try_inverse().ok_or(Error::SingularBlock(name))
}

/// `(M_ξ, N_ξ)` with `M_ξ = [[0, A, B], [(ξ−1)I, 0, 0], [Bᴴ, C, D̃_ξ]]` and
/// `N_ξ = [[0, (1−ξ)I, 0], [−Aᴴ, 0, −Cᴴ], [0, 0, 0]]`; unimodular eigenvalues
/// `e^{iω}` mark zeros of `det Φ_ξ(e^{iω})`.
pub fn build_pencil_disc<T: Real>(m: &StateSpaceSystem<T>, xi: T) -> Result<(CMatrix<T>, CMatrix<T>)> {
    require(m, Domain::Discrete)?;
    if xi >= T::one() {
        return Err(Error::InvalidParameter(format!("discrete xi must be < 1, got {xi}")));
    }
    let (n, p) = (m.n(), m.m());
    let k = 2 * n + p;
    let mut mx = CMatrix::<T>::zeros(k, k);
    mx.view_mut((0, n), (n, n)).copy_from(m.a());
    mx.view_mut((0, 2 * n), (n, p)).copy_from(m.b());
    mx.view_mut((n, 0), (n, n)).copy_from(&eye(n, creal(xi - T::one())));
    mx.view_mut((2 * n, 0), (p, n)).copy_from(&m.b().adjoint());
    mx.view_mut((2 * n, n), (p, n)).copy_from(m.c());
    mx.view_mut((2 * n, 2 * n), (p, p)).copy_from(&d_tilde(m, xi));
    let mut nm = CMatrix::<T>::zeros(k, k);
    nm.view_mut((0, n), (n, n)).copy_from(&eye(n, creal(T::one() - xi)));
    nm.view_mut((n, 0), (n, n)).copy_from(&(-m.a().adjoint()));
    nm.view_mut((n, 2 * n), (n, p)).copy_from(&(-m.c().adjoint()));
    Ok((mx, nm))
}

/// `(S_ξ, T_ξ)` with `S_ξ = [[(ξ−1)I, 0], [−BD̃⁻¹Bᴴ, A − BD̃⁻¹C]]` and
/// `T_ξ = [[(BD̃⁻¹C − A)ᴴ, CᴴD̃⁻¹C], [0, (1−ξ)I]]`.
pub fn build_symplectic_disc<T: Real>(m: &StateSpaceSystem<T>, xi: T) -> Result<(CMatrix<T>, CMatrix<T>)> {
    require(m, Domain::Discrete)?;
    if xi >= T::one() {
        return Err(Error::InvalidParameter(format!("discrete xi must be < 1, got {xi}")));
    }
    let n = m.n();
    let r_inv = checked_inverse(&d_tilde(m, xi), "D~_xi")?;
    let brc = m.b() * &r_inv * m.c();
    let mut s = CMatrix::<T>::zeros(2 * n, 2 * n);
    s.view_mut((0, 0), (n, n)).copy_from(&eye(n, creal(xi - T::one())));
    s.view_mut((n, 0), (n, n)).copy_from(&(-(m.b() * &r_inv * m.b().adjoint())));
    s.view_mut((n, n), (n, n)).copy_from(&(m.a() - &brc));
    let mut t = CMatrix::<T>::zeros(2 * n, 2 * n);
    t.view_mut((0, 0), (n, n)).copy_from(&(&brc - m.a()).adjoint());
    t.view_mut((0, n), (n, n)).copy_from(&(m.c().adjoint() * &r_inv * m.c()));
    t.view_mut((n, n), (n, n)).copy_from(&eye(n, creal(T::one() - xi)));
    Ok((s, t))
}

/// Confirmed zeros of `γ_ξ` on the boundary, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet<T> {
    pub omegas: Vec<T>,
    /// Frequencies added by injection rather than found by the pencil.
    pub injected: Vec<T>,
}

impl<T> ZeroSet<T> {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }
    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}

/// An open interval on which `γ_ξ < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeInterval<T> {
    pub lo: T,
    pub hi: T,
    pub mid: T,
    pub gamma_mid: T,
}

impl<T: Real> NegativeInterval<T> {
    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativeIntervals<T> {
    pub intervals: Vec<NegativeInterval<T>>,
}

impl<T: Real> NegativeIntervals<T> {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Distance below which candidate zeros are one zero. A tangential zero is
/// a double pencil eigenvalue, which rounding splits by about `√ε`.
fn merge_tol<T: Real>(w: T) -> T {
    T::lit(4.0) * T::eps().sqrt() * (T::one() + w.abs())
}

/// Sorts and replaces each cluster of nearby values by its mean.
fn sort_merge<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    let mut cluster: Vec<T> = Vec::new();
    for w in v {
        if let Some(&last) = cluster.last() {
            if w - last > merge_tol(last) {
                out.push(mean(&cluster));
                cluster.clear();
            }
        }
        cluster.push(w);
    }
    if !cluster.is_empty() {
        out.push(mean(&cluster));
    }
    out
}

fn mean<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &b| a + b) / T::from_usize(v.len()).expect("small count")
}

/// `|γ| ≤ tol · max(1, ‖Φ‖)`, or a Newton distance along `dir` to a zero
/// below `tol · (1 + |coordinate|)`. The second test admits steep zeros next
/// to lightly damped poles, where rounding in the coordinate dominates `|γ|`.
fn confirmed<T: Real>(cache: &EvalCache<T>, xi: T, omega: T, tol: T, dir: Direction) -> bool {
    match cache.gamma(xi, omega) {
        Ok(g) if g.gamma.abs() <= tol * g.scale.max(T::one()) => true,
        Ok(_) => {
            let coord = match dir {
                Direction::Omega => omega,
                Direction::Xi => xi,
            };
            match cache.gamma_derivs(xi, omega, dir) {
                Ok(d) => d.gamma.abs() <= tol * (T::one() + coord.abs()) * d.d1.abs(),
                Err(_) => false,
            }
        }
        Err(_) => false,
    }
}

/// Candidate boundary zeros of `det Φ_ξ` from the pencil eigenvalues.
pub fn pencil_candidates<T: Real>(cache: &EvalCache<T>, xi: T, realness: T) -> Result<Vec<T>> {
    let sys = cache.system();
    cache.record_pencil_solve();
    let mut out = Vec::new();
    match sys.domain() {
        Domain::Continuous => {
            let (mx, nm) = build_pencil_cont(sys, xi)?;
            for e in generalized_eigenvalues(&mx, &nm)? {
                if let Some(l) = e.value() {
                    if l.im.abs() <= realness * modulus(l).max(T::one()) {
                        out.push(l.re);
                    }
                }
            }
        }
        Domain::Discrete => {
            let (mx, nm) = build_pencil_disc(sys, xi)?;
            for e in generalized_eigenvalues(&mx, &nm)? {
                if let Some(l) = e.value() {
                    if (modulus(l) - T::one()).abs() <= realness {
                        out.push(wrap_angle(l.im.atan2(l.re)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Confirmed zeros of `γ_ξ`, plus `injected` appended unconditionally.
pub fn gamma_zeros<T: Real>(
    cache: &EvalCache<T>,
    xi: T,
    injected: Option<T>,
    tol: &Tolerances<T>,
) -> Result<ZeroSet<T>> {
    let mut cands = pencil_candidates(cache, xi, tol.eig_realness_tol)?;
    if cache.is_real() {
        // Real data: zeros come in ±ω pairs; mirror to guard against one
        // member of a pair being rejected by the realness test.
        let mirrored: Vec<T> = cands.iter().map(|w| -*w).collect();
        cands.extend(mirrored);
        if cache.domain() == Domain::Discrete {
            cands.iter_mut().for_each(|w| *w = wrap_angle(*w));
        }
    }
    let mut omegas: Vec<T> = sort_merge(cands)
        .into_iter()
        .filter(|&w| confirmed(cache, xi, w, tol.zero_confirm_tol, Direction::Omega))
        .collect();
    if cache.domain() == Domain::Discrete && omegas.len() > 1 {
        // −π + δ and π − δ are the same point of the circle.
        let first = omegas[0];
        let last = omegas[omegas.len() - 1];
        if first + T::two_pi() - last <= merge_tol(T::pi()) {
            omegas.remove(0);
        }
    }
    let mut inj = Vec::new();
    if let Some(w) = injected {
        let w = match cache.domain() {
            Domain::Continuous => w,
            Domain::Discrete => wrap_angle(w),
        };
        inj.push(w);
        if !omegas.iter().any(|&z| (z - w).abs() <= merge_tol(w)) {
            omegas.push(w);
            omegas.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        }
    }
    Ok(ZeroSet {
        omegas,
        injected: inj,
    })
}

/// Midpoint values above `−NEGATIVE_FLOOR · ε · max(1, ‖Φ‖)` are rounding noise.
const NEGATIVE_FLOOR: f64 = 100.0;

/// Intervals between consecutive zeros on which `γ_ξ` is negative at the
/// midpoint, beyond rounding level. Continuous tails are probed one unit (scaled) outside the
/// extreme zeros; discrete zeros are closed around the circle with
/// `min Ω + 2π`.
pub fn negative_intervals<T: Real>(
    cache: &EvalCache<T>,
    zeros: &ZeroSet<T>,
    xi: T,
) -> Result<NegativeIntervals<T>> {
    let w = &zeros.omegas;
    let mut intervals = Vec::new();
    if w.is_empty() {
        return Ok(NegativeIntervals { intervals });
    }
    let probe = |lo: T, hi: T, mid: T, intervals: &mut Vec<NegativeInterval<T>>| -> Result<()> {
        let v = cache.gamma(xi, mid)?;
        let g = v.gamma;
        if g < -T::lit(NEGATIVE_FLOOR) * T::eps() * v.scale.max(T::one()) {
            intervals.push(NegativeInterval {
                lo,
                hi,
                mid,
                gamma_mid: g,
            });
        }
        Ok(())
    };
    let half = T::lit(0.5);
    match cache.domain() {
        Domain::Continuous => {
            let first = w[0];
            let last = w[w.len() - 1];
            let inf = T::one() / T::zero();
            probe(-inf, first, first - first.abs().max(T::one()), &mut intervals)?;
            for pair in w.windows(2) {
                probe(pair[0], pair[1], (pair[0] + pair[1]) * half, &mut intervals)?;
            }
            probe(last, inf, last + last.abs().max(T::one()), &mut intervals)?;
        }
        Domain::Discrete => {
            let mut closed = w.clone();
            closed.push(w[0] + T::two_pi());
            for pair in closed.windows(2) {
                let mid = wrap_angle((pair[0] + pair[1]) * half);
                probe(pair[0], pair[1], mid, &mut intervals)?;
            }
        }
    }
    Ok(NegativeIntervals { intervals })
}

/// Boundary point `iω` or `e^{iω}` as the pencil parameter.
fn boundary_pencil<T: Real>(sys: &StateSpaceSystem<T>, omega: T) -> (CMatrix<T>, CMatrix<T>) {
    let (n, p) = (sys.n(), sys.m());
    let k = 2 * n + p;
    let half = creal(T::lit(0.5));
    let mut k0 = CMatrix::<T>::zeros(k, k);
    let mut g = CMatrix::<T>::zeros(k, k);
    match sys.domain() {
        Domain::Continuous => {
            // M_ξ − ωN = (M_0 − ωN) + ξG
            let (m0, nm) = build_pencil_cont(sys, T::zero()).expect("domain checked");
            k0 = m0 - nm * creal(omega);
            g.view_mut((0, n), (n, n)).copy_from(&eye(n, half));
            g.view_mut((n, 0), (n, n)).copy_from(&eye(n, half));
            g.view_mut((2 * n, 2 * n), (p, p)).copy_from(&eye(p, creal(-T::one())));
        }
        Domain::Discrete => {
            // [[0, A − (1−ξ)zI, B], [zAᴴ − (1−ξ)I, 0, zCᴴ], [Bᴴ, C, D̃_ξ]]
            let z = unit(omega);
            k0.view_mut((0, n), (n, n)).copy_from(&(sys.a() - eye(n, z)));
            k0.view_mut((0, 2 * n), (n, p)).copy_from(sys.b());
            k0.view_mut((n, 0), (n, n))
                .copy_from(&(sys.a().adjoint() * z - eye(n, creal(T::one()))));
            k0.view_mut((n, 2 * n), (n, p)).copy_from(&(sys.c().adjoint() * z));
            k0.view_mut((2 * n, 0), (p, n)).copy_from(&sys.b().adjoint());
            k0.view_mut((2 * n, n), (p, n)).copy_from(sys.c());
            k0.view_mut((2 * n, 2 * n), (p, p)).copy_from(&sys.d_sym());
            g.view_mut((0, n), (n, n)).copy_from(&eye(n, z));
            g.view_mut((n, 0), (n, n)).copy_from(&eye(n, creal(T::one())));
            g.view_mut((2 * n, 2 * n), (p, p)).copy_from(&eye(p, creal(T::lit(-2.0))));
        }
    }
    (k0, g)
}

/// The linear-in-ξ pencil `K_0 + ξG` at frequency `ω`.
pub fn build_xi_pencil<T: Real>(sys: &StateSpaceSystem<T>, omega: T) -> (CMatrix<T>, CMatrix<T>) {
    boundary_pencil(sys, omega)
}

/// Real `ξ` (below 1 in the discrete case) with `γ_ω(ξ) = 0`, sorted.
pub fn xi_roots_at_omega<T: Real>(cache: &EvalCache<T>, omega: T, tol: &Tolerances<T>) -> Result<Vec<T>> {
    if !omega.is_finite_real() {
        return Err(Error::InvalidParameter("omega must be finite".into()));
    }
    let sys = cache.system();
    let (k0, g) = boundary_pencil(sys, omega);
    cache.record_pencil_solve();
    let mut cands = Vec::new();
    for e in generalized_eigenvalues(&k0, &(-g))? {
        if let Some(l) = e.value() {
            if l.im.abs() <= tol.eig_realness_tol * modulus(l).max(T::one()) {
                let xi = l.re;
                if sys.domain() == Domain::Discrete && xi >= T::one() {
                    continue;
                }
                cands.push(xi);
            }
        }
    }
    Ok(sort_merge(cands)
        .into_iter()
        .filter(|&xi| confirmed(cache, xi, omega, tol.zero_confirm_tol, Direction::Xi))
        .collect())
}

/// `‖SᴴJS − TᴴJT‖_F / max(1, ‖S‖²)` with `J = [[0, I], [−I, 0]]`.
pub fn symplectic_residual<T: Real>(s: &CMatrix<T>, t: &CMatrix<T>) -> T {
    let n2 = s.nrows();
    let n = n2 / 2;
    let mut j = CMatrix::<T>::zeros(n2, n2);
    j.view_mut((0, n), (n, n)).copy_from(&eye(n, creal(T::one())));
    j.view_mut((n, 0), (n, n)).copy_from(&eye(n, creal(-T::one())));
    let r = s.adjoint() * &j * s - t.adjoint() * &j * t;
    let scale = crate::scalar::fro_norm(s).max(crate::scalar::fro_norm(t)).max(T::one());
    crate::scalar::fro_norm(&r) / (scale * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::from_real_rows;
    use std::f64::consts::PI;

    fn scalar(domain: Domain, a: f64, b: f64, c: f64, d: f64) -> StateSpaceSystem<f64> {
        let f = |v: f64| from_real_rows::<f64>(1, 1, &[v]);
        StateSpaceSystem::new(f(a), f(b), f(c), f(d), domain).unwrap()
    }

    #[test]
    fn continuous_pencil_blocks() {
        let (m0, n) = build_pencil_cont(&scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0), 0.0).unwrap();
        assert_eq!(m0, from_real_rows(3, 3, &[0.0, -1.0, 1.0, -1.0, 0.0, 1.0, 1.0, 1.0, 2.0]));
        let i = cplx(0.0, 1.0);
        assert_eq!(n[(0, 1)], i);
        assert_eq!(n[(1, 0)], -i);
        assert_eq!(n, n.adjoint());
    }

    #[test]
    fn discrete_pencil_blocks() {
        let (m0, n0) = build_pencil_disc(&scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0), 0.0).unwrap();
        assert_eq!(m0, from_real_rows(3, 3, &[0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 1.0, 1.0, 2.0]));
        assert_eq!(n0, from_real_rows(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn tangential_zero_at_pi() {
        let sys = scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0);
        let (m0, n0) = build_pencil_disc(&sys, 0.0).unwrap();
        let unimodular: Vec<_> = generalized_eigenvalues(&m0, &n0)
            .unwrap()
            .into_iter()
            .filter_map(|e| e.value())
            .filter(|l| (l.norm() - 1.0).abs() < 1e-6)
            .collect();
        assert_eq!(unimodular.len(), 2);
        assert!(unimodular.iter().all(|l| (l + 1.0).norm() < 1e-6));

        let cache = EvalCache::new(&sys).unwrap();
        let tol = Tolerances::default();
        let z = gamma_zeros(&cache, 0.0, None, &tol).unwrap();
        assert_eq!(z.omegas.len(), 1);
        assert!((z.omegas[0].abs() - PI).abs() < 1e-6);
        let neg = negative_intervals(&cache, &z, 0.0).unwrap();
        assert!(neg.is_empty());
    }

    #[test]
    fn no_zeros_for_passive_scalar() {
        let cache = EvalCache::new(&scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0)).unwrap();
        let tol = Tolerances::default();
        let z = gamma_zeros(&cache, 0.0, None, &tol).unwrap();
        assert!(z.is_empty());
        let z = gamma_zeros(&cache, 0.0, Some(0.7), &tol).unwrap();
        assert_eq!(z.omegas, vec![0.7]);
        assert_eq!(z.injected, vec![0.7]);
        assert!(negative_intervals(&cache, &ZeroSet { omegas: vec![], injected: vec![] }, 0.0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn wrap_around_interval_contains_pi() {
        let sys = scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0);
        let cache = EvalCache::new(&sys).unwrap();
        let xi = 0.2;
        let z = gamma_zeros(&cache, xi, None, &Tolerances::default()).unwrap();
        // γ_ξ ∝ cos ω/(1−ξ) + (1−ξ) vanishes at cos ω = −(1−ξ)²
        let w0 = (-(1.0f64 - xi).powi(2)).acos();
        assert_eq!(z.omegas.len(), 2);
        assert!((z.omegas[0] + w0).abs() < 1e-9 && (z.omegas[1] - w0).abs() < 1e-9);
        let neg = negative_intervals(&cache, &z, xi).unwrap();
        assert_eq!(neg.intervals.len(), 1);
        let iv = neg.intervals[0];
        assert!(iv.lo < PI && iv.hi > PI && iv.mid.abs() > 3.0);
    }

    #[test]
    fn xi_root_at_pi_is_zero() {
        let cache = EvalCache::new(&scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0)).unwrap();
        let roots = xi_roots_at_omega(&cache, PI, &Tolerances::default()).unwrap();
        assert!(roots.iter().any(|r| r.abs() < 1e-12), "{roots:?}");
        let cache = EvalCache::new(&scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0)).unwrap();
        // γ_0(ξ) = 2(1/(1−ξ/2) + 1 − ξ/2) at ω = 0 is positive for ξ < 2 and has no root
        let roots = xi_roots_at_omega(&cache, 0.0, &Tolerances::default()).unwrap();
        assert!(roots.iter().all(|&r| r >= 2.0 - 1e-9), "{roots:?}");
    }

    #[test]
    fn singular_blocks_rejected() {
        let sys = scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0);
        assert!(matches!(build_hamiltonian_cont(&sys, 2.0), Err(Error::SingularBlock(_))));
        let sys = scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0);
        assert!(matches!(build_symplectic_disc(&sys, 1.0), Err(Error::InvalidParameter(_))));
        let sys = scalar(Domain::Discrete, 0.5, 1.0, 1.0, 0.25);
        assert!(matches!(build_symplectic_disc(&sys, 0.25), Err(Error::SingularBlock(_))));
    }
}
