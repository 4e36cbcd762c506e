//! Brute-force reference value of `Ξ`.
//!
//! Shares no evaluation code with the solvers: the resolvent comes from a
//! Schur form and triangular solves, `λ_min` is closed form for `m ≤ 2`, and
//! the boundary minimum is found by a dense grid plus golden-section
//! refinement. The outer root is located by Illinois regula falsi.

use crate::error::{Error, Result};
use crate::linalg::herm_eig;
use crate::scalar::{cplx, creal, modulus, unit, CMatrix, Real};
use crate::system::{xi_bracket, Domain, StateSpaceSystem};
use num_complex::Complex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub grid: usize,
    /// Local grid minima refined by golden section.
    pub refine: usize,
    pub max_iter: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            grid: 100_000,
            refine: 8,
            max_iter: 200,
        }
    }
}

struct Schur<T: Real> {
    s: CMatrix<T>,
    cq: CMatrix<T>,
    qb: CMatrix<T>,
    d: CMatrix<T>,
    domain: Domain,
    rho: T,
}

impl<T: Real> Schur<T> {
    fn new(m: &StateSpaceSystem<T>) -> Result<Self> {
        let n = m.n();
        let schur = nalgebra::linalg::Schur::try_new(m.a().clone(), T::eps(), 200 * n.max(10))
            .ok_or(Error::Eigen("Schur iteration did not converge"))?;
        let (q, s) = schur.unpack();
        let rho = (0..n).map(|i| modulus(s[(i, i)])).fold(T::zero(), |a, b| a.max(b));
        Ok(Self {
            cq: m.c() * &q,
            qb: q.adjoint() * m.b(),
            d: m.d().clone(),
            domain: m.domain(),
            s,
            rho,
        })
    }

    /// `λ_min` of `T + T^H` for the shifted model at `ω`.
    fn gamma(&self, xi: T, omega: T) -> T {
        let n = self.s.nrows();
        let m = self.d.nrows();
        let half = T::lit(0.5);
        let (sigma, scale, dshift) = match self.domain {
            Domain::Continuous => (cplx(-xi * half, omega), T::one(), xi * half),
            Domain::Discrete => {
                let u = T::one() - xi;
                (unit(omega) * creal(u), T::one() / u, xi)
            }
        };
        // Back substitution with (σI − S), column by column.
        let mut x = vec![Complex::new(T::zero(), T::zero()); n * m];
        for k in 0..m {
            for i in (0..n).rev() {
                let mut acc = self.qb[(i, k)];
                for j in (i + 1)..n {
                    acc += self.s[(i, j)] * x[j * m + k];
                }
                let piv = sigma - self.s[(i, i)];
                if piv.re == T::zero() && piv.im == T::zero() {
                    return T::lit(f64::NEG_INFINITY);
                }
                x[i * m + k] = acc / piv;
            }
        }
        let mut t = CMatrix::<T>::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                let mut acc = Complex::new(T::zero(), T::zero());
                for i in 0..n {
                    acc += self.cq[(a, i)] * x[i * m + b];
                }
                t[(a, b)] = (acc + self.d[(a, b)]) * creal(scale);
            }
            t[(a, a)] -= creal(dshift * scale);
        }
        let phi = &t + t.adjoint();
        lambda_min(&phi)
    }
}

fn lambda_min<T: Real>(phi: &CMatrix<T>) -> T {
    match phi.nrows() {
        1 => phi[(0, 0)].re,
        2 => {
            let a = phi[(0, 0)].re;
            let d = phi[(1, 1)].re;
            let b: Complex<T> = phi[(0, 1)];
            let half = T::lit(0.5);
            let mean = (a + d) * half;
            let rad = ((a - d) * half).hypot(modulus(b));
            mean - rad
        }
        _ => herm_eig(phi).map(|e| e.values[0]).unwrap_or(T::lit(f64::NAN)),
    }
}

/// Boundary minimum of `γ_ξ` by grid search and golden-section refinement.
fn min_gamma<T: Real>(sch: &Schur<T>, xi: T, opts: &OracleOptions) -> T {
    let k = opts.grid.max(8);
    let pi = T::pi();
    let w_scale = T::one().max(sch.rho);
    // Grid in a parameter θ; the boundary point is ω(θ).
    let (t_lo, t_hi) = match sch.domain {
        Domain::Continuous => (-pi * T::lit(0.5), pi * T::lit(0.5)),
        Domain::Discrete => (-pi, pi),
    };
    let omega_of = |theta: T| match sch.domain {
        Domain::Continuous => w_scale * theta.tan(),
        Domain::Discrete => theta,
    };
    let f = |theta: T| sch.gamma(xi, omega_of(theta));
    let step = (t_hi - t_lo) / T::from_usize(k).unwrap();
    let thetas: Vec<T> = (0..k)
        .map(|j| t_lo + step * (T::from_usize(j).unwrap() + T::lit(0.5)))
        .collect();
    let vals: Vec<T> = thetas.iter().map(|&t| f(t)).collect();
    let mut best = vals.iter().copied().fold(T::lit(f64::INFINITY), |a, b| a.min(b));
    let periodic = sch.domain == Domain::Discrete;
    let mut minima: Vec<usize> = (0..k)
        .filter(|&j| {
            let left = if j > 0 { Some(vals[j - 1]) } else if periodic { Some(vals[k - 1]) } else { None };
            let right = if j + 1 < k { Some(vals[j + 1]) } else if periodic { Some(vals[0]) } else { None };
            left.is_none_or(|v| vals[j] <= v) && right.is_none_or(|v| vals[j] <= v)
        })
        .collect();
    minima.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(std::cmp::Ordering::Equal));
    let ratio = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    for &j in minima.iter().take(opts.refine) {
        let mut a = thetas[j] - step;
        let mut b = thetas[j] + step;
        if !periodic {
            a = a.max(t_lo + step * T::lit(1e-3));
            b = b.min(t_hi - step * T::lit(1e-3));
        }
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..200 {
            if (b - a).abs() <= T::eps().sqrt() * T::eps().sqrt().max(T::lit(4.0) * T::eps() * (T::one() + a.abs())) {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = f(d);
            }
        }
        best = best.min(fc).min(fd);
    }
    // A continuous minimum may sit at ω = ±∞ when the tail is decreasing.
    if sch.domain == Domain::Continuous {
        let tail = &sch.d + sch.d.adjoint();
        best = best.min(lambda_min(&tail) - xi);
    }
    best
}

/// `min_ω γ_ξ(ω)` computed by the oracle.
pub fn oracle_min_gamma<T: Real>(m: &StateSpaceSystem<T>, xi: T, opts: &OracleOptions) -> Result<T> {
    Ok(min_gamma(&Schur::new(m)?, xi, opts))
}

/// Reference `Ξ`: the root of `ξ ↦ min_ω γ_ξ(ω)` in the bracket.
pub fn oracle_xi<T: Real>(m: &StateSpaceSystem<T>, opts: &OracleOptions) -> Result<T> {
    let bracket = xi_bracket(m)?;
    let sch = Schur::new(m)?;
    let f = |xi: T| min_gamma(&sch, xi, opts);
    let (lb, ub) = (bracket.xi_lb, bracket.xi_ub);
    let hi0 = ub - T::lit(1e-12) * (T::one() + ub.abs());
    if hi0 <= lb {
        return Ok(lb);
    }
    let f_hi = f(hi0);
    if f_hi >= T::zero() {
        return Ok(ub);
    }
    let f_lo = f(lb);
    if f_lo <= T::zero() {
        return Ok(lb);
    }
    // Illinois on [pos, neg] with f(pos) > 0 > f(neg).
    let (mut pos, mut fpos, mut neg, mut fneg) = (lb, f_lo, hi0, f_hi);
    let mut last_side = 0i8;
    let half = T::lit(0.5);
    for _ in 0..opts.max_iter {
        let width = (neg - pos).abs();
        if width <= T::lit(4.0) * T::eps() * (T::one() + pos.abs().max(neg.abs())) {
            break;
        }
        let mut c = pos - fpos * (neg - pos) / (fneg - fpos);
        if !(c > pos.min(neg) && c < pos.max(neg)) {
            c = (pos + neg) * half;
        }
        let fc = f(c);
        if fc == T::zero() {
            return Ok(c);
        }
        if fc > T::zero() {
            pos = c;
            fpos = fc;
            if last_side == 1 {
                fneg *= half;
            }
            last_side = 1;
        } else {
            neg = c;
            fneg = fc;
            if last_side == -1 {
                fpos *= half;
            }
            last_side = -1;
        }
    }
    Ok((pos + neg) * half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::from_real_rows;

    fn scalar(domain: Domain, a: f64, b: f64, c: f64, d: f64) -> StateSpaceSystem<f64> {
        let f = |v: f64| from_real_rows::<f64>(1, 1, &[v]);
        StateSpaceSystem::new(f(a), f(b), f(c), f(d), domain).unwrap()
    }

    #[test]
    fn scalar_anchors() {
        let o = OracleOptions {
            grid: 2000,
            ..Default::default()
        };
        let x = oracle_xi(&scalar(Domain::Continuous, -1.0, 1.0, 2.0, 2.0), &o).unwrap();
        assert!((x - 2.0).abs() < 1e-8, "{x}");
        let x = oracle_xi(&scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0), &o).unwrap();
        assert!(x.abs() < 1e-8, "{x}");
    }

    #[test]
    fn min_gamma_scalar() {
        // γ_0(ω) = 2 + 2/(1+ω²) for {−1,1,1,1}: infimum 2 at infinity.
        let g = oracle_min_gamma(&scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0), 0.0, &OracleOptions::default()).unwrap();
        assert!((g - 2.0).abs() < 1e-9, "{g}");
    }
}
