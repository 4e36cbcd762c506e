//! Bisection on `[Ξ_lb, Ξ_ub]` with a pencil-based passivity test.

use crate::error::Result;
use crate::pencil::{gamma_zeros, negative_intervals};
use crate::scalar::Real;
use crate::spectral::EvalCache;
use crate::system::{xi_bracket, StateSpaceSystem, Tolerances};
use crate::xi::{absolute_threshold, Algorithm, Certificate, EigCounts, XiResult};
use std::time::Instant;

/// `true` when `γ_ξ > 0` everywhere on the boundary.
fn passive_at<T: Real>(cache: &EvalCache<T>, xi: T, tol: &Tolerances<T>) -> Result<bool> {
    if cache.gamma_only(xi, T::zero())? <= T::zero() {
        return Ok(false);
    }
    let zeros = gamma_zeros(cache, xi, None, tol)?;
    Ok(negative_intervals(cache, &zeros, xi)?.is_empty())
}

pub fn compute_xi_bisection<T: Real>(m: &StateSpaceSystem<T>, tol: &Tolerances<T>) -> Result<XiResult<T>> {
    let started = Instant::now();
    tol.validate()?;
    let bracket = xi_bracket(m)?;
    let cache = EvalCache::new(m)?;
    let mut result = XiResult {
        algorithm: Algorithm::Bisection,
        xi: bracket.xi_lb,
        bracket,
        pseudoroots: Vec::new(),
        restarts: 0,
        iterations: 0,
        estimates: Vec::new(),
        eig_counts: EigCounts {
            pencil_order: 2 * m.n() + m.m(),
            pencil_solves: 0,
            small_solves: 0,
        },
        elapsed: 0.0,
        certificate: Certificate::BracketDegenerate,
        tau: tol.tau,
    };
    let (mut lo, mut hi) = (bracket.xi_lb, bracket.xi_ub);
    if hi - tol.tau * hi.abs() > lo {
        let half = T::lit(0.5);
        while hi - lo > tol.tau * (T::one() + lo.abs().max(hi.abs())) {
            let mid = (lo + hi) * half;
            if mid <= lo || mid >= hi {
                break;
            }
            result.iterations += 1;
            if passive_at(&cache, mid, tol)? {
                lo = mid;
            } else {
                hi = mid;
            }
            result.estimates.push(lo);
        }
        result.xi = lo;
        result.certificate = if lo.abs() < absolute_threshold(m) {
            Certificate::AbsoluteMode
        } else {
            Certificate::NoNegativeRegion
        };
    }
    result.eig_counts.pencil_solves = cache.pencil_solves();
    result.eig_counts.small_solves = cache.small_solves();
    result.elapsed = started.elapsed().as_secs_f64();
    Ok(result)
}
