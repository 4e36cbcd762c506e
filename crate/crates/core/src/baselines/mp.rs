//! Midpoint restarts: each pass solves the ξ-pencil at the midpoint of the
//! widest negative interval.

use crate::error::{Error, Result};
use crate::pencil::{gamma_zeros, negative_intervals, xi_roots_at_omega};
use crate::scalar::{wrap_angle, Real};
use crate::spectral::EvalCache;
use crate::system::{xi_bracket, Domain, StateSpaceSystem, Tolerances};
use crate::xi::{absolute_threshold, pick_interval, step_down, Algorithm, Certificate, EigCounts, IntervalRule, XiResult};
use std::time::Instant;

/// Relative offset of the first trial value below `Ξ_ub`.
const START_OFFSET: f64 = 1e-4;
const MAX_PASSES: usize = 500;

pub fn compute_xi_mp<T: Real>(m: &StateSpaceSystem<T>, tol: &Tolerances<T>) -> Result<XiResult<T>> {
    let started = Instant::now();
    tol.validate()?;
    let bracket = xi_bracket(m)?;
    let cache = EvalCache::new(m)?;
    let abs_thr = absolute_threshold(m);
    let mut result = XiResult {
        algorithm: Algorithm::Mp,
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
    let finish = |mut r: XiResult<T>| {
        r.eig_counts.pencil_solves = cache.pencil_solves();
        r.eig_counts.small_solves = cache.small_solves();
        r.elapsed = started.elapsed().as_secs_f64();
        r
    };

    let ub = bracket.xi_ub;
    let (mut xi, mut absolute) = if ub.abs() < abs_thr {
        (ub - tol.tau, true)
    } else {
        (ub - T::lit(START_OFFSET) * ub.abs(), false)
    };
    if xi <= bracket.xi_lb {
        return Ok(finish(result));
    }
    result.estimates.push(xi);
    let mut omega_hat: Option<T> = None;

    for _ in 0..MAX_PASSES {
        result.iterations += 1;
        let zeros = gamma_zeros(&cache, xi, omega_hat, tol)?;
        let ints = negative_intervals(&cache, &zeros, xi)?;
        let mut next_omega = (!ints.is_empty()).then(|| pick_interval(&ints.intervals, IntervalRule::Widest).mid);
        if next_omega.is_none() && m.domain() == Domain::Discrete {
            // γ may be negative on the whole circle without any zero.
            let probe = omega_hat.map_or(T::zero(), |w| wrap_angle(w + T::frac_pi_2()));
            if cache.gamma_only(xi, probe)? < T::zero() {
                next_omega = Some(probe);
            }
        }
        let Some(w) = next_omega else {
            result.xi = xi;
            result.certificate = if absolute {
                Certificate::AbsoluteMode
            } else {
                Certificate::NoNegativeRegion
            };
            return Ok(finish(result));
        };
        omega_hat = Some(w);
        let roots = xi_roots_at_omega(&cache, w, tol)?;
        let rho = roots
            .into_iter()
            .filter(|&r| r > bracket.xi_lb && r <= xi)
            .fold(None, |acc: Option<T>, r| Some(acc.map_or(r, |a| a.min(r))));
        let Some(rho) = rho else {
            return Err(Error::Stagnation {
                xi: xi.as_f64(),
                omega: w.as_f64(),
                reason: "no confirmed ξ-root below the current estimate".into(),
            });
        };
        result.restarts += 1;
        let (next, abs) = step_down(rho, tol.tau, abs_thr);
        absolute = abs;
        if next <= bracket.xi_lb {
            result.xi = bracket.xi_lb;
            result.certificate = Certificate::BracketDegenerate;
            return Ok(finish(result));
        }
        if next >= xi {
            return Err(Error::Stagnation {
                xi: xi.as_f64(),
                omega: w.as_f64(),
                reason: "estimate did not decrease".into(),
            });
        }
        xi = next;
        result.estimates.push(xi);
    }
    Err(Error::NonConvergence {
        iterations: MAX_PASSES,
        eps: xi.as_f64(),
        x: omega_hat.map_or(f64::NAN, |w| w.as_f64()),
    })
}
