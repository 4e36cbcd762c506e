//! Drivers computing the extremal passivity parameter `Ξ` with HEC.

use crate::error::{Error, Result};
use crate::hec::{expand, hec_solve_with, Eval, HecOptions, PseudoRoot, RootProblem, Sense, XDomain};
use crate::pencil::{gamma_zeros, negative_intervals, NegativeInterval};
use crate::scalar::{fro_norm, wrap_angle, Real};
use crate::spectral::EvalCache;
use crate::system::{d_scale, xi_bracket, Domain, StateSpaceSystem, Tolerances, XiBracket};
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Why the returned estimate is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// No negative region of `γ_ξ` remains at the returned `ξ`.
    NoNegativeRegion,
    /// The bracket left no room below `Ξ_ub`; the lower bound is returned.
    BracketDegenerate,
    /// `Ξ` is numerically zero and the last step was absolute.
    AbsoluteMode,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::NoNegativeRegion => "NoNegativeRegion",
            Certificate::BracketDegenerate => "BracketDegenerate",
            Certificate::AbsoluteMode => "AbsoluteMode",
        }
    }
}

/// Which negative interval seeds HEC when several exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntervalRule {
    #[default]
    MostNegative,
    Widest,
    Leftmost,
}

impl std::str::FromStr for IntervalRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "most-negative" => Ok(IntervalRule::MostNegative),
            "widest" => Ok(IntervalRule::Widest),
            "leftmost" => Ok(IntervalRule::Leftmost),
            other => Err(Error::Parse(format!("unknown interval rule '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Hec,
    Mp,
    Bisection,
    Oracle,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Hec => "hec",
            Algorithm::Mp => "mp",
            Algorithm::Bisection => "bisection",
            Algorithm::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hec" => Ok(Algorithm::Hec),
            "mp" => Ok(Algorithm::Mp),
            "bisection" => Ok(Algorithm::Bisection),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(Error::Parse(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Eigenproblem counts: pencils of order `2n + m` and Hermitian `m × m` problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigCounts {
    pub pencil_order: usize,
    pub pencil_solves: usize,
    pub small_solves: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XiResult<T> {
    pub algorithm: Algorithm,
    pub xi: T,
    pub bracket: XiBracket<T>,
    pub pseudoroots: Vec<PseudoRoot<T>>,
    pub restarts: usize,
    /// Outer passes (HEC) or midpoint/bisection steps (baselines).
    pub iterations: usize,
    /// Successive `ξ` estimates, starting with the first trial value.
    pub estimates: Vec<T>,
    pub eig_counts: EigCounts,
    pub elapsed: f64,
    pub certificate: Certificate,
    pub tau: T,
}

impl<T: Real> XiResult<T> {
    /// Mean number of HEC iterations per pseudoroot; zero without HEC runs.
    pub fn hec_avg_inner_iters(&self) -> f64 {
        if self.pseudoroots.is_empty() {
            return 0.0;
        }
        let total: usize = self.pseudoroots.iter().map(|p| p.iterations).sum();
        total as f64 / self.pseudoroots.len() as f64
    }

    pub fn sign_fixes(&self) -> usize {
        self.pseudoroots.iter().map(|p| p.sign_fixes).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiOptions<T> {
    pub tol: Tolerances<T>,
    pub omega0: T,
    pub interval_rule: IntervalRule,
    /// Grid points probed before the first pencil solve.
    pub grid_budget: usize,
    /// Local descents started from the best grid points.
    pub descent_starts: usize,
    pub max_restarts: usize,
}

impl<T: Real> Default for XiOptions<T> {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            omega0: T::zero(),
            interval_rule: IntervalRule::MostNegative,
            grid_budget: 128,
            descent_starts: 5,
            max_restarts: 100,
        }
    }
}

/// `γ(ξ, ω)` as a root-min problem in `(ε, x) = (ξ, ω)`.
pub struct XiProblem<'a, T: Real> {
    pub cache: &'a EvalCache<T>,
    pub xi_lb: T,
}

impl<T: Real> RootProblem<T> for XiProblem<'_, T> {
    fn sense(&self) -> Sense {
        Sense::RootMin
    }
    fn eps_lb(&self) -> T {
        self.xi_lb
    }
    fn x_domain(&self) -> XDomain<T> {
        match self.cache.domain() {
            Domain::Continuous => XDomain::Line,
            Domain::Discrete => XDomain::Circle,
        }
    }
    fn eval_eps(&self, eps: T, x: T) -> Result<Eval<T>> {
        let g = self.cache.gamma_derivs_xi(eps, x)?;
        Ok(Eval {
            value: g.gamma,
            d1: Some(g.d1),
            d2: g.reliable.then_some(g.d2),
        })
    }
    fn eval_x(&self, eps: T, x: T) -> Result<Eval<T>> {
        let g = self.cache.gamma_derivs_omega(eps, x)?;
        Ok(Eval {
            value: g.gamma,
            d1: Some(g.d1),
            d2: g.reliable.then_some(g.d2),
        })
    }
}

/// Below this magnitude `ξ` is treated as zero and steps become absolute.
pub(crate) fn absolute_threshold<T: Real>(m: &StateSpaceSystem<T>) -> T {
    T::lit(1e-10) * (T::one() + d_scale(m))
}

/// `ξ − τ|ξ|`, or `ξ − τ` in absolute mode.
pub(crate) fn step_down<T: Real>(xi: T, tau: T, abs_thr: T) -> (T, bool) {
    if xi.abs() < abs_thr {
        (xi - tau, true)
    } else {
        (xi - tau * xi.abs(), false)
    }
}

pub(crate) fn pick_interval<T: Real>(ints: &[NegativeInterval<T>], rule: IntervalRule) -> NegativeInterval<T> {
    let cmp = |a: T, b: T| a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal);
    let it = ints.iter().copied();
    match rule {
        IntervalRule::MostNegative => it.min_by(|a, b| cmp(a.gamma_mid, b.gamma_mid)),
        IntervalRule::Widest => it.max_by(|a, b| cmp(a.width(), b.width())),
        IntervalRule::Leftmost => it.min_by(|a, b| cmp(a.lo, b.lo)),
    }
    .expect("non-empty interval list")
}

/// Frequencies of the coarse search grid.
fn search_grid<T: Real>(cache: &EvalCache<T>, budget: usize) -> Vec<T> {
    let budget = budget.max(2);
    let real = cache.is_real();
    match cache.domain() {
        Domain::Continuous => {
            let w = T::lit(10.0) * (fro_norm(cache.h()) + T::one());
            let k = if real { budget - 1 } else { (budget - 1) / 2 };
            let mut pts = vec![T::zero()];
            for j in 0..k {
                let e = T::lit(-4.0) + T::lit(4.0) * T::from_usize(j).unwrap() / T::from_usize(k.max(2) - 1).unwrap();
                let v = w * T::lit(10.0).powf(e);
                pts.push(v);
                if !real {
                    pts.push(-v);
                }
            }
            pts
        }
        Domain::Discrete => {
            let (lo, span) = if real {
                (T::zero(), T::pi())
            } else {
                (-T::pi(), T::two_pi())
            };
            (0..budget)
                .map(|j| {
                    let frac = T::from_usize(j + 1).unwrap() / T::from_usize(budget).unwrap();
                    wrap_angle(lo + span * frac)
                })
                .collect()
        }
    }
}

/// Cheap search for a frequency where `γ_{ξ₀} < 0`: the hint `ω₀`, then a
/// grid of `budget` points, then up to `descent_starts` local descents from
/// the best grid points.
pub fn initial_negative_search<T: Real>(
    cache: &EvalCache<T>,
    xi0: T,
    omega0: T,
    budget: usize,
    descent_starts: usize,
) -> Option<T> {
    let neg = |w: T| matches!(cache.gamma_only(xi0, w), Ok(g) if g < T::zero());
    if neg(omega0) {
        return Some(omega0);
    }
    let grid = search_grid(cache, budget);
    let mut vals: Vec<(T, T)> = grid
        .into_iter()
        .filter_map(|w| cache.gamma_only(xi0, w).ok().map(|g| (w, g)))
        .collect();
    vals.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (best_w, best_g) = *vals.first()?;
    if best_g < T::zero() {
        return Some(best_w);
    }
    let prob = XiProblem { cache, xi_lb: xi0 - T::one() };
    for &(w, _) in vals.iter().take(descent_starts) {
        if let Ok(x) = expand(&prob, xi0, w) {
            if neg(x) {
                return Some(x);
            }
        }
    }
    None
}

/// `Ξ` of a continuous-time model.
pub fn compute_xi_cont<T: Real>(m: &StateSpaceSystem<T>, omega0: T, tol: &Tolerances<T>) -> Result<XiResult<T>> {
    if m.domain() != Domain::Continuous {
        return Err(Error::WrongDomain("compute_xi_cont needs a continuous model"));
    }
    compute_xi(
        m,
        &XiOptions {
            tol: *tol,
            omega0,
            ..XiOptions::default()
        },
    )
}

/// `Ξ` of a discrete-time model.
pub fn compute_xi_disc<T: Real>(m: &StateSpaceSystem<T>, omega0: T, tol: &Tolerances<T>) -> Result<XiResult<T>> {
    if m.domain() != Domain::Discrete {
        return Err(Error::WrongDomain("compute_xi_disc needs a discrete model"));
    }
    compute_xi(
        m,
        &XiOptions {
            tol: *tol,
            omega0,
            ..XiOptions::default()
        },
    )
}

/// HEC driver for either domain.
pub fn compute_xi<T: Real>(m: &StateSpaceSystem<T>, opts: &XiOptions<T>) -> Result<XiResult<T>> {
    let started = Instant::now();
    opts.tol.validate()?;
    let tol = &opts.tol;
    let bracket = xi_bracket(m)?;
    let cache = EvalCache::new(m)?;
    let abs_thr = absolute_threshold(m);
    let discrete = m.domain() == Domain::Discrete;

    let mut result = XiResult {
        algorithm: Algorithm::Hec,
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

    let (mut xi, mut absolute) = step_down(bracket.xi_ub, tol.tau, abs_thr);
    if xi <= bracket.xi_lb {
        return Ok(finish(result));
    }
    result.estimates.push(xi);
    let hec_opts = HecOptions::from_tolerances(tol);
    let prob = XiProblem {
        cache: &cache,
        xi_lb: bracket.xi_lb,
    };
    let mut omega_tilde: Option<T> = None;

    loop {
        result.iterations += 1;
        let mut start = None;
        if discrete {
            let probe = match omega_tilde {
                None => T::zero(),
                Some(w) => wrap_angle(w + T::frac_pi_2()),
            };
            if cache.gamma_only(xi, probe)? < T::zero() {
                start = Some(probe);
            }
        }
        if start.is_none() && result.pseudoroots.is_empty() {
            start = initial_negative_search(&cache, xi, opts.omega0, opts.grid_budget, opts.descent_starts);
        }
        if start.is_none() {
            let zeros = gamma_zeros(&cache, xi, omega_tilde, tol)?;
            let ints = negative_intervals(&cache, &zeros, xi)?;
            if ints.is_empty() {
                result.xi = xi;
                result.certificate = if absolute {
                    Certificate::AbsoluteMode
                } else {
                    Certificate::NoNegativeRegion
                };
                return Ok(finish(result));
            }
            start = Some(pick_interval(&ints.intervals, opts.interval_rule).mid);
        }
        if result.restarts >= opts.max_restarts {
            return Err(Error::NonConvergence {
                iterations: result.restarts,
                eps: xi.as_f64(),
                x: start.map(|s| s.as_f64()).unwrap_or(f64::NAN),
            });
        }
        let pr = hec_solve_with(&prob, xi, start.expect("set above"), &hec_opts)?;
        omega_tilde = Some(pr.x);
        let (next, abs) = step_down(pr.eps, tol.tau, abs_thr);
        absolute = abs;
        result.pseudoroots.push(pr);
        result.restarts += 1;
        if next <= bracket.xi_lb {
            result.xi = bracket.xi_lb;
            result.certificate = Certificate::BracketDegenerate;
            return Ok(finish(result));
        }
        xi = next;
        result.estimates.push(xi);
    }
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
    fn degenerate_bracket_returns_lower_bound() {
        let r = compute_xi_cont(&scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0), 0.0, &Tolerances::default()).unwrap();
        assert_eq!(r.certificate, Certificate::BracketDegenerate);
        assert_eq!(r.xi, 2.0);
        assert!(r.pseudoroots.is_empty());
    }

    #[test]
    fn stability_limited_scalar() {
        let tol = Tolerances::default();
        let r = compute_xi_cont(&scalar(Domain::Continuous, -1.0, 1.0, 2.0, 2.0), 0.0, &tol).unwrap();
        assert_eq!(r.certificate, Certificate::NoNegativeRegion);
        assert_eq!(r.xi, 2.0 * (1.0 - tol.tau));
        assert_eq!(r.restarts, 0);
    }

    #[test]
    fn discrete_scalar_zero() {
        let tol = Tolerances::with_tau(1e-10).unwrap();
        let r = compute_xi_disc(&scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0), 0.0, &tol).unwrap();
        assert!(r.xi.abs() <= 1e-10, "{}", r.xi);
        assert_eq!(r.certificate, Certificate::AbsoluteMode);
        let w = r.pseudoroots.last().unwrap().x;
        assert!((w.abs() - std::f64::consts::PI).abs() < 1e-6, "{w}");
    }

    #[test]
    fn initial_search_examples() {
        let c = EvalCache::new(&scalar(Domain::Continuous, -1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(initial_negative_search(&c, 1.0, 0.0, 128, 5), None);
        let d = EvalCache::new(&scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0)).unwrap();
        let w = initial_negative_search(&d, 0.5 * (1.0 - 1e-14), 0.0, 128, 5).unwrap();
        assert!(d.gamma_only(0.5, w).unwrap() < 0.0 && w.abs() > 2.0);
        assert_eq!(initial_negative_search(&d, 0.5, 3.0, 128, 5), Some(3.0));
    }

    #[test]
    fn wrong_domain_rejected() {
        let d = scalar(Domain::Discrete, 0.0, 1.0, 1.0, 1.0);
        assert!(matches!(compute_xi_cont(&d, 0.0, &Tolerances::default()), Err(Error::WrongDomain(_))));
    }
}
