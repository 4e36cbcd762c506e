//! Hybrid expansion-contraction for scalar root-max / root-min problems.
//!
//! For `f(ε) = min_x g(ε, x)` (root-min) the iteration alternates a
//! contraction, which finds a root of `g(·, x_k)` below the current `ε_k`,
//! with an expansion, which decreases `g(ε̂_k, ·)` to a stationary point.
//! The `ε` iterates decrease monotonically and converge from above to a
//! pseudoroot. Root-max problems are handled by negating `g`.

use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};
use crate::system::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// Root of `max_x g(ε, x)`.
    RootMax,
    /// Root of `min_x g(ε, x)`.
    RootMin,
}

/// Feasible set of the inner variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XDomain<T> {
    Line,
    Interval(T, T),
    /// Angles identified modulo 2π, represented in `(−π, π]`.
    Circle,
}

/// Value of `g` with optional first and second partial along one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eval<T> {
    pub value: T,
    pub d1: Option<T>,
    pub d2: Option<T>,
}

impl<T: Real> Eval<T> {
    pub fn value_only(value: T) -> Self {
        Self {
            value,
            d1: None,
            d2: None,
        }
    }

    fn negated(self) -> Self {
        Self {
            value: -self.value,
            d1: self.d1.map(|d| -d),
            d2: self.d2.map(|d| -d),
        }
    }
}

/// A two-parameter function `g(ε, x)` with scalar `x`.
pub trait RootProblem<T: Real> {
    fn sense(&self) -> Sense;
    /// Lower end of the `ε` search range; `f(eps_lb)` lies on the far side of zero.
    fn eps_lb(&self) -> T;
    fn x_domain(&self) -> XDomain<T>;
    /// `g` and its `ε`-partials.
    fn eval_eps(&self, eps: T, x: T) -> Result<Eval<T>>;
    /// `g` and its `x`-partials.
    fn eval_x(&self, eps: T, x: T) -> Result<Eval<T>>;
}

/// Root-min view of a problem.
struct Oriented<'a, T: Real, P: RootProblem<T> + ?Sized> {
    p: &'a P,
    flip: bool,
    _t: std::marker::PhantomData<T>,
}

impl<'a, T: Real, P: RootProblem<T> + ?Sized> Oriented<'a, T, P> {
    fn new(p: &'a P) -> Self {
        Self {
            p,
            flip: p.sense() == Sense::RootMax,
            _t: std::marker::PhantomData,
        }
    }
    fn orient(&self, e: Eval<T>) -> Eval<T> {
        if self.flip {
            e.negated()
        } else {
            e
        }
    }
    fn eval_eps(&self, eps: T, x: T) -> Result<Eval<T>> {
        self.p.eval_eps(eps, x).map(|e| self.orient(e))
    }
    fn eval_x(&self, eps: T, x: T) -> Result<Eval<T>> {
        self.p.eval_x(eps, x).map(|e| self.orient(e))
    }
}

/// Iteration limits and tolerances of [`hec_solve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HecOptions<T> {
    pub max_outer: usize,
    pub max_contraction: usize,
    pub max_expansion: usize,
    /// Relative bound on `|∂g/∂x|` declaring `x` stationary.
    pub stationarity_tol: T,
    /// Relative change in `ε` and `x` below which the iteration stops.
    pub change_tol: T,
}

impl<T: Real> HecOptions<T> {
    pub fn from_tolerances(tol: &Tolerances<T>) -> Self {
        Self {
            max_outer: 100,
            max_contraction: 60,
            max_expansion: 60,
            stationarity_tol: tol.stationarity_tol,
            change_tol: T::lit(100.0) * T::eps(),
        }
    }
}

impl<T: Real> Default for HecOptions<T> {
    fn default() -> Self {
        Self::from_tolerances(&Tolerances::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Start,
    Contraction,
    Expansion,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Start => "start",
            Phase::Contraction => "contraction",
            Phase::Expansion => "expansion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry<T> {
    pub phase: Phase,
    pub eps: T,
    pub x: T,
    pub g: T,
}

/// Limit point `(ε̃, x̃)` with `g(ε̃, x̃) = 0` and `x̃` stationary for `g(ε̃, ·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoRoot<T> {
    pub eps: T,
    pub x: T,
    /// `g(ε̃, x̃)` in the caller's orientation.
    pub g_value: T,
    pub x_derivative: T,
    /// `∂²g/∂x²` at the limit, for classifying saddle or maximizer limits.
    pub x_second_derivative: Option<T>,
    /// Whether the stationarity test held at the returned point.
    pub stationary: bool,
    /// Outer iterations performed.
    pub iterations: usize,
    pub contraction_steps: usize,
    pub expansion_steps: usize,
    /// Contractions whose computed root had the wrong residual sign and
    /// was pushed to the nonpositive side.
    pub sign_fixes: usize,
    pub trace: Vec<TraceEntry<T>>,
}

impl<T: Real> PseudoRoot<T> {
    /// `ε` after each contraction, in iteration order.
    pub fn eps_iterates(&self) -> Vec<T> {
        self.trace
            .iter()
            .filter(|t| t.phase != Phase::Expansion)
            .map(|t| t.eps)
            .collect()
    }
}

fn is_stationary<T: Real>(e: &Eval<T>, x: T, tol: T) -> bool {
    match e.d1 {
        Some(d1) => {
            let curv = e.d2.map(|d| d.abs()).unwrap_or(T::zero());
            d1.abs() <= tol * T::one().max(curv * (T::one() + x.abs()))
        }
        None => false,
    }
}

fn relative_change<T: Real>(new: T, old: T) -> T {
    let d = (new - old).abs();
    let s = new.abs().max(old.abs());
    if s == T::zero() {
        d
    } else {
        d / s
    }
}

struct Contraction<T> {
    eps: T,
    eval: Eval<T>,
    steps: usize,
    sign_fixed: bool,
}

/// Halley steps safeguarded by bisection on `g(·, x)` over `[lo, hi]`.
///
/// `lo_nonneg` skips evaluating the lower end when the root-min convention
/// already guarantees `g(lo, x) ≥ 0`. On return `g(eps, x) ≤ 0`.
fn contract_impl<T: Real, P: RootProblem<T> + ?Sized>(
    p: &Oriented<T, P>,
    x: T,
    lo: T,
    hi: T,
    hi_eval: Option<Eval<T>>,
    lo_nonneg: bool,
    max_steps: usize,
) -> Result<Contraction<T>> {
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!("empty contraction bracket [{lo}, {hi}]")));
    }
    let e_hi = match hi_eval {
        Some(e) if e.d1.is_some() => e,
        _ => p.eval_eps(hi, x)?,
    };
    let mut steps = 0usize;
    if e_hi.value == T::zero() {
        return Ok(Contraction {
            eps: hi,
            eval: e_hi,
            steps,
            sign_fixed: false,
        });
    }
    let (mut pos, mut neg, mut neg_eval, start, mut cur_eval);
    if lo_nonneg {
        if e_hi.value > T::zero() {
            return Err(Error::Bracket {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
                g_lo: f64::NAN,
                g_hi: e_hi.value.as_f64(),
            });
        }
        pos = lo;
        neg = hi;
        neg_eval = e_hi;
        start = hi;
        cur_eval = e_hi;
    } else {
        let e_lo = p.eval_eps(lo, x)?;
        if e_lo.value == T::zero() {
            return Ok(Contraction {
                eps: lo,
                eval: e_lo,
                steps,
                sign_fixed: false,
            });
        }
        if (e_lo.value > T::zero()) == (e_hi.value > T::zero()) {
            return Err(Error::Bracket {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
                g_lo: e_lo.value.as_f64(),
                g_hi: e_hi.value.as_f64(),
            });
        }
        if e_hi.value < T::zero() {
            pos = lo;
            neg = hi;
            neg_eval = e_hi;
        } else {
            pos = hi;
            neg = lo;
            neg_eval = e_lo;
        }
        start = hi;
        cur_eval = e_hi;
    }

    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let eps = T::eps();
    let mut cur = start;
    let mut last_delta = T::zero();
    let mut prev_abs_delta = T::one() / T::zero();
    let mut stalls = 0usize;
    while steps < max_steps {
        let (a, b) = if pos < neg { (pos, neg) } else { (neg, pos) };
        let mut next = None;
        if let Some(d1) = cur_eval.d1 {
            let g = cur_eval.value;
            let step = match cur_eval.d2 {
                Some(d2) => {
                    let den = two * d1 * d1 - g * d2;
                    if den != T::zero() {
                        -two * g * d1 / den
                    } else {
                        -g / d1
                    }
                }
                None => -g / d1,
            };
            let c = cur + step;
            if step.is_finite_real() && c > a && c < b {
                next = Some(c);
            }
        }
        let halley = next.is_some();
        let next = next.unwrap_or((pos + neg) * half);
        if next == cur {
            break;
        }
        let delta = next - cur;
        let e = p.eval_eps(next, x)?;
        steps += 1;
        if e.value > T::zero() {
            pos = next;
        } else {
            neg = next;
            neg_eval = e;
        }
        cur = next;
        cur_eval = e;
        last_delta = delta;
        if e.value == T::zero() {
            break;
        }
        if delta.abs() <= T::lit(4.0) * eps * cur.abs() {
            break;
        }
        if (pos - neg).abs() <= T::lit(4.0) * eps * pos.abs().max(neg.abs()) {
            break;
        }
        if halley
            && delta.abs() > half * prev_abs_delta
            && delta.abs() <= prev_abs_delta
            && delta.abs() <= eps.sqrt() * (T::one() + cur.abs())
        {
            // Steps neither shrink nor grow: rounding level reached.
            stalls += 1;
            if stalls >= 3 {
                break;
            }
        }
        prev_abs_delta = delta.abs();
    }

    let mut sign_fixed = false;
    if cur_eval.value > T::zero() {
        sign_fixed = true;
        let dir = if neg > cur { T::one() } else { -T::one() };
        let mut h = last_delta.abs().max(T::lit(4.0) * eps * cur.abs()).max(T::lit(1e-300).max(eps * eps));
        let mut fixed = false;
        for _ in 0..60 {
            let trial = cur + dir * h;
            if (dir > T::zero() && trial >= neg) || (dir < T::zero() && trial <= neg) {
                break;
            }
            let e = p.eval_eps(trial, x)?;
            steps += 1;
            if e.value <= T::zero() {
                cur = trial;
                cur_eval = e;
                fixed = true;
                break;
            }
            h *= two;
        }
        if !fixed {
            cur = neg;
            cur_eval = neg_eval;
        }
    }
    Ok(Contraction {
        eps: cur,
        eval: cur_eval,
        steps,
        sign_fixed,
    })
}

/// Root of `g(·, x)` in `[lo, hi]`, returned on the side where `g ≤ 0`
/// (in the root-min orientation).
pub fn contract<T: Real, P: RootProblem<T> + ?Sized>(p: &P, x: T, bracket: (T, T)) -> Result<T> {
    let o = Oriented::new(p);
    Ok(contract_impl(&o, x, bracket.0, bracket.1, None, false, 60)?.eps)
}

struct Expansion<T> {
    x: T,
    eval: Eval<T>,
    steps: usize,
    stationary: bool,
}

fn project<T: Real>(dom: XDomain<T>, x: T) -> T {
    match dom {
        XDomain::Line => x,
        XDomain::Interval(a, b) => x.max(a).min(b),
        XDomain::Circle => wrap_angle(x),
    }
}

fn distance<T: Real>(dom: XDomain<T>, a: T, b: T) -> T {
    match dom {
        XDomain::Circle => wrap_angle(a - b).abs(),
        _ => (a - b).abs(),
    }
}

/// Monotone safeguarded Newton descent on `g(ε, ·)` from `x0`.
fn expand_impl<T: Real, P: RootProblem<T> + ?Sized>(
    p: &Oriented<T, P>,
    eps_fixed: T,
    x0: T,
    x0_eval: Option<Eval<T>>,
    opts: &HecOptions<T>,
) -> Result<Expansion<T>> {
    let dom = p.p.x_domain();
    let mut x = project(dom, x0);
    let mut e = match x0_eval {
        Some(e) if e.d1.is_some() && x == x0 => e,
        _ => p.eval_x(eps_fixed, x)?,
    };
    let mut steps = 0usize;
    if is_stationary(&e, x, opts.stationarity_tol) {
        return Ok(Expansion {
            x,
            eval: e,
            steps,
            stationary: true,
        });
    }
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let max_trust = match dom {
        XDomain::Line => T::one() / T::zero(),
        XDomain::Interval(a, b) => b - a,
        XDomain::Circle => T::pi() * half,
    };
    let mut trust = match dom {
        XDomain::Line => T::one().max(x.abs()) * T::lit(0.25),
        XDomain::Interval(a, b) => (b - a) * T::lit(0.25),
        XDomain::Circle => T::pi() * T::lit(0.125),
    };
    let move_tol = opts.change_tol;
    while steps < opts.max_expansion {
        let Some(d1) = e.d1 else {
            return Err(Error::InvalidParameter("expansion requires the x-derivative".into()));
        };
        if d1 == T::zero() {
            break;
        }
        let newton = match e.d2 {
            Some(d2) if d2 > T::zero() => Some(-d1 / d2),
            _ => None,
        };
        let full = match newton {
            Some(s) if s.abs() <= trust => s,
            _ => {
                if d1 > T::zero() {
                    -trust
                } else {
                    trust
                }
            }
        };
        let mut t = full;
        let mut accepted = None;
        for _ in 0..50 {
            let xn = project(dom, x + t);
            if distance(dom, xn, x) <= move_tol * (T::one() + x.abs()) {
                break;
            }
            if let Ok(en) = p.eval_x(eps_fixed, xn) {
                if en.value <= e.value {
                    accepted = Some((xn, en));
                    break;
                }
            }
            t *= half;
        }
        let Some((xn, en)) = accepted else {
            break;
        };
        steps += 1;
        let moved = distance(dom, xn, x);
        if t == full {
            trust = (trust * two).min(max_trust).max(two * t.abs());
        } else {
            trust = t.abs().max(trust * T::lit(0.25));
        }
        x = xn;
        e = en;
        if moved <= move_tol * (T::one() + x.abs()) {
            break;
        }
        if newton.is_some() && t == full && is_stationary(&e, x, T::eps() * T::lit(10.0)) {
            break;
        }
    }
    let stationary = is_stationary(&e, x, opts.stationarity_tol);
    Ok(Expansion {
        x,
        eval: e,
        steps,
        stationary,
    })
}

/// Stationary point of `g(ε, ·)` reached by monotone descent from `x0`
/// (ascent for root-max problems).
pub fn expand<T: Real, P: RootProblem<T> + ?Sized>(p: &P, eps_fixed: T, x0: T) -> Result<T> {
    let o = Oriented::new(p);
    Ok(expand_impl(&o, eps_fixed, x0, None, &HecOptions::default())?.x)
}

/// Runs HEC from `(eps0, x0)` with default limits.
pub fn hec_solve<T: Real, P: RootProblem<T> + ?Sized>(
    p: &P,
    eps0: T,
    x0: T,
    tol: &Tolerances<T>,
) -> Result<PseudoRoot<T>> {
    hec_solve_with(p, eps0, x0, &HecOptions::from_tolerances(tol))
}

/// Runs HEC from `(eps0, x0)`.
///
/// Requires `g(eps0, x0) < 0` in the root-min orientation (`> 0` for
/// root-max) and `eps_lb < eps0`.
pub fn hec_solve_with<T: Real, P: RootProblem<T> + ?Sized>(
    p: &P,
    eps0: T,
    x0: T,
    opts: &HecOptions<T>,
) -> Result<PseudoRoot<T>> {
    let o = Oriented::new(p);
    let lb = p.eps_lb();
    if !(lb < eps0) {
        return Err(Error::InitialSigns(format!("eps_lb = {lb} is not below eps0 = {eps0}")));
    }
    let dom = p.x_domain();
    let x0 = project(dom, x0);
    let g0 = o.eval_eps(eps0, x0)?;
    if !(g0.value < T::zero()) {
        return Err(Error::InitialSigns(format!(
            "g(eps0, x0) = {} is on the wrong side of zero",
            if o.flip { -g0.value } else { g0.value }
        )));
    }
    let sign = if o.flip { -T::one() } else { T::one() };
    let mut trace = vec![TraceEntry {
        phase: Phase::Start,
        eps: eps0,
        x: x0,
        g: sign * g0.value,
    }];
    let mut eps_k = eps0;
    let mut x_k = x0;
    let mut g_k = g0;
    let mut contraction_steps = 0;
    let mut expansion_steps = 0;
    let mut sign_fixes = 0;
    let mut x_settled = false;

    for k in 1..=opts.max_outer {
        let c = contract_impl(&o, x_k, lb, eps_k, Some(g_k), true, opts.max_contraction)?;
        contraction_steps += c.steps;
        sign_fixes += usize::from(c.sign_fixed);
        trace.push(TraceEntry {
            phase: Phase::Contraction,
            eps: c.eps,
            x: x_k,
            g: sign * c.eval.value,
        });
        let eps_settled = relative_change(c.eps, eps_k) <= opts.change_tol;
        let ex = o.eval_x(c.eps, x_k)?;
        let finish = |x: T, e: Eval<T>, stationary: bool, trace: Vec<TraceEntry<T>>, expansion_steps: usize| PseudoRoot {
            eps: c.eps,
            x,
            g_value: sign * e.value,
            x_derivative: sign * e.d1.unwrap_or(T::zero()),
            x_second_derivative: e.d2.map(|d| sign * d),
            stationary,
            iterations: k,
            contraction_steps,
            expansion_steps,
            sign_fixes,
            trace,
        };
        if is_stationary(&ex, x_k, opts.stationarity_tol) {
            return Ok(finish(x_k, ex, true, trace, expansion_steps));
        }
        if eps_settled && x_settled {
            return Ok(finish(x_k, ex, false, trace, expansion_steps));
        }
        let e = expand_impl(&o, c.eps, x_k, Some(ex), opts)?;
        expansion_steps += e.steps;
        trace.push(TraceEntry {
            phase: Phase::Expansion,
            eps: c.eps,
            x: e.x,
            g: sign * e.eval.value,
        });
        x_settled = distance(dom, e.x, x_k) <= opts.change_tol * T::one().max(x_k.abs());
        if (eps_settled && x_settled) || !(e.eval.value < T::zero()) {
            // No further decrease is available: x is stationary up to rounding.
            return Ok(finish(e.x, e.eval, e.stationary, trace, expansion_steps));
        }
        eps_k = c.eps;
        x_k = e.x;
        g_k = o.eval_eps(eps_k, x_k)?;
    }
    Err(Error::NonConvergence {
        iterations: opts.max_outer,
        eps: eps_k.as_f64(),
        x: x_k.as_f64(),
    })
}

/// Closure-backed [`RootProblem`].
pub struct FnProblem<T, G, GE, GX>
where
    G: Fn(T, T) -> T,
{
    pub sense: Sense,
    pub eps_lb: T,
    pub x_domain: XDomain<T>,
    pub g: G,
    /// `(∂g/∂ε, ∂²g/∂ε²)`; `None` withholds the derivatives.
    pub g_eps: Option<GE>,
    /// `(∂g/∂x, ∂²g/∂x²)`.
    pub g_x: GX,
}

impl<T, G, GE, GX> RootProblem<T> for FnProblem<T, G, GE, GX>
where
    T: Real,
    G: Fn(T, T) -> T,
    GE: Fn(T, T) -> (T, T),
    GX: Fn(T, T) -> (T, T),
{
    fn sense(&self) -> Sense {
        self.sense
    }
    fn eps_lb(&self) -> T {
        self.eps_lb
    }
    fn x_domain(&self) -> XDomain<T> {
        self.x_domain
    }
    fn eval_eps(&self, eps: T, x: T) -> Result<Eval<T>> {
        let value = (self.g)(eps, x);
        Ok(match &self.g_eps {
            Some(d) => {
                let (d1, d2) = d(eps, x);
                Eval {
                    value,
                    d1: Some(d1),
                    d2: Some(d2),
                }
            }
            None => Eval::value_only(value),
        })
    }
    fn eval_x(&self, eps: T, x: T) -> Result<Eval<T>> {
        let (d1, d2) = (self.g_x)(eps, x);
        Ok(Eval {
            value: (self.g)(eps, x),
            d1: Some(d1),
            d2: Some(d2),
        })
    }
}
