use passive_xi::hec::{hec_solve, FnProblem, Phase, Sense, XDomain};
use passive_xi::Tolerances;

type Pair = fn(f64, f64) -> (f64, f64);
type Well = FnProblem<f64, fn(f64, f64) -> f64, Pair, Pair>;

/// `g(ε, x) = 1 + d² + d⁴/10 − ε` with `d = x − ε`. The inner minimizer
/// `x = ε` moves with `ε`, and the minimal root is `ε⋆ = 1` at `x⋆ = 1`.
fn drifting_well(eps_lb: f64) -> Well {
    fn g(e: f64, x: f64) -> f64 {
        let d = x - e;
        1.0 + d * d + 0.1 * d.powi(4) - e
    }
    fn ge(e: f64, x: f64) -> (f64, f64) {
        let d = x - e;
        (-(2.0 * d + 0.4 * d.powi(3)) - 1.0, 2.0 + 1.2 * d * d)
    }
    fn gx(e: f64, x: f64) -> (f64, f64) {
        let d = x - e;
        (2.0 * d + 0.4 * d.powi(3), 2.0 + 1.2 * d * d)
    }
    FnProblem {
        sense: Sense::RootMin,
        eps_lb,
        x_domain: XDomain::Line,
        g,
        g_eps: Some(ge as Pair),
        g_x: gx as Pair,
    }
}

#[test]
fn trace_is_monotone_and_one_sided() {
    let tol = Tolerances::default();
    for (eps0, x0) in [(5.0, 5.0), (9.0, 8.0), (3.0, 2.5), (50.0, 49.0)] {
        let p = drifting_well(-2.0);
        let r = hec_solve(&p, eps0, x0, &tol).unwrap();
        let eps: Vec<f64> = r.trace.iter().map(|t| t.eps).collect();
        assert!(eps.windows(2).all(|w| w[1] <= w[0]), "{eps:?}");
        assert!(r.eps >= 1.0 - 1e-10, "{}", r.eps);
        assert!((r.eps - 1.0).abs() < 1e-12 && (r.x - 1.0).abs() < 1e-6);
        assert!(r.g_value <= 0.0 && r.stationary);
        assert_eq!(r.trace[0].phase, Phase::Start);
    }
}

#[test]
fn quadratic_rate_on_smooth_problem() {
    let p = drifting_well(-2.0);
    let r = hec_solve(&p, 30.0, 30.0, &Tolerances::default()).unwrap();
    let errs: Vec<f64> = r.eps_iterates().iter().map(|e| (e - r.eps).abs()).filter(|&e| e > 1e-13).collect();
    assert!(errs.len() >= 3, "{errs:?}");
    let e = &errs[errs.len() - 3..];
    let (c1, c2) = (e[1] / (e[0] * e[0]), e[2] / (e[1] * e[1]));
    assert!(c1.max(c2) / c1.min(c2) <= 4.0, "{errs:?}");
}
