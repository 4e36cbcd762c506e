mod common;

use common::{max_diff, norm, random_system};
use num_complex::Complex;
use passive_xi::scalar::CMatrix;
use passive_xi::spectral::EvalCache;
use passive_xi::system::shifted_system;
use passive_xi::Domain;
use proptest::prelude::*;

/// `Φ` from the shifted model with a dense inverse.
fn dense_phi(sys: &passive_xi::System64, xi: f64, omega: f64) -> CMatrix<f64> {
    let s = shifted_system(sys, xi).unwrap();
    let n = s.n();
    let point = match s.domain() {
        Domain::Continuous => Complex::new(0.0, omega),
        Domain::Discrete => Complex::new(omega.cos(), omega.sin()),
    };
    let resolvent = (CMatrix::<f64>::identity(n, n) * point - s.a()).try_inverse().unwrap();
    let t = s.c() * resolvent * s.b() + s.d();
    &t + t.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cache_matches_dense_inverse(seed in 0u64..10_000, n in 1usize..21, m in 1usize..4, discrete in any::<bool>(),
                                   frac in 0.0f64..1.0, omega in -3.0f64..3.0) {
        let domain = if discrete { Domain::Discrete } else { Domain::Continuous };
        let sys = random_system(seed, n, m, domain, false);
        let xi = -0.5 + 0.6 * frac;
        let cache = EvalCache::new(&sys).unwrap();
        let phi = cache.phi_eval(xi, omega).unwrap();
        let reference = dense_phi(&sys, xi, omega);
        prop_assert!(max_diff(&phi, &reference) <= 1e-10 * (1.0 + norm(&reference)));
        prop_assert_eq!(&phi, &phi.adjoint());
    }

    #[test]
    fn real_data_is_even_in_omega(seed in 0u64..10_000, n in 1usize..8, m in 1usize..4, discrete in any::<bool>(), omega in 0.01f64..3.0) {
        let domain = if discrete { Domain::Discrete } else { Domain::Continuous };
        let sys = random_system(seed, n, m, domain, true);
        prop_assert!(sys.is_real());
        let cache = EvalCache::new(&sys).unwrap();
        let (a, b) = (cache.gamma_only(0.05, omega).unwrap(), cache.gamma_only(0.05, -omega).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}

#[test]
fn continuous_tail_approaches_limit() {
    for seed in 0..10 {
        let sys = random_system(seed, 4, 2, Domain::Continuous, false);
        let cache = EvalCache::new(&sys).unwrap();
        let scale = norm(sys.b()) * norm(sys.c());
        for xi in [-0.5f64, 0.0, 0.2] {
            let w = 1e3 * (norm(sys.a()) + xi.abs());
            let limit = cache.gamma_at_infinity(xi).unwrap();
            for omega in [w, -w, 10.0 * w] {
                let g = cache.gamma_only(xi, omega).unwrap();
                assert!((g - limit).abs() <= 4.0 * scale / omega.abs(), "{g} vs {limit}");
            }
        }
    }
}
