mod common;

use common::{max_diff, norm, random_system, random_unitary};
use num_complex::Complex;
use passive_xi::linalg::herm_eig;
use passive_xi::scalar::CMatrix;
use passive_xi::system::{passivity_matrix_cont, passivity_matrix_disc, shifted_system, xi_bracket};
use passive_xi::Domain;
use proptest::prelude::*;

fn block_identity(n: usize, m: usize, x: &CMatrix<f64>) -> CMatrix<f64> {
    let mut out = CMatrix::<f64>::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(x);
    for i in 0..m {
        out[(n + i, n + i)] = Complex::new(1.0, 0.0);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn continuous_shift_identity(seed in 0u64..10_000, n in 1usize..6, m in 1usize..4, xi in -3.0f64..3.0) {
        let sys = random_system(seed, n, m, Domain::Continuous, false);
        let h = common::randn(&mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed + 1), n, n, false);
        let x = &h + h.adjoint();
        let lhs = passivity_matrix_cont(&x, &shifted_system(&sys, xi).unwrap()).unwrap();
        let rhs = passivity_matrix_cont(&x, &sys).unwrap() - block_identity(n, m, &x) * Complex::new(xi, 0.0);
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-12 * (1.0 + norm(&rhs)));
    }

    #[test]
    fn continuous_shift_is_additive(seed in 0u64..10_000, n in 1usize..6, m in 1usize..4, x1 in -2.0f64..2.0, x2 in -2.0f64..2.0) {
        let sys = random_system(seed, n, m, Domain::Continuous, false);
        let twice = shifted_system(&shifted_system(&sys, x1).unwrap(), x2).unwrap();
        let once = shifted_system(&sys, x1 + x2).unwrap();
        prop_assert!(max_diff(twice.a(), once.a()) <= 1e-14 * (1.0 + norm(once.a())));
        prop_assert!(max_diff(twice.d(), once.d()) <= 1e-14 * (1.0 + norm(once.d())));
        prop_assert_eq!(twice.b(), once.b());
    }

    #[test]
    fn lower_bound_is_passive(seed in 0u64..10_000, n in 1usize..6, m in 1usize..4, discrete in any::<bool>()) {
        let domain = if discrete { Domain::Discrete } else { Domain::Continuous };
        let sys = random_system(seed, n, m, domain, false);
        let b = xi_bracket(&sys).unwrap();
        prop_assert!(b.xi_lb <= b.xi_ub);
        let (w, shift) = match domain {
            Domain::Continuous => (passivity_matrix_cont(&CMatrix::identity(n, n), &sys).unwrap(), b.xi_lb),
            Domain::Discrete => {
                let two = CMatrix::<f64>::identity(n, n) * Complex::new(2.0, 0.0);
                (passivity_matrix_disc(&two, &sys).unwrap(), 2.0 * b.xi_lb)
            }
        };
        let k = w.nrows();
        let shifted = &w - CMatrix::<f64>::identity(k, k) * Complex::new(shift, 0.0);
        let lmin = herm_eig(&shifted).unwrap().values[0];
        prop_assert!(lmin >= -1e-12 * norm(&w), "λ_min = {}", lmin);
    }

    #[test]
    fn upper_bound_unitary_invariant(seed in 0u64..10_000, n in 1usize..6, m in 1usize..4, discrete in any::<bool>()) {
        let domain = if discrete { Domain::Discrete } else { Domain::Continuous };
        let sys = random_system(seed, n, m, domain, false);
        let u = random_unitary(seed ^ 0xABCD, n);
        let moved = sys.transform_unitary(&u).unwrap();
        let (b0, b1) = (xi_bracket(&sys).unwrap(), xi_bracket(&moved).unwrap());
        prop_assert!((b0.xi_ub - b1.xi_ub).abs() <= 1e-10 * (1.0 + b0.xi_ub.abs()));
    }
}
