#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex;
use passive_xi::scalar::CMatrix;
use passive_xi::{Domain, StateSpaceSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn randn(rng: &mut ChaCha8Rng, r: usize, c: usize, real: bool) -> CMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if real { 0.0 } else { rng.sample(StandardNormal) };
        Complex::new(re, im)
    })
}

/// Arbitrary (not necessarily passive) system; `A` is shifted to be stable.
pub fn random_system(seed: u64, n: usize, m: usize, domain: Domain, real: bool) -> StateSpaceSystem<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = randn(&mut rng, n, n, real) / Complex::new((n as f64).sqrt(), 0.0);
    let eigs = passive_xi::linalg::eigenvalues(&a).unwrap();
    match domain {
        Domain::Continuous => {
            let alpha = eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            for i in 0..n {
                a[(i, i)].re -= alpha + 0.3;
            }
        }
        Domain::Discrete => {
            let rho = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            a *= Complex::new(0.8 / rho, 0.0);
        }
    }
    let b = randn(&mut rng, n, m, real);
    let c = randn(&mut rng, m, n, real);
    let d = randn(&mut rng, m, m, real);
    StateSpaceSystem::new(a, b, c, d, domain).unwrap()
}

/// Random unitary matrix from the QR factor of a Gaussian matrix.
pub fn random_unitary(seed: u64, n: usize) -> CMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    randn(&mut rng, n, n, false).qr().q()
}

pub fn max_diff(a: &CMatrix<f64>, b: &CMatrix<f64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn norm(a: &CMatrix<f64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
