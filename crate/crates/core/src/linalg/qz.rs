//! Complex QZ algorithm for the generalized eigenvalue problem `A x = λ B x`.
//!
//! Hessenberg-triangular reduction with Givens rotations followed by
//! single-shift implicit QZ sweeps, with the zero-chasing deflation of
//! infinite eigenvalues used by LAPACK's `zhgeqz`. Only eigenvalues are
//! produced.

use crate::error::{Error, Result};
use crate::scalar::{all_finite, fro_norm, modulus, CMatrix, Real};
use nalgebra::ComplexField;
use num_complex::Complex;
use std::ops::Range;

/// Generalized eigenvalue as the ratio `alpha / beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenEig<T: Real> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    /// `beta` is zero up to the deflation tolerance.
    pub infinite: bool,
}

impl<T: Real> GenEig<T> {
    pub fn value(&self) -> Option<Complex<T>> {
        if self.infinite {
            None
        } else {
            Some(self.alpha / self.beta)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Rot<T: Real> {
    c: T,
    s: Complex<T>,
}

/// Plane rotation with `[c s; -conj(s) c] [f; g] = [r; 0]`.
fn lartg<T: Real>(f: Complex<T>, g: Complex<T>) -> (Rot<T>, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    let f1 = modulus(f);
    let g1 = modulus(g);
    if g1 == T::zero() {
        return (Rot { c: T::one(), s: zero }, f);
    }
    if f1 == T::zero() {
        return (
            Rot {
                c: T::zero(),
                s: g.conjugate() / Complex::new(g1, T::zero()),
            },
            Complex::new(g1, T::zero()),
        );
    }
    let d = f1.hypot(g1);
    let phase = f / Complex::new(f1, T::zero());
    let rot = Rot {
        c: f1 / d,
        s: phase * g.conjugate() / Complex::new(d, T::zero()),
    };
    (rot, phase * Complex::new(d, T::zero()))
}

/// Rows `i`, `k`: `xᵢ ← c xᵢ + s xₖ`, `xₖ ← c xₖ − s̄ xᵢ`.
fn rot_rows<T: Real>(m: &mut CMatrix<T>, i: usize, k: usize, cols: Range<usize>, r: Rot<T>) {
    let sc = r.s.conjugate();
    for j in cols {
        let x = m[(i, j)];
        let y = m[(k, j)];
        m[(i, j)] = x * r.c + r.s * y;
        m[(k, j)] = y * r.c - sc * x;
    }
}

/// Columns `j`, `k`: `xⱼ ← c xⱼ + s xₖ`, `xₖ ← c xₖ − s̄ xⱼ`.
fn rot_cols<T: Real>(m: &mut CMatrix<T>, j: usize, k: usize, rows: Range<usize>, r: Rot<T>) {
    let sc = r.s.conjugate();
    for i in rows {
        let x = m[(i, j)];
        let y = m[(i, k)];
        m[(i, j)] = x * r.c + r.s * y;
        m[(i, k)] = y * r.c - sc * x;
    }
}

#[inline]
fn abs1<T: Real>(z: Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

fn hessenberg_triangular<T: Real>(h: &mut CMatrix<T>, t: &mut CMatrix<T>) {
    let n = h.nrows();
    let zero = Complex::new(T::zero(), T::zero());
    for j in 0..n.saturating_sub(2) {
        for i in ((j + 2)..n).rev() {
            let (rot, r) = lartg(h[(i - 1, j)], h[(i, j)]);
            h[(i - 1, j)] = r;
            h[(i, j)] = zero;
            rot_rows(h, i - 1, i, (j + 1)..n, rot);
            rot_rows(t, i - 1, i, (i - 1)..n, rot);

            let (rot, r) = lartg(t[(i, i)], t[(i, i - 1)]);
            t[(i, i)] = r;
            t[(i, i - 1)] = zero;
            rot_cols(h, i, i - 1, 0..n, rot);
            rot_cols(t, i, i - 1, 0..i, rot);
        }
    }
}

enum Step {
    Deflate,
    ClearInfinite,
    Sweep(usize),
}

/// Generalized eigenvalues of the pencil `A − λB`.
pub fn generalized_eigenvalues<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<Vec<GenEig<T>>> {
    let n = a.nrows();
    if !a.is_square() || b.shape() != a.shape() {
        return Err(Error::Dimension(format!(
            "pencil matrices must be square and equal in size, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if !all_finite(a) || !all_finite(b) {
        return Err(Error::NonFinite("pencil"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let zero = Complex::new(T::zero(), T::zero());
    let qr = b.clone().qr();
    let mut h = qr.q().adjoint() * a;
    let mut t = qr.r();
    hessenberg_triangular(&mut h, &mut t);

    let ulp = T::eps();
    let safmin = T::lit(1e-290);
    let atol = safmin.max(ulp * fro_norm(&h));
    let btol = safmin.max(ulp * fro_norm(&t));

    let mut alpha = vec![zero; n];
    let mut beta = vec![zero; n];
    let mut ilast = n - 1;
    let mut iiter = 0usize;
    let mut eshift = zero;
    let maxit = 60 * n;
    let mut jiter = 0usize;

    loop {
        jiter += 1;
        if jiter > maxit {
            return Err(Error::Eigen("QZ iteration did not converge"));
        }

        let step = if ilast == 0 {
            Step::Deflate
        } else if abs1(h[(ilast, ilast - 1)])
            <= safmin.max(ulp * (abs1(h[(ilast, ilast)]) + abs1(h[(ilast - 1, ilast - 1)])))
        {
            h[(ilast, ilast - 1)] = zero;
            Step::Deflate
        } else if modulus(t[(ilast, ilast)]) <= btol {
            t[(ilast, ilast)] = zero;
            Step::ClearInfinite
        } else {
            let mut found = None;
            for j in (0..ilast).rev() {
                let ilazro = if j == 0 {
                    true
                } else if abs1(h[(j, j - 1)])
                    <= safmin.max(ulp * (abs1(h[(j, j)]) + abs1(h[(j - 1, j - 1)])))
                {
                    h[(j, j - 1)] = zero;
                    true
                } else {
                    false
                };

                if modulus(t[(j, j)]) < btol {
                    t[(j, j)] = zero;
                    let mut ilazr2 = !ilazro
                        && abs1(h[(j, j - 1)]) * abs1(h[(j + 1, j)]) <= abs1(h[(j, j)]) * atol;
                    if ilazro || ilazr2 {
                        // Split off at j by zeroing subdiagonal entries of H.
                        let mut step = Step::ClearInfinite;
                        for jch in j..ilast {
                            let (rot, r) = lartg(h[(jch, jch)], h[(jch + 1, jch)]);
                            h[(jch, jch)] = r;
                            h[(jch + 1, jch)] = zero;
                            rot_rows(&mut h, jch, jch + 1, (jch + 1)..n, rot);
                            rot_rows(&mut t, jch, jch + 1, (jch + 1)..n, rot);
                            if ilazr2 {
                                h[(jch, jch - 1)] *= rot.c;
                            }
                            ilazr2 = false;
                            if modulus(t[(jch + 1, jch + 1)]) >= btol {
                                step = if jch + 1 >= ilast {
                                    Step::Deflate
                                } else {
                                    Step::Sweep(jch + 1)
                                };
                                break;
                            }
                            t[(jch + 1, jch + 1)] = zero;
                        }
                        found = Some(step);
                    } else {
                        // Chase the zero on the diagonal of T down to T(ilast, ilast).
                        for jch in j..ilast {
                            let (rot, r) = lartg(t[(jch, jch + 1)], t[(jch + 1, jch + 1)]);
                            t[(jch, jch + 1)] = r;
                            t[(jch + 1, jch + 1)] = zero;
                            if jch + 2 < n {
                                rot_rows(&mut t, jch, jch + 1, (jch + 2)..n, rot);
                            }
                            rot_rows(&mut h, jch, jch + 1, (jch - 1)..n, rot);

                            let (rot, r) = lartg(h[(jch + 1, jch)], h[(jch + 1, jch - 1)]);
                            h[(jch + 1, jch)] = r;
                            h[(jch + 1, jch - 1)] = zero;
                            rot_cols(&mut h, jch, jch - 1, 0..(jch + 1), rot);
                            rot_cols(&mut t, jch, jch - 1, 0..jch, rot);
                        }
                        found = Some(Step::ClearInfinite);
                    }
                    break;
                } else if ilazro {
                    found = Some(Step::Sweep(j));
                    break;
                }
            }
            found.ok_or(Error::Eigen("QZ deflation scan failed"))?
        };

        match step {
            Step::ClearInfinite => {
                let (rot, r) = lartg(h[(ilast, ilast)], h[(ilast, ilast - 1)]);
                h[(ilast, ilast)] = r;
                h[(ilast, ilast - 1)] = zero;
                rot_cols(&mut h, ilast, ilast - 1, 0..ilast, rot);
                rot_cols(&mut t, ilast, ilast - 1, 0..ilast, rot);
                alpha[ilast] = h[(ilast, ilast)];
                beta[ilast] = t[(ilast, ilast)];
                if ilast == 0 {
                    break;
                }
                ilast -= 1;
                iiter = 0;
                eshift = zero;
            }
            Step::Deflate => {
                alpha[ilast] = h[(ilast, ilast)];
                beta[ilast] = t[(ilast, ilast)];
                if ilast == 0 {
                    break;
                }
                ilast -= 1;
                iiter = 0;
                eshift = zero;
            }
            Step::Sweep(ifirst) => {
                iiter += 1;
                let shift = if !iiter.is_multiple_of(10) {
                    wilkinson_shift(&h, &t, ilast)
                } else {
                    eshift += h[(ilast, ilast - 1)] / t[(ilast - 1, ilast - 1)];
                    eshift
                };
                let mut rot = lartg(
                    h[(ifirst, ifirst)] - shift * t[(ifirst, ifirst)],
                    h[(ifirst + 1, ifirst)],
                )
                .0;
                for j in ifirst..ilast {
                    if j > ifirst {
                        let (r2, r) = lartg(h[(j, j - 1)], h[(j + 1, j - 1)]);
                        h[(j, j - 1)] = r;
                        h[(j + 1, j - 1)] = zero;
                        rot = r2;
                    }
                    rot_rows(&mut h, j, j + 1, j..n, rot);
                    rot_rows(&mut t, j, j + 1, j..n, rot);

                    let (r2, r) = lartg(t[(j + 1, j + 1)], t[(j + 1, j)]);
                    t[(j + 1, j + 1)] = r;
                    t[(j + 1, j)] = zero;
                    let hrows = (j + 2).min(ilast) + 1;
                    rot_cols(&mut h, j + 1, j, 0..hrows, r2);
                    rot_cols(&mut t, j + 1, j, 0..(j + 1), r2);
                }
            }
        }
    }

    Ok(alpha
        .into_iter()
        .zip(beta)
        .map(|(alpha, beta)| GenEig {
            alpha,
            beta,
            infinite: modulus(beta) <= btol,
        })
        .collect())
}

fn wilkinson_shift<T: Real>(h: &CMatrix<T>, t: &CMatrix<T>, ilast: usize) -> Complex<T> {
    let l = ilast;
    let half = Complex::new(T::lit(0.5), T::zero());
    let u12 = t[(l - 1, l)] / t[(l, l)];
    let ad11 = h[(l - 1, l - 1)] / t[(l - 1, l - 1)];
    let ad21 = h[(l, l - 1)] / t[(l - 1, l - 1)];
    let ad12 = h[(l - 1, l)] / t[(l, l)];
    let ad22 = h[(l, l)] / t[(l, l)];
    let abi22 = ad22 - u12 * ad21;
    let abi12 = ad12 - u12 * ad11;
    let mut shift = abi22;
    let ctemp = abi12.sqrt() * ad21.sqrt();
    let mut temp = abs1(ctemp);
    if temp != T::zero() {
        let x = half * (ad11 - shift);
        let temp2 = abs1(x);
        temp = temp.max(temp2);
        let tc = Complex::new(temp, T::zero());
        let xs = x / tc;
        let cs = ctemp / tc;
        let mut y = tc * (xs * xs + cs * cs).sqrt();
        if temp2 > T::zero() {
            let xn = x / Complex::new(temp2, T::zero());
            if xn.re * y.re + xn.im * y.im < T::zero() {
                y = -y;
            }
        }
        shift -= ctemp * (ctemp / (x + y));
    }
    shift
}
