//! Extremal passivity parameter `Ξ` of continuous- and discrete-time
//! state-space models.
//!
//! [`xi::compute_xi`] is the main entry point. It combines pencil-based
//! certification of the boundary zeros of `γ_ξ(ω) = λ_min(Φ_ξ(ω))` with the
//! HEC root-min solver in [`hec`]. [`baselines`] holds the midpoint
//! iteration, bisection and a brute-force oracle.
//!
//! All routines are generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix the precision.

// `!(a < b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod error;
pub mod generate;
pub mod hec;
pub mod io;
pub mod linalg;
pub mod pencil;
pub mod scalar;
pub mod spectral;
pub mod system;
pub mod xi;

pub use error::{Error, Result};
pub use system::{Domain, StateSpaceSystem, Tolerances, XiBracket};
pub use xi::{compute_xi, compute_xi_cont, compute_xi_disc, Certificate, IntervalRule, XiOptions, XiResult};

pub type System64 = StateSpaceSystem<f64>;
pub type System32 = StateSpaceSystem<f32>;
pub type Tolerances64 = Tolerances<f64>;
pub type Tolerances32 = Tolerances<f32>;
pub type Cache64 = spectral::EvalCache<f64>;
pub type Cache32 = spectral::EvalCache<f32>;
pub type XiResult64 = XiResult<f64>;
pub type XiResult32 = XiResult<f32>;
pub type CMatrix64 = scalar::CMatrix<f64>;
pub type CMatrix32 = scalar::CMatrix<f32>;
