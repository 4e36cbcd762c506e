//! Reference methods used to validate and benchmark the HEC driver.

mod bisection;
mod mp;
mod oracle;

pub use bisection::compute_xi_bisection;
pub use mp::compute_xi_mp;
pub use oracle::{oracle_min_gamma, oracle_xi, OracleOptions};
