//! JSON formats: system files and solver reports.
//!
//! Reals are written in the shortest decimal form that parses back to the
//! same `f64`, so every value round-trips exactly.

use crate::error::{Error, Result};
use crate::scalar::{cplx, CMatrix, Real};
use crate::system::{Domain, StateSpaceSystem};
use crate::xi::XiResult;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// On-disk system description; matrices are row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub domain: Domain,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<[f64; 2]>>,
}

fn rows_of<T: Real>(m: &CMatrix<T>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()]).collect())
        .collect()
}

fn matrix_of<T: Real>(name: &str, rows: &[Vec<[f64; 2]>], nr: usize, nc: usize) -> Result<CMatrix<T>> {
    if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Dimension(format!("{name} must be {nr}×{nc}")));
    }
    let mut out = DMatrix::zeros(nr, nc);
    for (i, r) in rows.iter().enumerate() {
        for (j, &[re, im]) in r.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::Parse(format!("non-finite entry in {name}[{i}][{j}]")));
            }
            out[(i, j)] = cplx(T::lit(re), T::lit(im));
        }
    }
    Ok(out)
}

impl SystemFile {
    pub fn from_system<T: Real>(s: &StateSpaceSystem<T>) -> Self {
        Self {
            domain: s.domain(),
            n: s.n(),
            m: s.m(),
            a: rows_of(s.a()),
            b: rows_of(s.b()),
            c: rows_of(s.c()),
            d: rows_of(s.d()),
        }
    }

    pub fn to_system<T: Real>(&self) -> Result<StateSpaceSystem<T>> {
        let (n, m) = (self.n, self.m);
        StateSpaceSystem::new(
            matrix_of("A", &self.a, n, n)?,
            matrix_of("B", &self.b, n, m)?,
            matrix_of("C", &self.c, m, n)?,
            matrix_of("D", &self.d, m, m)?,
            self.domain,
        )
    }
}

pub fn parse_system<T: Real>(json: &str) -> Result<StateSpaceSystem<T>> {
    let f: SystemFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    f.to_system()
}

pub fn system_to_json<T: Real>(s: &StateSpaceSystem<T>) -> String {
    serde_json::to_string_pretty(&SystemFile::from_system(s)).expect("plain data serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub xi_lb: f64,
    pub xi_ub: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigCountsReport {
    pub pencil_order: usize,
    pub pencil_solves: usize,
    pub small_solves: usize,
}

/// Solver outcome in its serialized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub algorithm: String,
    pub xi_estimate: Option<f64>,
    pub bracket: Option<BracketReport>,
    pub iterations: usize,
    pub restarts: usize,
    pub hec_avg_inner_iters: f64,
    pub eig_counts: EigCountsReport,
    /// `(ξ̃, ω̃)` per HEC run.
    pub pseudoroots: Vec<(f64, f64)>,
    pub elapsed_seconds: f64,
    pub certificate: Option<String>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Relative difference to the oracle value, filled in by benchmarks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agreement: Option<f64>,
}

impl Report {
    pub fn from_result<T: Real>(r: &XiResult<T>) -> Self {
        Self {
            algorithm: r.algorithm.as_str().to_string(),
            xi_estimate: Some(r.xi.as_f64()),
            bracket: Some(BracketReport {
                xi_lb: r.bracket.xi_lb.as_f64(),
                xi_ub: r.bracket.xi_ub.as_f64(),
            }),
            iterations: r.iterations,
            restarts: r.restarts,
            hec_avg_inner_iters: r.hec_avg_inner_iters(),
            eig_counts: EigCountsReport {
                pencil_order: r.eig_counts.pencil_order,
                pencil_solves: r.eig_counts.pencil_solves,
                small_solves: r.eig_counts.small_solves,
            },
            pseudoroots: r.pseudoroots.iter().map(|p| (p.eps.as_f64(), p.x.as_f64())).collect(),
            elapsed_seconds: r.elapsed,
            certificate: Some(r.certificate.as_str().to_string()),
            tolerance: r.tau.as_f64(),
            error: None,
            oracle_agreement: None,
        }
    }

    /// Report for a run that produced only a value (the oracle).
    pub fn value_only(algorithm: &str, xi: f64, tolerance: f64, elapsed: f64) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            xi_estimate: Some(xi),
            bracket: None,
            iterations: 0,
            restarts: 0,
            hec_avg_inner_iters: 0.0,
            eig_counts: EigCountsReport {
                pencil_order: 0,
                pencil_solves: 0,
                small_solves: 0,
            },
            pseudoroots: Vec::new(),
            elapsed_seconds: elapsed,
            certificate: None,
            tolerance,
            error: None,
            oracle_agreement: None,
        }
    }

    pub fn failure(algorithm: &str, err: &Error, tolerance: f64, elapsed: f64) -> Self {
        Self {
            xi_estimate: None,
            error: Some(err.to_string()),
            ..Self::value_only(algorithm, 0.0, tolerance, elapsed)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub const TEXT_HEADER: &'static str =
        "algorithm | restarts | avg inner | pencil solves | time (s) | xi estimate | certificate";

    /// One table row: restarts, mean HEC iterations, pencil solves, time, estimate.
    pub fn text_row(&self) -> String {
        let xi = match (&self.error, self.xi_estimate) {
            (Some(e), _) => format!("FAILED: {e}"),
            (None, Some(x)) => format!("{x:.15}"),
            (None, None) => "-".into(),
        };
        format!(
            "{} | {} | {:.1} | {} | {:.3} | {} | {}",
            self.algorithm,
            self.restarts,
            self.hec_avg_inner_iters,
            self.eig_counts.pencil_solves,
            self.elapsed_seconds,
            xi,
            self.certificate.as_deref().unwrap_or("-"),
        )
    }
}
