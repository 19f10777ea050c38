//! Bipartite criteria for qubit-qudit states.
//!
//! Every check works on a `2 (x) d` state with the qubit as the first tensor
//! factor and produces a [`CriterionReport`]. Detection-type criteria are
//! one-sided: they either report [`Verdict::Entangled`] or stay silent.
//! The partial-transpose oracle is independent of all of them.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coherence::l1_coherence;
use crate::ggm::symmetric_sum;
use crate::linalg::{
    frobenius_norm_sq, hermitian_eigenvalues, partial_transpose, trace_product, ComplexMatrix, LinalgError, Subsystem,
};
use crate::states::{BlockDecomposition, DensityMatrix, StateError};

/// Dead band on every strict comparison.
pub const DETECTION_TOL: f64 = 1e-10;

/// Minimum eigenvalues in `[-EIGEN_CLAMP, 0)` are treated as zero before
/// taking square roots; anything more negative is an error.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Smallest partial-transpose eigenvalue still counted as PPT.
pub const PPT_TOL: f64 = -1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CriteriaError {
    #[error("criterion needs dims [2, d] with the qubit first, got {0:?}")]
    QubitNotFirst(Vec<usize>),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("lambda_min({block}) = {value:e} is negative beyond tolerance")]
    NegativeEigenvalue { block: &'static str, value: f64 },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, CriteriaError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// `||Q||^2 > Tr(PR)` detects entanglement.
    Result3,
    /// `||Q||^2 < lambda_min(P) lambda_min(R)` stated as necessary for separability.
    Result4,
    /// Two-qubit coherence test `C > Tr[(A+B) sigma_x + 2AB]`.
    Theorem1,
    /// Qubit-qudit coherence test `C >= Tr[(P+R) S] + 2 Tr(PR)`.
    Theorem2,
    /// Violation of the separable-state coherence bound.
    Corollary1,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::Result3,
        Criterion::Result4,
        Criterion::Theorem1,
        Criterion::Theorem2,
        Criterion::Corollary1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Result3 => "result3",
            Criterion::Result4 => "result4",
            Criterion::Theorem1 => "theorem1",
            Criterion::Theorem2 => "theorem2",
            Criterion::Corollary1 => "corollary1",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn evaluate(self, rho: &DensityMatrix) -> Result<CriterionReport> {
        match self {
            Criterion::Result3 => result3_check(rho),
            Criterion::Result4 => result4_check(rho),
            Criterion::Theorem1 => theorem1_check(rho),
            Criterion::Theorem2 => theorem2_check(rho),
            Criterion::Corollary1 => corollary1_check(rho),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Entangled,
    Inconclusive,
    SeparabilityConsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Entangled => "Entangled",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::SeparabilityConsistent => "SeparabilityConsistent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub margin: f64,
    pub verdict: Verdict,
    pub tolerance_used: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Copy)]
enum Comparison {
    /// Fires when `margin > tol`.
    Strict,
    /// Fires when `margin >= tol`.
    NonStrict,
}

fn report(
    criterion: Criterion,
    lhs: f64,
    rhs: f64,
    comparison: Comparison,
    otherwise: Verdict,
    notes: Vec<String>,
) -> CriterionReport {
    let margin = lhs - rhs;
    let fires = match comparison {
        Comparison::Strict => margin > DETECTION_TOL,
        Comparison::NonStrict => margin >= DETECTION_TOL,
    };
    CriterionReport {
        criterion,
        lhs,
        rhs,
        margin,
        verdict: if fires { Verdict::Entangled } else { otherwise },
        tolerance_used: DETECTION_TOL,
        notes,
    }
}

fn qubit_first_blocks(rho: &DensityMatrix) -> Result<BlockDecomposition> {
    match rho.dims() {
        [2, _] => Ok(BlockDecomposition::from_qubit_first(rho.matrix())?),
        other => Err(CriteriaError::QubitNotFirst(other.to_vec())),
    }
}

fn lambda_min(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.min())
}

fn clamp_eigen(block: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -EIGEN_CLAMP {
        Ok(0.0)
    } else {
        Err(CriteriaError::NegativeEigenvalue { block, value })
    }
}

fn re(z: Complex64) -> f64 {
    z.re
}

pub fn result3_check(rho: &DensityMatrix) -> Result<CriterionReport> {
    let b = qubit_first_blocks(rho)?;
    let lhs = frobenius_norm_sq(&b.q);
    let rhs = re(trace_product(&b.p, &b.r)?);
    Ok(report(
        Criterion::Result3,
        lhs,
        rhs,
        Comparison::Strict,
        Verdict::Inconclusive,
        vec![],
    ))
}

/// Contrapositive of the block condition `||Q||^2 < lambda_min(P) lambda_min(R)`
/// taken as necessary for separability: `lhs >= rhs + tol` is reported as
/// entangled.
pub fn result4_check(rho: &DensityMatrix) -> Result<CriterionReport> {
    let b = qubit_first_blocks(rho)?;
    let lhs = frobenius_norm_sq(&b.q);
    let rhs = lambda_min(&b.p)? * lambda_min(&b.r)?;
    Ok(report(
        Criterion::Result4,
        lhs,
        rhs,
        Comparison::NonStrict,
        Verdict::SeparabilityConsistent,
        vec![],
    ))
}

pub fn theorem1_check(rho: &DensityMatrix) -> Result<CriterionReport> {
    if rho.dims() != [2, 2] {
        return Err(CriteriaError::Shape(format!(
            "two-qubit criterion needs dims [2, 2], got {:?}",
            rho.dims()
        )));
    }
    let b = qubit_first_blocks(rho)?;
    let sigma_x = symmetric_sum(2).expect("d = 2");
    let sum = &b.p + &b.r;
    let rhs = re(trace_product(&sum, &sigma_x)?) + 2.0 * re(trace_product(&b.p, &b.r)?);
    let lhs = l1_coherence(rho).value();
    Ok(report(
        Criterion::Theorem1,
        lhs,
        rhs,
        Comparison::Strict,
        Verdict::Inconclusive,
        vec![],
    ))
}

pub fn theorem2_check(rho: &DensityMatrix) -> Result<CriterionReport> {
    let b = qubit_first_blocks(rho)?;
    let s = symmetric_sum(b.qudit_dim()).map_err(|e| CriteriaError::Shape(e.to_string()))?;
    let sum = &b.p + &b.r;
    let rhs = re(trace_product(&sum, &s)?) + 2.0 * re(trace_product(&b.p, &b.r)?);
    let lhs = l1_coherence(rho).value();
    Ok(report(
        Criterion::Theorem2,
        lhs,
        rhs,
        Comparison::NonStrict,
        Verdict::Inconclusive,
        vec!["non-strict comparison (>=) as stated; the step it follows from is strict (>)".into()],
    ))
}

/// Ingredients of the separable-state coherence bound
/// `sqrt(2d(d-1)) [ (||P||^2 + ||R||^2 - sum_j |rho_jj|^2)^(1/2) + sqrt(lmin(P) lmin(R)) ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableBound {
    pub qudit_dim: usize,
    pub prefactor: f64,
    pub p_norm_sq: f64,
    pub r_norm_sq: f64,
    pub diag_sq_sum: f64,
    /// `||P||^2 + ||R||^2 - sum_j |rho_jj|^2`, evaluated as twice the squared
    /// off-diagonal mass of `P` and `R` (equal algebraically, never negative).
    pub radicand: f64,
    /// Clamped at zero inside the tolerance window.
    pub lambda_min_p: f64,
    pub lambda_min_r: f64,
    pub value: f64,
}

fn off_diagonal_norm_sq(m: &ComplexMatrix) -> f64 {
    frobenius_norm_sq(m) - m.diagonal_entries().iter().map(Complex64::norm_sqr).sum::<f64>()
}

impl SeparableBound {
    /// Evaluates the bound for a qubit-first `2d x 2d` operator.
    pub fn of_qubit_first(m: &ComplexMatrix) -> Result<Self> {
        let b = BlockDecomposition::from_qubit_first(m)?;
        let d = b.qudit_dim();
        let p_norm_sq = frobenius_norm_sq(&b.p);
        let r_norm_sq = frobenius_norm_sq(&b.r);
        let diag_sq_sum: f64 = m.diagonal_entries().iter().map(Complex64::norm_sqr).sum();
        let radicand = off_diagonal_norm_sq(&b.p) + off_diagonal_norm_sq(&b.r);
        let lambda_min_p = clamp_eigen("P", lambda_min(&b.p)?)?;
        let lambda_min_r = clamp_eigen("R", lambda_min(&b.r)?)?;
        let prefactor = (2.0 * d as f64 * (d as f64 - 1.0)).sqrt();
        let value = prefactor * (radicand.sqrt() + (lambda_min_p * lambda_min_r).sqrt());
        Ok(Self {
            qudit_dim: d,
            prefactor,
            p_norm_sq,
            r_norm_sq,
            diag_sq_sum,
            radicand,
            lambda_min_p,
            lambda_min_r,
            value,
        })
    }

    /// Recomputes `value` from the stored ingredients.
    pub fn recompute(&self) -> f64 {
        self.prefactor * (self.radicand.sqrt() + (self.lambda_min_p * self.lambda_min_r).sqrt())
    }
}

pub fn theorem3_details(rho: &DensityMatrix) -> Result<SeparableBound> {
    qubit_first_blocks(rho)?;
    SeparableBound::of_qubit_first(rho.matrix())
}

/// Upper bound on `C_l1` that the separable-state theorem asserts.
pub fn theorem3_bound(rho: &DensityMatrix) -> Result<f64> {
    Ok(theorem3_details(rho)?.value)
}

pub fn corollary1_check(rho: &DensityMatrix) -> Result<CriterionReport> {
    let bound = theorem3_details(rho)?;
    let lhs = l1_coherence(rho).value();
    Ok(report(
        Criterion::Corollary1,
        lhs,
        bound.value,
        Comparison::Strict,
        Verdict::Inconclusive,
        vec![format!(
            "prefactor sqrt(2d(d-1)) = {} for d = {}",
            bound.prefactor, bound.qudit_dim
        )],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptVerdict {
    pub min_pt_eigenvalue: f64,
    pub is_ppt: bool,
}

/// Peres-Horodecki test: smallest eigenvalue of the partial transpose on the
/// second factor. Exact separability test for 2x2 and 2x3.
pub fn ppt_oracle(rho: &DensityMatrix) -> Result<PptVerdict> {
    let [da, db] = match rho.dims() {
        &[a, b] => [a, b],
        other => {
            return Err(CriteriaError::Shape(format!(
                "PPT oracle needs a bipartite state, got dims {other:?}"
            )))
        }
    };
    let pt = partial_transpose(rho.matrix(), [da, db], Subsystem::B)?;
    let min_pt_eigenvalue = lambda_min(&pt)?;
    Ok(PptVerdict {
        min_pt_eigenvalue,
        is_ppt: min_pt_eigenvalue >= PPT_TOL,
    })
}

/// `sum |x_i| <= sqrt(n) (sum x_i^2)^(1/2) + 1e-12` with `n = values.len()`.
pub fn holder_bound(values: &[f64]) -> bool {
    let n = values.len() as f64;
    let l1: f64 = values.iter().map(|x| x.abs()).sum();
    let l2 = values.iter().map(|x| x * x).sum::<f64>().sqrt();
    l1 <= n.sqrt() * l2 + 1e-12
}
