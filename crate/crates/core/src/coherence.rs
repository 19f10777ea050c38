//! l1-norm of coherence in the computational basis.

use serde::{Deserialize, Serialize};

use crate::linalg::ComplexMatrix;
use crate::states::DensityMatrix;

/// Slack allowed in [`convexity_check`].
pub const CONVEXITY_TOL: f64 = 1e-10;

/// A nonnegative coherence value. Always computed in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoherenceValue(f64);

impl CoherenceValue {
    pub fn new(value: f64) -> Option<Self> {
        (value >= 0.0 && value.is_finite()).then_some(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<CoherenceValue> for f64 {
    fn from(c: CoherenceValue) -> f64 {
        c.0
    }
}

/// `sum_{i != j} |m_ij|` for any square matrix.
pub fn l1_off_diagonal(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut total = 0.0;
    for r in 0..n {
        for (c, z) in m.row(r).iter().enumerate() {
            if r != c {
                total += z.norm();
            }
        }
    }
    total
}

pub fn l1_coherence(rho: &DensityMatrix) -> CoherenceValue {
    CoherenceValue(l1_off_diagonal(rho.matrix()))
}

/// Coherence of `rho_A (x) rho_B` from the coherences of its factors:
/// `c_A + c_B (1 + c_A)`.
pub fn product_coherence(c_a: CoherenceValue, c_b: CoherenceValue) -> CoherenceValue {
    CoherenceValue(c_a.0 + c_b.0 * (1.0 + c_a.0))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConvexityError {
    #[error("{states} states but {weights} weights")]
    LengthMismatch { states: usize, weights: usize },
    #[error("weights must be nonnegative and sum to 1, got sum {0}")]
    NotOnSimplex(f64),
    #[error("states disagree on dimension")]
    DimensionMismatch,
    #[error("no states given")]
    Empty,
}

/// Checks `C(sum p_i rho_i) <= sum p_i C(rho_i) + 1e-10`.
pub fn convexity_check(states: &[DensityMatrix], weights: &[f64]) -> Result<bool, ConvexityError> {
    if states.len() != weights.len() {
        return Err(ConvexityError::LengthMismatch {
            states: states.len(),
            weights: weights.len(),
        });
    }
    let first = states.first().ok_or(ConvexityError::Empty)?;
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > 1e-10 {
        return Err(ConvexityError::NotOnSimplex(total));
    }
    if states.iter().any(|s| s.dim() != first.dim()) {
        return Err(ConvexityError::DimensionMismatch);
    }
    let mut mix = ComplexMatrix::zeros(first.dim(), first.dim());
    let mut averaged = 0.0;
    for (s, &w) in states.iter().zip(weights) {
        mix = &mix + &s.matrix().scale(w);
        averaged += w * l1_coherence(s).0;
    }
    Ok(l1_off_diagonal(&mix) <= averaged + CONVEXITY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell, chi2, Family};
    use std::collections::BTreeMap;

    fn cv(x: f64) -> CoherenceValue {
        CoherenceValue::new(x).unwrap()
    }

    #[test]
    fn illustration_values() {
        for p in [0.0, 0.3, 1.0] {
            let params = BTreeMap::from([("p".to_string(), p)]);
            let xi1 = Family::Illustration1.build(&params).unwrap();
            assert!((l1_coherence(&xi1).value() - 1.0).abs() < 1e-14);
            let xi2 = Family::Illustration2.build(&params).unwrap();
            let expect = 6.0 * (1.0 + 2f64.sqrt()) / 5.0;
            assert!((l1_coherence(&xi2).value() - expect).abs() < 1e-12);
            let xi3 = Family::Illustration3.build(&params).unwrap();
            assert!((l1_coherence(&xi3).value() - 2.0 * p).abs() < 1e-14);
        }
    }

    #[test]
    fn example2_value() {
        for a in [0.01, 0.5, 1.0] {
            let c = l1_coherence(&chi2(a).unwrap()).value();
            assert!((c - 6.0 * a / (6.0 * a + 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_state_is_incoherent() {
        let rho = DensityMatrix::validate(ComplexMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4]), &[2, 2]).unwrap();
        assert_eq!(l1_coherence(&rho).value(), 0.0);
    }

    #[test]
    fn product_coherence_arithmetic() {
        assert_eq!(product_coherence(cv(0.0), cv(0.7)).value(), 0.7);
        assert!((product_coherence(cv(0.4), cv(1.0)).value() - 1.8).abs() < 1e-15);
    }

    #[test]
    fn convexity_examples() {
        let b = bell(1.0);
        assert!(convexity_check(std::slice::from_ref(&b), &[1.0]).unwrap());
        assert!(convexity_check(&[bell(1.0), bell(-1.0)], &[0.3, 0.7]).unwrap());
        assert!(matches!(
            convexity_check(&[bell(1.0)], &[0.5]),
            Err(ConvexityError::NotOnSimplex(_))
        ));
        assert!(convexity_check(&[], &[]).is_err());
    }

    #[test]
    fn negative_rejected() {
        assert!(CoherenceValue::new(-1e-3).is_none());
        assert!(CoherenceValue::new(f64::NAN).is_none());
    }
}
