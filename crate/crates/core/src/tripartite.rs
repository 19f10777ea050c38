//! Ensemble bound for tripartite states with one qubit factor.
//!
//! The bound depends on the decomposition `{p_i, rho_i}`, not only on the
//! mixed state, so an explicit [`TripartiteEnsemble`] is required. For each
//! term the singled-out party `x` is reduced to `rho_x` and the remaining pair
//! to `rho_yz`, which is put qubit-first and bounded with
//! [`SeparableBound`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coherence::l1_off_diagonal;
use crate::criteria::{CriteriaError, SeparableBound, Verdict, DETECTION_TOL};
use crate::linalg::{partial_trace, permute_factors, LinalgError};
use crate::states::{DensityMatrix, Family, StateError, StateSampler, Validation};

pub const WEIGHT_SUM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TripartiteError {
    #[error("pair left after singling out {singled_out} has no qubit (dims {dims:?})")]
    NoQubitInPair { singled_out: Party, dims: [usize; 3] },
    #[error("invalid ensemble: {0}")]
    Ensemble(String),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, TripartiteError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "A" | "a" => Some(Party::A),
            "B" | "b" => Some(Party::B),
            "C" | "c" => Some(Party::C),
            _ => None,
        }
    }

    /// The remaining two parties in cyclic order: A -> (B, C), B -> (C, A),
    /// C -> (A, B).
    fn complement(self) -> [Party; 2] {
        match self {
            Party::A => [Party::B, Party::C],
            Party::B => [Party::C, Party::A],
            Party::C => [Party::A, Party::B],
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Pair complementary to `x`, ordered so the qubit comes first.
pub fn pair_order(dims: [usize; 3], x: Party) -> Option<[Party; 2]> {
    let [y, z] = x.complement();
    if dims[y.index()] == 2 {
        Some([y, z])
    } else if dims[z.index()] == 2 {
        Some([z, y])
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleTerm {
    pub weight: f64,
    pub state: DensityMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteEnsemble {
    dims: [usize; 3],
    terms: Vec<EnsembleTerm>,
    singled_out: Party,
    mixture: DensityMatrix,
}

impl TripartiteEnsemble {
    /// Weights must lie in `(0, 1]` and sum to one; every term lives on
    /// `dims`. The mixture is validated strictly unless some term was
    /// admitted without a PSD check.
    pub fn new(dims: [usize; 3], terms: Vec<(f64, DensityMatrix)>, singled_out: Party) -> Result<Self> {
        if terms.is_empty() {
            return Err(TripartiteError::Ensemble("no terms".into()));
        }
        for (i, (w, s)) in terms.iter().enumerate() {
            if !(*w > 0.0 && *w <= 1.0) {
                return Err(TripartiteError::Ensemble(format!("term {i}: weight {w} not in (0, 1]")));
            }
            if s.dims() != dims {
                return Err(TripartiteError::Ensemble(format!(
                    "term {i}: dims {:?} differ from ensemble dims {dims:?}",
                    s.dims()
                )));
            }
        }
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(TripartiteError::Ensemble(format!("weights sum to {total}, expected 1")));
        }
        let mode = if terms.iter().all(|(_, s)| s.psd_checked()) {
            Validation::Strict
        } else {
            Validation::SkipPsd
        };
        let refs: Vec<(f64, &DensityMatrix)> = terms.iter().map(|(w, s)| (*w, s)).collect();
        let mixture = DensityMatrix::mixture(&refs, mode)?;
        if pair_order(dims, singled_out).is_none() {
            return Err(TripartiteError::NoQubitInPair { singled_out, dims });
        }
        Ok(Self {
            dims,
            terms: terms
                .into_iter()
                .map(|(weight, state)| EnsembleTerm { weight, state })
                .collect(),
            singled_out,
            mixture,
        })
    }

    /// Decomposition of one of the tripartite named families.
    pub fn from_family(family: Family, params: &BTreeMap<String, f64>, singled_out: Party) -> Result<Self> {
        let terms = family
            .ensemble_terms(params)?
            .ok_or_else(|| TripartiteError::Ensemble(format!("family {} is not tripartite", family.name())))?;
        Self::new([2, 2, 2], terms, singled_out)
    }

    pub fn with_singled_out(&self, x: Party) -> Result<Self> {
        if pair_order(self.dims, x).is_none() {
            return Err(TripartiteError::NoQubitInPair {
                singled_out: x,
                dims: self.dims,
            });
        }
        Ok(Self {
            singled_out: x,
            ..self.clone()
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn terms(&self) -> &[EnsembleTerm] {
        &self.terms
    }

    pub fn singled_out(&self) -> Party {
        self.singled_out
    }

    pub fn mixture(&self) -> &DensityMatrix {
        &self.mixture
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermBreakdown {
    pub weight: f64,
    /// `C_l1` of the singled-out reduced state.
    pub coherence_x: f64,
    pub pair_bound: SeparableBound,
    /// `coherence_x + pair_bound.value * (1 + coherence_x)`.
    pub summand: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripartiteReport {
    pub singled_out: Party,
    /// Pair order used for the block decomposition (qubit first).
    pub pair: [Party; 2],
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub tolerance_used: f64,
    pub terms: Vec<TermBreakdown>,
}

impl TripartiteReport {
    /// Rebuilds `rhs` from the per-term breakdown alone.
    pub fn recompute_rhs(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let bound = t.pair_bound.recompute();
                t.weight * (t.coherence_x + bound * (1.0 + t.coherence_x))
            })
            .sum()
    }
}

fn term_breakdown(term: &EnsembleTerm, dims: [usize; 3], x: Party, pair: [Party; 2]) -> Result<TermBreakdown> {
    let m = term.state.matrix();
    let coherence_x = l1_off_diagonal(&partial_trace(m, &dims, &[x.index()])?);

    let mut kept = [pair[0].index(), pair[1].index()];
    kept.sort_unstable();
    let pair_state = partial_trace(m, &dims, &kept)?;
    let pair_state = if kept[0] == pair[0].index() {
        pair_state
    } else {
        permute_factors(&pair_state, &[dims[kept[0]], dims[kept[1]]], &[1, 0])?
    };
    let pair_bound = SeparableBound::of_qubit_first(&pair_state)?;
    let summand = coherence_x + pair_bound.value * (1.0 + coherence_x);
    Ok(TermBreakdown {
        weight: term.weight,
        coherence_x,
        pair_bound,
        summand,
    })
}

fn rhs_for(ens: &TripartiteEnsemble, x: Party) -> Result<([Party; 2], f64, Vec<TermBreakdown>)> {
    let pair = pair_order(ens.dims, x).ok_or(TripartiteError::NoQubitInPair {
        singled_out: x,
        dims: ens.dims,
    })?;
    let terms = ens
        .terms
        .iter()
        .map(|t| term_breakdown(t, ens.dims, x, pair))
        .collect::<Result<Vec<_>>>()?;
    let rhs = terms.iter().map(|t| t.weight * t.summand).sum();
    Ok((pair, rhs, terms))
}

/// Right-hand side of the ensemble bound for the ensemble's singled-out party.
pub fn theorem4_rhs(ens: &TripartiteEnsemble) -> Result<(f64, Vec<TermBreakdown>)> {
    let (_, rhs, terms) = rhs_for(ens, ens.singled_out)?;
    Ok((rhs, terms))
}

/// Entangled iff `C_l1(mixture) > rhs + tol`.
pub fn corollary2_check(ens: &TripartiteEnsemble) -> Result<TripartiteReport> {
    let (pair, rhs, terms) = rhs_for(ens, ens.singled_out)?;
    let lhs = l1_off_diagonal(ens.mixture.matrix());
    let margin = lhs - rhs;
    Ok(TripartiteReport {
        singled_out: ens.singled_out,
        pair,
        lhs,
        rhs,
        margin,
        verdict: if margin > DETECTION_TOL {
            Verdict::Entangled
        } else {
            Verdict::Inconclusive
        },
        tolerance_used: DETECTION_TOL,
        terms,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum BipartitionOutcome {
    Evaluated(TripartiteReport),
    Skipped { singled_out: Party, reason: String },
}

/// One outcome per choice of singled-out party, in order A, B, C.
pub fn all_bipartitions_check(ens: &TripartiteEnsemble) -> Vec<BipartitionOutcome> {
    Party::ALL
        .into_iter()
        .map(|x| match ens.with_singled_out(x).and_then(|e| corollary2_check(&e)) {
            Ok(report) => BipartitionOutcome::Evaluated(report),
            Err(e) => BipartitionOutcome::Skipped {
                singled_out: x,
                reason: e.to_string(),
            },
        })
        .collect()
}

/// Mixture of `terms` random full-rank product states `rho_A (x) rho_B (x) rho_C`.
pub fn random_product_ensemble(
    dims: [usize; 3],
    terms: usize,
    seed: u64,
    singled_out: Party,
) -> Result<TripartiteEnsemble> {
    let mut sampler = StateSampler::new(seed);
    let weights = sampler.dirichlet(terms.max(1));
    let states = weights
        .iter()
        .map(|_| sampler.product_state(&dims, None))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    // renormalise so the sum is exact to rounding
    let total: f64 = weights.iter().sum();
    TripartiteEnsemble::new(
        dims,
        weights.into_iter().map(|w| w / total).zip(states).collect(),
        singled_out,
    )
}
