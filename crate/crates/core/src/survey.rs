//! Population statistics of the bipartite criteria against the PPT oracle.

use serde::{Deserialize, Serialize};

use crate::criteria::{ppt_oracle, CriteriaError, Criterion, Verdict};
use crate::states::{DensityMatrix, StateSampler, RNG_VERSION};

/// Random `dA (x) dB` state for corpus index `seed`. The rank cycles through
/// `1..=dA*dB` so the corpus mixes pure and mixed states.
pub fn corpus_state(dims: [usize; 2], seed: u64) -> Result<DensityMatrix, CriteriaError> {
    let dim = dims[0] * dims[1];
    let rank = 1 + (seed as usize % dim);
    let rho = StateSampler::new(seed).density(dim, rank)?;
    Ok(DensityMatrix::validate(rho.into_matrix(), &dims)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionStats {
    pub criterion: Criterion,
    /// States the criterion applied to.
    pub evaluated: usize,
    pub flagged: usize,
    /// Flagged and the oracle found a negative partial transpose.
    pub flagged_npt: usize,
    /// Flagged although the oracle reports PPT.
    pub flagged_ppt: usize,
    /// `flagged_npt / npt_count`.
    pub detection_rate: f64,
    /// `flagged_ppt / ppt_count`.
    pub ppt_flagged_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub dims: [usize; 2],
    pub samples: usize,
    pub base_seed: u64,
    pub rng_version: String,
    pub npt_count: usize,
    pub ppt_count: usize,
    pub criteria: Vec<CriterionStats>,
}

fn rate(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Runs every criterion on `samples` corpus states with seeds
/// `base_seed..base_seed + samples`. Criteria that do not apply to `dims`
/// (theorem1 outside 2x2) report zero evaluations.
pub fn survey(
    dims: [usize; 2],
    samples: usize,
    base_seed: u64,
    criteria: &[Criterion],
) -> Result<SurveyReport, CriteriaError> {
    let mut stats: Vec<CriterionStats> = criteria
        .iter()
        .map(|&criterion| CriterionStats {
            criterion,
            evaluated: 0,
            flagged: 0,
            flagged_npt: 0,
            flagged_ppt: 0,
            detection_rate: 0.0,
            ppt_flagged_rate: 0.0,
        })
        .collect();
    let (mut npt_count, mut ppt_count) = (0, 0);
    for i in 0..samples as u64 {
        let rho = corpus_state(dims, base_seed + i)?;
        let ppt = ppt_oracle(&rho)?.is_ppt;
        if ppt {
            ppt_count += 1;
        } else {
            npt_count += 1;
        }
        for s in &mut stats {
            let verdict = match s.criterion.evaluate(&rho) {
                Ok(r) => r.verdict,
                Err(CriteriaError::Shape(_) | CriteriaError::QubitNotFirst(_)) => continue,
                Err(e) => return Err(e),
            };
            s.evaluated += 1;
            if verdict == Verdict::Entangled {
                s.flagged += 1;
                if ppt {
                    s.flagged_ppt += 1;
                } else {
                    s.flagged_npt += 1;
                }
            }
        }
    }
    for s in &mut stats {
        if s.evaluated > 0 {
            s.detection_rate = rate(s.flagged_npt, npt_count);
            s.ppt_flagged_rate = rate(s.flagged_ppt, ppt_count);
        }
    }
    Ok(SurveyReport {
        dims,
        samples,
        base_seed,
        rng_version: RNG_VERSION.to_owned(),
        npt_count,
        ppt_count,
        criteria: stats,
    })
}
