//! `analyze` and `ensemble` reports.

use std::fmt::Write as _;

use cohdetect::coherence::l1_coherence;
use cohdetect::criteria::{ppt_oracle, CriteriaError, Criterion, CriterionReport, PptVerdict};
use cohdetect::tripartite::{all_bipartitions_check, corollary2_check, BipartitionOutcome, TripartiteReport};
use cohdetect::{DensityMatrix, TripartiteEnsemble};
use serde::{Deserialize, Serialize};

use crate::scan::format_g;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// `all` or a comma-separated list of criterion names.
pub fn parse_criteria(list: &str) -> Result<Vec<Criterion>, CliError> {
    if list.trim() == "all" {
        return Ok(Criterion::ALL.to_vec());
    }
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Criterion::from_name(s).ok_or_else(|| CliError::UnknownCriterion(s.to_owned())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CriterionOutcome {
    Evaluated(CriterionReport),
    Unsupported { criterion: Criterion, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dims: Vec<usize>,
    pub coherence: f64,
    pub criteria: Vec<CriterionOutcome>,
    /// Present for 2x2 and 2x3 states, where PPT is equivalent to separability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ppt_oracle: Option<PptVerdict>,
}

pub fn analyze(rho: &DensityMatrix, criteria: &[Criterion], name: Option<&str>) -> Result<AnalysisReport, CliError> {
    let outcomes = criteria
        .iter()
        .map(|&c| match c.evaluate(rho) {
            Ok(r) => Ok(CriterionOutcome::Evaluated(r)),
            Err(e @ (CriteriaError::Shape(_) | CriteriaError::QubitNotFirst(_))) => Ok(CriterionOutcome::Unsupported {
                criterion: c,
                reason: e.to_string(),
            }),
            Err(e) => Err(CliError::from(e)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ppt_oracle = match rho.dims() {
        [2, 2] | [2, 3] | [3, 2] => Some(ppt_oracle(rho)?),
        _ => None,
    };
    Ok(AnalysisReport {
        name: name.map(str::to_owned),
        dims: rho.dims().to_vec(),
        coherence: l1_coherence(rho).value(),
        criteria: outcomes,
        ppt_oracle,
    })
}

fn dims_label(dims: &[usize]) -> String {
    dims.iter().map(ToString::to_string).collect::<Vec<_>>().join("x")
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "state {}", dims_label(&self.dims));
        if let Some(name) = &self.name {
            let _ = write!(out, " ({name})");
        }
        let _ = writeln!(out, "\nC_l1 = {}", format_g(self.coherence, 12));
        for o in &self.criteria {
            match o {
                CriterionOutcome::Evaluated(r) => {
                    let _ = writeln!(
                        out,
                        "{:<11} {:<22} lhs={} rhs={} margin={}",
                        r.criterion.name(),
                        r.verdict.to_string(),
                        format_g(r.lhs, 12),
                        format_g(r.rhs, 12),
                        format_g(r.margin, 12)
                    );
                    for n in &r.notes {
                        let _ = writeln!(out, "            note: {n}");
                    }
                }
                CriterionOutcome::Unsupported { criterion, reason } => {
                    let _ = writeln!(out, "{:<11} unsupported: {reason}", criterion.name());
                }
            }
        }
        if let Some(p) = &self.ppt_oracle {
            let _ = writeln!(
                out,
                "PPT oracle  {} (min eigenvalue of partial transpose {})",
                if p.is_ppt { "PPT" } else { "NPT" },
                format_g(p.min_pt_eigenvalue, 12)
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleAnalysis {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dims: [usize; 3],
    pub outcomes: Vec<BipartitionOutcome>,
}

pub fn analyze_ensemble(
    ens: &TripartiteEnsemble,
    all_bipartitions: bool,
    name: Option<&str>,
) -> Result<EnsembleAnalysis, CliError> {
    let outcomes = if all_bipartitions {
        all_bipartitions_check(ens)
    } else {
        vec![BipartitionOutcome::Evaluated(corollary2_check(ens)?)]
    };
    Ok(EnsembleAnalysis {
        name: name.map(str::to_owned),
        dims: ens.dims(),
        outcomes,
    })
}

fn write_tripartite(out: &mut String, r: &TripartiteReport) {
    let _ = writeln!(
        out,
        "{}|{}{}  {:<12} lhs={} rhs={} margin={}",
        r.singled_out,
        r.pair[0],
        r.pair[1],
        r.verdict.to_string(),
        format_g(r.lhs, 12),
        format_g(r.rhs, 12),
        format_g(r.margin, 12)
    );
    for (i, t) in r.terms.iter().enumerate() {
        let _ = writeln!(
            out,
            "  term {i}: weight={} C_x={} pair bound={} summand={}",
            format_g(t.weight, 12),
            format_g(t.coherence_x, 12),
            format_g(t.pair_bound.value, 12),
            format_g(t.summand, 12)
        );
    }
}

impl EnsembleAnalysis {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "ensemble {}", dims_label(&self.dims));
        if let Some(name) = &self.name {
            let _ = write!(out, " ({name})");
        }
        out.push('\n');
        for o in &self.outcomes {
            match o {
                BipartitionOutcome::Evaluated(r) => write_tripartite(&mut out, r),
                BipartitionOutcome::Skipped { singled_out, reason } => {
                    let _ = writeln!(out, "{singled_out}|..  skipped: {reason}");
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cohdetect::states::bell;
    use cohdetect::Verdict;

    #[test]
    fn criteria_list_parsing() {
        assert_eq!(parse_criteria("all").unwrap().len(), 5);
        assert_eq!(
            parse_criteria("result3, corollary1").unwrap(),
            vec![Criterion::Result3, Criterion::Corollary1]
        );
        assert!(matches!(parse_criteria("result5"), Err(CliError::UnknownCriterion(_))));
    }

    #[test]
    fn unsupported_is_inline() {
        let rho = cohdetect::states::chi2(1.0).unwrap();
        let r = analyze(&rho, &[Criterion::Theorem1, Criterion::Theorem2], None).unwrap();
        assert!(matches!(r.criteria[0], CriterionOutcome::Unsupported { .. }));
        assert!(matches!(r.criteria[1], CriterionOutcome::Evaluated(_)));
        assert!(r.ppt_oracle.is_none());
    }

    #[test]
    fn bell_text_report() {
        let r = analyze(&bell(1.0), &[Criterion::Corollary1], Some("phi+")).unwrap();
        let CriterionOutcome::Evaluated(c) = &r.criteria[0] else {
            panic!()
        };
        assert_eq!((c.lhs, c.rhs, c.verdict), (1.0, 0.0, Verdict::Entangled));
        let text = r.to_text();
        assert!(text.starts_with("state 2x2 (phi+)\nC_l1 = 1\n"), "{text}");
        assert!(text.contains("NPT"));
    }
}
