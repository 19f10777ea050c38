//! JSON state and ensemble files.

use std::fs;
use std::path::Path;

use cohdetect::linalg::{c64, ComplexMatrix};
use cohdetect::states::Validation;
use cohdetect::{DensityMatrix, Party, TripartiteEnsemble};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Tolerance on `| ||ket|| - 1 |` for ket terms in an ensemble file.
pub const KET_NORM_TOL: f64 = 1e-9;

/// Row-major matrix of `[re, im]` pairs.
pub type MatrixRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: MatrixRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

pub fn matrix_rows(m: &ComplexMatrix) -> MatrixRows {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn rows_to_matrix(rows: &MatrixRows) -> Result<ComplexMatrix, CliError> {
    let n = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(CliError::Validation(format!(
            "matrix must be square: row {i} has {} entries, expected {n}",
            row.len()
        )));
    }
    let data = rows.iter().flatten().map(|&[re, im]| c64(re, im)).collect();
    ComplexMatrix::from_vec(n, n, data).map_err(|e| CliError::Validation(e.to_string()))
}

/// Pretty JSON with a trailing newline; the canonical on-disk form.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        origin: origin.to_owned(),
        message: e.to_string(),
    })
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix, metadata: Option<Metadata>) -> Self {
        Self {
            dims: rho.dims().to_vec(),
            matrix: matrix_rows(rho.matrix()),
            metadata,
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        parse(text, origin)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read_text(path)?, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.as_ref().and_then(|m| m.name.as_deref())
    }

    pub fn density(&self) -> Result<DensityMatrix, CliError> {
        let m = rows_to_matrix(&self.matrix)?;
        DensityMatrix::validate(m, &self.dims).map_err(|e| CliError::Validation(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleTermFile {
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<MatrixRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ket: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub dims: [usize; 3],
    pub singled_out: Party,
    pub terms: Vec<EnsembleTermFile>,
    /// Set to `false` to admit non-positive terms (Hermiticity and trace are
    /// still checked).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_psd: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl EnsembleFile {
    pub fn from_ensemble(ens: &TripartiteEnsemble, metadata: Option<Metadata>) -> Self {
        let all_checked = ens.terms().iter().all(|t| t.state.psd_checked());
        Self {
            dims: ens.dims(),
            singled_out: ens.singled_out(),
            terms: ens
                .terms()
                .iter()
                .map(|t| EnsembleTermFile {
                    weight: t.weight,
                    state: Some(matrix_rows(t.state.matrix())),
                    ket: None,
                })
                .collect(),
            check_psd: if all_checked { None } else { Some(false) },
            metadata,
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        parse(text, origin)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read_text(path)?, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn ensemble(&self) -> Result<TripartiteEnsemble, CliError> {
        let mode = if self.check_psd.unwrap_or(true) {
            Validation::Strict
        } else {
            Validation::SkipPsd
        };
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let m = match (&t.state, &t.ket) {
                    (Some(rows), None) => rows_to_matrix(rows)?,
                    (None, Some(ket)) => ket_projector(ket, i)?,
                    _ => {
                        return Err(CliError::Validation(format!(
                            "term {i}: exactly one of 'state' or 'ket' is required"
                        )))
                    }
                };
                let rho = DensityMatrix::validate_with(m, &self.dims, mode)
                    .map_err(|e| CliError::Validation(format!("term {i}: {e}")))?;
                Ok((t.weight, rho))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        TripartiteEnsemble::new(self.dims, terms, self.singled_out).map_err(|e| CliError::Validation(e.to_string()))
    }
}

fn ket_projector(ket: &[[f64; 2]], term: usize) -> Result<ComplexMatrix, CliError> {
    let amps: Vec<_> = ket.iter().map(|&[re, im]| c64(re, im)).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > KET_NORM_TOL {
        return Err(CliError::Validation(format!(
            "term {term}: ket norm is {norm}, expected 1 (tolerance {KET_NORM_TOL:e})"
        )));
    }
    if amps.is_empty() {
        return Err(CliError::Validation(format!("term {term}: empty ket")));
    }
    Ok(ComplexMatrix::projector(&amps))
}
