//! File generators: GGM bases, random states, fixtures and surveys.

use std::collections::BTreeMap;
use std::path::Path;

use cohdetect::ggm::{build_basis_with, DiagonalNormalization, GgmLabel};
use cohdetect::linalg::{c64, ComplexMatrix};
use cohdetect::states::{bell, chi2, StateSampler};
use cohdetect::{DensityMatrix, Family, Party, TripartiteEnsemble};
use serde::{Deserialize, Serialize};

use crate::files::{matrix_rows, to_json, write_text, EnsembleFile, MatrixRows, Metadata, StateFile};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    #[default]
    AsPrinted,
    Standard,
}

impl From<Normalization> for DiagonalNormalization {
    fn from(n: Normalization) -> Self {
        match n {
            Normalization::AsPrinted => DiagonalNormalization::AsPrinted,
            Normalization::Standard => DiagonalNormalization::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GgmEntry {
    #[serde(flatten)]
    pub label: GgmLabel,
    pub matrix: MatrixRows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GgmDocument {
    pub dim: usize,
    pub normalization: Normalization,
    pub counts: GgmCounts,
    pub matrices: Vec<GgmEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GgmCounts {
    pub symmetric: usize,
    pub antisymmetric: usize,
    pub diagonal: usize,
}

pub fn ggm_document(dim: usize, normalization: Normalization) -> Result<GgmDocument, CliError> {
    let basis = build_basis_with(dim, normalization.into())?;
    Ok(GgmDocument {
        dim,
        normalization,
        counts: GgmCounts {
            symmetric: basis.symmetric().len(),
            antisymmetric: basis.antisymmetric().len(),
            diagonal: basis.diagonal().len(),
        },
        matrices: basis
            .labelled()
            .into_iter()
            .map(|(label, m)| GgmEntry {
                label,
                matrix: matrix_rows(m),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RandomKind {
    /// Ginibre state of full rank unless `--rank` says otherwise.
    Generic,
    /// Rank-one state.
    Pure,
    /// Mixture of full-rank product states.
    Separable,
}

impl RandomKind {
    fn name(self) -> &'static str {
        match self {
            RandomKind::Generic => "generic",
            RandomKind::Pure => "pure",
            RandomKind::Separable => "separable",
        }
    }
}

pub const DEFAULT_SEPARABLE_TERMS: usize = 4;

/// Parses `AxB` or `AxBxC`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, CliError> {
    let dims = s
        .split(['x', 'X'])
        .map(|t| t.trim().parse::<usize>().ok().filter(|&d| d >= 2))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::BadDims(s.to_owned(), "expected factors >= 2 separated by 'x'".into()))?;
    if !(2..=3).contains(&dims.len()) {
        return Err(CliError::BadDims(s.to_owned(), "expected two or three factors".into()));
    }
    Ok(dims)
}

pub fn random_state(
    kind: RandomKind,
    dims: &[usize],
    seed: u64,
    rank: Option<usize>,
    terms: Option<usize>,
) -> Result<StateFile, CliError> {
    let dim: usize = dims.iter().product();
    let mut sampler = StateSampler::new(seed);
    let rho = match kind {
        RandomKind::Generic => sampler.density(dim, rank.unwrap_or(dim))?,
        RandomKind::Pure => sampler.density(dim, 1)?,
        RandomKind::Separable => sampler.product_mixture(dims, terms.unwrap_or(DEFAULT_SEPARABLE_TERMS), None)?,
    };
    let rho = DensityMatrix::validate(rho.into_matrix(), dims)?;
    let dims_label = dims.iter().map(ToString::to_string).collect::<Vec<_>>().join("x");
    let mut source = format!("random --kind {} --dims {dims_label} --seed {seed}", kind.name());
    if let (RandomKind::Generic, Some(r)) = (kind, rank) {
        source += &format!(" --rank {r}");
    }
    if let (RandomKind::Separable, Some(t)) = (kind, terms) {
        source += &format!(" --terms {t}");
    }
    Ok(StateFile::from_density(
        &rho,
        Some(Metadata {
            name: Some(format!("random-{}-{dims_label}-seed{seed}", kind.name())),
            source: Some(source),
        }),
    ))
}

fn meta(name: &str, source: &str) -> Option<Metadata> {
    Some(Metadata {
        name: Some(name.to_owned()),
        source: Some(source.to_owned()),
    })
}

fn werner(p: f64) -> Result<DensityMatrix, CliError> {
    let m = &bell(1.0).matrix().scale(p) + &ComplexMatrix::identity(4).scale((1.0 - p) / 4.0);
    Ok(DensityMatrix::validate(m, &[2, 2])?)
}

/// Named reference states and ensembles as `(file name, contents)`.
pub fn fixtures() -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    let mut state = |file: &str, rho: &DensityMatrix, name: &str, source: &str| {
        out.push((
            file.to_owned(),
            StateFile::from_density(rho, meta(name, source)).to_json(),
        ));
    };
    state("phi_plus.json", &bell(1.0), "phi+", "(|00> + |11>)/sqrt2");
    state("phi_minus.json", &bell(-1.0), "phi-", "(|00> - |11>)/sqrt2");
    let mixed = DensityMatrix::validate(ComplexMatrix::identity(4).scale(0.25), &[2, 2])?;
    state("max_mixed_2x2.json", &mixed, "I4/4", "maximally mixed two-qubit state");
    let plus_zero = DensityMatrix::validate(
        ComplexMatrix::from_fn(4, 4, |r, c| c64(if r % 2 == 0 && c % 2 == 0 { 0.5 } else { 0.0 }, 0.0)),
        &[2, 2],
    )?;
    state("plus_zero.json", &plus_zero, "|+>|0>", "product state");
    state("chi2_a1.json", &chi2(1.0)?, "chi2(a=1)", "family example2, a = 1");
    state(
        "werner_0.5.json",
        &werner(0.5)?,
        "werner(0.5)",
        "p phi+ + (1-p) I/4, p = 0.5",
    );
    state(
        "werner_0.2.json",
        &werner(0.2)?,
        "werner(0.2)",
        "p phi+ + (1-p) I/4, p = 0.2",
    );
    let chi1 = Family::Example1.build(&BTreeMap::from([("c".to_owned(), 0.1), ("f".to_owned(), 0.1)]))?;
    state(
        "chi1_c0.1.json",
        &chi1,
        "chi1(c=f=0.1)",
        "family example1, a=b=d=e=1/4, c=f=0.1",
    );

    for (family, p) in [
        (Family::Illustration1, 0.5),
        (Family::Illustration2, 0.5),
        (Family::Illustration3, 0.7),
    ] {
        let ens = TripartiteEnsemble::from_family(family, &BTreeMap::from([("p".to_owned(), p)]), Party::A)?;
        let file = EnsembleFile::from_ensemble(
            &ens,
            meta(
                &format!("{}(p={p})", family.name()),
                &format!("family {}, p = {p}", family.name()),
            ),
        );
        out.push((format!("{}_p{p}.json", family.name()), file.to_json()));
    }
    Ok(out)
}

pub fn write_fixtures(dir: &Path) -> Result<Vec<String>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_owned(),
        source,
    })?;
    let files = fixtures()?;
    for (name, text) in &files {
        write_text(&dir.join(name), text)?;
    }
    Ok(files.into_iter().map(|(n, _)| n).collect())
}

pub fn survey_json(dims: [usize; 2], samples: usize, seed: u64) -> Result<String, CliError> {
    let report = cohdetect::survey::survey(dims, samples, seed, &cohdetect::Criterion::ALL)?;
    Ok(to_json(&report))
}
