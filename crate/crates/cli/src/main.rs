use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use cohdetect::Family;
use cohdetect_cli::analyze::{analyze, analyze_ensemble, parse_criteria, OutputFormat};
use cohdetect_cli::files::{to_json, write_text, EnsembleFile, StateFile};
use cohdetect_cli::generate::{
    ggm_document, parse_dims, random_state, survey_json, write_fixtures, Normalization, RandomKind,
};
use cohdetect_cli::scan::{parse_range, to_csv, ScanCriterion, SweepSpec};

/// Coherence-based entanglement criteria for qubit-qudit and three-party states.
#[derive(Parser)]
#[command(name = "cohdetect", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run bipartite criteria on a state file.
    Analyze {
        #[arg(long)]
        state: PathBuf,
        /// Comma-separated criterion names, or `all`.
        #[arg(long, default_value = "all")]
        criteria: String,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Evaluate the ensemble bound on a three-party ensemble file.
    Ensemble {
        #[arg(long)]
        file: PathBuf,
        /// Report every choice of singled-out party instead of the file's.
        #[arg(long)]
        all_bipartitions: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Sweep a family parameter and write a CSV of criterion outcomes.
    Scan {
        #[arg(long)]
        family: String,
        /// Parameter to sweep; `c,f` ties several parameters to one value.
        #[arg(long)]
        param: String,
        /// `start:stop:step`.
        #[arg(long)]
        range: String,
        /// Comma-separated criteria; tripartite families take `corollary2[:X]`.
        #[arg(long)]
        criteria: String,
        /// Fix another parameter, e.g. `--set a=0.3`.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        fixed: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the generalized Gell-Mann basis for dimension d.
    Ggm {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        normalization: Normalization,
    },
    /// Write a seeded random state file.
    Random {
        #[arg(long, value_enum)]
        kind: RandomKind,
        /// `AxB` or `AxBxC`.
        #[arg(long)]
        dims: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Rank for `--kind generic` (defaults to full rank).
        #[arg(long)]
        rank: Option<usize>,
        /// Number of product terms for `--kind separable`.
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Write the reference state and ensemble files into a directory.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
    /// Detection and PPT-flagged rates of every criterion on a random corpus.
    Survey {
        #[arg(long, default_value = "2x2")]
        dims: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn emit(text: &str) -> Result<()> {
    std::io::stdout().lock().write_all(text.as_bytes())?;
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<()> {
    write_text(path, text)?;
    Ok(())
}

fn parse_fixed(items: &[String]) -> Result<BTreeMap<String, f64>> {
    items
        .iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .with_context(|| format!("--set expects NAME=VALUE, got '{kv}'"))?;
            let v: f64 = v.trim().parse().with_context(|| format!("--set {kv}: not a number"))?;
            Ok((k.trim().to_owned(), v))
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze {
            state,
            criteria,
            format,
        } => {
            let criteria = parse_criteria(&criteria)?;
            let file = StateFile::load(&state)?;
            let rho = file.density().with_context(|| state.display().to_string())?;
            let report = analyze(&rho, &criteria, file.name())?;
            match format {
                OutputFormat::Text => emit(&report.to_text()),
                OutputFormat::Json => emit(&to_json(&report)),
            }
        }
        Command::Ensemble {
            file,
            all_bipartitions,
            format,
        } => {
            let doc = EnsembleFile::load(&file)?;
            let ens = doc.ensemble().with_context(|| file.display().to_string())?;
            let name = doc.metadata.as_ref().and_then(|m| m.name.as_deref());
            let report = analyze_ensemble(&ens, all_bipartitions, name)?;
            match format {
                OutputFormat::Text => emit(&report.to_text()),
                OutputFormat::Json => emit(&to_json(&report)),
            }
        }
        Command::Scan {
            family,
            param,
            range,
            criteria,
            fixed,
            out,
        } => {
            let (start, stop, step) = parse_range(&range)?;
            let spec = SweepSpec {
                family: Family::from_name(&family)?,
                params: param
                    .split(',')
                    .map(|s| s.trim().to_owned())
                    .filter(|s| !s.is_empty())
                    .collect(),
                start,
                stop,
                step,
                criteria: criteria
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(ScanCriterion::parse)
                    .collect::<Result<_, _>>()?,
                fixed: parse_fixed(&fixed)?,
            };
            if let Some(p) = spec.params.iter().find(|p| spec.fixed.contains_key(*p)) {
                bail!("parameter '{p}' is both swept and fixed");
            }
            write(&out, &to_csv(&spec.run()?))
        }
        Command::Ggm {
            dim,
            out,
            normalization,
        } => write(&out, &to_json(&ggm_document(dim, normalization)?)),
        Command::Random {
            kind,
            dims,
            seed,
            out,
            rank,
            terms,
        } => {
            let dims = parse_dims(&dims)?;
            write(&out, &random_state(kind, &dims, seed, rank, terms)?.to_json())
        }
        Command::Fixtures { out } => {
            for name in write_fixtures(&out)? {
                println!("{}", out.join(name).display());
            }
            Ok(())
        }
        Command::Survey {
            dims,
            samples,
            seed,
            out,
        } => {
            let dims = match parse_dims(&dims)?.as_slice() {
                &[a, b] => [a, b],
                _ => bail!("survey needs a bipartite AxB"),
            };
            write(&out, &survey_json(dims, samples, seed)?)
        }
    }
}

fn main() -> std::process::ExitCode {
    match run(Cli::parse()) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}
