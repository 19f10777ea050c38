//! Parameter sweeps over the built-in families.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use cohdetect::criteria::Criterion;
use cohdetect::tripartite::corollary2_check;
use cohdetect::{Family, Party, TripartiteEnsemble, Verdict};
use rayon::prelude::*;

use crate::CliError;

/// Grid points closer than this fraction of a step to `stop` still count.
const GRID_SLACK: f64 = 1e-9;

pub const CSV_HEADER: &str = "param,criterion,lhs,rhs,margin,verdict";

/// Criterion selectable in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanCriterion {
    Bipartite(Criterion),
    /// Ensemble bound with the given party singled out.
    Corollary2(Party),
}

impl ScanCriterion {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        if let Some(c) = Criterion::from_name(name) {
            return Ok(Self::Bipartite(c));
        }
        match name.split_once(':') {
            None if name == "corollary2" => Ok(Self::Corollary2(Party::A)),
            Some(("corollary2", x)) => Party::from_label(x)
                .map(Self::Corollary2)
                .ok_or_else(|| CliError::UnknownCriterion(name.to_owned())),
            _ => Err(CliError::UnknownCriterion(name.to_owned())),
        }
    }

    pub fn label(self) -> String {
        match self {
            Self::Bipartite(c) => c.name().to_owned(),
            Self::Corollary2(Party::A) => "corollary2".to_owned(),
            Self::Corollary2(x) => format!("corollary2:{x}"),
        }
    }

    fn applies_to(self, family: Family) -> bool {
        match self {
            Self::Bipartite(Criterion::Theorem1) => family.dims() == [2, 2],
            Self::Bipartite(_) => !family.is_tripartite(),
            Self::Corollary2(_) => family.is_tripartite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    /// One or more parameters set to the same grid value.
    pub params: Vec<String>,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub criteria: Vec<ScanCriterion>,
    /// Values for the remaining parameters (defaults otherwise).
    pub fixed: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub param: f64,
    pub criterion: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

/// Parses `start:stop:step`.
pub fn parse_range(s: &str) -> Result<(f64, f64, f64), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(CliError::Sweep(format!("range '{s}' must look like start:stop:step")));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Sweep(format!("'{t}' in range '{s}' is not a number")))
    };
    Ok((num(a)?, num(b)?, num(c)?))
}

impl SweepSpec {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let (start, stop, step) = (self.start, self.stop, self.step);
        if !(step > 0.0 && step.is_finite()) {
            return Err(CliError::Sweep(format!("step must be positive, got {step}")));
        }
        if start.is_nan() || stop.is_nan() || start > stop {
            return Err(CliError::Sweep(format!("start {start} exceeds stop {stop}")));
        }
        let n = ((stop - start) / step + GRID_SLACK).floor() as usize;
        Ok((0..=n).map(|i| start + i as f64 * step).collect())
    }

    fn overrides(&self, value: f64) -> BTreeMap<String, f64> {
        let mut m = self.fixed.clone();
        for p in &self.params {
            m.insert(p.clone(), value);
        }
        m
    }

    fn validate(&self, grid: &[f64]) -> Result<(), CliError> {
        if self.params.is_empty() {
            return Err(CliError::Sweep("no parameter to sweep".into()));
        }
        if self.criteria.is_empty() {
            return Err(CliError::Sweep("no criteria selected".into()));
        }
        if let Some(c) = self.criteria.iter().find(|c| !c.applies_to(self.family)) {
            return Err(CliError::Sweep(format!(
                "criterion {} does not apply to family {} (dims {:?})",
                c.label(),
                self.family.name(),
                self.family.dims()
            )));
        }
        for &v in grid {
            self.family.resolve(&self.overrides(v))?;
        }
        Ok(())
    }

    fn rows_at(&self, value: f64) -> Result<Vec<ScanRow>, CliError> {
        let overrides = self.overrides(value);
        let state = if self.family.is_tripartite() {
            None
        } else {
            Some(self.family.build(&overrides)?)
        };
        self.criteria
            .iter()
            .map(|&c| {
                let (lhs, rhs, margin, verdict) = match c {
                    ScanCriterion::Bipartite(criterion) => {
                        let r = criterion.evaluate(state.as_ref().expect("bipartite family"))?;
                        (r.lhs, r.rhs, r.margin, r.verdict)
                    }
                    ScanCriterion::Corollary2(x) => {
                        let ens = TripartiteEnsemble::from_family(self.family, &overrides, x)?;
                        let r = corollary2_check(&ens)?;
                        (r.lhs, r.rhs, r.margin, r.verdict)
                    }
                };
                Ok(ScanRow {
                    param: value,
                    criterion: c.label(),
                    lhs,
                    rhs,
                    margin,
                    verdict,
                })
            })
            .collect()
    }

    /// Rows ordered by grid point, then by criterion as listed.
    pub fn run(&self) -> Result<Vec<ScanRow>, CliError> {
        let grid = self.grid()?;
        self.validate(&grid)?;
        let per_point = grid
            .par_iter()
            .map(|&v| self.rows_at(v))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(per_point.into_iter().flatten().collect())
    }
}

/// C `printf("%.{sig}g")`.
pub fn format_g(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_g(r.param, 12),
            r.criterion,
            format_g(r.lhs, 12),
            format_g(r.rhs, 12),
            format_g(r.margin, 12),
            r.verdict
        );
    }
    out
}
