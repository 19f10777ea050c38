//! Density matrices, qubit-qudit block structure, named state families and
//! seeded random states.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, c64, hermitian_eigenvalues, tensor_product, ComplexMatrix, LinalgError, HERMITIAN_TOL};

pub const TRACE_TOL: f64 = 1e-9;

/// Smallest eigenvalue accepted as "positive semidefinite". No clamping is
/// applied to states that fall below it.
pub const PSD_TOL: f64 = -1e-10;

/// Identifies the sampling scheme behind [`StateSampler`]. Bump whenever the
/// sequence of states produced for a given seed changes.
pub const RNG_VERSION: &str = "chacha8-boxmuller-v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    NotHermitian { max_deviation: f64 },
    NotUnitTrace { trace_re: f64, trace_im: f64 },
    NotPsd { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { max_deviation } => {
                write!(
                    f,
                    "not Hermitian: max |rho - rho^dagger| = {max_deviation:e} (tolerance {HERMITIAN_TOL:e})"
                )
            }
            Violation::NotUnitTrace { trace_re, trace_im } => {
                write!(
                    f,
                    "trace is {trace_re}{trace_im:+}i, expected 1 (tolerance {TRACE_TOL:e})"
                )
            }
            Violation::NotPsd { min_eigenvalue } => {
                write!(
                    f,
                    "not positive semidefinite: min eigenvalue {min_eigenvalue:e} < {PSD_TOL:e}"
                )
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("invalid density matrix: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("block decomposition needs dims [2, d] with the qubit first, got {0:?}")]
    QubitNotFirst(Vec<usize>),
    #[error("{perm:?} is not a permutation of {n} subsystems")]
    BadPermutation { perm: Vec<usize>, n: usize },
    #[error("unknown state family '{0}'")]
    UnknownFamily(String),
    #[error("parameter {name} = {value} out of range: {reason}")]
    ParamOutOfRange { name: String, value: f64, reason: String },
    #[error("rank {rank} must lie in 1..={dim}")]
    BadRank { rank: usize, dim: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, StateError>;

/// How strictly [`DensityMatrix::validate_with`] checks its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Validation {
    #[default]
    Strict,
    /// Hermiticity and unit trace only. Needed for operators such as the
    /// third tripartite illustration whose "state" is not positive.
    SkipPsd,
}

/// A validated density operator together with its subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    psd_checked: bool,
}

impl DensityMatrix {
    pub fn validate(candidate: ComplexMatrix, dims: &[usize]) -> Result<Self> {
        Self::validate_with(candidate, dims, Validation::Strict)
    }

    pub fn validate_with(candidate: ComplexMatrix, dims: &[usize], mode: Validation) -> Result<Self> {
        if !candidate.is_square() {
            return Err(StateError::Shape(format!(
                "density matrix must be square, got {}x{}",
                candidate.rows(),
                candidate.cols()
            )));
        }
        let product = dims
            .iter()
            .try_fold(1usize, |acc, &d| if d == 0 { None } else { acc.checked_mul(d) });
        if dims.is_empty() || product != Some(candidate.rows()) {
            return Err(StateError::Shape(format!(
                "dims {dims:?} do not multiply to {}",
                candidate.rows()
            )));
        }

        let mut violations = Vec::new();
        let deviation = candidate.hermitian_deviation();
        let hermitian = deviation <= HERMITIAN_TOL;
        if !hermitian {
            violations.push(Violation::NotHermitian {
                max_deviation: deviation,
            });
        }
        let tr = candidate.trace();
        if (tr - c64(1.0, 0.0)).norm() > TRACE_TOL {
            violations.push(Violation::NotUnitTrace {
                trace_re: tr.re,
                trace_im: tr.im,
            });
        }
        if hermitian && mode == Validation::Strict {
            let lmin = hermitian_eigenvalues(&candidate)?.min();
            if lmin < PSD_TOL {
                violations.push(Violation::NotPsd { min_eigenvalue: lmin });
            }
        }
        if !violations.is_empty() {
            return Err(StateError::Invalid(violations));
        }
        Ok(Self {
            matrix: candidate,
            dims: dims.to_vec(),
            psd_checked: mode == Validation::Strict,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// False when the state was admitted with [`Validation::SkipPsd`].
    pub fn psd_checked(&self) -> bool {
        self.psd_checked
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Convex combination `sum_i w_i rho_i`. All states must share dims.
    pub fn mixture(terms: &[(f64, &DensityMatrix)], mode: Validation) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| StateError::Shape("mixture needs at least one term".into()))?
            .1;
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in terms {
            if rho.dims != first.dims {
                return Err(StateError::Shape(format!(
                    "mixture terms disagree on dims: {:?} vs {:?}",
                    rho.dims, first.dims
                )));
            }
            acc = &acc + &rho.matrix.scale(*w);
        }
        Self::validate_with(acc, &first.dims, mode)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let m = tensor_product(&self.matrix, &other.matrix)?;
        let dims: Vec<usize> = self.dims.iter().chain(&other.dims).copied().collect();
        let mode = if self.psd_checked && other.psd_checked {
            Validation::Strict
        } else {
            Validation::SkipPsd
        };
        Self::validate_with(m, &dims, mode)
    }

    /// Reduced state on the listed subsystems (kept in original order).
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        let m = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        let dims: Vec<usize> = sorted.iter().map(|&k| self.dims[k]).collect();
        let mode = if self.psd_checked {
            Validation::Strict
        } else {
            Validation::SkipPsd
        };
        Self::validate_with(m, &dims, mode)
    }
}

/// The `d x d` blocks of a `2 (x) d` operator `[[P, Q], [Q^dagger, R]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
    pub r: ComplexMatrix,
}

impl BlockDecomposition {
    /// Splits a `2d x 2d` matrix whose outer tensor factor is the qubit.
    pub fn from_qubit_first(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return Err(StateError::Shape(format!(
                "expected a 2d x 2d matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let d = m.rows() / 2;
        Ok(Self {
            p: m.submatrix(0, 0, d, d)?,
            q: m.submatrix(0, d, d, d)?,
            r: m.submatrix(d, d, d, d)?,
        })
    }

    pub fn qudit_dim(&self) -> usize {
        self.p.rows()
    }

    pub fn reassemble(&self) -> ComplexMatrix {
        let d = self.qudit_dim();
        let qd = self.q.adjoint();
        ComplexMatrix::from_fn(2 * d, 2 * d, |r, c| match (r < d, c < d) {
            (true, true) => self.p[(r, c)],
            (true, false) => self.q[(r, c - d)],
            (false, true) => qd[(r - d, c)],
            (false, false) => self.r[(r - d, c - d)],
        })
    }
}

/// Block decomposition of a `2 (x) d` state. Callers holding a `d (x) 2`
/// state must permute it first.
pub fn block_decompose(rho: &DensityMatrix) -> Result<BlockDecomposition> {
    match rho.dims() {
        [2, _] => BlockDecomposition::from_qubit_first(rho.matrix()),
        other => Err(StateError::QubitNotFirst(other.to_vec())),
    }
}

/// Relabels subsystems so that factor `i` of the result is factor `perm[i]`
/// of `rho`.
pub fn permute_subsystems(rho: &DensityMatrix, perm: &[usize]) -> Result<DensityMatrix> {
    let n = rho.dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(StateError::BadPermutation { perm: perm.to_vec(), n });
    }
    Ok(DensityMatrix {
        matrix: linalg::permute_factors(&rho.matrix, &rho.dims, perm)?,
        dims: perm.iter().map(|&p| rho.dims[p]).collect(),
        psd_checked: rho.psd_checked,
    })
}

// ---------------------------------------------------------------------------
// Named families
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
    pub default: f64,
}

const EXAMPLE1_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "a",
        min: 0.0,
        max: 1.0,
        default: 0.25,
    },
    ParamSpec {
        name: "b",
        min: 0.0,
        max: 1.0,
        default: 0.25,
    },
    ParamSpec {
        name: "c",
        min: -1.0,
        max: 1.0,
        default: 0.0,
    },
    ParamSpec {
        name: "d",
        min: 0.0,
        max: 1.0,
        default: 0.25,
    },
    ParamSpec {
        name: "e",
        min: 0.0,
        max: 1.0,
        default: 0.25,
    },
    ParamSpec {
        name: "f",
        min: -1.0,
        max: 1.0,
        default: 0.0,
    },
];
const EXAMPLE2_PARAMS: &[ParamSpec] = &[ParamSpec {
    name: "a",
    min: 0.0,
    max: 1.0,
    default: 1.0,
}];
const MIXING_PARAMS: &[ParamSpec] = &[ParamSpec {
    name: "p",
    min: 0.0,
    max: 1.0,
    default: 0.5,
}];

/// Slack on range checks so that grid points like `0.1 * 10` are accepted.
const PARAM_SLACK: f64 = 1e-12;

/// The worked examples: two bipartite families and three tripartite
/// two-term mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// 2x2 X-state with entries a, b, d, e on the diagonal, c and f coherences.
    Example1,
    /// 2x4 state parameterised by `a in [0, 1]`.
    Example2,
    /// `p |0><0| (x) phi+ + (1-p) |1><1| (x) phi-`.
    Illustration1,
    /// `p |psi1><psi1| + (1-p) |psi2><psi2|` on three qubits.
    Illustration2,
    /// Non-positive "separable" mixture with `C_l1 = 2p`.
    Illustration3,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Example1,
        Family::Example2,
        Family::Illustration1,
        Family::Illustration2,
        Family::Illustration3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Example1 => "example1",
            Family::Example2 => "example2",
            Family::Illustration1 => "illustration1",
            Family::Illustration2 => "illustration2",
            Family::Illustration3 => "illustration3",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| StateError::UnknownFamily(name.to_owned()))
    }

    pub fn params(self) -> &'static [ParamSpec] {
        match self {
            Family::Example1 => EXAMPLE1_PARAMS,
            Family::Example2 => EXAMPLE2_PARAMS,
            _ => MIXING_PARAMS,
        }
    }

    pub fn dims(self) -> Vec<usize> {
        match self {
            Family::Example1 => vec![2, 2],
            Family::Example2 => vec![2, 4],
            _ => vec![2, 2, 2],
        }
    }

    pub fn is_tripartite(self) -> bool {
        self.dims().len() == 3
    }

    /// Fills in defaults and checks declared ranges.
    pub fn resolve(self, overrides: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
        let specs = self.params();
        for name in overrides.keys() {
            if !specs.iter().any(|s| s.name == name) {
                return Err(StateError::ParamOutOfRange {
                    name: name.clone(),
                    value: overrides[name],
                    reason: format!("family {} has no such parameter", self.name()),
                });
            }
        }
        specs
            .iter()
            .map(|s| {
                let v = overrides.get(s.name).copied().unwrap_or(s.default);
                if !(v >= s.min - PARAM_SLACK && v <= s.max + PARAM_SLACK) {
                    return Err(StateError::ParamOutOfRange {
                        name: s.name.to_owned(),
                        value: v,
                        reason: format!("expected [{}, {}]", s.min, s.max),
                    });
                }
                Ok((s.name.to_owned(), v))
            })
            .collect()
    }

    pub fn build(self, overrides: &BTreeMap<String, f64>) -> Result<DensityMatrix> {
        let p = self.resolve(overrides)?;
        match self {
            Family::Example1 => chi1(p["a"], p["b"], c64(p["c"], 0.0), p["d"], p["e"], c64(p["f"], 0.0)),
            Family::Example2 => chi2(p["a"]),
            _ => {
                let terms = self
                    .ensemble_terms(overrides)?
                    .expect("tripartite family has a decomposition");
                let refs: Vec<(f64, &DensityMatrix)> = terms.iter().map(|(w, s)| (*w, s)).collect();
                let mode = if terms.iter().all(|(_, s)| s.psd_checked()) {
                    Validation::Strict
                } else {
                    Validation::SkipPsd
                };
                DensityMatrix::mixture(&refs, mode)
            }
        }
    }

    /// The explicit two-term decomposition of a tripartite family, with
    /// zero-weight terms dropped. `None` for the bipartite families.
    pub fn ensemble_terms(self, overrides: &BTreeMap<String, f64>) -> Result<Option<Vec<(f64, DensityMatrix)>>> {
        if !self.is_tripartite() {
            return Ok(None);
        }
        let p = self.resolve(overrides)?["p"];
        let (first, second) = match self {
            Family::Illustration1 => (ket0().tensor(&bell(1.0))?, ket1().tensor(&bell(-1.0))?),
            Family::Illustration2 => (psi_state(&ILLUSTRATION2_PSI1)?, psi_state(&ILLUSTRATION2_PSI2)?),
            Family::Illustration3 => {
                let a = DensityMatrix::validate_with(
                    ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 0.0]])?,
                    &[2],
                    Validation::SkipPsd,
                )?;
                let even = DensityMatrix::validate(ComplexMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]), &[2, 2])?;
                let odd = DensityMatrix::validate(ComplexMatrix::diagonal(&[0.0, 0.5, 0.5, 0.0]), &[2, 2])?;
                (a.tensor(&even)?, ket1().tensor(&odd)?)
            }
            _ => unreachable!(),
        };
        Ok(Some(
            [(p, first), (1.0 - p, second)]
                .into_iter()
                .filter(|(w, _)| *w > 0.0)
                .collect(),
        ))
    }
}

fn ket0() -> DensityMatrix {
    DensityMatrix::validate(ComplexMatrix::diagonal(&[1.0, 0.0]), &[2]).expect("valid")
}

fn ket1() -> DensityMatrix {
    DensityMatrix::validate(ComplexMatrix::diagonal(&[0.0, 1.0]), &[2]).expect("valid")
}

/// `|phi+-><phi+-|` with `(|00> + sign |11>)/sqrt2`.
pub fn bell(sign: f64) -> DensityMatrix {
    // entries written out so they are exactly +-1/2
    let mut m = ComplexMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]);
    m[(0, 3)] = c64(0.5 * sign, 0.0);
    m[(3, 0)] = c64(0.5 * sign, 0.0);
    DensityMatrix::validate(m, &[2, 2]).expect("Bell state is valid")
}

/// Unnormalised amplitudes over `|000>..|111>`; both kets have norm^2 = 5.
const ILLUSTRATION2_PSI1: [f64; 8] = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, SQRT_2];
const ILLUSTRATION2_PSI2: [f64; 8] = [1.0, 0.0, 0.0, 0.0, 1.0, -1.0, SQRT_2, 0.0];

fn psi_state(amps: &[f64; 8]) -> Result<DensityMatrix> {
    let m = ComplexMatrix::from_fn(8, 8, |r, c| c64(amps[r] * amps[c] / 5.0, 0.0));
    DensityMatrix::validate(m, &[2, 2, 2])
}

/// Unvalidated Example-1 matrix (useful for probing invalid parameters).
pub fn chi1_matrix(a: f64, b: f64, c: Complex64, d: f64, e: f64, f: Complex64) -> ComplexMatrix {
    let z = c64(0.0, 0.0);
    let r = |x: f64| c64(x, 0.0);
    ComplexMatrix::from_rows(vec![
        vec![r(a), z, z, f],
        vec![z, r(b), c, z],
        vec![z, c.conj(), r(d), z],
        vec![f.conj(), z, z, r(e)],
    ])
    .expect("4x4 literal")
}

/// Example-1 state; requires `a+b+d+e = 1`, `bd >= |c|^2`, `ae >= |f|^2`.
pub fn chi1(a: f64, b: f64, c: Complex64, d: f64, e: f64, f: Complex64) -> Result<DensityMatrix> {
    for (name, v) in [("a", a), ("b", b), ("d", d), ("e", e)] {
        if v < 0.0 {
            return Err(StateError::ParamOutOfRange {
                name: name.into(),
                value: v,
                reason: "diagonal entries must be nonnegative".into(),
            });
        }
    }
    if (a + b + d + e - 1.0).abs() > TRACE_TOL {
        return Err(StateError::ParamOutOfRange {
            name: "a+b+d+e".into(),
            value: a + b + d + e,
            reason: "must equal 1".into(),
        });
    }
    if b * d < c.norm_sqr() - PARAM_SLACK {
        return Err(StateError::ParamOutOfRange {
            name: "c".into(),
            value: c.norm(),
            reason: format!("needs bd >= |c|^2, bd = {}", b * d),
        });
    }
    if a * e < f.norm_sqr() - PARAM_SLACK {
        return Err(StateError::ParamOutOfRange {
            name: "f".into(),
            value: f.norm(),
            reason: format!("needs ae >= |f|^2, ae = {}", a * e),
        });
    }
    DensityMatrix::validate(chi1_matrix(a, b, c, d, e, f), &[2, 2])
}

/// Example-2 state on `2 (x) 4`.
pub fn chi2(a: f64) -> Result<DensityMatrix> {
    if !(-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&a) {
        return Err(StateError::ParamOutOfRange {
            name: "a".into(),
            value: a,
            reason: "expected [0, 1]".into(),
        });
    }
    let x = a / (6.0 * a + 1.0);
    let y = (a + 1.0) / (6.0 * a + 1.0);
    let mut m = ComplexMatrix::diagonal(&[x, x, x, 0.0, 0.0, x, x, y]);
    // off-diagonal block O: anti-diagonal entries (1,4), (2,3), (3,2) of the 4x4 block
    for (r, c) in [(0, 3), (1, 2), (2, 1)] {
        m[(r, 4 + c)] = c64(x, 0.0);
        m[(4 + c, r)] = c64(x, 0.0);
    }
    DensityMatrix::validate(m, &[2, 4])
}

// ---------------------------------------------------------------------------
// Random states
// ---------------------------------------------------------------------------

/// Deterministic source of random states. One sampler per seed; nothing is
/// shared between samplers.
pub struct StateSampler {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `(0, 1]`.
    fn uniform_open(&mut self) -> f64 {
        1.0 - self.rng.gen::<f64>()
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open();
        let u2 = self.rng.gen::<f64>();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        c64(re, im)
    }

    /// Uniform weights on the probability simplex.
    pub fn dirichlet(&mut self, k: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..k).map(|_| -self.uniform_open().ln()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    }

    /// `G G^dagger / Tr(G G^dagger)` with `G` a `dim x rank` Ginibre matrix.
    pub fn density(&mut self, dim: usize, rank: usize) -> Result<DensityMatrix> {
        if rank == 0 || rank > dim {
            return Err(StateError::BadRank { rank, dim });
        }
        let g = ComplexMatrix::from_fn(dim, rank, |_, _| self.complex_normal());
        let mut w = g.matmul(&g.adjoint())?;
        // exact Hermitian symmetry before normalising
        for r in 0..dim {
            w[(r, r)] = c64(w[(r, r)].re, 0.0);
            for c in r + 1..dim {
                w[(c, r)] = w[(r, c)].conj();
            }
        }
        let tr = w.trace().re;
        DensityMatrix::validate(w.scale(1.0 / tr), &[dim])
    }

    /// `sum_i p_i rho_A^i (x) rho_B^i` with Dirichlet weights. `factor_rank`
    /// of `None` draws full-rank factors.
    pub fn separable(&mut self, dims: [usize; 2], terms: usize, factor_rank: Option<usize>) -> Result<DensityMatrix> {
        self.product_mixture(&dims, terms, factor_rank)
    }

    /// Mixture of product states over any number of factors.
    pub fn product_mixture(
        &mut self,
        dims: &[usize],
        terms: usize,
        factor_rank: Option<usize>,
    ) -> Result<DensityMatrix> {
        if terms == 0 {
            return Err(StateError::Shape("need at least one term".into()));
        }
        let weights = self.dirichlet(terms);
        let products = weights
            .iter()
            .map(|_| self.product_state(dims, factor_rank))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<(f64, &DensityMatrix)> = weights.iter().copied().zip(&products).collect();
        DensityMatrix::mixture(&refs, Validation::Strict)
    }

    pub fn product_state(&mut self, dims: &[usize], factor_rank: Option<usize>) -> Result<DensityMatrix> {
        let mut factors = dims.iter().map(|&d| self.density(d, factor_rank.unwrap_or(d).min(d)));
        let mut acc = factors.next().ok_or_else(|| StateError::Shape("no factors".into()))??;
        for f in factors {
            acc = acc.tensor(&f?)?;
        }
        Ok(acc)
    }
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    StateSampler::new(seed).density(dim, rank)
}

/// Separable `dA (x) dB` state from `terms` full-rank product terms.
pub fn random_separable(dims: [usize; 2], terms: usize, seed: u64) -> Result<DensityMatrix> {
    StateSampler::new(seed).separable(dims, terms, None)
}

/// As [`random_separable`] with pure product terms.
pub fn random_separable_pure(dims: [usize; 2], terms: usize, seed: u64) -> Result<DensityMatrix> {
    StateSampler::new(seed).separable(dims, terms, Some(1))
}
