//! Inputs shared by the benchmarks in `benches/`.

use cohdetect::states::{StateSampler, Validation};
use cohdetect::{ComplexMatrix, DensityMatrix};

/// Full-rank random state on `dims`.
pub fn state(dims: &[usize], seed: u64) -> DensityMatrix {
    let dim = dims.iter().product();
    let rho = StateSampler::new(seed).density(dim, dim).expect("valid dims");
    DensityMatrix::validate_with(rho.into_matrix(), dims, Validation::Strict).expect("valid state")
}

/// Random Hermitian `n x n` matrix with entries of order one.
pub fn hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let mut s = StateSampler::new(seed);
    let raw = ComplexMatrix::from_fn(n, n, |_, _| s.complex_normal());
    (&raw + &raw.adjoint()).scale(0.5)
}
