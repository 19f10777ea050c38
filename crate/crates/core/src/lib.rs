//! l1-norm of coherence and coherence-based entanglement criteria.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, partial traces
//!   and transposes, and a Jacobi eigensolver for Hermitian matrices.
//! * [`states`]: validated density matrices, qubit-qudit block structure,
//!   the named example families and seeded random states.
//! * [`ggm`]: generalized Gell-Mann matrices.
//! * [`coherence`]: the l1-norm of coherence.
//! * [`criteria`]: bipartite qubit-qudit criteria and the PPT oracle.
//! * [`tripartite`]: the ensemble bound for tripartite states.
//! * [`survey`]: population statistics of the criteria against the oracle.

pub mod coherence;
pub mod criteria;
pub mod ggm;
pub mod linalg;
pub mod states;
pub mod survey;
pub mod tripartite;

pub use coherence::{l1_coherence, product_coherence, CoherenceValue};
pub use criteria::{Criterion, CriterionReport, PptVerdict, Verdict};
pub use linalg::{ComplexMatrix, EigenResult};
pub use num_complex::Complex64;
pub use states::{BlockDecomposition, DensityMatrix, Family};
pub use tripartite::{Party, TripartiteEnsemble, TripartiteReport};
