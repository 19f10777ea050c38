//! Dense complex matrix kernel.
//!
//! Everything here works on small row-major matrices (at most a few dozen
//! rows in practice). The only decomposition offered is a cyclic Jacobi
//! eigenvalue solver for complex Hermitian input.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest row or column count any constructed matrix may have.
pub const MAX_DIM: usize = 4096;

/// Maximum entrywise deviation `|m - m^dagger|` tolerated for Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Off-diagonal Frobenius mass at which Jacobi iteration stops.
pub const JACOBI_TOL: f64 = 1e-12;

/// Sweep cap for the Jacobi solver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix dimension {rows}x{cols} exceeds the maximum of {max}")]
    Size { rows: usize, cols: usize, max: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian (max |m - m^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_size(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(LinalgError::Shape(format!(
            "matrix dimensions must be positive, got {rows}x{cols}"
        )));
    }
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(LinalgError::Size {
            rows,
            cols,
            max: MAX_DIM,
        });
    }
    Ok(())
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting bad lengths and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_size(rows, cols)?;
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Self::from_vec(n, m, rows.into_iter().flatten().collect())
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Outer product `|v><v|` of a column vector with itself.
    pub fn projector(ket: &[Complex64]) -> Self {
        let n = ket.len();
        Self::from_fn(n, n, |r, c| ket[r] * ket[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Copies the `nrows x ncols` block whose top-left corner is `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Result<Self> {
        if r0 + nrows > self.rows || c0 + ncols > self.cols {
            return Err(LinalgError::Shape(format!(
                "block ({r0},{c0}) of size {nrows}x{ncols} exceeds {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(nrows, ncols, |r, c| self[(r0 + r, c0 + c)]))
    }

    /// Largest entrywise deviation from Hermiticity, `max |m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "elementwise operation on mismatched shapes"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Panics on shape mismatch; use [`ComplexMatrix::matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

/// Kronecker product `a (x) b`; block `(i, j)` of the result is `a_ij * b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows.saturating_mul(b.rows);
    let cols = a.cols.saturating_mul(b.cols);
    check_size(rows, cols)?;
    Ok(ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    }))
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if !m.is_square() {
        return Err(LinalgError::Shape(format!(
            "expected a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(LinalgError::Shape(format!("invalid subsystem dims {dims:?}")));
    }
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    if total != Some(m.rows) {
        return Err(LinalgError::Shape(format!(
            "subsystem dims {dims:?} do not multiply to {}",
            m.rows
        )));
    }
    Ok(())
}

/// Splits a flat index into per-subsystem digits (most significant first).
fn unravel(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = idx % d;
        idx /= d;
    }
}

fn ravel(digits: impl Iterator<Item = usize>, dims: impl Iterator<Item = usize>) -> usize {
    digits.zip(dims).fold(0, |acc, (x, d)| acc * d + x)
}

/// Traces out every subsystem not listed in `keep`.
///
/// Kept subsystems stay in their original relative order, regardless of the
/// order they appear in `keep`.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(rho, dims)?;
    if keep.is_empty() {
        return Err(LinalgError::Shape("keep set must be nonempty".into()));
    }
    let n = dims.len();
    let mut kept = vec![false; n];
    for &k in keep {
        if k >= n || kept[k] {
            return Err(LinalgError::Shape(format!(
                "invalid or repeated subsystem index {k} for {n} subsystems"
            )));
        }
        kept[k] = true;
    }
    let kept_dims: Vec<usize> = (0..n).filter(|&i| kept[i]).map(|i| dims[i]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);

    let mut rd = vec![0; n];
    let mut cd = vec![0; n];
    for r in 0..rho.rows {
        unravel(r, dims, &mut rd);
        for c in 0..rho.cols {
            unravel(c, dims, &mut cd);
            // traced-out digits must agree
            if (0..n).any(|i| !kept[i] && rd[i] != cd[i]) {
                continue;
            }
            let ro = ravel((0..n).filter(|&i| kept[i]).map(|i| rd[i]), kept_dims.iter().copied());
            let co = ravel((0..n).filter(|&i| kept[i]).map(|i| cd[i]), kept_dims.iter().copied());
            out[(ro, co)] += rho[(r, c)];
        }
    }
    Ok(out)
}

/// Which tensor factor of a bipartite operator to act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Transposes one factor of a bipartite operator on `dims[0] (x) dims[1]`.
pub fn partial_transpose(rho: &ComplexMatrix, dims: [usize; 2], subsystem: Subsystem) -> Result<ComplexMatrix> {
    check_dims(rho, &dims)?;
    let [_, db] = dims;
    Ok(ComplexMatrix::from_fn(rho.rows, rho.cols, |r, c| {
        let (ra, rb) = (r / db, r % db);
        let (ca, cb) = (c / db, c % db);
        match subsystem {
            Subsystem::B => rho[(ra * db + cb, ca * db + rb)],
            Subsystem::A => rho[(ca * db + rb, ra * db + cb)],
        }
    }))
}

/// Reorders tensor factors: factor `i` of the output is factor `perm[i]` of
/// the input.
pub fn permute_factors(rho: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    check_dims(rho, dims)?;
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(LinalgError::Shape(format!(
            "{perm:?} is not a permutation of {n} subsystems"
        )));
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut rd = vec![0; n];
    let mut cd = vec![0; n];
    let mut out = ComplexMatrix::zeros(rho.rows, rho.cols);
    for r in 0..rho.rows {
        unravel(r, dims, &mut rd);
        let ro = ravel(perm.iter().map(|&p| rd[p]), new_dims.iter().copied());
        for c in 0..rho.cols {
            unravel(c, dims, &mut cd);
            let co = ravel(perm.iter().map(|&p| cd[p]), new_dims.iter().copied());
            out[(ro, co)] = rho[(r, c)];
        }
    }
    Ok(out)
}

/// `sum_ij |m_ij|^2`, i.e. `Tr(m^dagger m)`.
pub fn frobenius_norm_sq(m: &ComplexMatrix) -> f64 {
    m.data.iter().map(Complex64::norm_sqr).sum()
}

/// `Tr(a b)` computed as `sum_ij a_ij b_ji` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.rows != b.cols || a.cols != b.rows || !a.is_square() {
        return Err(LinalgError::Shape(format!(
            "trace of product needs matching square operands, got {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.rows {
        for j in 0..a.cols {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub converged: bool,
    pub sweeps_used: usize,
}

impl EigenResult {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for r in 0..a.rows {
        for c in 0..a.cols {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a complex Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary and
/// then applies a real Givens rotation, so the pair `(p, q)` is annihilated
/// exactly. If the sweep cap is reached the current diagonal is returned with
/// `converged = false`.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<EigenResult> {
    if !m.is_square() {
        return Err(LinalgError::Shape(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(LinalgError::NotHermitian { deviation });
    }
    let n = m.rows;
    let mut a = m.clone();
    let threshold = JACOBI_TOL * frobenius_norm_sq(m).sqrt().max(1.0);

    let mut sweeps = 0;
    let mut converged = off_diagonal_mass(&a) < threshold;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
        converged = off_diagonal_mass(&a) < threshold;
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(EigenResult {
        eigenvalues,
        converged,
        sweeps_used: sweeps,
    })
}

fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    let n = a.rows;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
