//! Generalized Gell-Mann matrices.
//!
//! Indices are 1-based: symmetric and antisymmetric members are labelled by
//! `1 <= j < k <= d`, diagonal members by `1 <= l <= d - 1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{c64, ComplexMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GgmError {
    #[error("generalized Gell-Mann matrices need d >= 2, got {0}")]
    BadDimension(usize),
}

/// Prefactor used for the diagonal family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalNormalization {
    /// `2 / (l (l + 1))`. With this prefactor `Tr(L^l L^l) != 2` for `l > 1`.
    #[default]
    AsPrinted,
    /// `sqrt(2 / (l (l + 1)))`, giving `Tr(L^l L^l) = 2`.
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GgmLabel {
    Symmetric { j: usize, k: usize },
    Antisymmetric { j: usize, k: usize },
    Diagonal { l: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GgmBasis {
    dim: usize,
    normalization: DiagonalNormalization,
    symmetric: Vec<ComplexMatrix>,
    antisymmetric: Vec<ComplexMatrix>,
    diagonal: Vec<ComplexMatrix>,
}

/// Position of `(j, k)` in the row-major enumeration of pairs `j < k`.
fn pair_position(d: usize, j: usize, k: usize) -> Option<usize> {
    if !(1 <= j && j < k && k <= d) {
        return None;
    }
    // pairs with first index < j come before
    let before: usize = (1..j).map(|i| d - i).sum();
    Some(before + (k - j - 1))
}

impl GgmBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normalization(&self) -> DiagonalNormalization {
        self.normalization
    }

    pub fn symmetric(&self) -> &[ComplexMatrix] {
        &self.symmetric
    }

    pub fn antisymmetric(&self) -> &[ComplexMatrix] {
        &self.antisymmetric
    }

    pub fn diagonal(&self) -> &[ComplexMatrix] {
        &self.diagonal
    }

    pub fn len(&self) -> usize {
        self.symmetric.len() + self.antisymmetric.len() + self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, label: GgmLabel) -> Option<&ComplexMatrix> {
        match label {
            GgmLabel::Symmetric { j, k } => pair_position(self.dim, j, k).map(|i| &self.symmetric[i]),
            GgmLabel::Antisymmetric { j, k } => pair_position(self.dim, j, k).map(|i| &self.antisymmetric[i]),
            GgmLabel::Diagonal { l } => (1..self.dim).contains(&l).then(|| &self.diagonal[l - 1]),
        }
    }

    /// Every member with its label: symmetric, then antisymmetric, then diagonal.
    pub fn labelled(&self) -> Vec<(GgmLabel, &ComplexMatrix)> {
        let d = self.dim;
        let pairs: Vec<(usize, usize)> = (1..=d).flat_map(|j| (j + 1..=d).map(move |k| (j, k))).collect();
        let sym = pairs
            .iter()
            .zip(&self.symmetric)
            .map(|(&(j, k), m)| (GgmLabel::Symmetric { j, k }, m));
        let asym = pairs
            .iter()
            .zip(&self.antisymmetric)
            .map(|(&(j, k), m)| (GgmLabel::Antisymmetric { j, k }, m));
        let diag = self
            .diagonal
            .iter()
            .enumerate()
            .map(|(i, m)| (GgmLabel::Diagonal { l: i + 1 }, m));
        sym.chain(asym).chain(diag).collect()
    }
}

pub fn build_basis(d: usize) -> Result<GgmBasis, GgmError> {
    build_basis_with(d, DiagonalNormalization::default())
}

pub fn build_basis_with(d: usize, normalization: DiagonalNormalization) -> Result<GgmBasis, GgmError> {
    if d < 2 {
        return Err(GgmError::BadDimension(d));
    }
    let mut symmetric = Vec::with_capacity(d * (d - 1) / 2);
    let mut antisymmetric = Vec::with_capacity(d * (d - 1) / 2);
    for j in 0..d {
        for k in j + 1..d {
            let mut s = ComplexMatrix::zeros(d, d);
            s[(j, k)] = c64(1.0, 0.0);
            s[(k, j)] = c64(1.0, 0.0);
            symmetric.push(s);

            let mut a = ComplexMatrix::zeros(d, d);
            a[(j, k)] = c64(0.0, -1.0);
            a[(k, j)] = c64(0.0, 1.0);
            antisymmetric.push(a);
        }
    }
    let diagonal = (1..d)
        .map(|l| {
            let lf = l as f64;
            let coeff = match normalization {
                DiagonalNormalization::AsPrinted => 2.0 / (lf * (lf + 1.0)),
                DiagonalNormalization::Standard => (2.0 / (lf * (lf + 1.0))).sqrt(),
            };
            let mut entries = vec![0.0; d];
            entries[..l].iter_mut().for_each(|x| *x = coeff);
            entries[l] = -lf * coeff;
            ComplexMatrix::diagonal(&entries)
        })
        .collect();
    Ok(GgmBasis {
        dim: d,
        normalization,
        symmetric,
        antisymmetric,
        diagonal,
    })
}

/// `sum_{j<k} L_s^{jk}`: zero diagonal, ones everywhere else.
pub fn symmetric_sum(d: usize) -> Result<ComplexMatrix, GgmError> {
    if d < 2 {
        return Err(GgmError::BadDimension(d));
    }
    Ok(ComplexMatrix::from_fn(d, d, |r, c| {
        c64(if r == c { 0.0 } else { 1.0 }, 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_product;

    #[test]
    fn qubit_case_is_pauli() {
        let b = build_basis(2).unwrap();
        let sx = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let sy = ComplexMatrix::from_rows(vec![
            vec![c64(0.0, 0.0), c64(0.0, -1.0)],
            vec![c64(0.0, 1.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(b.get(GgmLabel::Symmetric { j: 1, k: 2 }), Some(&sx));
        assert_eq!(b.get(GgmLabel::Antisymmetric { j: 1, k: 2 }), Some(&sy));
        assert_eq!(b.diagonal()[0], ComplexMatrix::diagonal(&[1.0, -1.0]));
        assert_eq!(symmetric_sum(2).unwrap(), sx);
    }

    #[test]
    fn qutrit_symmetric_13() {
        let b = build_basis(3).unwrap();
        let m = b.get(GgmLabel::Symmetric { j: 1, k: 3 }).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if (r, c) == (0, 2) || (r, c) == (2, 0) { 1.0 } else { 0.0 };
                assert_eq!(m[(r, c)], c64(expect, 0.0));
            }
        }
    }

    #[test]
    fn counts() {
        let b = build_basis(4).unwrap();
        assert_eq!(
            (b.symmetric().len(), b.antisymmetric().len(), b.diagonal().len()),
            (6, 6, 3)
        );
        assert_eq!(b.len(), 15);
        assert_eq!(b.labelled().len(), 15);
    }

    #[test]
    fn bad_dimension() {
        assert_eq!(build_basis(1), Err(GgmError::BadDimension(1)));
        assert_eq!(symmetric_sum(0), Err(GgmError::BadDimension(0)));
    }

    #[test]
    fn index_map_round_trip() {
        let b = build_basis(5).unwrap();
        for (label, m) in b.labelled() {
            assert_eq!(b.get(label), Some(m));
        }
        assert_eq!(b.get(GgmLabel::Symmetric { j: 2, k: 2 }), None);
        assert_eq!(b.get(GgmLabel::Diagonal { l: 5 }), None);
    }

    #[test]
    fn diagonal_normalisations() {
        let printed = build_basis(3).unwrap();
        let standard = build_basis_with(3, DiagonalNormalization::Standard).unwrap();
        let tr = |m: &ComplexMatrix| trace_product(m, m).unwrap().re;
        // l = 2: printed coefficient 1/3 gives entries (1/3, 1/3, -2/3)
        assert!((tr(&printed.diagonal()[1]) - 2.0 / 3.0).abs() < 1e-15);
        assert!((tr(&standard.diagonal()[1]) - 2.0).abs() < 1e-14);
        assert_eq!(printed.diagonal()[0], standard.diagonal()[0]);
    }
}
