use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest anti-Hermitian residue tolerated for matrices flagged Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex square matrix on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
    hermitian_hint: bool,
}

impl OperatorMatrix {
    /// Wraps a general (not necessarily Hermitian) square matrix.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() < 2 {
            return Err(Error::Precondition(format!(
                "operator matrix must be square with dim >= 2, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { entries, hermitian_hint: false })
    }

    /// Wraps a matrix and flags it Hermitian, after checking that it is.
    pub fn hermitian(entries: DMatrix<C64>) -> Result<Self> {
        let mut m = Self::new(entries)?;
        let defect = m.hermitian_defect();
        if defect >= HERMITIAN_TOL {
            return Err(Error::Precondition(format!("matrix flagged Hermitian has max |M - M†| = {defect:e}")));
        }
        m.hermitian_hint = true;
        Ok(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: DMatrix::identity(dim, dim), hermitian_hint: true }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: DMatrix::zeros(dim, dim), hermitian_hint: true }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { entries: self.entries.adjoint(), hermitian_hint: self.hermitian_hint }
    }

    /// `max |M − M†|` over all entries.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Re-flags the matrix as Hermitian if its defect allows it.
    pub fn assume_hermitian(self) -> Result<Self> {
        Self::hermitian(self.entries)
    }

    pub fn scale(&self, factor: C64) -> Self {
        let real_factor = factor.im == 0.0;
        Self { entries: &self.entries * factor, hermitian_hint: self.hermitian_hint && real_factor }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// Kronecker product `self ⊗ other`; `self` acts on the slow (leftmost) index.
    pub fn kron(&self, other: &OperatorMatrix) -> Self {
        Self {
            entries: self.entries.kronecker(&other.entries),
            hermitian_hint: self.hermitian_hint && other.hermitian_hint,
        }
    }

    pub fn commutator(&self, other: &OperatorMatrix) -> Self {
        let entries = &self.entries * &other.entries - &other.entries * &self.entries;
        Self { entries, hermitian_hint: false }
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.entries * v
    }

    /// `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &DVector<C64>) -> C64 {
        v.dotc(&(&self.entries * v))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|M_ij|` with both `i` and `j` in `indices`, and where it occurs.
    pub fn max_abs_on_block(&self, indices: &[usize]) -> (f64, (usize, usize)) {
        let mut worst = (0.0, (0, 0));
        for &i in indices {
            for &j in indices {
                let v = self.entries[(i, j)].norm();
                if v > worst.0 {
                    worst = (v, (i, j));
                }
            }
        }
        worst
    }
}

impl<'a> Add<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries + &rhs.entries,
            hermitian_hint: self.hermitian_hint && rhs.hermitian_hint,
        }
    }
}

impl<'a> Sub<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries - &rhs.entries,
            hermitian_hint: self.hermitian_hint && rhs.hermitian_hint,
        }
    }
}

impl<'a> Mul<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix { entries: &self.entries * &rhs.entries, hermitian_hint: false }
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix { entries: -&self.entries, hermitian_hint: self.hermitian_hint }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_non_square_and_tiny() {
        assert!(OperatorMatrix::new(DMatrix::zeros(2, 3)).is_err());
        assert!(OperatorMatrix::new(DMatrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn hermitian_flag_is_validated() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        assert!(OperatorMatrix::hermitian(m.clone()).is_ok());
        let mut bad = m;
        bad[(0, 1)] = c(0.0, 2.0);
        assert!(OperatorMatrix::hermitian(bad).is_err());
    }

    #[test]
    fn kron_ordering_slow_index_first() {
        let a =
            OperatorMatrix::new(DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]))
                .unwrap();
        let id = OperatorMatrix::identity(2);
        let k = a.kron(&id);
        // |1,n2> -> |0,n2>: index 2 -> 0 and 3 -> 1
        assert_eq!(k.get(0, 2), c(1.0, 0.0));
        assert_eq!(k.get(1, 3), c(1.0, 0.0));
        assert_eq!(k.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn hint_propagation() {
        let h = OperatorMatrix::identity(3);
        assert!(h.scale_real(2.0).hermitian_hint());
        assert!(!h.scale(c(0.0, 1.0)).hermitian_hint());
        assert!(!(&h * &h).hermitian_hint());
        assert!((&h + &h).hermitian_hint());
    }
}
