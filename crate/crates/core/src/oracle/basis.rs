use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::oracle::operator::OperatorMatrix;

pub const MIN_BASIS_CUTOFF: usize = 3;

/// Product Fock basis `|n1, n2>` of the two bare oscillators, each truncated at
/// `cutoff` (inclusive). States are ordered lexicographically with `n2` fastest.
///
/// The bare ladder operators are defined with respect to `reference_frequency`.
/// Any positive value spans the same Hilbert space; it only sets how fast the
/// coupled eigenstates converge with the cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeBasis {
    cutoff: usize,
    reference_frequency: f64,
}

impl TwoModeBasis {
    pub fn new(cutoff: usize, reference_frequency: f64) -> Result<Self> {
        if cutoff < MIN_BASIS_CUTOFF {
            return Err(Error::Precondition(format!("basis cutoff must be >= {MIN_BASIS_CUTOFF}, got {cutoff}")));
        }
        if !(reference_frequency.is_finite() && reference_frequency > 0.0) {
            return Err(Error::Precondition(format!("reference frequency must be > 0, got {reference_frequency}")));
        }
        Ok(Self { cutoff, reference_frequency })
    }

    /// Basis scaled to `det(K)^{1/4}`, where `K` is the 2×2 curvature matrix of the
    /// coupled potential. This is the geometric mean of the two classical
    /// normal-mode frequencies, which balances the squeezing of both modes
    /// relative to the bare Fock states. Reduces to `omega` at zero coupling.
    pub fn for_params(cutoff: usize, params: &SystemParams) -> Result<Self> {
        let w2 = params.omega().powi(2);
        let c2 = params.coupling_strength().powi(2);
        let k = DMatrix::from_row_slice(2, 2, &[w2 + c2, -c2, -c2, w2 + c2]);
        Self::new(cutoff, k.determinant().sqrt().sqrt())
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn reference_frequency(&self) -> f64 {
        self.reference_frequency
    }

    pub fn single_dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dim(&self) -> usize {
        self.single_dim() * self.single_dim()
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        debug_assert!(n1 <= self.cutoff && n2 <= self.cutoff);
        n1 * self.single_dim() + n2
    }

    pub fn occupations(&self, index: usize) -> (usize, usize) {
        (index / self.single_dim(), index % self.single_dim())
    }

    pub fn indices_where(&self, pred: impl Fn(usize, usize) -> bool) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                let (n1, n2) = self.occupations(i);
                pred(n1, n2)
            })
            .collect()
    }

    /// States with every occupation `<= cutoff - 2`; truncation of the ladder
    /// operators does not reach matrix elements of quadratic operators there.
    pub fn low_lying(&self) -> Vec<usize> {
        let top = self.cutoff - 2;
        self.indices_where(|a, b| a <= top && b <= top)
    }

    /// States with every occupation strictly below the cutoff.
    pub fn below_cutoff(&self) -> Vec<usize> {
        let c = self.cutoff;
        self.indices_where(|a, b| a < c && b < c)
    }

    pub fn with_total_at_most(&self, total: usize) -> Vec<usize> {
        self.indices_where(|a, b| a + b <= total)
    }
}

/// Single-mode lowering and raising matrices with `√n` on the `(n−1, n)` entries.
pub fn ladder_matrices(cutoff: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if cutoff < 1 {
        return Err(Error::Precondition("ladder cutoff must be >= 1".into()));
    }
    let d = cutoff + 1;
    let mut lower = DMatrix::<C64>::zeros(d, d);
    for n in 1..d {
        lower[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let lowering = OperatorMatrix::new(lower)?;
    let raising = lowering.adjoint();
    Ok((lowering, raising))
}

/// Single-mode `X = √(1/2ω)(a† + a)`, `P = i√(ω/2)(a† − a)` (ħ = 1).
pub fn quadrature_matrices(cutoff: usize, mode_freq: f64) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if !(mode_freq.is_finite() && mode_freq > 0.0) {
        return Err(Error::Precondition(format!("mode frequency must be > 0, got {mode_freq}")));
    }
    let (a, ad) = ladder_matrices(cutoff)?;
    let x = (&ad + &a).scale_real((0.5 / mode_freq).sqrt()).assume_hermitian()?;
    let p = (&ad - &a).scale(C64::new(0.0, (0.5 * mode_freq).sqrt())).assume_hermitian()?;
    Ok((x, p))
}
