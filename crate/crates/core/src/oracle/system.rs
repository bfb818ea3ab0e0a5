//! Coupled two-oscillator system on the truncated bare Fock basis.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{mode_frequency, BellState, ModeIndex, OscillatorIndex, SystemParams};
use crate::oracle::basis::{quadrature_matrices, TwoModeBasis};
use crate::oracle::operator::OperatorMatrix;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Coordinates and momenta of the two bare oscillators, embedded in the product space.
#[derive(Debug, Clone)]
pub struct BareOperators {
    pub x1: OperatorMatrix,
    pub x2: OperatorMatrix,
    pub p1: OperatorMatrix,
    pub p2: OperatorMatrix,
}

impl BareOperators {
    pub fn new(basis: &TwoModeBasis) -> Result<Self> {
        let (x, p) = quadrature_matrices(basis.cutoff(), basis.reference_frequency())?;
        let id = OperatorMatrix::identity(basis.single_dim());
        Ok(Self { x1: x.kron(&id), x2: id.kron(&x), p1: p.kron(&id), p2: id.kron(&p) })
    }

    pub fn x(&self, osc: OscillatorIndex) -> &OperatorMatrix {
        match osc {
            OscillatorIndex::One => &self.x1,
            OscillatorIndex::Two => &self.x2,
        }
    }

    pub fn p(&self, osc: OscillatorIndex) -> &OperatorMatrix {
        match osc {
            OscillatorIndex::One => &self.p1,
            OscillatorIndex::Two => &self.p2,
        }
    }
}

/// `H = ½(p1² + p2² + ω²(x1² + x2²) + Ω²(x1 − x2)²)`.
pub fn coupled_hamiltonian(params: &SystemParams, basis: &TwoModeBasis) -> Result<OperatorMatrix> {
    hamiltonian_from(&BareOperators::new(basis)?, params)
}

fn hamiltonian_from(ops: &BareOperators, params: &SystemParams) -> Result<OperatorMatrix> {
    let w2 = params.omega().powi(2);
    let c2 = params.coupling_strength().powi(2);
    let kinetic = &(&ops.p1 * &ops.p1) + &(&ops.p2 * &ops.p2);
    let onsite = &(&ops.x1 * &ops.x1) + &(&ops.x2 * &ops.x2);
    let rel = &ops.x1 - &ops.x2;
    let coupling = &rel * &rel;
    let h = &(&kinetic + &onsite.scale_real(w2)) + &coupling.scale_real(c2);
    h.scale_real(0.5).assume_hermitian()
}

/// Same Hamiltonian written with the shifted on-site frequency `ω′² = ω² + Ω²`
/// and an explicit `−Ω² x1 x2` cross term.
pub fn coupled_hamiltonian_shifted_form(params: &SystemParams, basis: &TwoModeBasis) -> Result<OperatorMatrix> {
    let ops = BareOperators::new(basis)?;
    let c2 = params.coupling_strength().powi(2);
    let shifted = params.omega().powi(2) + c2;
    let kinetic = &(&ops.p1 * &ops.p1) + &(&ops.p2 * &ops.p2);
    let onsite = &(&ops.x1 * &ops.x1) + &(&ops.x2 * &ops.x2);
    let cross = &ops.x1 * &ops.x2;
    let h = &(&kinetic + &onsite.scale_real(shifted)) - &cross.scale_real(2.0 * c2);
    h.scale_real(0.5).assume_hermitian()
}

/// `X± = (x1 ± x2)/√2`, `P± = (p1 ± p2)/√2`.
#[derive(Debug, Clone)]
pub struct NormalModeOperators {
    pub x_plus: OperatorMatrix,
    pub x_minus: OperatorMatrix,
    pub p_plus: OperatorMatrix,
    pub p_minus: OperatorMatrix,
}

impl NormalModeOperators {
    pub fn from_bare(ops: &BareOperators) -> Self {
        Self {
            x_plus: (&ops.x1 + &ops.x2).scale_real(FRAC_1_SQRT_2),
            x_minus: (&ops.x1 - &ops.x2).scale_real(FRAC_1_SQRT_2),
            p_plus: (&ops.p1 + &ops.p2).scale_real(FRAC_1_SQRT_2),
            p_minus: (&ops.p1 - &ops.p2).scale_real(FRAC_1_SQRT_2),
        }
    }

    pub fn x(&self, mode: ModeIndex) -> &OperatorMatrix {
        match mode {
            ModeIndex::Plus => &self.x_plus,
            ModeIndex::Minus => &self.x_minus,
        }
    }

    pub fn p(&self, mode: ModeIndex) -> &OperatorMatrix {
        match mode {
            ModeIndex::Plus => &self.p_plus,
            ModeIndex::Minus => &self.p_minus,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormalModeLadders {
    pub a_plus: OperatorMatrix,
    pub a_plus_dag: OperatorMatrix,
    pub a_minus: OperatorMatrix,
    pub a_minus_dag: OperatorMatrix,
}

impl NormalModeLadders {
    /// `A± = √(ω±/2)(X± + iP±/ω±)` built from the bare quadratures.
    pub fn from_modes(modes: &NormalModeOperators, params: &SystemParams) -> Self {
        let build = |mode: ModeIndex| {
            let w = mode_frequency(params, mode);
            let lower = (modes.x(mode) + &modes.p(mode).scale(C64::new(0.0, 1.0 / w))).scale_real((0.5 * w).sqrt());
            let raise = lower.adjoint();
            (lower, raise)
        };
        let (a_plus, a_plus_dag) = build(ModeIndex::Plus);
        let (a_minus, a_minus_dag) = build(ModeIndex::Minus);
        Self { a_plus, a_plus_dag, a_minus, a_minus_dag }
    }

    pub fn lowering(&self, mode: ModeIndex) -> &OperatorMatrix {
        match mode {
            ModeIndex::Plus => &self.a_plus,
            ModeIndex::Minus => &self.a_minus,
        }
    }

    pub fn raising(&self, mode: ModeIndex) -> &OperatorMatrix {
        match mode {
            ModeIndex::Plus => &self.a_plus_dag,
            ModeIndex::Minus => &self.a_minus_dag,
        }
    }
}

pub fn normal_mode_ladders(params: &SystemParams, basis: &TwoModeBasis) -> Result<NormalModeLadders> {
    let modes = NormalModeOperators::from_bare(&BareOperators::new(basis)?);
    Ok(NormalModeLadders::from_modes(&modes, params))
}

/// Eigendecomposition `H = V diag(E) V†` with energies ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    energies: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl Spectrum {
    pub fn of(h: &OperatorMatrix) -> Result<Self> {
        let dim = h.dim();
        let eig = SymmetricEigen::try_new(h.entries().clone(), f64::EPSILON, 1000 * dim)
            .ok_or(Error::EigenNonConvergence(dim))?;
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = DMatrix::<C64>::zeros(dim, dim);
        for (col, &k) in order.iter().enumerate() {
            let mut v = eig.eigenvectors.column(k).into_owned();
            // fix the arbitrary phase: largest component real positive
            let pivot = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
            v *= pivot.conj() / pivot.norm();
            vectors.set_column(col, &v);
        }
        Ok(Self { energies, vectors })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn vectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn ground_state(&self) -> DVector<C64> {
        self.vectors.column(0).into_owned()
    }

    fn phases(&self, t: f64) -> DVector<C64> {
        DVector::from_iterator(self.energies.len(), self.energies.iter().map(|&e| C64::from_polar(1.0, -e * t)))
    }

    /// `exp(−iHt)|ψ0>` without forming the propagator.
    pub fn evolve(&self, psi0: &DVector<C64>, t: f64) -> DVector<C64> {
        let coeffs = self.vectors.adjoint() * psi0;
        &self.vectors * coeffs.component_mul(&self.phases(t))
    }

    /// `U(t) = exp(−iHt) = V diag(e^{−iEt}) V†`.
    pub fn propagator(&self, t: f64) -> OperatorMatrix {
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), {
            let ph = self.phases(t);
            move |i, j| self.vectors[(i, j)] * ph[j]
        });
        OperatorMatrix::new(scaled * self.vectors.adjoint()).expect("square propagator")
    }

    pub fn reconstruct(&self) -> OperatorMatrix {
        let n = self.vectors.nrows();
        let scaled = DMatrix::from_fn(n, n, |i, j| self.vectors[(i, j)] * self.energies[j]);
        OperatorMatrix::new(scaled * self.vectors.adjoint()).expect("square reconstruction")
    }
}

/// Everything the oracle needs for one parameter point: bare and normal-mode
/// operators, the coupled Hamiltonian, and its spectrum.
#[derive(Debug, Clone)]
pub struct FockOracle {
    pub params: SystemParams,
    pub basis: TwoModeBasis,
    pub bare: BareOperators,
    pub modes: NormalModeOperators,
    pub ladders: NormalModeLadders,
    pub hamiltonian: OperatorMatrix,
    pub spectrum: Spectrum,
}

impl FockOracle {
    pub fn new(params: SystemParams, basis: TwoModeBasis) -> Result<Self> {
        let bare = BareOperators::new(&basis)?;
        let modes = NormalModeOperators::from_bare(&bare);
        let ladders = NormalModeLadders::from_modes(&modes, &params);
        let hamiltonian = hamiltonian_from(&bare, &params)?;
        let spectrum = Spectrum::of(&hamiltonian)?;
        Ok(Self { params, basis, bare, modes, ladders, hamiltonian, spectrum })
    }

    /// Default basis for these parameters at the given cutoff.
    pub fn with_cutoff(params: SystemParams, cutoff: usize) -> Result<Self> {
        Self::new(params, TwoModeBasis::for_params(cutoff, &params)?)
    }

    /// `(A−†|g> ± A+†|g>)/√2`: one quantum in the fast mode plus or minus one in
    /// the slow mode, on top of the numerical ground state `|g>`.
    pub fn bell_vector(&self, state: BellState) -> DVector<C64> {
        let g = self.spectrum.ground_state();
        let fast = self.ladders.a_minus_dag.apply(&g);
        let slow = self.ladders.a_plus_dag.apply(&g);
        (fast + slow * C64::new(state.relative_sign(), 0.0)) * C64::new(FRAC_1_SQRT_2, 0.0)
    }
}

pub fn bell_vector(state: BellState, params: &SystemParams, basis: &TwoModeBasis) -> Result<DVector<C64>> {
    Ok(FockOracle::new(*params, *basis)?.bell_vector(state))
}
