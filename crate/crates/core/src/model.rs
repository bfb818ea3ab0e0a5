//! System parameters and the frequencies derived from them.
//!
//! Units are natural (ħ = 1). Both oscillators share the natural frequency
//! `omega`; the position-position coupling strength is carried as the
//! dimensionless ratio `coupling_ratio = Ω/ω`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    omega: f64,
    coupling_ratio: f64,
}

impl SystemParams {
    pub fn new(omega: f64, coupling_ratio: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParams(format!("omega must be finite and > 0, got {omega}")));
        }
        if !(coupling_ratio.is_finite() && coupling_ratio >= 0.0) {
            return Err(Error::InvalidParams(format!("coupling ratio must be finite and >= 0, got {coupling_ratio}")));
        }
        Ok(Self { omega, coupling_ratio })
    }

    /// Unit base frequency with the given coupling ratio.
    pub fn with_coupling(coupling_ratio: f64) -> Result<Self> {
        Self::new(1.0, coupling_ratio)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn coupling_ratio(&self) -> f64 {
        self.coupling_ratio
    }

    /// Absolute coupling strength Ω.
    pub fn coupling_strength(&self) -> f64 {
        self.coupling_ratio * self.omega
    }

    pub fn is_coupled(&self) -> bool {
        self.coupling_ratio > 0.0
    }
}

/// Normal mode: `Plus` is the slow symmetric mode, `Minus` the fast antisymmetric one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeIndex {
    Plus,
    Minus,
}

impl ModeIndex {
    pub const ALL: [ModeIndex; 2] = [ModeIndex::Plus, ModeIndex::Minus];

    pub fn other(self) -> Self {
        match self {
            ModeIndex::Plus => ModeIndex::Minus,
            ModeIndex::Minus => ModeIndex::Plus,
        }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeIndex::Plus => "+",
            ModeIndex::Minus => "-",
        })
    }
}

/// Single-excitation Bell-like state `(|01> ± |10>)/√2` in the normal-mode basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellState {
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 2] = [BellState::PsiPlus, BellState::PsiMinus];

    /// Relative sign between the two single-excitation components.
    pub fn relative_sign(self) -> f64 {
        match self {
            BellState::PsiPlus => 1.0,
            BellState::PsiMinus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PsiPlus => "psi-plus",
            BellState::PsiMinus => "psi-minus",
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Bare oscillator selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OscillatorIndex {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl OscillatorIndex {
    pub const ALL: [OscillatorIndex; 2] = [OscillatorIndex::One, OscillatorIndex::Two];

    pub fn number(self) -> u8 {
        match self {
            OscillatorIndex::One => 1,
            OscillatorIndex::Two => 2,
        }
    }

    /// Sign with which the antisymmetric normal mode enters this oscillator's coordinate.
    pub fn antisymmetric_sign(self) -> f64 {
        match self {
            OscillatorIndex::One => 1.0,
            OscillatorIndex::Two => -1.0,
        }
    }
}

impl fmt::Display for OscillatorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Ratio of fast to slow normal-mode frequency, `√(1 + 2g²)`.
pub fn eta(params: &SystemParams) -> f64 {
    let g = params.coupling_ratio();
    (1.0 + 2.0 * g * g).sqrt()
}

pub fn mode_frequency(params: &SystemParams, mode: ModeIndex) -> f64 {
    match mode {
        ModeIndex::Plus => params.omega(),
        ModeIndex::Minus => eta(params) * params.omega(),
    }
}

/// Signed beat frequency `(1 − η)ω` at which the fluctuation envelopes oscillate.
/// Always ≤ 0; callers needing a positive rate take `abs()`.
pub fn beat_frequency(params: &SystemParams) -> f64 {
    mode_frequency(params, ModeIndex::Plus) - mode_frequency(params, ModeIndex::Minus)
}

/// Period of the fluctuation envelope, `2π/|ω_Ψ|`. `None` at zero coupling.
pub fn beat_period(params: &SystemParams) -> Option<f64> {
    let w = beat_frequency(params).abs();
    (w > 0.0).then(|| 2.0 * std::f64::consts::PI / w)
}
