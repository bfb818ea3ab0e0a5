//! Closed-form fluctuation amplitudes of the Bell-like states.
//!
//! All amplitudes are normalized by the single-oscillator ground-state values
//! `√(1/2ω)` (coordinate) and `√(ω/2)` (momentum), so the results do not
//! depend on `omega` except through the time axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{beat_frequency, beat_period, eta, BellState, OscillatorIndex, SystemParams};

/// `+1` for (Ψ⁺, oscillator 1) and (Ψ⁻, oscillator 2), `−1` for the other two
/// pairings. Every ± / ∓ in the closed forms goes through here.
pub fn pairing_sign(state: BellState, osc: OscillatorIndex) -> f64 {
    state.relative_sign() * osc.antisymmetric_sign()
}

/// `√η + 1/√η`, the period-averaged uncertainty product.
pub fn mean_product(params: &SystemParams) -> f64 {
    let r = eta(params).sqrt();
    r + 1.0 / r
}

fn beat_cos(params: &SystemParams, t: f64) -> f64 {
    (beat_frequency(params) * t).cos()
}

pub fn normalized_x_fluctuation(params: &SystemParams, state: BellState, osc: OscillatorIndex, t: f64) -> f64 {
    let e = eta(params);
    let c = pairing_sign(state, osc) * beat_cos(params, t);
    (1.0 + 1.0 / e + c / e.sqrt()).sqrt()
}

pub fn normalized_p_fluctuation(params: &SystemParams, state: BellState, osc: OscillatorIndex, t: f64) -> f64 {
    let e = eta(params);
    let c = pairing_sign(state, osc) * beat_cos(params, t);
    (1.0 + e + c * e.sqrt()).sqrt()
}

/// Normalized `Δx_i Δp_i`. The radicand of the product formula is the perfect
/// square `(s + σ cos(ω_Ψ t))²` with `s = √η + 1/√η ≥ 2`, so this never drops
/// below `s − 1 ≥ 1`.
pub fn uncertainty_product(params: &SystemParams, state: BellState, osc: OscillatorIndex, t: f64) -> f64 {
    mean_product(params) + pairing_sign(state, osc) * beat_cos(params, t)
}

/// Zero-coupling (amplitude, product): `(√3, 3)` for the plus pairings and `(1, 1)` otherwise.
/// Coordinate and momentum amplitudes coincide at zero coupling.
pub fn baseline_nc(state: BellState, osc: OscillatorIndex) -> (f64, f64) {
    if pairing_sign(state, osc) > 0.0 {
        (3f64.sqrt(), 3.0)
    } else {
        (1.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodStats {
    pub min_product: f64,
    pub max_product: f64,
    pub mean_product: f64,
    /// Fraction of grid points strictly below the zero-coupling product.
    pub fraction_below_nc: f64,
    pub nc_baseline: f64,
}

/// Uncertainty-product statistics over exactly one beat period, sampled on the
/// midpoint grid `t_k = (k + ½)T/N`.
pub fn period_statistics(
    params: &SystemParams,
    state: BellState,
    osc: OscillatorIndex,
    samples_per_period: usize,
) -> Result<PeriodStats> {
    if samples_per_period < 16 {
        return Err(Error::Precondition(format!("samples_per_period must be >= 16, got {samples_per_period}")));
    }
    let period = beat_period(params).ok_or(Error::ZeroCoupling)?;
    let nc = baseline_nc(state, osc).1;
    let n = samples_per_period as f64;

    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut below = 0usize;
    for k in 0..samples_per_period {
        let t = (k as f64 + 0.5) * period / n;
        let up = uncertainty_product(params, state, osc, t);
        min = min.min(up);
        max = max.max(up);
        sum += up;
        if up < nc {
            below += 1;
        }
    }
    Ok(PeriodStats {
        min_product: min,
        max_product: max,
        mean_product: sum / n,
        fraction_below_nc: below as f64 / n,
        nc_baseline: nc,
    })
}

/// Normalized amplitudes and uncertainty products on a time grid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FluctuationTrace {
    pub times: Vec<f64>,
    pub dx1: Vec<f64>,
    pub dx2: Vec<f64>,
    pub dp1: Vec<f64>,
    pub dp2: Vec<f64>,
    pub up1: Vec<f64>,
    pub up2: Vec<f64>,
}

impl FluctuationTrace {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            dx1: Vec::with_capacity(n),
            dx2: Vec::with_capacity(n),
            dp1: Vec::with_capacity(n),
            dp2: Vec::with_capacity(n),
            up1: Vec::with_capacity(n),
            up2: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends one row; the products are formed from the amplitudes.
    pub fn push(&mut self, t: f64, dx1: f64, dx2: f64, dp1: f64, dp2: f64) {
        self.times.push(t);
        self.dx1.push(dx1);
        self.dx2.push(dx2);
        self.dp1.push(dp1);
        self.dp2.push(dp2);
        self.up1.push(dx1 * dp1);
        self.up2.push(dx2 * dp2);
    }

    pub fn dx(&self, osc: OscillatorIndex) -> &[f64] {
        match osc {
            OscillatorIndex::One => &self.dx1,
            OscillatorIndex::Two => &self.dx2,
        }
    }

    pub fn dp(&self, osc: OscillatorIndex) -> &[f64] {
        match osc {
            OscillatorIndex::One => &self.dp1,
            OscillatorIndex::Two => &self.dp2,
        }
    }

    pub fn up(&self, osc: OscillatorIndex) -> &[f64] {
        match osc {
            OscillatorIndex::One => &self.up1,
            OscillatorIndex::Two => &self.up2,
        }
    }

    /// Largest absolute difference over the four amplitude columns.
    pub fn max_amplitude_diff(&self, other: &FluctuationTrace) -> f64 {
        [(&self.dx1, &other.dx1), (&self.dx2, &other.dx2), (&self.dp1, &other.dp1), (&self.dp2, &other.dp2)]
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Uniform grid of `n_points` times from `t_start` to `t_end` inclusive.
pub fn uniform_grid(t_start: f64, t_end: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(t_start.is_finite() && t_end.is_finite()) {
        return Err(Error::InvalidGrid("time bounds must be finite".into()));
    }
    if t_end <= t_start {
        return Err(Error::InvalidGrid(format!("t_end ({t_end}) must exceed t_start ({t_start})")));
    }
    if n_points < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
    }
    let dt = (t_end - t_start) / (n_points - 1) as f64;
    Ok((0..n_points).map(|k| if k == n_points - 1 { t_end } else { t_start + k as f64 * dt }).collect())
}

/// Closed-form trace on an arbitrary (strictly increasing) time grid.
pub fn trace_on(params: &SystemParams, state: BellState, times: &[f64]) -> FluctuationTrace {
    use OscillatorIndex::{One, Two};
    let mut out = FluctuationTrace::with_capacity(times.len());
    for &t in times {
        out.push(
            t,
            normalized_x_fluctuation(params, state, One, t),
            normalized_x_fluctuation(params, state, Two, t),
            normalized_p_fluctuation(params, state, One, t),
            normalized_p_fluctuation(params, state, Two, t),
        );
    }
    out
}

pub fn trace(
    params: &SystemParams,
    state: BellState,
    t_start: f64,
    t_end: f64,
    n_points: usize,
) -> Result<FluctuationTrace> {
    let times = uniform_grid(t_start, t_end, n_points)?;
    Ok(trace_on(params, state, &times))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::beat_period;
    use BellState::{PsiMinus, PsiPlus};
    use OscillatorIndex::{One, Two};

    fn g(c: f64) -> SystemParams {
        SystemParams::with_coupling(c).unwrap()
    }

    #[test]
    fn sign_table() {
        assert_eq!(pairing_sign(PsiPlus, One), 1.0);
        assert_eq!(pairing_sign(PsiMinus, Two), 1.0);
        assert_eq!(pairing_sign(PsiPlus, Two), -1.0);
        assert_eq!(pairing_sign(PsiMinus, One), -1.0);
    }

    #[test]
    fn zero_coupling_amplitudes() {
        let s3 = 3f64.sqrt();
        for &t in &[0.0, 1.3, 77.0] {
            assert_eq!(normalized_x_fluctuation(&g(0.0), PsiPlus, One, t), s3);
            assert_eq!(normalized_x_fluctuation(&g(0.0), PsiPlus, Two, t), 1.0);
            assert_eq!(normalized_p_fluctuation(&g(0.0), PsiPlus, One, t), s3);
            assert_eq!(normalized_p_fluctuation(&g(0.0), PsiMinus, One, t), 1.0);
            assert_eq!(uncertainty_product(&g(0.0), PsiPlus, One, t), 3.0);
            assert_eq!(uncertainty_product(&g(0.0), PsiPlus, Two, t), 1.0);
        }
    }

    #[test]
    fn strong_coupling_values_at_t0() {
        let e: f64 = 2.28f64.sqrt();
        let prm = g(0.8);
        let dx = (1.0 + 1.0 / e + 1.0 / e.sqrt()).sqrt();
        let dp = (1.0 + e + e.sqrt()).sqrt();
        assert!((normalized_x_fluctuation(&prm, PsiPlus, One, 0.0) - dx).abs() < 1e-15);
        assert!((dx - 1.5735).abs() < 1e-4);
        assert!((normalized_p_fluctuation(&prm, PsiPlus, One, 0.0) - dp).abs() < 1e-15);
        assert!((dp - 1.93359).abs() < 1e-5);
        let up = uncertainty_product(&prm, PsiPlus, One, 0.0);
        assert!((up - 3.0426).abs() < 1e-4);
        assert!((up - dx * dp).abs() < 1e-12);
    }

    #[test]
    fn baselines() {
        let s3 = 3f64.sqrt();
        assert_eq!(baseline_nc(PsiPlus, One), (s3, 3.0));
        assert_eq!(baseline_nc(PsiMinus, One), (1.0, 1.0));
        assert_eq!(baseline_nc(PsiMinus, Two), (s3, 3.0));
        assert_eq!(baseline_nc(PsiPlus, Two), (1.0, 1.0));
    }

    #[test]
    fn period_statistics_rejects_zero_coupling() {
        assert!(matches!(period_statistics(&g(0.0), PsiPlus, One, 64), Err(Error::ZeroCoupling)));
        assert!(matches!(period_statistics(&g(0.5), PsiPlus, One, 8), Err(Error::Precondition(_))));
    }

    #[test]
    fn period_statistics_strong_coupling() {
        let prm = g(0.8);
        let s = mean_product(&prm);
        let st = period_statistics(&prm, PsiPlus, One, 4096).unwrap();
        assert!((st.mean_product - s).abs() < 1e-12);
        assert!((s - 2.0426).abs() < 1e-4);
        assert!(st.mean_product < 3.0);
        let expected_fraction = (s - 3.0).acos() / std::f64::consts::PI;
        assert!((st.fraction_below_nc - expected_fraction).abs() < 1e-3);
        assert!((st.fraction_below_nc - 0.907).abs() < 1e-3);
        assert!(st.min_product <= st.mean_product && st.mean_product <= st.max_product);
        assert!(st.max_product > 3.0);

        let st2 = period_statistics(&prm, PsiPlus, Two, 4096).unwrap();
        assert!(st2.min_product >= 1.0);
        assert!(st2.mean_product > 1.0);
        assert_eq!(st2.fraction_below_nc, 0.0);
    }

    #[test]
    fn trace_grid_errors() {
        assert!(trace(&g(0.1), PsiPlus, 1.0, 1.0, 10).is_err());
        assert!(trace(&g(0.1), PsiPlus, 0.0, 1.0, 1).is_err());
        assert!(trace(&g(0.1), PsiPlus, 0.0, f64::NAN, 10).is_err());
    }

    #[test]
    fn trace_zero_coupling_constant() {
        let tr = trace(&g(0.0), PsiPlus, 0.0, 10.0, 11).unwrap();
        assert_eq!(tr.len(), 11);
        assert!(tr.dx1.iter().all(|&v| v == 3f64.sqrt()));
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn trace_is_periodic() {
        let prm = g(0.2);
        let period = beat_period(&prm).unwrap();
        let tr = trace(&prm, PsiPlus, 0.0, period, 101).unwrap();
        assert!((tr.dx1[0] - tr.dx1[100]).abs() < 1e-9);
    }

    #[test]
    fn complementarity_and_sum_rules_spot() {
        let prm = g(1.3);
        let e = eta(&prm);
        for k in 0..100 {
            let t = 0.37 * k as f64;
            for st in BellState::ALL {
                let dx1 = normalized_x_fluctuation(&prm, st, One, t);
                let dx2 = normalized_x_fluctuation(&prm, st, Two, t);
                let dp1 = normalized_p_fluctuation(&prm, st, One, t);
                let dp2 = normalized_p_fluctuation(&prm, st, Two, t);
                assert!((dx1 * dx1 + dx2 * dx2 - 2.0 * (1.0 + 1.0 / e)).abs() < 1e-12);
                assert!((dp1 * dp1 + dp2 * dp2 - 2.0 * (1.0 + e)).abs() < 1e-12);
                let sum = uncertainty_product(&prm, st, One, t) + uncertainty_product(&prm, st, Two, t);
                assert!((sum - 2.0 * mean_product(&prm)).abs() < 1e-12);
            }
        }
    }
}
