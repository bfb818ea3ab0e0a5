//! Oracle comparisons between matrix computations and the closed forms.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::analytic::FluctuationTrace;
use crate::error::{Error, Result};
use crate::model::{eta, mode_frequency, BellState, ModeIndex, OscillatorIndex, SystemParams};
use crate::oracle::basis::TwoModeBasis;
use crate::oracle::operator::OperatorMatrix;
use crate::oracle::system::FockOracle;

pub const TABLE_MIN_CUTOFF: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    /// Counts toward pass/fail.
    Check,
    /// Documents a known discrepancy; never fails a run.
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub label: String,
    #[serde(serialize_with = "ser_complex")]
    pub analytic_value: C64,
    #[serde(serialize_with = "ser_complex")]
    pub oracle_value: C64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub kind: ReportKind,
}

fn ser_complex<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl OracleReport {
    pub fn compare(label: impl Into<String>, analytic: C64, oracle: C64, tolerance: f64) -> Self {
        Self::with_diff(label, analytic, oracle, (analytic - oracle).norm(), tolerance)
    }

    pub fn with_diff(label: impl Into<String>, analytic: C64, oracle: C64, abs_diff: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            analytic_value: analytic,
            oracle_value: oracle,
            abs_diff,
            tolerance,
            passed: abs_diff <= tolerance,
            kind: ReportKind::Check,
        }
    }

    pub fn informational(mut self) -> Self {
        self.kind = ReportKind::Informational;
        self
    }

    pub fn is_failure(&self) -> bool {
        self.kind == ReportKind::Check && !self.passed
    }
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:.9e}", z.re)
    } else {
        format!("{:.9e}{:+.9e}i", z.re, z.im)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.kind, self.passed) {
            (ReportKind::Check, true) => "PASS",
            (ReportKind::Check, false) => "FAIL",
            (ReportKind::Informational, true) => "INFO(agrees)",
            (ReportKind::Informational, false) => "INFO(differs)",
        };
        write!(
            f,
            "{status} {} analytic={} oracle={} abs_diff={:.3e} tol={:.1e}",
            self.label,
            fmt_c(self.analytic_value),
            fmt_c(self.oracle_value),
            self.abs_diff,
            self.tolerance
        )
    }
}

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn mode_name(m: ModeIndex) -> &'static str {
    match m {
        ModeIndex::Plus => "+",
        ModeIndex::Minus => "-",
    }
}

fn table_precondition(basis: &TwoModeBasis) -> Result<()> {
    if basis.cutoff() < TABLE_MIN_CUTOFF {
        return Err(Error::Precondition(format!(
            "matrix-element table needs cutoff >= {TABLE_MIN_CUTOFF}, got {}",
            basis.cutoff()
        )));
    }
    Ok(())
}

impl FockOracle {
    /// Normal-mode matrix elements in the Bell-like states, compared against
    /// the closed forms (with `⟨P+P−⟩ = ±√η ω/2`).
    pub fn expectation_table_check(&self, tol: f64) -> Result<Vec<OracleReport>> {
        table_precondition(&self.basis)?;
        let prm = &self.params;
        let e = eta(prm);
        let omega = prm.omega();
        let mut out = Vec::new();
        for state in BellState::ALL {
            let psi = self.bell_vector(state);
            let sign = state.relative_sign();
            for a in ModeIndex::ALL {
                let b = a.other();
                let w = mode_frequency(prm, a);
                let (xa, pa) = (self.modes.x(a), self.modes.p(a));
                let (xb, pb) = (self.modes.x(b), self.modes.p(b));
                let (ma, mb) = (mode_name(a), mode_name(b));
                let rows: [(String, C64, &OperatorMatrix, Option<&OperatorMatrix>); 8] = [
                    (format!("<X{ma}>"), real(0.0), xa, None),
                    (format!("<P{ma}>"), real(0.0), pa, None),
                    (format!("<X{ma}^2>"), real(1.0 / w), xa, Some(xa)),
                    (format!("<P{ma}^2>"), real(w), pa, Some(pa)),
                    (format!("<X{ma} X{mb}>"), real(sign / (2.0 * e.sqrt() * omega)), xa, Some(xb)),
                    (format!("<X{ma} P{ma}>"), C64::new(0.0, 0.5), xa, Some(pa)),
                    (format!("<P{ma} X{ma}>"), C64::new(0.0, -0.5), pa, Some(xa)),
                    (format!("<P{ma} P{mb}>"), real(sign * e.sqrt() * omega / 2.0), pa, Some(pb)),
                ];
                for (label, analytic, left, right) in rows {
                    let value = expectation_of_product(&psi, left, right);
                    out.push(OracleReport::compare(format!("table {state} {label}"), analytic, value, tol));
                }
            }
        }
        Ok(out)
    }

    /// Compares the oracle's `⟨P+P−⟩` against the alternative form `±√η/(2ω)`,
    /// which has coordinate-type units. The two agree only when `ω = 1`.
    pub fn pp_cross_units_note(&self, tol: f64) -> Result<Vec<OracleReport>> {
        table_precondition(&self.basis)?;
        let e = eta(&self.params);
        let omega = self.params.omega();
        Ok(BellState::ALL
            .iter()
            .map(|&state| {
                let psi = self.bell_vector(state);
                let value = expectation_of_product(&psi, &self.modes.p_plus, Some(&self.modes.p_minus));
                let alt = real(state.relative_sign() * e.sqrt() / (2.0 * omega));
                OracleReport::compare(
                    format!("table {state} <P+ P-> vs coordinate-unit form sqrt(eta)/(2 omega) at omega={omega}"),
                    alt,
                    value,
                    tol,
                )
                .informational()
            })
            .collect())
    }

    /// Normalized standard deviations of the bare coordinates and momenta along
    /// `exp(−iHt)|Ψ±>`.
    pub fn evolve_expectations(&self, state: BellState, times: &[f64]) -> FluctuationTrace {
        let psi0 = self.bell_vector(state);
        let omega = self.params.omega();
        let x_scale = (0.5 / omega).sqrt();
        let p_scale = (0.5 * omega).sqrt();
        let ops: Vec<(&OperatorMatrix, OperatorMatrix)> =
            [&self.bare.x1, &self.bare.x2, &self.bare.p1, &self.bare.p2].into_iter().map(|m| (m, m * m)).collect();
        let mut out = FluctuationTrace::with_capacity(times.len());
        for &t in times {
            let psi = self.spectrum.evolve(&psi0, t);
            let sd: Vec<f64> = ops
                .iter()
                .map(|(m, m2)| {
                    let mean = m.expectation(&psi).re;
                    (m2.expectation(&psi).re - mean * mean).max(0.0).sqrt()
                })
                .collect();
            out.push(t, sd[0] / x_scale, sd[1] / x_scale, sd[2] / p_scale, sd[3] / p_scale);
        }
        out
    }

    /// Mean of a bare observable along the evolution (used by tests and the sampler check).
    pub fn bare_mean(&self, state: BellState, osc: OscillatorIndex, t: f64) -> f64 {
        let psi = self.spectrum.evolve(&self.bell_vector(state), t);
        self.bare.x(osc).expectation(&psi).re
    }

    /// Conjugates `X±`, `P±` by the numerical propagator and compares with the
    /// free normal-mode evolution on states with at most two bare quanta.
    pub fn heisenberg_evolution_check(&self, t: f64, tol: f64, form: MomentumEvolution) -> OracleReport {
        let u = self.spectrum.propagator(t);
        let ud = u.adjoint();
        let block = self.basis.with_total_at_most(2);
        let mut worst = (0.0f64, real(0.0), real(0.0));
        for mode in ModeIndex::ALL {
            let w = mode_frequency(&self.params, mode);
            let (c, s) = ((w * t).cos(), (w * t).sin());
            let x0 = self.modes.x(mode);
            let p0 = self.modes.p(mode);
            let x_closed = &x0.scale_real(c) + &p0.scale_real(s / w);
            let sine_operand = match form {
                MomentumEvolution::Canonical => x0,
                MomentumEvolution::SineTermUsesMomentum => p0,
            };
            let p_closed = &p0.scale_real(c) - &sine_operand.scale_real(w * s);
            for (op, closed) in [(x0, x_closed), (p0, p_closed)] {
                let evolved = &(&ud * op) * &u;
                let diff = &evolved - &closed;
                let (d, (i, j)) = diff.max_abs_on_block(&block);
                if d > worst.0 {
                    worst = (d, closed.get(i, j), evolved.get(i, j));
                }
            }
        }
        let label = match form {
            MomentumEvolution::Canonical => format!("heisenberg X(t), P(t) = P cos - w X sin at t={t}"),
            MomentumEvolution::SineTermUsesMomentum => {
                format!("heisenberg X(t), P(t) = P cos - w P sin (misprinted sine term) at t={t}")
            }
        };
        OracleReport::with_diff(label, worst.1, worst.2, worst.0, tol)
    }
}

/// Which closed form to use for the momentum's sine term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumEvolution {
    /// `P(t) = P(0) cos(ωt) − ω X(0) sin(ωt)`, as Hamilton's equations require.
    Canonical,
    /// `P(t) = P(0) cos(ωt) − ω P(0) sin(ωt)`; kept as a negative control.
    SineTermUsesMomentum,
}

fn expectation_of_product(psi: &DVector<C64>, left: &OperatorMatrix, right: Option<&OperatorMatrix>) -> C64 {
    match right {
        None => left.expectation(psi),
        // ⟨ψ|L R|ψ⟩ = (L†ψ)† (Rψ)
        Some(r) => left.adjoint().apply(psi).dotc(&r.apply(psi)),
    }
}

pub fn expectation_table_check(params: &SystemParams, basis: &TwoModeBasis, tol: f64) -> Result<Vec<OracleReport>> {
    table_precondition(basis)?;
    FockOracle::new(*params, *basis)?.expectation_table_check(tol)
}

pub fn evolve_expectations(
    params: &SystemParams,
    state: BellState,
    basis: &TwoModeBasis,
    times: &[f64],
) -> Result<FluctuationTrace> {
    Ok(FockOracle::new(*params, *basis)?.evolve_expectations(state, times))
}

pub fn heisenberg_evolution_check(
    params: &SystemParams,
    basis: &TwoModeBasis,
    t: f64,
    tol: f64,
) -> Result<OracleReport> {
    Ok(FockOracle::new(*params, *basis)?.heisenberg_evolution_check(t, tol, MomentumEvolution::Canonical))
}

/// Canonical commutators of bare and normal-mode quadratures, on the block of
/// states whose occupations are all below the cutoff.
pub fn commutator_check(basis: &TwoModeBasis) -> Result<Vec<OracleReport>> {
    const TOL: f64 = 1e-12;
    let bare = crate::oracle::system::BareOperators::new(basis)?;
    let modes = crate::oracle::system::NormalModeOperators::from_bare(&bare);
    let block = basis.below_cutoff();
    let id = OperatorMatrix::identity(basis.dim());
    let i_id = id.scale(C64::new(0.0, 1.0));
    let zero = OperatorMatrix::zeros(basis.dim());

    let mut out = Vec::new();
    let mut push = |label: String, x: &OperatorMatrix, p: &OperatorMatrix, same: bool| {
        let comm = x.commutator(p);
        let target = if same { &i_id } else { &zero };
        let (d, (i, j)) = (&comm - target).max_abs_on_block(&block);
        out.push(OracleReport::with_diff(label, target.get(i, j), comm.get(i, j), d, TOL));
    };
    for a in OscillatorIndex::ALL {
        for b in OscillatorIndex::ALL {
            push(format!("commutator [x{a}, p{b}]"), bare.x(a), bare.p(b), a == b);
        }
    }
    for a in ModeIndex::ALL {
        for b in ModeIndex::ALL {
            push(format!("commutator [X{}, P{}]", mode_name(a), mode_name(b)), modes.x(a), modes.p(b), a == b);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;

    fn oracle(g: f64, cutoff: usize) -> FockOracle {
        FockOracle::with_cutoff(SystemParams::with_coupling(g).unwrap(), cutoff).unwrap()
    }

    #[test]
    fn table_passes_and_reports_all_rows() {
        let o = oracle(0.8, 12);
        let reports = o.expectation_table_check(1e-8).unwrap();
        assert_eq!(reports.len(), 2 * 2 * 8);
        for r in &reports {
            assert!(r.passed, "{r}");
        }
        let pp = reports.iter().find(|r| r.label == "table psi-plus <P+ P->").unwrap();
        assert!((pp.oracle_value.re - 0.6144).abs() < 1e-4);
    }

    #[test]
    fn table_precondition() {
        let prm = SystemParams::with_coupling(0.5).unwrap();
        let b = TwoModeBasis::for_params(5, &prm).unwrap();
        assert!(matches!(expectation_table_check(&prm, &b, 1e-8), Err(Error::Precondition(_))));
    }

    #[test]
    fn pp_units_note_differs_away_from_unit_omega() {
        let prm = SystemParams::new(2.0, 0.8).unwrap();
        let o = FockOracle::with_cutoff(prm, 12).unwrap();
        let notes = o.pp_cross_units_note(1e-8).unwrap();
        assert!(notes.iter().all(|r| r.kind == ReportKind::Informational && !r.passed));
        assert!(notes.iter().all(|r| !r.is_failure()));
        let at_unit = oracle(0.8, 12).pp_cross_units_note(1e-8).unwrap();
        assert!(at_unit.iter().all(|r| r.passed));
    }

    #[test]
    fn cross_correlation_consistency_lock() {
        // ⟨P+P−⟩/(ω+ω−) = ⟨X+X−⟩ = ±1/(2√η ω)
        for &g in &[0.3, 0.8, 1.2] {
            let prm = SystemParams::new(1.4, g).unwrap();
            let o = FockOracle::with_cutoff(prm, 12).unwrap();
            let wp = mode_frequency(&prm, ModeIndex::Plus);
            let wm = mode_frequency(&prm, ModeIndex::Minus);
            for st in BellState::ALL {
                let psi = o.bell_vector(st);
                let xx = expectation_of_product(&psi, &o.modes.x_plus, Some(&o.modes.x_minus)).re;
                let pp = expectation_of_product(&psi, &o.modes.p_plus, Some(&o.modes.p_minus)).re;
                let expected = st.relative_sign() / (2.0 * eta(&prm).sqrt() * prm.omega());
                assert!((pp / (wp * wm) - xx).abs() < 1e-9);
                assert!((xx - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn evolution_matches_closed_form_and_sign_convention() {
        let prm = SystemParams::with_coupling(0.8).unwrap();
        let o = FockOracle::with_cutoff(prm, 12).unwrap();
        let period = crate::model::beat_period(&prm).unwrap();
        let times = analytic::uniform_grid(0.0, 2.0 * period, 60).unwrap();
        for st in BellState::ALL {
            let num = o.evolve_expectations(st, &times);
            let exact = analytic::trace_on(&prm, st, &times);
            assert!(num.max_amplitude_diff(&exact) < 1e-6);
        }
        // Ψ+ carries +cos on x1 at t = 0: larger than the mean level
        let num = o.evolve_expectations(BellState::PsiPlus, &[0.0]);
        assert!(num.dx1[0] > num.dx2[0]);
    }

    #[test]
    fn uncoupled_evolution_is_constant() {
        let o = oracle(0.0, 8);
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 0.9).collect();
        let tr = o.evolve_expectations(BellState::PsiPlus, &times);
        let s3 = 3f64.sqrt();
        for k in 0..times.len() {
            assert!((tr.dx1[k] - s3).abs() < 1e-12);
            assert!((tr.dp1[k] - s3).abs() < 1e-12);
            assert!((tr.dx2[k] - 1.0).abs() < 1e-12);
            assert!((tr.dp2[k] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_energy_and_mean_conservation() {
        let o = oracle(0.8, 10);
        let psi0 = o.bell_vector(BellState::PsiMinus);
        let e0 = o.hamiltonian.expectation(&psi0).re;
        for k in 0..25 {
            let t = k as f64 * 1.7;
            let psi = o.spectrum.evolve(&psi0, t);
            assert!((psi.norm() - 1.0).abs() < 1e-10);
            assert!((o.hamiltonian.expectation(&psi).re - e0).abs() < 1e-10);
            assert!(o.bare_mean(BellState::PsiMinus, OscillatorIndex::One, t).abs() < 1e-10);
        }
    }

    #[test]
    fn heisenberg_check_corrected_and_misprinted() {
        let o = oracle(0.5, 12);
        let at_zero = o.heisenberg_evolution_check(0.0, 1e-12, MomentumEvolution::Canonical);
        assert!(at_zero.passed, "{at_zero}");
        let good = o.heisenberg_evolution_check(1.0, 1e-8, MomentumEvolution::Canonical);
        assert!(good.passed, "{good}");
        let bad = o.heisenberg_evolution_check(1.0, 1e-8, MomentumEvolution::SineTermUsesMomentum);
        assert!(bad.abs_diff > 0.1, "{bad}");
    }

    #[test]
    fn commutators() {
        let prm = SystemParams::with_coupling(0.5).unwrap();
        let b = TwoModeBasis::for_params(6, &prm).unwrap();
        let reports = commutator_check(&b).unwrap();
        assert_eq!(reports.len(), 8);
        for r in &reports {
            assert!(r.passed, "{r}");
        }
        let bare = crate::oracle::system::BareOperators::new(&b).unwrap();
        assert_eq!(bare.x1.commutator(&bare.p2).max_abs(), 0.0);
    }

    #[test]
    fn report_display() {
        let r = OracleReport::compare("demo", real(1.0), real(1.0 + 1e-3), 1e-6);
        assert!(r.is_failure());
        assert!(r.to_string().starts_with("FAIL demo"));
        assert!(!r.clone().informational().is_failure());
    }
}
