//! Command-line front end: verification runs and CSV/JSON data export.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analytic::{self, baseline_nc, period_statistics, uniform_grid, PeriodStats};
use crate::error::{Error, Result};
use crate::model::{beat_frequency, beat_period, eta, BellState, OscillatorIndex, SystemParams};
use crate::oracle::checks::{MomentumEvolution, OracleReport, TABLE_MIN_CUTOFF};
use crate::oracle::{commutator_check, FockOracle, DEFAULT_CUTOFF, DEFAULT_TOLERANCE};
use crate::sampler::{sample_realization, RealizationConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Couplings used for the figure traces: uncoupled, strong and very strong.
pub const FIGURE_COUPLINGS: [f64; 3] = [0.0, 0.2, 0.8];

/// Time at which the Heisenberg-picture check conjugates the normal-mode operators.
pub const HEISENBERG_CHECK_TIME: f64 = 1.0;

#[derive(Debug, Parser)]
#[command(name = "bellosc", version, about = "Fluctuations of coupled oscillators in Bell-like states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cross-check the closed forms against the truncated Fock-space oracle.
    Verify,
    /// Export normalized amplitudes and uncertainty products on a time grid.
    Trace,
    /// Export beat frequency and per-period product statistics over couplings.
    Sweep,
    /// Export one seeded realization inside the fluctuation envelope.
    Sample,
    /// Write the data files behind all six figures into --out-dir.
    Figures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateArg {
    PsiPlus,
    PsiMinus,
}

impl From<StateArg> for BellState {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::PsiPlus => BellState::PsiPlus,
            StateArg::PsiMinus => BellState::PsiMinus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = 1.0)]
    pub omega: f64,
    /// Coupling ratio Ω/ω.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = 0.8)]
    pub coupling: f64,
    #[arg(long, global = true, value_enum, default_value_t = StateArg::PsiPlus)]
    pub state: StateArg,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub oscillator: u8,
    /// End of the time grid; defaults to two beat periods.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Grid points (trace, sample, verify) or samples per period (sweep).
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: usize,
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value = "figures")]
    pub out_dir: PathBuf,
    /// Comma-separated coupling ratios for sweep and figure 1.
    #[arg(long, global = true, allow_negative_numbers = true, value_delimiter = ',')]
    pub couplings: Option<Vec<f64>>,
}

/// Validated run configuration shared by all subcommands.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub omega: f64,
    pub coupling: f64,
    pub state: BellState,
    pub oscillator: OscillatorIndex,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub cutoff: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub couplings: Option<Vec<f64>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            coupling: 0.8,
            state: BellState::PsiPlus,
            oscillator: OscillatorIndex::One,
            t_max: None,
            steps: None,
            cutoff: DEFAULT_CUTOFF,
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            format: OutputFormat::Csv,
            output: None,
            out_dir: PathBuf::from("figures"),
            couplings: None,
        }
    }
}

impl TryFrom<CommonArgs> for RunConfig {
    type Error = Error;

    fn try_from(a: CommonArgs) -> Result<Self> {
        let cfg = Self {
            omega: a.omega,
            coupling: a.coupling,
            state: a.state.into(),
            oscillator: if a.oscillator == 2 { OscillatorIndex::Two } else { OscillatorIndex::One },
            t_max: a.t_max,
            steps: a.steps,
            cutoff: a.cutoff,
            tolerance: a.tolerance,
            seed: a.seed,
            format: a.format,
            output: a.output,
            out_dir: a.out_dir,
            couplings: a.couplings,
        };
        cfg.params()?;
        if !(cfg.tolerance.is_finite() && cfg.tolerance >= 0.0) {
            return Err(Error::InvalidConfig(format!("tolerance must be >= 0, got {}", cfg.tolerance)));
        }
        if let Some(t) = cfg.t_max {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidConfig(format!("t-max must be > 0, got {t}")));
            }
        }
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<SystemParams> {
        SystemParams::new(self.omega, self.coupling)
    }

    /// Explicit `t_max`, else two beat periods, else (uncoupled) ten time units.
    pub fn t_max_or_default(&self, params: &SystemParams) -> f64 {
        self.t_max.unwrap_or_else(|| beat_period(params).map_or(10.0, |p| 2.0 * p))
    }

    pub fn steps_or(&self, default: usize) -> usize {
        self.steps.unwrap_or(default)
    }
}

/// Column-oriented numeric table, the common shape of every exported data set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Nine significant digits in scientific notation.
pub fn format_number(v: f64) -> String {
    format!("{v:.8e}")
}

fn rounded(v: f64) -> f64 {
    format_number(v).parse().expect("formatted float parses")
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_json<M: Serialize>(&self, metadata: &M) -> Result<Value> {
        let mut data = Map::new();
        for (k, name) in self.columns.iter().enumerate() {
            let col: Vec<f64> = self.rows.iter().map(|r| rounded(r[k])).collect();
            data.insert(name.clone(), json!(col));
        }
        Ok(json!({
            "metadata": serde_json::to_value(metadata)?,
            "column_order": self.columns,
            "columns": data,
        }))
    }

    pub fn write<W: Write, M: Serialize>(&self, format: OutputFormat, metadata: &M, mut w: W) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(w),
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut w, &self.to_json(metadata)?)?;
                writeln!(w)?;
                Ok(())
            }
        }
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let columns = rdr.headers()?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| Error::InvalidConfig(format!("bad number {s:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    pub fn read_csv_file(path: &Path) -> Result<Self> {
        Self::read_csv(fs::File::open(path)?)
    }
}

pub const TRACE_COLUMNS: [&str; 11] =
    ["t", "dx1", "dx2", "dp1", "dp2", "up1", "up2", "dx1_nc", "dp1_nc", "up1_nc", "up2_nc"];

pub const SWEEP_COLUMNS: [&str; 11] = [
    "coupling",
    "eta",
    "abs_beat_over_omega",
    "min_up1",
    "max_up1",
    "mean_up1",
    "fraction_below_nc_1",
    "min_up2",
    "max_up2",
    "mean_up2",
    "fraction_below_nc_2",
];

pub const SAMPLE_COLUMNS: [&str; 4] = ["t", "sample", "envelope_plus", "envelope_minus"];

pub fn trace_table(cfg: &RunConfig) -> Result<Table> {
    let params = cfg.params()?;
    let tr = analytic::trace(&params, cfg.state, 0.0, cfg.t_max_or_default(&params), cfg.steps_or(200))?;
    Ok(trace_to_table(&tr, cfg.state))
}

pub fn trace_to_table(tr: &analytic::FluctuationTrace, state: BellState) -> Table {
    let (a1, u1) = baseline_nc(state, OscillatorIndex::One);
    let (_, u2) = baseline_nc(state, OscillatorIndex::Two);
    let mut table = Table::new(TRACE_COLUMNS);
    for k in 0..tr.len() {
        table.push(vec![tr.times[k], tr.dx1[k], tr.dx2[k], tr.dp1[k], tr.dp2[k], tr.up1[k], tr.up2[k], a1, a1, u1, u2]);
    }
    table
}

/// Rebuilds a trace from the `t, dx1, dx2, dp1, dp2, up1, up2` columns of an export.
pub fn table_to_trace(table: &Table) -> Result<analytic::FluctuationTrace> {
    let col = |name: &str| table.column(name).ok_or_else(|| Error::InvalidConfig(format!("missing column {name}")));
    Ok(analytic::FluctuationTrace {
        times: col("t")?,
        dx1: col("dx1")?,
        dx2: col("dx2")?,
        dp1: col("dp1")?,
        dp2: col("dp2")?,
        up1: col("up1")?,
        up2: col("up2")?,
    })
}

/// Per-period statistics; at zero coupling the products are constant, so the
/// statistics degenerate to the baseline with nothing strictly below it.
pub fn sweep_statistics(
    params: &SystemParams,
    state: BellState,
    osc: OscillatorIndex,
    samples_per_period: usize,
) -> Result<PeriodStats> {
    if params.is_coupled() {
        return period_statistics(params, state, osc, samples_per_period);
    }
    let nc = baseline_nc(state, osc).1;
    Ok(PeriodStats { min_product: nc, max_product: nc, mean_product: nc, fraction_below_nc: 0.0, nc_baseline: nc })
}

pub fn default_sweep_couplings() -> Vec<f64> {
    (0..=100).map(|k| k as f64 / 100.0).collect()
}

pub fn sweep_table(cfg: &RunConfig, couplings: &[f64]) -> Result<Table> {
    if couplings.is_empty() {
        return Err(Error::InvalidConfig("coupling list is empty".into()));
    }
    let samples = cfg.steps_or(4096);
    if samples < 16 {
        return Err(Error::InvalidConfig(format!("sweep needs >= 16 samples per period, got {samples}")));
    }
    let mut table = Table::new(SWEEP_COLUMNS);
    for &g in couplings {
        let params = SystemParams::new(cfg.omega, g)?;
        let mut row = vec![g, eta(&params), beat_frequency(&params).abs() / params.omega()];
        for osc in OscillatorIndex::ALL {
            let st = sweep_statistics(&params, cfg.state, osc, samples)?;
            row.extend([st.min_product, st.max_product, st.mean_product, st.fraction_below_nc]);
        }
        table.push(row);
    }
    Ok(table)
}

pub fn sample_table(cfg: &RunConfig) -> Result<Table> {
    let params = cfg.params()?;
    let steps = cfg.steps_or(1000);
    if steps < 2 {
        return Err(Error::InvalidConfig(format!("sample needs >= 2 steps, got {steps}")));
    }
    let t_max = cfg.t_max_or_default(&params);
    let rc = RealizationConfig::new(cfg.seed, t_max / (steps - 1) as f64, t_max)?;
    let r = sample_realization(&params, cfg.state, cfg.oscillator, &rc)?;
    let mut table = Table::new(SAMPLE_COLUMNS);
    for k in 0..r.times.len() {
        table.push(vec![r.times[k], r.values[k], r.envelope[k], -r.envelope[k]]);
    }
    Ok(table)
}

/// Outcome of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub reports: Vec<OracleReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self.reports.iter().any(OracleReport::is_failure)
    }

    pub fn failures(&self) -> usize {
        self.reports.iter().filter(|r| r.is_failure()).count()
    }
}

/// Runs every oracle comparison for the configured parameters.
pub fn run_verification(cfg: &RunConfig) -> Result<VerifyReport> {
    if cfg.cutoff < TABLE_MIN_CUTOFF {
        return Err(Error::Precondition(format!(
            "matrix-element table check needs cutoff >= {TABLE_MIN_CUTOFF}, got {}",
            cfg.cutoff
        )));
    }
    let params = cfg.params()?;
    let tol = cfg.tolerance;
    let oracle = FockOracle::with_cutoff(params, cfg.cutoff)?;
    let mut reports = oracle.expectation_table_check(tol)?;

    reports.extend(oracle.pp_cross_units_note(tol)?);
    // the coordinate-unit form coincides with the oracle at ω = 1; show it at 2ω too
    let probe = SystemParams::new(2.0 * params.omega(), params.coupling_ratio())?;
    reports.extend(FockOracle::with_cutoff(probe, cfg.cutoff)?.pp_cross_units_note(tol)?);

    reports.push(oracle.heisenberg_evolution_check(HEISENBERG_CHECK_TIME, tol, MomentumEvolution::Canonical));
    reports.push(
        oracle
            .heisenberg_evolution_check(HEISENBERG_CHECK_TIME, tol, MomentumEvolution::SineTermUsesMomentum)
            .informational(),
    );
    reports.extend(commutator_check(&oracle.basis)?);

    let times = uniform_grid(0.0, cfg.t_max_or_default(&params), cfg.steps_or(200))?;
    for state in BellState::ALL {
        let exact = analytic::trace_on(&params, state, &times);
        let num = oracle.evolve_expectations(state, &times);
        let mut worst = (0.0, 0.0, 0.0, String::new());
        for osc in OscillatorIndex::ALL {
            for (name, a, b) in [("dx", exact.dx(osc), num.dx(osc)), ("dp", exact.dp(osc), num.dp(osc))] {
                for k in 0..times.len() {
                    let d = (a[k] - b[k]).abs();
                    if d >= worst.0 {
                        worst = (d, a[k], b[k], format!("{name}{osc} at t={}", format_number(times[k])));
                    }
                }
            }
        }
        reports.push(OracleReport::with_diff(
            format!("evolution {state} max over {} points ({})", times.len(), worst.3),
            worst.1.into(),
            worst.2.into(),
            worst.0,
            tol,
        ));
    }
    Ok(VerifyReport { reports })
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn write_verify<W: Write>(cfg: &RunConfig, report: &VerifyReport, mut w: W) -> Result<()> {
    match cfg.format {
        OutputFormat::Csv => {
            for r in &report.reports {
                writeln!(w, "{r}")?;
            }
            let status = if report.passed() { "PASSED" } else { "FAILED" };
            writeln!(w, "{status}: {} checks, {} failed", report.reports.len(), report.failures())?;
        }
        OutputFormat::Json => {
            let v = json!({ "metadata": cfg, "passed": report.passed(), "reports": report.reports });
            serde_json::to_writer_pretty(&mut w, &v)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureFile {
    pub file: String,
    pub figure: u8,
    pub description: String,
}

/// Long-format trace of one quantity at each figure coupling.
fn figure_trace_table(cfg: &RunConfig, column: &str, times: &[f64]) -> Result<Table> {
    let nc_col = format!("{column}_nc");
    let mut table = Table::new(["coupling".to_string(), "t".to_string(), column.to_string(), nc_col.clone()]);
    for &g in &FIGURE_COUPLINGS {
        let params = SystemParams::new(cfg.omega, g)?;
        let full = trace_to_table(&analytic::trace_on(&params, cfg.state, times), cfg.state);
        let value = full.column(column).expect("trace column");
        let nc = full.column(&nc_col).expect("baseline column");
        for k in 0..times.len() {
            table.push(vec![g, times[k], value[k], nc[k]]);
        }
    }
    Ok(table)
}

/// Writes fig1.csv … fig6.csv plus index.csv into `out_dir`.
pub fn cmd_figures(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<FigureFile>> {
    fs::create_dir_all(out_dir)?;
    let couplings = cfg.couplings.clone().unwrap_or_else(default_sweep_couplings);
    let sweep_cfg = RunConfig { steps: None, ..cfg.clone() };
    let strong = SystemParams::new(cfg.omega, FIGURE_COUPLINGS[1])?;
    let t_end = cfg.t_max.unwrap_or_else(|| 2.0 * beat_period(&strong).expect("coupled"));
    let times = uniform_grid(0.0, t_end, cfg.steps_or(2000))?;
    let st = cfg.state;

    let mut files = vec![
        (
            FigureFile {
                file: "fig1.csv".into(),
                figure: 1,
                description: "relative beat frequency vs coupling".into(),
            },
            sweep_table(&sweep_cfg, &couplings)?,
        ),
        (
            FigureFile {
                file: "fig2.csv".into(),
                figure: 2,
                description: format!(
                    "realization of x{} fluctuations, {st}, coupling {}",
                    cfg.oscillator, cfg.coupling
                ),
            },
            sample_table(&RunConfig { steps: Some(cfg.steps_or(1000)), ..cfg.clone() })?,
        ),
    ];
    for (figure, column, what) in [
        (3u8, "dx1", "normalized x1 amplitude"),
        (4, "dp1", "normalized p1 amplitude"),
        (5, "up1", "x1-p1 uncertainty product"),
        (6, "up2", "x2-p2 uncertainty product"),
    ] {
        files.push((
            FigureFile {
                file: format!("fig{figure}.csv"),
                figure,
                description: format!("{what}, {st}, couplings 0/0.2/0.8"),
            },
            figure_trace_table(cfg, column, &times)?,
        ));
    }

    let mut index = fs::File::create(out_dir.join("index.csv"))?;
    writeln!(index, "file,figure,description")?;
    let mut out = Vec::new();
    for (meta, table) in files {
        table.write_csv(std::io::BufWriter::new(fs::File::create(out_dir.join(&meta.file))?))?;
        writeln!(index, "{},{},\"{}\"", meta.file, meta.figure, meta.description)?;
        out.push(meta);
    }
    Ok(out)
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFY_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed command. `Ok(false)` means a verification check failed.
pub fn execute(cli: Cli) -> Result<bool> {
    let cfg = RunConfig::try_from(cli.common)?;
    match cli.command {
        Command::Verify => {
            let report = run_verification(&cfg)?;
            write_verify(&cfg, &report, open_output(&cfg.output)?)?;
            Ok(report.passed())
        }
        Command::Trace => {
            trace_table(&cfg)?.write(cfg.format, &cfg, open_output(&cfg.output)?)?;
            Ok(true)
        }
        Command::Sweep => {
            let couplings = cfg.couplings.clone().unwrap_or_else(default_sweep_couplings);
            if let Some(g) = couplings.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
                return Err(Error::InvalidConfig(format!("couplings must be >= 0, got {g}")));
            }
            sweep_table(&cfg, &couplings)?.write(cfg.format, &cfg, open_output(&cfg.output)?)?;
            Ok(true)
        }
        Command::Sample => {
            sample_table(&cfg)?.write(cfg.format, &cfg, open_output(&cfg.output)?)?;
            Ok(true)
        }
        Command::Figures => {
            let files = cmd_figures(&cfg, &cfg.out_dir)?;
            for f in files {
                println!("{}", cfg.out_dir.join(&f.file).display());
            }
            Ok(true)
        }
    }
}
