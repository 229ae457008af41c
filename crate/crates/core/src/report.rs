//! Method comparison runs and their CSV/JSON output.
//!
//! Data rows go to one writer as CSV with a fixed header; summaries are
//! serialized separately so the CSV stays clean for downstream tools.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{
    collapse_envelope, collapse_inversion, revival_envelope, revival_inversion, revival_schedule,
    PhaseMode, RevivalSchedule,
};
use crate::contour::{auto_contour, inversion_contour};
use crate::domain::{ModelParams, ScaledTime, TimeGrid};
use crate::error::Error;
use crate::exact::ExactSum;
use crate::saddle::{inversion_saddle, saddle_amplitude, trace_branch, trace_branch_at, write_trajectory_csv, BranchId};
use crate::sweep::{self, Execution};

/// Header of every comparison CSV, in column order.
pub const CSV_HEADER: [&str; 11] = [
    "t",
    "t_over_T",
    "exact",
    "contour",
    "saddle",
    "collapse",
    "revival",
    "err_contour",
    "err_saddle",
    "err_collapse",
    "err_revival",
];

/// Revival curves are only compared within this many periods of `t_n`.
pub const REVIVAL_HALF_WINDOW: f64 = 0.5;

pub const DEFAULT_FIGURE1_P: [f64; 4] = [0.2, 0.4, 0.6, 0.8];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure at t = {t}: {source}")]
    Numerical { t: f64, source: Error },
    #[error("numerical failure at tau = {tau}: {source}")]
    Trace { tau: f64, source: Error },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl ReportError {
    /// 2 for configuration problems, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Config(_) => 2,
            ReportError::Numerical { .. } | ReportError::Trace { .. } => 3,
            _ => 1,
        }
    }
}

impl From<Error> for ReportError {
    fn from(e: Error) -> Self {
        ReportError::Config(e.to_string())
    }
}

pub type ReportResult<T> = std::result::Result<T, ReportError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Contour,
    Saddle,
    Collapse,
    Revival,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Exact,
        Method::Contour,
        Method::Saddle,
        Method::Collapse,
        Method::Revival,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Contour => "contour",
            Method::Saddle => "saddle",
            Method::Collapse => "collapse",
            Method::Revival => "revival",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = ReportError;

    fn from_str(s: &str) -> ReportResult<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ReportError::Config(format!("unknown method '{s}'")))
    }
}

/// Parses a comma-separated method list, deduplicated and in canonical order.
pub fn parse_methods(list: &str) -> ReportResult<Vec<Method>> {
    let mut out = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Method::from_str)
        .collect::<ReportResult<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Validated parameters of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub grid: TimeGrid,
    pub methods: Vec<Method>,
    /// Revival index used by the `revival` column and the schedule.
    pub n: u32,
    pub phase_mode: PhaseMode,
    /// Branch whose saddle fills the `saddle` column.
    pub branch: BranchId,
    /// Contour refinement tolerance override.
    pub tolerance: Option<f64>,
    pub execution: Execution,
}

/// Unvalidated inputs, as they arrive from the command line.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub cutoff: i64,
    pub p: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    pub methods: Vec<Method>,
    pub n: u32,
    pub phase_mode: PhaseMode,
    pub branch: BranchId,
    pub tolerance: Option<f64>,
    pub execution: Execution,
}

impl RunConfig {
    pub fn new(req: RunRequest) -> ReportResult<Self> {
        let params = ModelParams::new(req.cutoff, req.p)?;
        if req.n == 0 {
            return Err(ReportError::Config("revival index n must be at least 1".into()));
        }
        if let Some(tol) = req.tolerance {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(ReportError::Config(format!("tolerance must be positive, got {tol}")));
            }
        }
        let needs_revival = req.methods.contains(&Method::Revival)
            || matches!(req.branch, BranchId::Revival(_)) && req.methods.contains(&Method::Saddle);
        if needs_revival && params.p() == 0.0 {
            return Err(ReportError::Config("revivals are undefined for p = 0".into()));
        }
        if req.methods.contains(&Method::Saddle) && params.alpha().is_none() {
            return Err(ReportError::Config("saddle points are undefined for p = 0".into()));
        }
        let grid = TimeGrid::new(&params, req.t_min, req.t_max, req.count)?;
        let mut methods = req.methods;
        methods.sort();
        methods.dedup();
        Ok(Self {
            params,
            grid,
            methods,
            n: req.n,
            phase_mode: req.phase_mode,
            branch: req.branch,
            tolerance: req.tolerance,
            execution: req.execution,
        })
    }

    fn has(&self, m: Method) -> bool {
        self.methods.contains(&m)
    }

    fn period(&self) -> Option<f64> {
        (self.params.p() > 0.0).then(|| self.params.revival_period())
    }
}

/// One CSV row. `err_*` is `|method − exact|` whenever both are present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub t: f64,
    #[serde(rename = "t_over_T")]
    pub t_over_t: Option<f64>,
    pub exact: Option<f64>,
    pub contour: Option<f64>,
    pub saddle: Option<f64>,
    pub collapse: Option<f64>,
    pub revival: Option<f64>,
    pub err_contour: Option<f64>,
    pub err_saddle: Option<f64>,
    pub err_collapse: Option<f64>,
    pub err_revival: Option<f64>,
}

impl ComparisonRow {
    pub fn value(&self, m: Method) -> Option<f64> {
        match m {
            Method::Exact => self.exact,
            Method::Contour => self.contour,
            Method::Saddle => self.saddle,
            Method::Collapse => self.collapse,
            Method::Revival => self.revival,
        }
    }

    pub fn error(&self, m: Method) -> Option<f64> {
        match m {
            Method::Exact => None,
            Method::Contour => self.err_contour,
            Method::Saddle => self.err_saddle,
            Method::Collapse => self.err_collapse,
            Method::Revival => self.err_revival,
        }
    }

    fn fill_errors(&mut self) {
        let gap = |v: Option<f64>, e: Option<f64>| Some((v? - e?).abs());
        self.err_contour = gap(self.contour, self.exact);
        self.err_saddle = gap(self.saddle, self.exact);
        self.err_collapse = gap(self.collapse, self.exact);
        self.err_revival = gap(self.revival, self.exact);
    }
}

/// Location and height of a method's largest envelope value on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub t: f64,
    #[serde(rename = "t_over_T")]
    pub t_over_t: Option<f64>,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    /// Largest `|method − exact|` over rows where both exist.
    pub sup_error: Option<f64>,
    /// Envelope maximum within the revival window (or the whole grid if no
    /// revival is defined).
    pub peak: Option<Peak>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub cutoff: u32,
    pub p: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    pub n: u32,
    pub phase_mode: PhaseMode,
    pub branch: BranchId,
    pub schedule: Option<RevivalSchedule>,
    pub methods: Vec<MethodSummary>,
}

/// Rows plus per-row envelope values used for the summary.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    envelopes: HashMap<Method, Vec<Option<f64>>>,
}

impl Comparison {
    pub fn summary(&self, cfg: &RunConfig) -> RunSummary {
        let schedule = revival_schedule(&cfg.params, cfg.n).ok();
        let window = schedule.map(|s| {
            let half = REVIVAL_HALF_WINDOW * s.period;
            (s.t_n - half, s.t_n + half)
        });
        let period = cfg.period();
        let methods = cfg
            .methods
            .iter()
            .map(|&m| {
                let sup_error = self
                    .rows
                    .iter()
                    .filter_map(|r| r.error(m))
                    .fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e))));
                let env = &self.envelopes[&m];
                let mut peak: Option<Peak> = None;
                for (row, amp) in self.rows.iter().zip(env) {
                    let Some(amp) = *amp else { continue };
                    if let Some((lo, hi)) = window {
                        if row.t < lo || row.t > hi {
                            continue;
                        }
                    }
                    if peak.is_none_or(|p| amp > p.amplitude) {
                        peak = Some(Peak {
                            t: row.t,
                            t_over_t: period.map(|tt| row.t / tt),
                            amplitude: amp,
                        });
                    }
                }
                MethodSummary {
                    method: m,
                    sup_error,
                    peak,
                }
            })
            .collect();
        RunSummary {
            cutoff: cfg.params.cutoff(),
            p: cfg.params.p(),
            t_min: cfg.grid.start(),
            t_max: cfg.grid.stop(),
            count: cfg.grid.len(),
            n: cfg.n,
            phase_mode: cfg.phase_mode,
            branch: cfg.branch,
            schedule,
            methods,
        }
    }
}

fn numerical(t: f64) -> impl Fn(Error) -> ReportError {
    move |source| ReportError::Numerical { t, source }
}

/// Saddle values and amplitudes on the grid, traced along `cfg.branch`.
fn saddle_column(cfg: &RunConfig) -> ReportResult<Vec<(f64, f64)>> {
    let params = &cfg.params;
    let samples = cfg.grid.samples();
    let mut taus: Vec<f64> = samples.iter().map(|s| s.tau).filter(|&tau| tau > 0.0).collect();
    if let BranchId::Revival(n) = cfg.branch {
        taus.push(revival_schedule(params, n)?.tau_n);
    }
    if taus.is_empty() {
        return Ok(samples.iter().map(|_| (-1.0, 1.0)).collect());
    }
    let traj = trace_branch_at(cfg.branch, &taus, params).map_err(|e| match e {
        Error::Continuation { tau, source } => ReportError::Numerical {
            t: (tau * params.n_f64()).sqrt(),
            source: *source,
        },
        other => ReportError::Numerical {
            t: samples[0].t,
            source: other,
        },
    })?;
    let by_tau: HashMap<u64, usize> = traj
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| (p.tau.to_bits(), k))
        .collect();
    Ok(samples
        .iter()
        .map(|s| {
            if s.tau == 0.0 {
                // φ → 0, f → 1 on the collapse branch
                return (-1.0, 1.0);
            }
            let sp = &traj.points[by_tau[&s.tau.to_bits()]];
            (inversion_saddle(params, *s, sp).value(), saddle_amplitude(params, sp))
        })
        .collect())
}

/// Evaluates every selected method on the configured grid.
pub fn compare(cfg: &RunConfig) -> ReportResult<Comparison> {
    let params = &cfg.params;
    let samples = cfg.grid.samples();
    let exec = cfg.execution;
    let period = cfg.period();
    let mut rows: Vec<ComparisonRow> = samples
        .iter()
        .map(|s| ComparisonRow {
            t: s.t,
            t_over_t: period.map(|tt| s.t / tt),
            exact: None,
            contour: None,
            saddle: None,
            collapse: None,
            revival: None,
            err_contour: None,
            err_saddle: None,
            err_collapse: None,
            err_revival: None,
        })
        .collect();
    let mut envelopes = HashMap::new();

    if cfg.has(Method::Exact) {
        let sum = ExactSum::new(params);
        let vals = sweep::map(samples, exec, |s| (sum.inversion(s.t).value(), sum.envelope(s.t)));
        for (row, (v, _)) in rows.iter_mut().zip(&vals) {
            row.exact = Some(*v);
        }
        envelopes.insert(Method::Exact, vals.iter().map(|(_, e)| Some(*e)).collect());
    }
    if cfg.has(Method::Contour) {
        let tol = cfg.tolerance;
        let vals = sweep::try_map(samples, exec, |s: &ScaledTime| {
            if s.t == 0.0 {
                return Ok(-1.0);
            }
            let mut spec = auto_contour(params, *s).map_err(numerical(s.t))?;
            if let Some(tol) = tol {
                spec = spec.with_tolerance(tol);
            }
            inversion_contour(params, *s, &spec)
                .map(|ev| ev.value.value())
                .map_err(numerical(s.t))
        })?;
        for (row, v) in rows.iter_mut().zip(&vals) {
            row.contour = Some(*v);
        }
        envelopes.insert(Method::Contour, vals.iter().map(|v| Some(v.abs())).collect());
    }
    if cfg.has(Method::Saddle) {
        let vals = saddle_column(cfg)?;
        for (row, (v, _)) in rows.iter_mut().zip(&vals) {
            row.saddle = Some(*v);
        }
        envelopes.insert(Method::Saddle, vals.iter().map(|(_, a)| Some(*a)).collect());
    }
    if cfg.has(Method::Collapse) {
        let vals = sweep::map(samples, exec, |s| {
            (collapse_inversion(params, *s).value(), collapse_envelope(params, s.t))
        });
        for (row, (v, _)) in rows.iter_mut().zip(&vals) {
            row.collapse = Some(*v);
        }
        envelopes.insert(Method::Collapse, vals.iter().map(|(_, e)| Some(*e)).collect());
    }
    if cfg.has(Method::Revival) {
        let sched = revival_schedule(params, cfg.n)?;
        let half = REVIVAL_HALF_WINDOW * sched.period;
        let (n, mode) = (cfg.n, cfg.phase_mode);
        let vals = sweep::try_map(samples, exec, |s: &ScaledTime| -> ReportResult<Option<(f64, f64)>> {
            if (s.t - sched.t_n).abs() > half {
                return Ok(None);
            }
            let v = revival_inversion(params, *s, n, mode).map_err(numerical(s.t))?;
            let e = revival_envelope(params, s.t, n).map_err(numerical(s.t))?;
            Ok(Some((v.value(), e)))
        })?;
        for (row, v) in rows.iter_mut().zip(&vals) {
            row.revival = v.map(|(x, _)| x);
        }
        envelopes.insert(Method::Revival, vals.iter().map(|v| v.map(|(_, e)| e)).collect());
    }
    for row in &mut rows {
        row.fill_errors();
    }
    Ok(Comparison { rows, envelopes })
}

/// Writes rows under [`CSV_HEADER`]; absent values become empty cells.
pub fn write_rows<W: Write>(rows: &[ComparisonRow], out: W) -> ReportResult<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    wr.write_record(CSV_HEADER)?;
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

/// Exact inversion only.
pub fn cmd_exact<W: Write>(cfg: &RunConfig, out: W) -> ReportResult<()> {
    let mut only = cfg.clone();
    only.methods = vec![Method::Exact];
    write_rows(&compare(&only)?.rows, out)
}

/// Comparison of at least two methods; returns the summary for the caller
/// to write wherever it likes.
pub fn cmd_compare<W: Write>(cfg: &RunConfig, out: W) -> ReportResult<RunSummary> {
    if cfg.methods.len() < 2 {
        return Err(ReportError::Config(format!(
            "compare needs at least two methods, got {}",
            cfg.methods.len()
        )));
    }
    let cmp = compare(cfg)?;
    write_rows(&cmp.rows, out)?;
    Ok(cmp.summary(cfg))
}

pub fn write_summary<W: Write>(summary: &impl Serialize, mut out: W) -> ReportResult<()> {
    serde_json::to_writer_pretty(&mut out, summary)?;
    writeln!(out)?;
    Ok(())
}

/// Settings shared by the four first-revival runs.
#[derive(Debug, Clone)]
pub struct Figure1Request {
    pub cutoff: i64,
    pub p_values: Vec<f64>,
    pub count: usize,
    pub execution: Execution,
}

/// Config of one first-revival panel: exact vs the revival formula with
/// the `π/4` phase over `t/T ∈ [0.5, 1.5]`.
pub fn figure1_config(cutoff: i64, p: f64, count: usize, execution: Execution) -> ReportResult<RunConfig> {
    let params = ModelParams::new(cutoff, p)?;
    if p == 0.0 {
        return Err(ReportError::Config("p = 0 has no revival".into()));
    }
    let period = params.revival_period();
    RunConfig::new(RunRequest {
        cutoff,
        p,
        t_min: 0.5 * period,
        t_max: 1.5 * period,
        count,
        methods: vec![Method::Exact, Method::Revival],
        n: 1,
        phase_mode: PhaseMode::QuarterPi,
        branch: BranchId::Collapse,
        tolerance: None,
        execution,
    })
}

pub fn figure1_file_name(p: f64) -> String {
    format!("figure1_p{p}.csv")
}

/// Writes one comparison CSV per `p` into `dir` and returns the summaries.
pub fn cmd_figure1(req: &Figure1Request, dir: &Path) -> ReportResult<Vec<(PathBuf, RunSummary)>> {
    if req.p_values.len() != 4 {
        return Err(ReportError::Config(format!(
            "figure1 needs exactly four p values, got {}",
            req.p_values.len()
        )));
    }
    let configs = req
        .p_values
        .iter()
        .map(|&p| figure1_config(req.cutoff, p, req.count, req.execution))
        .collect::<ReportResult<Vec<_>>>()?;
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::with_capacity(configs.len());
    for cfg in &configs {
        let path = dir.join(figure1_file_name(cfg.params.p()));
        let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        let summary = cmd_compare(cfg, file)?;
        out.push((path, summary));
    }
    Ok(out)
}

/// Saddle trajectory over `steps + 1` evenly spaced τ values.
pub fn cmd_saddle_trace<W: Write>(
    params: &ModelParams,
    branch: BranchId,
    tau_range: (f64, f64),
    steps: usize,
    out: W,
) -> ReportResult<()> {
    let traj = trace_branch(branch, tau_range, params, steps).map_err(|e| match e {
        Error::Continuation { tau, source } => ReportError::Trace { tau, source: *source },
        Error::NoConvergence { tau, .. } | Error::BranchJump { tau, .. } => ReportError::Trace { tau, source: e },
        other => ReportError::Config(other.to_string()),
    })?;
    write_trajectory_csv(&traj, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(p: f64, methods: &[Method]) -> RunRequest {
        RunRequest {
            cutoff: 50,
            p,
            t_min: 0.0,
            t_max: 3.0,
            count: 31,
            methods: methods.to_vec(),
            n: 1,
            phase_mode: PhaseMode::ExactArg,
            branch: BranchId::Collapse,
            tolerance: None,
            execution: Execution::Sequential,
        }
    }

    fn csv_text(cfg: &RunConfig) -> String {
        let mut buf = Vec::new();
        cmd_compare(cfg, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn method_list_parsing() {
        assert_eq!(
            parse_methods("revival, exact,exact").unwrap(),
            vec![Method::Exact, Method::Revival]
        );
        assert!(parse_methods("exact,fourier").is_err());
    }

    #[test]
    fn header_and_empty_cells() {
        let cfg = RunConfig::new(request(0.5, &[Method::Exact, Method::Collapse])).unwrap();
        let text = csv_text(&cfg);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let first = lines.next().unwrap();
        assert!(first.starts_with("0.0,0.0,-1.0,,,-1.0,,,,0.0,"), "{first}");
        assert_eq!(lines.count(), 30);
    }

    #[test]
    fn compare_needs_two_methods() {
        let cfg = RunConfig::new(request(0.5, &[Method::Exact])).unwrap();
        let err = cmd_compare(&cfg, Vec::new()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn invalid_grid_is_a_config_error() {
        let mut req = request(0.5, &[Method::Exact]);
        req.count = 0;
        assert_eq!(RunConfig::new(req).unwrap_err().exit_code(), 2);
        let mut req = request(1.5, &[Method::Exact]);
        req.count = 3;
        assert_eq!(RunConfig::new(req).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn coherent_limit_collapse_is_exact() {
        let cfg = RunConfig::new(request(1.0, &[Method::Exact, Method::Collapse])).unwrap();
        let mut buf = Vec::new();
        let summary = cmd_compare(&cfg, &mut buf).unwrap();
        let collapse = summary.methods.iter().find(|m| m.method == Method::Collapse).unwrap();
        assert!(collapse.sup_error.unwrap() < 1e-12);
    }

    #[test]
    fn revival_column_restricted_to_window() {
        let mut req = request(0.5, &[Method::Exact, Method::Revival]);
        req.t_max = 2.0 * 10.0 * std::f64::consts::PI;
        req.count = 41;
        let cfg = RunConfig::new(req).unwrap();
        let cmp = compare(&cfg).unwrap();
        for row in &cmp.rows {
            let inside = (row.t_over_t.unwrap() - 1.0).abs() <= REVIVAL_HALF_WINDOW;
            assert_eq!(row.revival.is_some(), inside, "t/T = {:?}", row.t_over_t);
            assert_eq!(row.err_revival.is_some(), inside);
        }
    }

    #[test]
    fn sequential_and_parallel_rows_identical() {
        let methods = [Method::Exact, Method::Contour, Method::Collapse, Method::Saddle];
        let seq = RunConfig::new(request(0.4, &methods)).unwrap();
        let mut par = seq.clone();
        par.execution = Execution::Parallel;
        assert_eq!(csv_text(&seq), csv_text(&par));
    }

    #[test]
    fn saddle_column_on_revival_branch() {
        let mut req = request(0.5, &[Method::Exact, Method::Saddle]);
        let period = 10.0 * std::f64::consts::PI;
        req.t_min = 0.8 * period;
        req.t_max = 1.2 * period;
        req.branch = BranchId::Revival(1);
        let cfg = RunConfig::new(req).unwrap();
        let summary = cmd_compare(&cfg, Vec::new()).unwrap();
        let saddle = summary.methods.iter().find(|m| m.method == Method::Saddle).unwrap();
        let peak = saddle.peak.unwrap();
        assert!((peak.t_over_t.unwrap() - 1.0).abs() < 0.02);
    }

    #[test]
    fn figure1_rejects_wrong_p_count() {
        let req = Figure1Request {
            cutoff: 50,
            p_values: vec![0.2, 0.4],
            count: 11,
            execution: Execution::Sequential,
        };
        let err = cmd_figure1(&req, Path::new("/nonexistent")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn saddle_trace_errors() {
        let m = ModelParams::new(50, 0.5).unwrap();
        let err = cmd_saddle_trace(&m, BranchId::Revival(1), (1.0, 2.0), 10, Vec::new()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
