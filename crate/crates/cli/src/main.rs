use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jcrevival::asymptotics::PhaseMode;
use jcrevival::report::{
    self, parse_methods, write_summary, Figure1Request, Method, ReportError, ReportResult, RunConfig, RunRequest,
};
use jcrevival::saddle::BranchId;
use jcrevival::{Execution, ModelParams};

/// Atomic inversion of the Jaynes-Cummings model with a binomial field.
#[derive(Parser, Debug)]
#[command(name = "jcrevival", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact inversion on a time grid.
    Exact(GridArgs),
    /// Compare two or more methods against each other on a time grid.
    Compare(CompareArgs),
    /// Exact sum vs the first-revival formula for four photon probabilities.
    Figure1(Figure1Args),
    /// Saddle-point trajectory W(tau) on one branch.
    SaddleTrace(TraceArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Photon-number cutoff N.
    #[arg(long = "N", default_value_t = 50)]
    cutoff: i64,
    /// Binomial probability p.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Grid start; a `T` suffix means multiples of the revival period (e.g. `0.5T`).
    #[arg(long, default_value = "0")]
    t_min: String,
    /// Grid end; accepts a `T` suffix like --t-min.
    #[arg(long, default_value = "2T")]
    t_max: String,
    /// Number of grid points (endpoints included).
    #[arg(long, default_value_t = 500)]
    count: usize,
    /// Evaluate on one thread.
    #[arg(long)]
    sequential: bool,
    /// Output CSV file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Comma-separated list from exact, contour, saddle, collapse, revival.
    #[arg(long, default_value = "exact,collapse,revival")]
    methods: String,
    /// Revival index used by the revival column and summary schedule.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Constant phase term of the revival formula.
    #[arg(long, default_value = "exact_arg")]
    phase_mode: String,
    /// Saddle branch for the saddle column: collapse or revival (index --n).
    #[arg(long, default_value = "collapse")]
    branch: String,
    /// Contour refinement tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Summary JSON file; standard error if omitted.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Figure1Args {
    /// Photon-number cutoff N.
    #[arg(long = "N", default_value_t = 50)]
    cutoff: i64,
    /// Exactly four comma-separated probabilities.
    #[arg(long, default_value = "0.2,0.4,0.6,0.8")]
    p_list: String,
    /// Points per curve over t/T in [0.5, 1.5].
    #[arg(long, default_value_t = 2001)]
    count: usize,
    #[arg(long)]
    sequential: bool,
    /// Output directory for the four CSV files and the summary.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// collapse or revival.
    #[arg(long, default_value = "collapse")]
    branch: String,
    /// Revival index.
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 1e-4)]
    tau_min: f64,
    #[arg(long, default_value_t = 0.1)]
    tau_max: f64,
    /// Number of steps; the trajectory has steps + 1 points.
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config_error(e: impl ToString) -> ReportError {
    ReportError::Config(e.to_string())
}

/// Parses a time, optionally in units of the revival period (`1.5T`).
fn parse_time(s: &str, params: &ModelParams) -> ReportResult<f64> {
    let s = s.trim();
    let bad = || config_error(format!("cannot parse time '{s}'"));
    match s.strip_suffix('T') {
        Some(mult) => {
            if params.p() == 0.0 {
                return Err(config_error("period-relative times need p > 0"));
            }
            let m: f64 = mult.trim().parse().map_err(|_| bad())?;
            Ok(m * params.revival_period())
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn parse_branch(name: &str, n: u32) -> ReportResult<BranchId> {
    match name {
        "collapse" => Ok(BranchId::Collapse),
        "revival" => BranchId::revival(n).map_err(config_error),
        other => Err(config_error(format!("unknown branch '{other}'"))),
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn open_out(path: &Option<PathBuf>) -> ReportResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_config(grid: &GridArgs, methods: Vec<Method>, extra: Option<&CompareArgs>) -> ReportResult<RunConfig> {
    let params = ModelParams::new(grid.model.cutoff, grid.model.p).map_err(config_error)?;
    let (n, phase_mode, branch, tolerance) = match extra {
        Some(c) => (
            c.n,
            c.phase_mode.parse::<PhaseMode>().map_err(config_error)?,
            parse_branch(&c.branch, c.n)?,
            c.tol,
        ),
        None => (1, PhaseMode::default(), BranchId::Collapse, None),
    };
    RunConfig::new(RunRequest {
        cutoff: grid.model.cutoff,
        p: grid.model.p,
        t_min: parse_time(&grid.t_min, &params)?,
        t_max: parse_time(&grid.t_max, &params)?,
        count: grid.count,
        methods,
        n,
        phase_mode,
        branch,
        tolerance,
        execution: execution(grid.sequential),
    })
}

fn run(cli: Cli) -> ReportResult<()> {
    match cli.command {
        Command::Exact(args) => {
            let cfg = run_config(&args, vec![Method::Exact], None)?;
            let mut out = open_out(&args.out)?;
            report::cmd_exact(&cfg, &mut out)?;
            out.flush()?;
        }
        Command::Compare(args) => {
            let methods = parse_methods(&args.methods)?;
            let cfg = run_config(&args.grid, methods, Some(&args))?;
            let mut out = open_out(&args.grid.out)?;
            let summary = report::cmd_compare(&cfg, &mut out)?;
            out.flush()?;
            match &args.summary {
                Some(path) => write_summary(&summary, BufWriter::new(File::create(path)?))?,
                None => write_summary(&summary, io::stderr().lock())?,
            }
        }
        Command::Figure1(args) => {
            let p_values = args
                .p_list
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| config_error(format!("bad --p-list: {e}")))?;
            let req = Figure1Request {
                cutoff: args.cutoff,
                p_values,
                count: args.count,
                execution: execution(args.sequential),
            };
            let results = report::cmd_figure1(&req, &args.out)?;
            let summaries: Vec<_> = results.iter().map(|(_, s)| s).collect();
            let path = args.out.join("figure1_summary.json");
            write_summary(&summaries, BufWriter::new(File::create(path)?))?;
            for (path, _) in &results {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::SaddleTrace(args) => {
            let params = ModelParams::new(args.model.cutoff, args.model.p).map_err(config_error)?;
            let branch = parse_branch(&args.branch, args.n)?;
            let mut out = open_out(&args.out)?;
            report::cmd_saddle_trace(&params, branch, (args.tau_min, args.tau_max), args.steps, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
