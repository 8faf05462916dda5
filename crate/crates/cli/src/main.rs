//! `isodisp`: displacement reports for generating sets and named reproduction
//! experiments.
//!
//! Exit codes: 0 success, 1 check failure, 2 input error, 3 budget error.

mod experiments;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use isodisp::schema::{parse_input, InputGeometry};
use isodisp::MinimizeOptions;

use experiments::Experiment;
use report::{CheckResult, ExperimentSpec, Invocation, RunReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] isodisp::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        use isodisp::Error as E;
        match self {
            CliError::Core(E::Budget { .. }) => 3,
            CliError::Core(E::RadiusTooSmall { .. } | E::RetryExhausted { .. }) => 1,
            CliError::Core(_) | CliError::Io { .. } => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "isodisp", version, about = "Joint minimal and asymptotic displacement of isometry sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full displacement report for a generating set read from JSON.
    Analyze(AnalyzeArgs),
    /// Run a named reproduction experiment.
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GeometryArg {
    TreeFree,
    TreePadic,
    H2,
    Euclidean,
    PdMatrix,
}

impl From<GeometryArg> for InputGeometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::TreeFree => InputGeometry::TreeFree,
            GeometryArg::TreePadic => InputGeometry::TreePadic,
            GeometryArg::H2 => InputGeometry::H2,
            GeometryArg::Euclidean => InputGeometry::Euclidean,
            GeometryArg::PdMatrix => InputGeometry::PdMatrix,
        }
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Write CSV plot data into this directory.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Record wall time in the report (makes reports differ between runs).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long, value_enum)]
    geometry: GeometryArg,
    #[arg(long)]
    input: PathBuf,
    /// Largest power `k` for `lambda_k` and the bracket `L(S^k) / k`.
    #[arg(long, default_value_t = 4)]
    powers: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ReproArgs {
    #[command(subcommand)]
    experiment: Experiment,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

fn analyze(args: &AnalyzeArgs) -> Result<(RunReport, Vec<report::Series>), CliError> {
    if !(1..=16).contains(&args.powers) {
        return Err(isodisp::Error::Parameter(format!("--powers must lie in 1..=16, got {}", args.powers)).into());
    }
    let geometry: InputGeometry = args.geometry.into();
    let text = fs::read_to_string(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let parsed = parse_input(&text, Some(geometry))?;
    let disp = parsed.report(args.powers, &MinimizeOptions::default())?;
    let mut run = RunReport::new(Invocation::Analyze {
        geometry: geometry.name().into(),
        input: args.input.display().to_string(),
        powers: args.powers,
    });
    run.checks = disp
        .inequality_slacks
        .iter()
        .map(|s| CheckResult::new(s.name.clone(), s.slack, s.tolerance))
        .collect();
    run.note("elements", parsed.len());
    let mut series = report::Series::new("lambda", &["k", "lambda_k"]);
    for (k, v) in &disp.lambda_values {
        series.push(row![k, v]);
    }
    run.displacement = Some(disp);
    Ok((run, vec![series]))
}

fn repro(args: &ReproArgs) -> Result<(RunReport, Vec<report::Series>), CliError> {
    let parameters = match args.experiment.parameters() {
        serde_json::Value::Object(m) => m.into_iter().collect(),
        _ => Default::default(),
    };
    let mut run = RunReport::new(Invocation::Repro(ExperimentSpec {
        name: args.experiment.name().into(),
        parameters,
        seed: args.seed,
    }));
    let series = args.experiment.run(args.seed, &mut run)?;
    Ok((run, series))
}

fn emit(run: &RunReport, series: &[report::Series], out: &Output) -> Result<(), CliError> {
    if let Some(dir) = &out.csv {
        for s in series {
            s.write(dir)?;
        }
    }
    let json = run.to_json();
    match &out.report {
        Some(path) => fs::write(path, json).map_err(|e| CliError::io(path, e)),
        None => io::stdout()
            .write_all(json.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (result, output) = match &cli.command {
        Command::Analyze(a) => (analyze(a), &a.output),
        Command::Repro(r) => (repro(r), &r.output),
    };
    let outcome = result.and_then(|(mut run, series)| {
        if output.timing {
            run.wall_time_seconds = Some(start.elapsed().as_secs_f64());
        }
        emit(&run, &series, output)?;
        Ok(run)
    });
    match outcome {
        Ok(run) => {
            for c in run.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {} (slack {:e}, tolerance {:e})", c.name, c.slack, c.tolerance);
            }
            ExitCode::from(if run.all_passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_report_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("pd.json");
        fs::write(
            &input,
            r#"{"geometry": "pd-matrix", "version": 1, "matrices": [{"mode": "float", "rows": [[2, 1], [0, 0.5]]}, {"mode": "exact-int", "rows": [[1, 0], [3, 1]]}]}"#,
        )
        .unwrap();
        let args = AnalyzeArgs {
            geometry: GeometryArg::PdMatrix,
            input,
            powers: 3,
            output: Output {
                report: None,
                csv: None,
                timing: false,
            },
        };
        let (run, series) = analyze(&args).unwrap();
        let back: RunReport = serde_json::from_str(&run.to_json()).unwrap();
        assert_eq!(back, run);
        assert_eq!(series[0].rows.len(), 3);
    }
}
