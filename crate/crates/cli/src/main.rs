//! `latreg`: lattice measures, means, Cramer's-rule fits, rotation
//! comparison and Monte Carlo checks from the command line.
//!
//! Exit status: 0 success, 2 usage or parse error, 3 data error,
//! 4 singular system.

use std::fs::File;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latreg::dataio::{self, ColumnSelection, Format, Report, RotationReport};
use latreg::formula::{caret, parse_model};
use latreg::simulate::{self, SimulationConfig};
use latreg::{
    fit, fit_all_rotations, randomly_weighted_mean, residual_report, self_weighting_mean,
    standard_mean, Dataset64, Direction, Error, Lattice64,
};

const MODEL_HELP: &str = "Model expression: `<lhs> = <term> (+ <term>)*`.
<lhs> is `1` or a column; each <term> is `1`, a column, or a product such as `x*y`.
`1` as the left side fits a non-response model, e.g. \"1 = x + y\".
Unity is never added implicitly: write \"y = 1 + x\" for an intercept.";

#[derive(Parser, Debug)]
#[command(name = "latreg", version, about = "Lattice-design regression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print vertex sums and the variance, covariance, internal covariance
    /// and base variance determinants (with their Δ/n² scalings).
    Measures(ColumnArgs),
    /// Standard, self-weighting and cross-weighted means of each column.
    Means(ColumnArgs),
    /// Fit a single model by Cramer's rule.
    #[command(after_help = MODEL_HELP)]
    Fit(FitArgs),
    /// Fit every rotation of unity plus the columns and compare their SSE.
    Rotate(ColumnArgs),
    /// Seeded Monte Carlo: weighted means against the standard mean.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// CSV file with a header row, or `-` for stdin.
    #[arg(long)]
    input: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Args, Debug)]
struct ColumnArgs {
    #[command(flatten)]
    io: InputArgs,
    /// Two or three column names, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    columns: Vec<String>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    io: InputArgs,
    /// Model expression, e.g. "1 = x + y" or "y = 1 + x".
    #[arg(long)]
    model: String,
    /// Also list per-row residuals.
    #[arg(long)]
    residuals: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 100.0)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Singular(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 3,
            Failure::Singular(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Singular(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Precondition(_) => Failure::Usage(e.to_string()),
            Error::Singular { .. } => Failure::Singular(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

type Outcome = Result<(Vec<u8>, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((bytes, code)) => {
            let mut out = io::stdout().lock();
            if out.write_all(&bytes).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Measures(args) => measures(args),
        Command::Means(args) => means(args),
        Command::Fit(args) => fit_model(args),
        Command::Rotate(args) => rotate(args),
        Command::Simulate(args) => simulation(args),
    }
}

fn check_columns(columns: &[String]) -> Result<Vec<Direction>, Failure> {
    if !(2..=3).contains(&columns.len()) {
        return Err(Failure::Usage(format!(
            "--columns takes 2 or 3 names, got {}",
            columns.len()
        )));
    }
    let mut dirs = Vec::new();
    for name in columns {
        if name.is_empty() || name == "1" {
            return Err(Failure::Usage(format!("`{name}` is not a column name")));
        }
        let d = Direction::column(name.as_str());
        if dirs.contains(&d) {
            return Err(Failure::Usage(format!("column `{name}` given twice")));
        }
        dirs.push(d);
    }
    Ok(dirs)
}

fn load(input: &str, selection: &ColumnSelection) -> Result<Dataset64, Failure> {
    let reader: Box<dyn Read> = if input == "-" {
        Box::new(io::stdin().lock())
    } else {
        Box::new(File::open(input).map_err(|e| Failure::Data(format!("{input}: {e}")))?)
    };
    Ok(dataio::read_csv(reader, selection)?)
}

fn emit(report: &Report, format: OutputFormat) -> Result<Vec<u8>, Failure> {
    Ok(dataio::write_report(report, format.into())?)
}

fn measures(args: ColumnArgs) -> Outcome {
    let columns = check_columns(&args.columns)?;
    let data = load(&args.io.input, &ColumnSelection::new(&args.columns))?;
    let mut dirs = vec![Direction::unity()];
    dirs.extend(columns.iter().cloned());
    let lattice = Lattice64::build(&data, &dirs)?;
    let report = Report {
        measures: dataio::measure_catalog(&lattice, &columns, true)?,
        rotations: Vec::new(),
    };
    Ok((emit(&report, args.io.format)?, 0))
}

fn means(args: ColumnArgs) -> Outcome {
    check_columns(&args.columns)?;
    let data = load(&args.io.input, &ColumnSelection::new(&args.columns))?;
    let mut report = Report::default();
    for c in &args.columns {
        report
            .measures
            .insert(format!("mean_{c}"), standard_mean(&data, c)?);
        report
            .measures
            .insert(format!("self_weighting_mean_{c}"), self_weighting_mean(&data, c)?);
        for w in args.columns.iter().filter(|w| *w != c) {
            report.measures.insert(
                format!("weighted_mean_{c}_by_{w}"),
                randomly_weighted_mean(&data, c, w)?,
            );
        }
    }
    Ok((emit(&report, args.io.format)?, 0))
}

fn fit_model(args: FitArgs) -> Outcome {
    let spec = parse_model(&args.model).map_err(|e| match e {
        Error::Parse { position, .. } => {
            Failure::Usage(format!("{e}\n{}", caret(&args.model, position)))
        }
        other => Failure::from(other),
    })?;
    let mut names: Vec<String> = Vec::new();
    for d in std::iter::once(spec.response()).chain(spec.regressors()) {
        for f in d.factors() {
            if !names.contains(f) {
                names.push(f.clone());
            }
        }
    }
    let data = if names.is_empty() {
        return Err(Failure::Usage("model references no columns".into()));
    } else {
        load(&args.io.input, &ColumnSelection::new(names))?
    };
    let result = fit(&data, &spec)?;
    let residuals = residual_report(&result, &data)?;

    let mut report = Report {
        measures: Default::default(),
        rotations: vec![RotationReport::from_fit(&result)],
    };
    report.measures.insert("n".into(), data.n() as f64);
    report.measures.insert("sse".into(), residuals.sse);
    if let Some(system) = residuals.system_error {
        report.measures.insert("system_error".into(), system);
    }
    if args.residuals {
        for (i, r) in residuals.residuals.iter().enumerate() {
            report.measures.insert(format!("residual_{}", i + 1), *r);
        }
    }
    Ok((emit(&report, args.io.format)?, 0))
}

fn rotate(args: ColumnArgs) -> Outcome {
    let columns = check_columns(&args.columns)?;
    let data = load(&args.io.input, &ColumnSelection::new(&args.columns))?;
    let mut dirs = vec![Direction::unity()];
    dirs.extend(columns.iter().cloned());
    let rotations = fit_all_rotations(&data, &dirs)?;
    let any_ok = rotations.iter().any(|r| r.outcome.is_ok());
    let report = Report {
        measures: Default::default(),
        rotations: rotations.iter().map(RotationReport::from_rotation).collect(),
    };
    Ok((emit(&report, args.io.format)?, if any_ok { 0 } else { 4 }))
}

fn simulation(args: SimulateArgs) -> Outcome {
    let config = SimulationConfig {
        seed: args.seed,
        n: args.n,
        mu: args.mu,
        sigma: args.sigma,
        trials: args.trials,
    };
    config.validate()?;
    let result = simulate::run(&config)?;
    let mut report = Report::default();
    let m = &mut report.measures;
    m.insert("max_weighted_deviation".into(), result.max_weighted_deviation);
    m.insert("mean_weighted_deviation".into(), result.mean_weighted_deviation);
    m.insert(
        "max_self_weighting_deviation".into(),
        result.max_self_weighting_deviation,
    );
    m.insert(
        "mean_self_weighting_deviation".into(),
        result.mean_self_weighting_deviation,
    );
    Ok((emit(&report, args.format)?, 0))
}
