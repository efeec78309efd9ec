//! Command-line front end and file formats.
//!
//! * Series CSV: a header row and either a single `value` column or
//!   `time,value` columns.
//! * Models: [`FittedModel`] as JSON.
//! * Outputs: CSV with numbers in shortest round-trip decimal form.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::estimation::{self, FitConfig};
use crate::series::{FittedModel, SarimaOrder, TimeSeries};
use crate::sim::{self, QuantileTable, SimulationEnsemble, SimulationRequest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sarima",
    version,
    about = "Fit seasonal ARIMA models, forecast, and simulate random continuations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to a series CSV and write the model JSON.
    Fit(FitArgs),
    /// Point forecasts from a model JSON.
    Forecast(ForecastArgs),
    /// Random continuations of the series conditional on the observed data.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Series CSV (`-` for stdin).
    pub input: PathBuf,
    /// Model orders: `p d q` or `p d q P D Q`.
    #[arg(long, num_args = 3..=6, required = true, value_name = "N")]
    pub order: Vec<usize>,
    /// Season length.
    #[arg(long = "s", alias = "period", default_value_t = 1)]
    pub s: usize,
    /// Time of the first observation when the CSV has no time column.
    #[arg(long)]
    pub start: Option<f64>,
    /// Observations per unit of time (12 for monthly data).
    #[arg(long)]
    pub frequency: Option<u32>,
    /// Estimate a process mean (default: only when there is no differencing).
    #[arg(long, conflicts_with = "no_mean")]
    pub mean: bool,
    #[arg(long)]
    pub no_mean: bool,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// Skip optimization and use these coefficients
    /// (`phi, theta, sphi, stheta[, mean]`, comma separated).
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        requires = "sigma2"
    )]
    pub fixed: Option<Vec<f64>>,
    /// Innovation variance for `--fixed`.
    #[arg(long, requires = "fixed")]
    pub sigma2: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ForecastArgs {
    /// Model JSON (`-` for stdin).
    pub model: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub horizon: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model JSON (`-` for stdin).
    pub model: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub horizon: usize,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    #[arg(long, env = "SARIMA_SEED")]
    pub seed: Option<u64>,
    /// Emit per-horizon quantiles instead of the path matrix.
    #[arg(long, value_delimiter = ',')]
    pub quantiles: Option<Vec<f64>>,
    /// Use zero innovations (reproduces the forecast).
    #[arg(long)]
    pub zero_innovations: bool,
    /// Long format `path,time,value,forecast,ensemble_mean` for plotting.
    #[arg(long, conflicts_with = "quantiles")]
    pub plot_data: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Metadata for series files without a complete time base.
#[derive(Debug, Clone, Copy, Default)]
pub struct SeriesMeta {
    pub start: Option<f64>,
    pub frequency: Option<u32>,
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v}")
}

fn parse_num(field: &str, row: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("row {row}: `{field}` is not a number")))
}

/// Reads a series CSV.
pub fn read_series<R: Read>(reader: R, meta: SeriesMeta) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.to_ascii_lowercase())
        .collect();
    let records = rdr.records().collect::<std::result::Result<Vec<_>, _>>()?;
    if records.is_empty() {
        return Err(Error::SeriesTooShort(
            "the CSV contains no observations".into(),
        ));
    }

    let value_col = match headers.iter().position(|h| h == "value") {
        Some(i) => i,
        None if headers.len() == 1 => 0,
        None => return Err(Error::Parse("expected a `value` column".into())),
    };
    let time_col = headers.iter().position(|h| h == "time");

    let mut values = Vec::with_capacity(records.len());
    let mut times = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let row = i + 2;
        let field = rec
            .get(value_col)
            .ok_or_else(|| Error::Parse(format!("row {row}: missing value")))?;
        values.push(parse_num(field, row)?);
        if let Some(tc) = time_col {
            let field = rec
                .get(tc)
                .ok_or_else(|| Error::Parse(format!("row {row}: missing time")))?;
            times.push(parse_num(field, row)?);
        }
    }

    let (start, frequency) = if times.is_empty() {
        (meta.start.unwrap_or(1.0), meta.frequency.unwrap_or(1))
    } else {
        let frequency = match meta.frequency {
            Some(f) => f,
            None if times.len() >= 2 => {
                let step = times[1] - times[0];
                if step.is_nan() || step <= 0.0 {
                    return Err(Error::Parse(
                        "time column must be strictly increasing".into(),
                    ));
                }
                (1.0 / step).round().max(1.0) as u32
            }
            None => 1,
        };
        let start = meta.start.unwrap_or(times[0]);
        let step = 1.0 / f64::from(frequency);
        for (k, t) in times.iter().enumerate() {
            let want = times[0] + k as f64 * step;
            if (t - want).abs() > 1e-6 * step.max(t.abs() * 1e-3) + 1e-9 {
                return Err(Error::Parse(format!(
                    "time column is not equally spaced at frequency {frequency} (row {})",
                    k + 2
                )));
            }
        }
        (start, frequency)
    };
    TimeSeries::new(values, start, frequency)
}

/// Emits a series as `time,value` CSV.
pub fn write_series(ts: &TimeSeries) -> String {
    let mut out = String::from("time,value\n");
    for (k, v) in ts.values().iter().enumerate() {
        out.push_str(&format!("{},{}\n", fmt_num(ts.time_at(k)), fmt_num(*v)));
    }
    out
}

pub fn model_to_json(fitted: &FittedModel) -> Result<String> {
    let mut s = serde_json::to_string_pretty(fitted)?;
    s.push('\n');
    Ok(s)
}

pub fn model_from_json(text: &str) -> Result<FittedModel> {
    Ok(serde_json::from_str(text)?)
}

/// `time,forecast` CSV.
pub fn forecast_csv(fitted: &FittedModel, values: &[f64]) -> String {
    let data = fitted.data();
    let mut out = String::from("time,forecast\n");
    for (h, v) in values.iter().enumerate() {
        out.push_str(&format!(
            "{},{}\n",
            fmt_num(data.time_at(data.len() + h)),
            fmt_num(*v)
        ));
    }
    out
}

/// `time,path_1,...,path_n` CSV, one row per horizon.
pub fn ensemble_csv(e: &SimulationEnsemble) -> String {
    let mut out = String::from("time");
    for r in 1..=e.n_paths() {
        out.push_str(&format!(",path_{r}"));
    }
    out.push('\n');
    for (h, row) in e.rows().enumerate() {
        out.push_str(&fmt_num(e.time(h)));
        for v in row {
            out.push(',');
            out.push_str(&fmt_num(*v));
        }
        out.push('\n');
    }
    out
}

/// `time,mean,sd,q<p>...` CSV.
pub fn quantile_csv(e: &SimulationEnsemble, table: &QuantileTable) -> String {
    let mut out = String::from("time,mean,sd");
    for p in &table.probabilities {
        out.push_str(&format!(",q{}", fmt_num(*p)));
    }
    out.push('\n');
    for (h, row) in table.rows.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}",
            fmt_num(e.time(h)),
            fmt_num(e.mean()[h]),
            fmt_num(e.sd()[h])
        ));
        for v in row {
            out.push(',');
            out.push_str(&fmt_num(*v));
        }
        out.push('\n');
    }
    out
}

/// Long format for plotting: one row per path and horizon.
pub fn plot_data_csv(e: &SimulationEnsemble, forecast: &[f64]) -> String {
    let mut out = String::from("path,time,value,forecast,ensemble_mean\n");
    for r in 0..e.n_paths() {
        for (h, fc) in forecast.iter().enumerate().take(e.horizon()) {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r + 1,
                fmt_num(e.time(h)),
                fmt_num(e.value(h, r)),
                fmt_num(*fc),
                fmt_num(e.mean()[h])
            ));
        }
    }
    out
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn order_from_args(args: &FitArgs) -> Result<SarimaOrder> {
    let o = &args.order;
    let order = match o.len() {
        3 => SarimaOrder::new(o[0], o[1], o[2], 0, 0, 0, args.s),
        6 => SarimaOrder::new(o[0], o[1], o[2], o[3], o[4], o[5], args.s),
        n => {
            return Err(Error::InvalidRequest(format!(
                "--order takes 3 or 6 integers, got {n}"
            )))
        }
    };
    if args.s == 0 {
        return Err(Error::InvalidRequest("--s must be at least 1".into()));
    }
    Ok(order)
}

/// Runs `fit`; returns the model JSON and any fit warnings.
pub fn cmd_fit(args: &FitArgs) -> Result<(String, Vec<String>)> {
    let order = order_from_args(args)?;
    let text = read_input(&args.input)?;
    let series = read_series(
        text.as_bytes(),
        SeriesMeta {
            start: args.start,
            frequency: args.frequency,
        },
    )?;
    let fitted = match (&args.fixed, args.sigma2) {
        (Some(coefs), Some(sigma2)) => estimation::load_model(coefs, order, sigma2, series)?,
        _ => {
            let include_mean = match (args.mean, args.no_mean) {
                (true, _) => Some(true),
                (_, true) => Some(false),
                _ => None,
            };
            let cfg = FitConfig {
                max_iterations: args.max_iterations,
                tolerance: args.tolerance,
                include_mean,
                initial_coefficients: None,
            };
            estimation::fit(&series, order, &cfg)?
        }
    };
    let warnings = fitted.fit_info().warnings.clone();
    Ok((model_to_json(&fitted)?, warnings))
}

pub fn cmd_forecast(args: &ForecastArgs) -> Result<String> {
    let fitted = model_from_json(&read_input(&args.model)?)?;
    let values = sim::forecast(&fitted, args.horizon)?;
    Ok(forecast_csv(&fitted, &values))
}

fn run_ensemble(
    fitted: &FittedModel,
    req: &SimulationRequest,
    threads: Option<usize>,
) -> Result<SimulationEnsemble> {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidRequest(format!("cannot start {n} threads: {e}")))?;
        return pool.install(|| sim::simulate_ensemble(fitted, req));
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    sim::simulate_ensemble(fitted, req)
}

/// Runs `simulate`; returns the CSV and the seed that was used.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<(String, Option<u64>)> {
    if args.threads == Some(0) {
        return Err(Error::InvalidRequest("--threads must be at least 1".into()));
    }
    let fitted = model_from_json(&read_input(&args.model)?)?;
    let req = if args.zero_innovations {
        if args.paths != 1 {
            return Err(Error::InvalidRequest(
                "--zero-innovations requires --paths 1".into(),
            ));
        }
        SimulationRequest::zero_innovations(args.horizon)?
    } else {
        SimulationRequest::new(args.horizon, args.paths, args.seed)?
    };
    if let Some(qs) = &args.quantiles {
        if let Some(&bad) = qs.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return Err(Error::InvalidProbability(bad));
        }
    }
    let ensemble = run_ensemble(&fitted, &req, args.threads)?;
    let csv = if args.plot_data {
        let fc = sim::forecast(&fitted, args.horizon)?;
        plot_data_csv(&ensemble, &fc)
    } else if let Some(qs) = &args.quantiles {
        quantile_csv(&ensemble, &sim::ensemble_summary(&ensemble, qs)?)
    } else {
        ensemble_csv(&ensemble)
    };
    Ok((csv, ensemble.seed()))
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidRequest(_) | Error::HorizonZero | Error::InvalidProbability(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn emit(text: &str, output: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Entry point shared by the binary and the tests. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };

    let result = match &cli.command {
        Command::Fit(args) => cmd_fit(args).and_then(|(json, warnings)| {
            for w in warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            emit(&json, args.output.as_deref(), stdout)
        }),
        Command::Forecast(args) => {
            cmd_forecast(args).and_then(|csv| emit(&csv, args.output.as_deref(), stdout))
        }
        Command::Simulate(args) => cmd_simulate(args).and_then(|(csv, seed)| {
            if args.seed.is_none() {
                if let Some(seed) = seed {
                    let _ = writeln!(stderr, "seed: {seed}");
                }
            }
            emit(&csv, args.output.as_deref(), stdout)
        }),
    };

    match result {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            exit_code(&err)
        }
    }
}
