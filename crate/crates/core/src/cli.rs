//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 validation error (including an
//! unresolvable scenario reference), 4 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{compare, summarize, sweep, write_csv, write_sweep_csv, SweepError};
use crate::scenario::{
    self, parse_scenario, render_scenario, BuiltinScenario, ScenarioError, ScenarioSpec,
};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_IO: i32 = 4;

const RANGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "tdsim",
    version,
    about = "Technical-debt maintenance policy simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario; CSV goes to --output or stdout, the summary to stderr.
    Run {
        /// Built-in id (s1, s2) or path to a scenario file.
        scenario: String,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run two scenarios with identical overrides and compare their outcomes.
    Compare {
        a: String,
        b: String,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a scenario once per value of one numeric parameter.
    Sweep {
        scenario: String,
        /// Parameter path, e.g. params.refactoring_effort_necessary.
        #[arg(value_name = "PARAM", conflicts_with = "param")]
        param_arg: Option<String>,
        /// "v1,v2,..." or "start:stop:step" (endpoints inclusive).
        #[arg(
            value_name = "VALUES",
            conflicts_with = "values",
            allow_hyphen_values = true
        )]
        values_arg: Option<String>,
        #[arg(long)]
        param: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List built-in scenarios, or print one as a scenario document.
    Scenarios {
        #[arg(long, value_name = "ID")]
        show: Option<String>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Integration step in months.
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    /// Run length in months.
    #[arg(long, allow_negative_numbers = true)]
    pub horizon: Option<f64>,
    /// Recording interval in months.
    #[arg(long, allow_negative_numbers = true)]
    pub record_every: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Validation(_) => EXIT_VALIDATION,
            Self::Io(_) => EXIT_IO,
        }
    }
}

/// Parses `args` (including the program name), executes, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return e.exit_code();
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Run {
            scenario,
            overrides,
            output,
        } => cmd_run(&scenario, &overrides, output.as_deref(), stdout, stderr),
        Command::Compare {
            a,
            b,
            overrides,
            format,
            output,
        } => cmd_compare(&a, &b, &overrides, format, output.as_deref(), stdout),
        Command::Sweep {
            scenario,
            param_arg,
            values_arg,
            param,
            values,
            overrides,
            output,
        } => {
            let param = param.or(param_arg).ok_or_else(|| {
                CliError::Usage("sweep needs a parameter path (PARAM or --param)".into())
            })?;
            let values = values
                .or(values_arg)
                .ok_or_else(|| CliError::Usage("sweep needs values (VALUES or --values)".into()))?;
            cmd_sweep(
                &scenario,
                &param,
                &values,
                &overrides,
                output.as_deref(),
                stdout,
            )
        }
        Command::Scenarios { show } => cmd_scenarios(show.as_deref(), stdout),
    }
}

pub fn cmd_run(
    scenario: &str,
    overrides: &Overrides,
    output: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let spec = apply_overrides(resolve_scenario(scenario)?, overrides)?;
    let run = spec
        .run()
        .map_err(|e| CliError::Validation(format!("{}: {e}", spec.name)))?;
    let mut csv = Vec::new();
    write_csv(&run, &mut csv).map_err(|e| CliError::Io(e.to_string()))?;
    emit(output, &csv, stdout)?;
    let metrics = summarize(&run).map_err(|e| CliError::Validation(e.to_string()))?;
    write!(stderr, "scenario {}\n{}", spec.name, metrics.render_text()).map_err(io_error)?;
    Ok(())
}

pub fn cmd_compare(
    a: &str,
    b: &str,
    overrides: &Overrides,
    format: ReportFormat,
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let spec_a = apply_overrides(resolve_scenario(a)?, overrides)?;
    let spec_b = apply_overrides(resolve_scenario(b)?, overrides)?;
    let mut metrics = Vec::with_capacity(2);
    for spec in [&spec_a, &spec_b] {
        let run = spec
            .run()
            .map_err(|e| CliError::Validation(format!("{}: {e}", spec.name)))?;
        metrics.push(summarize(&run).map_err(|e| CliError::Validation(e.to_string()))?);
    }
    let report = compare(&metrics[0], &metrics[1])
        .map_err(|e| CliError::Validation(e.to_string()))?
        .with_labels(spec_a.name.clone(), spec_b.name.clone());
    let text = match format {
        ReportFormat::Text => report.render_text(),
        ReportFormat::Json => report.render_json(),
    };
    emit(output, text.as_bytes(), stdout)
}

pub fn cmd_sweep(
    scenario: &str,
    param: &str,
    values: &str,
    overrides: &Overrides,
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let values = parse_range(values).map_err(CliError::Usage)?;
    let spec = apply_overrides(resolve_scenario(scenario)?, overrides)?;
    let table = sweep(&spec, param, &values).map_err(|e| match e {
        SweepError::Path(inner) => CliError::Usage(inner.to_string()),
        other => CliError::Validation(format!("sweep of {param}: {other}")),
    })?;
    let mut csv = Vec::new();
    write_sweep_csv(&table, &mut csv).map_err(|e| CliError::Io(e.to_string()))?;
    emit(output, &csv, stdout)
}

pub fn cmd_scenarios(show: Option<&str>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match show {
        Some(id) => {
            let spec =
                scenario::builtin_scenario(id).map_err(|e| CliError::Validation(e.to_string()))?;
            stdout
                .write_all(render_scenario(&spec).as_bytes())
                .map_err(io_error)
        }
        None => {
            for b in BuiltinScenario::ALL {
                writeln!(stdout, "{:<4} {}", b.id(), b.title()).map_err(io_error)?;
            }
            Ok(())
        }
    }
}

/// A built-in id, or otherwise a path to a scenario file.
pub fn resolve_scenario(reference: &str) -> Result<ScenarioSpec, CliError> {
    if let Ok(builtin) = reference.parse::<BuiltinScenario>() {
        return Ok(builtin.spec());
    }
    let path = Path::new(reference);
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            return Err(CliError::Validation(format!(
                "scenario `{reference}` is not a built-in id (s1, s2) and no such file exists"
            )))
        }
        Err(e) => return Err(CliError::Io(format!("cannot read {reference}: {e}"))),
    };
    let mut spec = parse_scenario(&text).map_err(|e| match e {
        ScenarioError::Syntax { .. }
        | ScenarioError::Validation(_)
        | ScenarioError::UnknownScenario(_) => CliError::Validation(format!("{reference}: {e}")),
        ScenarioError::UnknownPath(_) => CliError::Usage(e.to_string()),
    })?;
    if !text_has_name(&text) {
        spec.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| reference.to_string());
    }
    Ok(spec)
}

fn text_has_name(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|v| v.get("name").cloned())
        .is_some()
}

fn apply_overrides(spec: ScenarioSpec, overrides: &Overrides) -> Result<ScenarioSpec, CliError> {
    spec.with_settings(overrides.dt, overrides.horizon, overrides.record_every)
        .map_err(|e| CliError::Validation(format!("{}: {e}", spec.name)))
}

fn emit(output: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(bytes).map_err(io_error),
    }
}

fn io_error(e: io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Expands `"v1,v2,..."` or `"start:stop:step"` into values. Ranges include
/// `stop` when it lies on the grid within a relative tolerance of 1e-9.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, String> {
    let number = |s: &str| -> Result<f64, String> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| format!("invalid number `{}` in range spec `{spec}`", s.trim()))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!(
                "non-finite value `{}` in range spec `{spec}`",
                s.trim()
            ))
        }
    };

    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!(
                "range spec `{spec}` must have the form start:stop:step"
            ));
        };
        let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
        if step <= 0.0 {
            return Err(format!("range step must be positive in `{spec}`"));
        }
        if stop < start {
            return Err(format!("range stop is below start in `{spec}`"));
        }
        let span = (stop - start) / step;
        let count = (span + RANGE_TOLERANCE * span.max(1.0)).floor() as usize;
        // Any exponent-form input disables snapping.
        let digits = parts
            .iter()
            .map(|p| fraction_digits(p.trim()))
            .collect::<Option<Vec<_>>>()
            .and_then(|d| d.into_iter().max());
        let mut values: Vec<f64> = (0..=count)
            .map(|i| {
                let v = start + i as f64 * step;
                match digits {
                    Some(d) => snap_decimal(v, d),
                    None => v,
                }
            })
            .collect();
        if let Some(last) = values.last_mut() {
            if (*last - stop).abs() <= RANGE_TOLERANCE * stop.abs().max(step) {
                *last = stop;
            }
        }
        Ok(values)
    } else {
        let values = spec.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err("empty value list".into());
        }
        Ok(values)
    }
}

/// Digits after the decimal point of a plain decimal literal; `None` for exponent forms.
fn fraction_digits(literal: &str) -> Option<u32> {
    if literal.contains(['e', 'E']) {
        return None;
    }
    Some(literal.split_once('.').map_or(0, |(_, f)| f.len() as u32))
}

fn snap_decimal(v: f64, digits: u32) -> f64 {
    if digits > 15 {
        return v;
    }
    let scale = 10f64.powi(digits as i32);
    (v * scale).round() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists() {
        assert_eq!(parse_range("6,12,24").unwrap(), vec![6.0, 12.0, 24.0]);
        assert_eq!(parse_range("0.3").unwrap(), vec![0.3]);
        assert_eq!(parse_range(" 1 , -2").unwrap(), vec![1.0, -2.0]);
        assert!(parse_range("1,,2").is_err());
        assert!(parse_range("a,b").is_err());
        assert!(parse_range("").is_err());
    }

    #[test]
    fn ranges_include_endpoints() {
        assert_eq!(parse_range("0.1:0.5:0.2").unwrap(), vec![0.1, 0.3, 0.5]);
        assert_eq!(parse_range("0:0.3:0.1").unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
        assert_eq!(parse_range("1e-1:3e-1:1e-1").unwrap().len(), 3);
        assert_eq!(parse_range("0.1:0.5:0.1").unwrap().len(), 5);
        assert_eq!(parse_range("1:1:1").unwrap(), vec![1.0]);
        assert_eq!(parse_range("0:1:0.3").unwrap().len(), 4);
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("1:0:0.5").is_err());
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("0:1:2:3").is_err());
    }
}
