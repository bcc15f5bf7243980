//! Run output: time-series CSV, end-of-run summaries, two-run comparison and
//! parameter sweeps.

use std::fmt::Write as _;
use std::io;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::RunResult;
use crate::scenario::{ScenarioError, ScenarioSpec, SimulationError};

/// Time-series CSV columns, in output order.
pub const CSV_COLUMNS: [&str; 12] = [
    "t_months",
    "backlog_fp",
    "production_library_fp",
    "technical_debt_mh",
    "total_effort_mh",
    "maintainability",
    "productivity_ratio",
    "allocation",
    "new_requirements_rate_fp_mo",
    "perfective_rate_fp_mo",
    "preventive_rate_mh_mo",
    "debt_accrual_rate_mh_mo",
];

pub const DEFAULT_EQUILIBRIUM_WINDOW: f64 = 24.0;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("write failed: {0}")]
    Io(#[from] io::Error),
    #[error("csv write failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("run has no `{0}` column")]
    MissingColumn(String),
    #[error("equilibrium window must be a finite positive number of months, got {0}")]
    BadWindow(f64),
    #[error("cannot compare runs with different horizons ({a} vs {b} months)")]
    HorizonMismatch { a: f64, b: f64 },
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Path(ScenarioError),
    #[error("value {value}: {source}")]
    Value { value: f64, source: ScenarioError },
    #[error("value {value}: {source}")]
    Simulation { value: f64, source: SimulationError },
    #[error("value {value}: {source}")]
    Report { value: f64, source: ReportError },
}

/// Formats a number as the shortest decimal that round-trips, never in exponent form.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        // Folds -0 into 0.
        return "0".to_string();
    }
    format!("{v}")
}

pub fn write_csv<W: io::Write>(run: &RunResult, destination: W) -> Result<(), ReportError> {
    let columns = CSV_COLUMNS[1..]
        .iter()
        .map(|&name| {
            run.column(name)
                .ok_or_else(|| ReportError::MissingColumn(name.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut writer = csv::Writer::from_writer(destination);
    writer.write_record(CSV_COLUMNS)?;
    let mut row = Vec::with_capacity(CSV_COLUMNS.len());
    for (i, &t) in run.times().iter().enumerate() {
        row.clear();
        row.push(format_number(t));
        row.extend(columns.iter().map(|c| format_number(c[i])));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryMetrics {
    pub horizon: f64,
    pub final_backlog: f64,
    pub final_production_library: f64,
    pub final_technical_debt: f64,
    pub final_total_effort: f64,
    pub final_allocation: f64,
    pub final_maintainability: f64,
    pub final_productivity_ratio: f64,
    pub min_maintainability: f64,
    pub min_maintainability_t: f64,
    /// Mean allocation over the trailing window.
    pub equilibrium_allocation: f64,
    pub equilibrium_window: f64,
    /// Function points added to the production library over the run.
    pub delivered_fp: f64,
}

impl SummaryMetrics {
    /// Column names for tabular output, matching [`SummaryMetrics::values`].
    pub const COLUMNS: [&'static str; 11] = [
        "final_backlog_fp",
        "final_production_library_fp",
        "final_technical_debt_mh",
        "final_total_effort_mh",
        "final_allocation",
        "final_maintainability",
        "final_productivity_ratio",
        "min_maintainability",
        "min_maintainability_t_months",
        "equilibrium_allocation",
        "delivered_fp",
    ];

    pub fn values(&self) -> [f64; 11] {
        [
            self.final_backlog,
            self.final_production_library,
            self.final_technical_debt,
            self.final_total_effort,
            self.final_allocation,
            self.final_maintainability,
            self.final_productivity_ratio,
            self.min_maintainability,
            self.min_maintainability_t,
            self.equilibrium_allocation,
            self.delivered_fp,
        ]
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let rows = [
            ("horizon (months)", self.horizon),
            ("final backlog (FP)", self.final_backlog),
            (
                "final production library (FP)",
                self.final_production_library,
            ),
            ("delivered (FP)", self.delivered_fp),
            (
                "final technical debt (man-hours)",
                self.final_technical_debt,
            ),
            ("final total effort (man-hours)", self.final_total_effort),
            ("final maintainability", self.final_maintainability),
            ("final productivity ratio", self.final_productivity_ratio),
            ("final allocation", self.final_allocation),
            ("minimum maintainability", self.min_maintainability),
            ("  at month", self.min_maintainability_t),
            ("equilibrium allocation", self.equilibrium_allocation),
        ];
        for (label, value) in rows {
            let _ = writeln!(out, "{label:<34} {value:>14.4}");
        }
        out
    }
}

pub fn summarize(run: &RunResult) -> Result<SummaryMetrics, ReportError> {
    summarize_with_window(run, DEFAULT_EQUILIBRIUM_WINDOW)
}

pub fn summarize_with_window(run: &RunResult, window: f64) -> Result<SummaryMetrics, ReportError> {
    if !(window.is_finite() && window > 0.0) {
        return Err(ReportError::BadWindow(window));
    }
    let col = |name: &str| {
        run.column(name)
            .filter(|c| !c.is_empty())
            .ok_or_else(|| ReportError::MissingColumn(name.to_string()))
    };
    let backlog = col("backlog_fp")?;
    let library = col("production_library_fp")?;
    let debt = col("technical_debt_mh")?;
    let effort = col("total_effort_mh")?;
    let allocation = col("allocation")?;
    let maintainability = col("maintainability")?;
    let ratio = col("productivity_ratio")?;
    let times = run.times();
    let last = times.len() - 1;
    let horizon = run.settings().horizon;

    let (min_idx, min_maintainability) =
        maintainability
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, m)| if m < best.1 { (i, m) } else { best },
            );

    let cutoff = horizon - window;
    let tail: Vec<f64> = times
        .iter()
        .zip(allocation)
        .filter(|(&t, _)| t > cutoff)
        .map(|(_, &a)| a)
        .collect();
    let equilibrium_allocation = tail.iter().sum::<f64>() / tail.len() as f64;

    Ok(SummaryMetrics {
        horizon,
        final_backlog: backlog[last],
        final_production_library: library[last],
        final_technical_debt: debt[last],
        final_total_effort: effort[last],
        final_allocation: allocation[last],
        final_maintainability: maintainability[last],
        final_productivity_ratio: ratio[last],
        min_maintainability,
        min_maintainability_t: times[min_idx],
        equilibrium_allocation,
        equilibrium_window: window,
        delivered_fp: library[last] - library[0],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    DeliveredFp,
    FinalBacklog,
    FinalProductivityRatio,
    FinalTechnicalDebt,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Self::DeliveredFp,
        Self::FinalBacklog,
        Self::FinalProductivityRatio,
        Self::FinalTechnicalDebt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::DeliveredFp => "delivered_fp",
            Self::FinalBacklog => "final_backlog",
            Self::FinalProductivityRatio => "final_productivity_ratio",
            Self::FinalTechnicalDebt => "final_technical_debt",
        }
    }

    pub fn higher_is_better(self) -> bool {
        matches!(self, Self::DeliveredFp | Self::FinalProductivityRatio)
    }

    pub fn of(self, m: &SummaryMetrics) -> f64 {
        match self {
            Self::DeliveredFp => m.delivered_fp,
            Self::FinalBacklog => m.final_backlog,
            Self::FinalProductivityRatio => m.final_productivity_ratio,
            Self::FinalTechnicalDebt => m.final_technical_debt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ABetter,
    BBetter,
    Tie,
}

impl Verdict {
    pub fn flipped(self) -> Self {
        match self {
            Self::ABetter => Self::BBetter,
            Self::BBetter => Self::ABetter,
            Self::Tie => Self::Tie,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricComparison {
    pub metric: Metric,
    pub a: f64,
    pub b: f64,
    /// `b - a`.
    pub difference: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub label_a: String,
    pub label_b: String,
    pub rows: Vec<MetricComparison>,
}

pub fn compare(a: &SummaryMetrics, b: &SummaryMetrics) -> Result<ComparisonReport, ReportError> {
    if (a.horizon - b.horizon).abs() > 1e-9 * a.horizon.abs().max(b.horizon.abs()) {
        return Err(ReportError::HorizonMismatch {
            a: a.horizon,
            b: b.horizon,
        });
    }
    let rows = Metric::ALL
        .into_iter()
        .map(|metric| {
            let (va, vb) = (metric.of(a), metric.of(b));
            let verdict = if va == vb {
                Verdict::Tie
            } else if (vb > va) == metric.higher_is_better() {
                Verdict::BBetter
            } else {
                Verdict::ABetter
            };
            MetricComparison {
                metric,
                a: va,
                b: vb,
                difference: vb - va,
                verdict,
            }
        })
        .collect();
    Ok(ComparisonReport {
        label_a: "a".to_string(),
        label_b: "b".to_string(),
        rows,
    })
}

impl ComparisonReport {
    pub fn with_labels(mut self, a: impl Into<String>, b: impl Into<String>) -> Self {
        self.label_a = a.into();
        self.label_b = b.into();
        self
    }

    pub fn row(&self, metric: Metric) -> Option<&MetricComparison> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    /// True when B wins every metric.
    pub fn b_dominates(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::BBetter)
    }

    pub fn render_text(&self) -> String {
        let (a, b) = (&self.label_a, &self.label_b);
        let diff_header = format!("{b} - {a}");
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<26} {:>16} {:>16} {:>16}  verdict",
            "metric", a, b, diff_header
        );
        for r in &self.rows {
            let verdict = match r.verdict {
                Verdict::ABetter => format!("{a} better"),
                Verdict::BBetter => format!("{b} better"),
                Verdict::Tie => "tie".to_string(),
            };
            let direction = if r.metric.higher_is_better() {
                "higher"
            } else {
                "lower"
            };
            let _ = writeln!(
                out,
                "{:<26} {:>16.4} {:>16.4} {:>+16.4}  {verdict} ({direction} is better)",
                r.metric.name(),
                r.a,
                r.b,
                r.difference
            );
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub metrics: SummaryMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub path: String,
    pub rows: Vec<SweepRow>,
}

/// Runs `base` once per value of the field at `path`. Runs execute in
/// parallel; rows keep the order of `values`.
pub fn sweep(base: &ScenarioSpec, path: &str, values: &[f64]) -> Result<SweepTable, SweepError> {
    base.check_path(path).map_err(SweepError::Path)?;
    let specs = values
        .iter()
        .map(|&value| {
            base.with_value(path, value)
                .map(|spec| (value, spec))
                .map_err(|source| SweepError::Value { value, source })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let rows = specs
        .par_iter()
        .map(|(value, spec)| {
            let value = *value;
            let run = spec
                .run()
                .map_err(|source| SweepError::Simulation { value, source })?;
            let metrics = summarize(&run).map_err(|source| SweepError::Report { value, source })?;
            Ok(SweepRow { value, metrics })
        })
        .collect::<Result<Vec<_>, SweepError>>()?;

    Ok(SweepTable {
        path: path.to_string(),
        rows,
    })
}

pub fn write_sweep_csv<W: io::Write>(
    table: &SweepTable,
    destination: W,
) -> Result<(), ReportError> {
    let mut writer = csv::Writer::from_writer(destination);
    let header: Vec<&str> = std::iter::once("value")
        .chain(SummaryMetrics::COLUMNS)
        .collect();
    writer.write_record(&header)?;
    for row in &table.rows {
        let record: Vec<String> = std::iter::once(row.value)
            .chain(row.metrics.values())
            .map(format_number)
            .collect();
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}
