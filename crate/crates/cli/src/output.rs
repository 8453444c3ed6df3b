use std::io::Write;

use anyhow::{ensure, Result};
use cpso::{ExperimentConfig, ExperimentOutcome, RunResult, SummaryRow, TraceRow};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 16] = [
    "problem",
    "cht",
    "nn",
    "particles",
    "steps",
    "runs",
    "seed",
    "best_conflict",
    "best_cv",
    "best_nac",
    "mean_conflict",
    "mean_cv",
    "mean_nac",
    "failures",
    "fes",
    "extra_evals",
];

/// Marker written in place of statistics when no run completed.
pub const FAIL: &str = "FAIL";

/// One emitted experiment: the configuration that produced it and its summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub summary: SummaryRow,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<Vec<RunResult>>,
}

impl OutputRecord {
    pub fn new(config: ExperimentConfig, outcome: ExperimentOutcome, with_runs: bool) -> Self {
        let runs = (with_runs && outcome.summary.error.is_none()).then(|| {
            outcome
                .runs
                .into_iter()
                .map(|mut r| {
                    r.trace.clear();
                    r
                })
                .collect()
        });
        OutputRecord { schema_version: SCHEMA_VERSION, config, summary: outcome.summary, runs }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.schema_version == SCHEMA_VERSION, "unsupported schema version {}", self.schema_version);
        let (c, s) = (&self.config, &self.summary);
        ensure!(
            s.problem == c.problem
                && s.cht == c.cht.kind.name()
                && s.nn == c.nn
                && s.particles == c.particles
                && s.steps == c.steps
                && s.runs == c.runs
                && s.seed == c.master_seed,
            "summary does not echo its configuration"
        );
        ensure!(s.fes == c.fes(), "fes {} differs from particles x steps", s.fes);
        ensure!(s.failures <= s.runs, "{} failures out of {} runs", s.failures, s.runs);
        if s.error.is_none() {
            ensure!(s.best.is_none() == (s.failures == s.runs), "best must be absent exactly when every run failed");
            ensure!(
                s.best.is_some() == s.mean_conflict.is_some()
                    && s.best.is_some() == s.mean_cv.is_some()
                    && s.best.is_some() == s.mean_nac.is_some()
                    && s.best.is_some() == s.extra_evals.is_some(),
                "means must be present exactly when a run completed"
            );
        }
        if let Some(runs) = &self.runs {
            ensure!(runs.len() == c.runs, "{} run records for {} runs", runs.len(), c.runs);
            for (i, r) in runs.iter().enumerate() {
                ensure!(r.run_index == i, "run records out of order at {i}");
            }
            let failed = runs.iter().filter(|r| !r.completed()).count();
            ensure!(failed == s.failures, "run records show {failed} failures, summary {}", s.failures);
        }
        Ok(())
    }
}

/// Formats a real with `digits` significant digits in the style of C's `%g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn real(x: Option<f64>) -> String {
    x.map_or_else(|| FAIL.to_string(), |v| format_sig(v, 12))
}

pub fn csv_fields(row: &SummaryRow) -> Vec<String> {
    let best = row.best.as_ref();
    vec![
        row.problem.clone(),
        row.cht.clone(),
        row.nn.to_string(),
        row.particles.to_string(),
        row.steps.to_string(),
        row.runs.to_string(),
        row.seed.to_string(),
        real(best.map(|b| b.conflict)),
        real(best.map(|b| b.cv)),
        best.map_or_else(|| FAIL.to_string(), |b| b.nac.to_string()),
        real(row.mean_conflict),
        real(row.mean_cv),
        real(row.mean_nac),
        row.failures.to_string(),
        row.fes.to_string(),
        real(row.extra_evals),
    ]
}

pub fn write_csv<W: Write>(out: W, rows: &[&SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.write_record(csv_fields(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Writes `run,step,best_conflict,best_cv` lines for every run in order.
pub fn write_trace<'a, W: Write>(out: W, traces: impl IntoIterator<Item = &'a TraceRow>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run", "step", "best_conflict", "best_cv"])?;
    for t in traces {
        w.write_record([
            t.run.to_string(),
            t.step.to_string(),
            format_sig(t.best_conflict, 12),
            format_sig(t.best_cv, 12),
        ])?;
    }
    w.flush()?;
    Ok(())
}
