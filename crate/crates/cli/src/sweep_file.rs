//! Sweep configuration files.
//!
//! A sweep file is TOML. Top-level keys set defaults; each `[[experiment]]`
//! section overrides them. Any key may hold a list, and a section expands
//! into the cartesian product of its lists, with later keys in the order
//! below varying fastest:
//!
//! ```toml
//! particles = 40
//! steps = 1500
//! runs = 5
//! seed = 7
//!
//! [[experiment]]
//! problem = "g08"
//! cht = ["pf", "pfpr", "apm"]
//! nn = [2, 10, 39]
//! ```
//!
//! Keys: `problem`, `cht`, `steps`, `nn`, `particles`, `runs`, `seed`,
//! `tol_ineq`, `tol_eq`, `rec_switch`, `rec_decrease` (`"linear"` or `"exp"`),
//! `prob`, `max_init_attempts`. `problem`, `cht` and `steps` have no default.

use std::ops::Range;

use cpso::{ChtKind, ExperimentConfig};
use serde::Deserialize;
use toml::Spanned;

use crate::settings::{RecDecrease, Settings};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

type Field<T> = Option<Spanned<OneOrMany<T>>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Section<E> {
    problem: Field<String>,
    cht: Field<String>,
    nn: Field<usize>,
    particles: Field<usize>,
    steps: Field<usize>,
    runs: Field<usize>,
    seed: Field<u64>,
    tol_ineq: Field<f64>,
    tol_eq: Field<f64>,
    rec_switch: Field<f64>,
    rec_decrease: Field<String>,
    prob: Field<f64>,
    max_init_attempts: Field<usize>,
    #[serde(default)]
    experiment: E,
}

type TopLevel = Section<Vec<Spanned<Section<Option<Spanned<toml::Value>>>>>>;

#[derive(Debug)]
pub struct SweepFileError(pub String);

impl std::fmt::Display for SweepFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SweepFileError {}

struct Source<'a> {
    path: &'a str,
    text: &'a str,
}

impl Source<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.text[..span.start.min(self.text.len())].matches('\n').count() + 1
    }

    fn error(&self, span: Range<usize>, msg: impl std::fmt::Display) -> SweepFileError {
        SweepFileError(format!("{}:{}: {msg}", self.path, self.line(span)))
    }
}

/// Values of one key after applying defaults, with the span they came from.
struct Axis<T> {
    values: Vec<T>,
    span: Range<usize>,
}

fn axis<T: Clone>(
    src: &Source,
    key: &str,
    own: &Field<T>,
    default: &Field<T>,
) -> Result<Option<Axis<T>>, SweepFileError> {
    let Some(field) = own.as_ref().or(default.as_ref()) else {
        return Ok(None);
    };
    let values = match field.get_ref() {
        OneOrMany::One(v) => vec![v.clone()],
        OneOrMany::Many(vs) => vs.clone(),
    };
    if values.is_empty() {
        return Err(src.error(field.span(), format!("`{key}` has an empty list")));
    }
    Ok(Some(Axis { values, span: field.span() }))
}

fn required<T>(src: &Source, key: &str, a: Option<Axis<T>>, section: Range<usize>) -> Result<Axis<T>, SweepFileError> {
    a.ok_or_else(|| src.error(section, format!("experiment is missing `{key}`")))
}

fn parse_decrease(src: &Source, a: Option<Axis<String>>) -> Result<Option<Axis<RecDecrease>>, SweepFileError> {
    let Some(a) = a else { return Ok(None) };
    let values = a
        .values
        .iter()
        .map(|s| match s.as_str() {
            "linear" => Ok(RecDecrease::Linear),
            "exp" => Ok(RecDecrease::Exp),
            other => Err(src.error(a.span.clone(), format!("unknown rec_decrease `{other}`; valid: linear, exp"))),
        })
        .collect::<Result<_, _>>()?;
    Ok(Some(Axis { values, span: a.span }))
}

/// Replaces every row by one copy per value of `axis`, in value order.
fn expand<T: Clone>(rows: Vec<Settings>, axis: Option<Axis<T>>, set: impl Fn(&mut Settings, T)) -> Vec<Settings> {
    let Some(axis) = axis else { return rows };
    rows.into_iter()
        .flat_map(|row| {
            axis.values
                .iter()
                .map(|v| {
                    let mut r = row.clone();
                    set(&mut r, v.clone());
                    r
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Parses a sweep file into its expanded list of experiments.
pub fn parse(path: &str, text: &str) -> Result<Vec<ExperimentConfig>, SweepFileError> {
    let src = Source { path, text };
    let top: TopLevel = toml::from_str(text).map_err(|e| SweepFileError(format!("{path}: {e}")))?;
    if top.experiment.is_empty() {
        return Err(SweepFileError(format!("{path}: no [[experiment]] sections")));
    }
    let mut configs = Vec::new();
    for section in &top.experiment {
        let span = section.span();
        let s = section.get_ref();
        if let Some(nested) = &s.experiment {
            return Err(src.error(nested.span(), "`experiment` cannot be nested inside an experiment"));
        }
        let problems = required(&src, "problem", axis(&src, "problem", &s.problem, &top.problem)?, span.clone())?;
        let chts = required(&src, "cht", axis(&src, "cht", &s.cht, &top.cht)?, span.clone())?;
        let steps = required(&src, "steps", axis(&src, "steps", &s.steps, &top.steps)?, span.clone())?;
        for p in &problems.values {
            cpso::get_problem(p).map_err(|e| src.error(problems.span.clone(), e))?;
        }
        let chts = Axis {
            values: chts
                .values
                .iter()
                .map(|c| c.parse::<ChtKind>().map_err(|e| src.error(chts.span.clone(), e)))
                .collect::<Result<Vec<_>, _>>()?,
            span: chts.span,
        };
        let mut rows: Vec<Settings> = Vec::new();
        for problem in &problems.values {
            for &cht in &chts.values {
                for &steps in &steps.values {
                    rows.push(Settings::new(problem.clone(), cht, steps));
                }
            }
        }
        rows = expand(rows, axis(&src, "nn", &s.nn, &top.nn)?, |r, v| r.nn = Some(v));
        rows = expand(rows, axis(&src, "particles", &s.particles, &top.particles)?, |r, v| r.particles = Some(v));
        rows = expand(rows, axis(&src, "runs", &s.runs, &top.runs)?, |r, v| r.runs = Some(v));
        rows = expand(rows, axis(&src, "seed", &s.seed, &top.seed)?, |r, v| r.seed = Some(v));
        rows = expand(rows, axis(&src, "tol_ineq", &s.tol_ineq, &top.tol_ineq)?, |r, v| r.tol_ineq = Some(v));
        rows = expand(rows, axis(&src, "tol_eq", &s.tol_eq, &top.tol_eq)?, |r, v| r.tol_eq = Some(v));
        rows = expand(rows, axis(&src, "rec_switch", &s.rec_switch, &top.rec_switch)?, |r, v| r.rec_switch = Some(v));
        let decrease = parse_decrease(&src, axis(&src, "rec_decrease", &s.rec_decrease, &top.rec_decrease)?)?;
        rows = expand(rows, decrease, |r, v| r.rec_decrease = Some(v));
        rows = expand(rows, axis(&src, "prob", &s.prob, &top.prob)?, |r, v| r.prob = Some(v));
        let max_init = axis(&src, "max_init_attempts", &s.max_init_attempts, &top.max_init_attempts)?;
        rows = expand(rows, max_init, |r, v| r.max_init_attempts = Some(v));
        for row in rows {
            configs.push(row.into_config().map_err(|e| src.error(span.clone(), e))?);
        }
    }
    Ok(configs)
}
