//! Expands a config into sweep points, runs them, and writes the CSV.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use declab_core::table::ResultTable;
use rayon::prelude::*;

use crate::config::{parse_config, ConfigError, ExperimentConfig, Scalar};
use crate::experiments::{prepare, Check, Job};
use crate::CliError;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub check: bool,
    /// Overrides the config's `output` key.
    pub output: Option<PathBuf>,
    /// Worker threads; 0 means rayon's default.
    pub jobs: usize,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub table: ResultTable,
    pub checks: Vec<Check>,
    pub output: PathBuf,
}

impl RunReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Point {
    label: Option<(String, String, f64)>,
    job: Job,
}

/// Validates every sweep point up front so a bad value fails before any work.
fn plan(cfg: &ExperimentConfig) -> Result<(Vec<Point>, ResultTable), ConfigError> {
    let exp = cfg.experiment;
    match cfg.sweep_axis()? {
        None => {
            let job = prepare(exp, &cfg.point(None))?;
            Ok((vec![Point { label: None, job }], exp.empty_table()))
        }
        Some((key, values)) => {
            let unit = exp.param(key).map(|s| s.unit).unwrap_or("");
            let empty = exp
                .empty_table()
                .with_leading(key, unit, 0.0)
                .expect("an empty table always gains a column");
            let mut points = Vec::with_capacity(values.len());
            for v in values {
                let Scalar::Number(x) = v else {
                    return Err(ConfigError::Validation(format!("sweep values for `{key}` must be numeric")));
                };
                let job = prepare(exp, &cfg.point(Some((key, v))))
                    .map_err(|e| ConfigError::Validation(format!("{key} = {v}: {e}")))?;
                points.push(Point { label: Some((key.to_owned(), unit.to_owned(), *x)), job });
            }
            Ok((points, empty))
        }
    }
}

/// Checks a config without running it.
pub fn validate(cfg: &ExperimentConfig) -> Result<usize, ConfigError> {
    Ok(plan(cfg)?.0.len())
}

/// Runs every point of `cfg` and concatenates the tables in sweep order.
pub fn execute(cfg: &ExperimentConfig, check: bool, jobs: usize) -> Result<(ResultTable, Vec<Check>), CliError> {
    let (points, mut table) = plan(cfg)?;
    declab_core::qcore::pin_sequential_linear_algebra();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CliError::Io(e.to_string()))?;
    let results: Vec<_> = pool.install(|| points.par_iter().map(|p| p.job.run(check)).collect());

    let mut checks = Vec::new();
    for (point, result) in points.iter().zip(results) {
        let outcome = result.map_err(|e| match &point.label {
            Some((k, _, v)) => CliError::Run(format!("{k} = {v}: {e}")),
            None => CliError::Run(e.to_string()),
        })?;
        match &point.label {
            Some((key, unit, value)) => {
                table.append(outcome.table.with_leading(key, unit, *value).map_err(|e| CliError::Run(e.to_string()))?)
                    .map_err(|e| CliError::Run(e.to_string()))?;
                checks.extend(outcome.checks.into_iter().map(|c| Check { name: format!("{key}={value}: {}", c.name), ..c }));
            }
            None => {
                table = outcome.table;
                checks = outcome.checks;
            }
        }
    }
    Ok((table, checks))
}

/// Writes via a temporary file in the target directory, so readers never see
/// a partial CSV.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Parses, runs and writes one config. A relative `output` in the config
/// resolves against the config file's directory.
pub fn run_config(path: &Path, opts: &RunOptions) -> Result<RunReport, CliError> {
    let cfg = parse_config(path)?;
    let output = match (&opts.output, &cfg.output_path) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) if o.is_relative() => path.parent().unwrap_or(Path::new(".")).join(o),
        (None, Some(o)) => o.clone(),
        (None, None) => return Err(ConfigError::MissingKey("output".into()).into()),
    };
    let (table, checks) = execute(&cfg, opts.check, opts.jobs)?;
    write_atomic(&output, &table.to_csv())?;
    Ok(RunReport { table, checks, output })
}
