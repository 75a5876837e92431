//! Scenario suites: every `<name>.reg` in a directory runs against its
//! `<name>.expected.json` sidecar.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{subset_diff, EXIT_FAILED, EXIT_OK};
use crate::runner::{run, Settings};
use crate::script::parse_script;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("scenario {0} has no sidecar {1}")]
    MissingSidecar(PathBuf, PathBuf),
    #[error("sidecar {path}: {message}")]
    BadSidecar { path: PathBuf, message: String },
}

#[derive(Clone, Debug)]
pub struct ScenarioResult {
    pub name: String,
    pub passed: bool,
    pub diff: Vec<String>,
    pub timing_ms: u64,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub scenarios: Vec<ScenarioResult>,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if self.scenarios.iter().all(|s| s.passed) {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }

    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self
            .scenarios
            .iter()
            .map(|s| json!({ "name": s.name, "passed": s.passed, "diff": s.diff, "timing_ms": s.timing_ms }))
            .collect();
        json!({ "scenarios": items })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.scenarios {
            out.push_str(&format!("{} {} ({} ms)\n", if s.passed { "PASS" } else { "FAIL" }, s.name, s.timing_ms));
            for d in &s.diff {
                out.push_str(&format!("    {d}\n"));
            }
        }
        let passed = self.scenarios.iter().filter(|s| s.passed).count();
        out.push_str(&format!("{passed}/{} scenarios passed\n", self.scenarios.len()));
        out
    }
}

fn read(path: &Path) -> Result<String, SuiteError> {
    fs::read_to_string(path).map_err(|source| SuiteError::Io { path: path.to_path_buf(), source })
}

/// Scenario files in `dir`, sorted by name.
pub fn scenarios(dir: &Path) -> Result<Vec<PathBuf>, SuiteError> {
    let entries = fs::read_dir(dir).map_err(|source| SuiteError::Io { path: dir.to_path_buf(), source })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "reg"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn sidecar(script: &Path) -> PathBuf {
    script.with_extension("expected.json")
}

/// Runs one scenario. The sidecar may pin `seed`; parse errors and any
/// mismatch against the sidecar fail the scenario.
pub fn run_scenario(script: &Path, settings: &Settings) -> Result<ScenarioResult, SuiteError> {
    let car = sidecar(script);
    if !car.exists() {
        return Err(SuiteError::MissingSidecar(script.to_path_buf(), car));
    }
    let expected: Value = serde_json::from_str(&read(&car)?)
        .map_err(|e| SuiteError::BadSidecar { path: car.clone(), message: e.to_string() })?;
    let name = script.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut settings = settings.clone();
    if let Some(seed) = expected.get("seed").and_then(Value::as_u64) {
        settings.seed = Some(seed);
    }
    let start = std::time::Instant::now();
    let report = parse_script(&read(script)?).and_then(|s| run(&s, &settings));
    let timing_ms = start.elapsed().as_millis() as u64;
    let mut diff = Vec::new();
    match report {
        Ok(r) => subset_diff(&expected, &r.stable_json(), "", &mut diff),
        Err(e) => diff.push(format!("script error {e}")),
    }
    Ok(ScenarioResult { name, passed: diff.is_empty(), diff, timing_ms })
}

pub fn run_suite(dir: &Path, settings: &Settings) -> Result<SuiteReport, SuiteError> {
    let files = scenarios(dir)?;
    let mut report = SuiteReport::default();
    for f in files {
        report.scenarios.push(run_scenario(&f, settings)?);
    }
    Ok(report)
}
