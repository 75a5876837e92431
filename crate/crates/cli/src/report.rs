//! Run reports and their JSON/TSV renderings.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok,
    /// A verification check failed.
    Failed,
    /// Part of the result was abandoned at the time limit.
    Hole,
    /// The command could not run (bad options, unsupported input).
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultEntry {
    pub statement: String,
    pub outcome: Outcome,
    pub payload: Value,
    pub error: Option<String>,
    pub timing_ms: u64,
    #[serde(skip)]
    pub holes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub engine: String,
    pub seed: u64,
    pub results: Vec<ResultEntry>,
    pub holes: Vec<String>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_HOLE: i32 = 3;

impl Report {
    /// A failed check outranks an unusable command, which outranks a hole.
    pub fn exit_code(&self) -> i32 {
        let has = |o: Outcome| self.results.iter().any(|r| r.outcome == o);
        if has(Outcome::Failed) {
            EXIT_FAILED
        } else if has(Outcome::Error) {
            EXIT_USAGE
        } else if has(Outcome::Hole) || !self.holes.is_empty() {
            EXIT_HOLE
        } else {
            EXIT_OK
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    /// The report without timing fields, for comparisons across runs.
    pub fn stable_json(&self) -> Value {
        let mut v = self.to_json();
        strip_volatile(&mut v);
        v
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("reports serialize") + "\n"
    }

    /// One section per result. Power tables become `t reg reg_sat b0 a0..an`
    /// rows; everything else is `key value` pairs of the payload.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("# {}\t{}\n", r.statement, outcome_name(r.outcome)));
            if let Some(rows) = r.payload.pointer("/table/rows").and_then(Value::as_array) {
                power_rows(rows, &mut out);
                continue;
            }
            match &r.payload {
                Value::Object(map) => {
                    for (k, v) in map {
                        out.push_str(&format!("{k}\t{}\n", cell(v)));
                    }
                }
                Value::Null => {
                    if let Some(e) = &r.error {
                        out.push_str(&format!("error\t{e}\n"));
                    }
                }
                other => out.push_str(&format!("value\t{}\n", cell(other))),
            }
        }
        out
    }

    /// Short human summary, one line per result.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("{:<8} {} ({} ms)", outcome_name(r.outcome), r.statement, r.timing_ms));
            if let Some(e) = &r.error {
                out.push_str(&format!(": {e}"));
            }
            out.push('\n');
        }
        for h in &self.holes {
            out.push_str(&format!("hole     {h}\n"));
        }
        out
    }
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Ok => "ok",
        Outcome::Failed => "failed",
        Outcome::Hole => "hole",
        Outcome::Error => "error",
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.replace('\n', "\\n"),
        other => other.to_string(),
    }
}

fn power_rows(rows: &[Value], out: &mut String) {
    let width = rows
        .iter()
        .filter_map(|r| r.pointer("/a/values").and_then(Value::as_array).map(|a| a.len()))
        .max()
        .unwrap_or(0);
    let mut header = vec!["t".to_string(), "reg".into(), "reg_sat".into(), "b0".into()];
    header.extend((0..width).map(|i| format!("a{i}")));
    out.push_str(&header.join("\t"));
    out.push('\n');
    for r in rows {
        let mut line = vec![cell(&r["t"]), cell(&r["reg"]), cell(&r["reg_sat"]), cell(&r["b0"])];
        for i in 0..width {
            line.push(cell(r.pointer(&format!("/a/values/{i}")).unwrap_or(&Value::Null)));
        }
        out.push_str(&line.join("\t"));
        out.push('\n');
    }
}

pub fn strip_volatile(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timing_ms");
            map.values_mut().for_each(strip_volatile);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_volatile),
        _ => {}
    }
}

/// Differences where `expected` is not contained in `actual`: objects
/// compare on the expected keys, arrays elementwise with equal length.
pub fn subset_diff(expected: &Value, actual: &Value, path: &str, out: &mut Vec<String>) {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => {
            for (k, ev) in e {
                if k == "timing_ms" {
                    continue;
                }
                let p = format!("{path}/{k}");
                match a.get(k) {
                    Some(av) => subset_diff(ev, av, &p, out),
                    None => out.push(format!("{p}: expected {ev}, missing")),
                }
            }
        }
        (Value::Array(e), Value::Array(a)) if e.len() == a.len() => {
            for (i, (ev, av)) in e.iter().zip(a).enumerate() {
                subset_diff(ev, av, &format!("{path}/{i}"), out);
            }
        }
        (e, a) if e == a => {}
        (e, a) => out.push(format!("{}: expected {e}, got {a}", if path.is_empty() { "/" } else { path })),
    }
}
