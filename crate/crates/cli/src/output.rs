//! CSV data files and their JSON sidecars.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use multiport_core::experiments::{ExperimentResult, FitResult, Value};
use serde_json::{json, Map, Value as Json};

use crate::error::{CliError, CliResult};

/// 17 significant digits: enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header row of column names, then one line per row; LF endings.
pub fn render_csv(result: &ExperimentResult) -> String {
    let mut out = String::new();
    let header: Vec<&str> = result.columns.iter().map(|c| c.name.as_str()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in result.rows() {
        for (i, x) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_float(*x));
        }
        out.push('\n');
    }
    out
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Int(i) => json!(i),
        Value::Float(x) => serde_json::Number::from_f64(*x).map_or(Json::Null, Json::Number),
        Value::Bool(b) => json!(b),
        Value::Text(s) => json!(s),
    }
}

fn record(entries: &[(String, Value)]) -> Json {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.clone(), value_to_json(v));
    }
    Json::Object(map)
}

fn fit_to_json(fit: &FitResult) -> Json {
    json!({
        "coefficient": fit.coefficient,
        "exponent": fit.exponent,
        "rms_log_residual": fit.rms_log_residual,
    })
}

pub fn render_sidecar(result: &ExperimentResult, csv_name: &str, timings: Option<&[(String, f64)]>) -> String {
    let mut map = Map::new();
    map.insert("command".into(), json!(result.kind));
    map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    map.insert("csv".into(), json!(csv_name));
    map.insert("parameters".into(), record(&result.parameters));
    map.insert(
        "columns".into(),
        Json::Array(
            result
                .columns
                .iter()
                .map(|c| json!({ "name": c.name, "unit": c.unit }))
                .collect(),
        ),
    );
    map.insert("rows".into(), json!(result.rows().len()));
    map.insert("summary".into(), record(&result.summary));
    map.insert("fit".into(), result.fit.as_ref().map_or(Json::Null, fit_to_json));
    map.insert("notes".into(), json!(result.notes));
    if let Some(t) = timings {
        let mut tm = Map::new();
        for (k, v) in t {
            tm.insert(k.clone(), json!(v));
        }
        map.insert("timings".into(), Json::Object(tm));
    }
    let mut text = serde_json::to_string_pretty(&Json::Object(map)).expect("JSON values are finite or null");
    text.push('\n');
    text
}

/// CSV path as given and the sidecar next to it with a `.json` extension.
pub fn artifact_paths(csv: &Path) -> CliResult<(PathBuf, PathBuf)> {
    if csv.extension().is_some_and(|e| e == "json") {
        return Err(CliError::Schema(format!(
            "--output {} would collide with its JSON sidecar",
            csv.display()
        )));
    }
    if csv.file_name().is_none() {
        return Err(CliError::Schema(format!("--output {} is not a file path", csv.display())));
    }
    Ok((csv.to_path_buf(), csv.with_extension("json")))
}

pub fn write_artifacts(
    result: &ExperimentResult,
    csv_path: &Path,
    timings: Option<&[(String, f64)]>,
) -> CliResult<(PathBuf, PathBuf)> {
    let (csv, sidecar) = artifact_paths(csv_path)?;
    let name = csv
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    std::fs::write(&csv, render_csv(result)).map_err(|e| CliError::io(&csv, e))?;
    std::fs::write(&sidecar, render_sidecar(result, &name, timings)).map_err(|e| CliError::io(&sidecar, e))?;
    Ok((csv, sidecar))
}
