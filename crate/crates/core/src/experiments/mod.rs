//! Reproducible experiment pipelines on top of the ring model: splitter runs,
//! interferometers, fidelity scans, critical-value searches, loss and the
//! balance-time scaling law.

mod crossing;
mod device;
mod fidelity;
mod fit;
mod interferometer;
mod loss;
mod scaling;

pub use crossing::{first_downward_crossing, geometric_scan, CriticalValue, CrossingStatus};
pub use device::{run_splitter, SplitterDevice};
pub use fidelity::{
    critical_interaction, critical_interaction_with_scan, critical_timing_error,
    interaction_fidelity, interaction_fidelity_scan, timing_error_scan, InteractionFidelity,
    TimingFidelity, CRITICAL_FIDELITY,
};
pub use fit::{power_law_fit, FitResult};
pub use interferometer::{interferometer, interferometer_scan, three_path_populations};
pub use loss::loss_experiment;
pub use scaling::{jt_scaling, JtScaling, SCALING_SITES, SCALING_WINDOW};

use crate::error::{Error, Result};

/// Scalar value stored in a result's parameter or summary record.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    /// Empty for dimensionless quantities.
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.to_owned(),
            unit: unit.to_owned(),
        }
    }
}

/// Tabular output of one experiment. The first column is the swept variable
/// and is kept strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub kind: String,
    pub parameters: Vec<(String, Value)>,
    pub columns: Vec<Column>,
    rows: Vec<Vec<f64>>,
    pub summary: Vec<(String, Value)>,
    pub fit: Option<FitResult>,
    pub notes: Vec<String>,
}

impl ExperimentResult {
    pub fn new(kind: &str, columns: Vec<Column>) -> Self {
        Self {
            kind: kind.to_owned(),
            parameters: Vec::new(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            fit: None,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.push((key.to_owned(), value.into()));
        self
    }

    pub fn add_summary(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.to_owned(), value.into()));
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Config(format!(
                "row has {} values, result has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if let Some(last) = self.rows.last() {
            if !(row[0] > last[0]) {
                return Err(Error::Config(format!(
                    "x values must be strictly increasing: {} after {}",
                    row[0], last[0]
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn summary_value(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

/// Rejects grids that are not finite and strictly increasing.
pub(crate) fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config(format!("{name} grid has non-finite values")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config(format!("{name} grid must be strictly increasing")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_must_increase() {
        let mut r = ExperimentResult::new("t", vec![Column::new("x", ""), Column::new("y", "")]);
        r.push_row(vec![0.0, 1.0]).unwrap();
        r.push_row(vec![0.5, 1.0]).unwrap();
        assert!(r.push_row(vec![0.5, 2.0]).is_err());
        assert!(r.push_row(vec![0.7]).is_err());
        assert_eq!(r.column("y").unwrap(), vec![1.0, 1.0]);
        assert!(r.column("z").is_none());
    }

    #[test]
    fn grid_checks() {
        assert!(check_grid("phi", &[0.0, 1.0, 2.0]).is_ok());
        assert!(check_grid("phi", &[]).is_ok());
        assert!(check_grid("phi", &[0.0, 0.0]).is_err());
        assert!(check_grid("phi", &[0.0, f64::NAN]).is_err());
    }
}
