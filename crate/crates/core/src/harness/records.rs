use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// Mixed RMS error against a reference solution.
    Mrms,
    /// Maximum relative energy deviation, in percent.
    MaxEnergyDeviation,
}

/// One `(method, dt)` measurement for work-precision reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkPrecisionRecord {
    pub method: String,
    pub dt: f64,
    pub steps: usize,
    pub error: f64,
    pub metric: MetricKind,
    pub wall_seconds: f64,
    pub repeats: usize,
}

impl From<&crate::brusselator::BrusselatorRecord> for WorkPrecisionRecord {
    fn from(r: &crate::brusselator::BrusselatorRecord) -> Self {
        Self {
            method: r.method.clone(),
            dt: r.dt,
            steps: r.steps,
            error: r.mrms,
            metric: MetricKind::Mrms,
            wall_seconds: r.wall_seconds,
            repeats: 0,
        }
    }
}

/// Columns: `method,dt,steps,error,metric,wall_seconds,repeats`.
pub fn write_records(path: &Path, records: &[WorkPrecisionRecord]) -> Result<()> {
    write_csv(path, records)
}

/// Writes flat serializable rows with a header taken from the field names.
pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_records(path: &Path) -> Result<Vec<WorkPrecisionRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    r.deserialize().map(|rec| rec.map_err(|e| Error::csv(path, e))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_record_one_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let rec = WorkPrecisionRecord {
            method: "Strang(2-3-1)".into(),
            dt: 0.2,
            steps: 400,
            error: 0.041,
            metric: MetricKind::Mrms,
            wall_seconds: 1.5,
            repeats: 10,
        };
        write_records(&path, std::slice::from_ref(&rec)).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "method,dt,steps,error,metric,wall_seconds,repeats");
        assert_eq!(lines.len(), 2);
        assert_eq!(read_records(&path).unwrap(), vec![rec]);
    }
}
