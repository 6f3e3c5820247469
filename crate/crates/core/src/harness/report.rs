use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::records::{write_records, MetricKind, WorkPrecisionRecord};
use super::svg::{LogLogPlot, Series};
use crate::brusselator::least_squares_slope;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Svg,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "svg" => Ok(Self::Svg),
            _ => Err(Error::Config(format!("unknown report format `{s}`"))),
        }
    }
}

fn by_method(records: &[WorkPrecisionRecord]) -> BTreeMap<&str, Vec<&WorkPrecisionRecord>> {
    let mut map: BTreeMap<&str, Vec<&WorkPrecisionRecord>> = BTreeMap::new();
    for r in records {
        map.entry(r.method.as_str()).or_default().push(r);
    }
    map
}

/// Least-squares slope of `log error` against `log dt` for every method
/// with at least two distinct step sizes.
pub fn series_slopes(records: &[WorkPrecisionRecord]) -> BTreeMap<String, f64> {
    by_method(records)
        .into_iter()
        .filter_map(|(m, rs)| {
            let pts: Vec<(f64, f64)> = rs.iter().map(|r| (r.dt, r.error)).collect();
            least_squares_slope(&pts).ok().map(|p| (m.to_string(), p))
        })
        .collect()
}

/// Writes `work_precision.csv`, or `work_precision.svg` plus
/// `convergence.svg`, into `dir`. Returns the files written.
pub fn emit_report(records: &[WorkPrecisionRecord], format: ReportFormat, dir: &Path) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to report".into()));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    match format {
        ReportFormat::Csv => {
            let path = dir.join("work_precision.csv");
            write_records(&path, records)?;
            Ok(vec![path])
        }
        ReportFormat::Svg => {
            let metric = match records[0].metric {
                MetricKind::Mrms => "MRMS error",
                MetricKind::MaxEnergyDeviation => "max energy deviation (%)",
            };
            let slopes = series_slopes(records);
            let mut work = LogLogPlot::new("Work-precision", "wall time (s)", metric);
            let mut conv = LogLogPlot::new("Convergence", "step size dt", metric);
            for (method, rs) in by_method(records) {
                work.push(Series {
                    label: method.to_string(),
                    points: rs.iter().map(|r| (r.wall_seconds, r.error)).collect(),
                    annotation: None,
                });
                conv.push(Series {
                    label: method.to_string(),
                    points: rs.iter().map(|r| (r.dt, r.error)).collect(),
                    annotation: slopes.get(method).map(|p| format!("slope {p:.2}")),
                });
            }
            let mut written = Vec::new();
            for (name, plot) in [("work_precision.svg", work), ("convergence.svg", conv)] {
                let path = dir.join(name);
                fs::write(&path, plot.render()).map_err(|e| Error::io(&path, e))?;
                written.push(path);
            }
            Ok(written)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic() -> Vec<WorkPrecisionRecord> {
        [0.2, 0.1, 0.05]
            .iter()
            .map(|&dt| WorkPrecisionRecord {
                method: "S".into(),
                dt,
                steps: (80.0 / dt) as usize,
                error: 0.5 * dt * dt,
                metric: MetricKind::Mrms,
                wall_seconds: 0.01 / dt,
                repeats: 1,
            })
            .collect()
    }

    #[test]
    fn slope_annotation() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_report(&synthetic(), ReportFormat::Svg, dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        let conv = fs::read_to_string(dir.path().join("convergence.svg")).unwrap();
        assert!(conv.contains("slope 2.00"));
    }

    #[test]
    fn csv_report() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_report(&synthetic()[..1], ReportFormat::Csv, dir.path()).unwrap();
        assert_eq!(fs::read_to_string(&files[0]).unwrap().lines().count(), 2);
        assert!(emit_report(&[], ReportFormat::Csv, dir.path()).is_err());
    }
}
