//! Column-by-column comparison of the CSV files of two runs.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ColumnDeviation {
    pub file: String,
    pub column: String,
    /// `max|a − b| / max(|a|, |b|)` over numeric cells; text cells count 0
    /// when equal and infinity otherwise.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub columns: Vec<ColumnDeviation>,
    pub tolerance: f64,
}

impl CompareReport {
    pub fn max_deviation(&self) -> f64 {
        self.columns.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.columns.iter().all(|c| c.deviation <= self.tolerance)
    }
}

fn csv_files(dir: &Path) -> Result<Vec<String>> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .map_err(CliError::io(dir))?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    Ok(names)
}

fn read_table(path: &PathBuf) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path).map_err(CliError::csv(path))?;
    let header = r.headers().map_err(CliError::csv(path))?.iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(String::from).collect()))
        .collect::<std::result::Result<Vec<Vec<String>>, _>>()
        .map_err(CliError::csv(path))?;
    Ok((header, rows))
}

fn column_deviation(a: &[&str], b: &[&str]) -> f64 {
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(x), Ok(y)) => {
                if x != y {
                    diff = diff.max((x - y).abs());
                }
                scale = scale.max(x.abs()).max(y.abs());
            }
            _ if x == y => {}
            _ => return f64::INFINITY,
        }
    }
    if diff == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

/// Compares every CSV present in either run. Missing files, differing
/// headers and differing row counts are schema errors.
pub fn compare_runs(a: &Path, b: &Path, tolerance: f64) -> Result<CompareReport> {
    let files = csv_files(a)?;
    let other = csv_files(b)?;
    if files != other {
        return Err(CliError::Schema(format!("CSV files differ: {files:?} vs {other:?}")));
    }
    let mut columns = Vec::new();
    for file in files {
        let (ha, ra) = read_table(&a.join(&file))?;
        let (hb, rb) = read_table(&b.join(&file))?;
        if ha != hb {
            return Err(CliError::Schema(format!("{file}: header {ha:?} vs {hb:?}")));
        }
        if ra.len() != rb.len() {
            return Err(CliError::Schema(format!("{file}: {} rows vs {}", ra.len(), rb.len())));
        }
        for (j, name) in ha.iter().enumerate() {
            let col = |rows: &[Vec<String>]| -> Vec<String> { rows.iter().map(|r| r.get(j).cloned().unwrap_or_default()).collect() };
            let (ca, cb) = (col(&ra), col(&rb));
            let (ca, cb): (Vec<&str>, Vec<&str>) = (ca.iter().map(String::as_str).collect(), cb.iter().map(String::as_str).collect());
            columns.push(ColumnDeviation { file: file.clone(), column: name.clone(), deviation: column_deviation(&ca, &cb) });
        }
    }
    Ok(CompareReport { columns, tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) {
        fs::write(dir.join(name), text).unwrap();
    }

    #[test]
    fn identical_runs_have_zero_deviation() {
        let a = tempfile::tempdir().unwrap();
        write(a.path(), "n.csv", "t,u,tag\n0.0,1.5,x\n1.0,-2.0,y\n");
        let r = compare_runs(a.path(), a.path(), 0.0).unwrap();
        assert_eq!(r.columns.len(), 3);
        assert_eq!(r.max_deviation(), 0.0);
        assert!(r.passed());
    }

    #[test]
    fn relative_deviation_per_column() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        write(a.path(), "n.csv", "t,u\n0.0,2.0\n1.0,4.0\n");
        write(b.path(), "n.csv", "t,u\n0.0,2.0\n1.0,4.04\n");
        let r = compare_runs(a.path(), b.path(), 1e-3).unwrap();
        assert_eq!(r.columns[0].deviation, 0.0);
        assert!((r.columns[1].deviation - 0.04 / 4.04).abs() < 1e-12);
        assert!(!r.passed());
    }

    #[test]
    fn text_mismatch_is_infinite() {
        assert_eq!(column_deviation(&["a", ""], &["a", ""]), 0.0);
        assert_eq!(column_deviation(&["a"], &["b"]), f64::INFINITY);
        assert_eq!(column_deviation(&["1.0"], &[""]), f64::INFINITY);
    }

    #[test]
    fn schema_mismatches() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        write(a.path(), "n.csv", "t,u\n0.0,1.0\n");
        write(b.path(), "n.csv", "t,v\n0.0,1.0\n");
        assert!(matches!(compare_runs(a.path(), b.path(), 1.0), Err(CliError::Schema(_))));
        write(b.path(), "n.csv", "t,u\n0.0,1.0\n1.0,1.0\n");
        assert!(matches!(compare_runs(a.path(), b.path(), 1.0), Err(CliError::Schema(_))));
        write(b.path(), "n.csv", "t,u\n0.0,1.0\n");
        write(b.path(), "extra.csv", "t\n0.0\n");
        assert!(matches!(compare_runs(a.path(), b.path(), 1.0), Err(CliError::Schema(_))));
    }
}
