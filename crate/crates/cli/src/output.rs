//! Run directories and the files written into them.
//!
//! A run is staged in `<dir>.partial` and renamed to `<dir>` when it ends.
//! A run that ends in an error still gets renamed, with a `FAILED` marker
//! holding the message.

use std::fs;
use std::path::{Path, PathBuf};

use plate_core::{DecayFit, LemmaReport, NormParams, NormRecord};

use crate::error::{CliError, Result};

pub const FAILED_MARKER: &str = "FAILED";
pub const SUMMARY: &str = "summary.json";
pub const CONFIG_SNAPSHOT: &str = "config.txt";

pub const NORM_COLUMNS: [&str; 8] = ["t", "linf", "hs", "hs_minus1", "hsp", "weighted_y", "weighted_x", "weighted_z"];
pub const REPORT_COLUMNS: [&str; 6] = ["lemma", "point", "c_emp", "explicit_constant", "pass", "note"];
pub const SAMPLE_COLUMNS: [&str; 6] = ["lemma", "point", "t", "lhs", "rhs", "ratio"];
pub const FIT_COLUMNS: [&str; 11] = [
    "curve", "t_lo", "t_hi", "samples", "slope", "intercept", "r_squared", "expected", "tolerance", "pass", "consistent",
];

/// Shortest decimal string that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// A run directory being written.
#[derive(Debug)]
pub struct RunDir {
    target: PathBuf,
    staging: PathBuf,
    artifacts: Vec<String>,
}

impl RunDir {
    /// Creates the staging directory. An existing `target` is replaced only if
    /// it holds a summary or a failure marker from an earlier run.
    pub fn create(target: &Path) -> Result<Self> {
        if target.exists() {
            let earlier_run = target.join(SUMMARY).exists() || target.join(FAILED_MARKER).exists();
            if !earlier_run {
                return Err(CliError::Config(format!(
                    "{} exists and is not a run directory; refusing to overwrite",
                    target.display()
                )));
            }
        }
        let staging = staging_path(target);
        if staging.exists() {
            fs::remove_dir_all(&staging).map_err(CliError::io(&staging))?;
        }
        fs::create_dir_all(&staging).map_err(CliError::io(&staging))?;
        Ok(Self {
            target: target.to_path_buf(),
            staging,
            artifacts: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.staging
    }

    pub fn target(&self) -> &Path {
        &self.target
    }

    /// Names of the files written so far, in order.
    pub fn artifacts(&self) -> &[String] {
        &self.artifacts
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.staging.join(name);
        fs::write(&path, text).map_err(CliError::io(&path))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    /// Writes a CSV with a header line.
    pub fn write_csv<R, I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let path = self.staging.join(name);
        let mut w = csv::Writer::from_path(&path).map_err(CliError::csv(&path))?;
        w.write_record(header).map_err(CliError::csv(&path))?;
        for row in rows {
            w.write_record(row.into_iter().collect::<Vec<_>>()).map_err(CliError::csv(&path))?;
        }
        w.flush().map_err(CliError::io(&path))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    /// Two-column whitespace-separated plot data.
    pub fn write_dat(&mut self, name: &str, columns: (&str, &str), points: &[(f64, f64)]) -> Result<()> {
        let mut text = format!("# {} {}\n", columns.0, columns.1);
        for (x, y) in points {
            text.push_str(&format!("{} {}\n", num(*x), num(*y)));
        }
        self.write_text(name, &text)
    }

    /// Moves the staged files into place.
    pub fn finish(self) -> Result<PathBuf> {
        if self.target.exists() {
            fs::remove_dir_all(&self.target).map_err(CliError::io(&self.target))?;
        }
        fs::rename(&self.staging, &self.target).map_err(CliError::io(&self.target))?;
        Ok(self.target)
    }

    /// Marks the run failed and moves whatever was written into place.
    pub fn fail(mut self, message: &str) -> Result<PathBuf> {
        self.write_text(FAILED_MARKER, &format!("{message}\n"))?;
        self.finish()
    }
}

fn staging_path(target: &Path) -> PathBuf {
    let mut name = target.file_name().map(|n| n.to_os_string()).unwrap_or_else(|| "run".into());
    name.push(".partial");
    target.with_file_name(name)
}

pub fn norm_rows<'a>(records: &'a [NormRecord], params: &'a NormParams) -> impl Iterator<Item = Vec<String>> + 'a {
    records.iter().map(move |r| {
        vec![
            num(r.t),
            num(r.linf),
            num(r.hs),
            num(r.hs_minus1),
            num(r.hsp),
            num(r.weighted_y(params)),
            num(r.weighted_x(params)),
            num(r.weighted_z(params)),
        ]
    })
}

pub fn point_label(report: &LemmaReport) -> String {
    report
        .point
        .iter()
        .map(|(k, v)| format!("{k}={}", num(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn report_row(r: &LemmaReport) -> Vec<String> {
    vec![
        r.lemma.clone(),
        point_label(r),
        num(r.c_emp),
        r.explicit_constant.to_string(),
        r.pass.to_string(),
        r.note.clone(),
    ]
}

pub fn sample_rows(r: &LemmaReport) -> impl Iterator<Item = Vec<String>> + '_ {
    let point = point_label(r);
    r.samples
        .iter()
        .map(move |s| vec![r.lemma.clone(), point.clone(), num(s.t), num(s.lhs), num(s.rhs), num(s.ratio)])
}

pub fn fit_row(curve: &str, f: &DecayFit) -> Vec<String> {
    vec![
        curve.to_string(),
        num(f.t_lo),
        num(f.t_hi),
        f.samples.to_string(),
        num(f.slope),
        num(f.intercept),
        num(f.r_squared),
        num(f.expected),
        num(f.tolerance),
        f.pass.to_string(),
        f.consistent.to_string(),
    ]
}

/// A gnuplot script that draws each `.dat` file on log-log axes.
pub fn plot_script(dat_files: &[(String, String)]) -> String {
    let mut s = String::from("set logscale xy\nset xlabel 't'\nset key outside\nplot \\\n");
    let lines: Vec<String> = dat_files
        .iter()
        .map(|(file, title)| format!("  '{file}' using 1:2 with linespoints title '{title}'"))
        .collect();
    s.push_str(&lines.join(", \\\n"));
    s.push('\n');
    s
}
