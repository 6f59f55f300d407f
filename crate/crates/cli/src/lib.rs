//! Configuration, orchestration and file output for the `plate` command.

pub mod compare;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use compare::{compare_runs, CompareReport};
pub use config::{Experiment, RawConfig, RunConfig};
pub use error::{CliError, Result};
pub use experiments::{run, Criterion, Outcome, RunStatus};

use std::path::{Path, PathBuf};

/// Environment variable naming the default output root.
pub const OUTPUT_ROOT_VAR: &str = "PLATE_OUT";

/// `--out`, else `output.dir`, else `<root>/<experiment>-<config stem>` with
/// `root` from [`OUTPUT_ROOT_VAR`] or `runs`.
pub fn output_dir(cfg: &RunConfig, out: Option<&Path>, config_path: &Path) -> PathBuf {
    if let Some(p) = out {
        return p.to_path_buf();
    }
    if let Some(p) = &cfg.output_dir {
        return p.clone();
    }
    let root = std::env::var_os(OUTPUT_ROOT_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("runs"));
    let stem = config_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "config".into());
    root.join(format!("{}-{stem}", cfg.experiment))
}
