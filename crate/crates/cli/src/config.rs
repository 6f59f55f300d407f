//! Run configuration: flat `key = value` text with dotted section prefixes.
//!
//! ```text
//! # comment
//! grid.n = 1
//! grid.N = 256
//! model.lambda = 3
//! ```
//!
//! Every key has a default listed in [`KEYS`]; unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use plate_core::mild::NormKind;
use plate_core::verify::{HypothesisPoint, LinearLemma, NonlinearEstimate, Theorem};
use plate_core::{
    Convention, Dealias, Field, NonlinearityParams, NormParams, SpectralGrid, TestFunction, TimeGrid,
};

use crate::error::{CliError, Result};

/// Known keys and their defaults. An empty default means "unset".
pub const KEYS: &[(&str, &str)] = &[
    ("experiment", ""),
    ("seed", "0"),
    ("output.dir", ""),
    ("grid.n", "1"),
    ("grid.N", "256"),
    ("grid.L", "40"),
    ("model.lambda", "3"),
    ("model.theta", "1"),
    ("model.delta", "-1"),
    ("model.convention", "paper"),
    ("model.dealias", "two_thirds"),
    ("model.theorem", "none"),
    ("time.dt", "0.01"),
    ("time.T", "1"),
    ("time.sampling", "log"),
    ("time.per_decade", "64"),
    ("time.stride", "1"),
    ("norms.s", "1"),
    ("norms.p", "2"),
    ("norms.q", "2"),
    ("norms.sigma", "-1"),
    ("data.u0.kind", "gaussian"),
    ("data.u0.width", "1"),
    ("data.u0.amplitude", "1"),
    ("data.u0.radius", "1"),
    ("data.u0.modes", "8"),
    ("data.u1.kind", "zero"),
    ("data.u1.width", "1"),
    ("data.u1.amplitude", "1"),
    ("data.u1.radius", "1"),
    ("data.u1.modes", "8"),
    ("solver", "march"),
    ("solver.substeps", "10"),
    ("solver.blowup_factor", "1e6"),
    ("solver.max_history", "100000000"),
    ("picard.max_iters", "20"),
    ("picard.tol", "1e-8"),
    ("picard.ball_radius", "inf"),
    ("picard.norm", "y"),
    ("picard.horizon", ""),
    ("picard.halvings", "0"),
    ("fit.window", ""),
    ("fit.tolerance", "0.1"),
    ("verify.lemmas", "all"),
    ("verify.t_min", "0.1"),
    ("verify.t_max", "100"),
    ("verify.samples", "64"),
    ("verify.k", "1"),
    ("verify.reps", "1"),
    ("verify.estimates", "all"),
    ("verify.pairs", "20"),
    ("verify.modes", "6"),
    ("verify.refine", "true"),
    ("verify.gamma.a", "0,1,edge"),
    ("verify.gamma.n", "1,2"),
    ("verify.gamma.t", "1,4,16,64"),
    ("verify.convolution.pairs", "1:1,1:2,0.5:1"),
    ("verify.convolution.t_min", "1"),
    ("verify.convolution.t_max", "100"),
    ("verify.convolution.samples", "30"),
    ("oracle.kind", "mol"),
    ("oracle.times", ""),
    ("oracle.refinements", "0"),
    ("compare.tolerance", "1e-4"),
    ("sweep.experiment", ""),
    ("sweep.key", ""),
    ("sweep.values", ""),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    Simulate,
    Picard,
    VerifyLinear,
    VerifyNonlinear,
    VerifyIntegrals,
    OracleCompare,
    Sweep,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Simulate,
        Experiment::Picard,
        Experiment::VerifyLinear,
        Experiment::VerifyNonlinear,
        Experiment::VerifyIntegrals,
        Experiment::OracleCompare,
        Experiment::Sweep,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::Picard => "picard",
            Experiment::VerifyLinear => "verify-linear",
            Experiment::VerifyNonlinear => "verify-nonlinear",
            Experiment::VerifyIntegrals => "verify-integrals",
            Experiment::OracleCompare => "oracle-compare",
            Experiment::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| CliError::Config(format!("unknown experiment '{s}'")))
    }
}

/// Parsed `key = value` pairs with line numbers, before typing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = i + 1;
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {lineno}: expected 'key = value'")))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.iter().any(|(known, _)| *known == k) {
                return Err(CliError::Config(format!("line {lineno}: unknown key '{k}'")));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::Config(format!("line {lineno}: duplicate key '{k}'")));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.iter().any(|(known, _)| *known == key) {
            return Err(CliError::Config(format!("unknown key '{key}'")));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    /// The value in force for `key`: explicit or default.
    pub fn get(&self, key: &str) -> &str {
        match self.entries.get(key) {
            Some(v) => v,
            None => KEYS
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, d)| *d)
                .unwrap_or_else(|| panic!("key '{key}' missing from the key table")),
        }
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self.get(key);
        v.parse()
            .map_err(|_| CliError::Config(format!("{key} = '{v}' does not parse as {}", std::any::type_name::<T>())))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        split_list(self.get(key))
            .map(|item| {
                item.parse()
                    .map_err(|_| CliError::Config(format!("{key}: cannot parse list item '{item}'")))
            })
            .collect()
    }

    fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        if self.get(key).is_empty() {
            Ok(None)
        } else {
            self.parsed(key).map(Some)
        }
    }

    /// Every known key with its effective value, one per line, sorted.
    pub fn snapshot(&self) -> String {
        let mut keys: Vec<&str> = KEYS.iter().map(|(k, _)| *k).collect();
        keys.sort_unstable();
        keys.into_iter().map(|k| format!("{k} = {}\n", self.get(k))).collect()
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

/// Initial data on the grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DataSpec {
    Zero,
    Function(TestFunction),
    /// Random band-limited field times `amplitude`.
    Random { modes: usize, seed: u64, amplitude: f64 },
}

impl DataSpec {
    fn from_raw(raw: &RawConfig, slot: &str, seed: u64) -> Result<Self> {
        let key = |k: &str| format!("data.{slot}.{k}");
        let amplitude: f64 = raw.parsed(&key("amplitude"))?;
        Ok(match raw.get(&key("kind")) {
            "zero" => DataSpec::Zero,
            "gaussian" => DataSpec::Function(TestFunction::Gaussian {
                width: raw.parsed(&key("width"))?,
                amplitude,
            }),
            "bump" => DataSpec::Function(TestFunction::Bump {
                radius: raw.parsed(&key("radius"))?,
                amplitude,
            }),
            "random" => DataSpec::Random {
                modes: raw.parsed(&key("modes"))?,
                seed,
                amplitude,
            },
            other => {
                return Err(CliError::Config(format!(
                    "{} = '{other}': expected zero, gaussian, bump or random",
                    key("kind")
                )))
            }
        })
    }

    pub fn sample(&self, grid: &Arc<SpectralGrid>) -> Result<Field> {
        Ok(match *self {
            DataSpec::Zero => Field::zeros(grid),
            DataSpec::Function(f) => f.sample(grid)?,
            DataSpec::Random { modes, seed, amplitude } => {
                TestFunction::RandomBandLimited { modes, seed }.sample(grid)?.scaled(amplitude)
            }
        })
    }

    /// The same data with a different random seed; other kinds are unchanged.
    pub fn reseeded(&self, seed: u64) -> Self {
        match *self {
            DataSpec::Random { modes, amplitude, .. } => DataSpec::Random { modes, seed, amplitude },
            other => other,
        }
    }

    pub fn label(&self) -> String {
        match self {
            DataSpec::Zero => "zero".into(),
            DataSpec::Function(f) => f.label(),
            DataSpec::Random { modes, seed, amplitude } => format!("random(modes={modes},seed={seed},A={amplitude})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    March,
    Mol,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Mol,
    ModeOde,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PicardSpec {
    pub max_iters: usize,
    pub tol: f64,
    pub ball_radius: f64,
    pub norm: NormKind,
    /// Number of times the data may be halved while looking for contraction.
    pub halvings: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifySpec {
    /// `None` means every lemma whose hypotheses hold.
    pub lemmas: Option<Vec<LinearLemma>>,
    pub times: Vec<f64>,
    pub k: usize,
    pub reps: usize,
    pub estimates: Vec<NonlinearEstimate>,
    pub pairs: usize,
    pub modes: usize,
    pub refine: bool,
    /// `(a, n)` points; `a = edge` resolves to `−n + 0.1`.
    pub gamma_points: Vec<(f64, usize)>,
    pub gamma_times: Vec<f64>,
    pub convolution_pairs: Vec<(f64, f64)>,
    pub convolution_times: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub experiment: Experiment,
    pub key: String,
    pub values: Vec<String>,
}

/// A validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub experiment: Experiment,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub grid: Arc<SpectralGrid>,
    pub model: NonlinearityParams,
    pub convention: Convention,
    pub theorem: Option<Theorem>,
    pub time_grid: TimeGrid,
    pub norms: NormParams,
    pub sigma: f64,
    pub q: f64,
    pub u0: DataSpec,
    pub u1: DataSpec,
    pub solver: Solver,
    pub substeps: usize,
    pub blowup_factor: f64,
    pub max_history: usize,
    pub picard: PicardSpec,
    pub fit_window: Option<(f64, f64)>,
    pub fit_tolerance: f64,
    pub verify: VerifySpec,
    pub oracle: OracleKind,
    pub oracle_times: Vec<f64>,
    pub refinements: usize,
    pub tolerance: f64,
    pub sweep: Option<SweepSpec>,
}

impl RunConfig {
    /// Types and validates `raw`. `experiment` overrides the `experiment` key.
    pub fn from_raw(mut raw: RawConfig, experiment: Option<Experiment>) -> Result<Self> {
        let experiment = match experiment {
            Some(e) => e,
            None if raw.get("experiment").is_empty() => {
                return Err(CliError::Config("no experiment given".into()))
            }
            None => raw.get("experiment").parse()?,
        };
        raw.set("experiment", experiment.id())?;
        let seed: u64 = raw.parsed("seed")?;

        let n: usize = raw.parsed("grid.n")?;
        let grid = SpectralGrid::new(n, raw.parsed("grid.N")?, raw.parsed("grid.L")?)?;

        let lambda: f64 = raw.parsed("model.lambda")?;
        let theta: f64 = raw.parsed("model.theta")?;
        let dealias = match raw.get("model.dealias") {
            "none" => Dealias::None,
            "two_thirds" => Dealias::TwoThirds,
            "zero_pad" => Dealias::ZeroPad,
            other => {
                return Err(CliError::Config(format!(
                    "model.dealias = '{other}': expected none, two_thirds or zero_pad"
                )))
            }
        };
        let model = NonlinearityParams::new(lambda, theta)?
            .with_delta(raw.parsed("model.delta")?)
            .with_dealias(dealias);
        model.validate()?;
        let convention = match raw.get("model.convention") {
            "paper" => Convention::Paper,
            "ivp" => Convention::Ivp,
            other => {
                return Err(CliError::Config(format!("model.convention = '{other}': expected paper or ivp")))
            }
        };

        let (s, p, q, sigma): (f64, f64, f64, f64) = (
            raw.parsed("norms.s")?,
            raw.parsed("norms.p")?,
            raw.parsed("norms.q")?,
            raw.parsed("norms.sigma")?,
        );
        let norms = NormParams::new(n, s, p, lambda, theta)?;
        let theorem = match raw.get("model.theorem") {
            "none" => None,
            id => Some(id.parse::<Theorem>()?),
        };
        if let Some(th) = theorem {
            th.check(&HypothesisPoint { n, s, sigma, p, q, lambda, theta })?;
        }

        let t_final: f64 = raw.parsed("time.T")?;
        let tg = TimeGrid::uniform(raw.parsed("time.dt")?, t_final)?;
        let time_grid = match raw.get("time.sampling") {
            "log" => tg.with_log_records(raw.parsed("time.per_decade")?),
            "all" => tg.with_all_records(),
            "stride" => tg.with_stride_records(raw.parsed("time.stride")?),
            other => {
                return Err(CliError::Config(format!("time.sampling = '{other}': expected log, all or stride")))
            }
        };

        let solver = match raw.get("solver") {
            "march" => Solver::March,
            "mol" => Solver::Mol,
            other => return Err(CliError::Config(format!("solver = '{other}': expected march or mol"))),
        };

        let horizon: Option<f64> = raw.optional("picard.horizon")?;
        let norm = match raw.get("picard.norm") {
            "y" => NormKind::Y,
            "x" => NormKind::X,
            "z" => NormKind::Z { horizon: horizon.unwrap_or(t_final) },
            other => return Err(CliError::Config(format!("picard.norm = '{other}': expected y, x or z"))),
        };
        let picard = PicardSpec {
            max_iters: raw.parsed("picard.max_iters")?,
            tol: raw.parsed("picard.tol")?,
            ball_radius: raw.parsed("picard.ball_radius")?,
            norm,
            halvings: raw.parsed("picard.halvings")?,
        };

        let fit_window = match raw.list::<f64>("fit.window")?.as_slice() {
            [] => None,
            &[lo, hi] => Some((lo, hi)),
            _ => return Err(CliError::Config("fit.window needs two values 'lo, hi'".into())),
        };

        let verify = verify_spec(&raw)?;
        let oracle = match raw.get("oracle.kind") {
            "mol" => OracleKind::Mol,
            "mode_ode" => OracleKind::ModeOde,
            other => return Err(CliError::Config(format!("oracle.kind = '{other}': expected mol or mode_ode"))),
        };

        let sweep = if experiment == Experiment::Sweep {
            let inner: Experiment = raw.get("sweep.experiment").parse()?;
            if inner == Experiment::Sweep {
                return Err(CliError::Config("sweep.experiment cannot be sweep".into()));
            }
            let key = raw.get("sweep.key").to_string();
            if !KEYS.iter().any(|(k, _)| *k == key) || key == "experiment" {
                return Err(CliError::Config(format!("sweep.key: unknown key '{key}'")));
            }
            let values: Vec<String> = split_list(raw.get("sweep.values")).map(String::from).collect();
            if values.is_empty() {
                return Err(CliError::Config("sweep.values is empty".into()));
            }
            Some(SweepSpec { experiment: inner, key, values })
        } else {
            None
        };

        let output_dir = raw.optional::<String>("output.dir")?.map(PathBuf::from);
        Ok(Self {
            experiment,
            seed,
            output_dir,
            grid,
            model,
            convention,
            theorem,
            time_grid,
            norms,
            sigma,
            q,
            u0: DataSpec::from_raw(&raw, "u0", seed)?,
            u1: DataSpec::from_raw(&raw, "u1", seed.wrapping_add(1))?,
            solver,
            substeps: raw.parsed("solver.substeps")?,
            blowup_factor: raw.parsed("solver.blowup_factor")?,
            max_history: raw.parsed("solver.max_history")?,
            picard,
            fit_window,
            fit_tolerance: raw.parsed("fit.tolerance")?,
            verify,
            oracle,
            oracle_times: raw.list("oracle.times")?,
            refinements: raw.parsed("oracle.refinements")?,
            tolerance: raw.parsed("compare.tolerance")?,
            sweep,
            raw,
        })
    }

    pub fn parse(text: &str, experiment: Option<Experiment>) -> Result<Self> {
        Self::from_raw(RawConfig::parse(text)?, experiment)
    }

    pub fn load(path: &Path, experiment: Option<Experiment>) -> Result<Self> {
        Self::from_raw(RawConfig::load(path)?, experiment)
    }

    /// Applies `--seed`, re-deriving the data seeds.
    pub fn with_seed(self, seed: u64) -> Result<Self> {
        let mut raw = self.raw;
        raw.set("seed", seed.to_string())?;
        Self::from_raw(raw, Some(self.experiment))
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }
}

fn verify_spec(raw: &RawConfig) -> Result<VerifySpec> {
    let lemmas = match raw.get("verify.lemmas") {
        "all" => None,
        _ => Some(raw.list::<String>("verify.lemmas")?.iter().map(|l| l.parse()).collect::<plate_core::Result<_>>()?),
    };
    let estimates = match raw.get("verify.estimates") {
        "all" => NonlinearEstimate::ALL.to_vec(),
        _ => raw.list::<String>("verify.estimates")?.iter().map(|e| e.parse()).collect::<plate_core::Result<_>>()?,
    };
    let (t_min, t_max, samples): (f64, f64, usize) =
        (raw.parsed("verify.t_min")?, raw.parsed("verify.t_max")?, raw.parsed("verify.samples")?);
    if !(t_min > 0.0 && t_max > t_min) || samples < 2 {
        return Err(CliError::Config(format!(
            "verify times need 0 < t_min < t_max and samples >= 2 (got {t_min}, {t_max}, {samples})"
        )));
    }

    let ns: Vec<usize> = raw.list("verify.gamma.n")?;
    let mut gamma_points = Vec::new();
    for a in split_list(raw.get("verify.gamma.a")) {
        for &n in &ns {
            let value = if a == "edge" {
                -(n as f64) + 0.1
            } else {
                a.parse().map_err(|_| CliError::Config(format!("verify.gamma.a: cannot parse '{a}'")))?
            };
            gamma_points.push((value, n));
        }
    }

    let convolution_pairs = split_list(raw.get("verify.convolution.pairs"))
        .map(|pair| {
            pair.split_once(':')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| CliError::Config(format!("verify.convolution.pairs: expected 'a:b', got '{pair}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    let (c_min, c_max, c_samples): (f64, f64, usize) = (
        raw.parsed("verify.convolution.t_min")?,
        raw.parsed("verify.convolution.t_max")?,
        raw.parsed("verify.convolution.samples")?,
    );

    Ok(VerifySpec {
        lemmas,
        times: plate_core::verify::log_times(t_min, t_max, samples),
        k: raw.parsed("verify.k")?,
        reps: raw.parsed::<usize>("verify.reps")?.max(1),
        estimates,
        pairs: raw.parsed("verify.pairs")?,
        modes: raw.parsed("verify.modes")?,
        refine: raw.parsed("verify.refine")?,
        gamma_points,
        gamma_times: raw.list("verify.gamma.t")?,
        convolution_pairs,
        convolution_times: plate_core::verify::log_times(c_min, c_max, c_samples),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_keys() {
        let cfg = RunConfig::parse("grid.N = 64\n", Some(Experiment::Simulate)).unwrap();
        assert_eq!(cfg.grid.points_per_axis(), 64);
        assert_eq!(cfg.model.lambda, 3.0);
        assert_eq!(cfg.model.delta, -1.0);
        assert_eq!(cfg.convention, Convention::Paper);
        assert_eq!(cfg.u1, DataSpec::Zero);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = RawConfig::parse("grid.N = 64\ngrid.M = 3\n").unwrap_err().to_string();
        assert!(err.contains("'grid.M'") && err.contains("line 2"), "{err}");
    }

    #[test]
    fn duplicates_and_garbage_rejected() {
        assert!(RawConfig::parse("seed = 1\nseed = 2").is_err());
        assert!(RawConfig::parse("just words").is_err());
        let err = RunConfig::parse("grid.N = many", Some(Experiment::Simulate)).unwrap_err();
        assert!(err.to_string().contains("grid.N"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let raw = RawConfig::parse("# header\n\n  model.theta = 0.5   # inline\n").unwrap();
        assert_eq!(raw.get("model.theta"), "0.5");
    }

    #[test]
    fn theorem_checked_at_load() {
        // n = 1, λ = 3: n(λ−2) = 1 is not > 2.
        let err = RunConfig::parse("model.theorem = global_hs", Some(Experiment::Simulate)).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("n(lambda-2) > 2"), "{err}");
        assert!(RunConfig::parse("model.theorem = global_hs\ngrid.n = 2\nmodel.lambda = 4.5", Some(Experiment::Simulate)).is_ok());
    }

    #[test]
    fn model_errors_are_config_errors() {
        let err = RunConfig::parse("model.lambda = 1.5", Some(Experiment::Simulate)).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn gamma_edge_resolves_per_dimension() {
        let cfg = RunConfig::parse("verify.gamma.a = edge\nverify.gamma.n = 1,2", Some(Experiment::VerifyIntegrals)).unwrap();
        assert_eq!(cfg.verify.gamma_points, vec![(-0.9, 1), (-1.9, 2)]);
    }

    #[test]
    fn snapshot_lists_every_key_sorted() {
        let raw = RawConfig::parse("grid.N = 64").unwrap();
        let snap = raw.snapshot();
        assert_eq!(snap.lines().count(), KEYS.len());
        assert!(snap.contains("grid.N = 64\n"));
        let keys: Vec<&str> = snap.lines().map(|l| l.split(" = ").next().unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn random_data_seeds_follow_the_run_seed() {
        let cfg = RunConfig::parse("data.u0.kind = random\ndata.u1.kind = random\nseed = 7", Some(Experiment::Simulate)).unwrap();
        assert_eq!(cfg.u0, DataSpec::Random { modes: 8, seed: 7, amplitude: 1.0 });
        assert_eq!(cfg.u1, DataSpec::Random { modes: 8, seed: 8, amplitude: 1.0 });
        let cfg = cfg.with_seed(11).unwrap();
        assert_eq!(cfg.u0, DataSpec::Random { modes: 8, seed: 11, amplitude: 1.0 });
    }

    #[test]
    fn sweep_needs_a_known_key() {
        let base = "sweep.experiment = simulate\nsweep.values = 2,3\n";
        assert!(RunConfig::parse(&format!("{base}sweep.key = model.lambda"), Some(Experiment::Sweep)).is_ok());
        assert!(RunConfig::parse(&format!("{base}sweep.key = model.gamma"), Some(Experiment::Sweep)).is_err());
    }
}
