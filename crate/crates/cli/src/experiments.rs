//! The experiments behind each subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde_json::json;

use plate_core::mild::PicardStatus;
use plate_core::nonlinear::bessel_inverse;
use plate_core::verify::integrals::{gamma_lemma_bound, gamma_lemma_lhs};
use plate_core::verify::oracles::MolConfig;
use plate_core::verify::{
    check_gamma_lemma, check_linear_lemma, check_nonlinear_estimate, check_time_convolution, fit_decay,
    mode_ode_oracle, mol_oracle, relative_l2, LinearLemma, LinearLemmaParams, NonlinearEstimateParams,
};
use plate_core::{
    linear_solution, march, picard, Convention, DecayFit, Field, LemmaReport, MarchConfig, MildSolution,
    PicardConfig, SolveStatus, SpectralGrid, TestFunction, TimeGrid,
};

use crate::config::{Experiment, OracleKind, RunConfig, Solver};
use crate::error::{CliError, Result};
use crate::output::{
    fit_row, norm_rows, num, plot_script, report_row, sample_rows, RunDir, CONFIG_SNAPSHOT, FIT_COLUMNS,
    NORM_COLUMNS, REPORT_COLUMNS, SAMPLE_COLUMNS, SUMMARY,
};

/// `erf(1)`, the Γ-lemma ratio at `a = 0, n = 1, t = 4`.
pub const GAMMA_SPOT_VALUE: f64 = 0.842_700_792_949_714_9;
pub const GAMMA_SPOT_TOLERANCE: f64 = 1e-3;
/// Accepted range of successive error ratios under `Δt → Δt/2` for a second-order scheme.
pub const ORDER_BAND: (f64, f64) = (3.5, 4.5);

#[derive(Clone, Debug, PartialEq)]
pub struct Criterion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    Diverged,
}

impl RunStatus {
    pub fn label(self) -> &'static str {
        match self {
            RunStatus::Completed => "completed",
            RunStatus::Diverged => "diverged",
        }
    }
}

/// What a finished run produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub experiment: Experiment,
    pub status: RunStatus,
    pub criteria: Vec<Criterion>,
    pub metrics: BTreeMap<String, f64>,
    pub reports: Vec<LemmaReport>,
    pub fits: Vec<(String, DecayFit)>,
    pub notes: Vec<String>,
    pub dir: PathBuf,
}

impl Outcome {
    fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            status: RunStatus::Completed,
            criteria: Vec::new(),
            metrics: BTreeMap::new(),
            reports: Vec::new(),
            fits: Vec::new(),
            notes: Vec::new(),
            dir: PathBuf::new(),
        }
    }

    fn criterion(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.criteria.push(Criterion { name: name.into(), pass, detail: detail.into() });
    }

    fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.status == RunStatus::Completed && self.criteria.iter().all(|c| c.pass)
    }

    pub fn fit(&self, curve: &str) -> Option<&DecayFit> {
        self.fits.iter().find(|(c, _)| c == curve).map(|(_, f)| f)
    }

    /// 0 pass, 2 diverged, 3 a criterion failed.
    pub fn exit_code(&self) -> i32 {
        match (self.status, self.passed()) {
            (RunStatus::Diverged, _) => 2,
            (_, true) => 0,
            (_, false) => 3,
        }
    }
}

/// Runs `cfg` into `target`, staging the files and writing the summary last.
pub fn run(cfg: &RunConfig, target: &Path) -> Result<Outcome> {
    let start = Instant::now();
    let mut dir = RunDir::create(target)?;
    dir.write_text(CONFIG_SNAPSHOT, &cfg.raw.snapshot())?;
    info!("{} -> {}", cfg.experiment, target.display());
    let result = match cfg.experiment {
        Experiment::Simulate => simulate(cfg, &mut dir),
        Experiment::Picard => picard_run(cfg, &mut dir),
        Experiment::VerifyLinear => verify_linear(cfg, &mut dir),
        Experiment::VerifyNonlinear => verify_nonlinear(cfg, &mut dir),
        Experiment::VerifyIntegrals => verify_integrals(cfg, &mut dir),
        Experiment::OracleCompare => oracle_compare(cfg, &mut dir),
        Experiment::Sweep => sweep(cfg, &mut dir),
    };
    let wall = start.elapsed().as_secs_f64();
    match result {
        Ok(mut out) => {
            let summary = summary_json(cfg, Some(&out), None, wall, dir.artifacts());
            dir.write_text(SUMMARY, &summary)?;
            out.dir = dir.finish()?;
            Ok(out)
        }
        Err(e) => {
            let summary = summary_json(cfg, None, Some(&e), wall, dir.artifacts());
            dir.write_text(SUMMARY, &summary)?;
            dir.fail(&e.to_string())?;
            Err(e)
        }
    }
}

fn summary_json(cfg: &RunConfig, out: Option<&Outcome>, err: Option<&CliError>, wall: f64, artifacts: &[String]) -> String {
    let config: BTreeMap<String, String> = cfg
        .raw
        .snapshot()
        .lines()
        .filter_map(|l| l.split_once(" = ").map(|(k, v)| (k.to_string(), v.to_string())))
        .collect();
    let body = match out {
        Some(o) => json!({
            "experiment": cfg.experiment.id(),
            "status": o.status.label(),
            "passed": o.passed(),
            "exit_code": o.exit_code(),
            "wall_time_s": wall,
            "criteria": o.criteria.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
            "metrics": o.metrics,
            "notes": o.notes,
            "artifacts": artifacts,
            "config": config,
        }),
        None => json!({
            "experiment": cfg.experiment.id(),
            "status": "failed",
            "passed": false,
            "exit_code": err.map_or(1, CliError::exit_code),
            "error": err.map(|e| e.to_string()),
            "wall_time_s": wall,
            "artifacts": artifacts,
            "config": config,
        }),
    };
    serde_json::to_string_pretty(&body).expect("summary is plain data") + "\n"
}

fn data(cfg: &RunConfig) -> Result<(Field, Field)> {
    Ok((cfg.u0.sample(&cfg.grid)?, cfg.u1.sample(&cfg.grid)?))
}

fn march_config(cfg: &RunConfig) -> MarchConfig {
    MarchConfig {
        convention: cfg.convention,
        blowup_factor: cfg.blowup_factor,
        max_history: cfg.max_history,
        norms: Some(cfg.norms),
    }
}

fn solve(cfg: &RunConfig, u0: &Field, u1: &Field, solver: Solver, tg: &TimeGrid) -> Result<MildSolution> {
    Ok(match solver {
        Solver::March => march(u0, u1, &cfg.model, tg, &march_config(cfg))?,
        Solver::Mol => {
            let mol = MolConfig { substeps: cfg.substeps, convention: cfg.convention, norms: Some(cfg.norms) };
            mol_oracle(u0, u1, &cfg.model, tg, &mol)?
        }
    })
}

fn note_status(out: &mut Outcome, status: &SolveStatus) {
    if let SolveStatus::Diverged { step, max_abs } = status {
        out.status = RunStatus::Diverged;
        out.notes.push(format!("diverged at step {step} with max |u| = {max_abs:e}"));
        warn!("solution diverged at step {step}");
    }
}

/// The configured window, else `default` when it holds at least ten records.
fn fit_window(cfg: &RunConfig, series: &[(f64, f64)], default: (f64, f64)) -> Option<(f64, f64)> {
    cfg.fit_window.or_else(|| {
        let count = series.iter().filter(|(t, _)| *t >= default.0 && *t <= default.1).count();
        (default.1 > default.0 && count >= 10).then_some(default)
    })
}

fn write_profile(dir: &mut RunDir, grid: &Arc<SpectralGrid>, u: &Field, ut: &Field) -> Result<()> {
    let x = grid.coordinates();
    let n = grid.points_per_axis();
    let rows = (0..grid.len()).map(|i| {
        let mut row = match grid.dim() {
            1 => vec![num(x[i])],
            _ => vec![num(x[i / n]), num(x[i % n])],
        };
        row.push(num(u.values()[i]));
        row.push(num(ut.values()[i]));
        row
    });
    let header: &[&str] = if grid.dim() == 1 { &["x", "u", "ut"] } else { &["x", "y", "u", "ut"] };
    dir.write_csv("profile.csv", header, rows)
}

fn write_solution(cfg: &RunConfig, dir: &mut RunDir, sol: &MildSolution) -> Result<()> {
    dir.write_csv("norms.csv", &NORM_COLUMNS, norm_rows(&sol.norm_records, &cfg.norms))?;
    let last = sol.final_state();
    write_profile(dir, &cfg.grid, &last.u, &last.ut)?;
    let positive = |f: &dyn Fn(&plate_core::NormRecord) -> f64| -> Vec<(f64, f64)> {
        sol.norm_records.iter().filter(|r| r.t > 0.0).map(|r| (r.t, f(r))).collect()
    };
    dir.write_dat("linf.dat", ("t", "linf"), &positive(&|r| r.linf))?;
    dir.write_dat("weighted_y.dat", ("t", "weighted_y"), &positive(&|r| r.weighted_y(&cfg.norms)))?;
    dir.write_text(
        "plot.gp",
        &plot_script(&[("linf.dat".into(), "linf".into()), ("weighted_y.dat".into(), "weighted_y".into())]),
    )
}

fn write_fits(dir: &mut RunDir, fits: &[(String, DecayFit)]) -> Result<()> {
    dir.write_csv("fits.csv", &FIT_COLUMNS, fits.iter().map(|(c, f)| fit_row(c, f)))
}

fn write_reports(dir: &mut RunDir, reports: &[LemmaReport]) -> Result<()> {
    dir.write_csv("reports.csv", &REPORT_COLUMNS, reports.iter().map(report_row))?;
    dir.write_csv("samples.csv", &SAMPLE_COLUMNS, reports.iter().flat_map(sample_rows))
}

fn simulate(cfg: &RunConfig, dir: &mut RunDir) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::Simulate);
    let (u0, u1) = data(cfg)?;
    let sol = solve(cfg, &u0, &u1, cfg.solver, &cfg.time_grid)?;
    note_status(&mut out, &sol.status);
    write_solution(cfg, dir, &sol)?;
    out.criterion("completed", sol.completed(), sol.status.label());

    let series: Vec<(f64, f64)> = sol.norm_records.iter().map(|r| (r.t, r.linf)).collect();
    let t_end = sol.final_state().t;
    if let Some(window) = fit_window(cfg, &series, (20.0, t_end / 2.0)) {
        let fit = fit_decay(&series, -cfg.norms.alpha1(), window, cfg.fit_tolerance)?;
        out.criterion(
            "linf_decay",
            fit.consistent,
            format!("slope {} vs bound {} over [{}, {}]", fit.slope, fit.expected, fit.t_lo, fit.t_hi),
        );
        out.fits.push(("linf".into(), fit));
    }
    write_fits(dir, &out.fits)?;
    if let Some(last) = sol.norm_records.last() {
        out.metric("final_linf", last.linf);
        out.metric("final_hs", last.hs);
    }
    out.metric("y_norm", sol.y_norm(&cfg.norms)?);
    Ok(out)
}

fn picard_run(cfg: &RunConfig, dir: &mut RunDir) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::Picard);
    let (u0, u1) = data(cfg)?;
    let pc = PicardConfig {
        max_iters: cfg.picard.max_iters,
        tol: cfg.picard.tol,
        ball_radius: cfg.picard.ball_radius,
        norm_kind: cfg.picard.norm,
        norm_params: cfg.norms,
        march: march_config(cfg),
    };
    let mut scale = 1.0;
    let mut attempts = Vec::new();
    let outcome = loop {
        let run = picard(&u0.scaled(scale), &u1.scaled(scale), &cfg.model, &cfg.time_grid, &pc)?;
        let contracting = run.ratios.iter().all(|r| *r < 1.0);
        attempts.push(vec![
            num(scale),
            format!("{:?}", run.status),
            run.iterations().to_string(),
            contracting.to_string(),
        ]);
        info!("picard at scale {scale}: {:?} after {} iterations", run.status, run.iterations());
        if (run.converged() && contracting) || attempts.len() > cfg.picard.halvings {
            break run;
        }
        scale /= 2.0;
    };
    dir.write_csv("attempts.csv", &["scale", "status", "iterations", "contracting"], attempts)?;

    let sol = &outcome.solution;
    if outcome.status == PicardStatus::Diverged {
        out.status = RunStatus::Diverged;
        out.notes.push("an iterate diverged".into());
    }
    note_status(&mut out, &sol.status);
    let rows = (0..outcome.distances.len()).map(|m| {
        vec![
            m.to_string(),
            num(outcome.distances[m]),
            m.checked_sub(1).and_then(|j| outcome.ratios.get(j)).map_or(String::new(), |r| num(*r)),
            outcome.iterate_norms.get(m + 1).map_or(String::new(), |v| num(*v)),
        ]
    });
    dir.write_csv("distances.csv", &["m", "distance", "ratio", "iterate_norm"], rows)?;
    write_solution(cfg, dir, sol)?;

    let max_ratio = outcome.ratios.iter().copied().fold(0.0, f64::max);
    out.criterion(
        "converged",
        outcome.converged(),
        format!("{:?} after {} iterations", outcome.status, outcome.iterations()),
    );
    out.criterion(
        "contraction",
        outcome.ratios.iter().all(|r| *r < 1.0),
        format!("max d(m+1)/d(m) = {max_ratio}"),
    );
    if cfg.picard.ball_radius.is_finite() {
        out.criterion("in_ball", outcome.in_ball, format!("radius {}", cfg.picard.ball_radius));
    }

    let a1 = cfg.norms.alpha1();
    let series: Vec<(f64, f64)> =
        sol.norm_records.iter().map(|r| (r.t, (1.0 + r.t).powf(a1) * r.linf)).collect();
    let t_end = sol.final_state().t;
    if let Some(window) = fit_window(cfg, &series, (1.0, t_end)) {
        let fit = fit_decay(&series, 0.0, window, cfg.fit_tolerance)?;
        out.criterion(
            "bounded_weighted_linf",
            fit.consistent,
            format!("slope of (1+t)^{a1} linf = {} over [{}, {}]", fit.slope, fit.t_lo, fit.t_hi),
        );
        out.fits.push(("weighted_linf".into(), fit));
    }
    write_fits(dir, &out.fits)?;
    out.metric("scale", scale);
    out.metric("iterations", outcome.iterations() as f64);
    out.metric("max_ratio", max_ratio);
    if let Some(d) = outcome.distances.last() {
        out.metric("final_distance", *d);
    }
    out.metric("y_norm", sol.y_norm(&cfg.norms)?);
    Ok(out)
}

fn verify_linear(cfg: &RunConfig, dir: &mut RunDir) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::VerifyLinear);
    let params = LinearLemmaParams {
        theta: cfg.model.theta,
        s: cfg.norms.s,
        sigma: cfg.sigma,
        p: cfg.norms.p(),
        k: cfg.verify.k,
        window: cfg.fit_window,
        tolerance: cfg.fit_tolerance,
    };
    let times = &cfg.verify.times;
    let sample = |rep: usize| cfg.u0.reseeded(cfg.seed.wrapping_add(rep as u64)).sample(&cfg.grid);

    // Named lemmas must satisfy their hypotheses; check all of them before the sweep.
    let lemmas = match &cfg.verify.lemmas {
        Some(named) => {
            let g = sample(0)?;
            let probe = LinearLemmaParams { window: None, ..params };
            for &lemma in named {
                check_linear_lemma(lemma, &g, &probe, &times[..1])?;
            }
            named.clone()
        }
        None => LinearLemma::ALL.to_vec(),
    };

    let mut dat = Vec::new();
    for lemma in lemmas {
        let mut reports = Vec::new();
        for rep in 0..cfg.verify.reps {
            let g = sample(rep)?;
            match check_linear_lemma(lemma, &g, &params, times) {
                Err(plate_core::Error::Hypothesis(m)) if cfg.verify.lemmas.is_none() => {
                    out.notes.push(format!("{lemma} skipped: {m}"));
                    break;
                }
                Err(e) => return Err(e.into()),
                Ok((mut report, fit)) => {
                    report.point.push(("rep".into(), rep as f64));
                    if let Some(fit) = fit {
                        out.fits.push((format!("{lemma}#{rep}"), fit));
                    }
                    reports.push(report);
                }
            }
        }
        if reports.is_empty() {
            continue;
        }
        let c_max = reports.iter().map(|r| r.c_emp).fold(0.0, f64::max);
        let pass = reports.iter().all(|r| r.pass);
        out.criterion(lemma.id(), pass, format!("C_emp max {c_max} over {} data", reports.len()));
        out.metric(format!("{lemma}.c_emp"), c_max);
        let name = format!("{lemma}.dat");
        let lhs: Vec<(f64, f64)> = reports[0].samples.iter().map(|s| (s.t, s.lhs)).collect();
        dir.write_dat(&name, ("t", "lhs"), &lhs)?;
        dat.push((name, lemma.id().to_string()));
        out.reports.extend(reports);
    }
    write_reports(dir, &out.reports)?;
    write_fits(dir, &out.fits)?;
    dir.write_text("plot.gp", &plot_script(&dat))?;
    Ok(out)
}

fn verify_nonlinear(cfg: &RunConfig, dir: &mut RunDir) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::VerifyNonlinear);
    let params = NonlinearEstimateParams {
        s: cfg.norms.s,
        p: cfg.norms.p(),
        q: cfg.q,
        lambda: cfg.model.lambda,
        dealias: cfg.model.dealias,
        refine: cfg.verify.refine,
    };
    let (modes, seed) = (cfg.verify.modes, cfg.seed);
    let sampler = move |grid: &Arc<SpectralGrid>, rep: usize| {
        let base = seed.wrapping_add(2 * rep as u64);
        let f = TestFunction::RandomBandLimited { modes, seed: base }.sample(grid)?;
        let g = TestFunction::RandomBandLimited { modes, seed: base.wrapping_add(1) }.sample(grid)?;
        Ok((f, g))
    };
    for &which in &cfg.verify.estimates {
        let report = check_nonlinear_estimate(which, &cfg.grid, &params, &sampler, cfg.verify.pairs)?;
        out.criterion(which.id(), report.pass, format!("C_emp {}; {}", report.c_emp, report.note));
        out.metric(format!("{which}.c_emp"), report.c_emp);
        out.reports.push(report);
    }
    write_reports(dir, &out.reports)?;
    Ok(out)
}

fn verify_integrals(cfg: &RunConfig, dir: &mut RunDir) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::VerifyIntegrals);
    let mut dat = Vec::new();
    for &(a, n) in &cfg.verify.gamma_points {
        let report = check_gamma_lemma(a, n, &cfg.verify.gamma_times)?;
        let name = format!("gamma(n={n},a={})", num(a));
        out.criterion(&name, report.pass, format!("max ratio {}", report.c_emp));
        let file = format!("gamma_n{n}_a{}.dat", num(a));
        let pts: Vec<(f64, f64)> = report.samples.iter().map(|s| (s.t, s.ratio)).collect();
        dir.write_dat(&file, ("t", "ratio"), &pts)?;
        dat.push((file, name));
        out.reports.push(report);
    }
    if !cfg.verify.gamma_points.is_empty() {
        let spot = gamma_lemma_lhs(0.0, 1, 4.0)? / gamma_lemma_bound(0.0, 1, 4.0);
        out.criterion(
            "gamma_spot",
            (spot - GAMMA_SPOT_VALUE).abs() <= GAMMA_SPOT_TOLERANCE,
            format!("ratio at a=0, n=1, t=4 is {spot}; erf(1) = {GAMMA_SPOT_VALUE}"),
        );
        out.metric("gamma_spot", spot);
    }
    for &(a, b) in &cfg.verify.convolution_pairs {
        let report = check_time_convolution(a, b, &cfg.verify.convolution_times)?;
        let name = format!("convolution(a={},b={})", num(a), num(b));
        out.criterion(&name, report.pass, report.note.clone());
        let file = format!("convolution_a{}_b{}.dat", num(a), num(b));
        let pts: Vec<(f64, f64)> = report.samples.iter().map(|s| (s.t, s.ratio)).collect();
        dir.write_dat(&file, ("t", "ratio"), &pts)?;
        dat.push((file, name));
        out.reports.push(report);
    }
    write_reports(dir, &out.reports)?;
    dir.write_text("plot.gp", &plot_script(&dat))?;
    Ok(out)
}

fn oracle_compare(cfg: &RunConfig, dir: &mut RunDir) -> Result<Outcome> {
    match cfg.oracle {
        OracleKind::Mol => compare_mol(cfg, dir),
        OracleKind::ModeOde => compare_mode_ode(cfg, dir),
    }
}

fn compare_mol(cfg: &RunConfig, dir: &mut RunDir) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::OracleCompare);
    let (u0, u1) = data(cfg)?;
    let tg = &cfg.time_grid;
    let reference = solve(cfg, &u0, &u1, Solver::Mol, tg)?;
    let marched = solve(cfg, &u0, &u1, Solver::March, tg)?;
    note_status(&mut out, &reference.status);
    note_status(&mut out, &marched.status);
    let len = reference.trajectory.len().min(marched.trajectory.len());
    let rows = tg
        .records()
        .iter()
        .filter(|&&k| k < len)
        .map(|&k| {
            let (a, b) = (&marched.trajectory[k], &reference.trajectory[k]);
            Ok((a.t, relative_l2(&a.u, &b.u)?, relative_l2(&a.ut, &b.ut)?))
        })
        .collect::<plate_core::Result<Vec<_>>>()?;
    dir.write_csv(
        "compare.csv",
        &["t", "rel_l2_u", "rel_l2_ut"],
        rows.iter().map(|&(t, u, ut)| vec![num(t), num(u), num(ut)]),
    )?;
    let err_u: Vec<(f64, f64)> = rows.iter().filter(|r| r.0 > 0.0).map(|r| (r.0, r.1)).collect();
    dir.write_dat("rel_l2_u.dat", ("t", "rel_l2_u"), &err_u)?;
    dir.write_text("plot.gp", &plot_script(&[("rel_l2_u.dat".into(), "march vs mol".into())]))?;
    write_solution(cfg, dir, &marched)?;
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    out.criterion("march_vs_mol", worst <= cfg.tolerance, format!("max relative L2 {worst} vs {}", cfg.tolerance));
    out.metric("max_rel_l2_u", worst);

    if cfg.refinements >= 2 {
        // Errors at T for Δt·2^j, j = r−1..0, against the reference on the finest grid.
        let t_final = tg.t_final();
        let target = &reference.final_state().u;
        let dts: Vec<f64> = (0..cfg.refinements).rev().map(|j| tg.dt() * 2f64.powi(j as i32)).collect();
        let errors = dts
            .par_iter()
            .map(|&dt| {
                let coarse = TimeGrid::uniform(dt, t_final)?;
                let sol = march(&u0, &u1, &cfg.model, &coarse, &MarchConfig { norms: None, ..march_config(cfg) })?;
                if !sol.completed() {
                    return Err(plate_core::Error::Unstable(format!("march diverged at dt = {dt}")).into());
                }
                Ok(relative_l2(&sol.final_state().u, target)?)
            })
            .collect::<Result<Vec<f64>>>()?;
        let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
        let rows = dts.iter().zip(&errors).enumerate().map(|(i, (dt, e))| {
            let ratio = i.checked_sub(1).map_or(String::new(), |j| num(ratios[j]));
            vec![num(*dt), num(*e), ratio]
        });
        dir.write_csv("order.csv", &["dt", "rel_l2_u", "ratio"], rows)?;
        let ok = ratios.iter().all(|r| (ORDER_BAND.0..=ORDER_BAND.1).contains(r));
        out.criterion(
            "order",
            ok,
            format!("error ratios {ratios:?}, expected within [{}, {}]", ORDER_BAND.0, ORDER_BAND.1),
        );
        for (i, r) in ratios.iter().enumerate() {
            out.metric(format!("order_ratio_{i}"), *r);
        }
    }
    Ok(out)
}

fn compare_mode_ode(cfg: &RunConfig, dir: &mut RunDir) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::OracleCompare);
    let (u0, u1) = data(cfg)?;
    // The per-mode ODE starts from u_t(0) = Δu1; the paper convention matches
    // it once u1 is shifted by (I−Δ)^{-1}u0.
    let ode_u1 = match cfg.convention {
        Convention::Ivp => u1.clone(),
        Convention::Paper => u1.add(&bessel_inverse(&u0)?)?,
    };
    let times = if cfg.oracle_times.is_empty() { vec![cfg.time_grid.t_final()] } else { cfg.oracle_times.clone() };
    let rows = times
        .par_iter()
        .map(|&t| {
            let exact = linear_solution(&u0, &u1, t, cfg.convention)?;
            let ode = mode_ode_oracle(&u0, &ode_u1, t, None)?;
            Ok((t, relative_l2(&exact.u, &ode.u)?, relative_l2(&exact.ut, &ode.ut)?))
        })
        .collect::<plate_core::Result<Vec<_>>>()?;
    dir.write_csv(
        "compare.csv",
        &["t", "rel_l2_u", "rel_l2_ut"],
        rows.iter().map(|&(t, u, ut)| vec![num(t), num(u), num(ut)]),
    )?;
    let worst = rows.iter().map(|r| r.1.max(r.2)).fold(0.0, f64::max);
    out.criterion(
        "multipliers_vs_mode_ode",
        worst <= cfg.tolerance,
        format!("max relative L2 {worst} vs {}", cfg.tolerance),
    );
    out.metric("max_rel_l2", worst);
    Ok(out)
}

fn sweep(cfg: &RunConfig, dir: &mut RunDir) -> Result<Outcome> {
    let spec = cfg.sweep.as_ref().expect("sweep spec is validated at load");
    let mut out = Outcome::new(Experiment::Sweep);
    let children = spec
        .values
        .iter()
        .map(|value| {
            let mut raw = cfg.raw.clone();
            raw.set(&spec.key, value.as_str())?;
            let child = RunConfig::from_raw(raw, Some(spec.experiment))?;
            let name: String = format!("{}={value}", spec.key)
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || "=._-".contains(c) { c } else { '_' })
                .collect();
            Ok((value.clone(), name, child))
        })
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Result<Outcome>> =
        children.par_iter().map(|(_, name, child)| run(child, &dir.path().join(name))).collect();
    let mut rows = Vec::new();
    for ((value, name, _), result) in children.iter().zip(results) {
        let (status, code, detail) = match &result {
            Ok(o) => (o.status.label().to_string(), o.exit_code(), format!("{} criteria", o.criteria.len())),
            Err(e) => ("failed".to_string(), e.exit_code(), e.to_string()),
        };
        out.criterion(name.as_str(), code == 0, format!("{status}: {detail}"));
        rows.push(vec![value.clone(), name.clone(), status, code.to_string()]);
    }
    dir.write_csv("sweep.csv", &["value", "run", "status", "exit_code"], rows)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_text(text: &str, experiment: Experiment) -> (tempfile::TempDir, Outcome) {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = RunConfig::parse(text, Some(experiment)).unwrap();
        let out = run(&cfg, &tmp.path().join("run")).unwrap();
        (tmp, out)
    }

    const SMALL: &str = "grid.N = 64\ngrid.L = 16\ntime.dt = 0.05\ntime.T = 2\n";

    #[test]
    fn simulate_writes_schema() {
        let (_tmp, out) = run_text(SMALL, Experiment::Simulate);
        assert!(out.passed());
        let norms = std::fs::read_to_string(out.dir.join("norms.csv")).unwrap();
        assert_eq!(norms.lines().next().unwrap(), NORM_COLUMNS.join(","));
        for f in ["config.txt", "profile.csv", "fits.csv", "linf.dat", "plot.gp", "summary.json"] {
            assert!(out.dir.join(f).exists(), "{f}");
        }
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.dir.join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary["status"], "completed");
        assert_eq!(summary["config"]["grid.N"], "64");
    }

    #[test]
    fn zero_delta_matches_linear_run() {
        let (_a, nl) = run_text(&format!("{SMALL}model.delta = 0\n"), Experiment::Simulate);
        let cfg = RunConfig::parse(&format!("{SMALL}model.delta = 0\n"), Some(Experiment::Simulate)).unwrap();
        let norms = std::fs::read_to_string(nl.dir.join("norms.csv")).unwrap();
        // Norms of the closed-form linear solution at the same record times, written the same way.
        let (u0, u1) = data(&cfg).unwrap();
        let mut expected = NORM_COLUMNS.join(",") + "\n";
        for &k in cfg.time_grid.records() {
            let state = linear_solution(&u0, &u1, cfg.time_grid.t(k), cfg.convention).unwrap();
            let r = plate_core::NormRecord::measure(&state, &cfg.norms).unwrap();
            expected += &(norm_rows(std::slice::from_ref(&r), &cfg.norms).next().unwrap().join(",") + "\n");
        }
        let (got, want): (Vec<&str>, Vec<&str>) = (norms.lines().collect(), expected.lines().collect());
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            let g: Vec<f64> = g.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect();
            let w: Vec<f64> = w.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect();
            for (a, b) in g.iter().zip(&w) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300) || a.is_nan() && b.is_nan(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn diverged_run_is_labelled() {
        let text = format!("{SMALL}model.delta = 50\ndata.u0.amplitude = 5\nsolver.blowup_factor = 10\n");
        let (_tmp, out) = run_text(&text, Experiment::Simulate);
        assert_eq!(out.status, RunStatus::Diverged);
        assert_eq!(out.exit_code(), 2);
        let summary = std::fs::read_to_string(out.dir.join("summary.json")).unwrap();
        assert!(summary.contains("\"diverged\""));
        assert!(out.dir.join("norms.csv").exists());
    }

    #[test]
    fn integrals_default_sweep_passes() {
        let (_tmp, out) = run_text("", Experiment::VerifyIntegrals);
        assert!(out.passed(), "{:?}", out.criteria);
        assert!(out.reports.iter().filter(|r| r.lemma == "gamma").all(|r| r.samples.iter().all(|s| s.ratio <= 1.0)));
    }

    #[test]
    fn named_lemma_outside_hypotheses_is_rejected_before_compute() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = RunConfig::parse("grid.N = 64\nverify.lemmas = lambda_hsp\nnorms.p = 1.5", Some(Experiment::VerifyLinear)).unwrap();
        let err = run(&cfg, &tmp.path().join("run")).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("2 <= p"), "{err}");
        assert!(tmp.path().join("run").join("FAILED").exists());
    }

    #[test]
    fn linear_lemmas_on_small_grid() {
        let text = "grid.N = 512\ngrid.L = 60\nverify.t_min = 1\nverify.t_max = 40\nverify.samples = 40\nverify.lemmas = initial_linf, initial_hs\nfit.window = 5, 20\n";
        let (_tmp, out) = run_text(text, Experiment::VerifyLinear);
        assert!(out.passed(), "{:?}", out.criteria);
        assert!(out.fit("initial_linf#0").is_some());
        assert!(out.dir.join("reports.csv").exists() && out.dir.join("initial_linf.dat").exists());
    }

    #[test]
    fn nonlinear_estimates_report() {
        let text = "grid.N = 64\ngrid.L = 8\nverify.pairs = 4\nmodel.lambda = 2\nnorms.s = 0.25\n";
        let (_tmp, out) = run_text(text, Experiment::VerifyNonlinear);
        assert_eq!(out.reports.len(), 3);
        assert!(out.passed(), "{:?}", out.criteria);
    }

    #[test]
    fn sweep_runs_children() {
        let text = format!("{SMALL}sweep.experiment = simulate\nsweep.key = model.lambda\nsweep.values = 2, 3\n");
        let (_tmp, out) = run_text(&text, Experiment::Sweep);
        assert_eq!(out.criteria.len(), 2);
        assert!(out.passed());
        assert!(out.dir.join("model.lambda=2").join("norms.csv").exists());
        assert!(!out.dir.join("model.lambda=2.partial").exists());
    }

    #[test]
    fn mode_ode_compare() {
        let text = "grid.N = 128\ngrid.L = 20\noracle.kind = mode_ode\noracle.times = 0.5, 2\ncompare.tolerance = 1e-8\n";
        let (_tmp, out) = run_text(text, Experiment::OracleCompare);
        assert!(out.passed(), "{:?}", out.criteria);
    }
}
