//! Mild solutions of
//!
//! ```text
//! u(t) = K(t)u0 + S(t)Δu1 + δ ∫₀ᵗ Λθ(t−τ) |u(τ)|^λ dτ
//! ```
//!
//! by trapezoidal product quadrature in time, either marched step by step or
//! iterated as a Picard map over the whole trajectory. Both work mode by mode
//! on spectra and share the same precomputed kernels `Λθ(mΔt)`, `∂tΛθ(mΔt)`,
//! so the Picard fixed point coincides with the march on the same time grid.
//!
//! Since `Λθ(0) = 0` the newest history term drops out of `u(t_k)` and the
//! march is explicit. `∂tΛθ(0) = |ξ|^{2θ}/(1+|ξ|²)` does not vanish, so `u_t(t_k)`
//! includes it, evaluated with the freshly computed `u(t_k)`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{forward, inverse, Field, SpectralGrid, Spectrum};
use crate::nonlinear::{power_spectrum, NonlinearityParams};
use crate::norms::{x_norm, y_norm, z_norm, NormParams, NormRecord};
use crate::propagator::{linear_spectra, Convention, LinearState};
use crate::symbols::{frac_weight, MultiplierKind, PlateSymbols};

/// Uniform steps `t_k = kΔt`, `k = 0..=K`, with a subset of indices at which norms are recorded.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    dt: f64,
    steps: usize,
    records: Vec<usize>,
}

pub const DEFAULT_RECORDS_PER_DECADE: usize = 64;

impl TimeGrid {
    /// `T` must be an integer multiple of `Δt` up to rounding.
    /// Records default to a log-spaced overlay at 64 samples per decade.
    pub fn uniform(dt: f64, t_final: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need dt > 0 and T > 0, got dt = {dt}, T = {t_final}"
            )));
        }
        let k = (t_final / dt).round();
        if k < 1.0 || (k * dt - t_final).abs() > 1e-9 * t_final {
            return Err(Error::InvalidArgument(format!(
                "T = {t_final} is not a multiple of dt = {dt}"
            )));
        }
        Ok(Self {
            dt,
            steps: k as usize,
            records: Vec::new(),
        }
        .with_log_records(DEFAULT_RECORDS_PER_DECADE))
    }

    /// Records at `t_k` nearest to `Δt·10^{i/per_decade}`, plus both endpoints.
    pub fn with_log_records(mut self, per_decade: usize) -> Self {
        let mut idx = vec![0usize];
        let per = per_decade.max(1) as f64;
        let mut i = 0;
        loop {
            let k = 10f64.powf(i as f64 / per).round() as usize;
            if k > self.steps {
                break;
            }
            if *idx.last().unwrap() != k {
                idx.push(k);
            }
            i += 1;
        }
        if *idx.last().unwrap() != self.steps {
            idx.push(self.steps);
        }
        self.records = idx;
        self
    }

    pub fn with_all_records(mut self) -> Self {
        self.records = (0..=self.steps).collect();
        self
    }

    /// Records every `stride`-th step, plus the final one.
    pub fn with_stride_records(mut self, stride: usize) -> Self {
        let stride = stride.max(1);
        let mut idx: Vec<usize> = (0..=self.steps).step_by(stride).collect();
        if *idx.last().unwrap() != self.steps {
            idx.push(self.steps);
        }
        self.records = idx;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of steps `K`; the grid holds `K + 1` times.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn t_final(&self) -> f64 {
        self.t(self.steps)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.t(k)).collect()
    }

    pub fn records(&self) -> &[usize] {
        &self.records
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveStatus {
    Completed,
    /// `‖u‖_∞` exceeded the cap (or the power overflowed) at `step`;
    /// the trajectory stops at the last finite state before it.
    Diverged { step: usize, max_abs: f64 },
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Completed => "completed",
            SolveStatus::Diverged { .. } => "diverged",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MildSolution {
    pub time_grid: TimeGrid,
    pub trajectory: Vec<LinearState>,
    /// Spectra of the dealiased `|u(t_j)|^λ`, one per state in the trajectory.
    pub nonlin_history: Vec<Spectrum>,
    /// Indices into `trajectory` at which `norm_records` were taken.
    pub record_indices: Vec<usize>,
    pub norm_records: Vec<NormRecord>,
    pub status: SolveStatus,
}

impl MildSolution {
    pub fn times(&self) -> Vec<f64> {
        self.trajectory.iter().map(|s| s.t).collect()
    }

    pub fn final_state(&self) -> &LinearState {
        self.trajectory.last().expect("trajectory holds at least the initial state")
    }

    pub fn completed(&self) -> bool {
        self.status == SolveStatus::Completed
    }

    pub fn y_norm(&self, params: &NormParams) -> Result<f64> {
        y_norm(&self.norm_records, params)
    }

    pub fn x_norm(&self, params: &NormParams) -> Result<f64> {
        x_norm(&self.norm_records, params)
    }

    pub fn z_norm(&self, params: &NormParams, horizon: f64) -> Result<f64> {
        z_norm(&self.norm_records, params, horizon)
    }
}

#[derive(Clone, Debug)]
pub struct MarchConfig {
    pub convention: Convention,
    /// Divergence cap as a multiple of `max(‖u0‖_∞, ‖u1‖_∞)`.
    pub blowup_factor: f64,
    /// Upper bound on stored kernel and history entries, `4·(K+1)·Nⁿ`.
    pub max_history: usize,
    /// Norms to record at the time grid's record indices.
    pub norms: Option<NormParams>,
}

impl Default for MarchConfig {
    fn default() -> Self {
        Self {
            convention: Convention::Paper,
            blowup_factor: 1e6,
            max_history: 100_000_000,
            norms: None,
        }
    }
}

// Kernels Λθ(mΔt) and ∂tΛθ(mΔt) for m = 0..=K, row-major in m.
struct Duhamel {
    grid: Arc<SpectralGrid>,
    len: usize,
    dt: f64,
    delta: f64,
    lambda: f64,
    dealias: crate::nonlinear::Dealias,
    lam: Vec<f64>,
    dlam: Vec<f64>,
}

impl Duhamel {
    fn new(
        grid: &Arc<SpectralGrid>,
        params: &NonlinearityParams,
        tg: &TimeGrid,
        max_history: usize,
    ) -> Result<Self> {
        params.validate()?;
        params.theta_admissible(grid.dim());
        let len = grid.len();
        let rows = tg.steps() + 1;
        let entries = rows.saturating_mul(len).saturating_mul(4);
        if entries > max_history {
            return Err(Error::HistoryTooLarge {
                entries,
                limit: max_history,
            });
        }
        let max_phi = grid
            .xi_sq()
            .iter()
            .map(|&x| PlateSymbols::unchecked(x).frequency())
            .fold(0.0, f64::max);
        if tg.dt() * max_phi > 0.5 {
            log::warn!(
                "dt * max phi = {:.3} exceeds 0.5; fastest modes are under-resolved",
                tg.dt() * max_phi
            );
        }
        let symbols: Vec<(PlateSymbols, f64)> = grid
            .xi_sq()
            .iter()
            .map(|&x| (PlateSymbols::unchecked(x), frac_weight(x, params.theta) / (1.0 + x)))
            .collect();
        let mut lam = vec![0.0; rows * len];
        let mut dlam = vec![0.0; rows * len];
        lam.par_chunks_mut(len)
            .zip(dlam.par_chunks_mut(len))
            .enumerate()
            .for_each(|(m, (l, d))| {
                let t = tg.t(m);
                for (i, (p, w)) in symbols.iter().enumerate() {
                    let (s, dts) = p.s_pair(t);
                    l[i] = s * w;
                    d[i] = dts * w;
                }
            });
        Ok(Self {
            grid: grid.clone(),
            len,
            dt: tg.dt(),
            delta: params.delta,
            lambda: params.lambda,
            dealias: params.dealias,
            lam,
            dlam,
        })
    }

    fn weight(&self, j: usize, k: usize) -> f64 {
        if j == 0 || j == k {
            0.5 * self.dt
        } else {
            self.dt
        }
    }

    fn nonlinearity(&self, u: &[Complex64]) -> Result<Vec<Complex64>> {
        let s = Spectrum::new(self.grid.clone(), u.to_vec())?;
        Ok(power_spectrum(&s, self.lambda, self.dealias)?.into_coeffs())
    }

    // Adds δ Σ_{j<k} w_j Λθ(t_k−t_j) N_j to `u` and the same with ∂tΛθ to `ut`,
    // for the modes starting at `base`.
    fn accumulate(
        &self,
        k: usize,
        hist: &[Vec<Complex64>],
        base: usize,
        u: &mut [Complex64],
        ut: &mut [Complex64],
    ) {
        let n = u.len();
        for (j, nj) in hist.iter().enumerate().take(k) {
            let w = self.delta * self.weight(j, k);
            let row = (k - j) * self.len + base;
            let kl = &self.lam[row..row + n];
            let kd = &self.dlam[row..row + n];
            let nj = &nj[base..base + n];
            for i in 0..n {
                u[i] += nj[i] * (w * kl[i]);
                ut[i] += nj[i] * (w * kd[i]);
            }
        }
    }

    // The j = k contribution to u_t (the u contribution is identically zero).
    fn close(&self, k: usize, nk: &[Complex64], ut: &mut [Complex64]) {
        if k == 0 {
            return;
        }
        let w = self.delta * self.weight(k, k);
        for ((z, n), d) in ut.iter_mut().zip(nk).zip(&self.dlam[..self.len]) {
            *z += n * (w * d);
        }
    }
}

fn max_abs_data(u0: &Field, u1: &Field) -> f64 {
    u0.max_abs().max(u1.max_abs())
}

fn blowup_cap(u0: &Field, u1: &Field, factor: f64) -> f64 {
    let m = max_abs_data(u0, u1);
    if m == 0.0 {
        f64::INFINITY
    } else {
        factor * m
    }
}

fn linear_parts(
    u0: &Field,
    u1: &Field,
    tg: &TimeGrid,
    convention: Convention,
) -> Result<Vec<(Vec<Complex64>, Vec<Complex64>)>> {
    if !u0.grid().compatible(u1.grid()) {
        return Err(Error::GridMismatch);
    }
    let a = forward(u0);
    let b = forward(u1);
    (0..=tg.steps())
        .into_par_iter()
        .map(|k| {
            let (u, ut) = linear_spectra(&a, &b, tg.t(k), convention)?;
            Ok((u.into_coeffs(), ut.into_coeffs()))
        })
        .collect()
}

fn mode_chunk(len: usize) -> usize {
    (len / (4 * rayon::current_num_threads()).max(1)).max(256)
}

/// Trapezoidal Duhamel march.
pub fn march(
    u0: &Field,
    u1: &Field,
    params: &NonlinearityParams,
    tg: &TimeGrid,
    cfg: &MarchConfig,
) -> Result<MildSolution> {
    let grid = u0.grid().clone();
    let duh = Duhamel::new(&grid, params, tg, cfg.max_history)?;
    let lin = linear_parts(u0, u1, tg, cfg.convention)?;
    let cap = blowup_cap(u0, u1, cfg.blowup_factor);
    let chunk = mode_chunk(grid.len());

    let mut u_hist: Vec<(Vec<Complex64>, Vec<Complex64>)> = Vec::with_capacity(tg.steps() + 1);
    let mut n_hist: Vec<Vec<Complex64>> = Vec::with_capacity(tg.steps() + 1);
    let mut fields: Vec<Field> = Vec::with_capacity(tg.steps() + 1);
    let mut status = SolveStatus::Completed;

    for (k, (lu, lut)) in lin.into_iter().enumerate() {
        let mut u = lu;
        let mut ut = lut;
        if duh.delta != 0.0 {
            u.par_chunks_mut(chunk)
                .zip(ut.par_chunks_mut(chunk))
                .enumerate()
                .for_each(|(c, (cu, cut))| duh.accumulate(k, &n_hist, c * chunk, cu, cut));
        }
        let u_spec = Spectrum::new(grid.clone(), u)?;
        let field = match inverse(&u_spec) {
            Ok(f) => f,
            Err(Error::NonFinite { .. }) => {
                status = SolveStatus::Diverged { step: k, max_abs: f64::INFINITY };
                break;
            }
            Err(e) => return Err(e),
        };
        let max_abs = field.max_abs();
        if max_abs > cap {
            status = SolveStatus::Diverged { step: k, max_abs };
            break;
        }
        let u = u_spec.into_coeffs();
        let nk = match duh.nonlinearity(&u) {
            Ok(nk) => nk,
            Err(Error::Overflow { max_abs, .. }) => {
                status = SolveStatus::Diverged { step: k, max_abs };
                break;
            }
            Err(e) => return Err(e),
        };
        if duh.delta != 0.0 {
            duh.close(k, &nk, &mut ut);
        }
        n_hist.push(nk);
        fields.push(field);
        u_hist.push((u, ut));
    }
    if let SolveStatus::Diverged { step, max_abs } = status {
        log::warn!("march diverged at step {step} (max |u| = {max_abs:e})");
    }
    assemble(&grid, tg, u_hist, Some(fields), n_hist, cfg.norms.as_ref(), status)
}

pub(crate) fn assemble(
    grid: &Arc<SpectralGrid>,
    tg: &TimeGrid,
    spectra: Vec<(Vec<Complex64>, Vec<Complex64>)>,
    fields: Option<Vec<Field>>,
    n_hist: Vec<Vec<Complex64>>,
    norms: Option<&NormParams>,
    status: SolveStatus,
) -> Result<MildSolution> {
    let fields = match fields {
        Some(f) => f,
        None => spectra
            .par_iter()
            .map(|(u, _)| inverse(&Spectrum::new(grid.clone(), u.clone())?))
            .collect::<Result<Vec<_>>>()?,
    };
    let trajectory = spectra
        .par_iter()
        .zip(fields)
        .enumerate()
        .map(|(k, ((_, ut), u))| {
            let ut = inverse(&Spectrum::new(grid.clone(), ut.clone())?)?;
            LinearState::new(u, ut, tg.t(k))
        })
        .collect::<Result<Vec<_>>>()?;
    let record_indices: Vec<usize> = tg
        .records()
        .iter()
        .copied()
        .filter(|&k| k < trajectory.len())
        .collect();
    let norm_records = match norms {
        Some(p) => record_indices
            .par_iter()
            .map(|&k| {
                let (u, ut) = &spectra[k];
                NormRecord::from_parts(
                    tg.t(k),
                    &trajectory[k].u,
                    &Spectrum::new(grid.clone(), u.clone())?,
                    &Spectrum::new(grid.clone(), ut.clone())?,
                    p,
                )
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let nonlin_history = n_hist
        .into_iter()
        .map(|c| Spectrum::new(grid.clone(), c))
        .collect::<Result<Vec<_>>>()?;
    Ok(MildSolution {
        time_grid: tg.clone(),
        trajectory,
        nonlin_history,
        record_indices,
        norm_records,
        status,
    })
}

/// Space-time norm used to measure Picard distances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    Y,
    X,
    Z { horizon: f64 },
}

#[derive(Clone, Debug)]
pub struct PicardConfig {
    pub max_iters: usize,
    pub tol: f64,
    pub ball_radius: f64,
    pub norm_kind: NormKind,
    pub norm_params: NormParams,
    pub march: MarchConfig,
}

impl PicardConfig {
    pub fn new(norm_params: NormParams) -> Self {
        Self {
            max_iters: 20,
            tol: 1e-8,
            ball_radius: f64::INFINITY,
            norm_kind: NormKind::Y,
            norm_params,
            march: MarchConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iters < 1 || !(self.ball_radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "picard needs tol > 0, max_iters >= 1, ball_radius > 0 (got {}, {}, {})",
                self.tol, self.max_iters, self.ball_radius
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PicardStatus {
    Converged,
    MaxIterations,
    /// `d_{m+1}/d_m ≥ 1` for three consecutive `m`.
    NonContraction,
    /// An iterate overflowed or exceeded the blow-up cap.
    Diverged,
}

#[derive(Clone, Debug)]
pub struct PicardOutcome {
    pub solution: MildSolution,
    /// `d_m = ‖u⁽ᵐ⁺¹⁾ − u⁽ᵐ⁾‖`.
    pub distances: Vec<f64>,
    /// `d_{m+1}/d_m`.
    pub ratios: Vec<f64>,
    /// Norms of the iterates `u⁽⁰⁾, u⁽¹⁾, …`.
    pub iterate_norms: Vec<f64>,
    pub in_ball: bool,
    pub status: PicardStatus,
}

impl PicardOutcome {
    pub fn converged(&self) -> bool {
        self.status == PicardStatus::Converged
    }

    /// Number of Picard maps applied.
    pub fn iterations(&self) -> usize {
        self.distances.len()
    }
}

pub(crate) type Trajectory = Vec<(Vec<Complex64>, Vec<Complex64>)>;

fn trajectory_norm(
    grid: &Arc<SpectralGrid>,
    tg: &TimeGrid,
    traj: &Trajectory,
    kind: NormKind,
    params: &NormParams,
) -> Result<f64> {
    let records = tg
        .records()
        .par_iter()
        .map(|&k| {
            let (u, ut) = &traj[k];
            let u_hat = Spectrum::new(grid.clone(), u.clone())?;
            let ut_hat = Spectrum::new(grid.clone(), ut.clone())?;
            let field = inverse(&u_hat)?;
            NormRecord::from_parts(tg.t(k), &field, &u_hat, &ut_hat, params)
        })
        .collect::<Result<Vec<_>>>()?;
    match kind {
        NormKind::Y => y_norm(&records, params),
        NormKind::X => x_norm(&records, params),
        NormKind::Z { horizon } => z_norm(&records, params, horizon),
    }
}

// Differences of nearly equal iterates keep the rounding-level Hermitian
// defect of the operands, so they are projected back onto real fields.
fn difference(grid: &Arc<SpectralGrid>, a: &Trajectory, b: &Trajectory) -> Result<Trajectory> {
    let real = |x: &[Complex64], y: &[Complex64]| -> Result<Vec<Complex64>> {
        let d = x.iter().zip(y).map(|(p, q)| p - q).collect();
        Ok(Spectrum::new(grid.clone(), d)?.hermitian_part().into_coeffs())
    };
    a.par_iter()
        .zip(b)
        .map(|((au, aut), (bu, but))| Ok((real(au, bu)?, real(aut, but)?)))
        .collect()
}

/// Picard iteration `u⁽ᵐ⁺¹⁾ = Φ(u⁽ᵐ⁾)` starting from the linear part.
pub fn picard(
    u0: &Field,
    u1: &Field,
    params: &NonlinearityParams,
    tg: &TimeGrid,
    cfg: &PicardConfig,
) -> Result<PicardOutcome> {
    cfg.validate()?;
    let grid = u0.grid().clone();
    let duh = Duhamel::new(&grid, params, tg, cfg.march.max_history)?;
    let lin = linear_parts(u0, u1, tg, cfg.march.convention)?;
    let cap = blowup_cap(u0, u1, cfg.march.blowup_factor);
    let np = &cfg.norm_params;

    let mut current: Trajectory = lin.clone();
    let mut iterate_norms = vec![trajectory_norm(&grid, tg, &current, cfg.norm_kind, np)?];
    let mut distances = Vec::new();
    let mut ratios = Vec::new();
    let mut streak = 0;
    let mut status = PicardStatus::MaxIterations;
    let mut current_n: Option<Vec<Vec<Complex64>>> = None;

    for _ in 0..cfg.max_iters {
        let n_hist = match current
            .par_iter()
            .map(|(u, _)| duh.nonlinearity(u))
            .collect::<Result<Vec<_>>>()
        {
            Ok(h) => h,
            Err(Error::Overflow { .. }) => {
                status = PicardStatus::Diverged;
                break;
            }
            Err(e) => return Err(e),
        };
        let next: Trajectory = lin
            .par_iter()
            .enumerate()
            .map(|(k, (lu, lut))| {
                let mut u = lu.clone();
                let mut ut = lut.clone();
                if duh.delta != 0.0 {
                    duh.accumulate(k, &n_hist, 0, &mut u, &mut ut);
                    duh.close(k, &n_hist[k], &mut ut);
                }
                (u, ut)
            })
            .collect();
        let d = trajectory_norm(&grid, tg, &difference(&grid, &next, &current)?, cfg.norm_kind, np)?;
        let norm = trajectory_norm(&grid, tg, &next, cfg.norm_kind, np)?;
        if let Some(&prev) = distances.last() {
            let r = if prev > 0.0 { d / prev } else { 0.0 };
            ratios.push(r);
            streak = if r >= 1.0 { streak + 1 } else { 0 };
        }
        distances.push(d);
        iterate_norms.push(norm);
        current = next;
        current_n = None;
        if !norm.is_finite() || max_linf(&grid, &current)? > cap {
            status = PicardStatus::Diverged;
            break;
        }
        if d <= cfg.tol {
            status = PicardStatus::Converged;
            current_n = Some(n_hist);
            break;
        }
        if streak >= 3 {
            status = PicardStatus::NonContraction;
            break;
        }
    }

    // The returned history belongs to the returned trajectory.
    let n_hist = match current_n {
        Some(h) => h,
        None => current
            .par_iter()
            .map(|(u, _)| duh.nonlinearity(u))
            .collect::<Result<Vec<_>>>()
            .unwrap_or_default(),
    };
    let in_ball = iterate_norms.iter().all(|&v| v <= cfg.ball_radius);
    let solve_status = if status == PicardStatus::Diverged {
        SolveStatus::Diverged {
            step: tg.steps(),
            max_abs: max_linf(&grid, &current).unwrap_or(f64::INFINITY),
        }
    } else {
        SolveStatus::Completed
    };
    let norms = cfg.march.norms.as_ref().or(Some(np));
    let solution = assemble(&grid, tg, current, None, n_hist, norms, solve_status)?;
    Ok(PicardOutcome {
        solution,
        distances,
        ratios,
        iterate_norms,
        in_ball,
        status,
    })
}

fn max_linf(grid: &Arc<SpectralGrid>, traj: &Trajectory) -> Result<f64> {
    let maxes = traj
        .par_iter()
        .map(|(u, _)| Ok(inverse(&Spectrum::new(grid.clone(), u.clone())?)?.max_abs()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(maxes.into_iter().fold(0.0, f64::max))
}

/// Residual of the strong equation along a solution,
///
/// ```text
/// (1−Δ)u_tt + Δ²u − Δu_t − δ(−Δ)^θ|u|^λ
/// ```
///
/// in the `H^{−2}` norm, with `u_tt` from the 5-point fourth-order difference
/// of `u_t`. Returns `(t_k, residual)` for `2 ≤ k ≤ K−2`.
pub fn residual(sol: &MildSolution, params: &NonlinearityParams) -> Result<Vec<(f64, f64)>> {
    let traj = &sol.trajectory;
    if traj.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "residual needs at least 5 states, got {}",
            traj.len()
        )));
    }
    let grid = traj[0].u.grid().clone();
    let dt = sol.time_grid.dt();
    let ut_hat: Vec<Spectrum> = traj.par_iter().map(|s| forward(&s.ut)).collect();
    let theta = params.theta;
    let delta = params.delta;
    (2..traj.len() - 2)
        .into_par_iter()
        .map(|k| {
            let u_hat = forward(&traj[k].u);
            let n_hat = match sol.nonlin_history.get(k) {
                Some(n) => n.clone(),
                None => power_spectrum(&u_hat, params.lambda, params.dealias)?,
            };
            let c = |j: usize| ut_hat[j].coeffs();
            let (m2, m1, p1, p2) = (c(k - 2), c(k - 1), c(k + 1), c(k + 2));
            let mut acc = 0.0;
            for (i, &x) in grid.xi_sq().iter().enumerate() {
                let utt = (m2[i] - p2[i] + (p1[i] - m1[i]) * 8.0) / (12.0 * dt);
                let r = utt * (1.0 + x) + u_hat.coeffs()[i] * (x * x)
                    + ut_hat[k].coeffs()[i] * x
                    - n_hat.coeffs()[i] * (delta * frac_weight(x, theta));
                acc += r.norm_sqr() / ((1.0 + x) * (1.0 + x));
            }
            Ok((traj[k].t, (acc * grid.spectral_cell()).sqrt()))
        })
        .collect()
}

/// Kind of multiplier used by the history sum for `u`, exposed for inspection.
pub const HISTORY_KERNEL: MultiplierKind = MultiplierKind::LambdaTheta;
