//! Bounded-ratio checks of the nonlinear difference estimates.
//!
//! The constants are unknown, so each check reports `C_emp`, the largest
//! `LHS/RHS` over random pairs, and passes when `C_emp` changes by less than a
//! factor of two under `N → 2N` at fixed `L`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use super::{LemmaReport, LemmaSample};
use crate::error::{Error, Result};
use crate::grid::{Field, SpectralGrid};
use crate::nonlinear::{power_nonlinearity, Dealias};
use crate::norms::{bessel_norm, conjugate, lp_norm, sobolev_norm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NonlinearEstimate {
    /// `‖|f|^λ−|g|^λ‖_{H^s_{p′}} ≤ C‖f−g‖_{H^s_q}(‖f‖^{λ−1}_{H^s_q} + ‖g‖^{λ−1}_{H^s_q})`
    Difference,
    /// `‖|u|^λ−|ũ|^λ‖_{H^s} ≤ C[‖u−ũ‖_∞(‖u‖_{H^s}+‖ũ‖_{H^s})M^{λ−2} + ‖u−ũ‖_{H^s}M^{λ−1}]`,
    /// `M = ‖u‖_∞+‖ũ‖_∞`
    LeibnizHs,
    /// `‖|u|^λ−|ũ|^λ‖₁ ≤ C M^{λ−2}(‖u‖₂+‖ũ‖₂)‖u−ũ‖₂`
    LeibnizL1,
}

impl NonlinearEstimate {
    pub const ALL: [NonlinearEstimate; 3] =
        [NonlinearEstimate::Difference, NonlinearEstimate::LeibnizHs, NonlinearEstimate::LeibnizL1];

    pub fn id(self) -> &'static str {
        match self {
            NonlinearEstimate::Difference => "difference",
            NonlinearEstimate::LeibnizHs => "leibniz_hs",
            NonlinearEstimate::LeibnizL1 => "leibniz_l1",
        }
    }
}

impl fmt::Display for NonlinearEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for NonlinearEstimate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NonlinearEstimate::ALL
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown nonlinear estimate '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonlinearEstimateParams {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub lambda: f64,
    /// Applied when forming `|u|^λ` on the grid.
    pub dealias: Dealias,
    /// Also evaluate on the `2N` grid and compare constants.
    pub refine: bool,
}

impl Default for NonlinearEstimateParams {
    fn default() -> Self {
        Self {
            s: 0.25,
            p: 2.0,
            q: 2.0,
            lambda: 3.0,
            dealias: Dealias::None,
            refine: true,
        }
    }
}

/// Largest allowed `C_emp` change factor under refinement.
pub const REFINEMENT_FACTOR: f64 = 2.0;

/// Produces the `rep`-th pair on a grid. Sampling the same `rep` on grids with
/// equal `L` should give the same continuous functions.
pub type Sampler<'a> = &'a (dyn Fn(&Arc<SpectralGrid>, usize) -> Result<(Field, Field)> + Sync);

/// Inequalities of the difference estimate that `params` violates in dimension `n`.
pub fn difference_violations(n: usize, params: &NonlinearEstimateParams) -> Vec<&'static str> {
    let NonlinearEstimateParams { s, p, q, lambda, .. } = *params;
    let n = n as f64;
    let odd = lambda.fract() == 0.0 && (lambda as i64) % 2 == 1;
    let mut v = Vec::new();
    if lambda < 2.0 {
        v.push("lambda >= 2");
    }
    if !(p > 1.0 && p.is_finite()) || !(q > 1.0 && q.is_finite()) {
        v.push("1 < p, q < inf");
    }
    if !(s > 0.0) {
        v.push("s > 0");
    }
    if !(s < n / q) {
        v.push("s < n/q");
    }
    if !odd && !(s < lambda - 1.0) {
        v.push("s < lambda-1");
    }
    if !(1.0 - 1.0 / p >= 1.0 / q + (lambda - 1.0) / n * (n / q - s)) {
        v.push("1-1/p >= 1/q+(lambda-1)/n(n/q-s)");
    }
    v
}

fn sample(
    which: NonlinearEstimate,
    params: &NonlinearEstimateParams,
    f: &Field,
    g: &Field,
) -> Result<(f64, f64)> {
    let NonlinearEstimateParams { s, p, q, lambda, dealias, .. } = *params;
    let diff_pow = power_nonlinearity(f, lambda, dealias)?.sub(&power_nonlinearity(g, lambda, dealias)?)?;
    let d = f.sub(g)?;
    Ok(match which {
        NonlinearEstimate::Difference => {
            let lhs = bessel_norm(&diff_pow, s, conjugate(p))?;
            let rhs = bessel_norm(&d, s, q)?
                * (bessel_norm(f, s, q)?.powf(lambda - 1.0) + bessel_norm(g, s, q)?.powf(lambda - 1.0));
            (lhs, rhs)
        }
        NonlinearEstimate::LeibnizHs => {
            let m = f.max_abs() + g.max_abs();
            let lhs = sobolev_norm(&diff_pow, s);
            let rhs = d.max_abs() * (sobolev_norm(f, s) + sobolev_norm(g, s)) * m.powf(lambda - 2.0)
                + sobolev_norm(&d, s) * m.powf(lambda - 1.0);
            (lhs, rhs)
        }
        NonlinearEstimate::LeibnizL1 => {
            let m = f.max_abs() + g.max_abs();
            let lhs = lp_norm(&diff_pow, 1.0);
            let rhs = m.powf(lambda - 2.0) * (lp_norm(f, 2.0) + lp_norm(g, 2.0)) * lp_norm(&d, 2.0);
            (lhs, rhs)
        }
    })
}

fn sweep(
    which: NonlinearEstimate,
    grid: &Arc<SpectralGrid>,
    params: &NonlinearEstimateParams,
    sampler: Sampler<'_>,
    reps: usize,
) -> Result<Vec<LemmaSample>> {
    (0..reps)
        .into_par_iter()
        .map(|rep| {
            let (f, g) = sampler(grid, rep)?;
            let (lhs, rhs) = sample(which, params, &f, &g)?;
            Ok(LemmaSample::new(rep as f64, lhs, rhs))
        })
        .collect()
}

/// `C_emp` over `reps` sampled pairs. Hypothesis violations are reported in
/// the note and in the `admissible` entry of the point, not rejected.
pub fn check_nonlinear_estimate(
    which: NonlinearEstimate,
    grid: &Arc<SpectralGrid>,
    params: &NonlinearEstimateParams,
    sampler: Sampler<'_>,
    reps: usize,
) -> Result<LemmaReport> {
    if reps == 0 {
        return Err(Error::InvalidArgument("need at least one sample pair".into()));
    }
    let violations = match which {
        NonlinearEstimate::Difference => difference_violations(grid.dim(), params),
        _ if params.lambda.fract() != 0.0 || params.lambda < 2.0 => vec!["lambda integer >= 2"],
        _ => Vec::new(),
    };
    let samples = sweep(which, grid, params, sampler, reps)?;
    let mut report = LemmaReport::new(
        which.id(),
        vec![
            ("n", grid.dim() as f64),
            ("N", grid.points_per_axis() as f64),
            ("s", params.s),
            ("p", params.p),
            ("q", params.q),
            ("lambda", params.lambda),
            ("admissible", if violations.is_empty() { 1.0 } else { 0.0 }),
        ],
        samples,
    );
    let mut notes = Vec::new();
    if !violations.is_empty() {
        notes.push(format!("outside hypotheses: {}", violations.join(", ")));
    }
    report.pass = report.c_emp.is_finite();
    if params.refine {
        let fine = SpectralGrid::new(grid.dim(), 2 * grid.points_per_axis(), grid.half_period())?;
        let c_fine = sweep(which, &fine, params, sampler, reps)?
            .iter()
            .map(|s| s.ratio)
            .fold(0.0, f64::max);
        let c = report.c_emp;
        let factor = if c == c_fine { 1.0 } else { c.max(c_fine) / c.min(c_fine) };
        report.pass &= factor <= REFINEMENT_FACTOR;
        notes.push(format!("C_emp at 2N = {c_fine}; change factor {factor:.4}"));
    }
    report.note = notes.join("; ");
    Ok(report)
}
