//! Decay and boundedness checks for the linear propagators.
//!
//! Each lemma is an inequality `LHS(t) ≤ C·RHS(t)` where `RHS` carries the
//! stated rate and data norms. The report records `LHS/RHS` per sample, and a
//! log-log fit of `LHS` against the stated exponent when that exponent is
//! nonzero.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{fit_decay, DecayFit, LemmaReport, LemmaSample, DEFAULT_SLOPE_TOLERANCE};
use crate::error::{Error, Result};
use crate::grid::{forward, inverse, Field, Spectrum};
use crate::norms::{bessel_norm, conjugate, lp_norm, sobolev_norm_spectrum};
use crate::symbols::{multiplier_array, MultiplierKind};

/// Fraction of the half-period used as the boundary band for wrap-around monitoring.
pub const BOUNDARY_FRACTION: f64 = 0.05;
/// Boundary-band amplitude, relative to the maximum, above which a warning is issued.
pub const WRAP_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinearLemma {
    /// `‖Λθg‖_∞ ≤ C t^{−α₁}‖g‖₁ + C e^{−t/4}‖g‖_{H^s}`
    LambdaLinf,
    /// `‖Λθg‖_∞ ≤ C (1+t)^{−α₁}(‖g‖₁ + ‖g‖_{H^s})`
    LambdaLinfOnePlusT,
    /// `‖∂tS g‖_∞ ≤ C t^{−n/2}‖g‖₁ + C e^{−t/4}‖g‖_{H^{s+1}}`
    InitialDataLinf,
    /// `‖SΔg‖_∞ ≤ C t^{−n/2}‖g‖₁ + C e^{−t/4}‖g‖_{H^{s+2}}`
    InitialDataLapLinf,
    /// `‖∂t^{k+1}S g‖_{H^{s−k}} ≤ C‖g‖_{H^s}`, `k ∈ {0, 1}`
    InitialDataHs,
    /// `‖∂t^k SΔg‖_{H^{s−k}} ≤ C‖g‖_{H^{s+1}}`, `k ∈ {0, 1}`
    InitialDataLapHs,
    /// `‖∂tS g‖_∞ ≤ C (1+t)^{−n/2}(‖g‖₁ + ‖g‖_{H^{s+1}})`
    CorollaryLinf,
    /// `‖SΔg‖_∞ ≤ C (1+t)^{−n/2}(‖g‖₁ + ‖g‖_{H^{s+2}})`
    CorollaryLapLinf,
    /// `‖Λθg‖_{H^σ_p} ≤ C t^{1−θ−d}‖g‖_{L^{p′}}`, `d = (n/2)(1−2/p)`
    LambdaHsigmaP,
    /// `‖Λθg‖_{H^s} ≤ C t^{1−θ}‖g‖_{H^s}`
    LambdaHs,
    /// `‖∂tΛθg‖_{H^{σ−1}_p} ≤ C t^{−d}‖g‖_{L^{p′}}`
    DtLambdaHsigmaP,
    /// `‖∂tΛθg‖_{H^{s−1}} ≤ C‖g‖_{H^{s−1}}`
    DtLambdaHs,
    /// `‖∂t^k S g‖_{H^{σ−k}_p} ≤ C t^{−d}‖g‖_{L^{p′}}`, `k ∈ {1, 2}`
    LinearPartHsigmaP,
    /// `‖∂t^{k−1}SΔg‖_{H^{σ−k+1}_p} ≤ C t^{−d}‖g‖_{H²_{p′}}`, `k ∈ {1, 2}`
    LinearPartLapHsigmaP,
}

impl LinearLemma {
    pub const ALL: [LinearLemma; 14] = [
        LinearLemma::LambdaLinf,
        LinearLemma::LambdaLinfOnePlusT,
        LinearLemma::InitialDataLinf,
        LinearLemma::InitialDataLapLinf,
        LinearLemma::InitialDataHs,
        LinearLemma::InitialDataLapHs,
        LinearLemma::CorollaryLinf,
        LinearLemma::CorollaryLapLinf,
        LinearLemma::LambdaHsigmaP,
        LinearLemma::LambdaHs,
        LinearLemma::DtLambdaHsigmaP,
        LinearLemma::DtLambdaHs,
        LinearLemma::LinearPartHsigmaP,
        LinearLemma::LinearPartLapHsigmaP,
    ];

    pub fn id(self) -> &'static str {
        match self {
            LinearLemma::LambdaLinf => "lambda_linf",
            LinearLemma::LambdaLinfOnePlusT => "lambda_linf_1pt",
            LinearLemma::InitialDataLinf => "initial_linf",
            LinearLemma::InitialDataLapLinf => "initial_lap_linf",
            LinearLemma::InitialDataHs => "initial_hs",
            LinearLemma::InitialDataLapHs => "initial_lap_hs",
            LinearLemma::CorollaryLinf => "corollary_linf",
            LinearLemma::CorollaryLapLinf => "corollary_lap_linf",
            LinearLemma::LambdaHsigmaP => "lambda_hsp",
            LinearLemma::LambdaHs => "lambda_hs",
            LinearLemma::DtLambdaHsigmaP => "dt_lambda_hsp",
            LinearLemma::DtLambdaHs => "dt_lambda_hs",
            LinearLemma::LinearPartHsigmaP => "linear_part_hsp",
            LinearLemma::LinearPartLapHsigmaP => "linear_part_lap_hsp",
        }
    }
}

impl fmt::Display for LinearLemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for LinearLemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LinearLemma::ALL
            .into_iter()
            .find(|l| l.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown linear lemma '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearLemmaParams {
    pub theta: f64,
    pub s: f64,
    pub sigma: f64,
    pub p: f64,
    /// Derivative order for the lemmas indexed by `k`.
    pub k: usize,
    /// Fit window; defaults to `[20, t_max/2]`.
    pub window: Option<(f64, f64)>,
    pub tolerance: f64,
}

impl Default for LinearLemmaParams {
    fn default() -> Self {
        Self {
            theta: 1.0,
            s: 1.0,
            sigma: -1.0,
            p: 2.0,
            k: 1,
            window: None,
            tolerance: DEFAULT_SLOPE_TOLERANCE,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Measure {
    Linf,
    /// Spectral `H^r`.
    Hs(f64),
    /// `H^r_p`.
    Bessel(f64, f64),
}

/// Everything needed to evaluate one lemma at one parameter point.
struct Plan {
    kind: MultiplierKind,
    lap: bool,
    measure: Measure,
    exponent: f64,
    rhs: Box<dyn Fn(f64) -> f64 + Sync>,
}

fn violated(name: &str, detail: String) -> Error {
    Error::Hypothesis(format!("{name} violated ({detail})"))
}

fn plan(lemma: LinearLemma, g: &Field, g_hat: &Spectrum, prm: &LinearLemmaParams) -> Result<Plan> {
    use LinearLemma::*;
    let n = g.grid().dim() as f64;
    let (theta, s, sigma, p, k) = (prm.theta, prm.s, prm.sigma, prm.p, prm.k);
    if !(0.0..=1.0).contains(&theta) {
        return Err(violated("0 <= theta <= 1", format!("theta = {theta}")));
    }
    let theta_admissible = || {
        if theta > (2.0 - n) / 2.0 {
            Ok(())
        } else {
            Err(violated("theta > (2-n)/2", format!("theta = {theta}, n = {n}")))
        }
    };
    let p_range = || {
        if p >= 2.0 {
            Ok(())
        } else {
            Err(violated("2 <= p <= inf", format!("p = {p}")))
        }
    };
    let d = (n / 2.0) * (1.0 - 2.0 / p);
    let alpha1 = (n + 2.0 * (theta - 1.0)) / 2.0;
    let l1 = lp_norm(g, 1.0);
    let hs = |r: f64| sobolev_norm_spectrum(g_hat, r);
    let lpc = lp_norm(g, conjugate(p));

    let (kind, lap, measure, exponent, rhs): (MultiplierKind, bool, Measure, f64, Box<dyn Fn(f64) -> f64 + Sync>) =
        match lemma {
            LambdaLinf | LambdaLinfOnePlusT => {
                theta_admissible()?;
                if !(s > (n + 4.0 * theta - 6.0) / 2.0) {
                    return Err(violated("s > (n+4theta-6)/2", format!("s = {s}")));
                }
                let h = hs(s);
                let rhs: Box<dyn Fn(f64) -> f64 + Sync> = if lemma == LambdaLinf {
                    Box::new(move |t| t.powf(-alpha1) * l1 + (-t / 4.0).exp() * h)
                } else {
                    Box::new(move |t| (1.0 + t).powf(-alpha1) * (l1 + h))
                };
                (MultiplierKind::LambdaTheta, false, Measure::Linf, -alpha1, rhs)
            }
            InitialDataLinf | InitialDataLapLinf | CorollaryLinf | CorollaryLapLinf => {
                if !(s > (n - 2.0) / 2.0) {
                    return Err(violated("s > (n-2)/2", format!("s = {s}")));
                }
                let lap = matches!(lemma, InitialDataLapLinf | CorollaryLapLinf);
                let h = hs(if lap { s + 2.0 } else { s + 1.0 });
                let rhs: Box<dyn Fn(f64) -> f64 + Sync> = if matches!(lemma, InitialDataLinf | InitialDataLapLinf) {
                    Box::new(move |t| t.powf(-n / 2.0) * l1 + (-t / 4.0).exp() * h)
                } else {
                    Box::new(move |t| (1.0 + t).powf(-n / 2.0) * (l1 + h))
                };
                let kind = if lap { MultiplierKind::S } else { MultiplierKind::DtS };
                (kind, lap, Measure::Linf, -n / 2.0, rhs)
            }
            InitialDataHs => {
                let kind = match k {
                    0 => MultiplierKind::DtS,
                    1 => MultiplierKind::Dt2S,
                    _ => return Err(violated("k in {0, 1}", format!("k = {k}"))),
                };
                let h = hs(s);
                (kind, false, Measure::Hs(s - k as f64), 0.0, Box::new(move |_| h))
            }
            InitialDataLapHs => {
                let kind = match k {
                    0 => MultiplierKind::S,
                    1 => MultiplierKind::DtS,
                    _ => return Err(violated("k in {0, 1}", format!("k = {k}"))),
                };
                let h = hs(s + 1.0);
                (kind, true, Measure::Hs(s - k as f64), 0.0, Box::new(move |_| h))
            }
            LambdaHsigmaP | DtLambdaHsigmaP => {
                if lemma == LambdaHsigmaP {
                    theta_admissible()?;
                }
                p_range()?;
                if !(sigma < 3.0 - n - 2.0 * theta) {
                    return Err(violated("sigma < 3-n-2theta", format!("sigma = {sigma}")));
                }
                if lemma == LambdaHsigmaP {
                    let e = 1.0 - theta - d;
                    (
                        MultiplierKind::LambdaTheta,
                        false,
                        Measure::Bessel(sigma, p),
                        e,
                        Box::new(move |t| t.powf(e) * lpc),
                    )
                } else {
                    (
                        MultiplierKind::DtLambdaTheta,
                        false,
                        Measure::Bessel(sigma - 1.0, p),
                        -d,
                        Box::new(move |t| t.powf(-d) * lpc),
                    )
                }
            }
            LambdaHs => {
                theta_admissible()?;
                let h = hs(s);
                let e = 1.0 - theta;
                (MultiplierKind::LambdaTheta, false, Measure::Hs(s), e, Box::new(move |t| t.powf(e) * h))
            }
            DtLambdaHs => {
                let h = hs(s - 1.0);
                (MultiplierKind::DtLambdaTheta, false, Measure::Hs(s - 1.0), 0.0, Box::new(move |_| h))
            }
            LinearPartHsigmaP | LinearPartLapHsigmaP => {
                p_range()?;
                if !(sigma < 1.0 - n) {
                    return Err(violated("sigma < 1-n", format!("sigma = {sigma}")));
                }
                if !(k == 1 || k == 2) {
                    return Err(violated("k in {1, 2}", format!("k = {k}")));
                }
                let kf = k as f64;
                if lemma == LinearPartHsigmaP {
                    let kind = if k == 1 { MultiplierKind::DtS } else { MultiplierKind::Dt2S };
                    (kind, false, Measure::Bessel(sigma - kf, p), -d, Box::new(move |t| t.powf(-d) * lpc))
                } else {
                    let kind = if k == 1 { MultiplierKind::S } else { MultiplierKind::DtS };
                    let h2 = bessel_norm(g, 2.0, conjugate(p))?;
                    (
                        kind,
                        true,
                        Measure::Bessel(sigma - kf + 1.0, p),
                        -d,
                        Box::new(move |t| t.powf(-d) * h2),
                    )
                }
            }
        };
    Ok(Plan { kind, lap, measure, exponent, rhs })
}

fn evaluate(plan: &Plan, g_hat: &Spectrum, t: f64, theta: f64) -> Result<(f64, Option<Field>)> {
    let mut m = multiplier_array(plan.kind, g_hat.grid(), t, theta)?;
    if plan.lap {
        for (v, x) in m.iter_mut().zip(g_hat.grid().xi_sq()) {
            *v *= -x;
        }
    }
    let out = g_hat.multiplied(&m)?;
    Ok(match plan.measure {
        Measure::Linf => {
            let f = inverse(&out)?;
            (f.max_abs(), Some(f))
        }
        Measure::Hs(r) => (sobolev_norm_spectrum(&out, r), None),
        Measure::Bessel(r, p) => (crate::norms::bessel_norm_spectrum(&out, r, p)?, None),
    })
}

/// Evaluates `lemma` for data `g` at every time in `t_grid` (all positive).
pub fn check_linear_lemma(
    lemma: LinearLemma,
    g: &Field,
    params: &LinearLemmaParams,
    t_grid: &[f64],
) -> Result<(LemmaReport, Option<DecayFit>)> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidArgument(format!("sample time {t} not in (0, inf)")));
    }
    let g_hat = forward(g);
    let plan = plan(lemma, g, &g_hat, params)?;
    let t_max = t_grid.iter().copied().fold(0.0, f64::max);
    let evaluated = t_grid
        .par_iter()
        .map(|&t| {
            let (lhs, field) = evaluate(&plan, &g_hat, t, params.theta)?;
            let band = if t == t_max { field.map(|f| f.boundary_band_ratio(BOUNDARY_FRACTION)) } else { None };
            Ok((LemmaSample::new(t, lhs, (plan.rhs)(t)), band))
        })
        .collect::<Result<Vec<_>>>()?;
    let band = evaluated.iter().find_map(|(_, b)| *b);
    let samples: Vec<LemmaSample> = evaluated.into_iter().map(|(s, _)| s).collect();

    let fit = if plan.exponent != 0.0 {
        let series: Vec<(f64, f64)> = samples.iter().map(|s| (s.t, s.lhs)).collect();
        match params.window {
            Some(w) => Some(fit_decay(&series, plan.exponent, w, params.tolerance)?),
            None => {
                let w = (20.0, t_max / 2.0);
                let inside = series.iter().filter(|(t, _)| *t >= w.0 && *t <= w.1).count();
                if w.1 > w.0 && inside >= 10 {
                    Some(fit_decay(&series, plan.exponent, w, params.tolerance)?)
                } else {
                    None
                }
            }
        }
    } else {
        None
    };

    let n = g.grid().dim() as f64;
    let mut report = LemmaReport::new(
        lemma.id(),
        vec![
            ("n", n),
            ("theta", params.theta),
            ("s", params.s),
            ("sigma", params.sigma),
            ("p", params.p),
            ("k", params.k as f64),
            ("expected_exponent", plan.exponent),
        ],
        samples,
    );
    report.pass = report.c_emp.is_finite() && fit.as_ref().is_none_or(|f| f.consistent);
    let mut notes = Vec::new();
    if let Some(f) = &fit {
        notes.push(format!("slope {:.4} (expected {:.4}, R2 {:.5})", f.slope, f.expected, f.r_squared));
        if !f.well_conditioned() {
            notes.push("low R2: domain truncation suspected".into());
        }
    }
    if let Some(b) = band.filter(|b| *b > WRAP_THRESHOLD) {
        log::warn!("{lemma}: boundary band holds {b:.2e} of the maximum at t = {t_max}");
        notes.push(format!("wrap-around {b:.2e} at t = {t_max}"));
    }
    report.note = notes.join("; ");
    Ok((report, fit))
}
