//! Lebesgue, Sobolev and Bessel-potential norms, and the weighted space-time
//! norms `𝒴`, `𝒳`, `𝒵` used by the existence theorems.
//!
//! Space-time suprema are finite maxima over recorded sample times. `L^∞` is
//! the grid maximum, without interpolation between nodes.

use crate::error::{Error, Result};
use crate::grid::{forward, inverse, Field, Spectrum};
use crate::nonlinear::bessel_potential_spectrum;
use crate::propagator::LinearState;
use crate::symbols::{MultiplierKind, PlateSymbols};

/// Exponents shared by the norms. `α₁`, `α`, `β` and `p′` are derived from
/// `(n, θ, λ, p)` on demand and cannot be set independently.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormParams {
    pub n: usize,
    pub s: f64,
    p: f64,
    pub lambda: f64,
    pub theta: f64,
}

impl NormParams {
    pub fn new(n: usize, s: f64, p: f64, lambda: f64, theta: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidArgument(format!("p must lie in [1, inf], got {p}")));
        }
        if !s.is_finite() || !(lambda > 1.0) || !theta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need finite s, theta and lambda > 1 (s = {s}, lambda = {lambda}, theta = {theta})"
            )));
        }
        Ok(Self { n, s, p, lambda, theta })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent `p′` with `1/p + 1/p′ = 1`.
    pub fn p_conj(&self) -> f64 {
        conjugate(self.p)
    }

    /// `(n/2)(1 − 2/p)`.
    pub fn dispersion_exponent(&self) -> f64 {
        self.n as f64 / 2.0 * (1.0 - 2.0 / self.p)
    }

    /// `α₁ = (n + 2(θ−1))/2`.
    pub fn alpha1(&self) -> f64 {
        (self.n as f64 + 2.0 * (self.theta - 1.0)) / 2.0
    }

    /// `α = [2 − θ − (n/2)(1 − 2/p)] / (λ − 1)`.
    pub fn alpha(&self) -> f64 {
        (2.0 - self.theta - self.dispersion_exponent()) / (self.lambda - 1.0)
    }

    /// `β = α + 1 − θ`.
    pub fn beta(&self) -> f64 {
        self.alpha() + 1.0 - self.theta
    }
}

pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `(Σ|f|^p dxⁿ)^{1/p}`, or the grid maximum for `p = ∞`.
pub fn lp_norm(f: &Field, p: f64) -> f64 {
    if p.is_infinite() {
        return f.max_abs();
    }
    let w = f.grid().cell_volume();
    if p == 2.0 {
        return (f.values().iter().map(|v| v * v).sum::<f64>() * w).sqrt();
    }
    if p == 1.0 {
        return f.values().iter().map(|v| v.abs()).sum::<f64>() * w;
    }
    (f.values().iter().map(|v| v.abs().powf(p)).sum::<f64>() * w).powf(1.0 / p)
}

/// `(Σ (1+|ξ|²)^s |f̂|² dkⁿ)^{1/2}`.
pub fn sobolev_norm_spectrum(s_hat: &Spectrum, s: f64) -> f64 {
    if s == 0.0 {
        return s_hat.weighted_energy(|_| 1.0).sqrt();
    }
    s_hat.weighted_energy(|x| (1.0 + x).powf(s)).sqrt()
}

pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    sobolev_norm_spectrum(&forward(f), s)
}

/// `‖(I−Δ)^{s/2} f‖_{L^p}`. For `p = 2` this is evaluated spectrally.
pub fn bessel_norm_spectrum(s_hat: &Spectrum, s: f64, p: f64) -> Result<f64> {
    if p == 2.0 {
        return Ok(sobolev_norm_spectrum(s_hat, s));
    }
    Ok(lp_norm(&inverse(&bessel_potential_spectrum(s_hat, s))?, p))
}

pub fn bessel_norm(f: &Field, s: f64, p: f64) -> Result<f64> {
    if s == 0.0 {
        return Ok(lp_norm(f, p));
    }
    bessel_norm_spectrum(&forward(f), s, p)
}

/// Norms of one state `(u, u_t)` at time `t`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NormRecord {
    pub t: f64,
    pub linf: f64,
    pub hs: f64,
    pub hs_minus1: f64,
    /// `‖u‖_{H^s_p}`
    pub hsp: f64,
    /// `‖u_t‖_{H^{s−1}_p}`
    pub hsp_minus1: f64,
}

impl NormRecord {
    pub fn measure(state: &LinearState, params: &NormParams) -> Result<Self> {
        let u_hat = forward(&state.u);
        let ut_hat = forward(&state.ut);
        Self::from_parts(state.t, &state.u, &u_hat, &ut_hat, params)
    }

    /// Same as [`NormRecord::measure`] when the spectra are already at hand.
    pub fn from_parts(
        t: f64,
        u: &Field,
        u_hat: &Spectrum,
        ut_hat: &Spectrum,
        params: &NormParams,
    ) -> Result<Self> {
        let s = params.s;
        let hs = sobolev_norm_spectrum(u_hat, s);
        let hs_minus1 = sobolev_norm_spectrum(ut_hat, s - 1.0);
        let (hsp, hsp_minus1) = if params.p() == 2.0 {
            (hs, hs_minus1)
        } else {
            (
                bessel_norm_spectrum(u_hat, s, params.p())?,
                bessel_norm_spectrum(ut_hat, s - 1.0, params.p())?,
            )
        };
        Ok(Self {
            t,
            linf: u.max_abs(),
            hs,
            hs_minus1,
            hsp,
            hsp_minus1,
        })
    }

    /// `(1+t)^{α₁}‖u‖_∞ + ‖u‖_{H^s} + ‖u_t‖_{H^{s−1}}`.
    pub fn weighted_y(&self, params: &NormParams) -> f64 {
        (1.0 + self.t).powf(params.alpha1()) * self.linf + self.hs + self.hs_minus1
    }

    /// `t^α‖u‖_{H^s_p} + t^β‖u_t‖_{H^{s−1}_p}`.
    pub fn weighted_x(&self, params: &NormParams) -> f64 {
        pow0(self.t, params.alpha()) * self.hsp + pow0(self.t, params.beta()) * self.hsp_minus1
    }

    /// `t^{(n/2)(1−2/p)}(‖u‖_{H^s_p} + ‖u_t‖_{H^{s−1}_p})`.
    pub fn weighted_z(&self, params: &NormParams) -> f64 {
        pow0(self.t, params.dispersion_exponent()) * (self.hsp + self.hsp_minus1)
    }
}

// t^e with 0^e = 0 for e > 0 and 1 for e = 0; negative e at t = 0 is infinite.
fn pow0(t: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        t.powf(e)
    }
}

fn sup(records: &[NormRecord], f: impl Fn(&NormRecord) -> f64) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    Ok(records.iter().map(f).fold(0.0, f64::max))
}

/// `𝒴` norm: sup over all recorded times, including `t = 0`.
pub fn y_norm(records: &[NormRecord], params: &NormParams) -> Result<f64> {
    sup(records, |r| r.weighted_y(params))
}

/// `𝒳` norm: sup over recorded times `t > 0`.
pub fn x_norm(records: &[NormRecord], params: &NormParams) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    Ok(records
        .iter()
        .filter(|r| r.t > 0.0)
        .map(|r| r.weighted_x(params))
        .fold(0.0, f64::max))
}

/// `𝒵_T` norm: sup over recorded times `0 < t < T`.
pub fn z_norm(records: &[NormRecord], params: &NormParams, horizon: f64) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    Ok(records
        .iter()
        .filter(|r| r.t > 0.0 && r.t < horizon)
        .map(|r| r.weighted_z(params))
        .fold(0.0, f64::max))
}

/// Sampled `ℐ₀` norm of the data: the sum of two separate suprema,
/// `sup t^α(‖∂tS u0‖ + ‖SΔu1‖)_{H^s_p}` and `sup t^β(‖∂t²S u0‖ + ‖∂tSΔu1‖)_{H^{s−1}_p}`.
pub fn data_norm_i0(u0: &Field, u1: &Field, params: &NormParams, sample_times: &[f64]) -> Result<f64> {
    if !u0.grid().compatible(u1.grid()) {
        return Err(Error::GridMismatch);
    }
    let a_hat = forward(u0);
    let b_hat = forward(u1);
    let (mut first, mut second) = (0.0f64, 0.0f64);
    for &t in sample_times {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!("sample time {t} not in (0, inf)")));
        }
        let mut parts = Vec::with_capacity(4);
        for (src, kind) in [
            (&a_hat, MultiplierKind::DtS),
            (&b_hat, MultiplierKind::SLap),
            (&a_hat, MultiplierKind::Dt2S),
            (&b_hat, MultiplierKind::DtSLap),
        ] {
            parts.push(src.map_modes(|x, c| c * PlateSymbols::unchecked(x).eval(kind, t, 0.0)));
        }
        let s = params.s;
        let p = params.p();
        let lead = bessel_norm_spectrum(&parts[0], s, p)? + bessel_norm_spectrum(&parts[1], s, p)?;
        let deriv = bessel_norm_spectrum(&parts[2], s - 1.0, p)?
            + bessel_norm_spectrum(&parts[3], s - 1.0, p)?;
        first = first.max(t.powf(params.alpha()) * lead);
        second = second.max(t.powf(params.beta()) * deriv);
    }
    Ok(first + second)
}
