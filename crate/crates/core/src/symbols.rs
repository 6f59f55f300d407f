//! Closed-form symbols of the linear plate operator with rotational inertia.
//!
//! Per mode the linear equation reads `(1+x) y'' + x y' + x² y = 0` with
//! `x = |ξ|²`. Its characteristic roots are `-a ± iφ` where
//!
//! ```text
//! a = x / (2(1+x)),    φ = x √(3+4x) / (2(1+x)).
//! ```
//!
//! Every multiplier below is built from `E = e^{-at}`, `cos(tφ)`, `sin(tφ)/φ`
//! and the ratio `a/φ = 1/√(3+4x)`, which is evaluated from the identity and
//! never as a quotient of two small numbers.

use crate::error::{Error, Result};
use crate::grid::SpectralGrid;

/// Below this value of `tφ` the quotient `sin(tφ)/φ` switches to its Taylor polynomial.
pub const TAYLOR_SWITCH: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultiplierKind {
    S,
    DtS,
    Dt2S,
    SLap,
    DtSLap,
    LambdaTheta,
    DtLambdaTheta,
    /// `E·[cos + (a/φ) sin]`: value 1 and slope 0 at `t = 0`.
    PIvp,
    DtPIvp,
}

impl MultiplierKind {
    pub const ALL: [MultiplierKind; 9] = [
        MultiplierKind::S,
        MultiplierKind::DtS,
        MultiplierKind::Dt2S,
        MultiplierKind::SLap,
        MultiplierKind::DtSLap,
        MultiplierKind::LambdaTheta,
        MultiplierKind::DtLambdaTheta,
        MultiplierKind::PIvp,
        MultiplierKind::DtPIvp,
    ];

    pub fn uses_theta(self) -> bool {
        matches!(self, MultiplierKind::LambdaTheta | MultiplierKind::DtLambdaTheta)
    }
}

/// Symbol pieces at a fixed `x = |ξ|²`.
#[derive(Clone, Copy, Debug)]
pub struct PlateSymbols {
    xi_sq: f64,
    a: f64,
    phi: f64,
    ratio: f64,
}

impl PlateSymbols {
    pub fn new(xi_sq: f64) -> Result<Self> {
        if !(xi_sq >= 0.0) || !xi_sq.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "|xi|^2 must be finite and nonnegative, got {xi_sq}"
            )));
        }
        Ok(Self::unchecked(xi_sq))
    }

    pub(crate) fn unchecked(x: f64) -> Self {
        let root = (3.0 + 4.0 * x).sqrt();
        let one_plus = 1.0 + x;
        Self {
            xi_sq: x,
            a: x / (2.0 * one_plus),
            phi: x * root / (2.0 * one_plus),
            ratio: 1.0 / root,
        }
    }

    pub fn xi_sq(&self) -> f64 {
        self.xi_sq
    }

    /// Decay rate `a(ξ)`.
    pub fn decay_rate(&self) -> f64 {
        self.a
    }

    /// Oscillation frequency `φ(ξ)`.
    pub fn frequency(&self) -> f64 {
        self.phi
    }

    /// `a/φ`, exact for every ξ including the zero mode.
    pub fn damping_ratio(&self) -> f64 {
        self.ratio
    }

    /// `sin(tφ)/φ` with the removable singularity handled.
    pub fn sinc_t(&self, t: f64) -> f64 {
        let tp = t * self.phi;
        if tp < TAYLOR_SWITCH {
            t * (1.0 - tp * tp / 6.0)
        } else {
            tp.sin() / self.phi
        }
    }

    /// `(S, ∂tS)` at time `t`, sharing the exponential and trig evaluations.
    pub fn s_pair(&self, t: f64) -> (f64, f64) {
        let e = (-self.a * t).exp();
        let tp = t * self.phi;
        let sinc = self.sinc_t(t);
        let sin = if tp < TAYLOR_SWITCH { sinc * self.phi } else { tp.sin() };
        (e * sinc, e * (tp.cos() - self.ratio * sin))
    }

    pub fn multiplier(&self, kind: MultiplierKind, t: f64, theta: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "time must be finite and nonnegative, got {t}"
            )));
        }
        if kind.uses_theta() && !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidArgument(format!("theta must lie in [0, 1], got {theta}")));
        }
        Ok(self.eval(kind, t, theta))
    }

    pub(crate) fn eval(&self, kind: MultiplierKind, t: f64, theta: f64) -> f64 {
        let x = self.xi_sq;
        let e = (-self.a * t).exp();
        let tp = t * self.phi;
        let cos = tp.cos();
        let sinc = self.sinc_t(t);
        let sin = if tp < TAYLOR_SWITCH { sinc * self.phi } else { tp.sin() };
        let s = e * sinc;
        let dts = e * (cos - self.ratio * sin);
        match kind {
            MultiplierKind::S => s,
            MultiplierKind::DtS => dts,
            MultiplierKind::Dt2S => {
                let c = x * (1.0 + 2.0 * x) * self.ratio / (1.0 + x);
                e * (-2.0 * self.a * cos - c * sin)
            }
            MultiplierKind::SLap => -x * s,
            MultiplierKind::DtSLap => -x * dts,
            MultiplierKind::LambdaTheta => s * frac_weight(x, theta) / (1.0 + x),
            MultiplierKind::DtLambdaTheta => dts * frac_weight(x, theta) / (1.0 + x),
            MultiplierKind::PIvp => e * (cos + self.ratio * sin),
            MultiplierKind::DtPIvp => -e * (self.phi + self.a * self.ratio) * sin,
        }
    }
}

/// `|ξ|^{2θ}` from `x = |ξ|²`, with `0^0 = 1`.
pub fn frac_weight(xi_sq: f64, theta: f64) -> f64 {
    if theta == 0.0 {
        1.0
    } else if xi_sq == 0.0 {
        0.0
    } else {
        xi_sq.powf(theta)
    }
}

pub fn multiplier(kind: MultiplierKind, xi_sq: f64, t: f64, theta: f64) -> Result<f64> {
    PlateSymbols::new(xi_sq)?.multiplier(kind, t, theta)
}

/// Multiplier evaluated at every mode of `grid`, in storage order.
pub fn multiplier_array(
    kind: MultiplierKind,
    grid: &SpectralGrid,
    t: f64,
    theta: f64,
) -> Result<Vec<f64>> {
    // Validate the scalar arguments once, then evaluate without rechecking.
    PlateSymbols::unchecked(0.0).multiplier(kind, t, theta)?;
    Ok(grid
        .xi_sq()
        .iter()
        .map(|&x| PlateSymbols::unchecked(x).eval(kind, t, theta))
        .collect())
}
