//! Application of the semigroup multipliers and the homogeneous solution
//! `u = ∂tS(t)u0 + S(t)Δu1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{forward, inverse, Field, Spectrum};
use crate::symbols::{multiplier_array, MultiplierKind, PlateSymbols};

/// Which multiplier propagates `u0`.
///
/// `Paper` uses `∂tS` as displayed in the linear solution formula. `Ivp` uses
/// `P_ivp = E·[cos + (a/φ)sin]`, the propagator that actually satisfies
/// `u(0) = u0`, `u_t(0) = Δu1`. The two differ by `2a·S`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Convention {
    #[default]
    Paper,
    Ivp,
}

impl Convention {
    /// Multipliers for `(u, u_t)` acting on `u0`.
    pub fn u0_kinds(self) -> (MultiplierKind, MultiplierKind) {
        match self {
            Convention::Paper => (MultiplierKind::DtS, MultiplierKind::Dt2S),
            Convention::Ivp => (MultiplierKind::PIvp, MultiplierKind::DtPIvp),
        }
    }
}

/// The pair `(u, u_t)` at time `t`.
#[derive(Clone, Debug)]
pub struct LinearState {
    pub u: Field,
    pub ut: Field,
    pub t: f64,
}

impl LinearState {
    pub fn new(u: Field, ut: Field, t: f64) -> Result<Self> {
        if !u.grid().compatible(ut.grid()) {
            return Err(Error::GridMismatch);
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative time {t}")));
        }
        Ok(Self { u, ut, t })
    }

    pub fn zeros_like(f: &Field, t: f64) -> Self {
        Self {
            u: Field::zeros(f.grid()),
            ut: Field::zeros(f.grid()),
            t,
        }
    }
}

pub fn apply_spectrum(kind: MultiplierKind, s: &Spectrum, t: f64, theta: f64) -> Result<Spectrum> {
    let m = multiplier_array(kind, s.grid(), t, theta)?;
    s.multiplied(&m)
}

/// `inverse(multiplier · forward(f))`.
pub fn apply(kind: MultiplierKind, f: &Field, t: f64, theta: f64) -> Result<Field> {
    inverse(&apply_spectrum(kind, &forward(f), t, theta)?)
}

/// Spectral Laplacian, multiplier `-|ξ|²`.
pub fn laplacian(f: &Field) -> Result<Field> {
    inverse(&forward(f).map_modes(|x, c| c * -x))
}

/// Spectra of `(u, u_t)` for the homogeneous problem at time `t`.
pub fn linear_spectra(
    u0: &Spectrum,
    u1: &Spectrum,
    t: f64,
    convention: Convention,
) -> Result<(Spectrum, Spectrum)> {
    if !u0.grid().compatible(u1.grid()) {
        return Err(Error::GridMismatch);
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be nonnegative, got {t}")));
    }
    let (ku, kut) = convention.u0_kinds();
    let grid = u0.grid().clone();
    let mut u = Vec::with_capacity(grid.len());
    let mut ut = Vec::with_capacity(grid.len());
    for ((&x, &a), &b) in grid.xi_sq().iter().zip(u0.coeffs()).zip(u1.coeffs()) {
        let p = PlateSymbols::unchecked(x);
        let lap_b: Complex64 = b * -x;
        let (s, dts) = p.s_pair(t);
        u.push(a * p.eval(ku, t, 0.0) + lap_b * s);
        ut.push(a * p.eval(kut, t, 0.0) + lap_b * dts);
    }
    Ok((Spectrum::new(grid.clone(), u)?, Spectrum::new(grid, ut)?))
}

/// `u = K(t)u0 + S(t)Δu1`, `u_t = K'(t)u0 + ∂tS(t)Δu1` with `K` chosen by `convention`.
pub fn linear_solution(u0: &Field, u1: &Field, t: f64, convention: Convention) -> Result<LinearState> {
    let (u, ut) = linear_spectra(&forward(u0), &forward(u1), t, convention)?;
    LinearState::new(inverse(&u)?, inverse(&ut)?, t)
}
