//! Pseudospectral tools for the damped plate equation with rotational inertia
//!
//! ```text
//! u_tt − Δu_tt + Δ²u − Δu_t = δ(−Δ)^θ|u|^λ
//! ```
//!
//! on a periodic stand-in for `R^n` (`n = 1, 2`): the exact Fourier-multiplier
//! semigroup, mild solutions by Duhamel marching and Picard iteration, and
//! numerical checks of the linear decay rates and nonlinear estimates.

// `!(x > 0.0)` style checks are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod mild;
pub mod nonlinear;
pub mod norms;
pub mod propagator;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{forward, inverse, make_grid, Field, SpectralGrid, Spectrum};
pub use mild::{march, picard, residual, MarchConfig, MildSolution, NormKind, PicardConfig, PicardOutcome, PicardStatus, SolveStatus, TimeGrid};
pub use nonlinear::{Dealias, NonlinearityParams};
pub use norms::{NormParams, NormRecord};
pub use propagator::{apply, linear_solution, Convention, LinearState};
pub use symbols::{multiplier, multiplier_array, MultiplierKind, PlateSymbols};
pub use verify::{DecayFit, LemmaReport, LemmaSample, TestFunction};
