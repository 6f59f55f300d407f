//! Reference solutions that never touch the closed-form multipliers.
//!
//! `mode_ode_oracle` integrates each Fourier mode of
//! `(1+x)y'' + xy' + x²y = F` with an adaptive Dormand–Prince scheme.
//! `mol_oracle` steps the full nonlinear semi-discrete system
//! `(1+x)û'' + xû' + x²û = δ x^θ N̂(û)` with classical RK4, using the same
//! dealiased nonlinearity as the mild march.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{forward, inverse, Field, Spectrum};
use crate::mild::{assemble, MildSolution, SolveStatus, TimeGrid, Trajectory};
use crate::nonlinear::{power_spectrum, NonlinearityParams};
use crate::norms::NormParams;
use crate::propagator::{linear_spectra, Convention, LinearState};
use crate::symbols::{frac_weight, PlateSymbols};

use super::ode::{integrate, Tolerance};

/// Forcing `F̂(t)` for mode index `i` (storage order).
pub type Forcing<'a> = &'a (dyn Fn(f64, usize) -> Complex64 + Sync);

/// State at time `t` of the initial-value problem `u(0) = u0`, `u_t(0) = Δu1`.
pub fn mode_ode_oracle(u0: &Field, u1: &Field, t: f64, forcing: Option<Forcing<'_>>) -> Result<LinearState> {
    if !u0.grid().compatible(u1.grid()) {
        return Err(Error::GridMismatch);
    }
    let grid = u0.grid().clone();
    let a = forward(u0);
    let b = forward(u1);
    let scale = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .zip(grid.xi_sq())
        .map(|((p, q), x)| p.norm().max(q.norm() * x))
        .fold(0.0f64, f64::max);
    let tol = Tolerance {
        rtol: 1e-12,
        atol: 1e-14 * scale.max(1e-300),
        ..Default::default()
    };
    let solved: Vec<(Complex64, Complex64)> = grid
        .xi_sq()
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let y0 = a.coeffs()[i];
            let v0 = b.coeffs()[i] * -x;
            if forcing.is_none() && y0 == Complex64::default() && v0 == Complex64::default() {
                return Ok((y0, v0));
            }
            let rhs = |s: f64, y: &[f64; 4]| {
                let f = forcing.map_or(Complex64::default(), |g| g(s, i));
                let inv = 1.0 / (1.0 + x);
                [
                    y[2],
                    y[3],
                    (f.re - x * y[2] - x * x * y[0]) * inv,
                    (f.im - x * y[3] - x * x * y[1]) * inv,
                ]
            };
            let end = integrate(rhs, [y0.re, y0.im, v0.re, v0.im], 0.0, t, tol)
                .map_err(|reason| Error::Integrator { mode: i, reason })?;
            Ok((Complex64::new(end[0], end[1]), Complex64::new(end[2], end[3])))
        })
        .collect::<Result<Vec<_>>>()?;
    let (u, ut): (Vec<Complex64>, Vec<Complex64>) = solved.into_iter().unzip();
    LinearState::new(
        inverse(&Spectrum::new(grid.clone(), u)?)?,
        inverse(&Spectrum::new(grid, ut)?)?,
        t,
    )
}

#[derive(Clone, Debug)]
pub struct MolConfig {
    /// RK4 steps per time-grid interval.
    pub substeps: usize,
    /// Chooses the initial velocity: the state at `t = 0` is the linear
    /// solution at `t = 0` under this convention.
    pub convention: Convention,
    pub norms: Option<NormParams>,
}

impl Default for MolConfig {
    fn default() -> Self {
        Self {
            substeps: 10,
            convention: Convention::Paper,
            norms: None,
        }
    }
}

/// Largest stable `Δt·max φ` accepted by [`mol_oracle`].
pub const MOL_STABILITY_LIMIT: f64 = 0.2;

/// Method-of-lines reference for the mild march, sampled on `tg`.
pub fn mol_oracle(
    u0: &Field,
    u1: &Field,
    params: &NonlinearityParams,
    tg: &TimeGrid,
    cfg: &MolConfig,
) -> Result<MildSolution> {
    params.validate()?;
    if !u0.grid().compatible(u1.grid()) {
        return Err(Error::GridMismatch);
    }
    if cfg.substeps == 0 {
        return Err(Error::InvalidArgument("substeps must be at least 1".into()));
    }
    let grid = u0.grid().clone();
    let h = tg.dt() / cfg.substeps as f64;
    let max_phi = grid
        .xi_sq()
        .iter()
        .map(|&x| PlateSymbols::unchecked(x).frequency())
        .fold(0.0, f64::max);
    if h * max_phi > MOL_STABILITY_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "RK4 step {h} gives dt * max phi = {:.3} > {MOL_STABILITY_LIMIT}",
            h * max_phi
        )));
    }
    let x = grid.xi_sq().to_vec();
    let source: Vec<f64> = x.iter().map(|&x| params.delta * frac_weight(x, params.theta)).collect();
    let rhs = |u: &[Complex64], v: &[Complex64]| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let n = if params.delta == 0.0 {
            vec![Complex64::default(); u.len()]
        } else {
            power_spectrum(&Spectrum::new(grid.clone(), u.to_vec())?, params.lambda, params.dealias)?
                .into_coeffs()
        };
        let acc = (0..u.len())
            .map(|i| (n[i] * source[i] - v[i] * x[i] - u[i] * (x[i] * x[i])) / (1.0 + x[i]))
            .collect();
        Ok((v.to_vec(), acc))
    };
    let axpy = |y: &[Complex64], c: f64, d: &[Complex64]| -> Vec<Complex64> {
        y.iter().zip(d).map(|(a, b)| a + b * c).collect()
    };
    let energy = |u: &[Complex64], v: &[Complex64]| -> f64 {
        u.iter().chain(v).map(|c| c.norm_sqr()).sum()
    };

    let (s0, v0) = linear_spectra(&forward(u0), &forward(u1), 0.0, cfg.convention)?;
    let mut u = s0.into_coeffs();
    let mut v = v0.into_coeffs();
    let mut traj: Trajectory = vec![(u.clone(), v.clone())];
    let mut status = SolveStatus::Completed;
    'outer: for k in 1..=tg.steps() {
        let before = energy(&u, &v);
        for _ in 0..cfg.substeps {
            let step = (|| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
                let (k1u, k1v) = rhs(&u, &v)?;
                let (k2u, k2v) = rhs(&axpy(&u, h / 2.0, &k1u), &axpy(&v, h / 2.0, &k1v))?;
                let (k3u, k3v) = rhs(&axpy(&u, h / 2.0, &k2u), &axpy(&v, h / 2.0, &k2v))?;
                let (k4u, k4v) = rhs(&axpy(&u, h, &k3u), &axpy(&v, h, &k3v))?;
                let comb = |y: &[Complex64], a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64]| {
                    (0..y.len())
                        .map(|i| y[i] + (a[i] + (b[i] + c[i]) * 2.0 + d[i]) * (h / 6.0))
                        .collect::<Vec<_>>()
                };
                Ok((comb(&u, &k1u, &k2u, &k3u, &k4u), comb(&v, &k1v, &k2v, &k3v, &k4v)))
            })();
            match step {
                Ok((nu, nv)) => {
                    u = nu;
                    v = nv;
                }
                Err(Error::Overflow { max_abs, .. }) => {
                    status = SolveStatus::Diverged { step: k, max_abs };
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
        }
        let after = energy(&u, &v);
        if !after.is_finite() || (before > 0.0 && after > 100.0 * before) {
            return Err(Error::Unstable(format!(
                "state norm grew by {:.3e} over step {k} (t = {})",
                (after / before).sqrt(),
                tg.t(k)
            )));
        }
        traj.push((u.clone(), v.clone()));
    }
    let n_hist = traj
        .par_iter()
        .map(|(u, _)| {
            Ok(power_spectrum(&Spectrum::new(grid.clone(), u.clone())?, params.lambda, params.dealias)?
                .into_coeffs())
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(&grid, tg, traj, None, n_hist, cfg.norms.as_ref(), status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::mild::{march, MarchConfig};
    use crate::propagator::linear_solution;
    use crate::symbols::{multiplier, MultiplierKind};
    use crate::verify::relative_l2;

    #[test]
    fn zero_data_gives_zero() {
        let g = make_grid(1, 32, 5.0).unwrap();
        let z = Field::zeros(&g);
        let s = mode_ode_oracle(&z, &z, 2.0, None).unwrap();
        assert_eq!(s.u.max_abs(), 0.0);
        let params = NonlinearityParams::new(3.0, 1.0).unwrap();
        let tg = TimeGrid::uniform(0.01, 0.1).unwrap();
        let sol = mol_oracle(&z, &z, &params, &tg, &MolConfig::default()).unwrap();
        assert!(sol.trajectory.iter().all(|s| s.u.max_abs() == 0.0));
    }

    #[test]
    fn single_mode_follows_ivp_propagator() {
        let g = make_grid(1, 32, 2.0 * std::f64::consts::PI).unwrap();
        let k = 3.0 * g.dk();
        let u0 = Field::from_fn(&g, |x| (k * x[0]).cos()).unwrap();
        let z = Field::zeros(&g);
        for t in [0.5, 2.0, 7.0] {
            let s = mode_ode_oracle(&u0, &z, t, None).unwrap();
            let p = multiplier(MultiplierKind::PIvp, k * k, t, 0.0).unwrap();
            assert!(s.u.sub(&u0.scaled(p)).unwrap().max_abs() < 1e-8);
        }
    }

    #[test]
    fn gaussian_agrees_with_ivp_solution() {
        let g = make_grid(1, 256, 40.0).unwrap();
        let u0 = Field::from_fn(&g, |x| (-x[0] * x[0] / 2.0).exp()).unwrap();
        let z = Field::zeros(&g);
        let oracle = mode_ode_oracle(&u0, &z, 1.0, None).unwrap();
        let exact = linear_solution(&u0, &z, 1.0, Convention::Ivp).unwrap();
        assert!(relative_l2(&oracle.u, &exact.u).unwrap() < 1e-8);
        assert!(relative_l2(&oracle.ut, &exact.ut).unwrap() < 1e-8);
    }

    #[test]
    fn forcing_matches_duhamel_integral() {
        // Constant forcing F on mode j: y = ∫₀ᵗ S(τ)/(1+x) dτ · F for zero data.
        let g = make_grid(1, 16, 3.0).unwrap();
        let z = Field::zeros(&g);
        let force = |_: f64, i: usize| if i == 2 || i == 14 { Complex64::new(1.0, 0.0) } else { Complex64::default() };
        let t = 2.5;
        let s = mode_ode_oracle(&z, &z, t, Some(&force)).unwrap();
        let x = g.xi_sq()[2];
        let expected = super::super::quad::integrate(
            |tau| multiplier(MultiplierKind::S, x, tau, 0.0).unwrap() / (1.0 + x),
            0.0,
            t,
            1e-14,
            1e-13,
        )
        .unwrap();
        let got = forward(&s.u).coeffs()[2];
        assert!((got.re - expected).abs() < 1e-9, "{got} vs {expected}");
        assert!(got.im.abs() < 1e-12);
    }

    #[test]
    fn linear_mol_matches_mode_ode() {
        let g = make_grid(1, 128, 30.0).unwrap();
        let u0 = Field::from_fn(&g, |x| (-x[0] * x[0] / 2.0).exp()).unwrap();
        let u1 = Field::from_fn(&g, |x| 0.3 * (-x[0] * x[0]).exp()).unwrap();
        let params = NonlinearityParams::new(3.0, 1.0).unwrap().with_delta(0.0);
        let tg = TimeGrid::uniform(0.05, 1.0).unwrap();
        let cfg = MolConfig { substeps: 10, convention: Convention::Ivp, norms: None };
        let mol = mol_oracle(&u0, &u1, &params, &tg, &cfg).unwrap();
        let ode = mode_ode_oracle(&u0, &u1, 1.0, None).unwrap();
        assert!(relative_l2(&mol.final_state().u, &ode.u).unwrap() < 1e-7);
    }

    #[test]
    fn nonlinear_march_matches_mol() {
        let g = make_grid(1, 128, 30.0).unwrap();
        let u0 = Field::from_fn(&g, |x| 0.1 * (-x[0] * x[0] / 2.0).exp()).unwrap();
        let z = Field::zeros(&g);
        let params = NonlinearityParams::new(3.0, 1.0).unwrap();
        let tg = TimeGrid::uniform(0.01, 1.0).unwrap();
        let cfg = MolConfig { substeps: 20, ..Default::default() };
        let mol = mol_oracle(&u0, &z, &params, &tg, &cfg).unwrap();
        let mild = march(&u0, &z, &params, &tg, &MarchConfig::default()).unwrap();
        assert!(relative_l2(&mild.final_state().u, &mol.final_state().u).unwrap() < 1e-4);
    }

    #[test]
    fn stability_limit_is_enforced() {
        let g = make_grid(1, 256, 10.0).unwrap();
        let z = Field::zeros(&g);
        let params = NonlinearityParams::new(3.0, 1.0).unwrap();
        let tg = TimeGrid::uniform(0.1, 1.0).unwrap();
        let cfg = MolConfig { substeps: 1, ..Default::default() };
        assert!(mol_oracle(&z, &z, &params, &tg, &cfg).is_err());
    }
}
