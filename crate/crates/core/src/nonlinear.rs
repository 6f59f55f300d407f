//! The source term `δ(−Δ)^θ|u|^λ` and the spectral operators around it.
//!
//! For integer `λ ≤ 3` the two-thirds rule removes quadratic aliasing exactly
//! and most of the cubic. For other `λ` the power is not band-limited and
//! dealiasing only suppresses aliasing; resolution studies are the check.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{forward, inverse, Field, SpectralGrid, Spectrum};
use crate::symbols::frac_weight;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Dealias {
    None,
    /// Keep `|j| ≤ N/3` on every axis, both before and after the pointwise power.
    #[default]
    TwoThirds,
    /// Evaluate the power on the 3/2-refined grid and restrict.
    ZeroPad,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonlinearityParams {
    pub lambda: f64,
    pub theta: f64,
    pub delta: f64,
    pub dealias: Dealias,
}

impl NonlinearityParams {
    pub fn new(lambda: f64, theta: f64) -> Result<Self> {
        let p = Self {
            lambda,
            theta,
            delta: -1.0,
            dealias: Dealias::TwoThirds,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_dealias(mut self, dealias: Dealias) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 2.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda must be >= 2, got {}", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::InvalidArgument(format!(
                "theta must lie in [0, 1], got {}",
                self.theta
            )));
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidArgument("delta must be finite".into()));
        }
        Ok(())
    }

    /// Whether `θ > (2−n)/2`, the admissibility condition for `n ∈ {1, 2}`.
    /// Violations are logged, not rejected.
    pub fn theta_admissible(&self, n: usize) -> bool {
        let ok = n > 2 || self.theta > (2.0 - n as f64) / 2.0;
        if !ok {
            log::warn!(
                "theta = {} violates theta > (2-n)/2 for n = {n}",
                self.theta
            );
        }
        ok
    }
}

fn two_thirds_mask(grid: &SpectralGrid) -> Vec<bool> {
    let cut = (grid.points_per_axis() / 3) as i64;
    (0..grid.len())
        .map(|i| {
            let [a, b] = grid.mode_of(i);
            a.abs() <= cut && b.abs() <= cut
        })
        .collect()
}

/// Zeroes every mode outside the two-thirds band.
pub fn truncate_two_thirds(s: &Spectrum) -> Spectrum {
    let mask = two_thirds_mask(s.grid());
    let coeffs = s
        .coeffs()
        .iter()
        .zip(mask)
        .map(|(&c, keep)| if keep { c } else { Complex64::default() })
        .collect();
    Spectrum::new(s.grid().clone(), coeffs).expect("same grid")
}

fn pointwise_power(values: &mut [f64], lambda: f64) -> Result<()> {
    let int = lambda.fract() == 0.0 && lambda <= i32::MAX as f64;
    let (mut worst, mut worst_at) = (0.0f64, 0usize);
    let mut bad = false;
    for (i, v) in values.iter_mut().enumerate() {
        let a = v.abs();
        if a > worst {
            worst = a;
            worst_at = i;
        }
        *v = if int { a.powi(lambda as i32) } else { a.powf(lambda) };
        bad |= !v.is_finite();
    }
    if bad {
        return Err(Error::Overflow {
            index: worst_at,
            max_abs: worst,
        });
    }
    Ok(())
}

/// Spectrum of `|u|^λ` from the spectrum of `u`.
pub fn power_spectrum(u: &Spectrum, lambda: f64, dealias: Dealias) -> Result<Spectrum> {
    match dealias {
        Dealias::None => {
            let mut f = inverse(u)?.into_values();
            pointwise_power(&mut f, lambda)?;
            Ok(forward(&Field::new(u.grid().clone(), f)?))
        }
        Dealias::TwoThirds => {
            let mut f = inverse(&truncate_two_thirds(u))?.into_values();
            pointwise_power(&mut f, lambda)?;
            Ok(truncate_two_thirds(&forward(&Field::new(u.grid().clone(), f)?)))
        }
        Dealias::ZeroPad => {
            let fine = u.grid().padded()?;
            let mut f = inverse(&u.resampled(&fine)?)?.into_values();
            pointwise_power(&mut f, lambda)?;
            forward(&Field::new(fine, f)?).resampled(u.grid())
        }
    }
}

/// `|u|^λ` with the chosen dealiasing.
pub fn power_nonlinearity(u: &Field, lambda: f64, dealias: Dealias) -> Result<Field> {
    if dealias == Dealias::None {
        let mut v = u.values().to_vec();
        pointwise_power(&mut v, lambda)?;
        return Field::new(u.grid().clone(), v);
    }
    inverse(&power_spectrum(&forward(u), lambda, dealias)?)
}

/// Pointwise product `f·g` with the chosen dealiasing.
pub fn product(f: &Field, g: &Field, dealias: Dealias) -> Result<Field> {
    if !f.grid().compatible(g.grid()) {
        return Err(Error::GridMismatch);
    }
    let mul = |grid: Arc<SpectralGrid>, a: &[f64], b: &[f64]| {
        Field::new(grid, a.iter().zip(b).map(|(x, y)| x * y).collect())
    };
    match dealias {
        Dealias::None => mul(f.grid().clone(), f.values(), g.values()),
        Dealias::TwoThirds => {
            let a = inverse(&truncate_two_thirds(&forward(f)))?;
            let b = inverse(&truncate_two_thirds(&forward(g)))?;
            let p = mul(f.grid().clone(), a.values(), b.values())?;
            inverse(&truncate_two_thirds(&forward(&p)))
        }
        Dealias::ZeroPad => {
            let fine = f.grid().padded()?;
            let a = inverse(&forward(f).resampled(&fine)?)?;
            let b = inverse(&forward(g).resampled(&fine)?)?;
            let p = mul(fine, a.values(), b.values())?;
            inverse(&forward(&p).resampled(f.grid())?)
        }
    }
}

/// `(−Δ)^θ`, multiplier `|ξ|^{2θ}`.
pub fn frac_laplacian(u: &Field, theta: f64) -> Result<Field> {
    inverse(&forward(u).map_modes(|x, c| c * frac_weight(x, theta)))
}

/// `(I−Δ)^{-1}`, multiplier `1/(1+|ξ|²)`.
pub fn bessel_inverse(u: &Field) -> Result<Field> {
    inverse(&forward(u).map_modes(|x, c| c / (1.0 + x)))
}

/// `(I−Δ)^{s/2}`, multiplier `(1+|ξ|²)^{s/2}`.
pub fn bessel_potential(u: &Field, s: f64) -> Result<Field> {
    inverse(&bessel_potential_spectrum(&forward(u), s))
}

pub fn bessel_potential_spectrum(u: &Spectrum, s: f64) -> Spectrum {
    if s == 0.0 {
        return u.clone();
    }
    u.map_modes(|x, c| c * (1.0 + x).powf(s / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::propagator::{apply, laplacian};
    use crate::symbols::MultiplierKind;
    use proptest::prelude::*;

    #[test]
    fn params_validation() {
        assert!(NonlinearityParams::new(1.5, 1.0).is_err());
        assert!(NonlinearityParams::new(3.0, 1.5).is_err());
        let p = NonlinearityParams::new(3.0, 1.0).unwrap();
        assert_eq!(p.delta, -1.0);
        assert_eq!(p.dealias, Dealias::TwoThirds);
        assert!(p.theta_admissible(1));
        assert!(!NonlinearityParams::new(3.0, 0.4).unwrap().theta_admissible(1));
        assert!(!NonlinearityParams::new(3.0, 0.0).unwrap().theta_admissible(2));
    }

    #[test]
    fn constant_powers() {
        let g = make_grid(1, 32, 4.0).unwrap();
        for d in [Dealias::None, Dealias::TwoThirds, Dealias::ZeroPad] {
            let z = power_nonlinearity(&Field::zeros(&g), 3.0, d).unwrap();
            assert_eq!(z.max_abs(), 0.0);
            let c = power_nonlinearity(&Field::constant(&g, -2.0), 3.0, d).unwrap();
            assert!(c.values().iter().all(|v| (v - 8.0).abs() < 1e-12), "{d:?}");
        }
    }

    #[test]
    fn square_of_cosine_is_exact() {
        let g = make_grid(1, 64, 6.0).unwrap();
        let k = 5.0 * g.dk();
        let u = Field::from_fn(&g, |x| (k * x[0]).cos()).unwrap();
        let expected = Field::from_fn(&g, |x| 0.5 * (1.0 + (2.0 * k * x[0]).cos())).unwrap();
        for d in [Dealias::TwoThirds, Dealias::ZeroPad] {
            let p = power_nonlinearity(&u, 2.0, d).unwrap();
            assert!(p.sub(&expected).unwrap().max_abs() < 1e-12, "{d:?}");
        }
    }

    #[test]
    fn overflow_reports_location() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let mut v = vec![1.0; 16];
        v[5] = 1e200;
        let u = Field::new(g, v).unwrap();
        match power_nonlinearity(&u, 3.0, Dealias::None) {
            Err(Error::Overflow { index, .. }) => assert_eq!(index, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spectral_operators() {
        let g = make_grid(2, 16, 5.0).unwrap();
        let k = 2.0 * g.dk();
        let u = Field::from_fn(&g, |x| (k * x[0]).cos() * (0.5 * k * x[1]).sin()).unwrap();
        assert!(frac_laplacian(&u, 0.0).unwrap().sub(&u).unwrap().max_abs() < 1e-13);
        let neg_lap = laplacian(&u).unwrap().scaled(-1.0);
        assert!(frac_laplacian(&u, 1.0).unwrap().sub(&neg_lap).unwrap().max_abs() < 1e-12);
        let c = Field::constant(&g, 2.0);
        assert!(bessel_inverse(&c).unwrap().sub(&c).unwrap().max_abs() < 1e-13);

        let g1 = make_grid(1, 32, 5.0).unwrap();
        let k = 3.0 * g1.dk();
        let cosk = Field::from_fn(&g1, |x| (k * x[0]).cos()).unwrap();
        for theta in [0.25, 0.5, 0.9] {
            let lhs = frac_laplacian(&cosk, theta).unwrap();
            let rhs = cosk.scaled(k.powf(2.0 * theta));
            assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_multiplier_factorizes() {
        let g = make_grid(1, 128, 15.0).unwrap();
        let f = Field::from_fn(&g, |x| (-x[0] * x[0]).exp() * (1.0 + x[0])).unwrap();
        for theta in [0.0, 0.5, 1.0] {
            for t in [0.5, 3.0] {
                let fused = apply(MultiplierKind::LambdaTheta, &f, t, theta).unwrap();
                let inner = bessel_inverse(&frac_laplacian(&f, theta).unwrap()).unwrap();
                let composed = apply(MultiplierKind::S, &inner, t, 0.0).unwrap();
                assert!(fused.sub(&composed).unwrap().max_abs() < 1e-12);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn band_limited_products_are_exact(
            a in proptest::collection::vec(-1.0f64..1.0, 6),
            b in proptest::collection::vec(-1.0f64..1.0, 6),
        ) {
            // Modes up to 10 on a 64-point grid: the product fits inside N/3.
            let g = make_grid(1, 64, 8.0).unwrap();
            let dk = g.dk();
            let series = |c: &[f64], x: f64| {
                c.iter().enumerate().map(|(j, cj)| cj * ((2 * j) as f64 * dk * x + j as f64).cos()).sum::<f64>()
            };
            let f = Field::from_fn(&g, |x| series(&a, x[0])).unwrap();
            let h = Field::from_fn(&g, |x| series(&b, x[0])).unwrap();
            let exact = Field::from_fn(&g, |x| series(&a, x[0]) * series(&b, x[0])).unwrap();
            for d in [Dealias::TwoThirds, Dealias::ZeroPad] {
                let p = product(&f, &h, d).unwrap();
                prop_assert!(p.sub(&exact).unwrap().max_abs() < 1e-12);
            }
        }
    }
}
