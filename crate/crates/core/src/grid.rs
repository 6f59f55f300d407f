//! Periodic discretization of the torus `[-L, L)^n` used in place of `R^n`.
//!
//! Transforms follow the unitary continuum convention: the coefficient at
//! wavenumber `k` approximates
//!
//! ```text
//! f̂(k) = (2π)^{-n/2} ∫ f(x) e^{-i k·x} dx
//! ```
//!
//! by the rectangle rule with weight `dx^n`. Under this convention
//! `Σ |f|² dx^n = Σ |f̂|² dk^n` with `dk = π / L`, so grid norms approximate
//! continuum norms directly and coefficients are comparable between grids
//! sharing the same half-period.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Tensor-product periodic grid with `N` points per axis on `[-L, L)^n`.
pub struct SpectralGrid {
    dim: usize,
    points: usize,
    half_period: f64,
    dx: f64,
    wavenumbers: Vec<f64>,
    xi_sq: Vec<f64>,
    forward_plan: Arc<dyn Fft<f64>>,
    inverse_plan: Arc<dyn Fft<f64>>,
    padded: OnceLock<Arc<SpectralGrid>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.dim)
            .field("N", &self.points)
            .field("L", &self.half_period)
            .finish()
    }
}

/// Convenience wrapper for [`SpectralGrid::new`].
pub fn make_grid(dim: usize, points: usize, half_period: f64) -> Result<Arc<SpectralGrid>> {
    SpectralGrid::new(dim, points, half_period)
}

impl SpectralGrid {
    pub fn new(dim: usize, points: usize, half_period: f64) -> Result<Arc<Self>> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if points < 8 || !points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and at least 8, got {points}"
            )));
        }
        if !(half_period > 0.0) || !half_period.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "half-period must be positive, got {half_period}"
            )));
        }

        let dk = PI / half_period;
        let wavenumbers: Vec<f64> = (0..points)
            .map(|i| signed_index(i, points) as f64 * dk)
            .collect();
        let k_sq: Vec<f64> = wavenumbers.iter().map(|k| k * k).collect();
        let xi_sq = match dim {
            1 => k_sq,
            _ => {
                let mut out = Vec::with_capacity(points * points);
                for &a in &k_sq {
                    for &b in &k_sq {
                        out.push(a + b);
                    }
                }
                out
            }
        };

        let mut planner = FftPlanner::new();
        let forward_plan = planner.plan_fft_forward(points);
        let inverse_plan = planner.plan_fft_inverse(points);

        Ok(Arc::new(Self {
            dim,
            points,
            half_period,
            dx: 2.0 * half_period / points as f64,
            wavenumbers,
            xi_sq,
            forward_plan,
            inverse_plan,
            padded: OnceLock::new(),
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points
    }

    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Spacing between neighbouring wavenumbers, `π / L`.
    pub fn dk(&self) -> f64 {
        PI / self.half_period
    }

    /// Total number of grid points, `N^n`.
    pub fn len(&self) -> usize {
        self.xi_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi_sq.is_empty()
    }

    /// Quadrature weight of one physical cell, `dx^n`.
    pub fn cell_volume(&self) -> f64 {
        self.dx.powi(self.dim as i32)
    }

    /// Quadrature weight of one spectral cell, `dk^n`.
    pub fn spectral_cell(&self) -> f64 {
        self.dk().powi(self.dim as i32)
    }

    /// Per-axis wavenumbers in FFT storage order (`0, 1, …, N/2-1, -N/2, …, -1` times `π/L`).
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// `|ξ|²` over the full tensor grid, in storage order.
    pub fn xi_sq(&self) -> &[f64] {
        &self.xi_sq
    }

    pub fn nyquist(&self) -> f64 {
        PI * (self.points / 2) as f64 / self.half_period
    }

    /// Physical coordinates along one axis: `x_m = -L + m dx`.
    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.points)
            .map(|m| -self.half_period + m as f64 * self.dx)
            .collect()
    }

    /// Signed per-axis mode indices of a flat storage index.
    pub fn mode_of(&self, flat: usize) -> [i64; 2] {
        match self.dim {
            1 => [signed_index(flat, self.points), 0],
            _ => [
                signed_index(flat / self.points, self.points),
                signed_index(flat % self.points, self.points),
            ],
        }
    }

    /// Flat storage index of signed mode indices; indices are taken modulo `N`.
    pub fn index_of(&self, mode: [i64; 2]) -> usize {
        let n = self.points as i64;
        let wrap = |j: i64| j.rem_euclid(n) as usize;
        match self.dim {
            1 => wrap(mode[0]),
            _ => wrap(mode[0]) * self.points + wrap(mode[1]),
        }
    }

    /// Same dimension, resolution and half-period.
    pub fn compatible(&self, other: &SpectralGrid) -> bool {
        self.dim == other.dim
            && self.points == other.points
            && self.half_period == other.half_period
    }

    /// The 3/2-refined grid used for zero-padded products. Requires `N` divisible by 4.
    pub fn padded(&self) -> Result<Arc<SpectralGrid>> {
        if !self.points.is_multiple_of(4) {
            return Err(Error::InvalidGrid(format!(
                "zero padding needs N divisible by 4, got {}",
                self.points
            )));
        }
        if let Some(g) = self.padded.get() {
            return Ok(g.clone());
        }
        let g = SpectralGrid::new(self.dim, self.points * 3 / 2, self.half_period)?;
        Ok(self.padded.get_or_init(|| g).clone())
    }

    fn normalization(&self) -> f64 {
        self.cell_volume() / (2.0 * PI).powf(self.dim as f64 / 2.0)
    }

    // (-1)^{j_1 + j_2}: the phase from the grid origin sitting at x = -L.
    fn phase_sign(&self, flat: usize) -> f64 {
        let parity = match self.dim {
            1 => flat,
            _ => flat / self.points + flat % self.points,
        };
        if parity % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.inverse_plan } else { &self.forward_plan };
        match self.dim {
            1 => plan.process(buf),
            _ => {
                let n = self.points;
                let rows = |buf: &mut [Complex64]| {
                    buf.par_chunks_mut(n).for_each_init(
                        || vec![Complex64::default(); plan.get_inplace_scratch_len()],
                        |scratch, row| plan.process_with_scratch(row, scratch),
                    );
                };
                rows(buf);
                transpose_square(buf, n);
                rows(buf);
                transpose_square(buf, n);
            }
        }
    }
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

/// Signed mode index of FFT storage position `i` on an axis of `n` points.
pub fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Real grid function.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Arc<SpectralGrid>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "field has {} values, grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            grid: grid.clone(),
        }
    }

    pub fn constant(grid: &Arc<SpectralGrid>, c: f64) -> Self {
        Self {
            values: vec![c; grid.len()],
            grid: grid.clone(),
        }
    }

    /// Samples `f` at every grid point; `f` receives the coordinates (length `n`).
    pub fn from_fn(grid: &Arc<SpectralGrid>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let xs = grid.coordinates();
        let values = match grid.dim() {
            1 => xs.iter().map(|&x| f(&[x])).collect(),
            _ => {
                let mut v = Vec::with_capacity(grid.len());
                for &x in &xs {
                    for &y in &xs {
                        v.push(f(&[x, y]));
                    }
                }
                v
            }
        };
        Self::new(grid.clone(), values)
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Index and value of the largest `|u|`.
    pub fn argmax_abs(&self) -> (usize, f64) {
        self.values
            .iter()
            .enumerate()
            .fold((0, 0.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) })
    }

    pub fn scaled(&self, c: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &Field) -> Result<Field> {
        if !self.grid.compatible(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.axpy(-1.0, other)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.axpy(1.0, other)
    }

    /// Ratio of the largest `|u|` within the outer `fraction` of the domain
    /// (on any axis) to the global maximum. Used to monitor wrap-around.
    pub fn boundary_band_ratio(&self, fraction: f64) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let n = self.grid.points_per_axis();
        let band = ((fraction * n as f64 / 2.0).ceil() as usize).max(1);
        let in_band = |i: usize| i < band || i >= n - band;
        let mut edge = 0.0f64;
        for (flat, v) in self.values.iter().enumerate() {
            let hit = match self.grid.dim() {
                1 => in_band(flat),
                _ => in_band(flat / n) || in_band(flat % n),
            };
            if hit {
                edge = edge.max(v.abs());
            }
        }
        edge / max
    }
}

/// Fourier coefficients of a grid function under the continuum normalization.
#[derive(Clone, Debug)]
pub struct Spectrum {
    grid: Arc<SpectralGrid>,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: Arc<SpectralGrid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "spectrum has {} coefficients, grid has {} modes",
                coeffs.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        Self {
            coeffs: vec![Complex64::default(); grid.len()],
            grid: grid.clone(),
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Pointwise product with a real multiplier given in storage order.
    pub fn multiplied(&self, multiplier: &[f64]) -> Result<Spectrum> {
        if multiplier.len() != self.coeffs.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Spectrum {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(multiplier)
                .map(|(c, m)| c * m)
                .collect(),
        })
    }

    pub fn map_modes(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Spectrum {
        Spectrum {
            grid: self.grid.clone(),
            coeffs: self
                .grid
                .xi_sq()
                .iter()
                .zip(&self.coeffs)
                .map(|(&x, &c)| f(x, c))
                .collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &Spectrum) -> Result<Spectrum> {
        if !self.grid.compatible(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Spectrum {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b * c)
                .collect(),
        })
    }

    /// `Σ w(|ξ|²) |ĉ|² dk^n`.
    pub fn weighted_energy(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let sum: f64 = self
            .grid
            .xi_sq()
            .iter()
            .zip(&self.coeffs)
            .map(|(&x, c)| weight(x) * c.norm_sqr())
            .sum();
        sum * self.grid.spectral_cell()
    }

    /// Maximum deviation from Hermitian symmetry, relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for (flat, c) in self.coeffs.iter().enumerate() {
            let [a, b] = self.grid.mode_of(flat);
            let mirror = self.coeffs[self.grid.index_of([-a, -b])];
            worst = worst.max((c - mirror.conj()).norm());
        }
        worst / scale
    }

    /// `(F_j + conj F_{−j})/2`, the spectrum of the real part of the inverse.
    pub fn hermitian_part(&self) -> Spectrum {
        let coeffs = (0..self.coeffs.len())
            .map(|flat| {
                let [a, b] = self.grid.mode_of(flat);
                let mirror = self.coeffs[self.grid.index_of([-a, -b])];
                (self.coeffs[flat] + mirror.conj()) * 0.5
            })
            .collect();
        Spectrum {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Copies this spectrum onto a grid of different resolution and the same
    /// half-period. Modes beyond the target band are dropped; Nyquist modes are
    /// split on refinement and folded on coarsening so that real fields stay real.
    pub fn resampled(&self, target: &Arc<SpectralGrid>) -> Result<Spectrum> {
        if target.dim() != self.grid.dim() || target.half_period() != self.grid.half_period() {
            return Err(Error::GridMismatch);
        }
        let from = self.grid.points_per_axis();
        let to = target.points_per_axis();
        let mut out = Spectrum::zeros(target);
        for (flat, &c) in self.coeffs.iter().enumerate() {
            if c == Complex64::default() {
                continue;
            }
            let [a, b] = self.grid.mode_of(flat);
            let ta = axis_targets(a, from, to);
            let tb = if self.grid.dim() == 1 {
                vec![(0, 1.0)]
            } else {
                axis_targets(b, from, to)
            };
            for &(ja, wa) in &ta {
                for &(jb, wb) in &tb {
                    let idx = target.index_of([ja, jb]);
                    out.coeffs[idx] += c * (wa * wb);
                }
            }
        }
        Ok(out)
    }
}

// Where a source mode lands on an axis of `to` points.
fn axis_targets(j: i64, from: usize, to: usize) -> Vec<(i64, f64)> {
    let from_nyq = -(from as i64 / 2);
    let to_half = to as i64 / 2;
    if to > from && j == from_nyq {
        // Source Nyquist represents cos; split it over ±N/2 on the finer grid.
        vec![(j, 0.5), (-j, 0.5)]
    } else if j.abs() < to_half || j == -to_half {
        // Inside the band (the target Nyquist index -to/2 also receives +to/2).
        vec![(j, 1.0)]
    } else if j == to_half {
        vec![(-to_half, 1.0)]
    } else {
        Vec::new()
    }
}

/// Forward transform under the continuum normalization.
pub fn forward(f: &Field) -> Spectrum {
    let grid = f.grid.clone();
    let mut buf: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    grid.transform(&mut buf, false);
    let c = grid.normalization();
    for (flat, z) in buf.iter_mut().enumerate() {
        *z *= c * grid.phase_sign(flat);
    }
    Spectrum { grid, coeffs: buf }
}

/// Inverse transform. The result must be real up to rounding: an imaginary
/// residue above `1e-12` of the spectral amplitude is reported as an error.
pub fn inverse(s: &Spectrum) -> Result<Field> {
    let grid = s.grid.clone();
    let total = grid.len() as f64;
    let c = 1.0 / (grid.normalization() * total);
    let mut buf: Vec<Complex64> = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(flat, z)| z * (c * grid.phase_sign(flat)))
        .collect();
    // Σ|F_j| bounds every output value: the natural scale for rounding.
    let amplitude: f64 = buf.iter().map(|z| z.norm()).sum();
    grid.transform(&mut buf, true);
    let residue = buf.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    if residue > 1e-12 * amplitude + f64::MIN_POSITIVE {
        return Err(Error::ImaginaryResidue { residue, amplitude });
    }
    Field::new(grid, buf.into_iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn l2(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn unit_half_period_wavenumbers_are_integers() {
        let g = make_grid(1, 8, PI).unwrap();
        let mut ks: Vec<f64> = g.wavenumbers().to_vec();
        ks.sort_by(f64::total_cmp);
        let expected: Vec<f64> = (-4..4).map(|j| j as f64).collect();
        for (k, e) in ks.iter().zip(&expected) {
            assert!((k - e).abs() < 1e-14, "{k} vs {e}");
        }
        assert_eq!(g.xi_sq().iter().filter(|&&x| x == 0.0).count(), 1);
        assert_eq!(g.wavenumbers()[0], 0.0);
    }

    #[test]
    fn nyquist_of_two_dimensional_grid() {
        let g = make_grid(2, 16, 10.0).unwrap();
        let max = g.xi_sq().iter().cloned().fold(0.0, f64::max);
        assert!((max - 12.633_093_633_394_379).abs() < 1e-12, "{max}");
        assert!((g.nyquist() - PI * 8.0 / 10.0).abs() < 1e-15);
        assert_eq!(g.xi_sq().iter().filter(|&&x| x == 0.0).count(), 1);
        assert!(g.xi_sq().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_grid(1, 9, 1.0).is_err());
        assert!(make_grid(1, 6, 1.0).is_err());
        assert!(make_grid(3, 8, 1.0).is_err());
        assert!(make_grid(0, 8, 1.0).is_err());
        assert!(make_grid(1, 8, 0.0).is_err());
        assert!(make_grid(1, 8, -1.0).is_err());
    }

    #[test]
    fn zero_and_constant_fields() {
        let g = make_grid(2, 8, 3.0).unwrap();
        let s = forward(&Field::zeros(&g));
        assert!(s.coeffs().iter().all(|c| c.norm() == 0.0));

        let s = forward(&Field::constant(&g, 2.5));
        for (i, c) in s.coeffs().iter().enumerate() {
            if i == 0 {
                assert!(c.norm() > 0.0);
            } else {
                assert!(c.norm() < 1e-13, "mode {i}: {c}");
            }
        }
    }

    #[test]
    fn pure_harmonic_has_two_modes() {
        let g = make_grid(1, 32, 5.0).unwrap();
        let k1 = g.dk();
        let f = Field::from_fn(&g, |x| (k1 * x[0]).cos()).unwrap();
        let s = forward(&f);
        let big: Vec<usize> = (0..g.len()).filter(|&i| s.coeffs()[i].norm() > 1e-12).collect();
        assert_eq!(big, vec![1, 31]);
        assert!((s.coeffs()[1].norm() - s.coeffs()[31].norm()).abs() < 1e-14);
    }

    #[test]
    fn round_trip_parseval_and_symmetry_on_random_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let (dim, n) = if trial % 4 == 0 { (2, 16) } else { (1, 64) };
            let g = make_grid(dim, n, 1.0 + trial as f64 * 0.1).unwrap();
            let vals: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let f = Field::new(g.clone(), vals).unwrap();
            let s = forward(&f);
            assert!(s.hermitian_defect() < 1e-12);

            let back = inverse(&s).unwrap();
            let diff = back.sub(&f).unwrap();
            assert!(l2(diff.values()) / l2(f.values()) <= 1e-12);

            let phys: f64 = f.values().iter().map(|v| v * v).sum::<f64>() * g.cell_volume();
            let spec = s.weighted_energy(|_| 1.0);
            assert!((phys - spec).abs() / phys < 1e-10);
        }
    }

    #[test]
    fn gaussian_transform_matches_continuum() {
        // (2π)^{-1/2} ∫ e^{-x²/2} e^{-ikx} dx = e^{-k²/2}
        let g = make_grid(1, 128, 20.0).unwrap();
        let f = Field::from_fn(&g, |x| (-0.5 * x[0] * x[0]).exp()).unwrap();
        let s = forward(&f);
        for (k, c) in g.wavenumbers().iter().zip(s.coeffs()) {
            assert!((c.re - (-0.5 * k * k).exp()).abs() < 1e-12);
            assert!(c.im.abs() < 1e-12);
        }
    }

    #[test]
    fn non_hermitian_spectrum_is_rejected() {
        let g = make_grid(1, 16, 1.0).unwrap();
        let mut s = Spectrum::zeros(&g);
        s.coeffs_mut()[1] = Complex64::new(1.0, 0.0);
        assert!(matches!(inverse(&s), Err(Error::ImaginaryResidue { .. })));
    }

    #[test]
    fn resampling_preserves_band_limited_fields() {
        let coarse = make_grid(2, 16, 4.0).unwrap();
        let fine = coarse.padded().unwrap();
        let k = coarse.dk();
        let f = |x: &[f64]| (k * x[0]).cos() + 0.3 * (2.0 * k * x[1]).sin() * (k * x[0]).sin();
        let fc = Field::from_fn(&coarse, f).unwrap();
        let ff = Field::from_fn(&fine, f).unwrap();
        let up = inverse(&forward(&fc).resampled(&fine).unwrap()).unwrap();
        assert!(up.sub(&ff).unwrap().max_abs() < 1e-12);
        let down = inverse(&forward(&ff).resampled(&coarse).unwrap()).unwrap();
        assert!(down.sub(&fc).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn boundary_band_detects_wraparound() {
        let g = make_grid(1, 256, 10.0).unwrap();
        let narrow = Field::from_fn(&g, |x| (-x[0] * x[0]).exp()).unwrap();
        assert!(narrow.boundary_band_ratio(0.05) < 1e-8);
        let wide = Field::from_fn(&g, |x| (-x[0] * x[0] / 50.0).exp()).unwrap();
        assert!(wide.boundary_band_ratio(0.05) > 1e-8);
    }
}
