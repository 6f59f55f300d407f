//! Quadrature checks of the two scalar integral lemmas.

use std::f64::consts::PI;

use rayon::prelude::*;
use libm::tgamma as gamma;

use super::quad::integrate;
use super::{LemmaReport, LemmaSample};
use crate::error::{Error, Result};

/// Measure of the unit sphere in `ℝⁿ`.
pub fn sphere_measure(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

/// `∫_{|ξ|≤1} e^{−|ξ|²t/4}|ξ|^a dξ`.
pub fn gamma_lemma_lhs(a: f64, n: usize, t: f64) -> Result<f64> {
    let m = a + n as f64;
    // η = r√t/2 then v = η^{a+n}: ω(2/√t)^m/m · ∫₀^U e^{−v^{2/m}} dv with U = (√t/2)^m,
    // which removes the endpoint singularity. Breakpoints at v = (2^k)^m keep
    // the decaying integrand resolved however large U is.
    let upper = (t.sqrt() / 2.0).powf(m);
    let f = |v: f64| (-v.powf(2.0 / m)).exp();
    let mut inner = 0.0;
    let (mut lo, mut eta) = (0.0, 1.0f64);
    while lo < upper && eta <= 64.0 {
        let hi = eta.powf(m).min(upper);
        inner += integrate(f, lo, hi, 1e-16, 1e-13)?;
        lo = hi;
        eta *= 2.0;
    }
    Ok(sphere_measure(n) * (2.0 / t.sqrt()).powf(m) / m * inner)
}

/// The proof's bound `(ω/2)·Γ((n+a)/2)·2^{a+n}·t^{−(n+a)/2}`.
pub fn gamma_lemma_bound(a: f64, n: usize, t: f64) -> f64 {
    let m = a + n as f64;
    sphere_measure(n) / 2.0 * gamma(m / 2.0) * 2f64.powf(m) * t.powf(-m / 2.0)
}

/// Ratio of the radial integral to the explicit bound at each `t`; pass iff every ratio is at most 1.
pub fn check_gamma_lemma(a: f64, n: usize, t_grid: &[f64]) -> Result<LemmaReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !(a > -(n as f64)) {
        return Err(Error::Hypothesis(format!("a > -n violated: a = {a}, n = {n}")));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::InvalidArgument(format!("sample time {t} must be positive")));
    }
    let samples = t_grid
        .par_iter()
        .map(|&t| Ok(LemmaSample::new(t, gamma_lemma_lhs(a, n, t)?, gamma_lemma_bound(a, n, t))))
        .collect::<Result<Vec<_>>>()?;
    let mut report = LemmaReport::new("gamma", vec![("n", n as f64), ("a", a)], samples);
    report.explicit_constant = true;
    report.pass = report.c_emp <= 1.0;
    Ok(report)
}

/// `∫₀ᵗ (1+t−τ)^{−a}(1+τ)^{−b} dτ`.
pub fn convolution_lhs(a: f64, b: f64, t: f64) -> Result<f64> {
    let f = |tau: f64| (1.0 + t - tau).powf(-a) * (1.0 + tau).powf(-b);
    // Split so each half resolves its own endpoint layer.
    Ok(integrate(f, 0.0, t / 2.0, 1e-15, 1e-12)? + integrate(f, t / 2.0, t, 1e-15, 1e-12)?)
}

/// `(1+t)^{−a}∫₀ᵗ (1+τ)^{−b} dτ`, the bound without its constant.
pub fn convolution_rhs(a: f64, b: f64, t: f64) -> Result<f64> {
    Ok((1.0 + t).powf(-a) * integrate(|tau| (1.0 + tau).powf(-b), 0.0, t, 1e-15, 1e-12)?)
}

/// Relative change of `C_emp` allowed when the grid is extended by a decade.
pub const CONVOLUTION_STABILITY: f64 = 0.1;

/// `C_emp` over `t_grid`, with pass iff it moves by at most 10% when the grid
/// is extended one decade past its last point.
pub fn check_time_convolution(a: f64, b: f64, t_grid: &[f64]) -> Result<LemmaReport> {
    if !(a >= 0.0 && b >= a) {
        return Err(Error::Hypothesis(format!("b >= a >= 0 violated: a = {a}, b = {b}")));
    }
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::InvalidArgument(format!("sample time {t} must be positive")));
    }
    let sample = |t: f64| Ok(LemmaSample::new(t, convolution_lhs(a, b, t)?, convolution_rhs(a, b, t)?));
    let samples = t_grid.par_iter().map(|&t| sample(t)).collect::<Result<Vec<_>>>()?;
    let t_max = t_grid.iter().copied().fold(0.0, f64::max);
    let extension = super::log_times(t_max, 10.0 * t_max, 12)
        .into_par_iter()
        .skip(1)
        .map(sample)
        .collect::<Result<Vec<_>>>()?;
    let mut report = LemmaReport::new("time_convolution", vec![("a", a), ("b", b)], samples);
    let extended = extension.iter().map(|s| s.ratio).fold(report.c_emp, f64::max);
    let drift = (extended - report.c_emp) / report.c_emp;
    report.pass = report.c_emp.is_finite() && drift <= CONVOLUTION_STABILITY;
    report.note = format!("C_emp over [{}, {}] = {extended}; drift {drift:.4}", t_grid[0], 10.0 * t_max);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::log_times;
    use libm::erf;

    #[test]
    fn sphere_measures() {
        assert!((sphere_measure(1) - 2.0).abs() < 1e-14);
        assert!((sphere_measure(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_measure(3) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn gamma_spot_value() {
        let lhs = gamma_lemma_lhs(0.0, 1, 4.0).unwrap();
        assert!((lhs - PI.sqrt() * erf(1.0)).abs() < 1e-12);
        assert!((gamma_lemma_bound(0.0, 1, 4.0) - PI.sqrt()).abs() < 1e-12);
        let r = check_gamma_lemma(0.0, 1, &[4.0]).unwrap();
        assert!((r.c_emp - 0.842_700_792_949_714_9).abs() < 1e-10);
        assert!(r.pass && r.explicit_constant);
    }

    #[test]
    fn gamma_two_dimensional_closed_form() {
        // n = 2, a = 0: 2π∫₀¹ r e^{−r²t/4} dr = (4π/t)(1 − e^{−t/4}).
        for t in [1.0, 10.0, 100.0] {
            let exact = 4.0 * PI / t * (1.0 - (-t / 4.0f64).exp());
            assert!((gamma_lemma_lhs(0.0, 2, t).unwrap() - exact).abs() < 1e-11 * exact);
        }
    }

    #[test]
    fn gamma_ratio_tends_to_one() {
        let r = check_gamma_lemma(1.0, 2, &[1e4]).unwrap();
        assert!((r.c_emp - 1.0).abs() < 1e-6 && r.c_emp <= 1.0);
    }

    #[test]
    fn gamma_near_edge_and_rejection() {
        let r = check_gamma_lemma(-1.9, 2, &[10.0]).unwrap();
        assert!(r.pass);
        assert!(matches!(check_gamma_lemma(-2.0, 2, &[1.0]), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn convolution_closed_forms() {
        // a = b = 1: LHS = 2 ln(1+t)/(2+t), RHS = ln(1+t)/(1+t).
        let t = 10.0;
        let lhs = convolution_lhs(1.0, 1.0, t).unwrap();
        assert!((lhs - 2.0 * (1.0 + t).ln() / (2.0 + t)).abs() < 1e-12);
        assert!((convolution_rhs(1.0, 1.0, t).unwrap() - (1.0 + t).ln() / (1.0 + t)).abs() < 1e-12);
    }

    #[test]
    fn zero_exponent_needs_unit_constant() {
        let r = check_time_convolution(0.0, 1.0, &log_times(1.0, 100.0, 20)).unwrap();
        assert!(r.c_emp <= 1.0 + 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn convolution_stability_and_rejection() {
        for (a, b) in [(1.0, 1.0), (1.0, 2.0), (0.5, 1.0)] {
            let r = check_time_convolution(a, b, &log_times(1.0, 100.0, 30)).unwrap();
            assert!(r.pass, "{a} {b}: {}", r.note);
        }
        assert!(check_time_convolution(2.0, 1.0, &[1.0]).is_err());
    }
}
