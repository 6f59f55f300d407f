//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights are the last row of A; these are fifth minus fourth order.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t1`.
pub fn integrate<const D: usize>(
    f: impl Fn(f64, &[f64; D]) -> [f64; D],
    y0: [f64; D],
    t0: f64,
    t1: f64,
    tol: Tolerance,
) -> Result<[f64; D], String> {
    if t1 == t0 {
        return Ok(y0);
    }
    if !(t1 > t0) {
        return Err(format!("backward integration from {t0} to {t1}"));
    }
    let mut t = t0;
    let mut y = y0;
    let mut k0 = f(t, &y);
    let mut h = initial_step(&y, &k0, t1 - t0, tol);
    let mut steps = 0;
    while t < t1 {
        if steps >= tol.max_steps {
            return Err(format!("step budget exhausted at t = {t}"));
        }
        steps += 1;
        if t + h > t1 {
            h = t1 - t;
        }
        let mut k = [[0.0; D]; 7];
        k[0] = k0;
        for s in 1..7 {
            let mut ys = y;
            for (i, v) in ys.iter_mut().enumerate() {
                *v += h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y_new = y;
        let mut err = 0.0f64;
        for i in 0..D {
            y_new[i] += h * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>();
            let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let scale = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() {
            return Err(format!("non-finite error estimate at t = {t}"));
        }
        if err <= 1.0 {
            t += h;
            y = y_new;
            // First-same-as-last: the seventh stage is f at the new point.
            k0 = k[6];
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-14 * (t1 - t0) {
            return Err(format!("step size underflow at t = {t}"));
        }
    }
    Ok(y)
}

fn initial_step<const D: usize>(y: &[f64; D], dy: &[f64; D], span: f64, tol: Tolerance) -> f64 {
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for i in 0..D {
        let sc = tol.atol + tol.rtol * y[i].abs();
        d0 = d0.max((y[i] / sc).abs());
        d1 = d1.max((dy[i] / sc).abs());
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = integrate(|_, y: &[f64; 1]| [-y[0]], [1.0], 0.0, 3.0, Tolerance::default()).unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_oscillator() {
        let w = 7.0;
        let f = |_: f64, y: &[f64; 2]| [y[1], -w * w * y[0]];
        let y = integrate(f, [1.0, 0.0], 0.0, 10.0, Tolerance::default()).unwrap();
        assert!((y[0] - (w * 10.0).cos()).abs() < 1e-9);
        assert!((y[1] + w * (w * 10.0).sin()).abs() < 1e-8);
    }

    #[test]
    fn time_dependent_rhs() {
        let y = integrate(|t, _: &[f64; 1]| [t.cos()], [0.0], 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((y[0] - 2f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn zero_span_and_backward() {
        assert_eq!(integrate(|_, y: &[f64; 1]| *y, [2.0], 1.0, 1.0, Tolerance::default()).unwrap(), [2.0]);
        assert!(integrate(|_, y: &[f64; 1]| *y, [2.0], 1.0, 0.0, Tolerance::default()).is_err());
    }
}
