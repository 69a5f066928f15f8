//! Adaptive explicit Runge-Kutta integration.
//!
//! Dormand-Prince 5(4) with the classic error-per-step controller. Step
//! acceptance is a pure function of the current state and tolerances, so
//! trajectories are reproducible bit-for-bit.

use crate::error::{Error, Result};

/// Integrator tolerances.
#[derive(Debug, Clone, Copy)]
pub struct OdeSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 4_000_000,
        }
    }
}

impl OdeSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, abs_tol: rel_tol * 1e-2, ..Self::default() }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `y' = rhs(x, y)` from `x0` to `x1` (`x0 < x1`), advancing `y`
/// in place. `initial_step` seeds the controller when the natural scale of
/// the problem is known (e.g. near a regularized singular start).
pub fn integrate_adaptive<const N: usize, F>(
    rhs: F,
    x0: f64,
    x1: f64,
    y: &mut [f64; N],
    initial_step: Option<f64>,
    spec: &OdeSpec,
) -> Result<()>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(x0 < x1) {
        return Err(Error::Ode(format!("empty integration span [{x0}, {x1}]")));
    }
    let span = x1 - x0;
    let mut x = x0;
    let mut h = initial_step.unwrap_or(span * 1e-3).min(span);
    let h_min = span * 1e-15;

    let mut k = [[0.0; N]; 7];
    for step in 0.. {
        if step >= spec.max_steps {
            return Err(Error::Ode(format!("step budget exhausted at x = {x}")));
        }
        if x >= x1 {
            break;
        }
        if h < h_min {
            return Err(Error::Ode(format!("step size underflow at x = {x}")));
        }
        let h_trial = h.min(x1 - x);

        k[0] = rhs(x, y);
        for stage in 1..7 {
            let mut ys = *y;
            for j in 0..stage {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h_trial * a * k[j][i];
                    }
                }
            }
            k[stage] = rhs(x + C[stage] * h_trial, &ys);
        }

        let mut y5 = *y;
        let mut err_norm = 0.0f64;
        for i in 0..N {
            let mut dy5 = 0.0;
            let mut dy4 = 0.0;
            for s in 0..7 {
                dy5 += B5[s] * k[s][i];
                dy4 += B4[s] * k[s][i];
            }
            y5[i] += h_trial * dy5;
            let scale = spec.abs_tol + spec.rel_tol * y[i].abs().max(y5[i].abs());
            let e = (h_trial * (dy5 - dy4)) / scale;
            err_norm = err_norm.max(e.abs());
        }

        if !err_norm.is_finite() {
            h = h_trial * 0.25;
            continue;
        }

        if err_norm <= 1.0 {
            x += h_trial;
            *y = y5;
            let grow = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).min(5.0) };
            h = h_trial * grow.max(0.2);
        } else {
            h = h_trial * (0.9 * err_norm.powf(-0.2)).max(0.1);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let mut y = [1.0];
        integrate_adaptive(|_, y| [y[0]], 0.0, 1.0, &mut y, None, &OdeSpec::default()).unwrap();
        assert!((y[0] - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator() {
        let mut y = [0.0, 1.0];
        integrate_adaptive(
            |_, y| [y[1], -y[0]],
            0.0,
            std::f64::consts::PI,
            &mut y,
            None,
            &OdeSpec::default(),
        )
        .unwrap();
        assert!(y[0].abs() < 1e-9);
        assert!((y[1] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_repetition() {
        let run = || {
            let mut y = [0.0, 1.0];
            integrate_adaptive(
                |x, y| [y[1], -(1.0 + 0.3 * x.sin()) * y[0]],
                0.0,
                7.0,
                &mut y,
                None,
                &OdeSpec::default(),
            )
            .unwrap();
            (y[0].to_bits(), y[1].to_bits())
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn step_budget_error() {
        let spec = OdeSpec { max_steps: 3, ..OdeSpec::default() };
        let mut y = [1.0];
        let err = integrate_adaptive(|_, y| [y[0]], 0.0, 10.0, &mut y, None, &spec).unwrap_err();
        assert!(matches!(err, Error::Ode(_)));
    }
}
