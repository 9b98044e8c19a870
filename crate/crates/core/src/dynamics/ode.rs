//! Dormand–Prince 5(4) for scalar complex autonomous equations confined to
//! the unit disk.

use crate::holomap::EvalError;
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Bound on the local error estimate per step.
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Steps landing at `|u| ≥ guard` are rejected and halved.
    pub guard: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, max_step: 0.1, min_step: 1e-14, guard: 1.0 - 1e-14 }
    }
}

impl OdeOptions {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self { abs_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeFailure {
    Eval(EvalError),
    StepUnderflow { t: f64, u: Complex },
}

impl From<EvalError> for OdeFailure {
    fn from(e: EvalError) -> Self {
        OdeFailure::Eval(e)
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One trial step: fifth-order solution and error estimate.
fn step(
    g: &impl Fn(Complex) -> Result<Complex, EvalError>,
    u: Complex,
    h: f64,
) -> Result<(Complex, f64), EvalError> {
    let mut k = [Complex::default(); 7];
    for s in 0..7 {
        let mut y = u;
        for (j, a) in A[s].iter().enumerate().take(s) {
            y += h * a * k[j];
        }
        k[s] = g(y)?;
    }
    let mut y5 = u;
    let mut err = Complex::default();
    for s in 0..7 {
        y5 += h * B5[s] * k[s];
        err += h * (B5[s] - B4[s]) * k[s];
    }
    Ok((y5, err.norm()))
}

/// Integrates `u' = g(u)` from `u(0) = u0` to `t_end`, returning every
/// accepted `(t, u)` including the initial point.
pub fn integrate(
    g: impl Fn(Complex) -> Result<Complex, EvalError>,
    u0: Complex,
    t_end: f64,
    opts: &OdeOptions,
) -> Result<Vec<(f64, Complex)>, OdeFailure> {
    let mut out = vec![(0.0, u0)];
    if t_end <= 0.0 {
        return Ok(out);
    }
    let (mut t, mut u) = (0.0, u0);
    let mut h = opts.max_step.min(t_end);
    while t < t_end {
        let last = t_end - t <= h * (1.0 + 1e-12);
        let hh = if last { t_end - t } else { h };
        let trial = step(&g, u, hh);
        let (y, err) = match trial {
            Ok(r) => r,
            Err(_) if hh > opts.min_step => {
                // A stage left the domain of g; retry with a shorter step.
                h = hh / 2.0;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let inside = y.norm() < opts.guard;
        if err <= opts.abs_tol && inside && y.re.is_finite() && y.im.is_finite() {
            t = if last { t_end } else { t + hh };
            u = y;
            out.push((t, u));
            let grow = if err == 0.0 { 5.0 } else { (0.9 * (opts.abs_tol / err).powf(0.2)).clamp(0.2, 5.0) };
            h = (hh * grow).min(opts.max_step);
        } else {
            h = if inside { hh * (0.9 * (opts.abs_tol / err).powf(0.2)).clamp(0.1, 0.5) } else { hh / 2.0 };
        }
        if h < opts.min_step {
            return Err(OdeFailure::StepUnderflow { t, u });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_towards_one() {
        // u' = 1 − u, u(0) = 0 ⇒ u = 1 − e^{−t}
        let path = integrate(|u| Ok(1.0 - u), Complex::default(), 2f64.ln(), &OdeOptions::default()).unwrap();
        let (t, u) = *path.last().unwrap();
        assert_eq!(t, 2f64.ln());
        assert!((u - 0.5).norm() < 1e-10);
    }

    #[test]
    fn riccati_tanh() {
        let path = integrate(|u| Ok(1.0 - u * u), Complex::default(), 1.0, &OdeOptions::default()).unwrap();
        assert!((path.last().unwrap().1.re - 1f64.tanh()).abs() < 1e-10);
    }

    #[test]
    fn zero_time_returns_start() {
        let z0 = Complex::new(0.1, 0.2);
        assert_eq!(integrate(|u| Ok(u), z0, 0.0, &OdeOptions::default()).unwrap(), vec![(0.0, z0)]);
    }

    #[test]
    fn times_increase_strictly() {
        let path = integrate(|u| Ok(1.0 - u * u), Complex::new(0.0, 0.3), 5.0, &OdeOptions::default()).unwrap();
        assert!(path.windows(2).all(|w| w[1].0 > w[0].0));
        assert!(path.iter().all(|p| p.1.norm() < 1.0));
    }
}
