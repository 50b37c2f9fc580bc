//! Dormand–Prince 5(4) integrator for small fixed-size systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { rtol: 1e-11, atol: 1e-12, max_steps: 200_000 }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const D: usize>(y: &[f64; D], terms: &[(f64, &[f64; D])], h: f64) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction) and return
/// `y(t1)`. `h_hint` seeds the first step; pass the previous accepted step
/// when marching across a grid.
pub fn integrate<const D: usize, F>(
    f: &F,
    t0: f64,
    y0: [f64; D],
    t1: f64,
    h_hint: Option<f64>,
    cfg: &OdeConfig,
) -> Result<([f64; D], f64)>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((y0, h_hint.unwrap_or(0.0)));
    }
    let dir = span.signum();
    let mut h = h_hint.map(f64::abs).unwrap_or(span.abs() * 0.01).min(span.abs()) * dir;
    if h == 0.0 {
        h = span * 0.01;
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut last_ok = h.abs();
    for _ in 0..cfg.max_steps {
        let remaining = t1 - t;
        if remaining * dir <= 0.0 {
            return Ok((y, last_ok));
        }
        let last = h.abs() >= remaining.abs();
        if last {
            h = remaining;
        }
        let k2 = f(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = f(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(
            t + C5 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = f(
            t + h,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        );
        let y_new = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
        let k7 = f(t + h, &y_new);

        let mut err = 0.0f64;
        for i in 0..D {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = cfg.atol + cfg.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            h *= 0.1;
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Convergence(format!("non-finite state near t = {t}")));
            }
            continue;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            k1 = k7;
            last_ok = h.abs();
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
            if last {
                return Ok((y, last_ok));
            }
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Convergence(format!("step size underflow near t = {t}")));
            }
        }
    }
    Err(Error::Convergence(format!(
        "exceeded {} steps integrating from {t0} to {t1}",
        cfg.max_steps
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let cfg = OdeConfig::default();
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let (y, _) = integrate(&f, 0.0, [0.0, 1.0], 2.0 * std::f64::consts::PI, None, &cfg).unwrap();
        assert!(y[0].abs() < 1e-9 && (y[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn backward_integration() {
        let cfg = OdeConfig::default();
        let f = |_t: f64, y: &[f64; 1]| [y[0]];
        let (y, _) = integrate(&f, 1.0, [1.0], 0.0, None, &cfg).unwrap();
        assert!((y[0] - (-1f64).exp()).abs() < 1e-11);
    }
}
