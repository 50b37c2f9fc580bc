//! Bessel functions of the first and second kind and zeros of `J_l'`.
//!
//! `J_ν` uses its ascending series wherever the series has no harmful
//! cancellation (`x² ≤ 4(ν+1)`); elsewhere `J_ν`, `Y_ν` and both derivatives
//! come from Steed's continued-fraction method with Temme's series for the
//! small-argument `Y`. Both paths are accurate to a few ulps away from zeros.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::roots;

/// A Bessel function value together with its derivative in `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub value: f64,
    pub derivative: f64,
}

/// Taylor coefficients of `1/Γ(1+z)` about `z = 0`.
const RGAMMA1P: [f64; 29] = [
    1.0,
    0.577_215_664_901_532_860_6,
    -0.655_878_071_520_253_881_1,
    -0.042_002_635_034_095_235_53,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_75,
    -0.009_621_971_527_876_973_562,
    0.007_218_943_246_663_099_542,
    -0.001_165_167_591_859_065_112,
    -0.000_215_241_674_114_950_972_8,
    0.000_128_050_282_388_116_186_2,
    -0.000_020_134_854_780_788_238_66,
    -1.250_493_482_142_670_657e-6,
    1.133_027_231_981_695_882e-6,
    -2.056_338_416_977_607_103e-7,
    6.116_095_104_481_415_818e-9,
    5.002_007_644_469_222_930e-9,
    -1.181_274_570_487_020_145e-9,
    1.043_426_711_691_100_510e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783e-14,
    -5.348_122_539_423_017_982e-15,
    1.226_778_628_238_260_790e-15,
    -1.181_259_301_697_458_770e-16,
    1.186_692_254_751_600_333e-18,
    1.412_380_655_318_031_782e-18,
    -2.298_745_684_435_370_207e-19,
];

/// `1/Γ(1+z)` for `|z| ≤ 1/2`.
fn rgamma1p_small(z: f64) -> f64 {
    RGAMMA1P.iter().rev().fold(0.0, |acc, c| acc * z + c)
}

/// `1/Γ(1+ν)` for `ν ≥ -1/2`.
fn rgamma1p(nu: f64) -> f64 {
    let n = nu.round();
    let z = nu - n;
    let mut r = rgamma1p_small(z);
    let mut k = 1.0;
    while k <= n {
        r /= k + z;
        k += 1.0;
    }
    r
}

/// Temme's auxiliary gamma combinations for `|μ| ≤ 1/2`:
/// `(γ₁, γ₂, 1/Γ(1+μ), 1/Γ(1−μ))`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mut odd = 0.0;
    let mut even = 0.0;
    // 1/Γ(1+μ) = Σ c_k μ^k; split into even and odd powers.
    let mu2 = mu * mu;
    for (k, c) in RGAMMA1P.iter().enumerate().rev() {
        if k % 2 == 0 {
            even = even * mu2 + c;
        } else {
            odd = odd * mu2 + c;
        }
    }
    // even = Σ c_{2m} μ^{2m}, odd = Σ c_{2m+1} μ^{2m}
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    let gam1 = -odd;
    let gam2 = even;
    (gam1, gam2, gampl, gammi)
}

fn series_j(nu: f64, x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let mut term = if nu == 0.0 { 1.0 } else { (nu * half.ln()).exp() } * rgamma1p(nu);
    let q = -half * half;
    let mut sum = term;
    let mut dsum = term * nu;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        dsum += term * (2.0 * kf + nu);
        if term.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    (sum, dsum / x)
}

const CF_EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;
const XMIN: f64 = 2.0;

/// `(J_ν, J_ν', Y_ν, Y_ν')` by Steed's method.
fn steed_jy(nu: f64, x: f64) -> Result<(f64, f64, f64, f64)> {
    let nl = if x < XMIN {
        (nu + 0.5) as usize
    } else {
        let t = nu - x + 1.5;
        if t > 0.0 { t as usize } else { 0 }
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_ν / J_ν by the modified Lentz method.
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < CF_EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence(format!("CF1 for J_{nu}({x}) did not converge")));
    }

    // Downward recurrence from ν to μ with arbitrary starting scale.
    let mut rjl = isign * 1e-30;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = CF_EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < CF_EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < CF_EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < CF_EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * CF_EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::Convergence(format!("Temme series for Y_{nu}({x}) failed")));
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // CF2: p + iq = (J' + iY')/(J + iY) by Steed's algorithm.
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut ok = false;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            let fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < CF_EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::Convergence(format!("CF2 for J_{nu}({x}) did not converge")));
        }
        let gam = (p - f) / q;
        let mag = (w / ((p - f) * gam + q)).sqrt();
        rjmu = mag.copysign(rjl);
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    let scale = rjmu / rjl;
    let j = rjl1 * scale;
    let jp = rjp1 * scale;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    let y = rymu;
    let yp = nu * xi * rymu - ry1;
    Ok((j, jp, y, yp))
}

fn check_args(order: f64, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be positive and finite, got {x}")));
    }
    if !(order >= 0.0) || !order.is_finite() {
        return Err(Error::Domain(format!("Bessel order must be non-negative, got {order}")));
    }
    Ok(())
}

/// True when the ascending series for `J_ν(x)` is free of significant
/// cancellation.
fn use_series(order: f64, x: f64) -> bool {
    x * x <= 4.0 * (order + 1.0)
}

/// `J_ν(x)` and `J_ν'(x)` for real order `ν ≥ 0` and `x > 0`.
pub fn bessel_j(order: f64, x: f64) -> Result<BesselEval> {
    check_args(order, x)?;
    let (value, derivative) = if use_series(order, x) {
        series_j(order, x)
    } else {
        let (j, jp, _, _) = steed_jy(order, x)?;
        (j, jp)
    };
    Ok(BesselEval { value, derivative })
}

/// `Y_l(x)` and `Y_l'(x)` for integer order `l ≥ 0` and `x > 0`.
pub fn bessel_y(order: u32, x: f64) -> Result<BesselEval> {
    check_args(order as f64, x)?;
    let (_, _, y, yp) = steed_jy(order as f64, x)?;
    Ok(BesselEval { value: y, derivative: yp })
}

/// Both kinds at once for integer order; shares the continued-fraction work.
pub fn bessel_jy(order: u32, x: f64) -> Result<(BesselEval, BesselEval)> {
    let nu = order as f64;
    check_args(nu, x)?;
    let (j, jp, y, yp) = steed_jy(nu, x)?;
    let jev = if use_series(nu, x) {
        let (v, d) = series_j(nu, x);
        BesselEval { value: v, derivative: d }
    } else {
        BesselEval { value: j, derivative: jp }
    };
    Ok((jev, BesselEval { value: y, derivative: yp }))
}

/// Upper end of the sign scan used by [`jprime_zero`].
pub const JPRIME_SCAN_CEILING: f64 = 1.0e4;

/// The first `count` strictly positive zeros of `J_l'`, in increasing order.
pub fn jprime_zeros(l: u32, count: usize) -> Result<Vec<f64>> {
    let step = PI / 8.0;
    let lf = l as f64;
    // j'_{l,1} > sqrt(l(l+2)), so the scan can start below that bound.
    let mut a = if l == 0 { 0.5 } else { 0.5 * (lf * (lf + 2.0)).sqrt() };
    let dj = |x: f64| bessel_j(lf, x).map(|e| e.derivative);
    let mut fa = dj(a)?;
    let mut zeros = Vec::with_capacity(count);
    while zeros.len() < count {
        let b = a + step;
        if b > JPRIME_SCAN_CEILING {
            return Err(Error::Convergence(format!(
                "only {} zeros of J_{l}' found below {JPRIME_SCAN_CEILING}",
                zeros.len()
            )));
        }
        let fb = dj(b)?;
        if fa * fb < 0.0 {
            let r = roots::bisect(dj, a, b, 1e-13, 200)?;
            zeros.push(r.x);
        } else if fb == 0.0 {
            zeros.push(b);
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

/// The `k`-th (1-based) strictly positive zero of `J_l'`.
pub fn jprime_zero(l: u32, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("zero index k must be >= 1".into()));
    }
    Ok(*jprime_zeros(l, k)?.last().expect("k >= 1 zeros"))
}
