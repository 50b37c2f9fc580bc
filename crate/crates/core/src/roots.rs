//! Bracketing root finders on the real line.

use crate::error::{Error, Result};

/// Outcome of a bracketed root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// Final bracket, endpoints straddling the sign change.
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
}

fn check_bracket(fa: f64, fb: f64, a: f64, b: f64) -> Result<()> {
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Domain(format!("NaN at bracket [{a}, {b}]")));
    }
    if fa * fb > 0.0 {
        return Err(Error::NotFound(format!(
            "no sign change on [{a}, {b}] (f = {fa:e}, {fb:e})"
        )));
    }
    Ok(())
}

/// Plain bisection until the bracket is narrower than `xtol` or `max_iter`
/// halvings have been made.
pub fn bisect<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = if a < b { (a, b) } else { (b, a) };
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    check_bracket(flo, fhi, lo, hi)?;
    if flo == 0.0 {
        return Ok(Root { x: lo, bracket: (lo, lo), residual: 0.0, iterations: 0 });
    }
    if fhi == 0.0 {
        return Ok(Root { x: hi, bracket: (hi, hi), residual: 0.0, iterations: 0 });
    }
    let mut iterations = 0;
    while iterations < max_iter && (hi - lo) > xtol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        iterations += 1;
        if fm == 0.0 {
            return Ok(Root { x: mid, bracket: (mid, mid), residual: 0.0, iterations });
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let residual = f(x)?.abs();
    Ok(Root { x, bracket: (lo, hi), residual, iterations })
}

/// Brent's method (inverse quadratic interpolation safeguarded by bisection).
///
/// Terminates when the bracket is below `xtol + 4 eps |x|` or the function
/// value is exactly zero.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut a = a;
    let mut b = b;
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    check_bracket(fa, fb, a, b)?;
    if fa == 0.0 {
        return Ok(Root { x: a, bracket: (a, a), residual: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, bracket: (b, b), residual: 0.0, iterations: 0 });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            let bracket = if b < c { (b, c) } else { (c, b) };
            return Ok(Root { x: b, bracket, residual: fb.abs(), iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::Convergence(format!(
        "Brent iteration exceeded {max_iter} steps near {b}"
    )))
}

/// Scan `[a, b]` with `n` uniform cells and return every cell whose endpoint
/// values have opposite signs (or hit zero exactly at the left node).
pub fn sign_changes<F>(mut f: F, a: f64, b: f64, n: usize) -> Result<Vec<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut out = Vec::new();
    let h = (b - a) / n as f64;
    let mut x0 = a;
    let mut f0 = f(x0)?;
    for i in 1..=n {
        let x1 = if i == n { b } else { a + h * i as f64 };
        let f1 = f(x1)?;
        if f0 == 0.0 || f0 * f1 < 0.0 {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_sqrt2() {
        let r = brent(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-15, 100).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
        assert!(r.bracket.0 <= r.x && r.x <= r.bracket.1);
    }

    #[test]
    fn bisect_respects_tolerance() {
        let r = bisect(|x| Ok(x.cos() - x), 0.0, 1.0, 1e-13, 200).unwrap();
        assert!((r.x - 0.739_085_133_215_160_6).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_an_error() {
        assert!(matches!(
            brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn scan_reports_each_crossing() {
        let cells = sign_changes(|x| Ok(x.sin()), 0.5, 10.0, 100).unwrap();
        assert_eq!(cells.len(), 3);
    }
}
