//! Adaptive Gauss–Kronrod (7/15) quadrature and composite Simpson on
//! uniform grids.
//!
//! The adaptive driver always bisects the interval with the largest error
//! estimate, ties broken by position, so results do not depend on anything
//! but the integrand and the tolerances.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub epsabs: f64,
    pub epsrel: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { epsabs: 1e-14, epsrel: 1e-10, max_intervals: 2000 }
    }
}

impl QuadConfig {
    pub fn new(epsabs: f64, epsrel: f64) -> Self {
        Self { epsabs, epsrel, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let resasc = asc * half.abs();
    let resabs = abs_sum * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(round);
    }
    Segment { a, b, value, error }
}

/// Integrate `f` over `[a, b]`, splitting first at the given interior
/// breakpoints (ignored if outside the interval).
pub fn integrate_with_breaks<F>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, intervals: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut nodes = vec![lo];
    let mut interior: Vec<f64> = breaks.iter().copied().filter(|&x| x > lo && x < hi).collect();
    interior.sort_by(|p, q| p.total_cmp(q));
    interior.dedup();
    nodes.extend(interior);
    nodes.push(hi);

    let mut segs: Vec<Segment> = nodes.windows(2).map(|w| gk15(&mut f, w[0], w[1])).collect();
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        let target = cfg.epsabs.max(cfg.epsrel * total.abs());
        if err <= target {
            return Ok(QuadResult { value: sign * total, error: err, intervals: segs.len() });
        }
        if segs.len() >= cfg.max_intervals {
            return Err(Error::ToleranceNotMet(format!(
                "estimated error {err:e} exceeds {target:e} after {} intervals on [{lo}, {hi}]",
                segs.len()
            )));
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|(i, s), (j, t)| s.error.total_cmp(&t.error).then(j.cmp(i)))
            .expect("at least one segment");
        let s = segs[worst];
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::ToleranceNotMet(format!(
                "interval [{}, {}] cannot be subdivided further",
                s.a, s.b
            )));
        }
        segs[worst] = gk15(&mut f, s.a, mid);
        segs.insert(worst + 1, gk15(&mut f, mid, s.b));
    }
}

pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    integrate_with_breaks(f, a, b, &[], cfg)
}

/// Composite Simpson rule on a uniform grid with an odd number of nodes.
pub fn simpson_uniform(h: f64, values: &[f64]) -> f64 {
    let n = values.len();
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd node count >= 3, got {n}");
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (values[0] + values[n - 1] + 4.0 * odd + 2.0 * even)
}

/// Piecewise-quadratic rule on an arbitrary increasing grid. Pairs of
/// intervals use the nonuniform Simpson weights; with an even node count the
/// last interval is integrated from the quadratic through the last three
/// nodes.
pub fn simpson_nonuniform(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    assert_eq!(n, y.len());
    match n {
        0 | 1 => return 0.0,
        2 => return 0.5 * (x[1] - x[0]) * (y[0] + y[1]),
        _ => {}
    }
    let pairs_end = if n % 2 == 1 { n - 1 } else { n - 2 };
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 <= pairs_end {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        let s = h0 + h1;
        total += s / 6.0
            * ((2.0 - h1 / h0) * y[i] + s * s / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
        i += 2;
    }
    if n % 2 == 0 {
        let h0 = x[n - 2] - x[n - 3];
        let h1 = x[n - 1] - x[n - 2];
        total += -h1.powi(3) / (6.0 * h0 * (h0 + h1)) * y[n - 3]
            + h1 * (h1 + 3.0 * h0) / (6.0 * h0) * y[n - 2]
            + h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1)) * y[n - 1];
    }
    total
}
