//! Critical Robin parameters and inner radii: where `τ_{l,1}` changes sign
//! (`h₁`), where the first eigenfunction stops having an interior minimum
//! (`h₀`), where `τ_{l,1}` and `τ_{0,2}` cross, and the inner radius above
//! which the Neumann `τ_{l,1}` stays below the Dirichlet `τ_{0,1}`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::radial_sl::{
    classify_profile_with, sl_eigenvalue_with, ModeProblem, ProfileClass, RobinParameter, ShellGeometry, SlConfig,
};
use crate::roots;

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    /// `None` when no sign change was found.
    pub value: Option<f64>,
    /// Final bracket of the defining sign change.
    pub bracket: (f64, f64),
    /// `|f(value)|` for the defining function `f`.
    pub residual: f64,
    pub iterations: usize,
    pub method: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct ThresholdConfig {
    pub sl: SlConfig,
    /// Root tolerance in the threshold variable.
    pub xtol: f64,
    /// Grid size for sign-change scans.
    pub scan_points: usize,
    /// Number of times the negative-h floor may be doubled.
    pub floor_expansions: usize,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self { sl: SlConfig::default(), xtol: 1e-12, scan_points: 200, floor_expansions: 20 }
    }
}

/// Default most-negative probe for h-searches, `−10·max(1, 1/α)`.
pub fn negative_h_floor(geometry: &ShellGeometry) -> f64 {
    -10.0 * (1.0f64).max(1.0 / geometry.inner_radius)
}

fn tau_l1(geometry: &ShellGeometry, l: u32, h: f64, cfg: &SlConfig) -> Result<f64> {
    sl_eigenvalue_with(&ModeProblem::new(*geometry, l, RobinParameter::Finite(h)), 1, cfg)
}

/// Find `h` with `τ_{l,1}(h) = target`, searching below `h = 0` where
/// `τ_{l,1}(0) > target` is required.
fn solve_in_h(geometry: &ShellGeometry, l: u32, target: f64, cfg: &ThresholdConfig, method: &'static str) -> Result<ThresholdReport> {
    let f = |h: f64| tau_l1(geometry, l, h, &cfg.sl).map(|t| t - target);
    let f0 = f(0.0)?;
    if f0 <= 0.0 {
        return Err(Error::NotFound(format!("τ_{{{l},1}}(0) − {target} = {f0} is not positive")));
    }
    let mut hi = 0.0;
    let mut lo = negative_h_floor(geometry);
    let mut tries = 0;
    while f(lo)? >= 0.0 {
        tries += 1;
        if tries > cfg.floor_expansions {
            return Err(Error::NotFound(format!("τ_{{{l},1}} stays above {target} down to h = {lo}")));
        }
        hi = lo;
        lo *= 2.0;
    }
    let r = roots::brent(f, lo, hi, cfg.xtol, 200)?;
    Ok(ThresholdReport { value: Some(r.x), bracket: r.bracket, residual: r.residual, iterations: r.iterations, method })
}

/// `h₁ < 0` with `τ_{l,1}(h₁) = 0`.
pub fn find_h1(geometry: &ShellGeometry, l: u32) -> Result<ThresholdReport> {
    find_h1_with(geometry, l, &ThresholdConfig::default())
}

pub fn find_h1_with(geometry: &ShellGeometry, l: u32, cfg: &ThresholdConfig) -> Result<ThresholdReport> {
    if l == 0 {
        return Err(Error::InvalidParameter("h₁ is defined for l >= 1".into()));
    }
    solve_in_h(geometry, l, 0.0, cfg, "brent on tau_l1(h)")
}

/// `h₀ < 0` with `τ_{l,1}(h₀) = l(l+N−2)/β²`, checked against the profile
/// shape on both sides.
pub fn find_h0(geometry: &ShellGeometry, l: u32) -> Result<ThresholdReport> {
    find_h0_with(geometry, l, &ThresholdConfig::default())
}

pub fn find_h0_with(geometry: &ShellGeometry, l: u32, cfg: &ThresholdConfig) -> Result<ThresholdReport> {
    if l == 0 {
        return Err(Error::InvalidParameter("h₀ is defined for l >= 1".into()));
    }
    let p = ModeProblem::new(*geometry, l, RobinParameter::Finite(0.0));
    let target = p.angular_coefficient() / geometry.outer_radius.powi(2);
    let report = solve_in_h(geometry, l, target, cfg, "brent on tau_l1(h) - l(l+N-2)/beta^2")?;
    let h0 = report.value.expect("solve_in_h returns a value");
    let eps = 1e-3 * h0.abs();
    let (above, below) = rayon::join(
        || classify_profile_with(&p.with_robin(RobinParameter::Finite(h0 + eps)), &cfg.sl),
        || classify_profile_with(&p.with_robin(RobinParameter::Finite(h0 - eps)), &cfg.sl),
    );
    let (above, below) = (above?, below?);
    if !matches!(above, ProfileClass::DipAt(_)) || below != ProfileClass::Decreasing {
        return Err(Error::CrossValidation(format!(
            "h₀ = {h0}: profile {above:?} at h₀ + {eps:e} and {below:?} at h₀ − {eps:e}"
        )));
    }
    Ok(report)
}

/// Every sign change of `τ_{0,2}(h) − τ_{l,1}(h)` on a uniform grid over
/// `[h_lo, h_hi]`, each refined by Brent.
pub fn find_h_crossing(geometry: &ShellGeometry, l: u32, range: (f64, f64)) -> Result<Vec<ThresholdReport>> {
    find_h_crossing_with(geometry, l, range, &ThresholdConfig::default())
}

pub fn crossing_gap(geometry: &ShellGeometry, l: u32, h: f64, cfg: &SlConfig) -> Result<f64> {
    let base = ModeProblem::new(*geometry, 0, RobinParameter::Finite(h));
    let (t02, tl1) = rayon::join(
        || sl_eigenvalue_with(&base, 2, cfg),
        || sl_eigenvalue_with(&base.with_angular_index(l), 1, cfg),
    );
    Ok(t02? - tl1?)
}

pub fn find_h_crossing_with(
    geometry: &ShellGeometry,
    l: u32,
    range: (f64, f64),
    cfg: &ThresholdConfig,
) -> Result<Vec<ThresholdReport>> {
    if l == 0 {
        return Err(Error::InvalidParameter("crossings are defined for l >= 1".into()));
    }
    let (a, b) = range;
    if !(a < b) || cfg.scan_points < 2 {
        return Err(Error::InvalidParameter(format!("bad scan range [{a}, {b}]")));
    }
    let n = cfg.scan_points;
    let hs: Vec<f64> = (0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect();
    let gaps: Vec<f64> = hs.par_iter().map(|&h| crossing_gap(geometry, l, h, &cfg.sl)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..n - 1 {
        let (g0, g1) = (gaps[i], gaps[i + 1]);
        if g0 == 0.0 {
            out.push(ThresholdReport { value: Some(hs[i]), bracket: (hs[i], hs[i]), residual: 0.0, iterations: 0, method: "grid node" });
        } else if g0 * g1 < 0.0 {
            let r = roots::brent(|h| crossing_gap(geometry, l, h, &cfg.sl), hs[i], hs[i + 1], cfg.xtol, 200)?;
            out.push(ThresholdReport {
                value: Some(r.x),
                bracket: r.bracket,
                residual: r.residual,
                iterations: r.iterations,
                method: "grid scan + brent on tau_02 - tau_l1",
            });
        }
    }
    if gaps[n - 1] == 0.0 {
        out.push(ThresholdReport { value: Some(b), bracket: (b, b), residual: 0.0, iterations: 0, method: "grid node" });
    }
    Ok(out)
}

/// Both ends of the h-window where the chain `τ_{l,1} < τ_{0,2}` fails:
/// the first crossing from below and the last crossing in the range. No
/// order between them is assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingWindow {
    pub first_crossing: Option<f64>,
    pub last_crossing: Option<f64>,
    pub crossings: Vec<ThresholdReport>,
}

pub fn ordering_window(geometry: &ShellGeometry, l: u32, range: (f64, f64)) -> Result<OrderingWindow> {
    let crossings = find_h_crossing(geometry, l, range)?;
    Ok(OrderingWindow {
        first_crossing: crossings.first().and_then(|c| c.value),
        last_crossing: crossings.last().and_then(|c| c.value),
        crossings,
    })
}

/// `g(α) = τ_{0,1}(+∞, α) − τ_{l,1}(0, α)`.
pub fn alpha_star_gap(dimension: u32, beta: f64, l: u32, alpha: f64, cfg: &SlConfig) -> Result<f64> {
    let g = ShellGeometry::new(dimension, alpha, beta)?;
    let (dir, neu) = rayon::join(
        || sl_eigenvalue_with(&ModeProblem::new(g, 0, RobinParameter::DirichletLimit), 1, cfg),
        || sl_eigenvalue_with(&ModeProblem::new(g, l, RobinParameter::Finite(0.0)), 1, cfg),
    );
    Ok(dir? - neu?)
}

/// Largest sign change of [`alpha_star_gap`] on a grid over `(0, β)`.
/// Above it the Neumann `τ_{l,1}` is below the Dirichlet `τ_{0,1}`, which
/// is sufficient for the chain `τ_{0,1} < ⋯ < τ_{l,1} < τ_{0,2}` at every
/// `h`.
pub fn find_alpha_star(dimension: u32, beta: f64, l: u32) -> Result<ThresholdReport> {
    find_alpha_star_with(dimension, beta, l, &ThresholdConfig::default())
}

pub fn find_alpha_star_with(dimension: u32, beta: f64, l: u32, cfg: &ThresholdConfig) -> Result<ThresholdReport> {
    if l == 0 || dimension < 2 || !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("need l >= 1, N >= 2, β > 0; got {l}, {dimension}, {beta}")));
    }
    let n = cfg.scan_points;
    let alphas: Vec<f64> = (1..n).map(|i| beta * i as f64 / n as f64).collect();
    let gaps: Vec<f64> = alphas
        .par_iter()
        .map(|&a| alpha_star_gap(dimension, beta, l, a, &cfg.sl))
        .collect::<Result<_>>()?;
    let last = (0..alphas.len() - 1).rev().find(|&i| gaps[i] * gaps[i + 1] < 0.0 || gaps[i] == 0.0);
    let Some(i) = last else {
        return Ok(ThresholdReport {
            value: None,
            bracket: (alphas[0], alphas[alphas.len() - 1]),
            residual: f64::NAN,
            iterations: 0,
            method: "grid scan found no sign change",
        });
    };
    if gaps[i] == 0.0 {
        return Ok(ThresholdReport { value: Some(alphas[i]), bracket: (alphas[i], alphas[i]), residual: 0.0, iterations: 0, method: "grid node" });
    }
    let r = roots::brent(|a| alpha_star_gap(dimension, beta, l, a, &cfg.sl), alphas[i], alphas[i + 1], cfg.xtol, 200)?;
    Ok(ThresholdReport {
        value: Some(r.x),
        bracket: r.bracket,
        residual: r.residual,
        iterations: r.iterations,
        method: "grid scan + brent on tau_01(inf) - tau_l1(0)",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_scales_with_inner_radius() {
        assert_eq!(negative_h_floor(&ShellGeometry::new(2, 1.0, 15.0).unwrap()), -10.0);
        assert_eq!(negative_h_floor(&ShellGeometry::new(2, 0.1, 1.0).unwrap()), -100.0);
    }

    #[test]
    fn rejects_radial_index() {
        let g = ShellGeometry::new(2, 1.0, 2.0).unwrap();
        assert!(find_h1(&g, 0).is_err());
        assert!(find_h0(&g, 0).is_err());
        assert!(find_h_crossing(&g, 0, (-1.0, 0.0)).is_err());
        assert!(find_alpha_star(2, 1.0, 0).is_err());
    }
}
