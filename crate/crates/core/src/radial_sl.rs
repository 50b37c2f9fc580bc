//! Radial Sturm–Liouville problem of a spherical shell.
//!
//! For `α < r < β` in dimension `N` and angular index `l`,
//!
//! ```text
//! −(r^{N−1} v′)′ + l(l+N−2) r^{N−3} v = τ r^{N−1} v,
//! −v′(α) + h v(α) = 0   (v(α) = 0 when h = +∞),     v′(β) = 0.
//! ```
//!
//! Eigenvalues are located with the Prüfer angle `θ`, where `v = ρ sin θ`
//! and `r^{N−1} v′ = ρ cos θ`. The angle at `β` is continuous and strictly
//! increasing in `τ`, and `τ_{l,j}` is the unique `τ` with
//! `θ(β) = π/2 + (j−1)π`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ode::{self, OdeConfig};
use crate::quadrature::{simpson_nonuniform, simpson_uniform};
use crate::roots;

/// Robin coefficient on the inner sphere. `DirichletLimit` is `h = +∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RobinParameter {
    Finite(f64),
    DirichletLimit,
}

impl RobinParameter {
    pub fn finite(self) -> Option<f64> {
        match self {
            RobinParameter::Finite(h) => Some(h),
            RobinParameter::DirichletLimit => None,
        }
    }

    pub fn is_dirichlet(self) -> bool {
        matches!(self, RobinParameter::DirichletLimit)
    }
}

impl fmt::Display for RobinParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RobinParameter::Finite(h) => write!(f, "{h}"),
            RobinParameter::DirichletLimit => f.write_str("inf"),
        }
    }
}

/// Accepts a finite decimal number or `inf` (any case). Other spellings of
/// infinity and values that overflow are rejected.
impl FromStr for RobinParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            return Ok(RobinParameter::DirichletLimit);
        }
        let h: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse Robin parameter {s:?}")))?;
        if !h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Robin parameter {s:?} is not finite; write \"inf\" for the Dirichlet limit"
            )));
        }
        Ok(RobinParameter::Finite(h))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellGeometry {
    pub dimension: u32,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl ShellGeometry {
    pub fn new(dimension: u32, inner_radius: f64, outer_radius: f64) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidParameter(format!("dimension {dimension} < 2")));
        }
        if !(inner_radius > 0.0 && inner_radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("inner radius {inner_radius} must be positive")));
        }
        if !(outer_radius > inner_radius && outer_radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "outer radius {outer_radius} must exceed inner radius {inner_radius}"
            )));
        }
        Ok(Self { dimension, inner_radius, outer_radius })
    }

    /// `|B_β ∖ B̄_α| = |S^{N−1}| (β^N − α^N) / N`.
    pub fn volume(&self) -> f64 {
        let n = self.dimension as i32;
        sphere_area(self.dimension) * (self.outer_radius.powi(n) - self.inner_radius.powi(n)) / n as f64
    }
}

/// Surface measure of the unit sphere `S^{N−1}`.
pub fn sphere_area(dimension: u32) -> f64 {
    // |S^{N-1}| = 2π^{N/2}/Γ(N/2), by the recursion |S^{N+1}| = 2π|S^{N-1}|/N
    let mut s = if dimension % 2 == 0 { 2.0 * PI } else { 2.0 };
    let mut n = if dimension % 2 == 0 { 2 } else { 1 };
    while n < dimension {
        s *= 2.0 * PI / n as f64;
        n += 2;
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProblem {
    pub geometry: ShellGeometry,
    pub angular_index: u32,
    pub robin: RobinParameter,
}

impl ModeProblem {
    pub fn new(geometry: ShellGeometry, angular_index: u32, robin: RobinParameter) -> Self {
        Self { geometry, angular_index, robin }
    }

    /// `l(l+N−2)`.
    pub fn angular_coefficient(&self) -> f64 {
        let l = self.angular_index as f64;
        l * (l + self.geometry.dimension as f64 - 2.0)
    }

    pub fn with_robin(&self, robin: RobinParameter) -> Self {
        Self { robin, ..*self }
    }

    pub fn with_angular_index(&self, l: u32) -> Self {
        Self { angular_index: l, ..*self }
    }

    fn weight(&self, r: f64) -> f64 {
        r.powi(self.geometry.dimension as i32 - 1)
    }

    fn potential(&self, r: f64) -> f64 {
        self.angular_coefficient() * r.powi(self.geometry.dimension as i32 - 3)
    }

    /// Right-hand side of the first-order system for `(v, r^{N−1} v′)`.
    fn system(&self, tau: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
        move |r, y| [y[1] / self.weight(r), (self.potential(r) - tau * self.weight(r)) * y[0]]
    }
}

/// Solver settings shared by the shooting routines.
#[derive(Debug, Clone, Copy)]
pub struct SlConfig {
    pub ode: OdeConfig,
    /// Nodes of the uniform eigenfunction grid (odd, for Simpson).
    pub grid_points: usize,
    /// Absolute bracket width at which the eigenvalue search stops.
    pub eig_xtol: f64,
    /// Bracket expansion gives up beyond `|τ|` of this size.
    pub tau_ceiling: f64,
}

impl Default for SlConfig {
    fn default() -> Self {
        Self { ode: OdeConfig::default(), grid_points: 2049, eig_xtol: 1e-13, tau_ceiling: 1e12 }
    }
}

/// An eigenvalue with its normalised eigenfunction sampled on a uniform
/// grid over `[α, β]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigenpair {
    pub problem: ModeProblem,
    pub tau: f64,
    pub j: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub deriv_values: Vec<f64>,
    pub zero_count: usize,
}

impl RadialEigenpair {
    /// `(v(r), v′(r))` by cubic Hermite interpolation; clamps to `[α, β]`.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        hermite_eval(&self.grid, &self.values, &self.deriv_values, r)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn at_inner(&self) -> f64 {
        self.values[0]
    }

    pub fn at_outer(&self) -> f64 {
        *self.values.last().expect("non-empty grid")
    }
}

/// Cubic Hermite interpolation of sampled `(f, f′)` on an increasing grid.
pub fn hermite_eval(grid: &[f64], f: &[f64], df: &[f64], r: f64) -> (f64, f64) {
    let n = grid.len();
    let r = r.clamp(grid[0], grid[n - 1]);
    let i = grid.partition_point(|&g| g <= r).clamp(1, n - 1) - 1;
    let h = grid[i + 1] - grid[i];
    let t = (r - grid[i]) / h;
    let (t2, t3) = (t * t, t * t * t);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let value = h00 * f[i] + h10 * h * df[i] + h01 * f[i + 1] + h11 * h * df[i + 1];
    let d00 = (6.0 * t2 - 6.0 * t) / h;
    let d10 = 3.0 * t2 - 4.0 * t + 1.0;
    let d01 = (-6.0 * t2 + 6.0 * t) / h;
    let d11 = 3.0 * t2 - 2.0 * t;
    let deriv = d00 * f[i] + d10 * df[i] + d01 * f[i + 1] + d11 * df[i + 1];
    (value, deriv)
}

/// Shape of the first eigenfunction for `l ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileClass {
    Increasing,
    Decreasing,
    /// `v′ < 0` on `(α, γ)` and `v′ > 0` on `(γ, β)`.
    DipAt(f64),
}

fn initial_angle(problem: &ModeProblem) -> f64 {
    match problem.robin {
        RobinParameter::Finite(h) => {
            let ph = problem.weight(problem.geometry.inner_radius) * h;
            // arccot(ph) in (0, π)
            1.0f64.atan2(ph)
        }
        RobinParameter::DirichletLimit => 0.0,
    }
}

/// Prüfer angle at `β` for the given `τ`.
pub fn prufer_angle_at_outer(problem: &ModeProblem, tau: f64, cfg: &SlConfig) -> Result<f64> {
    let g = problem.geometry;
    let rhs = |r: f64, y: &[f64; 1]| {
        let (s, c) = y[0].sin_cos();
        [c * c / problem.weight(r) + (tau * problem.weight(r) - problem.potential(r)) * s * s]
    };
    let h0 = (g.outer_radius - g.inner_radius) * 1e-3;
    let (y, _) = ode::integrate(&rhs, g.inner_radius, [initial_angle(problem)], g.outer_radius, Some(h0), &cfg.ode)?;
    Ok(y[0])
}

fn count_from_angle(theta: f64) -> usize {
    let x = (theta - FRAC_PI_2) / PI;
    if x <= 0.0 { 0 } else { x.ceil() as usize }
}

/// Number of eigenvalues `τ_{l,j}` strictly below `tau`.
pub fn count_eigenvalues_below(problem: &ModeProblem, tau: f64) -> Result<usize> {
    count_eigenvalues_below_with(problem, tau, &SlConfig::default())
}

pub fn count_eigenvalues_below_with(problem: &ModeProblem, tau: f64, cfg: &SlConfig) -> Result<usize> {
    Ok(count_from_angle(prufer_angle_at_outer(problem, tau, cfg)?))
}

/// The `j`-th eigenvalue `τ_{l,j}` (1-based).
pub fn sl_eigenvalue(problem: &ModeProblem, j: usize) -> Result<f64> {
    sl_eigenvalue_with(problem, j, &SlConfig::default())
}

pub fn sl_eigenvalue_with(problem: &ModeProblem, j: usize, cfg: &SlConfig) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidParameter("eigenvalue index j must be >= 1".into()));
    }
    let target = FRAC_PI_2 + (j - 1) as f64 * PI;
    let f = |tau: f64| prufer_angle_at_outer(problem, tau, cfg).map(|t| t - target);

    // Very negative h pushes τ_{l,1} towards −h², so scale the first step.
    let step = match problem.robin {
        RobinParameter::Finite(h) if h < 0.0 => (h * h).max(1.0),
        _ => 1.0,
    };
    let f0 = f(0.0)?;
    if f0 == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi);
    if f0 > 0.0 {
        hi = 0.0;
        lo = -step;
        while f(lo)? > 0.0 {
            hi = lo;
            lo *= 2.0;
            if lo.abs() > cfg.tau_ceiling {
                return Err(Error::Convergence(format!("no lower bracket for τ_{{l,{j}}} above {lo}")));
            }
        }
    } else {
        lo = 0.0;
        hi = step;
        while f(hi)? <= 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > cfg.tau_ceiling {
                return Err(Error::Convergence(format!("no upper bracket for τ_{{l,{j}}} below {hi}")));
            }
        }
    }
    let root = roots::brent(f, lo, hi, cfg.eig_xtol, 300)?;
    Ok(root.x)
}

/// Integrate the `(v, r^{N−1}v′)` system across `grid`, starting at the
/// first node (forward) or the last (backward). Rescales to avoid overflow.
fn shoot(problem: &ModeProblem, tau: f64, grid: &[f64], start: [f64; 2], forward: bool, cfg: &OdeConfig) -> Result<Vec<[f64; 2]>> {
    let n = grid.len();
    let rhs = problem.system(tau);
    let mut out = vec![[0.0; 2]; n];
    let order: Vec<usize> = if forward { (0..n).collect() } else { (0..n).rev().collect() };
    let mut y = start;
    out[order[0]] = y;
    let mut hint = None;
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (y1, h) = ode::integrate(&rhs, grid[a], y, grid[b], hint, cfg)?;
        y = y1;
        hint = Some(h);
        out[b] = y;
        let size = y[0].abs().max(y[1].abs());
        if size > 1e100 {
            for &k in order.iter().take_while(|&&k| k != b) {
                out[k][0] /= size;
                out[k][1] /= size;
            }
            y = [y[0] / size, y[1] / size];
            out[b] = y;
        }
    }
    Ok(out)
}

fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
    g[n - 1] = b;
    g
}

fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// Eigenpair for `τ_{l,j}` with `∫ r^{N−1} v² = 1` and `v(β) > 0`.
pub fn sl_eigenfunction(problem: &ModeProblem, j: usize) -> Result<RadialEigenpair> {
    sl_eigenfunction_with(problem, j, &SlConfig::default())
}

pub fn sl_eigenfunction_with(problem: &ModeProblem, j: usize, cfg: &SlConfig) -> Result<RadialEigenpair> {
    let tau = sl_eigenvalue_with(problem, j, cfg)?;
    eigenpair_at(problem, tau, j, cfg)
}

/// Recover the eigenfunction at an already converged eigenvalue.
///
/// Shoots from both ends and joins the two solutions where their phase
/// angles agree best. One-sided shooting loses the eigenfunction when it
/// decays exponentially away from the starting end.
pub fn eigenpair_at(problem: &ModeProblem, tau: f64, j: usize, cfg: &SlConfig) -> Result<RadialEigenpair> {
    let g = problem.geometry;
    let n = cfg.grid_points.max(5) | 1;
    let grid = uniform_grid(g.inner_radius, g.outer_radius, n);
    let start_left = match problem.robin {
        RobinParameter::Finite(h) => [1.0, problem.weight(g.inner_radius) * h],
        RobinParameter::DirichletLimit => [0.0, 1.0],
    };
    let left = shoot(problem, tau, &grid, start_left, true, &cfg.ode)?;
    let right = shoot(problem, tau, &grid, [1.0, 0.0], false, &cfg.ode)?;

    let mismatch = |i: usize| {
        let (l, r) = (left[i], right[i]);
        let cross = l[0] * r[1] - l[1] * r[0];
        cross.abs() / (l[0].hypot(l[1]) * r[0].hypot(r[1]))
    };
    let m = (1..n - 1)
        .min_by(|&a, &b| mismatch(a).total_cmp(&mismatch(b)).then(a.cmp(&b)))
        .expect("grid has interior nodes");
    let (l, r) = (left[m], right[m]);
    let scale = (l[0] * r[0] + l[1] * r[1]) / (r[0] * r[0] + r[1] * r[1]);
    if !scale.is_finite() || scale == 0.0 {
        return Err(Error::Convergence(format!("eigenfunction matching failed at τ = {tau}")));
    }
    let mut values = Vec::with_capacity(n);
    let mut flux = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i <= m { left[i] } else { [scale * right[i][0], scale * right[i][1]] };
        values.push(y[0]);
        flux.push(y[1]);
    }

    let h = grid[1] - grid[0];
    let dens: Vec<f64> = grid.iter().zip(&values).map(|(&r, &v)| problem.weight(r) * v * v).collect();
    let norm = simpson_uniform(h, &dens).sqrt();
    let sign = if values[n - 1] < 0.0 { -1.0 } else { 1.0 };
    let c = sign / norm;
    for v in values.iter_mut() {
        *v *= c;
    }
    let deriv_values: Vec<f64> = grid.iter().zip(&flux).map(|(&r, &p)| c * p / problem.weight(r)).collect();
    let zero_count = count_sign_changes(&values);
    Ok(RadialEigenpair { problem: *problem, tau, j, grid, values, deriv_values, zero_count })
}

/// A function sampled on an increasing grid over `[α, β]`, optionally with
/// its derivative.
#[derive(Debug, Clone, Copy)]
pub struct RadialSamples<'a> {
    pub grid: &'a [f64],
    pub values: &'a [f64],
    pub derivatives: Option<&'a [f64]>,
}

impl<'a> From<&'a RadialEigenpair> for RadialSamples<'a> {
    fn from(e: &'a RadialEigenpair) -> Self {
        Self { grid: &e.grid, values: &e.values, derivatives: Some(&e.deriv_values) }
    }
}

/// Five-point finite-difference derivative on an arbitrary grid
/// (Fornberg weights).
fn fd_derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let width = n.min(5);
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(width / 2).min(n - width);
            let xs = &x[start..start + width];
            let w = fornberg_first_derivative(x[i], xs);
            w.iter().zip(&y[start..start + width]).map(|(a, b)| a * b).sum()
        })
        .collect()
}

fn fornberg_first_derivative(z: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    // c[k][m] = weight of node k for the m-th derivative, m ∈ {0, 1}
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// `R_l(v) = [∫ (v′² + l(l+N−2) v²/r²) r^{N−1} dr + h α^{N−1} v(α)²] / ∫ v² r^{N−1} dr`.
pub fn rayleigh_quotient(problem: &ModeProblem, samples: RadialSamples<'_>) -> Result<f64> {
    let RadialSamples { grid, values, derivatives } = samples;
    if grid.len() != values.len() || grid.len() < 3 {
        return Err(Error::InvalidParameter("sample grid and values must match and have ≥ 3 nodes".into()));
    }
    let owned;
    let dv = match derivatives {
        Some(d) if d.len() == grid.len() => d,
        Some(_) => return Err(Error::InvalidParameter("derivative samples have the wrong length".into())),
        None => {
            owned = fd_derivative(grid, values);
            &owned
        }
    };
    let c = problem.angular_coefficient();
    let mass: Vec<f64> = grid.iter().zip(values).map(|(&r, &v)| problem.weight(r) * v * v).collect();
    let denom = simpson_nonuniform(grid, &mass);
    if denom < 1e-14 {
        return Err(Error::Degenerate(format!("weighted norm {denom:e} is numerically zero")));
    }
    let energy: Vec<f64> = grid
        .iter()
        .zip(values)
        .zip(dv)
        .map(|((&r, &v), &d)| problem.weight(r) * (d * d + c * v * v / (r * r)))
        .collect();
    let mut numer = simpson_nonuniform(grid, &energy);
    let a = problem.geometry.inner_radius;
    match problem.robin {
        RobinParameter::Finite(h) => numer += h * problem.weight(a) * values[0] * values[0],
        RobinParameter::DirichletLimit => {
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if values[0].abs() > 1e-8 * scale {
                return Err(Error::InvalidParameter(format!(
                    "Dirichlet quotient needs v(α) = 0, got {}",
                    values[0]
                )));
            }
        }
    }
    Ok(numer / denom)
}

/// `∂τ_{l,j}/∂h = α^{N−1} v(α)²` for the normalised eigenfunction.
pub fn tau_h_derivative(problem: &ModeProblem, j: usize) -> Result<f64> {
    tau_h_derivative_with(problem, j, &SlConfig::default())
}

pub fn tau_h_derivative_with(problem: &ModeProblem, j: usize, cfg: &SlConfig) -> Result<f64> {
    if problem.robin.is_dirichlet() {
        return Err(Error::InvalidParameter("the h-derivative needs a finite Robin parameter".into()));
    }
    let e = sl_eigenfunction_with(problem, j, cfg)?;
    Ok(problem.weight(problem.geometry.inner_radius) * e.at_inner().powi(2))
}

/// Relative size below which `v′` counts as zero on the grid.
pub const PROFILE_ZERO_TOL: f64 = 1e-7;

/// Monotonicity class of the first eigenfunction (`j = 1`, `l ≥ 1`).
pub fn classify_profile(problem: &ModeProblem) -> Result<ProfileClass> {
    classify_profile_with(problem, &SlConfig::default())
}

pub fn classify_profile_with(problem: &ModeProblem, cfg: &SlConfig) -> Result<ProfileClass> {
    if problem.angular_index == 0 {
        return Err(Error::InvalidParameter("profile classification needs l >= 1".into()));
    }
    let e = sl_eigenfunction_with(problem, 1, cfg)?;
    classify_eigenpair(&e, cfg)
}

/// Classification of an already computed first eigenpair.
pub fn classify_eigenpair(e: &RadialEigenpair, cfg: &SlConfig) -> Result<ProfileClass> {
    let n = e.grid.len();
    let dmax = e.deriv_values.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let tol = PROFILE_ZERO_TOL * dmax;
    let sign = |d: f64| if d > tol { 1i8 } else if d < -tol { -1 } else { 0 };
    let signs: Vec<i8> = e.deriv_values.iter().map(|&d| sign(d)).collect();

    // Near-zero runs touching either end are explained by the boundary
    // conditions. Inside, raw signs are used: a shallow dip keeps |v′| tiny
    // over several nodes and an exponentially decaying profile keeps it tiny
    // over a whole region, yet the sign is still resolved by the solver.
    let first_nz = (1..n - 1).find(|&i| signs[i] != 0);
    let last_nz = (1..n - 1).rev().find(|&i| signs[i] != 0);
    let (Some(first_nz), Some(last_nz)) = (first_nz, last_nz) else {
        return Err(Error::AmbiguousClassification("v′ vanishes on the whole grid".into()));
    };
    let raw = |i: usize| e.deriv_values[i].signum() as i8;
    let nz: Vec<usize> = (first_nz..=last_nz).filter(|&i| e.deriv_values[i] != 0.0).collect();
    let changes: Vec<usize> = nz.windows(2).filter(|w| raw(w[0]) != raw(w[1])).map(|w| w[0]).collect();
    let signs: Vec<i8> = (0..n).map(raw).collect();

    let problem = &e.problem;
    let v_prime_from = |i: usize, r: f64| -> Result<f64> {
        let y0 = [e.values[i], problem.weight(e.grid[i]) * e.deriv_values[i]];
        let (y, _) = ode::integrate(&problem.system(e.tau), e.grid[i], y0, r, None, &cfg.ode)?;
        Ok(y[1] / problem.weight(r))
    };

    match changes.as_slice() {
        [] if signs[nz[0]] > 0 => Ok(ProfileClass::Increasing),
        [] => resolve_tail(e, nz[nz.len() - 1], cfg),
        [i] if signs[*i] < 0 => {
            let a = *i;
            let b = *nz.iter().find(|&&k| k > a).expect("sign change has a right node");
            let root = roots::bisect(|r| v_prime_from(a, r), e.grid[a], e.grid[b], 1e-13 * e.grid[b], 200)?;
            Ok(ProfileClass::DipAt(root.x))
        }
        _ => Err(Error::AmbiguousClassification(format!(
            "v′ changes sign {} times on the grid",
            changes.len()
        ))),
    }
}

/// The grid shows `v′ < 0` throughout. Near `β`, `v′(r) ≈ v″(β)(r−β)` with
/// `v″(β) = (l(l+N−2)/β² − τ) v(β)`, so a dip may hide between the last
/// negative node and `β`.
fn resolve_tail(e: &RadialEigenpair, last_neg: usize, cfg: &SlConfig) -> Result<ProfileClass> {
    let p = &e.problem;
    let beta = p.geometry.outer_radius;
    let nf = p.geometry.dimension as f64;
    let c = p.angular_coefficient();
    let vb = e.at_outer();
    let v2 = (c / (beta * beta) - e.tau) * vb;
    if v2 * vb >= 0.0 {
        return Ok(ProfileClass::Decreasing);
    }
    let v3 = -2.0 * c / beta.powi(3) * vb - (nf - 1.0) * v2 / beta;
    let taylor = beta - 2.0 * v2 / v3;
    let a = e.grid[last_neg];
    let tight = OdeConfig { atol: 1e-300, rtol: 1e-13, ..cfg.ode };
    let v_prime = |r: f64| -> Result<f64> {
        let (y, _) = ode::integrate(&p.system(e.tau), beta, [vb, 0.0], r, None, &tight)?;
        Ok(y[1] / p.weight(r))
    };
    if taylor > a && taylor < beta {
        let b = beta - 0.5 * (beta - taylor);
        if v_prime(a)? < 0.0 && v_prime(b)? > 0.0 {
            let root = roots::bisect(v_prime, a, b, 1e-14 * beta, 200)?;
            return Ok(ProfileClass::DipAt(root.x));
        }
        if beta - taylor < 1e-6 * (beta - p.geometry.inner_radius) {
            return Ok(ProfileClass::DipAt(taylor));
        }
    }
    Err(Error::AmbiguousClassification(format!(
        "v″(β) indicates a dip near β but none was located (τ = {})",
        e.tau
    )))
}
