//! Trial-function bounds on perturbed shells: the first radial eigenfunction
//! extended by a constant beyond `β`, integrated over eccentric and
//! star-shaped domains with the same hole.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadConfig};
use crate::radial_sl::{sl_eigenfunction_with, sphere_area, ModeProblem, RobinParameter, ShellGeometry, SlConfig};

/// `G = v` on `[α, β]` and `G = v(β)` on `[β, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    pub plateau: f64,
    pub problem: ModeProblem,
    pub tau: f64,
    second: Vec<f64>,
    /// Nodes of the grid that lie in `[α, β]`.
    inner_len: usize,
}

impl ExtendedProfile {
    /// `(G(r), G′(r))`. Piecewise quintic Hermite on `[α, β]` using
    /// `v″` from the equation; constant outside.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let beta = self.problem.geometry.outer_radius;
        if r >= beta {
            return (self.plateau, 0.0);
        }
        let grid = &self.grid[..self.inner_len];
        let r = r.max(grid[0]);
        let i = grid.partition_point(|&g| g <= r).clamp(1, self.inner_len - 1) - 1;
        quintic_hermite(
            grid[i],
            grid[i + 1],
            [self.values[i], self.derivatives[i], self.second[i]],
            [self.values[i + 1], self.derivatives[i + 1], self.second[i + 1]],
            r,
        )
    }

    pub fn r_max(&self) -> f64 {
        *self.grid.last().expect("non-empty grid")
    }

    pub fn at_inner(&self) -> f64 {
        self.values[0]
    }
}

fn quintic_hermite(x0: f64, x1: f64, f0: [f64; 3], f1: [f64; 3], x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let (t2, t3) = (t * t, t * t * t);
    let (t4, t5) = (t3 * t, t3 * t2);
    let b = [
        1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5,
        t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5,
        0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5),
        10.0 * t3 - 15.0 * t4 + 6.0 * t5,
        -4.0 * t3 + 7.0 * t4 - 3.0 * t5,
        0.5 * (t3 - 2.0 * t4 + t5),
    ];
    let db = [
        -30.0 * t2 + 60.0 * t3 - 30.0 * t4,
        1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
        0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4),
        30.0 * t2 - 60.0 * t3 + 30.0 * t4,
        -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
        0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4),
    ];
    let c = [f0[0], h * f0[1], h * h * f0[2], f1[0], h * f1[1], h * h * f1[2]];
    let value = b.iter().zip(&c).map(|(b, c)| b * c).sum();
    let deriv = db.iter().zip(&c).map(|(b, c)| b * c).sum::<f64>() / h;
    (value, deriv)
}

/// Number of plateau nodes appended after `β`.
const PLATEAU_NODES: usize = 16;

pub fn extend_profile(problem: &ModeProblem, r_max: f64) -> Result<ExtendedProfile> {
    extend_profile_with(problem, r_max, &SlConfig::default())
}

pub fn extend_profile_with(problem: &ModeProblem, r_max: f64, cfg: &SlConfig) -> Result<ExtendedProfile> {
    let beta = problem.geometry.outer_radius;
    if !(r_max > beta) || !r_max.is_finite() {
        return Err(Error::InvalidParameter(format!("r_max = {r_max} must exceed β = {beta}")));
    }
    let e = sl_eigenfunction_with(problem, 1, cfg)?;
    let c = problem.angular_coefficient();
    let nf = problem.geometry.dimension as f64;
    let mut second: Vec<f64> = e
        .grid
        .iter()
        .zip(e.values.iter().zip(&e.deriv_values))
        .map(|(&r, (&v, &dv))| (c / (r * r) - e.tau) * v - (nf - 1.0) / r * dv)
        .collect();
    let inner_len = e.grid.len();
    let plateau = e.at_outer();
    let mut grid = e.grid;
    let mut values = e.values;
    let mut derivatives = e.deriv_values;
    // v′(β) = 0 exactly
    derivatives[inner_len - 1] = 0.0;
    for k in 1..=PLATEAU_NODES {
        grid.push(beta + (r_max - beta) * k as f64 / PLATEAU_NODES as f64);
        values.push(plateau);
        derivatives.push(0.0);
        second.push(0.0);
    }
    Ok(ExtendedProfile { grid, values, derivatives, plateau, problem: *problem, tau: e.tau, second, inner_len })
}

/// A shell-like domain `Ω_out ∖ B̄_α` with the hole centred at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialDomainSpec {
    ConcentricShell { dimension: u32, alpha: f64, beta: f64 },
    /// Outer ball of radius `β` centred at distance `offset` from the hole
    /// centre (along the first axis; N = 2 or 3).
    EccentricShell { dimension: u32, alpha: f64, beta: f64, offset: f64 },
    /// Planar outer boundary `ρ(θ) = ρ₀ + Σ_k a_k cos(k·q·(θ − rotation))`
    /// with `ρ₀` chosen so that the enclosed area is `πβ²`.
    StarShell { alpha: f64, beta: f64, coefficients: Vec<f64>, order: u32, rotation: f64 },
}

impl RadialDomainSpec {
    pub fn dimension(&self) -> u32 {
        match self {
            Self::ConcentricShell { dimension, .. } | Self::EccentricShell { dimension, .. } => *dimension,
            Self::StarShell { .. } => 2,
        }
    }

    pub fn inner_radius(&self) -> f64 {
        match self {
            Self::ConcentricShell { alpha, .. } | Self::EccentricShell { alpha, .. } | Self::StarShell { alpha, .. } => {
                *alpha
            }
        }
    }

    /// Radius of the ball with the same measure as `Ω_out`.
    pub fn equivalent_radius(&self) -> f64 {
        match self {
            Self::ConcentricShell { beta, .. } | Self::EccentricShell { beta, .. } | Self::StarShell { beta, .. } => {
                *beta
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        let (a, b) = (self.inner_radius(), self.equivalent_radius());
        if !(a > 0.0 && b > a && b.is_finite()) {
            return bad(format!("need 0 < α < β, got α = {a}, β = {b}"));
        }
        match self {
            Self::ConcentricShell { dimension, .. } if *dimension < 2 => bad(format!("dimension {dimension} < 2")),
            Self::EccentricShell { dimension, offset, .. } => {
                if !(*dimension == 2 || *dimension == 3) {
                    bad(format!("eccentric shells are N = 2 or 3, got {dimension}"))
                } else if !(offset.abs() < b - a) {
                    bad(format!("offset {offset} must satisfy |d| < β − α = {}", b - a))
                } else {
                    Ok(())
                }
            }
            Self::StarShell { coefficients, order, rotation, .. } => {
                if *order == 0 || !rotation.is_finite() || coefficients.iter().any(|c| !c.is_finite()) {
                    return bad("star shell needs order >= 1 and finite coefficients".into());
                }
                let s2: f64 = coefficients.iter().map(|c| c * c).sum();
                if !(b * b > 0.5 * s2) {
                    return bad("coefficients too large for the prescribed area".into());
                }
                let rho0 = self.star_constant();
                let amp: f64 = coefficients.iter().map(|c| c.abs()).sum();
                if !(rho0 - amp > a) {
                    return bad(format!("boundary may touch the hole: ρ₀ − Σ|a_k| = {} ≤ α", rho0 - amp));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    // ½∫ρ²dθ = πρ₀² + (π/2)Σa_k² = πβ²
    fn star_constant(&self) -> f64 {
        match self {
            Self::StarShell { beta, coefficients, .. } => {
                (beta * beta - 0.5 * coefficients.iter().map(|c| c * c).sum::<f64>()).sqrt()
            }
            _ => f64::NAN,
        }
    }

    /// Outer boundary radius seen from the hole centre, as a function of
    /// the polar angle (N = 2) or the polar angle from the offset axis
    /// (N = 3).
    pub fn boundary_radius(&self, theta: f64) -> f64 {
        match self {
            Self::ConcentricShell { beta, .. } => *beta,
            Self::EccentricShell { beta, offset, .. } => {
                let s = offset * theta.sin();
                offset * theta.cos() + (beta * beta - s * s).sqrt()
            }
            Self::StarShell { coefficients, order, rotation, .. } => {
                let q = *order as f64;
                self.star_constant()
                    + coefficients
                        .iter()
                        .enumerate()
                        .map(|(k, a)| a * ((k + 1) as f64 * q * (theta - rotation)).cos())
                        .sum::<f64>()
            }
        }
    }

    /// Largest distance from the hole centre to the outer boundary.
    pub fn sup_radius(&self) -> f64 {
        match self {
            Self::ConcentricShell { beta, .. } => *beta,
            Self::EccentricShell { beta, offset, .. } => beta + offset.abs(),
            Self::StarShell { coefficients, .. } => {
                self.star_constant() + coefficients.iter().map(|c| c.abs()).sum::<f64>()
            }
        }
    }

    /// `|Ω|`, exact by construction.
    pub fn measure(&self) -> f64 {
        let (a, b, n) = (self.inner_radius(), self.equivalent_radius(), self.dimension());
        sphere_area(n) * (b.powi(n as i32) - a.powi(n as i32)) / n as f64
    }

    fn angular_breaks(&self) -> Vec<f64> {
        match self {
            Self::StarShell { order, rotation, .. } => {
                let q = *order as f64;
                let mut b: Vec<f64> = (0..=2 * *order)
                    .map(|k| (rotation + k as f64 * PI / q).rem_euclid(2.0 * PI))
                    .filter(|&t| t > 0.0 && t < 2.0 * PI)
                    .collect();
                b.sort_by(|x, y| x.total_cmp(y));
                b.dedup();
                b
            }
            _ => vec![PI],
        }
    }
}

/// `∫_Ω f(|x|) dx`.
pub fn radial_integral<F>(domain: &RadialDomainSpec, f: F, breaks: &[f64], cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    angular_integral(domain, f, |_| 1.0, breaks, cfg)
}

/// `∫_Ω f(|x|)·w(θ) dx` for a planar domain (or `w ≡ 1` in higher
/// dimensions, where `θ` is the polar angle from the offset axis).
pub fn angular_integral<F, W>(domain: &RadialDomainSpec, f: F, w: W, breaks: &[f64], cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    domain.validate()?;
    let n = domain.dimension();
    let alpha = domain.inner_radius();
    let radial = |r: f64| f(r) * r.powi(n as i32 - 1);
    let inner = |rho: f64| -> Result<f64> {
        let q = integrate_with_breaks(radial, alpha, rho, breaks, cfg)?;
        Ok(q.value)
    };
    match domain {
        RadialDomainSpec::ConcentricShell { beta, .. } if n != 2 => Ok(sphere_area(n) * inner(*beta)?),
        RadialDomainSpec::ConcentricShell { beta, .. } => {
            let scale = 2.0 * PI * sampled_max(&|t| w(t).abs());
            let ang = integrate_with_breaks(&w, 0.0, 2.0 * PI, &[PI], &absolute_floor(cfg, scale))?.value;
            Ok(ang * inner(*beta)?)
        }
        _ => {
            let failure = RefCell::new(None);
            let outer = |theta: f64| match inner(domain.boundary_radius(theta)) {
                Ok(v) => {
                    let jac = if n == 3 { 2.0 * PI * theta.sin() } else { w(theta) };
                    jac * v
                }
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            };
            let upper = if n == 3 { PI } else { 2.0 * PI };
            let b = if n == 3 { vec![0.5 * PI] } else { domain.angular_breaks() };
            // Weighted integrals may vanish; tolerances are then taken
            // relative to the size of the integrand.
            let radial_size = sampled_max(&|t| inner(domain.boundary_radius(t)).map_or(0.0, f64::abs));
            let angular_size = if n == 3 { 2.0 * PI } else { sampled_max(&|t| w(t).abs()) };
            let scale = upper * radial_size * angular_size;
            let q = integrate_with_breaks(outer, 0.0, upper, &b, &absolute_floor(cfg, scale))?;
            match failure.into_inner() {
                Some(e) => Err(e),
                None => Ok(q.value),
            }
        }
    }
}

fn sampled_max(f: &dyn Fn(f64) -> f64) -> f64 {
    (0..64).map(|k| f(2.0 * PI * (k as f64 + 0.5) / 64.0)).filter(|v| v.is_finite()).fold(0.0, f64::max)
}

fn absolute_floor(cfg: &QuadConfig, scale: f64) -> QuadConfig {
    QuadConfig { epsabs: cfg.epsabs.max(1e-3 * cfg.epsrel * scale), ..*cfg }
}

/// Relative tolerance for the measure check in [`weinberger_quotient`].
pub const MEASURE_TOL: f64 = 1e-6;

fn check_compatible(domain: &RadialDomainSpec, profile: &ExtendedProfile, l: u32, robin: RobinParameter) -> Result<ShellGeometry> {
    domain.validate()?;
    let p = &profile.problem;
    let g = p.geometry;
    if domain.dimension() != g.dimension || domain.inner_radius() != g.inner_radius {
        return Err(Error::InvalidParameter(format!(
            "domain (N = {}, α = {}) does not match the profile (N = {}, α = {})",
            domain.dimension(),
            domain.inner_radius(),
            g.dimension,
            g.inner_radius
        )));
    }
    if p.angular_index != l || p.robin != robin {
        return Err(Error::InvalidParameter(format!(
            "profile was generated for l = {}, h = {}, not l = {l}, h = {robin}",
            p.angular_index, p.robin
        )));
    }
    Ok(g)
}

/// The trial quotient
/// `[∫_Ω (G′² + l(l+N−2)G²/r²) dx + h α^{N−1}|S^{N−1}| G(α)²] / ∫_Ω G² dx`.
pub fn weinberger_quotient(
    domain: &RadialDomainSpec,
    profile: &ExtendedProfile,
    l: u32,
    robin: RobinParameter,
) -> Result<f64> {
    weinberger_quotient_with(domain, profile, l, robin, &QuadConfig::default())
}

pub fn weinberger_quotient_with(
    domain: &RadialDomainSpec,
    profile: &ExtendedProfile,
    l: u32,
    robin: RobinParameter,
    cfg: &QuadConfig,
) -> Result<f64> {
    let g = check_compatible(domain, profile, l, robin)?;
    let shell = ShellGeometry::new(g.dimension, g.inner_radius, g.outer_radius)?.volume();
    let breaks = [g.outer_radius];
    let measure = radial_integral(domain, |_| 1.0, &breaks, cfg)?;
    if (measure - shell).abs() > MEASURE_TOL * shell {
        return Err(Error::MeasureMismatch { domain: measure, shell });
    }
    let c = profile.problem.angular_coefficient();
    let energy = |r: f64| {
        let (v, dv) = profile.eval(r);
        dv * dv + c * v * v / (r * r)
    };
    let mass = |r: f64| profile.eval(r).0.powi(2);
    let num = radial_integral(domain, energy, &breaks, cfg)?;
    let den = radial_integral(domain, mass, &breaks, cfg)?;
    if !(den > 0.0) {
        return Err(Error::Degenerate("trial function has zero norm on the domain".into()));
    }
    let boundary = match robin {
        RobinParameter::Finite(h) => {
            h * g.inner_radius.powi(g.dimension as i32 - 1) * sphere_area(g.dimension) * profile.at_inner().powi(2)
        }
        RobinParameter::DirichletLimit => 0.0,
    };
    Ok((num + boundary) / den)
}

/// `min_r (l(l+N−2)/r² − τ)v(r)² − (l(l+N−2)/β² − τ)v(β)²` over a uniform
/// grid of `points` nodes on `[α, β]`, for the first eigenfunction.
pub fn check_long_inequality(problem: &ModeProblem, points: usize) -> Result<f64> {
    check_long_inequality_with(problem, points, &SlConfig::default())
}

pub fn check_long_inequality_with(problem: &ModeProblem, points: usize, cfg: &SlConfig) -> Result<f64> {
    if points < 2 {
        return Err(Error::InvalidParameter("need at least 2 grid points".into()));
    }
    let e = sl_eigenfunction_with(problem, 1, cfg)?;
    let c = problem.angular_coefficient();
    let g = problem.geometry;
    let (a, b) = (g.inner_radius, g.outer_radius);
    let term = |r: f64, v: f64| (c / (r * r) - e.tau) * v * v;
    let end = term(b, e.at_outer());
    let mut margin = f64::INFINITY;
    for i in 0..points {
        let r = if i == points - 1 { b } else { a + (b - a) * i as f64 / (points - 1) as f64 };
        let v = if i == points - 1 { e.at_outer() } else { e.eval(r).0 };
        margin = margin.min(term(r, v) - end);
    }
    Ok(margin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryIdentity {
    /// `∫ G² sin²(iθ) = ½∫ G²`.
    Halving,
    /// `∫ G² sin²(iθ) + ∫ G² cos²(iθ) = ∫ G²` at `i = q/2`.
    PairSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub identity: SymmetryIdentity,
    pub index: u32,
    /// `∫_Ω G² dx`.
    pub total: f64,
    /// Left-hand side of the identity.
    pub value: f64,
    /// `|value − expected| / total`.
    pub relative_deviation: f64,
    /// Largest `|∫ G² sin(iθ+nπ/2) sin(jθ+mπ/2) dx| / ∫ G²` over the
    /// mutually orthogonal pairs; `None` for the pair-sum identity.
    pub orthogonality_max: Option<f64>,
}

/// Norm identities for `G(r)·sin(iθ)`, `G(r)·cos(iθ)` on a planar domain of
/// rotational order `q = 2^κ`.
///
/// Halving is checked for `1 ≤ i ≤ q/2 − 1`, the pair sum for `i = q/2`.
/// A concentric shell has every order; `q` is then taken as the smallest
/// power of two with `i < q/2`.
pub fn symmetry_identity_check(domain: &RadialDomainSpec, profile: &ExtendedProfile, i: u32) -> Result<SymmetryReport> {
    symmetry_identity_check_with(domain, profile, i, &QuadConfig::default())
}

pub fn symmetry_identity_check_with(
    domain: &RadialDomainSpec,
    profile: &ExtendedProfile,
    i: u32,
    cfg: &QuadConfig,
) -> Result<SymmetryReport> {
    domain.validate()?;
    if domain.dimension() != 2 {
        return Err(Error::InvalidParameter("symmetry identities are planar".into()));
    }
    if i == 0 {
        return Err(Error::IndexOutOfRange("index i must be >= 1".into()));
    }
    let half = match domain {
        RadialDomainSpec::StarShell { order, .. } => {
            if !order.is_power_of_two() || *order < 2 {
                return Err(Error::InvalidParameter(format!("order {order} is not a power of two >= 2")));
            }
            order / 2
        }
        RadialDomainSpec::ConcentricShell { .. } => (i + 1).next_power_of_two(),
        RadialDomainSpec::EccentricShell { .. } => {
            return Err(Error::InvalidParameter("an eccentric shell has no rotational symmetry".into()))
        }
    };
    if i > half {
        return Err(Error::IndexOutOfRange(format!("i = {i} exceeds q/2 = {half}")));
    }
    let g = profile.problem.geometry;
    if domain.inner_radius() != g.inner_radius {
        return Err(Error::InvalidParameter("domain and profile have different holes".into()));
    }
    let breaks = [g.outer_radius];
    let mass = |r: f64| profile.eval(r).0.powi(2);
    let total = radial_integral(domain, mass, &breaks, cfg)?;
    let weighted = |w: &dyn Fn(f64) -> f64| angular_integral(domain, mass, w, &breaks, cfg);
    let fi = i as f64;
    let sin2 = weighted(&|t: f64| (fi * t).sin().powi(2))?;
    if i == half {
        let cos2 = weighted(&|t: f64| (fi * t).cos().powi(2))?;
        let value = sin2 + cos2;
        return Ok(SymmetryReport {
            identity: SymmetryIdentity::PairSum,
            index: i,
            total,
            value,
            relative_deviation: (value - total).abs() / total,
            orthogonality_max: None,
        });
    }
    let mut orth = 0.0f64;
    for (a, b, n, m) in orthogonal_pairs(half) {
        let (fa, fb) = (a as f64, b as f64);
        let (pn, pm) = (n as f64 * 0.5 * PI, m as f64 * 0.5 * PI);
        let v = weighted(&|t: f64| (fa * t + pn).sin() * (fb * t + pm).sin())?;
        orth = orth.max(v.abs() / total);
    }
    Ok(SymmetryReport {
        identity: SymmetryIdentity::Halving,
        index: i,
        total,
        value: sin2,
        relative_deviation: (sin2 - 0.5 * total).abs() / total,
        orthogonality_max: Some(orth),
    })
}

/// Index pairs `(i, j, n, m)` with `1 ≤ j ≤ i ≤ half`, `n, m ∈ {0, 1}`,
/// `m ≠ n` when `i = j`, and `i > j` when `i = half`.
pub fn orthogonal_pairs(half: u32) -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    for i in 1..=half {
        for j in 1..=i {
            if i == half && i == j {
                continue;
            }
            for n in 0..2 {
                for m in 0..2 {
                    if i == j && n == m {
                        continue;
                    }
                    out.push((i, j, n, m));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_reproduces_quintics() {
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) + 3.0 * x.powi(5);
        let dp = |x: f64| -2.0 + 1.5 * x * x + 15.0 * x.powi(4);
        let d2p = |x: f64| 3.0 * x + 60.0 * x.powi(3);
        let (x0, x1) = (0.3, 0.8);
        for x in [0.3, 0.41, 0.55, 0.8] {
            let (v, d) = quintic_hermite(x0, x1, [p(x0), dp(x0), d2p(x0)], [p(x1), dp(x1), d2p(x1)], x);
            assert!((v - p(x)).abs() < 1e-13);
            assert!((d - dp(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn pair_count() {
        // i > j: 6 pairs × 4 phases; i = j < 4: 3 × 2 phases
        assert_eq!(orthogonal_pairs(4).len(), 30);
        assert_eq!(orthogonal_pairs(1).len(), 0);
    }

    #[test]
    fn star_validation() {
        let ok = RadialDomainSpec::StarShell { alpha: 0.3, beta: 1.0, coefficients: vec![0.1], order: 8, rotation: 0.0 };
        assert!(ok.validate().is_ok());
        let touching =
            RadialDomainSpec::StarShell { alpha: 0.3, beta: 1.0, coefficients: vec![0.7], order: 8, rotation: 0.0 };
        assert!(touching.validate().is_err());
        let far = RadialDomainSpec::EccentricShell { dimension: 2, alpha: 0.3, beta: 1.0, offset: 0.7 };
        assert!(far.validate().is_err());
    }
}
