//! The spectrum of a spherical shell as the multiplicity-weighted union of
//! the radial eigenvalues `τ_{l,j}`.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::closed_form::{crossproduct_root, crossproduct_roots_until, EPS0};
use crate::error::{Error, Result};
use crate::radial_sl::{
    count_eigenvalues_below_with, sl_eigenvalue_with, ModeProblem, RobinParameter, ShellGeometry, SlConfig,
};

/// `binom(l+N−1, N−1) − binom(l+N−3, N−1)`: the dimension of the degree-`l`
/// spherical harmonics on `S^{N−1}`.
pub fn multiplicity_lambda(l: u32, dimension: u32) -> u64 {
    let n = dimension as u64;
    let l = l as u64;
    binomial(l + n - 1, n - 1) - if l >= 2 { binomial(l + n - 3, n - 1) } else { 0 }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    /// Prüfer shooting for every eigenvalue.
    Sl,
    /// Bessel cross-product roots above `EPS0`, shooting below (N = 2 only).
    Bessel,
    /// `Bessel` for N = 2, `Sl` otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    /// 1-based global index.
    pub k: usize,
    pub tau: f64,
    pub l: u32,
    pub j: usize,
    pub multiplicity: u64,
    /// Shared by the `Λ_l` copies of one `(l, j)` pair; numbered in order of
    /// first appearance.
    pub group_id: usize,
}

/// Ceiling on the angular index scanned by [`assemble_spectrum`].
pub const MAX_ANGULAR_INDEX: u32 = 4096;

fn resolve(method: SpectrumMethod, geometry: &ShellGeometry) -> Result<SpectrumMethod> {
    match (method, geometry.dimension) {
        (SpectrumMethod::Auto, 2) | (SpectrumMethod::Bessel, 2) => Ok(SpectrumMethod::Bessel),
        (SpectrumMethod::Bessel, n) => {
            Err(Error::InvalidParameter(format!("the Bessel method needs N = 2, got N = {n}")))
        }
        _ => Ok(SpectrumMethod::Sl),
    }
}

/// All `τ_{l,j} ≤ tau_max`, increasing.
pub fn radial_eigenvalues_up_to(
    problem: &ModeProblem,
    tau_max: f64,
    method: SpectrumMethod,
    cfg: &SlConfig,
) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    match resolve(method, &problem.geometry)? {
        SpectrumMethod::Bessel => {
            let below = count_eigenvalues_below_with(problem, EPS0, cfg)?;
            for j in 1..=below {
                let t = sl_eigenvalue_with(problem, j, cfg)?;
                if t > tau_max {
                    return Ok(out);
                }
                out.push(t);
            }
            if tau_max > EPS0 {
                let g = problem.geometry;
                out.extend(crossproduct_roots_until(problem.angular_index, usize::MAX, tau_max, &g, problem.robin)?);
            }
        }
        _ => loop {
            let t = sl_eigenvalue_with(problem, out.len() + 1, cfg)?;
            if t > tau_max {
                break;
            }
            out.push(t);
        },
    }
    Ok(out)
}

/// `τ_{l,j}` by the requested method.
pub fn radial_eigenvalue(problem: &ModeProblem, j: usize, method: SpectrumMethod, cfg: &SlConfig) -> Result<f64> {
    match resolve(method, &problem.geometry)? {
        SpectrumMethod::Bessel => {
            let below = count_eigenvalues_below_with(problem, EPS0, cfg)?;
            if j <= below {
                sl_eigenvalue_with(problem, j, cfg)
            } else {
                crossproduct_root(problem.angular_index, j - below, &problem.geometry, problem.robin)
            }
        }
        _ => sl_eigenvalue_with(problem, j, cfg),
    }
}

/// The first `count` eigenvalues of the shell, counted with multiplicity.
///
/// Angular indices are scanned while the lower bound
/// `τ_{l,1} ≥ τ_{0,1} + l(l+N−2)/β²` stays below the current `count`-th
/// candidate, so the enumeration is complete. The last `(l, j)` group may be
/// cut short by the truncation to `count` entries.
pub fn assemble_spectrum(
    geometry: &ShellGeometry,
    robin: RobinParameter,
    count: usize,
    method: SpectrumMethod,
) -> Result<Vec<SpectrumEntry>> {
    assemble_spectrum_with(geometry, robin, count, method, &SlConfig::default())
}

pub fn assemble_spectrum_with(
    geometry: &ShellGeometry,
    robin: RobinParameter,
    count: usize,
    method: SpectrumMethod,
    cfg: &SlConfig,
) -> Result<Vec<SpectrumEntry>> {
    if count == 0 {
        return Err(Error::InvalidParameter("spectrum count must be >= 1".into()));
    }
    let method = resolve(method, geometry)?;
    let base = ModeProblem::new(*geometry, 0, robin);
    let beta2 = geometry.outer_radius * geometry.outer_radius;

    // l = 0 alone supplies `count` candidates.
    let mut radial0 = Vec::with_capacity(count);
    for j in 1..=count {
        radial0.push(radial_eigenvalue(&base, j, method, cfg)?);
    }
    let tau01 = radial0[0];
    let mut candidates: Vec<(f64, u32, usize)> = radial0.iter().enumerate().map(|(i, &t)| (t, 0, i + 1)).collect();
    let mut bound = kth_with_multiplicity(&mut candidates, count, geometry.dimension);

    // Fixed batch size keeps the work done independent of the thread count.
    let batch = 8u32;
    let mut l = 1u32;
    loop {
        let ls: Vec<u32> = (l..l + batch)
            .filter(|&m| tau01 + base.with_angular_index(m).angular_coefficient() / beta2 <= bound)
            .collect();
        if ls.is_empty() {
            break;
        }
        if l + batch > MAX_ANGULAR_INDEX {
            return Err(Error::ResourceLimit(format!(
                "spectrum of {count} entries needs angular index beyond {MAX_ANGULAR_INDEX}"
            )));
        }
        let found: Vec<Vec<f64>> = ls
            .par_iter()
            .map(|&m| radial_eigenvalues_up_to(&base.with_angular_index(m), bound, method, cfg))
            .collect::<Result<_>>()?;
        for (&m, taus) in ls.iter().zip(found) {
            candidates.extend(taus.into_iter().enumerate().map(|(i, t)| (t, m, i + 1)));
        }
        bound = kth_with_multiplicity(&mut candidates, count, geometry.dimension);
        l += batch;
    }

    let mut out = Vec::with_capacity(count);
    for (group_id, &(tau, l, j)) in candidates.iter().enumerate() {
        let mult = multiplicity_lambda(l, geometry.dimension);
        for _ in 0..mult {
            if out.len() == count {
                return Ok(out);
            }
            out.push(SpectrumEntry { k: out.len() + 1, tau, l, j, multiplicity: mult, group_id });
        }
    }
    Ok(out)
}

/// Sorts candidates by `(τ, l, j)` and returns the `count`-th eigenvalue
/// counted with multiplicity (or `+∞` if there are too few).
fn kth_with_multiplicity(candidates: &mut [(f64, u32, usize)], count: usize, dimension: u32) -> f64 {
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut total = 0u64;
    for &(t, l, _) in candidates.iter() {
        total += multiplicity_lambda(l, dimension);
        if total >= count as u64 {
            return t;
        }
    }
    f64::INFINITY
}

/// Where `τ_{l,1}` sits in the global spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum PositionVerdict {
    /// The chain `τ_{0,1} < τ_{1,1} < ⋯ < τ_{l,1} < τ_{0,2}` holds and
    /// `τ_{l,1}` occupies exactly these global indices.
    Range(RangeInclusive<usize>),
    /// The chain fails at the given link `(m, τ_m, τ_{m+1})`.
    NotApplicable { link: usize, lower: f64, upper: f64 },
}

pub fn position_of_first_angular(geometry: &ShellGeometry, robin: RobinParameter, l: u32) -> Result<PositionVerdict> {
    if l == 0 {
        return Err(Error::InvalidParameter("angular index must be >= 1".into()));
    }
    let cfg = SlConfig::default();
    let base = ModeProblem::new(*geometry, 0, robin);
    let mut chain: Vec<f64> = (0..=l)
        .into_par_iter()
        .map(|m| sl_eigenvalue_with(&base.with_angular_index(m), 1, &cfg))
        .collect::<Result<_>>()?;
    chain.push(sl_eigenvalue_with(&base, 2, &cfg)?);
    for (i, w) in chain.windows(2).enumerate() {
        if !(w[0] < w[1]) {
            return Ok(PositionVerdict::NotApplicable { link: i, lower: w[0], upper: w[1] });
        }
    }
    let before: u64 = 1 + (1..l).map(|m| multiplicity_lambda(m, geometry.dimension)).sum::<u64>();
    let first = before as usize + 1;
    let last = first + multiplicity_lambda(l, geometry.dimension) as usize - 1;
    Ok(PositionVerdict::Range(first..=last))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialVerdict {
    Radial,
    Nonradial,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondEigenfunctionReport {
    pub verdict: RadialVerdict,
    pub tau_02: f64,
    pub tau_11: f64,
    /// `τ_{1,1} − τ_{0,2}`; positive when the second eigenfunction is radial.
    pub margin: f64,
}

/// Tolerance below which `τ_{0,2}` and `τ_{1,1}` count as equal.
pub const RADIAL_TIE_TOL: f64 = 1e-10;

/// The second eigenvalue is `min(τ_{0,2}, τ_{1,1})`; its eigenfunction is
/// radial exactly when `τ_{0,2}` is the smaller one.
pub fn second_eigenfunction_is_radial(geometry: &ShellGeometry, robin: RobinParameter) -> Result<SecondEigenfunctionReport> {
    let cfg = SlConfig::default();
    let base = ModeProblem::new(*geometry, 0, robin);
    let (tau_02, tau_11) = rayon::join(
        || sl_eigenvalue_with(&base, 2, &cfg),
        || sl_eigenvalue_with(&base.with_angular_index(1), 1, &cfg),
    );
    let (tau_02, tau_11) = (tau_02?, tau_11?);
    let margin = tau_11 - tau_02;
    let verdict = if margin.abs() < RADIAL_TIE_TOL {
        RadialVerdict::Tie
    } else if margin > 0.0 {
        RadialVerdict::Radial
    } else {
        RadialVerdict::Nonradial
    };
    Ok(SecondEigenfunctionReport { verdict, tau_02, tau_11, margin })
}
