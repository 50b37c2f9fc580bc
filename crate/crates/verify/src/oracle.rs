//! Oracles that share no code path with the shooting solver.

use rayon::prelude::*;
use shellspec::radial_sl::{sl_eigenvalue, ModeProblem, RobinParameter, ShellGeometry};
use shellspec::shell_spectrum::multiplicity_lambda;
use shellspec::{Error, Result};

/// Symmetric tridiagonal matrix stored as diagonal and off-diagonal.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x`, from the pivots of
    /// `A − xI = LDLᵀ`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] / d };
            d = self.diag[i] - x - coupling;
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (1-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.diag.len() {
            return Err(Error::IndexOutOfRange(format!("eigenvalue {k} of a {}x{} matrix", self.diag.len(), self.diag.len())));
        }
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn power_integral(e: i32, r0: f64, r1: f64) -> f64 {
    if e == -1 {
        (r1 / r0).ln()
    } else {
        let p = (e + 1) as f64;
        (r1.powf(p) - r0.powf(p)) / p
    }
}

/// Linear finite elements with lumped mass on a uniform grid of `points`
/// nodes, reduced to a symmetric tridiagonal standard problem.
pub fn fd_radial_matrix(problem: &ModeProblem, points: usize) -> Result<Tridiagonal> {
    if points < 3 {
        return Err(Error::InvalidParameter("need at least 3 grid points".into()));
    }
    let g = problem.geometry;
    let (a, b) = (g.inner_radius, g.outer_radius);
    let n = g.dimension as i32;
    let c = problem.angular_coefficient();
    let dx = (b - a) / (points - 1) as f64;
    let r: Vec<f64> = (0..points).map(|i| if i == points - 1 { b } else { a + dx * i as f64 }).collect();

    let mut stiff_diag = vec![0.0; points];
    let mut stiff_off = vec![0.0; points - 1];
    let mut mass = vec![0.0; points];
    for i in 0..points - 1 {
        let (r0, r1) = (r[i], r[i + 1]);
        let w = r1 - r0;
        let p = power_integral(n - 1, r0, r1) / (w * w);
        stiff_diag[i] += p;
        stiff_diag[i + 1] += p;
        stiff_off[i] = -p;
        let m = 0.5 * (r0 + r1);
        mass[i] += power_integral(n - 1, r0, m);
        mass[i + 1] += power_integral(n - 1, m, r1);
        if c != 0.0 {
            stiff_diag[i] += c * power_integral(n - 3, r0, m);
            stiff_diag[i + 1] += c * power_integral(n - 3, m, r1);
        }
    }
    let first = match problem.robin {
        RobinParameter::Finite(h) => {
            stiff_diag[0] += h * a.powi(n - 1);
            0
        }
        RobinParameter::DirichletLimit => 1,
    };
    let s: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let diag = (first..points).map(|i| stiff_diag[i] * s[i] * s[i]).collect();
    let off = (first..points - 1).map(|i| stiff_off[i] * s[i] * s[i + 1]).collect();
    Ok(Tridiagonal { diag, off })
}

/// `τ_{l,j}` for `j = 1..=count` from the discretized problem.
pub fn fd_radial_eigenvalues(problem: &ModeProblem, points: usize, count: usize) -> Result<Vec<f64>> {
    let m = fd_radial_matrix(problem, points)?;
    (1..=count).map(|k| m.eigenvalue(k)).collect()
}

/// The first `count` shell eigenvalues by enumerating every `τ_{l,j}` with
/// `l ≤ max_l`, `j ≤ max_j`, repeating each by its multiplicity and sorting.
pub fn brute_force_spectrum(
    geometry: &ShellGeometry,
    robin: RobinParameter,
    count: usize,
    max_l: u32,
    max_j: usize,
) -> Result<Vec<f64>> {
    let pairs: Vec<(u32, usize)> = (0..=max_l).flat_map(|l| (1..=max_j).map(move |j| (l, j))).collect();
    let taus: Vec<(u32, f64)> = pairs
        .par_iter()
        .map(|&(l, j)| Ok((l, sl_eigenvalue(&ModeProblem::new(*geometry, l, robin), j)?)))
        .collect::<Result<_>>()?;
    let mut all: Vec<f64> = taus
        .iter()
        .flat_map(|&(l, t)| std::iter::repeat(t).take(multiplicity_lambda(l, geometry.dimension) as usize))
        .collect();
    all.sort_by(|x, y| x.total_cmp(y));
    all.truncate(count);
    Ok(all)
}
