//! Closed-form spectra: the planar annulus through Bessel cross-products,
//! the Neumann disk, the Neumann rectangle of unit area and the Dirichlet
//! segment.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::radial_sl::{RobinParameter, ShellGeometry};
use crate::roots;
use crate::specfun::{bessel_jy, jprime_zeros};

/// Cross-products are only evaluated for `τ > EPS0`; smaller eigenvalues
/// belong to the shooting solver.
pub const EPS0: f64 = 1e-8;

/// Largest `τ` the cross-product root scan will reach.
pub const CROSSPRODUCT_TAU_CEILING: f64 = 1e8;

/// Which closed form an entry came from, with its mode labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelMode {
    /// `(j′_{l,k}/R)²`; the constant mode is `l = 0, k = 0`.
    Disk { l: u32, k: u32 },
    /// `π²k²/a² + π²m²a²`.
    Rectangle { k: u32, m: u32 },
    /// `(mπ/2L)²`.
    Segment { m: u32 },
    /// `τ_{l,j}` of a shell.
    Shell { l: u32, j: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpectrumEntry {
    pub value: f64,
    pub mode: ModelMode,
    pub multiplicity: u32,
}

/// Eigenvalues repeated according to multiplicity, first `count` of them.
pub fn expand_multiplicities(entries: &[ModelSpectrumEntry], count: usize) -> Vec<f64> {
    entries
        .iter()
        .flat_map(|e| std::iter::repeat(e.value).take(e.multiplicity as usize))
        .take(count)
        .collect()
}

fn sort_entries(entries: &mut [ModelSpectrumEntry]) {
    entries.sort_by(|a, b| a.value.total_cmp(&b.value).then(mode_key(&a.mode).cmp(&mode_key(&b.mode))));
}

fn mode_key(m: &ModelMode) -> (u8, u32, u32) {
    match *m {
        ModelMode::Disk { l, k } => (0, l, k),
        ModelMode::Rectangle { k, m } => (1, k, m),
        ModelMode::Segment { m } => (2, m, 0),
        ModelMode::Shell { l, j } => (3, l, j),
    }
}

fn check_planar(geometry: &ShellGeometry) -> Result<()> {
    if geometry.dimension != 2 {
        return Err(Error::Domain(format!(
            "Bessel cross-products describe N = 2 only, got N = {}",
            geometry.dimension
        )));
    }
    Ok(())
}

fn crossproduct_at(l: u32, s: f64, g: &ShellGeometry, robin: RobinParameter) -> Result<f64> {
    let (ja, ya) = bessel_jy(l, s * g.inner_radius)?;
    let (jb, yb) = bessel_jy(l, s * g.outer_radius)?;
    Ok(match robin {
        RobinParameter::Finite(h) => {
            s * yb.derivative * (s * ja.derivative - h * ja.value)
                - s * jb.derivative * (s * ya.derivative - h * ya.value)
        }
        RobinParameter::DirichletLimit => s * yb.derivative * ja.value - s * jb.derivative * ya.value,
    })
}

/// `B_l(τ)`, whose zeros in `τ > 0` are the annulus eigenvalues `τ_{l,j}`.
/// For the Dirichlet limit this is the coefficient of `−h`.
pub fn crossproduct(l: u32, tau: f64, geometry: &ShellGeometry, robin: RobinParameter) -> Result<f64> {
    check_planar(geometry)?;
    if !(tau > EPS0) {
        return Err(Error::Domain(format!("cross-product needs τ > {EPS0}, got {tau}")));
    }
    crossproduct_at(l, tau.sqrt(), geometry, robin)
}

/// The first `count` zeros of `B_l` in `(EPS0, ∞)`, increasing.
///
/// The scan runs in `s = √τ` with a step well below the zero spacing
/// `≈ π/(β−α)`, geometric near the origin.
pub fn crossproduct_roots(l: u32, count: usize, geometry: &ShellGeometry, robin: RobinParameter) -> Result<Vec<f64>> {
    crossproduct_roots_until(l, count, f64::INFINITY, geometry, robin)
}

/// Zeros of `B_l` in `(EPS0, tau_max]`, at most `count` of them.
pub fn crossproduct_roots_until(
    l: u32,
    count: usize,
    tau_max: f64,
    geometry: &ShellGeometry,
    robin: RobinParameter,
) -> Result<Vec<f64>> {
    check_planar(geometry)?;
    let g = *geometry;
    let f = |s: f64| crossproduct_at(l, s, &g, robin);
    let spacing = PI / (16.0 * (g.outer_radius - g.inner_radius));
    let s_ceiling = CROSSPRODUCT_TAU_CEILING.sqrt();
    let s_stop = tau_max.sqrt().min(s_ceiling);
    let mut out = Vec::with_capacity(count.min(64));
    let mut a = EPS0.sqrt();
    let mut fa = f(a)?;
    while out.len() < count {
        if a >= s_stop {
            if s_stop < s_ceiling {
                break;
            }
            return Err(Error::NotFound(format!(
                "only {} cross-product zeros for l = {l} below τ = {CROSSPRODUCT_TAU_CEILING:e}",
                out.len()
            )));
        }
        let b = (a + spacing.min(0.25 * a)).min(s_stop);
        let fb = f(b)?;
        if fa * fb < 0.0 {
            let r = roots::brent(f, a, b, 1e-15 * b, 200)?;
            out.push(r.x * r.x);
        } else if fb == 0.0 {
            out.push(b * b);
        }
        a = b;
        fa = fb;
    }
    if tau_max.is_finite() {
        out.retain(|&t| t <= tau_max);
    }
    Ok(out)
}

/// The `k`-th (1-based) zero of `B_l` in `(EPS0, ∞)`.
pub fn crossproduct_root(l: u32, k: usize, geometry: &ShellGeometry, robin: RobinParameter) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("root index k must be >= 1".into()));
    }
    Ok(*crossproduct_roots(l, k, geometry, robin)?.last().expect("k >= 1 roots"))
}

/// Neumann eigenvalues of the disk of the given radius. Entries are
/// grouped by mode; the first `count` eigenvalues counted with
/// multiplicity are all present.
pub fn disk_neumann_spectrum(radius: f64, count: usize) -> Result<Vec<ModelSpectrumEntry>> {
    if !(radius > 0.0) || count == 0 {
        return Err(Error::InvalidParameter(format!("need radius > 0 and count ≥ 1, got {radius}, {count}")));
    }
    let mut entries = vec![ModelSpectrumEntry { value: 0.0, mode: ModelMode::Disk { l: 0, k: 0 }, multiplicity: 1 }];
    // The modes (l, 1), l < count, and (l, k), k ≤ count, each supply count
    // eigenvalues, so no other mode can be among the first count.
    for l in 0..count as u32 {
        for (i, z) in jprime_zeros(l, count)?.into_iter().enumerate() {
            entries.push(ModelSpectrumEntry {
                value: (z / radius).powi(2),
                mode: ModelMode::Disk { l, k: i as u32 + 1 },
                multiplicity: if l == 0 { 1 } else { 2 },
            });
        }
    }
    sort_entries(&mut entries);
    truncate_to_count(&mut entries, count);
    Ok(entries)
}

fn truncate_to_count(entries: &mut Vec<ModelSpectrumEntry>, count: usize) {
    let mut total = 0usize;
    let mut keep = entries.len();
    for (i, e) in entries.iter().enumerate() {
        if total >= count {
            keep = i;
            break;
        }
        total += e.multiplicity as usize;
    }
    entries.truncate(keep);
}

/// Neumann eigenvalues of `(−a/2, a/2) × (−1/(2a), 1/(2a))`.
pub fn rectangle_neumann_spectrum(a: f64, count: usize) -> Result<Vec<ModelSpectrumEntry>> {
    if !(a > 0.0) || count == 0 {
        return Err(Error::InvalidParameter(format!("need a > 0 and count ≥ 1, got {a}, {count}")));
    }
    let a2 = a * a;
    let mut entries = Vec::with_capacity(count * count);
    for k in 0..count as u32 {
        for m in 0..count as u32 {
            let (kf, mf) = (k as f64, m as f64);
            entries.push(ModelSpectrumEntry {
                value: PI * PI * (kf * kf / a2 + mf * mf * a2),
                mode: ModelMode::Rectangle { k, m },
                multiplicity: 1,
            });
        }
    }
    sort_entries(&mut entries);
    entries.truncate(count);
    Ok(entries)
}

/// Dirichlet eigenvalues of a segment of length `2·half_length`.
pub fn segment_dirichlet_spectrum(half_length: f64, count: usize) -> Result<Vec<ModelSpectrumEntry>> {
    if !(half_length > 0.0) || count == 0 {
        return Err(Error::InvalidParameter(format!(
            "need half_length > 0 and count ≥ 1, got {half_length}, {count}"
        )));
    }
    Ok((1..=count as u32)
        .map(|m| ModelSpectrumEntry {
            value: (m as f64 * PI / (2.0 * half_length)).powi(2),
            mode: ModelMode::Segment { m },
            multiplicity: 1,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_product_rejects_small_tau_and_other_dimensions() {
        let g = ShellGeometry::new(2, 1.0, 2.0).unwrap();
        assert!(crossproduct(0, 1e-9, &g, RobinParameter::Finite(0.0)).is_err());
        let g3 = ShellGeometry::new(3, 1.0, 2.0).unwrap();
        assert!(crossproduct(0, 1.0, &g3, RobinParameter::Finite(0.0)).is_err());
    }

    #[test]
    fn truncation_keeps_whole_groups() {
        let d = disk_neumann_spectrum(1.0, 2).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(expand_multiplicities(&d, 10).len(), 3);
    }

    #[test]
    fn segment_ratios() {
        let s = segment_dirichlet_spectrum(0.5, 4).unwrap();
        assert!((s[0].value - PI * PI).abs() < 1e-13);
        for (i, e) in s.iter().enumerate() {
            assert!((e.value / s[0].value - ((i + 1) * (i + 1)) as f64).abs() < 1e-12);
        }
    }
}
