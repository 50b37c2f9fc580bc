use std::f64::consts::PI;

use rayon::prelude::*;
use shellspec::closed_form::{disk_neumann_spectrum, expand_multiplicities, rectangle_neumann_spectrum};
use shellspec::counterexamples::{verify_central_symmetry_counterexample, verify_order_symmetry_counterexamples, Relation};
use shellspec::radial_sl::{
    classify_profile, sl_eigenfunction, sl_eigenvalue, tau_h_derivative, ModeProblem, ProfileClass, RobinParameter,
    ShellGeometry,
};
use shellspec::shell_spectrum::{
    assemble_spectrum, radial_eigenvalue, second_eigenfunction_is_radial, RadialVerdict, SpectrumMethod,
};
use shellspec::thresholds::{find_h0, find_h1};
use shellspec::trial_bounds::{
    check_long_inequality, extend_profile, symmetry_identity_check, weinberger_quotient, RadialDomainSpec,
    SymmetryIdentity,
};
use shellspec::Result;

use crate::oracle::{brute_force_spectrum, fd_radial_eigenvalues};
use crate::Check;

const FIN: fn(f64) -> RobinParameter = RobinParameter::Finite;
const DIR: RobinParameter = RobinParameter::DirichletLimit;

pub const REF_TAU_11: f64 = 0.0126485;
pub const REF_TAU_02: f64 = 0.0100829;

fn annulus() -> Result<ShellGeometry> {
    ShellGeometry::new(2, 1.0, 15.0)
}

fn h_label(h: RobinParameter) -> String {
    match h {
        RobinParameter::Finite(x) => format!("{x}"),
        RobinParameter::DirichletLimit => "inf".into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn c01_regression_values() -> Result<Check> {
    let g = annulus()?;
    let cfg = Default::default();
    let p11 = ModeProblem::new(g, 1, FIN(-0.8));
    let p02 = ModeProblem::new(g, 0, FIN(-0.8));
    let sl11 = radial_eigenvalue(&p11, 1, SpectrumMethod::Sl, &cfg)?;
    let sl02 = radial_eigenvalue(&p02, 2, SpectrumMethod::Sl, &cfg)?;
    let be11 = radial_eigenvalue(&p11, 1, SpectrumMethod::Bessel, &cfg)?;
    let be02 = radial_eigenvalue(&p02, 2, SpectrumMethod::Bessel, &cfg)?;
    let ref_ok = [sl11, be11].iter().all(|t| (t - REF_TAU_11).abs() < 1e-5)
        && [sl02, be02].iter().all(|t| (t - REF_TAU_02).abs() < 1e-5);
    let agree = rel(sl11, be11).max(rel(sl02, be02));
    Ok(Check::new(
        ref_ok && agree < 1e-8,
        format!("tau_11 = {sl11:.7} (sl) {be11:.7} (bessel); tau_02 = {sl02:.7} (sl) {be02:.7} (bessel); method agreement {agree:.1e}"),
    ))
}

pub fn c02_radial_verdict() -> Result<Check> {
    let g = annulus()?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (h, want) in [(FIN(-0.8), RadialVerdict::Radial), (FIN(0.0), RadialVerdict::Nonradial), (DIR, RadialVerdict::Nonradial)] {
        let r = second_eigenfunction_is_radial(&g, h)?;
        ok &= r.verdict == want;
        parts.push(format!("h={}: {:?} (margin {:.3e})", h_label(h), r.verdict, r.margin));
    }
    Ok(Check::new(ok, parts.join("; ")))
}

pub const SWEEP_RANGE: (f64, f64) = (-1.01, 0.5);
pub const SWEEP_POINTS: usize = 200;

/// `(h, τ_{0,2}, τ_{1,1})` on a uniform sweep over `range`.
pub fn h_sweep(range: (f64, f64), points: usize) -> Result<Vec<(f64, f64, f64)>> {
    let g = annulus()?;
    let points = points.max(2);
    (0..points)
        .into_par_iter()
        .map(|i| {
            let h = if i == points - 1 { range.1 } else { range.0 + (range.1 - range.0) * i as f64 / (points - 1) as f64 };
            let t02 = sl_eigenvalue(&ModeProblem::new(g, 0, FIN(h)), 2)?;
            let t11 = sl_eigenvalue(&ModeProblem::new(g, 1, FIN(h)), 1)?;
            Ok((h, t02, t11))
        })
        .collect()
}

/// Grid intervals `(h_i, h_{i+1})` across which `τ_{0,2} − τ_{1,1}` changes sign.
pub fn sign_changes(rows: &[(f64, f64, f64)]) -> Vec<(f64, f64)> {
    rows.windows(2)
        .filter(|w| (w[0].1 - w[0].2).signum() != (w[1].1 - w[1].2).signum())
        .map(|w| (w[0].0, w[1].0))
        .collect()
}

pub fn c03_sweep_crossings() -> Result<Check> {
    let rows = h_sweep(SWEEP_RANGE, SWEEP_POINTS)?;
    let inc02 = rows.windows(2).all(|w| w[1].1 > w[0].1);
    let inc11 = rows.windows(2).all(|w| w[1].2 > w[0].2);
    let changes = sign_changes(&rows);
    let located = changes.len() == 1 && changes[0].0 >= -0.8 && changes[0].1 <= 0.0;
    let list: Vec<String> = changes.iter().map(|(a, b)| format!("({a:.4}, {b:.4})")).collect();
    Ok(Check::new(
        inc02 && inc11 && located,
        format!(
            "tau_02 increasing: {inc02}; tau_11 increasing: {inc11}; {} sign change(s) of tau_02 - tau_11 in {}",
            changes.len(),
            list.join(" ")
        ),
    ))
}

pub fn c04_closed_forms() -> Result<Check> {
    let unit = expand_multiplicities(&disk_neumann_spectrum(1.0, 2)?, 2)[1];
    let disk = expand_multiplicities(&disk_neumann_spectrum(1.0 / PI.sqrt(), 4)?, 4);
    let long = rectangle_neumann_spectrum(3f64.sqrt(), 4)?;
    let square = rectangle_neumann_spectrum(1.0, 5)?;
    let exact = |x: f64, y: f64| rel(x, y) < 1e-12;
    let ok = (unit - 3.38997).abs() < 1e-4
        && (disk[1] - 10.6499).abs() < 1e-3
        && (disk[3] - 29.3059).abs() < 1e-3
        && exact(long[2].value, 4.0 * PI * PI / 3.0)
        && exact(long[3].value, 3.0 * PI * PI)
        && exact(square[4].value, 4.0 * PI * PI);
    Ok(Check::new(
        ok,
        format!(
            "mu2(B1) = {unit:.6}; mu2, mu4 of unit-area disk = {:.5}, {:.5}; mu3, mu4 of sqrt3 rectangle = {:.6}, {:.6}; mu5 of square = {:.6}",
            disk[1], disk[3], long[2].value, long[3].value, square[4].value
        ),
    ))
}

pub const ALPHA_WINDOW: [f64; 5] = [0.2, 0.3, 0.4, 0.5, 0.6];

pub fn c05_central_symmetry() -> Result<Check> {
    let reports = verify_central_symmetry_counterexample(&ALPHA_WINDOW)?;
    let ok = reports.len() == ALPHA_WINDOW.len() && reports.iter().all(|r| r.relation == Relation::Greater && r.margin > 0.0);
    let margins: Vec<String> = reports.iter().map(|r| format!("{}: {} {:.5}", r.parameters[0].1, r.relation, r.margin)).collect();
    Ok(Check::new(ok, format!("alpha {}", margins.join(", "))))
}

pub fn c06_rectangles() -> Result<Check> {
    let cited = [13.1594 - 10.6499, 29.6088 - 29.3059, 39.4784 - 29.3059];
    let reports = verify_order_symmetry_counterexamples()?;
    let ok = reports.len() == 3
        && reports.iter().zip(cited).all(|(r, c)| r.relation == Relation::Greater && (r.margin - c).abs() < 1e-3);
    let parts: Vec<String> = reports.iter().map(|r| format!("{} {} ({:.4})", r.label, r.relation, r.margin)).collect();
    Ok(Check::new(ok, parts.join("; ")))
}

pub fn c07_h_derivative() -> Result<Check> {
    let cases: Vec<(u32, u32, f64)> = [2u32, 3]
        .iter()
        .flat_map(|&n| (0..=2u32).flat_map(move |l| [-0.8, 0.5].map(move |h| (n, l, h))))
        .collect();
    let step = 1e-3;
    let devs: Vec<f64> = cases
        .par_iter()
        .map(|&(n, l, h)| {
            let g = ShellGeometry::new(n, 0.5, 1.0)?;
            let p = ModeProblem::new(g, l, FIN(h));
            let exact = tau_h_derivative(&p, 1)?;
            let up = sl_eigenvalue(&p.with_robin(FIN(h + step)), 1)?;
            let down = sl_eigenvalue(&p.with_robin(FIN(h - step)), 1)?;
            Ok(rel((up - down) / (2.0 * step), exact))
        })
        .collect::<Result<_>>()?;
    let worst = devs.iter().cloned().fold(0.0, f64::max);
    Ok(Check::new(worst < 1e-4, format!("{} problems, worst relative deviation {worst:.2e}", cases.len())))
}

pub fn c08_ordering_and_signs() -> Result<Check> {
    let geoms = [annulus()?, ShellGeometry::new(3, 0.5, 1.0)?];
    let mut detail = Vec::new();
    let mut ok = true;

    let hs = [FIN(-10.0), FIN(-0.8), FIN(0.0), FIN(1.0), DIR];
    let mut min02 = f64::INFINITY;
    for g in geoms {
        for h in hs {
            min02 = min02.min(sl_eigenvalue(&ModeProblem::new(g, 0, h), 2)?);
        }
    }
    ok &= min02 > 0.0;
    detail.push(format!("min tau_02 = {min02:.4e}"));

    let grid: Vec<(ShellGeometry, RobinParameter)> = geoms.iter().flat_map(|&g| hs.map(|h| (g, h))).collect();
    let tables: Vec<Vec<Vec<f64>>> = grid
        .par_iter()
        .map(|&(g, h)| {
            (0..=4u32)
                .map(|l| (1..=4).map(|j| sl_eigenvalue(&ModeProblem::new(g, l, h), j)).collect::<Result<Vec<f64>>>())
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows = tables.iter().all(|t| t.iter().all(|row| row.windows(2).all(|w| w[0] < w[1])));
    let cols = tables.iter().all(|t| (0..4).all(|j| t.windows(2).all(|w| w[0][j] < w[1][j])));
    ok &= rows && cols;
    detail.push(format!("rows increasing in j: {rows}; columns increasing in l: {cols}"));

    let mut worst_zero: f64 = 0.0;
    let mut signs = true;
    for g in geoms {
        let base = ModeProblem::new(g, 0, FIN(0.0));
        worst_zero = worst_zero.max(sl_eigenvalue(&base, 1)?.abs());
        for h in [-10.0, -0.8, -0.01, 0.01, 1.0, 50.0] {
            let t = sl_eigenvalue(&base.with_robin(FIN(h)), 1)?;
            signs &= t.signum() == h.signum();
        }
        signs &= sl_eigenvalue(&base.with_robin(DIR), 1)? > 0.0;
    }
    ok &= worst_zero < 1e-10 && signs;
    detail.push(format!("|tau_01(0)| = {worst_zero:.1e}; sign(tau_01) = sign(h): {signs}"));
    Ok(Check::new(ok, detail.join("; ")))
}

#[derive(Debug, Clone)]
struct BoundCase {
    domain: RadialDomainSpec,
    geometry: ShellGeometry,
    eccentric: bool,
    concentric: bool,
}

fn bound_cases() -> Result<Vec<BoundCase>> {
    let mut out = Vec::new();
    for (n, a, b, fracs) in [(2u32, 0.3, 1.0, [0.05, 0.3, 0.9]), (3, 0.5, 1.0, [0.1, 0.3, 0.9])] {
        let geometry = ShellGeometry::new(n, a, b)?;
        for f in fracs {
            let domain = RadialDomainSpec::EccentricShell { dimension: n, alpha: a, beta: b, offset: f * (b - a) };
            out.push(BoundCase { domain, geometry, eccentric: true, concentric: false });
        }
        out.push(BoundCase {
            domain: RadialDomainSpec::ConcentricShell { dimension: n, alpha: a, beta: b },
            geometry,
            eccentric: false,
            concentric: true,
        });
    }
    let geometry = ShellGeometry::new(2, 0.3, 1.0)?;
    for (coefficients, order) in [(vec![0.1, 0.03], 4u32), (vec![0.12, -0.04], 8)] {
        let domain = RadialDomainSpec::StarShell { alpha: 0.3, beta: 1.0, coefficients, order, rotation: 0.0 };
        out.push(BoundCase { domain, geometry, eccentric: false, concentric: false });
    }
    Ok(out)
}

pub fn c09_trial_bound() -> Result<Check> {
    let hs = [FIN(-2.0), FIN(-0.8), FIN(0.0), FIN(0.5), DIR];
    let mut jobs = Vec::new();
    for c in bound_cases()? {
        for l in 0..=1u32 {
            for h in hs {
                jobs.push((c.clone(), l, h));
            }
        }
    }
    let results: Vec<(bool, f64, String)> = jobs
        .par_iter()
        .map(|(c, l, h)| {
            let p = ModeProblem::new(c.geometry, *l, *h);
            let r_max = c.domain.sup_radius().max(1.05 * c.geometry.outer_radius);
            let prof = extend_profile(&p, r_max)?;
            let q = weinberger_quotient(&c.domain, &prof, *l, *h)?;
            let gap = prof.tau - q;
            let trivial = *l == 0 && *h == FIN(0.0);
            let mut pass = q <= prof.tau + 1e-7;
            if c.concentric || trivial {
                pass &= gap.abs() < 1e-7;
            } else {
                pass &= gap.abs() >= 1e-7;
            }
            if c.eccentric && *h != FIN(0.0) {
                pass &= gap > 1e-6;
            }
            Ok((pass, gap, format!("{:?} l={l} h={}", c.domain, h_label(*h))))
        })
        .collect::<Result<_>>()?;
    let failures: Vec<String> =
        results.iter().filter(|r| !r.0).map(|(_, g, label)| format!("{label}: gap {g:.3e}")).collect();
    let strict_min = results
        .iter()
        .zip(&jobs)
        .filter(|(_, (c, _, h))| c.eccentric && *h != FIN(0.0))
        .map(|(r, _)| r.1)
        .fold(f64::INFINITY, f64::min);
    let mut detail = format!("{} cases, smallest eccentric gap with h != 0: {strict_min:.3e}", results.len());
    if !failures.is_empty() {
        detail.push_str(&format!("; failing: {}", failures.join(" | ")));
    }
    Ok(Check::new(failures.is_empty() && results.len() >= 40, detail))
}

pub fn c10_long_inequality() -> Result<Check> {
    let mut jobs = Vec::new();
    for (n, a, b) in [(2u32, 1.0, 15.0), (2, 0.4, 1.0), (3, 0.5, 1.0)] {
        let g = ShellGeometry::new(n, a, b)?;
        for l in 0..=4u32 {
            let mut hs = vec![FIN(-5.0), FIN(-0.8), FIN(0.0), FIN(1.0), DIR];
            if l >= 1 {
                let h0 = find_h0(&g, l)?.value.unwrap_or(-1.0);
                let eps = 1e-3 * h0.abs();
                hs.extend([FIN(h0 - eps), FIN(h0 + eps)]);
            }
            jobs.extend(hs.into_iter().map(|h| ModeProblem::new(g, l, h)));
        }
    }
    let margins: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|p| {
            let m = check_long_inequality(p, 1001)?;
            let e = sl_eigenfunction(p, 1)?;
            let b = p.geometry.outer_radius;
            let term = |v: f64| (p.angular_coefficient() / (b * b) - e.tau) * v * v;
            let end = term(e.eval(b).0) - term(e.at_outer());
            Ok((m, end))
        })
        .collect::<Result<_>>()?;
    let worst = margins.iter().map(|m| m.0).fold(f64::INFINITY, f64::min);
    let end = margins.iter().map(|m| m.1.abs()).fold(0.0, f64::max);
    // the endpoint belongs to the grid, so the minimum cannot exceed 0
    let top = margins.iter().map(|m| m.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(Check::new(
        worst >= -1e-9 && end < 1e-10 && top <= 1e-10,
        format!("{} problems, minimum margin {worst:.3e}, endpoint margin {end:.1e}", margins.len()),
    ))
}

pub fn c11_thresholds() -> Result<Check> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, a, b) in [(2u32, 1.0, 15.0), (3, 0.5, 1.0)] {
        let g = ShellGeometry::new(n, a, b)?;
        for l in 1..=2u32 {
            let r1 = find_h1(&g, l)?;
            let r0 = find_h0(&g, l)?;
            let (Some(h1), Some(h0)) = (r1.value, r0.value) else {
                ok = false;
                parts.push(format!("N={n} l={l}: missing threshold"));
                continue;
            };
            let eps = 1e-3 * h0.abs();
            let above = classify_profile(&ModeProblem::new(g, l, FIN(h0 + eps)))?;
            let below = classify_profile(&ModeProblem::new(g, l, FIN(h0 - eps)))?;
            let case_ok = r1.residual < 1e-9
                && h1 < 0.0
                && h0 >= h1
                && matches!(above, ProfileClass::DipAt(_))
                && below == ProfileClass::Decreasing;
            ok &= case_ok;
            parts.push(format!("N={n} l={l}: h1 = {h1:.6}, h0 = {h0:.6}"));
        }
    }
    Ok(Check::new(ok, parts.join("; ")))
}

pub fn c12_symmetry() -> Result<Check> {
    let (a, b) = (0.3, 1.0);
    let dom = RadialDomainSpec::StarShell { alpha: a, beta: b, coefficients: vec![0.12, -0.04], order: 8, rotation: 0.0 };
    let p = ModeProblem::new(ShellGeometry::new(2, a, b)?, 4, FIN(-0.8));
    let prof = extend_profile(&p, dom.sup_radius())?;
    let reports = (1..=4u32).into_par_iter().map(|i| symmetry_identity_check(&dom, &prof, i)).collect::<Result<Vec<_>>>()?;
    let halving = reports[..3].iter().all(|r| r.identity == SymmetryIdentity::Halving);
    let pair = reports[3].identity == SymmetryIdentity::PairSum;
    let dev = reports.iter().map(|r| r.relative_deviation).fold(0.0, f64::max);
    let orth = reports.iter().filter_map(|r| r.orthogonality_max).fold(0.0, f64::max);
    Ok(Check::new(
        halving && pair && dev < 1e-7 && orth < 1e-8,
        format!("halving i=1..3 and pair sum i=4: worst relative deviation {dev:.1e}; orthogonality {orth:.1e}"),
    ))
}

pub fn c13_oracles() -> Result<Check> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (g, h) in [(annulus()?, FIN(-0.8)), (ShellGeometry::new(2, 0.5, 1.0)?, FIN(0.5)), (ShellGeometry::new(2, 0.2, 1.0)?, DIR)] {
        let fast = assemble_spectrum(&g, h, 12, SpectrumMethod::Auto)?;
        let brute = brute_force_spectrum(&g, h, 12, 12, 12)?;
        let dev = fast.iter().zip(&brute).map(|(e, b)| (e.tau - b).abs() / b.abs().max(1e-12)).fold(0.0, f64::max);
        ok &= fast.len() == 12 && brute.len() == 12 && dev < 1e-8;
        parts.push(format!("K=12 at alpha={} h={}: {dev:.1e}", g.inner_radius, h_label(h)));
    }
    let g = annulus()?;
    let base = ModeProblem::new(g, 0, FIN(-0.8));
    let (fd0, fd1) = rayon::join(|| fd_radial_eigenvalues(&base, 2000, 2), || fd_radial_eigenvalues(&base.with_angular_index(1), 2000, 1));
    let (fd0, fd1) = (fd0?, fd1?);
    let sl = [sl_eigenvalue(&base, 1)?, sl_eigenvalue(&base, 2)?, sl_eigenvalue(&base.with_angular_index(1), 1)?];
    let fd = [fd0[0], fd0[1], fd1[0]];
    let dev = sl.iter().zip(&fd).map(|(s, f)| rel(*f, *s)).fold(0.0, f64::max);
    ok &= dev < 1e-4;
    parts.push(format!("finite elements (2000 nodes) vs shooting for tau_01, tau_02, tau_11: {dev:.1e}"));
    Ok(Check::new(ok, parts.join("; ")))
}
