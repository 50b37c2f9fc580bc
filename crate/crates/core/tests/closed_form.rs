use std::f64::consts::PI;

use shellspec::closed_form::*;
use shellspec::radial_sl::{count_eigenvalues_below, sl_eigenvalue, ModeProblem, RobinParameter, ShellGeometry};
use shellspec::specfun::jprime_zero;

const FIN: fn(f64) -> RobinParameter = RobinParameter::Finite;
const DIR: RobinParameter = RobinParameter::DirichletLimit;

fn annulus() -> ShellGeometry {
    ShellGeometry::new(2, 1.0, 15.0).unwrap()
}

#[test]
fn reference_roots() {
    let g = annulus();
    let t11 = crossproduct_root(1, 1, &g, FIN(-0.8)).unwrap();
    let t02 = crossproduct_root(0, 1, &g, FIN(-0.8)).unwrap();
    assert!((t11 - 0.0126485).abs() < 1e-7);
    assert!((t02 - 0.0100829).abs() < 1e-7);
    assert!((t11 - 0.012648496170874974).abs() < 1e-10 * t11);
    assert!((t02 - 0.010082857283191242).abs() < 1e-10 * t02);
}

#[test]
fn cross_product_vanishes_at_roots_and_changes_sign() {
    let g = annulus();
    for (l, tau) in [(1u32, 0.012648496170874974), (0, 0.010082857283191242)] {
        let b0 = crossproduct(l, tau, &g, FIN(-0.8)).unwrap();
        let lo = crossproduct(l, 0.9 * tau, &g, FIN(-0.8)).unwrap();
        let hi = crossproduct(l, 1.1 * tau, &g, FIN(-0.8)).unwrap();
        assert!(lo * hi < 0.0);
        assert!(b0.abs() < 1e-8 * lo.abs().max(hi.abs()));
    }
}

#[test]
fn agrees_with_shooting_solver() {
    for g in [annulus(), ShellGeometry::new(2, 0.4, 1.0).unwrap()] {
        for h in [FIN(-2.0), FIN(-0.8), FIN(0.5), DIR] {
            for l in 0..=4u32 {
                let p = ModeProblem::new(g, l, h);
                let offset = count_eigenvalues_below(&p, EPS0).unwrap();
                let roots = crossproduct_roots(l, 4, &g, h).unwrap();
                for (k, r) in roots.iter().enumerate() {
                    let t = sl_eigenvalue(&p, k + 1 + offset).unwrap();
                    assert!((r - t).abs() < 1e-8 * t.abs(), "{g:?} {h:?} l={l} k={}: {r} vs {t}", k + 1);
                }
            }
        }
    }
}

#[test]
fn neumann_ground_state_is_skipped() {
    // τ_{0,1} = 0 lies below EPS0; the first root is τ_{0,2}.
    let g = ShellGeometry::new(2, 0.5, 1.0).unwrap();
    let r = crossproduct_root(0, 1, &g, FIN(0.0)).unwrap();
    let t = sl_eigenvalue(&ModeProblem::new(g, 0, FIN(0.0)), 2).unwrap();
    assert!((r - t).abs() < 1e-8 * t);
}

#[test]
fn disk_values() {
    let d = disk_neumann_spectrum(1.0, 6).unwrap();
    let mu = expand_multiplicities(&d, 6);
    assert_eq!(mu[0], 0.0);
    assert!((mu[1] - 3.38997).abs() < 1e-4);
    assert_eq!(mu[1], jprime_zero(1, 1).unwrap().powi(2));
    assert_eq!(mu[1], mu[2]);
    for e in &d {
        if let ModelMode::Disk { l, .. } = e.mode {
            assert_eq!(e.multiplicity, if l == 0 { 1 } else { 2 });
        }
    }
    let small = expand_multiplicities(&disk_neumann_spectrum(1.0 / PI.sqrt(), 5).unwrap(), 5);
    assert!((small[1] - 10.6499).abs() < 1e-3);
    assert!((small[3] - 29.3059).abs() < 1e-3);
    assert_eq!(small[3], small[4]);
}

#[test]
fn disk_enumeration_is_complete() {
    // brute force over a generous index box
    let mut all = vec![0.0];
    for l in 0..20u32 {
        for z in shellspec::specfun::jprime_zeros(l, 20).unwrap() {
            all.extend(std::iter::repeat(z * z).take(if l == 0 { 1 } else { 2 }));
        }
    }
    all.sort_by(|a, b| a.total_cmp(b));
    let mu = expand_multiplicities(&disk_neumann_spectrum(1.0, 30).unwrap(), 30);
    assert_eq!(mu.len(), 30);
    for (a, b) in mu.iter().zip(&all) {
        assert_eq!(a, b);
    }
}

#[test]
fn rectangle_values() {
    let r = rectangle_neumann_spectrum(3f64.sqrt(), 5).unwrap();
    assert_eq!(r[0].value, 0.0);
    let rel = |a: f64, b: f64| (a - b).abs() / b;
    assert!(rel(r[2].value, 4.0 * PI * PI / 3.0) < 1e-12);
    assert!(rel(r[3].value, 3.0 * PI * PI) < 1e-12);
    assert!((r[2].value - 13.1594).abs() < 1e-4);
    assert!((r[3].value - 29.6088).abs() < 1e-4);
    let sq = rectangle_neumann_spectrum(1.0, 5).unwrap();
    assert!(rel(sq[4].value, 4.0 * PI * PI) < 1e-12);
    assert_eq!(sq[1].value, sq[2].value);
}

#[test]
fn rectangle_congruence() {
    for a in [0.3, 1.7, 2.5] {
        let x = rectangle_neumann_spectrum(a, 20).unwrap();
        let y = rectangle_neumann_spectrum(1.0 / a, 20).unwrap();
        for (p, q) in x.iter().zip(&y) {
            assert!((p.value - q.value).abs() <= 1e-12 * p.value.max(1.0));
        }
    }
}

#[test]
fn segment_values() {
    let s = segment_dirichlet_spectrum(0.5, 3).unwrap();
    assert!((s[0].value - PI * PI).abs() < 1e-12);
    let short = segment_dirichlet_spectrum(0.01, 1).unwrap()[0].value;
    assert!(short > 1e4);
}
