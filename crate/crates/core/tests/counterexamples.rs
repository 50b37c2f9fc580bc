use std::f64::consts::PI;

use shellspec::closed_form::{disk_neumann_spectrum, expand_multiplicities, segment_dirichlet_spectrum};
use shellspec::counterexamples::*;
use shellspec::radial_sl::{sl_eigenvalue, ModeProblem, RobinParameter, ShellGeometry};
use shellspec::shell_spectrum::{assemble_spectrum, SpectrumMethod};

// mpmath, 30 digits: j′_{1,1}² and Dirichlet-hole annulus roots of
// J_l(kα)Y′_l(kβ) − Y_l(kα)J′_l(kβ)
const MU2_UNIT_DISK: f64 = 3.389_957_716_671_888_7;
const ALPHA_TABLE: [(f64, f64, f64); 7] = [
    (0.05, 0.865219453305638, 1.7038341420001),
    (0.2, 1.99315513763783, 1.837674946532),
    (0.3, 3.06039367373102, 2.02556770315054),
    (0.4, 4.68785343159159, 2.31447867873889),
    (0.5, 7.4068603697785, 2.74214028470606),
    (0.6, 12.4882955039303, 3.37499449739199),
    (0.9, 236.372256083357, 8.38333886206598),
];

#[test]
fn central_symmetry_window() {
    let grid = [0.2, 0.3, 0.4, 0.5, 0.6];
    let reports = verify_central_symmetry_counterexample(&grid).unwrap();
    assert_eq!(reports.len(), grid.len());
    for (r, &a) in reports.iter().zip(&grid) {
        assert_eq!(r.parameters, vec![("alpha".to_string(), a)]);
        assert_eq!(r.relation, Relation::Greater, "{r:?}");
        assert!(r.margin > 0.0);
        assert!((r.margin - (r.lhs_value - r.rhs_value)).abs() < 1e-15);
    }
    for (r, &(a, t1, t2)) in reports.iter().zip(&ALPHA_TABLE[1..6]) {
        assert_eq!(r.parameters[0].1, a);
        let want = MU2_UNIT_DISK.min(t1) - t2;
        assert!((r.margin - want).abs() < 1e-8 * want.max(1.0), "{r:?} vs {want}");
    }
}

#[test]
fn central_symmetry_values_match_oracle() {
    for (a, t1, t2) in ALPHA_TABLE {
        let (x1, x2) = central_symmetry_values(a).unwrap();
        assert!((x1 - t1).abs() < 1e-9 * t1, "α={a}: {x1} vs {t1}");
        assert!((x2 - t2).abs() < 1e-9 * t2, "α={a}: {x2} vs {t2}");
    }
}

#[test]
fn central_symmetry_values_match_shooting() {
    for a in [0.05, 0.2, 0.6, 0.9] {
        let (t1, t2) = central_symmetry_values(a).unwrap();
        let unit = ShellGeometry::new(2, a, 1.0).unwrap();
        let wide = ShellGeometry::new(2, a, 2f64.sqrt()).unwrap();
        let d = RobinParameter::DirichletLimit;
        let s1 = sl_eigenvalue(&ModeProblem::new(unit, 0, d), 1).unwrap();
        assert!((t1 - s1).abs() < 1e-9 * s1);
        let s2 = assemble_spectrum(&wide, d, 2, SpectrumMethod::Sl).unwrap()[1].tau;
        assert!((t2 - s2).abs() < 1e-9 * s2);
    }
}

#[test]
fn reports_outside_the_window() {
    let r = verify_central_symmetry_counterexample(&[0.05, 0.9]).unwrap();
    assert_eq!(r.len(), 2);
    // no expected verdict; both happen to be '<'
    for x in &r {
        assert!(x.lhs_value <= MU2_UNIT_DISK + 1e-9);
        assert_eq!(x.relation, Relation::Less);
    }
    assert!(verify_central_symmetry_counterexample(&[1.0]).is_err());
}

#[test]
fn rectangle_and_square_comparisons() {
    let r = verify_order_symmetry_counterexamples().unwrap();
    assert_eq!(r.len(), 3);
    let cited = [(13.1594, 10.6499), (29.6088, 29.3059), (39.4784, 29.3059)];
    for (x, (l, rr)) in r.iter().zip(cited) {
        assert_eq!(x.relation, Relation::Greater);
        assert!((x.lhs_value - l).abs() < 1e-4, "{x:?}");
        assert!((x.rhs_value - rr).abs() < 1e-3, "{x:?}");
        assert!((x.margin - (l - rr)).abs() < 1e-3, "{x:?}");
    }
    assert!((r[0].lhs_value - 4.0 * PI * PI / 3.0).abs() < 1e-12);
    assert!((r[1].lhs_value - 3.0 * PI * PI).abs() < 1e-12);
    assert!((r[2].lhs_value - 4.0 * PI * PI).abs() < 1e-12);
    assert_eq!(r[1].rhs_value, r[2].rhs_value);
}

#[test]
fn dumbbell_short_neck() {
    let a = 0.4;
    let s = dumbbell_limit_spectrum(0.05, a, 10).unwrap();
    assert!(s.precondition_holds);
    assert_eq!(s.entries.len(), 10);
    assert_eq!(s.entries[0].value, 0.0);
    assert_eq!(s.entries[0].part, DumbbellPart::Disk);
    assert!((s.mu2_disk - MU2_UNIT_DISK).abs() < 1e-12);
    assert!((s.entries[1].value - s.mu2_disk.min(s.tau1_shell)).abs() < 1e-15);
    assert!(s.entries.windows(2).all(|w| w[0].value <= w[1].value));
    assert!(s.entries.iter().all(|e| e.part != DumbbellPart::Neck));
}

#[test]
fn dumbbell_long_neck_flag() {
    let a = 0.4;
    let short = dumbbell_limit_spectrum(0.05, a, 4).unwrap();
    let threshold = short.mu2_disk.max(short.tau1_shell);
    // λ₁ = (π/2l)² crosses the threshold at l* = π/(2√threshold)
    let l_star = PI / (2.0 * threshold.sqrt());
    for (l, flag) in [(0.9 * l_star, true), (1.1 * l_star, false), (3.0, false)] {
        let s = dumbbell_limit_spectrum(l, a, 4).unwrap();
        assert_eq!(s.precondition_holds, flag, "l = {l}");
        assert_eq!(s.precondition_holds, s.lambda1_neck > threshold);
    }
}

#[test]
fn dumbbell_is_a_merge_of_its_parts() {
    for (l, a, k) in [(0.05, 0.4, 12usize), (1.5, 0.2, 15), (3.0, 0.6, 20)] {
        let s = dumbbell_limit_spectrum(l, a, k).unwrap();
        let mut all = expand_multiplicities(&disk_neumann_spectrum(1.0, k).unwrap(), k);
        all.extend(segment_dirichlet_spectrum(l, k).unwrap().iter().map(|e| e.value));
        let g = ShellGeometry::new(2, a, 1.0).unwrap();
        all.extend(assemble_spectrum(&g, RobinParameter::DirichletLimit, k, SpectrumMethod::Sl).unwrap().iter().map(|e| e.tau));
        all.sort_by(|x, y| x.total_cmp(y));
        let got: Vec<f64> = s.entries.iter().map(|e| e.value).collect();
        assert_eq!(got.len(), k);
        for (x, y) in got.iter().zip(&all) {
            assert!((x - y).abs() <= 1e-9 * y.max(1.0), "{x} vs {y}");
        }
    }
}

#[test]
fn robin_small_hole_continuity() {
    let mu = expand_multiplicities(&disk_neumann_spectrum(1.0, 3).unwrap(), 3);
    let mut last = f64::INFINITY;
    for a in [1e-1, 1e-2, 1e-3] {
        let g = ShellGeometry::new(2, a, 1.0).unwrap();
        let s = assemble_spectrum(&g, RobinParameter::Finite(1.0), 2, SpectrumMethod::Auto).unwrap();
        let dev = (s[1].tau - mu[1]).abs();
        assert!(dev < last, "α = {a}: {dev} vs {last}");
        last = dev;
    }
    assert!(last < 1e-2);
}
