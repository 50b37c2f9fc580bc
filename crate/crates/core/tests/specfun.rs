use std::f64::consts::PI;

use proptest::prelude::*;
use shellspec::specfun::{bessel_j, bessel_y, jprime_zero, jprime_zeros};

/// Reference values from a 30-digit multiprecision evaluation.
const J_REF: &[(f64, f64, f64, f64)] = &[
    (0.0, 1.0, 0.765197686557966551, -0.440050585744933516),
    (1.0, 1.0, 0.440050585744933516, 0.325147100813033035),
    (0.0, 2.5, -0.0483837764681979963, -0.497094102464274038),
    (2.0, 7.3, -0.265594911883436911, 0.155336159776391233),
    (3.5, 0.7, 0.00212198358213623352, 0.0104440509556321284),
    (0.5, 12.0, -0.123588535955941944, 0.199513926165032107),
    (5.0, 30.0, -0.143240295512077077, -0.0287356177359741728),
    (8.0, 150.0, 0.0130474821201718202, 0.063740089255132224),
    (2.25, 45.5, -0.109355398574308596, 0.0464213014017979032),
    (1.0, 199.0, -0.0165066533543838404, -0.054056580591580615),
];

const Y_REF: &[(u32, f64, f64, f64)] = &[
    (0, 1.0, 0.088256964215676958, 0.781212821300288717),
    (0, 1e-3, -4.47141661137592326, 636.622167231139415),
    (1, 0.05, -12.7898551711749697, 253.81779242268217),
    (3, 2.0, -1.12778377684042779, 1.07426756106995901),
    (4, 17.5, -0.192019199354220686, -0.0154423176892529174),
    (8, 100.0, -0.067137173531197432, 0.0435490221996292237),
    (2, 0.9, -1.94590960098260283, 3.45111697528278851),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Ascending series evaluated term by term; the test-side oracle for J_0.
fn j0_series_oracle(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        term *= -(x / 2.0) * (x / 2.0) / (kf * kf);
        sum += term;
    }
    sum
}

#[test]
fn j_matches_reference_values() {
    for &(nu, x, v, d) in J_REF {
        let e = bessel_j(nu, x).unwrap();
        // relative to the oscillation envelope for large arguments
        let scale = (2.0 / (PI * x)).sqrt().min(1.0);
        assert!((e.value - v).abs() < 1e-12 * v.abs().max(scale), "J_{nu}({x}) = {} vs {v}", e.value);
        assert!(
            (e.derivative - d).abs() < 1e-12 * d.abs().max(scale),
            "J_{nu}'({x}) = {} vs {d}",
            e.derivative
        );
    }
}

#[test]
fn y_matches_reference_values() {
    for &(l, x, v, d) in Y_REF {
        let e = bessel_y(l, x).unwrap();
        assert!(rel(e.value, v) < 1e-10, "Y_{l}({x}) = {} vs {v}", e.value);
        assert!(rel(e.derivative, d) < 1e-10, "Y_{l}'({x}) = {} vs {d}", e.derivative);
    }
}

#[test]
fn j0_against_series_oracle_and_first_zero() {
    assert!((bessel_j(0.0, 1.0).unwrap().value - 0.7651976866).abs() < 1e-10);
    assert!((bessel_j(0.0, 1.0).unwrap().value - j0_series_oracle(1.0)).abs() < 1e-15);
    // first zero of J_0 by bisection on the oracle
    let (mut a, mut b) = (2.0, 3.0);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if j0_series_oracle(m) > 0.0 { a = m } else { b = m }
    }
    assert!((a - 2.404_825_6).abs() < 1e-7);
    assert!(bessel_j(0.0, a).unwrap().value.abs() < 1e-14);
}

#[test]
fn y0_wronskian_and_log_blowup() {
    let j = bessel_j(0.0, 1.0).unwrap();
    let y = bessel_y(0, 1.0).unwrap();
    assert!((y.value - 0.0882569642).abs() < 1e-10);
    assert!((j.value * y.derivative - j.derivative * y.value - 2.0 / PI).abs() < 1e-14);
    assert!(bessel_y(0, 1e-3).unwrap().value < -4.0);
}

#[test]
fn wronskian_on_log_grid() {
    for nu in 0..=8u32 {
        for i in 0..=80 {
            let x = 10f64.powf(-2.0 + 4.0 * i as f64 / 80.0);
            let j = bessel_j(nu as f64, x).unwrap();
            let y = bessel_y(nu, x).unwrap();
            let w = j.value * y.derivative - j.derivative * y.value;
            let resid = (w - 2.0 / (PI * x)).abs() * PI * x / 2.0;
            assert!(resid < 1e-10, "nu={nu} x={x} residual {resid:e}");
        }
    }
}

#[test]
fn jprime_zeros_match_reference() {
    let reference: [(u32, [f64; 4]); 4] = [
        (0, [3.83170597020751232, 7.01558666981561875, 10.1734681350627221, 13.3236919363142231]),
        (1, [1.8411837813406593, 5.33144277352503264, 8.53631636634628583, 11.7060049025920641]),
        (2, [3.05423692822714032, 6.70613319415845915, 9.96946782308759579, 13.1703708560161231]),
        (3, [4.2011889412105285, 8.01523659837595221, 11.3459243107430065, 14.5858482861670282]),
    ];
    for (l, zs) in reference {
        let got = jprime_zeros(l, 4).unwrap();
        for (g, z) in got.iter().zip(zs) {
            assert!((g - z).abs() < 1e-11, "l={l}: {g} vs {z}");
            assert!(bessel_j(l as f64, *g).unwrap().derivative.abs() < 1e-12);
        }
    }
    let z = jprime_zero(1, 1).unwrap();
    assert!((z * z - 3.38996).abs() < 1e-5);
}

#[test]
fn jprime_zeros_interlace_with_j_zeros() {
    // Between consecutive zeros of J_l' lies exactly one zero of J_l.
    for l in 0..5u32 {
        let zs = jprime_zeros(l, 6).unwrap();
        for w in zs.windows(2) {
            let a = bessel_j(l as f64, w[0]).unwrap().value;
            let b = bessel_j(l as f64, w[1]).unwrap().value;
            assert!(a * b < 0.0);
            assert!(w[1] > w[0]);
        }
    }
}

proptest! {
    #[test]
    fn derivative_matches_central_difference(nu in 0.0f64..8.0, x in 0.05f64..60.0) {
        let h = 1e-6;
        let d = bessel_j(nu, x).unwrap().derivative;
        let fd = (bessel_j(nu, x + h).unwrap().value - bessel_j(nu, x - h).unwrap().value) / (2.0 * h);
        // near a zero of J' compare against the envelope instead
        let scale = d.abs().max(bessel_j(nu, x).unwrap().value.abs()).max(1e-3);
        prop_assert!((d - fd).abs() < 1e-6 * scale);
    }

    #[test]
    fn recurrence_consistency(nu in 1.0f64..10.0, x in 0.01f64..150.0) {
        let j = bessel_j(nu, x).unwrap();
        let jm = bessel_j(nu - 1.0, x).unwrap();
        let rhs = jm.value - nu / x * j.value;
        let scale = j.derivative.abs().max(jm.value.abs()).max(1e-300);
        prop_assert!((j.derivative - rhs).abs() < 1e-10 * scale);
    }
}
