//! Cross-checks against brute-force computations that share no code with
//! the library's own routes.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use randtri_core::frame::{expected_area_frame, side_case_value, SideCase};
use randtri_core::lattice::enumerate_mean_area;
use randtri_core::quadrature::QuadConfig;

type Q = Ratio<i64>;

/// Point at perimeter position `t` in `[0, 4)`, walking counter-clockwise
/// from the origin.
fn perimeter(t: Q) -> (Q, Q) {
    let one = Q::from_integer(1);
    let side = t.floor().to_integer();
    let f = t - t.floor();
    match side {
        0 => (f, Q::zero()),
        1 => (one, f),
        2 => (one - f, one),
        _ => (Q::zero(), one - f),
    }
}

fn shoelace(p: &[(Q, Q); 3]) -> Q {
    let [(x1, y1), (x2, y2), (x3, y3)] = *p;
    ((x1 * y2 - x2 * y1) + (x2 * y3 - x3 * y2) + (x3 * y1 - x1 * y3)).abs() / 2
}

fn brute_lattice(n: i64) -> Q {
    let pts: Vec<(Q, Q)> = (0..4 * n)
        .map(|k| perimeter(Q::new(2 * k + 1, 2 * n)))
        .collect();
    let mut total = Q::zero();
    for &a in &pts {
        for &b in &pts {
            for &c in &pts {
                total += shoelace(&[a, b, c]);
            }
        }
    }
    total / Q::from_integer((4 * n).pow(3))
}

#[test]
fn lattice_matches_brute_force() {
    for n in 1..=6 {
        let fast = enumerate_mean_area(n as u64).unwrap();
        let slow = brute_lattice(n);
        assert_eq!(
            (fast.numer().to_string(), fast.denom().to_string()),
            (slow.numer().to_string(), slow.denom().to_string()),
            "n = {n}"
        );
    }
}

#[test]
fn lattice_tends_to_frame_mean() {
    let target = 5.0 / 32.0;
    let mut last = f64::INFINITY;
    for n in [2u64, 5, 10, 20] {
        let v = enumerate_mean_area(n).unwrap();
        let v = num_traits::ToPrimitive::to_f64(&v).unwrap();
        let gap = (v - target).abs();
        assert!(gap < last, "n = {n}: {v}");
        last = gap;
    }
    assert!(last < 2e-4);
}

/// Midpoint-rule double integral of |s| with `p1 = (x1, 0)`, `p2` on the
/// given side and `p3` anywhere on the frame.
fn midpoint_case(side: usize, x1: f64, m: usize) -> f64 {
    let h = 1.0 / m as f64;
    let at = |s: usize, u: f64| match s {
        0 => (u, 0.0),
        1 => (1.0, u),
        2 => (1.0 - u, 1.0),
        _ => (0.0, 1.0 - u),
    };
    let mut total = 0.0;
    for i in 0..m {
        let (x2, y2) = at(side, (i as f64 + 0.5) * h);
        for s3 in 0..4 {
            for j in 0..m {
                let (x3, y3) = at(s3, (j as f64 + 0.5) * h);
                total += ((x2 - x1) * y3 - (x3 - x1) * y2).abs() / 2.0;
            }
        }
    }
    total * h * h
}

#[test]
fn side_cases_match_midpoint_rule() {
    let cfg = QuadConfig::with_rel_tol(1e-7);
    for x1 in [0.1, 0.37, 0.8] {
        for id in 1..=4u8 {
            let case = SideCase::new(id).unwrap();
            let brute = midpoint_case(case.side().index(), x1, 600);
            let quad = side_case_value(case, x1, &cfg).unwrap();
            assert!(
                (quad - brute).abs() < 2e-5,
                "case {id} at {x1}: {quad} vs {brute}"
            );
        }
    }
}

#[test]
fn frame_mean_matches_midpoint_rule() {
    // average of the bottom-side sums over x1, divided by the 16 side pairings
    let m = 40;
    let brute: f64 = (0..m)
        .map(|i| {
            let x1 = (i as f64 + 0.5) / m as f64;
            (0..4).map(|s| midpoint_case(s, x1, 200)).sum::<f64>()
        })
        .sum::<f64>()
        / m as f64
        / 16.0;
    let quad = expected_area_frame(&QuadConfig::with_rel_tol(1e-6)).unwrap();
    assert!((quad - brute).abs() < 1e-4, "{quad} vs {brute}");
}
