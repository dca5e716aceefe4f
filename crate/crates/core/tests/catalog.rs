//! Invariants of the region catalog under nested quadrature.

use num_traits::ToPrimitive;
use randtri_core::quadrature::QuadConfig;
use randtri_core::regions::{
    exact_reference, full_breakdown, interior_breakdown, nested_quadrature, region_by_name,
    RegionResult,
};

fn cfg(rel_tol: f64) -> QuadConfig<f64> {
    QuadConfig::with_rel_tol(rel_tol)
}

fn quad(name: &str, a: f64, b: f64, c: &QuadConfig<f64>) -> RegionResult<f64> {
    nested_quadrature(&region_by_name(name, a, b).unwrap(), c).unwrap()
}

fn truth(name: &str, a: f64, b: f64) -> f64 {
    exact_reference(name, a, b).unwrap().to_f64().unwrap()
}

#[test]
fn ratio_identities() {
    let c = cfg(1e-6);
    let i1 = quad("I1", 1.0, 1.0, &c).value;
    for (name, k) in [("I2", 23.0), ("I3", 140.0), ("I4", 19.0), ("I5", 37.0)] {
        let r = quad(name, 1.0, 1.0, &c).value / i1;
        assert!((r - k).abs() <= 1e-4 * k, "{name}/I1 = {r}");
    }
    let j1 = quad("J1", 1.0, 1.0, &c).value;
    for (name, k) in [("J2", 5.0), ("J3", 18.0), ("J4", 5.0), ("J5", 7.0)] {
        let r = quad(name, 1.0, 1.0, &c).value / j1;
        assert!((r - k).abs() <= 1e-4 * k, "{name}/J1 = {r}");
    }
}

#[test]
fn mirrored_regions_agree() {
    let c = cfg(1e-5);
    let pairs = [
        ("I1", "I8"),
        ("I2", "I9"),
        ("I3", "I10"),
        ("I4", "I6"),
        ("I5", "I7"),
    ];
    for (p, q) in pairs {
        for (a, b) in [(1.0, 1.0), (2.0, 0.5)] {
            let x = quad(p, a, b, &c);
            let y = quad(q, a, b, &c);
            let slack = 2.0 * (x.est_error + y.est_error) + 1e-14;
            assert!(
                (x.value - y.value).abs() <= slack,
                "{p}={} {q}={}",
                x.value,
                y.value
            );
            let (jp, jq) = (p.replacen('I', "J", 1), q.replacen('I', "J", 1));
            let x = quad(&jp, a, b, &c);
            let y = quad(&jq, a, b, &c);
            let slack = 2.0 * (x.est_error + y.est_error) + 1e-14;
            assert!(
                (x.value - y.value).abs() <= slack,
                "{jp}={} {jq}={}",
                x.value,
                y.value
            );
        }
    }
}

#[test]
fn homogeneous_scaling() {
    let c = cfg(1e-6);
    for name in ["I2", "I5", "J3", "J4"] {
        let (pa, pb) = if name.starts_with('I') {
            (4, 4)
        } else {
            (3, 3)
        };
        let base = quad(name, 1.0, 1.0, &c).value;
        for lambda in [0.5f64, 2.0] {
            let scaled = quad(name, lambda, 1.0, &c).value;
            let want = base * lambda.powi(pa);
            assert!(
                (scaled - want).abs() <= 1e-5 * want,
                "{name} x-scale {lambda}"
            );
            let scaled = quad(name, 1.0, lambda, &c).value;
            let want = base * lambda.powi(pb);
            assert!(
                (scaled - want).abs() <= 1e-5 * want,
                "{name} y-scale {lambda}"
            );
        }
    }
}

#[test]
fn tightening_tolerance_converges() {
    for name in ["I1", "I3", "J1", "J5"] {
        let t = truth(name, 1.0, 1.0);
        let loose = quad(name, 1.0, 1.0, &cfg(1e-3));
        let tight = quad(name, 1.0, 1.0, &cfg(1e-5));
        assert!(!loose.budget_exhausted && !tight.budget_exhausted);
        assert!((tight.value - t).abs() <= (loose.value - t).abs() + tight.est_error + 1e-15);
        assert!((loose.value - tight.value).abs() <= loose.est_error + tight.est_error);
    }
}

#[test]
fn accurate_across_aspect_ratios() {
    let rel = 1e-4;
    let c = cfg(rel);
    for (a, b) in [(0.5, 0.5), (0.5, 4.0), (4.0, 0.5), (2.0, 3.0), (1.5, 1.0)] {
        for name in ["I1", "I2", "I3", "I4", "I5", "J1", "J2", "J3", "J4", "J5"] {
            let r = quad(name, a, b, &c);
            let t = truth(name, a, b);
            let err = (r.value - t).abs();
            assert!(
                err <= (rel * t).max(1e-12),
                "{name} at ({a},{b}): {} vs {t}",
                r.value
            );
        }
    }
}

#[test]
fn mean_area_in_rectangles() {
    let c = cfg(1e-5);
    for (a, b) in [(1.0, 1.0), (2.0, 3.0), (0.5, 4.0)] {
        let m = interior_breakdown(a, b, &c).unwrap();
        let t = 11.0 * a * b / 144.0;
        assert!((m.value - t).abs() <= 1e-5 * t, "({a},{b}) -> {}", m.value);
        assert!(m.est_error >= 0.0);
    }
    let full = full_breakdown(1.0, 1.0, &c).unwrap();
    assert!((full.numerator - 11.0 / 864.0).abs() <= 1e-5 * 11.0 / 864.0);
    assert!((full.normalizer - 1.0 / 6.0).abs() <= 1e-5 / 6.0);
    assert!((full.value - 11.0 / 144.0).abs() <= 1e-5 * 11.0 / 144.0);
}

#[test]
fn f32_instantiation() {
    let r = nested_quadrature(
        &region_by_name("J3", 1.0f32, 1.0).unwrap(),
        &QuadConfig::with_rel_tol(1e-3),
    )
    .unwrap();
    assert!((r.value - 18.0 / 432.0).abs() <= 1e-3 * 18.0 / 432.0);
}
