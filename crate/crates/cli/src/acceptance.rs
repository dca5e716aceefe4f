//! The acceptance criteria, each runnable on its own.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::Rng;
use randtri_core::frame::{frame_breakdown, side_case_value, SideCase};
use randtri_core::geometry::{signed_area_raw, CubeDomain, Point2, RectDomain};
use randtri_core::lattice::enumerate_mean_area;
use randtri_core::montecarlo::{chunk_rng, estimate, Problem};
use randtri_core::quadrature::QuadConfig;
use randtri_core::regions::{
    exact_reference, expected_area_interior, full_breakdown, full_regions, nested_quadrature,
    normalizer_regions, rectangle_regions, RegionResult,
};
use randtri_core::Rational;
use serde::{Deserialize, Serialize};

pub const COUNT: usize = 9;

/// Fixed seed for the statistical criteria.
pub const SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub expected: String,
    pub actual: String,
    pub tolerance: String,
    pub pass: bool,
    pub seconds: f64,
    /// Headline number behind `actual`.
    #[serde(skip)]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub all_pass: bool,
    /// Quadrature interior mean over frame mean; 22/45 in theory.
    pub ratio_22_45: f64,
    pub wall_seconds: f64,
    pub criteria: Vec<CriterionReport>,
}

/// Where the determinism check finds the `randtri` binary.
#[derive(Debug, Clone)]
pub struct Context {
    pub exe: PathBuf,
}

impl Context {
    pub fn new(exe: impl AsRef<Path>) -> Self {
        Self {
            exe: exe.as_ref().to_path_buf(),
        }
    }
}

struct Draft {
    criterion: &'static str,
    expected: String,
    tolerance: String,
}

impl Draft {
    fn new(
        criterion: &'static str,
        expected: impl Into<String>,
        tolerance: impl Into<String>,
    ) -> Self {
        Self {
            criterion,
            expected: expected.into(),
            tolerance: tolerance.into(),
        }
    }

    fn finish(self, start: Instant, actual: String, value: f64, pass: bool) -> CriterionReport {
        CriterionReport {
            criterion: self.criterion.to_string(),
            expected: self.expected,
            actual,
            tolerance: self.tolerance,
            pass,
            seconds: start.elapsed().as_secs_f64(),
            value,
        }
    }

    fn error(self, start: Instant, err: impl std::fmt::Display) -> CriterionReport {
        self.finish(start, format!("error: {err}"), f64::NAN, false)
    }
}

fn rel(x: f64, truth: f64) -> f64 {
    (x - truth).abs() / truth.abs()
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn reference(name: &str) -> f64 {
    exact_reference(name, 1.0, 1.0)
        .map(|q| to_f64(&q))
        .unwrap_or(f64::NAN)
}

/// Runs criterion `id` (1-based).
pub fn run(id: usize, ctx: &Context) -> CriterionReport {
    match id {
        1 => quadrature_constants(),
        2 => square_decomposition(),
        3 => rectangle_scale_law(),
        4 => frame_polynomials(),
        5 => lattice_exactness(),
        6 => monte_carlo_consistency(),
        7 => interior_frame_ratio(),
        8 => determinism(ctx),
        9 => property_suites(),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_all(ctx: &Context) -> Report {
    let start = Instant::now();
    let criteria: Vec<_> = (1..=COUNT).map(|id| run(id, ctx)).collect();
    Report {
        command: "report".into(),
        version: randtri_core::VERSION.into(),
        all_pass: criteria.iter().all(|c| c.pass),
        ratio_22_45: criteria[6].value,
        wall_seconds: start.elapsed().as_secs_f64(),
        criteria,
    }
}

pub fn quadrature_constants() -> CriterionReport {
    let d = Draft::new(
        "1 quadrature constants",
        "I1..I5 = {1,23,140,19,37}/34560, J1 = 1/432, J ratios {5,18,5,7}, I15 = 11/1728, J15 = 1/12",
        "2e-4 relative each; < 60 s",
    );
    let start = Instant::now();
    let cfg = QuadConfig::default();
    let eval = |rs: Vec<_>| -> Result<Vec<RegionResult<f64>>, _> {
        rs.iter().map(|r| nested_quadrature(r, &cfg)).collect()
    };
    let regions = rectangle_regions(1.0, 1.0).and_then(eval);
    let norms = normalizer_regions(1.0, 1.0).and_then(eval);
    let (regions, norms) = match (regions, norms) {
        (Ok(r), Ok(n)) => (r, n),
        (Err(e), _) | (_, Err(e)) => return d.error(start, e),
    };
    let mut worst = (0.0, String::new());
    let mut check = |name: &str, dev: f64| {
        if dev.is_nan() || dev > worst.0 {
            worst = (dev, name.to_string());
        }
    };
    for r in regions.iter().chain(&norms) {
        check(&r.name, rel(r.value, reference(&r.name)));
    }
    let j1 = norms[0].value;
    for (r, k) in norms[1..].iter().zip([5.0, 18.0, 5.0, 7.0]) {
        check(&format!("{}/J1", r.name), rel(r.value / j1, k));
    }
    let i15: f64 = regions.iter().map(|r| r.value).sum();
    let j15: f64 = norms.iter().map(|r| r.value).sum();
    check("I15", rel(i15, 11.0 / 1728.0));
    check("J15", rel(j15, 1.0 / 12.0));
    let seconds = start.elapsed().as_secs_f64();
    let actual = format!(
        "max deviation {:.3e} ({}); I15 = {:.12e}, J15 = {:.12e}",
        worst.0, worst.1, i15, j15
    );
    d.finish(start, actual, worst.0, worst.0 <= 2e-4 && seconds < 60.0)
}

pub fn square_decomposition() -> CriterionReport {
    let d = Draft::new(
        "2 square ten-region decomposition",
        "II = 11/864, JJ = 1/6, II/JJ = 11/144; I6=I4, I7=I5, I8=I1, I9=I2, I10=I3",
        "2e-4 relative; pairs within 2x combined error estimate",
    );
    let start = Instant::now();
    let m = match full_breakdown(1.0, 1.0, &QuadConfig::default()) {
        Ok(m) => m,
        Err(e) => return d.error(start, e),
    };
    let devs = [
        rel(m.numerator, 11.0 / 864.0),
        rel(m.normalizer, 1.0 / 6.0),
        rel(m.value, 11.0 / 144.0),
    ];
    let max_dev = devs.iter().copied().fold(0.0, f64::max);
    let by = |name: &str| {
        m.regions
            .iter()
            .find(|r| r.name == name)
            .expect("full catalog")
    };
    let mut pairs_ok = true;
    let mut worst_pair = 0.0f64;
    for (p, q) in [
        ("I6", "I4"),
        ("I7", "I5"),
        ("I8", "I1"),
        ("I9", "I2"),
        ("I10", "I3"),
    ] {
        let (x, y) = (by(p), by(q));
        let gap = (x.value - y.value).abs();
        pairs_ok &= gap <= 2.0 * (x.est_error + y.est_error);
        worst_pair = worst_pair.max(gap);
    }
    let actual = format!(
        "II = {:.12e}, JJ = {:.12e}, II/JJ = {:.12e}; max deviation {:.3e}; max pair gap {:.3e}",
        m.numerator, m.normalizer, m.value, max_dev, worst_pair
    );
    d.finish(start, actual, m.value, max_dev <= 2e-4 && pairs_ok)
}

pub fn rectangle_scale_law() -> CriterionReport {
    let d = Draft::new(
        "3 rectangle scale law",
        "expected_area_interior(2, 3) = 11/24",
        "2e-4 relative",
    );
    let start = Instant::now();
    match expected_area_interior(2.0, 3.0, &QuadConfig::default()) {
        Ok(v) => {
            let dev = rel(v, 11.0 / 24.0);
            d.finish(
                start,
                format!("{v:.12e} (deviation {dev:.3e})"),
                v,
                dev <= 2e-4,
            )
        }
        Err(e) => d.error(start, e),
    }
}

pub fn frame_polynomials() -> CriterionReport {
    let d = Draft::new(
        "4 frame polynomials",
        "four side cases equal their closed forms at x1 in {0, 0.25, 0.5, 0.75, 1}; integral 5/2; mean 5/32",
        "1e-4 absolute",
    );
    let start = Instant::now();
    let cfg = QuadConfig::<f64>::default();
    let mut worst = 0.0f64;
    for x1 in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for case in SideCase::ALL {
            match side_case_value(case, x1, &cfg) {
                Ok(v) => worst = worst.max((v - case.closed_form(x1)).abs()),
                Err(e) => return d.error(start, e),
            }
        }
    }
    let m = match frame_breakdown(&cfg) {
        Ok(m) => m,
        Err(e) => return d.error(start, e),
    };
    let int_dev = (m.numerator - 2.5).abs();
    let mean_dev = (m.value - 5.0 / 32.0).abs();
    let actual = format!(
        "max case deviation {worst:.3e}; integral {:.12e}; mean {:.12e}",
        m.numerator, m.value
    );
    d.finish(
        start,
        actual,
        m.value,
        worst <= 1e-4 && int_dev <= 1e-4 && mean_dev <= 1e-4,
    )
}

pub fn lattice_exactness() -> CriterionReport {
    let d = Draft::new(
        "5 lattice exactness",
        "enumerate_mean_area(10) = 249/1600",
        "exact; < 5 s",
    );
    let start = Instant::now();
    let want: Rational = "249/1600".parse().expect("literal");
    match enumerate_mean_area(10) {
        Ok(q) => {
            let seconds = start.elapsed().as_secs_f64();
            let pass = q == want && seconds < 5.0;
            d.finish(start, format!("{q} in {seconds:.3} s"), to_f64(&q), pass)
        }
        Err(e) => d.error(start, e),
    }
}

pub fn monte_carlo_consistency() -> CriterionReport {
    let d = Draft::new(
        "6 Monte-Carlo consistency",
        "n = 1e7: interior within 5 stderr of 11/144, frame within 5 stderr of 5/32, tetra in [0.0132, 0.0146]",
        "5 stderr; < 30 s per problem",
    );
    let start = Instant::now();
    let n = 10_000_000;
    let problems = [
        Problem::InteriorTriangle {
            domain: RectDomain::new(1.0, 1.0).expect("unit square"),
        },
        Problem::FrameTriangle,
        Problem::CubeTetrahedron {
            domain: CubeDomain::new(1.0).expect("unit cube"),
        },
    ];
    let ok = |p: &Problem<f64>, m: f64, se: f64| match p {
        Problem::InteriorTriangle { .. } => (m - 11.0 / 144.0).abs() <= 5.0 * se,
        Problem::FrameTriangle => (m - 5.0 / 32.0).abs() <= 5.0 * se,
        Problem::CubeTetrahedron { .. } => (0.0132..=0.0146).contains(&m),
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for problem in &problems {
        let t = Instant::now();
        match estimate(problem, n, SEED, 64) {
            Ok(r) => {
                let secs = t.elapsed().as_secs_f64();
                pass &= ok(problem, r.mean, r.stderr) && secs < 30.0;
                parts.push(format!(
                    "{} {:.12e} +- {:.3e} ({secs:.2} s)",
                    problem.name(),
                    r.mean,
                    r.stderr
                ));
            }
            Err(e) => return d.error(start, e),
        }
    }
    d.finish(start, parts.join("; "), f64::NAN, pass)
}

pub fn interior_frame_ratio() -> CriterionReport {
    let d = Draft::new("7 interior / frame ratio", "22/45", "5e-4 relative");
    let start = Instant::now();
    let cfg = QuadConfig::default();
    let interior = match expected_area_interior(1.0, 1.0, &cfg) {
        Ok(v) => v,
        Err(e) => return d.error(start, e),
    };
    let frame = match frame_breakdown(&cfg) {
        Ok(m) => m.value,
        Err(e) => return d.error(start, e),
    };
    let ratio = interior / frame;
    let dev = rel(ratio, 22.0 / 45.0);
    d.finish(
        start,
        format!("{ratio:.12e} (deviation {dev:.3e})"),
        ratio,
        dev <= 5e-4,
    )
}

fn mc_results(exe: &Path, threads: usize, problem: &str) -> Result<String, String> {
    let out = Command::new(exe)
        .args([
            "--threads",
            &threads.to_string(),
            "--format",
            "json",
            "mc",
            "--problem",
            problem,
        ])
        .args(["--n", "200000", "--seed", "7", "--chunks", "16"])
        .output()
        .map_err(|e| format!("cannot run {}: {e}", exe.display()))?;
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("bad JSON: {e}"))?;
    Ok(v["results"].to_string())
}

pub fn determinism(ctx: &Context) -> CriterionReport {
    let d = Draft::new(
        "8 determinism",
        "`mc` results byte-identical for --threads 1 and --threads 4",
        "byte equality",
    );
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for problem in ["interior", "frame", "tetra"] {
        let one = mc_results(&ctx.exe, 1, problem);
        let four = mc_results(&ctx.exe, 4, problem);
        match (one, four) {
            (Ok(x), Ok(y)) => {
                let same = x == y;
                pass &= same;
                parts.push(format!(
                    "{problem} {}",
                    if same { "identical" } else { "differ" }
                ));
            }
            (Err(e), _) | (_, Err(e)) => return d.error(start, e),
        }
    }
    d.finish(start, parts.join(", "), f64::NAN, pass)
}

/// Seeded random checks of the signed-area invariants and of the region
/// signs, 10^4 cases each.
pub fn property_suites() -> CriterionReport {
    let d = Draft::new(
        "9 property suites",
        "signed area antisymmetric, translation invariant, exact under power-of-two scaling; every region keeps its sign",
        "10^4 cases each",
    );
    let start = Instant::now();
    let cases = 10_000u32;
    let mut rng = chunk_rng(SEED, 9);
    let tol = 8.0 * 400.0 * f64::EPSILON;
    let mut failures = 0u32;
    for _ in 0..cases {
        let mut p =
            || Point2::<f64>::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        let (a, b, c) = (p(), p(), p());
        let s = signed_area_raw(&a, &b, &c);
        if (signed_area_raw(&b, &a, &c) + s).abs() > tol
            || (signed_area_raw(&b, &c, &a) - s).abs() > tol
        {
            failures += 1;
        }
        let (dx, dy): (f64, f64) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let moved = signed_area_raw(
            &a.translate(&dx, &dy),
            &b.translate(&dx, &dy),
            &c.translate(&dx, &dy),
        );
        if (moved - s).abs() > 4.0 * tol {
            failures += 1;
        }
        let k = 2f64.powi(rng.random_range(-6..=6));
        if signed_area_raw(&a.scale(&k), &b.scale(&k), &c.scale(&k)) != k * k * s {
            failures += 1;
        }
    }
    let regions = match full_regions(1.0, 1.0) {
        Ok(r) => r,
        Err(e) => return d.error(start, e),
    };
    let mut hits = vec![0u32; regions.len()];
    let mut draws = 0u64;
    while hits.iter().any(|&h| h < cases) && draws < 100_000_000 {
        draws += 1;
        let v: [f64; 6] = std::array::from_fn(|_| rng.random::<f64>());
        if !(v[0] < v[2] && v[2] < v[4]) {
            continue;
        }
        let mut inside = 0;
        for (i, r) in regions.iter().enumerate() {
            if r.contains(&v) {
                inside += 1;
                hits[i] += 1;
                if r.weight(&v) < -1e-12 {
                    failures += 1;
                }
            }
        }
        if inside != 1 {
            failures += 1;
        }
    }
    let min_hits = hits.iter().copied().min().unwrap_or(0);
    let actual = format!(
        "{failures} failures; {cases} geometry cases; at least {min_hits} samples per region ({draws} draws)"
    );
    d.finish(
        start,
        actual,
        failures as f64,
        failures == 0 && min_hits >= cases,
    )
}
