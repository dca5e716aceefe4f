use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use randtri_cli::acceptance::{self, Context};
use randtri_cli::output::{sig, table, Format};
use randtri_cli::record::*;
use randtri_core::geometry::{CubeDomain, RectDomain};
use randtri_core::lattice::{
    enumerate_mean_area_with, triple_count, EnumConfig, EnumerationMode, LatticeError,
    DEFAULT_WORK_LIMIT,
};
use randtri_core::montecarlo::{estimate, EstimateResult, Problem};
use randtri_core::quadrature::QuadConfig;
use randtri_core::regions::{
    exact_reference, nested_quadrature, region_by_name, CatalogError, RegionResult,
};
use randtri_core::VERSION;
use serde::Serialize;

const DIGITS: usize = 13;

const REGIONS: [&str; 20] = [
    "I1", "I2", "I3", "I4", "I5", "I6", "I7", "I8", "I9", "I10", "J1", "J2", "J3", "J4", "J5",
    "J6", "J7", "J8", "J9", "J10",
];

#[derive(Parser)]
#[command(
    name = "randtri",
    version,
    about = "Expected area of random triangles in rectangles and on the square frame"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Auto)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nested quadrature over the region catalog, checked against closed forms.
    Quad {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// A region name (I1..I10, J1..J10) or `all`.
        #[arg(long, default_value = "all")]
        region: String,
        #[arg(long, default_value_t = 1e-4)]
        rel_tol: f64,
        #[arg(long, default_value_t = 16)]
        max_depth: u32,
    },
    /// Seeded Monte-Carlo estimate.
    Mc {
        #[arg(long, value_enum)]
        problem: McProblem,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent substreams (default: min(64, n)).
        #[arg(long)]
        chunks: Option<u64>,
        /// Rectangle width, or cube side for `tetra`. Ignored for `frame`.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Rectangle height. Used by `interior` only.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
    },
    /// Exact mean area over the boundary midpoint lattice.
    Lattice {
        /// Subdivisions per side.
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_WORK_LIMIT)]
        work_limit: u64,
        /// Enumerate from one side and use the quarter-turn symmetry.
        #[arg(long)]
        symmetric: bool,
    },
    /// Run every acceptance criterion and report pass/fail.
    Report {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum McProblem {
    Interior,
    Frame,
    Tetra,
}

enum Failure {
    Usage(String),
    Accuracy,
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Accuracy => 1,
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("records serialize")
    );
}

fn argv() -> Vec<String> {
    std::env::args().skip(1).collect()
}

fn row(r: &RegionResult<f64>, a: f64, b: f64, limit: f64) -> Result<QuadRow, CatalogError> {
    summary_row(&r.name, r.value, r.est_error, a, b, limit)
}

fn summary_row(
    name: &str,
    value: f64,
    est_error: f64,
    a: f64,
    b: f64,
    limit: f64,
) -> Result<QuadRow, CatalogError> {
    let exact = exact_reference(name, a, b)?;
    let reference_value = exact.to_f64().unwrap_or(f64::NAN);
    let rel_deviation = (value - reference_value).abs() / reference_value.abs();
    Ok(QuadRow {
        name: name.to_string(),
        value,
        est_error,
        exact_reference: exact.to_string(),
        reference_value,
        rel_deviation,
        pass: rel_deviation <= limit,
    })
}

fn catalog_failure(e: CatalogError) -> Failure {
    Failure::Usage(e.to_string())
}

fn summaries(
    rs: &[RegionResult<f64>],
    a: f64,
    b: f64,
    limit: f64,
) -> Result<Vec<QuadRow>, CatalogError> {
    let sum = |names: &[&str]| {
        rs.iter()
            .filter(|r| names.contains(&r.name.as_str()))
            .fold((0.0, 0.0), |(v, e), r| (v + r.value, e + r.est_error))
    };
    let (i15, i15e) = sum(&REGIONS[..5]);
    let (j15, j15e) = sum(&REGIONS[10..15]);
    let (ii, iie) = sum(&REGIONS[..10]);
    let (jj, jje) = sum(&REGIONS[10..]);
    let result = ii / jj;
    let result_err = result * (iie / ii + jje / jj);
    Ok(vec![
        summary_row("I15", i15, i15e, a, b, limit)?,
        summary_row("J15", j15, j15e, a, b, limit)?,
        summary_row("II", ii, iie, a, b, limit)?,
        summary_row("JJ", jj, jje, a, b, limit)?,
        summary_row("RESULT", result, result_err, a, b, limit)?,
    ])
}

fn cmd_quad(fmt: Format, a: f64, b: f64, region: String, rel_tol: f64, max_depth: u32) -> Outcome {
    let start = Instant::now();
    let cfg = QuadConfig {
        rel_tol,
        max_depth,
        ..QuadConfig::default()
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let names: Vec<&str> = if region == "all" {
        REGIONS.to_vec()
    } else if REGIONS.contains(&region.as_str()) {
        vec![region.as_str()]
    } else {
        return Err(Failure::Usage(format!(
            "unknown region `{region}`; expected I1..I10, J1..J10 or all"
        )));
    };
    let limit = 10.0 * rel_tol;
    let mut results = Vec::new();
    for name in &names {
        let spec = region_by_name(name, a, b).map_err(catalog_failure)?;
        results.push(nested_quadrature(&spec, &cfg).map_err(|e| Failure::Usage(e.to_string()))?);
    }
    let rows = results
        .iter()
        .map(|r| row(r, a, b, limit))
        .collect::<Result<Vec<_>, _>>()
        .map_err(catalog_failure)?;
    let summary = if names.len() == REGIONS.len() {
        summaries(&results, a, b, limit).map_err(catalog_failure)?
    } else {
        Vec::new()
    };
    let all_pass = rows.iter().chain(&summary).all(|r| r.pass);
    let errors = QuadErrors {
        max_est_error: results.iter().map(|r| r.est_error).fold(0.0, f64::max),
        max_rel_deviation: rows
            .iter()
            .chain(&summary)
            .map(|r| r.rel_deviation)
            .fold(0.0, f64::max),
        evaluations: results.iter().map(|r| r.evaluations).sum(),
        budget_exhausted: results
            .iter()
            .filter(|r| r.budget_exhausted)
            .map(|r| r.name.clone())
            .collect(),
    };
    let record = RunRecord {
        command: "quad".into(),
        argv: argv(),
        params: QuadParams {
            a,
            b,
            region,
            rel_tol,
            max_depth,
        },
        results: QuadResults {
            regions: rows,
            summary,
            all_pass,
        },
        error_estimates: errors,
        wall_seconds: start.elapsed().as_secs_f64(),
        version: VERSION.into(),
        seed: None,
    };
    if fmt.table() {
        let cells = |r: &QuadRow| {
            vec![
                r.name.clone(),
                sig(r.value, DIGITS),
                format!("{:.2e}", r.est_error),
                r.exact_reference.clone(),
                format!("{:.2e}", r.rel_deviation),
                if r.pass { "ok" } else { "FAIL" }.to_string(),
            ]
        };
        let header = ["region", "value", "est_error", "exact", "rel_dev", ""];
        let mut rows: Vec<Vec<String>> = record.results.regions.iter().map(cells).collect();
        rows.extend(record.results.summary.iter().map(cells));
        print!("{}", table(&header, &rows));
        let e = &record.error_estimates;
        println!(
            "{} evaluations in {:.2} s; tolerance 10 x rel_tol = {:.1e}",
            e.evaluations, record.wall_seconds, limit
        );
        if !e.budget_exhausted.is_empty() {
            println!("depth budget exhausted: {}", e.budget_exhausted.join(", "));
        }
    } else {
        emit(&record);
    }
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Accuracy)
    }
}

fn cmd_mc(
    fmt: Format,
    kind: McProblem,
    n: u64,
    seed: u64,
    chunks: Option<u64>,
    a: f64,
    b: f64,
) -> Outcome {
    let start = Instant::now();
    let usage = |e: &dyn std::fmt::Display| Failure::Usage(e.to_string());
    let problem = match kind {
        McProblem::Interior => Problem::InteriorTriangle {
            domain: RectDomain::new(a, b).map_err(|e| usage(&e))?,
        },
        McProblem::Frame => Problem::FrameTriangle,
        McProblem::Tetra => Problem::CubeTetrahedron {
            domain: CubeDomain::new(a).map_err(|e| usage(&e))?,
        },
    };
    let chunks = chunks.unwrap_or(n.clamp(1, 64));
    let r: EstimateResult<f64> = estimate(&problem, n, seed, chunks).map_err(|e| usage(&e))?;
    let record = RunRecord {
        command: "mc".into(),
        argv: argv(),
        params: McParams {
            problem: problem.name().into(),
            n,
            seed,
            chunks,
            a,
            b,
        },
        results: r,
        error_estimates: McErrors {
            stderr: r.stderr,
            ci95_half_width: r.ci95_high - r.mean,
        },
        wall_seconds: start.elapsed().as_secs_f64(),
        version: VERSION.into(),
        seed: Some(seed),
    };
    if fmt.table() {
        let rows = [
            ("problem", problem.name().to_string()),
            ("n", n.to_string()),
            ("seed", seed.to_string()),
            ("chunks", chunks.to_string()),
            ("mean", sig(r.mean, DIGITS)),
            ("stderr", sig(r.stderr, DIGITS)),
            ("variance", sig(r.variance, DIGITS)),
            ("ci95_low", sig(r.ci95_low, DIGITS)),
            ("ci95_high", sig(r.ci95_high, DIGITS)),
            ("seconds", format!("{:.3}", record.wall_seconds)),
        ];
        let rows: Vec<Vec<String>> = rows
            .into_iter()
            .map(|(k, v)| vec![k.to_string(), v])
            .collect();
        print!("{}", table(&["field", "value"], &rows));
    } else {
        emit(&record);
    }
    Ok(())
}

fn cmd_lattice(fmt: Format, n: u64, work_limit: u64, symmetric: bool) -> Outcome {
    let start = Instant::now();
    let cfg = EnumConfig {
        work_limit,
        mode: if symmetric {
            EnumerationMode::Symmetric
        } else {
            EnumerationMode::Full
        },
    };
    let q = enumerate_mean_area_with(n, &cfg).map_err(|e| match e {
        LatticeError::InvalidSubdivisions(_) => Failure::Usage(e.to_string()),
        LatticeError::WorkLimitExceeded { .. } => Failure::Resource(e.to_string()),
    })?;
    let decimal = q.to_f64().unwrap_or(f64::NAN);
    let record = RunRecord {
        command: "lattice".into(),
        argv: argv(),
        params: LatticeParams {
            n,
            symmetric,
            work_limit,
        },
        results: LatticeResults {
            exact: q.to_string(),
            decimal,
            triples: triple_count(n).unwrap_or(u64::MAX),
        },
        error_estimates: NoError { abs_error: 0.0 },
        wall_seconds: start.elapsed().as_secs_f64(),
        version: VERSION.into(),
        seed: None,
    };
    if fmt.table() {
        println!("{}  {}", record.results.exact, sig(decimal, DIGITS));
    } else {
        emit(&record);
    }
    Ok(())
}

fn cmd_report(fmt: Format, out: Option<PathBuf>) -> Outcome {
    let exe = std::env::current_exe().map_err(|e| Failure::Resource(e.to_string()))?;
    let ctx = Context::new(exe);
    let report = if fmt.table() {
        let start = Instant::now();
        let mut criteria = Vec::new();
        for id in 1..=acceptance::COUNT {
            let c = acceptance::run(id, &ctx);
            println!(
                "{} {} ({:.2} s): {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.criterion,
                c.seconds,
                c.actual
            );
            criteria.push(c);
        }
        acceptance::Report {
            command: "report".into(),
            version: VERSION.into(),
            all_pass: criteria.iter().all(|c| c.pass),
            ratio_22_45: criteria[6].value,
            wall_seconds: start.elapsed().as_secs_f64(),
            criteria,
        }
    } else {
        let r = acceptance::run_all(&ctx);
        emit(&r);
        r
    };
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(&path, text + "\n")
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if report.all_pass {
        Ok(())
    } else {
        Err(Failure::Accuracy)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let fmt = cli.format;
    let outcome = match cli.command {
        Cmd::Quad {
            a,
            b,
            region,
            rel_tol,
            max_depth,
        } => cmd_quad(fmt, a, b, region, rel_tol, max_depth),
        Cmd::Mc {
            problem,
            n,
            seed,
            chunks,
            a,
            b,
        } => cmd_mc(fmt, problem, n, seed, chunks, a, b),
        Cmd::Lattice {
            n,
            work_limit,
            symmetric,
        } => cmd_lattice(fmt, n, work_limit, symmetric),
        Cmd::Report { out } => cmd_report(fmt, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Resource(m) => eprintln!("error: {m}"),
                Failure::Accuracy => eprintln!("error: accuracy check failed"),
            }
            ExitCode::from(f.code())
        }
    }
}
