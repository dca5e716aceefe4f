use serde::{Deserialize, Serialize};

/// One invocation of a subcommand, as written to stdout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord<P, R, E> {
    pub command: String,
    /// Arguments after the program name, verbatim.
    pub argv: Vec<String>,
    pub params: P,
    pub results: R,
    pub error_estimates: E,
    pub wall_seconds: f64,
    pub version: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadParams {
    pub a: f64,
    pub b: f64,
    pub region: String,
    pub rel_tol: f64,
    pub max_depth: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadRow {
    pub name: String,
    pub value: f64,
    pub est_error: f64,
    /// Closed form as `p/q`.
    pub exact_reference: String,
    pub reference_value: f64,
    pub rel_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadResults {
    pub regions: Vec<QuadRow>,
    /// Sums over the catalog: `I15`, `J15`, `II`, `JJ` and `RESULT = II / JJ`.
    pub summary: Vec<QuadRow>,
    pub all_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadErrors {
    pub max_est_error: f64,
    pub max_rel_deviation: f64,
    pub evaluations: u64,
    pub budget_exhausted: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub problem: String,
    pub n: u64,
    pub seed: u64,
    pub chunks: u64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McErrors {
    pub stderr: f64,
    pub ci95_half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub n: u64,
    pub symmetric: bool,
    pub work_limit: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeResults {
    /// Exact mean as `p/q`.
    pub exact: String,
    pub decimal: f64,
    pub triples: u64,
}

/// Exact results carry no error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoError {
    pub abs_error: f64,
}
