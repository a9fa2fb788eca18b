//! Experiment orchestration behind the command line tool.
//!
//! [`run`] takes an [`ExperimentConfig`] and returns the rendered table or
//! report together with a [`Status`]. Output depends only on the config: jobs
//! are seeded per index and merged in index order.

pub mod audit;
pub mod suites;
pub mod search;

use std::path::PathBuf;

use rand::Rng;
use serde::Serialize;

use crate::builder::{find_blocked_or_bramble, required_side, verify_outcome, BuildOutcome, BuildParams, OutcomeCheck};
use crate::decomposition::{exact_treewidth_with, treewidth_at_most, triangulated_plane, Decision};
use crate::error::{Error, Result};
use crate::exec::{job_rng, Execution};
use crate::graph::{Adjacency, Graph};
use crate::grid::{build_qn, GraphJson, GridGraph};
use crate::separators::Partition2;
use crate::slab::{AuditReport, TwStatus};

pub use audit::{AuditConfig, AuditRow, SeparatorMode};
pub use suites::SuiteStats;
pub use search::SearchReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    Inconclusive,
}

impl Status {
    /// Process exit code: 0 pass, 1 violation, 3 inconclusive. Usage errors
    /// exit with 2 before a status exists.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::Inconclusive => 3,
        }
    }

    fn worst(self, other: Status) -> Status {
        match (self, other) {
            (Status::Violation, _) | (_, Status::Violation) => Status::Violation,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LemmaConfig {
    pub n: u32,
    pub exhaustive: bool,
    pub samples: usize,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n: u32,
    pub heuristic: bool,
    pub iterations: usize,
    pub restarts: usize,
}

#[derive(Clone, Debug)]
pub enum PartitionSource {
    /// Each vertex in class 1 with probability `bias`.
    Random { bias: f64 },
    Uniform(u8),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct BuildConfig {
    /// Grid side; defaults to the required side for `(t, b)`.
    pub n: Option<u32>,
    pub t: u32,
    pub b: u32,
    pub colour: u8,
    pub partition: PartitionSource,
    pub override_schedule: bool,
}

#[derive(Clone, Debug)]
pub enum GraphSource {
    Grid(u32),
    Plane(u32),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct TreewidthConfig {
    pub source: GraphSource,
    /// Decide `tw <= k` instead of computing the exact value.
    pub decide: Option<i64>,
    pub budget: Option<u64>,
}

#[derive(Clone, Debug)]
pub enum Command {
    Lemmas(LemmaConfig),
    Audit(AuditConfig),
    Search(SearchConfig),
    Build(BuildConfig),
    Treewidth(TreewidthConfig),
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: Option<u64>,
    /// Largest vertex count handed to exact treewidth.
    pub guard_vertices: usize,
    pub format: Format,
    pub exec: Execution,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub status: Status,
    pub text: String,
}

/// Largest grid side the build command will allocate.
pub const MAX_BUILD_SIDE: u32 = 256;

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::Usage(format!("{what} is randomized and needs --seed")))
}

fn csv_table<S: AsRef<str>>(header: &[&str], rows: impl IntoIterator<Item = Vec<S>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|s| s.as_ref()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    match &cfg.command {
        Command::Lemmas(c) => run_lemmas(c, cfg),
        Command::Audit(c) => run_audit_command(c, cfg),
        Command::Search(c) => run_search(c, cfg),
        Command::Build(c) => run_build(c, cfg),
        Command::Treewidth(c) => run_treewidth(c, cfg),
    }
}

fn run_lemmas(c: &LemmaConfig, cfg: &ExperimentConfig) -> Result<RunOutput> {
    if c.n == 0 {
        return Err(Error::Usage("--n must be positive".into()));
    }
    if !c.exhaustive && c.samples == 0 {
        return Err(Error::Usage("pass --exhaustive or --samples".into()));
    }
    let exec = cfg.exec;
    let mut stats = Vec::new();
    if c.exhaustive {
        let len = if c.n <= 2 { 5 } else { 3 };
        stats.push(suites::walk_integrals_exhaustive(c.n, len, exec)?);
        stats.push(suites::triangle_integrals_exhaustive(c.n, exec)?);
    }
    if c.samples > 0 {
        let seed = need_seed(cfg.seed, "sampling")?;
        let s = c.samples;
        stats.push(suites::walk_integrals_sampled(c.n, s, seed, exec)?);
        stats.push(suites::triangle_integrals_sampled(c.n, s, seed, exec)?);
        stats.push(suites::strip_homotopies(c.n, s, seed, exec)?);
        stats.push(suites::balanced_separations(s, seed, exec)?);
        stats.push(suites::path_weight_identity(c.n, s, seed, exec)?);
        stats.push(suites::enlargement_separators(s, seed, exec)?);
    }
    let status = if stats.iter().any(|s| s.violations > 0) { Status::Violation } else { Status::Pass };
    let text = match cfg.format {
        Format::Csv => csv_table(&SuiteStats::CSV_HEADER, stats.iter().map(|s| s.csv_row().to_vec()))?,
        Format::Json => json(&stats)?,
    };
    Ok(RunOutput { status, text })
}

/// Violation when a computed quantity is wrong or a decomposition below the
/// bound exists; inconclusive when the width could not be certified.
pub fn audit_verdict(r: &AuditReport) -> Status {
    let n2 = (r.n * r.n) as i64;
    let broken = !r.f_entire
        || r.path_integrals.iter().any(|&v| v != 2)
        || r.lambda_x_doubled != 2 * n2
        || r.tw.upper.is_some_and(|u| u < r.bound)
        || r.pipeline.as_ref().is_some_and(|p| {
            !(p.separation_balanced && p.mass_balance_holds && p.integral_off_cut && p.row_certificates_hold)
                || p.final_bound_holds == Some(false)
        });
    if broken {
        Status::Violation
    } else if r.tw.status == TwStatus::ConsistentNotCertified || !r.pass {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

fn run_audit_command(c: &AuditConfig, cfg: &ExperimentConfig) -> Result<RunOutput> {
    if c.n == 0 {
        return Err(Error::Usage("--n must be positive".into()));
    }
    let rows = audit::run_audit(c, cfg.seed, cfg.guard_vertices, cfg.exec)?;
    let status = rows.iter().fold(Status::Pass, |acc, r| {
        acc.worst(r.report.as_ref().map_or(Status::Inconclusive, audit_verdict))
    });
    let text = match cfg.format {
        Format::Csv => csv_table(&AuditRow::CSV_HEADER, rows.iter().map(|r| r.csv_row()))?,
        Format::Json => json(&rows)?,
    };
    Ok(RunOutput { status, text })
}

fn run_search(c: &SearchConfig, cfg: &ExperimentConfig) -> Result<RunOutput> {
    if c.n == 0 {
        return Err(Error::Usage("--n must be positive".into()));
    }
    let report = if c.heuristic {
        let seed = need_seed(cfg.seed, "heuristic search")?;
        search::heuristic_search(c.n, c.iterations, c.restarts, seed, cfg.exec)?
    } else {
        search::exhaustive_search(c.n, cfg.exec)?
    };
    let text = match cfg.format {
        Format::Csv => csv_table(
            &["n", "mode", "value", "class1_width", "class2_width", "symmetries", "orbits", "nodes", "seed"],
            [vec![
                report.n.to_string(),
                report.mode.clone(),
                report.value.to_string(),
                report.class_widths[0].to_string(),
                report.class_widths[1].to_string(),
                report.symmetries.to_string(),
                report.orbits.to_string(),
                report.nodes.to_string(),
                report.seed.map(|s| s.to_string()).unwrap_or_default(),
            ]],
        )?,
        Format::Json => json(&report)?,
    };
    Ok(RunOutput {
        status: Status::Pass,
        text,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    pub n: u32,
    pub t: u32,
    pub b: u32,
    pub colour: u8,
    pub required_side: u64,
    /// Whether the grid is large enough for the construction's guarantee.
    pub guaranteed: bool,
    pub outcome: BuildOutcome,
    pub check: OutcomeCheck,
}

pub fn load_partition(source: &PartitionSource, n: u32, seed: Option<u64>) -> Result<Partition2> {
    match source {
        PartitionSource::Uniform(i) => {
            if *i != 1 && *i != 2 {
                return Err(Error::Usage(format!("class {i} is not 1 or 2")));
            }
            Ok(Partition2::uniform(n, *i))
        }
        PartitionSource::Random { bias } => {
            if !(0.0..=1.0).contains(bias) {
                return Err(Error::Usage(format!("bias {bias} is not a probability")));
            }
            let mut rng = job_rng(need_seed(seed, "a random partition")?, 0);
            let class = (0..(n as usize).pow(3)).map(|_| if rng.gen_bool(*bias) { 1 } else { 2 }).collect();
            Partition2::new(n, class)
        }
        PartitionSource::File(path) => {
            let part: Partition2 = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            part.check()?;
            if part.n != n {
                return Err(Error::Usage(format!("partition has side {} but the grid has {n}", part.n)));
            }
            Ok(part)
        }
    }
}

fn run_build(c: &BuildConfig, cfg: &ExperimentConfig) -> Result<RunOutput> {
    let required = required_side(c.t, c.b);
    let n = match (c.n, &c.partition) {
        (Some(n), _) => n,
        (None, PartitionSource::File(path)) => serde_json::from_str::<Partition2>(&std::fs::read_to_string(path)?)?.n,
        (None, _) => u32::try_from(required).map_err(|_| Error::Usage(format!("required side {required} is too large")))?,
    };
    if n > MAX_BUILD_SIDE {
        return Err(Error::GuardExceeded {
            what: "grid side",
            actual: n as usize,
            limit: MAX_BUILD_SIDE as usize,
        });
    }
    if (n as u64) < required && !c.override_schedule {
        return Err(Error::Usage(format!(
            "side {n} is below the required {required} for t = {}, b = {}; pass --override to run anyway",
            c.t, c.b
        )));
    }
    let host = build_qn(n)?;
    let part = load_partition(&c.partition, n, cfg.seed)?;
    let params = BuildParams {
        t: c.t,
        b: c.b,
        colour: c.colour,
        override_schedule: c.override_schedule,
        exec: cfg.exec,
    };
    let outcome = find_blocked_or_bramble(&host, &part, &params)?;
    let check = verify_outcome(&host, &part, &outcome, c.t)?;
    let status = match (&outcome, check.valid) {
        (BuildOutcome::Inconclusive { .. }, _) => Status::Inconclusive,
        (_, true) => Status::Pass,
        (_, false) => Status::Violation,
    };
    let report = BuildReport {
        n,
        t: c.t,
        b: c.b,
        colour: c.colour,
        required_side: required,
        guaranteed: n as u64 >= required,
        outcome,
        check,
    };
    let text = match cfg.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let (branch, colour) = match &report.outcome {
                BuildOutcome::Blocked { colour, .. } => ("blocked", colour.to_string()),
                BuildOutcome::Bramble(b) => ("bramble", b.colour.to_string()),
                BuildOutcome::Inconclusive { .. } => ("inconclusive", String::new()),
            };
            csv_table(
                &["n", "t", "b", "branch", "colour", "valid", "tw_lower", "guaranteed"],
                [vec![
                    n.to_string(),
                    c.t.to_string(),
                    c.b.to_string(),
                    branch.to_string(),
                    colour,
                    report.check.valid.to_string(),
                    report.check.tw_lower.to_string(),
                    report.guaranteed.to_string(),
                ]],
            )?
        }
    };
    Ok(RunOutput { status, text })
}

#[derive(Clone, Debug, Serialize)]
struct TreewidthReport {
    vertices: usize,
    edges: usize,
    /// Exact width, or the decided bound.
    width: Option<i64>,
    decision: Option<String>,
    decomposition: Option<String>,
}

fn load_graph(source: &GraphSource) -> Result<GridGraph> {
    match source {
        GraphSource::Grid(n) => build_qn(*n),
        GraphSource::Plane(m) => triangulated_plane(*m),
        GraphSource::File(path) => {
            let j: GraphJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            GridGraph::from_json(&j)
        }
    }
}

fn run_treewidth(c: &TreewidthConfig, cfg: &ExperimentConfig) -> Result<RunOutput> {
    let g = Graph::from_adjacency(&load_graph(&c.source)?);
    let mut report = TreewidthReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        width: None,
        decision: None,
        decomposition: None,
    };
    let status = match c.decide {
        Some(k) => match treewidth_at_most(&g, k, c.budget)? {
            Decision::Yes(td) => {
                report.decision = Some(format!("tw <= {k}"));
                report.width = Some(td.width());
                report.decomposition = Some(td.to_text());
                Status::Pass
            }
            Decision::No => {
                report.decision = Some(format!("tw > {k}"));
                Status::Pass
            }
            Decision::Unknown => {
                report.decision = Some("unknown".into());
                Status::Inconclusive
            }
        },
        None => {
            let (w, td) = exact_treewidth_with(&g, cfg.guard_vertices)?;
            report.width = Some(w);
            report.decomposition = Some(td.to_text());
            Status::Pass
        }
    };
    let text = match cfg.format {
        Format::Json => json(&report)?,
        Format::Csv => csv_table(
            &["vertices", "edges", "width", "decision"],
            [vec![
                report.vertices.to_string(),
                report.edges.to_string(),
                report.width.map(|w| w.to_string()).unwrap_or_default(),
                report.decision.clone().unwrap_or_default(),
            ]],
        )?,
    };
    Ok(RunOutput { status, text })
}
