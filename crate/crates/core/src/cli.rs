//! Command-line front end.
//!
//! Exit codes: 0 when the checked claim holds, 1 when it is violated (or, for
//! `check-colorable`, when the set is not colorable), 2 on invalid input.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::coloring::{
    build_graph, find_ks_coloring, find_ks_coloring_with, meyer_color, verify_refutation,
    verify_witness, Axis, Conflict, GraphSummary, OrthogonalityGraph, Reason, Refutation,
    RefutationEnd, Rules, SearchError,
};
use crate::constructions::{
    build_ck_configuration, build_nine_vectors, validate_nine, ConstructionError, ExactCheck,
    FamilyParameters, FamilySpec, NINE_NAMES,
};
use crate::io::{self, ColorabilityReport, IoError};
use crate::quantum::{ck_overlap, ck_union_bound, f_qm};
use crate::simulator::{
    precision_sweep, qm_sweep, MeyerModel, RotatedMeyerModel, SimulationError, SweepReport,
};

pub const DEFAULT_SEED: u64 = 0;
pub const THREADS_ENV: &str = "KSCHECK_THREADS";

/// Thresholds for `clifton-kent`.
pub const CK_MAX_UNION_BOUND: f64 = 0.01;
pub const CK_MIN_OVERLAP: f64 = 0.09;

#[derive(Debug, Parser)]
#[command(
    name = "kscheck",
    version,
    about = "Exact checks of a Kochen-Specker obstruction on the rational unit sphere"
)]
pub struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Print the JSON report on stdout instead of a text summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for simulations (defaults to one per core).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the nine-vector identities and refute f(A) = f(B) = f(C) = 1.
    VerifyLemma1 {
        #[command(flatten)]
        family: FamilySource,
        /// Also write the nine vectors as a vector-set file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Exact quantum value of F = P(A|B) + P(C|B).
    ComputeF {
        #[command(flatten)]
        family: FamilySource,
    },
    /// Search for a KS coloring of a vector set.
    CheckColorable {
        /// Vector-set JSON file.
        vectors: PathBuf,
        /// Partial assignment JSON file.
        #[arg(long)]
        partial: Option<PathBuf>,
        /// Allow two orthogonal vectors to both be 1 outside complete contexts.
        #[arg(long)]
        no_pair_rule: bool,
        /// Orthogonality tolerance for real-valued sets.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Finite-precision measurement simulation over a sweep of ε.
    Simulate {
        #[arg(long, value_enum)]
        model: ModelChoice,
        #[command(flatten)]
        family: FamilySource,
        /// Strictly decreasing cap half-angles in radians.
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Parity class valued 1; defaults to the class of B.
        #[arg(long)]
        one_axis: Option<Axis>,
    },
    /// Union bound against |<A'|B'>|^2 for perturbed eight-vector configurations.
    CliftonKent {
        #[arg(long)]
        epsilon: f64,
        /// Number of configurations, seeded consecutively from --seed.
        #[arg(long, default_value_t = 100)]
        seeds: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Meyer,
    RotatedMeyer,
    Qm,
}

/// Where the four cosines come from. Without `--family` the published values
/// are used.
#[derive(Debug, Args)]
pub struct FamilySource {
    /// Use the published parameter values.
    #[arg(long, conflicts_with = "family")]
    pub paper_params: bool,
    /// family.json with keys cA, cB, cC, cD.
    #[arg(long)]
    pub family: Option<PathBuf>,
}

impl FamilySource {
    fn spec(&self) -> Result<FamilySpec, CliError> {
        match &self.family {
            Some(path) => Ok(io::parse_family(&io::read_text(path)?)?),
            None => Ok(FamilySpec::paper()),
        }
    }

    fn load(&self) -> Result<(FamilySpec, FamilyParameters), CliError> {
        let spec = self.spec()?;
        let params = spec.params()?;
        Ok((spec, params))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

/// Whether the checked claim held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Confirmed,
    Violated,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Confirmed
        } else {
            Status::Violated
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Confirmed => 0,
            Status::Violated => 1,
        }
    }
}

pub const INPUT_ERROR_EXIT: u8 = 2;

struct Report {
    json: serde_json::Value,
    text: String,
    status: Status,
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    if let Some(n) = cli.threads {
        // a second initialization (tests running in-process) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let report = match &cli.command {
        Command::VerifyLemma1 { family, export } => verify_lemma1(family, export.as_deref())?,
        Command::ComputeF { family } => compute_f(family)?,
        Command::CheckColorable {
            vectors,
            partial,
            no_pair_rule,
            tolerance,
        } => check_colorable(vectors, partial.as_deref(), *no_pair_rule, *tolerance)?,
        Command::Simulate {
            model,
            family,
            epsilons,
            samples,
            one_axis,
        } => simulate(
            *model,
            family,
            epsilons,
            *samples,
            *one_axis,
            cli.seed,
            cli.output.as_deref(),
        )?,
        Command::CliftonKent { epsilon, seeds } => clifton_kent(*epsilon, *seeds, cli.seed)?,
    };
    let json_text = io::to_json_string(&report.json);
    if let Some(path) = &cli.output {
        io::write_text(path, &json_text)?;
    }
    if cli.json {
        out.write_all(json_text.as_bytes())?;
    } else {
        out.write_all(report.text.as_bytes())?;
    }
    Ok(report.status)
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn verify_lemma1(family: &FamilySource, export: Option<&Path>) -> Result<Report, CliError> {
    let (spec, params) = family.load()?;
    let set = build_nine_vectors(&params)?;
    let checks = validate_nine(&set);
    let checks_ok = checks.iter().all(|c| c.passed);
    let vector_set = set.to_vector_set();
    if let Some(path) = export {
        io::write_text(
            path,
            &io::to_json_string(&io::vector_set_to_json(&vector_set)),
        )?;
    }
    let graph = build_graph(&vector_set, None).map_err(IoError::from)?;
    let by_input = BTreeMap::from([(0, true), (1, true), (2, true)]);
    let partial = io::partial_for_graph(&graph, &by_input)?;
    let result = find_ks_coloring(&graph, &partial)?;
    let names = vertex_names(&graph, &NINE_NAMES);
    let certificate_ok = match &result {
        crate::coloring::ColorabilityResult::Infeasible(r) => {
            verify_refutation(&graph, &partial, Rules::default(), r).is_ok()
        }
        crate::coloring::ColorabilityResult::Colorable(_) => false,
    };
    let infeasible = !result.is_colorable();
    let status = Status::from_bool(checks_ok && infeasible && certificate_ok);

    let mut text = String::new();
    let failed: Vec<&ExactCheck> = checks.iter().filter(|c| !c.passed).collect();
    let _ = writeln!(
        text,
        "exact identities: {}/{} hold",
        checks.len() - failed.len(),
        checks.len()
    );
    for c in &failed {
        let _ = writeln!(
            text,
            "  FAILED {} = {} (expected {})",
            c.name, c.value, c.expected
        );
    }
    match &result {
        crate::coloring::ColorabilityResult::Infeasible(r) => {
            let _ = writeln!(
                text,
                "no KS coloring with f(A) = f(B) = f(C) = 1 ({} forced steps, certificate {}):",
                r.step_count(),
                if certificate_ok {
                    "replayed"
                } else {
                    "REJECTED"
                }
            );
            describe_refutation(r, &names, 1, &mut text);
        }
        crate::coloring::ColorabilityResult::Colorable(c) => {
            let _ = writeln!(
                text,
                "UNEXPECTED: coloring found with f(A) = f(B) = f(C) = 1:"
            );
            for (name, v) in names.iter().zip(c.as_bits()) {
                let _ = writeln!(text, "  f({name}) = {v}");
            }
        }
    }

    let json = json!({
        "family": spec,
        "checks": checks,
        "all_checks_passed": checks_ok,
        "graph": graph.summary(),
        "vertex_names": names,
        "infeasible": infeasible,
        "witness": result.witness().map(|w| w.as_bits()),
        "certificate": result.certificate(),
        "certificate_verified": certificate_ok,
        "forced_steps": result.certificate().map(Refutation::step_count),
    });
    Ok(Report { json, text, status })
}

fn compute_f(family: &FamilySource) -> Result<Report, CliError> {
    let (spec, params) = family.load()?;
    let f = f_qm(&params)?;
    let value = f.value();
    let json = json!({
        "family": spec,
        "F_exact": value,
        "F_decimal": value.to_decimal_rounded(12),
        "F_rounded_3": value.to_decimal_rounded(3),
        "F_truncated_3": value.to_decimal_truncated(3),
        "term_AB": f.term_ab,
        "term_CB": f.term_cb,
    });
    let mut text = String::new();
    let _ = writeln!(text, "F = |<A|B>|^2 + |<C|B>|^2");
    let _ = writeln!(text, "  = {} + {}", f.term_ab, f.term_cb);
    let _ = writeln!(text, "  = {value}");
    let _ = writeln!(text, "  ~ {}", value.to_decimal_rounded(12));
    let _ = writeln!(
        text,
        "3 decimals: {} rounded, {} truncated",
        value.to_decimal_rounded(3),
        value.to_decimal_truncated(3)
    );
    Ok(Report {
        json,
        text,
        status: Status::Confirmed,
    })
}

fn check_colorable(
    vectors: &Path,
    partial: Option<&Path>,
    no_pair_rule: bool,
    tolerance: Option<f64>,
) -> Result<Report, CliError> {
    let set = io::parse_vector_set(&io::read_text(vectors)?)?;
    let graph = build_graph(&set, tolerance).map_err(IoError::from)?;
    let by_input = match partial {
        Some(p) => io::parse_partial(&io::read_text(p)?)?,
        None => BTreeMap::new(),
    };
    let partial = io::partial_for_graph(&graph, &by_input)?;
    let rules = Rules {
        pair_rule: !no_pair_rule,
    };
    let result = find_ks_coloring_with(&graph, &partial, rules)?;
    let report = ColorabilityReport::new(&graph, &result);
    let names: Vec<String> = (0..graph.vertex_count()).map(|v| format!("#{v}")).collect();

    let mut text = String::new();
    let GraphSummary {
        vertices,
        edges,
        contexts,
        ..
    } = graph.summary();
    let _ = writeln!(
        text,
        "{vertices} directions, {edges} orthogonal pairs, {contexts} complete contexts"
    );
    match (&result.witness(), &result.certificate()) {
        (Some(w), _) => {
            debug_assert!(verify_witness(&graph, &partial, rules, w).is_ok());
            let ones: Vec<String> = w
                .values
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i.to_string())
                .collect();
            let _ = writeln!(text, "colorable; vertices valued 1: {}", ones.join(" "));
        }
        (None, Some(r)) => {
            let _ = writeln!(
                text,
                "not colorable ({} forced steps, {} leaves):",
                r.step_count(),
                r.leaf_count()
            );
            describe_refutation(r, &names, 1, &mut text);
        }
        (None, None) => unreachable!("a result is either a witness or a certificate"),
    }
    Ok(Report {
        json: to_value(&report),
        text,
        status: Status::from_bool(report.colorable),
    })
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    model: ModelChoice,
    family: &FamilySource,
    epsilons: &[f64],
    samples: u64,
    one_axis: Option<Axis>,
    seed: u64,
    output: Option<&Path>,
) -> Result<Report, CliError> {
    if samples == 0 {
        return Err(SimulationError::NoSamples.into());
    }
    let (_, params) = family.load()?;
    let b_color = meyer_color(&build_nine_vectors(&params)?.b);
    let axis = one_axis.unwrap_or(b_color);
    let sweep = match model {
        ModelChoice::Meyer => {
            precision_sweep(&MeyerModel::new(axis), &params, epsilons, samples, seed)?
        }
        ModelChoice::RotatedMeyer => precision_sweep(
            &RotatedMeyerModel::new(axis),
            &params,
            epsilons,
            samples,
            seed,
        )?,
        ModelChoice::Qm => qm_sweep(&params, epsilons, samples, seed)?,
    };
    let csv_path = output
        .map(|p| p.with_extension("csv"))
        .unwrap_or_else(|| PathBuf::from("sweep.csv"));
    let json_default = PathBuf::from("sweep.json");
    if output.is_none() {
        io::write_text(&json_default, &io::to_json_string(&sweep))?;
    }
    io::write_text(&csv_path, &sweep.to_csv_string())?;
    let text = sweep_table(&sweep, output.unwrap_or(&json_default), &csv_path);
    Ok(Report {
        json: to_value(&sweep),
        text,
        status: Status::Confirmed,
    })
}

fn fmt_estimate(r: Option<&crate::simulator::EnsembleReport>) -> String {
    match r {
        None => "-".to_string(),
        Some(r) => match r.estimates {
            Some(e) => format!("{:.4} ± {:.4}", e.f_estimate, e.confidence_radius),
            None => format!("degenerate (P(B) = {:.4})", r.p_b),
        },
    }
}

fn sweep_table(sweep: &SweepReport, json: &Path, csv: &Path) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "model {}, {} samples per ensemble, seed {}",
        sweep.model, sweep.samples, sweep.seed
    );
    let _ = writeln!(
        text,
        "{:>10}  {:>28}  {:>28}",
        "epsilon", "F (model)", "F (qm)"
    );
    for e in &sweep.entries {
        let _ = writeln!(
            text,
            "{:>10.3e}  {:>28}  {:>28}",
            e.epsilon,
            fmt_estimate(e.nchv.as_ref()),
            fmt_estimate(Some(&e.qm))
        );
    }
    let _ = writeln!(text, "wrote {} and {}", json.display(), csv.display());
    text
}

#[derive(Serialize)]
struct CkRow {
    seed: u64,
    union_bound: f64,
    overlap: f64,
    gap: f64,
}

fn clifton_kent(epsilon: f64, seeds: u64, seed: u64) -> Result<Report, CliError> {
    if seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".to_string()));
    }
    let mut rows = Vec::with_capacity(seeds as usize);
    for s in 0..seeds {
        let config = build_ck_configuration(epsilon, seed.wrapping_add(s))?;
        let union_bound = ck_union_bound(&config);
        let overlap = ck_overlap(&config);
        rows.push(CkRow {
            seed: config.seed,
            union_bound,
            overlap,
            gap: overlap - union_bound,
        });
    }
    let max_bound = rows
        .iter()
        .map(|r| r.union_bound)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_overlap = rows.iter().map(|r| r.overlap).fold(f64::INFINITY, f64::min);
    let max_overlap = rows
        .iter()
        .map(|r| r.overlap)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_gap = rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
    let ok = rows
        .iter()
        .all(|r| r.union_bound < CK_MAX_UNION_BOUND && r.overlap > CK_MIN_OVERLAP);

    let mut text = String::new();
    let _ = writeln!(
        text,
        "epsilon {epsilon:e}, {seeds} configurations from seed {seed}"
    );
    let _ = writeln!(
        text,
        "{:>20}  {:>12}  {:>12}",
        "seed", "union bound", "|<A'|B'>|^2"
    );
    for r in &rows {
        let _ = writeln!(
            text,
            "{:>20}  {:>12.4e}  {:>12.6}",
            r.seed, r.union_bound, r.overlap
        );
    }
    let _ = writeln!(
        text,
        "max bound {max_bound:.4e}, overlap in [{min_overlap:.6}, {max_overlap:.6}], min gap {min_gap:.6}"
    );
    let _ = writeln!(
        text,
        "{}",
        if ok {
            "gap holds for every configuration"
        } else {
            "GAP VIOLATED"
        }
    );
    let json = json!({
        "epsilon": epsilon,
        "seed": seed,
        "seeds": seeds,
        "configurations": rows,
        "max_union_bound": max_bound,
        "min_overlap": min_overlap,
        "max_overlap": max_overlap,
        "min_gap": min_gap,
        "thresholds": { "union_bound_below": CK_MAX_UNION_BOUND, "overlap_above": CK_MIN_OVERLAP },
        "gap_holds": ok,
    });
    Ok(Report {
        json,
        text,
        status: Status::from_bool(ok),
    })
}

/// Display names for graph vertices, taken from the input vector names.
fn vertex_names(graph: &OrthogonalityGraph, input_names: &[&str]) -> Vec<String> {
    let mut names = vec![String::new(); graph.vertex_count()];
    for (i, name) in input_names.iter().enumerate() {
        if let Some(v) = graph.vertex_of_input(i) {
            if names[v].is_empty() {
                names[v] = name.to_string();
            }
        }
    }
    for (v, n) in names.iter_mut().enumerate() {
        if n.is_empty() {
            *n = format!("#{v}");
        }
    }
    names
}

fn describe_refutation(r: &Refutation, names: &[String], depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let ctx = |c: &[usize; 3]| format!("{{{}, {}, {}}}", names[c[0]], names[c[1]], names[c[2]]);
    for s in &r.steps {
        let why = match &s.reason {
            Reason::Excluded { one } => format!("orthogonal to {} = 1", names[*one]),
            Reason::ContextCompletion { context } => {
                format!("the rest of context {} is 0", ctx(context))
            }
        };
        let _ = writeln!(out, "{pad}f({}) = {}  [{why}]", names[s.vertex], s.value);
    }
    match &r.end {
        RefutationEnd::Conflict(c) => {
            let what = match c {
                Conflict::PairBothOne { u, v } => {
                    format!("orthogonal {} and {} are both 1", names[*u], names[*v])
                }
                Conflict::ContextAllZero { context } => {
                    format!("context {} has no 1", ctx(context))
                }
                Conflict::ContextOverfull { context } => {
                    format!("context {} has more than one 1", ctx(context))
                }
            };
            let _ = writeln!(out, "{pad}contradiction: {what}");
        }
        RefutationEnd::Split {
            vertex,
            if_one,
            if_zero,
        } => {
            let _ = writeln!(out, "{pad}case f({}) = 1:", names[*vertex]);
            describe_refutation(if_one, names, depth + 1, out);
            let _ = writeln!(out, "{pad}case f({}) = 0:", names[*vertex]);
            describe_refutation(if_zero, names, depth + 1, out);
        }
    }
}
