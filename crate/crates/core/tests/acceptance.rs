//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

mod common;

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use kscheck::coloring::{
    build_graph, find_ks_coloring, meyer_color, rational_frame_from_quaternion,
};
use kscheck::constructions::{
    build_nine_vectors, random_family_params, validate_nine, FamilyParameters,
};
use kscheck::quantum::{verify_sum_rules, Spin1Representation};
use kscheck::simulator::{precision_sweep, MeyerModel};
use kscheck::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

const F_TARGET: &str = "1.108";
const F_TARGET_VALUE: f64 = 1.108;
const RANDOM_FAMILIES: usize = 100;
const FAMILY_HEIGHT: i64 = 25;
const QUATERNION_TRIADS: usize = 10_000;
const QUATERNION_BOUND: i64 = 50;
const MIN_CORPUS: usize = 50;
const MAX_CORPUS_VERTICES: usize = 15;
const SWEEP_EPSILON: f64 = 1e-3;
const SWEEP_SAMPLES: u64 = 100_000;
const MAX_RADIUS: f64 = 0.02;
const CK_EPSILON: &str = "1e-3";
const CK_SEEDS: &str = "100";
const CK_UNION_BOUND_BELOW: f64 = 0.01;
const CK_OVERLAP_RANGE: (f64, f64) = (0.10, 0.12);

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn kscheck(dir: &std::path::Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kscheck"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Option<Value> {
    serde_json::from_slice(&out.stdout).ok()
}

/// Decimal digits of a non-negative rational, rounded half up or truncated.
fn decimal(q: &Rational, places: u32, round: bool) -> String {
    let scale = BigInt::from(10).pow(places);
    let num: BigInt = q.numer() * &scale;
    let den: BigInt = q.denom().clone();
    let scaled = if round {
        (num * BigInt::from(2) + &den).div_floor(&(den * BigInt::from(2)))
    } else {
        num.div_floor(&den)
    };
    let (int, frac) = scaled.div_rem(&scale);
    format!(
        "{int}.{:0>width$}",
        frac.to_string(),
        width = places as usize
    )
}

fn within(limit: Duration, start: Instant) -> (bool, f64) {
    let t = start.elapsed();
    (t < limit, t.as_secs_f64())
}

fn criterion_1(dir: &TempDir) -> Outcome {
    let start = Instant::now();
    let out = kscheck(dir.path(), &["compute-f", "--paper-params", "--json"]);
    let (fast, secs) = within(Duration::from_secs(1), start);
    let Some(v) = stdout_json(&out) else {
        return outcome(false, "compute-f produced no JSON");
    };
    let Ok(f) = v["F_exact"].as_str().unwrap_or("").parse::<Rational>() else {
        return outcome(false, "F_exact is not a rational");
    };
    let rounded = decimal(&f, 3, true);
    let truncated = decimal(&f, 3, false);
    let agrees = v["F_rounded_3"] == rounded.as_str() && v["F_truncated_3"] == truncated.as_str();
    outcome(
        code(&out) == 0 && agrees && rounded == F_TARGET && fast,
        format!(
            "F = {f} ~ {}; 3-decimal rounding {rounded} (want {F_TARGET}); truncation {truncated}; {secs:.2} s (< 1 s)",
            decimal(&f, 12, true)
        ),
    )
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn criterion_2(dir: &TempDir) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let check = |args: &[&str]| -> bool {
        let out = kscheck(dir.path(), args);
        code(&out) == 0
            && stdout_json(&out)
                .is_some_and(|v| v["infeasible"] == true && v["certificate_verified"] == true)
    };
    if !check(&["verify-lemma1", "--paper-params", "--json"]) {
        failures.push("published".to_string());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..RANDOM_FAMILIES {
        let spec = random_family_params(&mut rng, FAMILY_HEIGHT).spec();
        let path = dir.path().join(format!("family{i}.json"));
        std::fs::write(&path, serde_json::to_string(&spec).unwrap()).unwrap();
        if !check(&[
            "verify-lemma1",
            "--family",
            path.to_str().unwrap(),
            "--json",
        ]) {
            failures.push(format!("random #{i}"));
        }
    }
    let (fast, secs) = within(Duration::from_secs(10), start);
    outcome(
        failures.is_empty() && fast,
        format!(
            "{} of {} families certified infeasible; {secs:.2} s (< 10 s){}",
            RANDOM_FAMILIES + 1 - failures.len(),
            RANDOM_FAMILIES + 1,
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failed: {failures:?}")
            }
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut families = vec![FamilyParameters::paper()];
    families.extend((0..RANDOM_FAMILIES).map(|_| random_family_params(&mut rng, FAMILY_HEIGHT)));
    let mut checks = 0;
    let mut failed = 0;
    let mut per_family = usize::MAX;
    for params in &families {
        let results = validate_nine(&build_nine_vectors(params).unwrap());
        per_family = per_family.min(results.len());
        checks += results.len();
        failed += results.iter().filter(|c| !c.passed).count();
    }
    outcome(
        failed == 0 && per_family >= 13,
        format!(
            "{} families, {per_family} exact checks each (at least 13), {checks} total, {failed} failed",
            families.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut triads = 0;
    let mut violations = 0;
    while triads < QUATERNION_TRIADS {
        let q: [i64; 4] =
            std::array::from_fn(|_| rng.random_range(-QUATERNION_BOUND..=QUATERNION_BOUND));
        let Ok(frame) = rational_frame_from_quaternion(q[0], q[1], q[2], q[3]) else {
            continue;
        };
        triads += 1;
        let colors = frame.each_ref().map(meyer_color);
        if colors[0] == colors[1] || colors[1] == colors[2] || colors[0] == colors[2] {
            violations += 1;
        }
    }
    let (fast, secs) = within(Duration::from_secs(10), start);
    outcome(
        violations == 0 && fast,
        format!("{triads} triads, {violations} violations; {secs:.2} s (< 10 s)"),
    )
}

fn criterion_5() -> Outcome {
    let corpus = common::oracle_corpus();
    let largest = corpus
        .iter()
        .map(|c| c.graph.vertex_count())
        .max()
        .unwrap_or(0);
    let mut disagreements = Vec::new();
    let mut unreplayed = 0;
    let mut infeasible = 0;
    for case in &corpus {
        let (colorable, count, replayed) = common::compare(case);
        if colorable != (count > 0) {
            disagreements.push(case.name.clone());
        }
        unreplayed += usize::from(!replayed);
        infeasible += usize::from(!colorable);
    }
    // the first eight cases are the nine-vector set under every {A, B, C} assignment
    let nine = build_graph(
        &build_nine_vectors(&FamilyParameters::paper())
            .unwrap()
            .to_vector_set(),
        None,
    )
    .unwrap();
    let covers_nine = (0..8u8).all(|mask| {
        corpus[mask as usize].graph.edges() == nine.edges()
            && corpus[mask as usize].partial == common::abc_partial(&nine, mask)
    });
    let blocked_only_all_ones = (0..8u8).all(|mask| {
        let r = find_ks_coloring(&nine, &common::abc_partial(&nine, mask)).unwrap();
        r.is_colorable() == (mask != 0b111)
    });
    outcome(
        disagreements.is_empty()
            && unreplayed == 0
            && corpus.len() >= MIN_CORPUS
            && largest <= MAX_CORPUS_VERTICES
            && covers_nine
            && blocked_only_all_ones,
        format!(
            "{} graphs (at least {MIN_CORPUS}), at most {largest} vertices, {infeasible} infeasible; {} disagreements; {unreplayed} unverified results; all 8 assignments of the nine-vector set: {covers_nine}",
            corpus.len(),
            disagreements.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let params = FamilyParameters::paper();
    let model = MeyerModel::matching(&build_nine_vectors(&params).unwrap().b);
    let report = match precision_sweep(&model, &params, &[SWEEP_EPSILON], SWEEP_SAMPLES, 0) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("sweep failed: {e}")),
    };
    let (fast, secs) = within(Duration::from_secs(60), start);
    let entry = &report.entries[0];
    let nchv = entry.nchv.as_ref().expect("model given");
    let (Some(fq), Some(rq)) = (entry.qm.f_estimate(), entry.qm.confidence_radius()) else {
        return outcome(false, "QM ensemble is degenerate");
    };
    let (Some(fn_), Some(rn)) = (nchv.f_estimate(), nchv.confidence_radius()) else {
        return outcome(false, format!("{} ensemble is degenerate", nchv.model));
    };
    let nchv_ok = fn_ <= 1.0 + rn;
    let qm_ok = (fq - F_TARGET_VALUE).abs() <= rq;
    let radii_ok = rn < MAX_RADIUS && rq < MAX_RADIUS;
    outcome(
        nchv_ok && qm_ok && radii_ok && fast,
        format!(
            "ε = {SWEEP_EPSILON}, {SWEEP_SAMPLES} samples: {} F = {fn_:.4} ± {rn:.4} (≤ 1 + r: {nchv_ok}); QM F = {fq:.4} ± {rq:.4} (within r of {F_TARGET_VALUE}: {qm_ok}); radii < {MAX_RADIUS}: {radii_ok}; {secs:.2} s (< 60 s)",
            nchv.model
        ),
    )
}

fn criterion_7(dir: &TempDir) -> Outcome {
    let start = Instant::now();
    let out = kscheck(
        dir.path(),
        &[
            "clifton-kent",
            "--epsilon",
            CK_EPSILON,
            "--seeds",
            CK_SEEDS,
            "--json",
        ],
    );
    let (fast, secs) = within(Duration::from_secs(5), start);
    let Some(v) = stdout_json(&out) else {
        return outcome(false, format!("exit {}, no JSON", code(&out)));
    };
    let bound = v["max_union_bound"].as_f64().unwrap_or(f64::NAN);
    let lo = v["min_overlap"].as_f64().unwrap_or(f64::NAN);
    let hi = v["max_overlap"].as_f64().unwrap_or(f64::NAN);
    let ok = code(&out) == 0
        && bound < CK_UNION_BOUND_BELOW
        && lo >= CK_OVERLAP_RANGE.0
        && hi <= CK_OVERLAP_RANGE.1;
    outcome(
        ok && fast,
        format!(
            "ε = {CK_EPSILON}, {CK_SEEDS} seeds, exit {}: max union bound {bound:.3e} (< {CK_UNION_BOUND_BELOW}); overlap in [{lo:.6}, {hi:.6}] (inside [{}, {}]); {secs:.2} s (< 5 s)",
            code(&out),
            CK_OVERLAP_RANGE.0,
            CK_OVERLAP_RANGE.1
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut failed = Vec::new();
    let mut checks = 0;
    let mut triads = 0;
    for (name, rep) in [
        ("vector", Spin1Representation::vector()),
        ("standard", Spin1Representation::standard()),
    ] {
        let report = verify_sum_rules(&rep, 8);
        checks += report.checks.len();
        triads = report.triads;
        if !report.passed() {
            failed.push(name);
        }
    }
    outcome(
        failed.is_empty() && triads >= 100,
        format!(
            "{checks} checks over two spin-1 bases, {triads} random triads each, tolerance 1e-12; failing bases: {failed:?}"
        ),
    )
}

fn criterion_9(dir: &TempDir) -> Outcome {
    let mut mismatched = Vec::new();
    for model in ["meyer", "rotated-meyer", "qm"] {
        let run = |tag: &str| {
            let path = dir.path().join(format!("{model}-{tag}.json"));
            let out = kscheck(
                dir.path(),
                &[
                    "simulate",
                    "--model",
                    model,
                    "--epsilons",
                    "1e-2,1e-3",
                    "--samples",
                    "5000",
                    "--seed",
                    "9",
                    "--json",
                    "--output",
                    path.to_str().unwrap(),
                ],
            );
            let file = std::fs::read(&path).ok();
            let csv = std::fs::read(path.with_extension("csv")).ok();
            (code(&out), out.stdout, file, csv)
        };
        let (a, b) = (run("a"), run("b"));
        if a.0 != 0 || a.2.is_none() || a != b {
            mismatched.push(model);
        }
    }
    outcome(
        mismatched.is_empty(),
        format!(
            "simulate for meyer, rotated-meyer and qm run twice with seed 9: stdout, JSON and CSV byte-identical; mismatches: {mismatched:?}"
        ),
    )
}

fn main() {
    let dir = TempDir::new().expect("temporary directory");
    let criteria: Vec<(&str, Criterion)> = vec![
        ("exact quantum value", Box::new(|| criterion_1(&dir))),
        ("nine-vector obstruction", Box::new(|| criterion_2(&dir))),
        ("exact identities", Box::new(criterion_3)),
        ("parity coloring of frames", Box::new(criterion_4)),
        ("search against exhaustive count", Box::new(criterion_5)),
        ("discrimination experiment", Box::new(criterion_6)),
        ("perturbed eight-vector gap", Box::new(|| criterion_7(&dir))),
        ("spin-1 sum rules", Box::new(criterion_8)),
        ("determinism", Box::new(|| criterion_9(&dir))),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failures += usize::from(!o.passed);
        println!(
            "criterion {} [{name}]: {} - {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
