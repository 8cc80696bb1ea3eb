//! Ensembles and precision sweeps.
//!
//! Trial `i` of a run with seed `s` draws all of its randomness from
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`, so trials can be
//! evaluated in any order or in parallel with identical results. Sweep entry
//! `j` uses seed `s + j·0x9E3779B97F4A7C15` (wrapping); entry 0 therefore
//! reproduces a direct call with seed `s`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{build_nine_vectors, FamilyParameters};
use crate::vector::RationalUnitVector3;

use super::model::NchvModel;
use super::sampler::{check_epsilon, DirectionSampler};
use super::SimulationError;

pub const SUB_SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Width of the reported confidence interval, in binomial standard errors.
pub const CONFIDENCE_SIGMAS: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionSpec {
    pub epsilon: f64,
    pub samples: u64,
    pub seed: u64,
}

impl PrecisionSpec {
    pub fn new(epsilon: f64, samples: u64, seed: u64) -> Result<Self, SimulationError> {
        let spec = PrecisionSpec {
            epsilon,
            samples,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        check_epsilon(self.epsilon)?;
        if self.samples == 0 {
            return Err(SimulationError::NoSamples);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    Nchv,
    Qm,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleCounts {
    pub prepared: u64,
    pub accepted: u64,
    pub measured_a: u64,
    pub ones_a: u64,
    pub measured_c: u64,
    pub ones_c: u64,
}

impl EnsembleCounts {
    fn merge(self, o: EnsembleCounts) -> EnsembleCounts {
        EnsembleCounts {
            prepared: self.prepared + o.prepared,
            accepted: self.accepted + o.accepted,
            measured_a: self.measured_a + o.measured_a,
            ones_a: self.ones_a + o.ones_a,
            measured_c: self.measured_c + o.measured_c,
            ones_c: self.ones_c + o.ones_c,
        }
    }

    fn from_trial(t: Trial) -> EnsembleCounts {
        let mut c = EnsembleCounts {
            prepared: 1,
            ..Default::default()
        };
        match t {
            Trial::Rejected => {}
            Trial::A(one) => {
                c.accepted = 1;
                c.measured_a = 1;
                c.ones_a = one.into();
            }
            Trial::C(one) => {
                c.accepted = 1;
                c.measured_c = 1;
                c.ones_c = one.into();
            }
        }
        c
    }

    /// Every accepted trial is measured exactly once, and nothing counts more
    /// ones than measurements.
    pub fn is_consistent(&self) -> bool {
        self.accepted == self.measured_a + self.measured_c
            && self.accepted <= self.prepared
            && self.ones_a <= self.measured_a
            && self.ones_c <= self.measured_c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub p_a_given_b: f64,
    pub p_c_given_b: f64,
    pub f_estimate: f64,
    /// 3σ binomial radius of `f_estimate`.
    pub confidence_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub kind: EnsembleKind,
    pub model: String,
    pub epsilon: f64,
    pub samples: u64,
    pub seed: u64,
    pub counts: EnsembleCounts,
    pub p_b: f64,
    /// Absent when either conditional subensemble is empty.
    pub estimates: Option<Estimates>,
    pub degenerate: bool,
}

impl EnsembleReport {
    fn from_counts(
        kind: EnsembleKind,
        model: String,
        spec: &PrecisionSpec,
        counts: EnsembleCounts,
    ) -> Self {
        let p_b = counts.accepted as f64 / counts.prepared as f64;
        let estimates = (counts.measured_a > 0 && counts.measured_c > 0).then(|| {
            let pa = counts.ones_a as f64 / counts.measured_a as f64;
            let pc = counts.ones_c as f64 / counts.measured_c as f64;
            let var = pa * (1.0 - pa) / counts.measured_a as f64
                + pc * (1.0 - pc) / counts.measured_c as f64;
            Estimates {
                p_a_given_b: pa,
                p_c_given_b: pc,
                f_estimate: pa + pc,
                confidence_radius: CONFIDENCE_SIGMAS * var.sqrt(),
            }
        });
        EnsembleReport {
            kind,
            model,
            epsilon: spec.epsilon,
            samples: spec.samples,
            seed: spec.seed,
            counts,
            p_b,
            degenerate: estimates.is_none(),
            estimates,
        }
    }

    pub fn f_estimate(&self) -> Option<f64> {
        self.estimates.map(|e| e.f_estimate)
    }

    pub fn confidence_radius(&self) -> Option<f64> {
        self.estimates.map(|e| e.confidence_radius)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Trial {
    Rejected,
    A(bool),
    C(bool),
}

struct Targets {
    a: RationalUnitVector3,
    b: RationalUnitVector3,
    c: RationalUnitVector3,
}

impl Targets {
    fn new(params: &FamilyParameters) -> Result<Self, SimulationError> {
        let set = build_nine_vectors(params)?;
        Ok(Targets {
            a: set.a,
            b: set.b,
            c: set.c,
        })
    }
}

struct Samplers {
    a: DirectionSampler,
    b: DirectionSampler,
    c: DirectionSampler,
}

impl Samplers {
    fn new(t: &Targets, epsilon: f64) -> Result<Self, SimulationError> {
        Ok(Samplers {
            a: DirectionSampler::new(&t.a, epsilon)?,
            b: DirectionSampler::new(&t.b, epsilon)?,
            c: DirectionSampler::new(&t.c, epsilon)?,
        })
    }

    /// Even trials measure A, odd trials C.
    fn measured(&self, trial: u64) -> &DirectionSampler {
        if trial.is_multiple_of(2) {
            &self.a
        } else {
            &self.c
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn tally<F>(samples: u64, trial: F) -> EnsembleCounts
where
    F: Fn(u64) -> Trial + Sync,
{
    (0..samples)
        .into_par_iter()
        .map(|i| EnsembleCounts::from_trial(trial(i)))
        .reduce(EnsembleCounts::default, EnsembleCounts::merge)
}

/// Preparation by filtering: a particle is kept when the model answers 1
/// along the realized B direction, then measured along the realized A (even
/// trials) or C (odd trials).
pub fn run_nchv_experiment<M: NchvModel>(
    model: &M,
    params: &FamilyParameters,
    spec: &PrecisionSpec,
) -> Result<EnsembleReport, SimulationError> {
    spec.validate()?;
    let samplers = Samplers::new(&Targets::new(params)?, spec.epsilon)?;
    let counts = tally(spec.samples, |i| {
        let mut rng = trial_rng(spec.seed, i);
        let hidden = model.sample_hidden(&mut rng);
        let b = samplers.b.sample(&mut rng);
        if !model.outcome(&hidden, &b) {
            return Trial::Rejected;
        }
        let d = samplers.measured(i).sample(&mut rng);
        let one = model.outcome(&hidden, &d);
        if i % 2 == 0 {
            Trial::A(one)
        } else {
            Trial::C(one)
        }
    });
    Ok(EnsembleReport::from_counts(
        EnsembleKind::Nchv,
        model.name(),
        spec,
        counts,
    ))
}

/// Born-rule reference: every particle is prepared along a realized B
/// direction b (so P(B) = 1), and a measurement along realized direction d
/// yields 1 with probability (d·b)², computed exactly and then compared with
/// a uniform draw.
pub fn run_qm_reference(
    params: &FamilyParameters,
    spec: &PrecisionSpec,
) -> Result<EnsembleReport, SimulationError> {
    spec.validate()?;
    let samplers = Samplers::new(&Targets::new(params)?, spec.epsilon)?;
    let counts = tally(spec.samples, |i| {
        let mut rng = trial_rng(spec.seed, i);
        let (b, b_scale) = samplers.b.sample_integer(&mut rng);
        let (d, d_scale) = samplers.measured(i).sample_integer(&mut rng);
        let p = born_probability(&b, &b_scale, &d, &d_scale);
        let u: f64 = rng.random();
        let one = u < p;
        if i % 2 == 0 {
            Trial::A(one)
        } else {
            Trial::C(one)
        }
    });
    Ok(EnsembleReport::from_counts(
        EnsembleKind::Qm,
        "qm".to_string(),
        spec,
        counts,
    ))
}

/// (b·d)² for the directions b/b_scale and d/d_scale. The dot product is
/// exact; only the final quotient is rounded.
fn born_probability(b: &[BigInt; 3], b_scale: &BigInt, d: &[BigInt; 3], d_scale: &BigInt) -> f64 {
    let dot = &b[0] * &d[0] + &b[1] * &d[1] + &b[2] * &d[2];
    let r = dot.to_f64().expect("finite") / (b_scale * d_scale).to_f64().expect("finite");
    r * r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub epsilon: f64,
    pub sub_seed: u64,
    pub nchv: Option<EnsembleReport>,
    pub qm: EnsembleReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub model: String,
    pub samples: u64,
    pub seed: u64,
    pub entries: Vec<SweepEntry>,
}

pub fn sub_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(SUB_SEED_STRIDE))
}

fn check_sweep(epsilons: &[f64], samples: u64) -> Result<(), SimulationError> {
    if epsilons.is_empty() {
        return Err(SimulationError::EmptySweep);
    }
    if samples == 0 {
        return Err(SimulationError::NoSamples);
    }
    for &e in epsilons {
        check_epsilon(e)?;
    }
    if let Some(i) = epsilons.windows(2).position(|w| w[1] >= w[0]) {
        return Err(SimulationError::NotDecreasing {
            index: i + 1,
            previous: epsilons[i],
            value: epsilons[i + 1],
        });
    }
    Ok(())
}

/// NCHV model and QM reference side by side at each ε.
pub fn precision_sweep<M: NchvModel>(
    model: &M,
    params: &FamilyParameters,
    epsilons: &[f64],
    samples: u64,
    seed: u64,
) -> Result<SweepReport, SimulationError> {
    sweep(Some(model), params, epsilons, samples, seed)
}

/// QM reference only.
pub fn qm_sweep(
    params: &FamilyParameters,
    epsilons: &[f64],
    samples: u64,
    seed: u64,
) -> Result<SweepReport, SimulationError> {
    sweep::<super::model::ConstantModel>(None, params, epsilons, samples, seed)
}

fn sweep<M: NchvModel>(
    model: Option<&M>,
    params: &FamilyParameters,
    epsilons: &[f64],
    samples: u64,
    seed: u64,
) -> Result<SweepReport, SimulationError> {
    check_sweep(epsilons, samples)?;
    let mut entries = Vec::with_capacity(epsilons.len());
    for (j, &epsilon) in epsilons.iter().enumerate() {
        let spec = PrecisionSpec {
            epsilon,
            samples,
            seed: sub_seed(seed, j),
        };
        let nchv = model
            .map(|m| run_nchv_experiment(m, params, &spec))
            .transpose()?;
        let qm = run_qm_reference(params, &spec)?;
        entries.push(SweepEntry {
            epsilon,
            sub_seed: spec.seed,
            nchv,
            qm,
        });
    }
    Ok(SweepReport {
        model: model.map_or_else(|| "qm".to_string(), |m| m.name()),
        samples,
        seed,
        entries,
    })
}

/// One CSV line: a single ensemble of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCsvRow {
    pub epsilon: f64,
    pub sub_seed: u64,
    pub kind: EnsembleKind,
    pub model: String,
    pub samples: u64,
    pub accepted: u64,
    pub measured_a: u64,
    pub ones_a: u64,
    pub measured_c: u64,
    pub ones_c: u64,
    pub p_b: f64,
    pub p_a_given_b: Option<f64>,
    pub p_c_given_b: Option<f64>,
    pub f_estimate: Option<f64>,
    pub confidence_radius: Option<f64>,
    pub degenerate: bool,
}

impl SweepCsvRow {
    fn from_report(sub_seed: u64, r: &EnsembleReport) -> Self {
        SweepCsvRow {
            epsilon: r.epsilon,
            sub_seed,
            kind: r.kind,
            model: r.model.clone(),
            samples: r.samples,
            accepted: r.counts.accepted,
            measured_a: r.counts.measured_a,
            ones_a: r.counts.ones_a,
            measured_c: r.counts.measured_c,
            ones_c: r.counts.ones_c,
            p_b: r.p_b,
            p_a_given_b: r.estimates.map(|e| e.p_a_given_b),
            p_c_given_b: r.estimates.map(|e| e.p_c_given_b),
            f_estimate: r.f_estimate(),
            confidence_radius: r.confidence_radius(),
            degenerate: r.degenerate,
        }
    }
}

impl SweepReport {
    pub fn csv_rows(&self) -> Vec<SweepCsvRow> {
        let mut rows = Vec::new();
        for e in &self.entries {
            if let Some(n) = &e.nchv {
                rows.push(SweepCsvRow::from_report(e.sub_seed, n));
            }
            rows.push(SweepCsvRow::from_report(e.sub_seed, &e.qm));
        }
        rows
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut writer = csv::Writer::from_writer(w);
        for row in self.csv_rows() {
            writer.serialize(row)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

pub fn read_sweep_csv<R: std::io::Read>(r: R) -> Result<Vec<SweepCsvRow>, csv::Error> {
    csv::Reader::from_reader(r).deserialize().collect()
}
