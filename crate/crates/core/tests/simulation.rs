use kscheck::angle_between;
use kscheck::coloring::{meyer_color, Axis};
use kscheck::constructions::build_nine_vectors;
use kscheck::constructions::{build_ck_configuration, random_family_params, FamilyParameters};
use kscheck::quantum::{ck_union_bound, f_qm};
use kscheck::simulator::{
    precision_sweep, run_nchv_experiment, run_qm_reference, DirectionSampler, MeyerModel,
    NchvModel, PrecisionSpec, RotatedMeyerModel,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_directions_keep_color_and_stay_in_cap(
        family_seed in any::<u64>(),
        draw_seed in any::<u64>(),
        epsilon in 1e-6f64..0.5,
    ) {
        let params = random_family_params(&mut ChaCha8Rng::seed_from_u64(family_seed), 15);
        let set = build_nine_vectors(&params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(draw_seed);
        for target in [&set.a, &set.b, &set.c] {
            let sampler = DirectionSampler::new(target, epsilon).unwrap();
            for _ in 0..20 {
                let v = sampler.sample(&mut rng);
                prop_assert_eq!(meyer_color(&v), meyer_color(target));
                let angle = angle_between(&v.to_real(), &target.to_real()).unwrap();
                prop_assert!(angle <= epsilon, "angle {} > {}", angle, epsilon);
            }
        }
    }
}

#[test]
fn qm_reference_matches_exact_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..10 {
        let params = random_family_params(&mut rng, 15);
        let exact = f_qm(&params).unwrap().value().to_f64();
        let spec = PrecisionSpec::new(1e-4, 100_000, k).unwrap();
        let report = run_qm_reference(&params, &spec).unwrap();
        let f = report.f_estimate().unwrap();
        let r = report.confidence_radius().unwrap();
        assert!(
            (f - exact).abs() <= r + 1e-6,
            "family {k}: {f} vs {exact} ± {r}"
        );
    }
}

fn assert_nchv_bound<M: NchvModel>(model: &M, params: &FamilyParameters, spec: &PrecisionSpec) {
    let report = run_nchv_experiment(model, params, spec).unwrap();
    assert!(report.counts.is_consistent());
    if report.degenerate {
        return;
    }
    let f = report.f_estimate().unwrap();
    let r = report.confidence_radius().unwrap();
    assert!(f <= 1.0 + r, "{}: F = {f} ± {r}", report.model);
}

#[test]
fn parity_models_respect_noncontextual_bound() {
    let params = FamilyParameters::paper();
    let spec = PrecisionSpec::new(1e-4, 100_000, 3).unwrap();
    for axis in Axis::ALL {
        assert_nchv_bound(&MeyerModel::new(axis), &params, &spec);
        assert_nchv_bound(&RotatedMeyerModel::new(axis), &params, &spec);
    }
}

#[test]
fn experiments_are_deterministic_across_thread_counts() {
    let params = FamilyParameters::paper();
    let spec = PrecisionSpec::new(1e-3, 4_000, 99).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            (
                run_nchv_experiment(&RotatedMeyerModel::new(Axis::Y), &params, &spec).unwrap(),
                run_qm_reference(&params, &spec).unwrap(),
            )
        })
    };
    let one = run(1);
    assert_eq!(one, run(1));
    assert_eq!(one, run(4));
}

#[test]
fn counts_add_up() {
    let params = FamilyParameters::paper();
    let spec = PrecisionSpec::new(1e-2, 5_000, 5).unwrap();
    for axis in Axis::ALL {
        let c = run_nchv_experiment(&RotatedMeyerModel::new(axis), &params, &spec)
            .unwrap()
            .counts;
        assert!(c.is_consistent());
        assert_eq!(c.prepared, 5_000);
    }
    let q = run_qm_reference(&params, &spec).unwrap();
    assert_eq!(q.counts.accepted, q.counts.prepared);
    assert_eq!(q.counts.measured_a + q.counts.measured_c, 5_000);
    assert_eq!(q.counts.measured_a, 2_500);
}

#[test]
fn union_bound_shrinks_with_epsilon() {
    let epsilons = [0.09, 0.05, 0.01, 1e-3, 1e-4];
    for seed in 0..20 {
        let bounds: Vec<f64> = epsilons
            .iter()
            .map(|&e| ck_union_bound(&build_ck_configuration(e, seed).unwrap()))
            .collect();
        for w in bounds.windows(2) {
            assert!(w[1] <= w[0], "seed {seed}: {bounds:?}");
        }
    }
}

#[test]
fn sweep_separates_models() {
    let params = FamilyParameters::paper();
    let model = MeyerModel::matching(&build_nine_vectors(&params).unwrap().b);
    let report = precision_sweep(&model, &params, &[1e-1, 1e-2, 1e-3], 10_000, 0).unwrap();
    for entry in &report.entries {
        let nchv = entry.nchv.as_ref().unwrap();
        let (fn_, rn) = (
            nchv.f_estimate().unwrap(),
            nchv.confidence_radius().unwrap(),
        );
        let (fq, rq) = (
            entry.qm.f_estimate().unwrap(),
            entry.qm.confidence_radius().unwrap(),
        );
        assert!(fq - fn_ > 0.05, "ε = {}: {fq} vs {fn_}", entry.epsilon);
        assert!(
            rn < 0.02 && rq < 0.02,
            "ε = {}: radii {rn}, {rq}",
            entry.epsilon
        );
    }
}
