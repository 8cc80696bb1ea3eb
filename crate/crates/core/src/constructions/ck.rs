//! ε-perturbed eight-vector configuration for dense colorable sets.
//!
//! Starting from an exact configuration in which A' and B' sit at
//! (1,1,1)/√3 and (1,1,−1)/√3 and the six auxiliary vectors form two
//! orthonormal triads with the orthogonalities the obstruction needs, A' and
//! B' are rotated independently by at most ε and each triad is rotated rigidly
//! by at most ε/2. Every "leak" dot product (a pair that was exactly
//! orthogonal and is now only nearly so) is then bounded by sin(c·ε) with
//! c = [`LEAK_ANGLE_FACTOR`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::coloring::VectorSet;
use crate::vector::RealVector3;

/// Exclusive upper bound on ε.
pub const MAX_CK_EPSILON: f64 = 0.1;

/// A' and B' move by ≤ ε and each triad by ≤ ε/2, so a pair drawn from one
/// of each deviates from orthogonality by at most 3ε/2.
pub const LEAK_ANGLE_FACTOR: f64 = 1.5;

const TRIAD_TOLERANCE: f64 = 1e-12;

pub const CK_NAMES: [&str; 8] = ["A'", "B'", "v1'", "v2'", "v3'", "v4'", "v5'", "v6'"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CkConfiguration {
    pub a: RealVector3,
    pub b: RealVector3,
    pub v1: RealVector3,
    pub v2: RealVector3,
    pub v3: RealVector3,
    pub v4: RealVector3,
    pub v5: RealVector3,
    pub v6: RealVector3,
    pub epsilon: f64,
    pub seed: u64,
}

/// Named dot product of a pair that is orthogonal only in the ideal configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakDot {
    pub pair: String,
    pub dot: f64,
}

pub fn ideal_a() -> RealVector3 {
    RealVector3::new(1.0, 1.0, 1.0).scale(1.0 / 3f64.sqrt())
}

pub fn ideal_b() -> RealVector3 {
    RealVector3::new(1.0, 1.0, -1.0).scale(1.0 / 3f64.sqrt())
}

impl CkConfiguration {
    /// The unperturbed configuration.
    pub fn ideal() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CkConfiguration {
            a: ideal_a(),
            b: ideal_b(),
            v1: RealVector3::new(h, 0.0, -h),
            v2: RealVector3::new(0.0, h, -h),
            v3: RealVector3::new(h, 0.0, h),
            v4: RealVector3::new(0.0, h, h),
            v5: RealVector3::new(0.0, 1.0, 0.0),
            v6: RealVector3::new(1.0, 0.0, 0.0),
            epsilon: 0.0,
            seed: 0,
        }
    }

    pub fn vectors(&self) -> [RealVector3; 8] {
        [
            self.a, self.b, self.v1, self.v2, self.v3, self.v4, self.v5, self.v6,
        ]
    }

    /// v1'·A', v2'·A', v3'·B', v4'·B', v5'·v6'.
    pub fn leak_dots(&self) -> [LeakDot; 5] {
        let leak = |pair: &str, u: &RealVector3, v: &RealVector3| LeakDot {
            pair: pair.to_string(),
            dot: u.dot(v),
        };
        [
            leak("v1'·A'", &self.v1, &self.a),
            leak("v2'·A'", &self.v2, &self.a),
            leak("v3'·B'", &self.v3, &self.b),
            leak("v4'·B'", &self.v4, &self.b),
            leak("v5'·v6'", &self.v5, &self.v6),
        ]
    }

    /// Bound on every |leak dot|, with room for rounding.
    pub fn leak_bound(&self) -> f64 {
        (LEAK_ANGLE_FACTOR * self.epsilon).sin() + TRIAD_TOLERANCE
    }

    /// Lists every violated invariant; empty when the configuration is valid.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in CK_NAMES.iter().zip(self.vectors()) {
            if !v.is_unit() {
                out.push(format!("{name} is not unit (norm {})", v.norm()));
            }
        }
        let triads = [
            [("v1'", self.v1), ("v3'", self.v3), ("v5'", self.v5)],
            [("v2'", self.v2), ("v4'", self.v4), ("v6'", self.v6)],
        ];
        for triad in &triads {
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let d = triad[i].1.dot(&triad[j].1);
                    if d.abs() > TRIAD_TOLERANCE {
                        out.push(format!(
                            "{}·{} = {d:e} exceeds {TRIAD_TOLERANCE:e}",
                            triad[i].0, triad[j].0
                        ));
                    }
                }
            }
        }
        // cos(ε) compared with a small slack; the angle itself is ill-conditioned at ε = 0
        let within =
            |v: &RealVector3, ideal: &RealVector3| v.dot(ideal) >= self.epsilon.cos() - 1e-14;
        if !within(&self.a, &ideal_a()) {
            out.push("A' is farther than ε from (1,1,1)/√3".to_string());
        }
        if !within(&self.b, &ideal_b()) {
            out.push("B' is farther than ε from (1,1,-1)/√3".to_string());
        }
        let bound = self.leak_bound();
        for leak in self.leak_dots() {
            if leak.dot.abs() > bound {
                out.push(format!(
                    "|{}| = {:e} exceeds sin(cε) = {bound:e}",
                    leak.pair,
                    leak.dot.abs()
                ));
            }
        }
        out
    }

    pub fn to_vector_set(&self) -> VectorSet {
        VectorSet::Real(self.vectors().to_vec())
    }
}

fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> RealVector3 {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    RealVector3::new(r * phi.cos(), r * phi.sin(), z)
}

/// Random axis, angle uniform in `[0, max_angle]`.
fn random_rotation<R: Rng + ?Sized>(rng: &mut R, max_angle: f64) -> (RealVector3, f64) {
    let axis = random_axis(rng);
    let u: f64 = rng.random();
    (axis, u * max_angle)
}

/// Gram–Schmidt on (first, second), third completed by the cross product with
/// the sign of `third_hint`.
fn reorthonormalize(
    first: RealVector3,
    second: RealVector3,
    third_hint: RealVector3,
) -> [RealVector3; 3] {
    let f = first.normalized().expect("unit input");
    let s = (second - f * f.dot(&second))
        .normalized()
        .expect("independent input");
    let mut t = f.cross(&s);
    if t.dot(&third_hint) < 0.0 {
        t = -t;
    }
    [f, s, t]
}

pub fn build_ck_configuration(
    epsilon: f64,
    seed: u64,
) -> Result<CkConfiguration, ConstructionError> {
    if !(0.0..MAX_CK_EPSILON).contains(&epsilon) {
        return Err(ConstructionError::EpsilonOutOfRange(epsilon));
    }
    let ideal = CkConfiguration::ideal();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (axis_a, angle_a) = random_rotation(&mut rng, epsilon);
    let (axis_b, angle_b) = random_rotation(&mut rng, epsilon);
    let (axis_1, angle_1) = random_rotation(&mut rng, epsilon / 2.0);
    let (axis_2, angle_2) = random_rotation(&mut rng, epsilon / 2.0);

    let rot1 = |v: RealVector3| v.rotated(&axis_1, angle_1);
    let rot2 = |v: RealVector3| v.rotated(&axis_2, angle_2);
    let [v1, v3, v5] = reorthonormalize(rot1(ideal.v1), rot1(ideal.v3), rot1(ideal.v5));
    let [v2, v4, v6] = reorthonormalize(rot2(ideal.v2), rot2(ideal.v4), rot2(ideal.v6));

    let config = CkConfiguration {
        a: ideal
            .a
            .rotated(&axis_a, angle_a)
            .normalized()
            .expect("unit"),
        b: ideal
            .b
            .rotated(&axis_b, angle_b)
            .normalized()
            .expect("unit"),
        v1,
        v2,
        v3,
        v4,
        v5,
        v6,
        epsilon,
        seed,
    };
    let violations = config.invariant_violations();
    if violations.is_empty() {
        Ok(config)
    } else {
        Err(ConstructionError::Inconsistent(violations.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_configuration_is_exactly_orthogonal_where_needed() {
        let c = build_ck_configuration(0.0, 1).unwrap();
        for leak in c.leak_dots() {
            assert!(leak.dot.abs() <= 1e-12, "{} = {}", leak.pair, leak.dot);
        }
        assert!((c.a.dot(&c.b).powi(2) - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_stays_near_one_ninth() {
        for &eps in &[1e-2, 1e-3, 1e-4] {
            for seed in 0..100 {
                let c = build_ck_configuration(eps, seed).unwrap();
                let p = c.a.dot(&c.b).powi(2);
                assert!(
                    (p - 1.0 / 9.0).abs() <= 3.0 * eps,
                    "eps {eps} seed {seed}: {p}"
                );
            }
        }
    }

    #[test]
    fn invariants_hold_across_seeds() {
        for &eps in &[1e-2, 1e-3, 1e-4] {
            for seed in 0..100 {
                let c = build_ck_configuration(eps, seed).unwrap();
                assert!(c.invariant_violations().is_empty());
            }
        }
    }

    #[test]
    fn leaks_are_small_at_one_milliradian() {
        for seed in 0..100 {
            let c = build_ck_configuration(1e-3, seed).unwrap();
            for leak in c.leak_dots() {
                assert!(leak.dot * leak.dot <= 1e-5);
            }
        }
    }

    #[test]
    fn perturbation_actually_moves_vectors() {
        let c = build_ck_configuration(1e-2, 3).unwrap();
        assert!(c.leak_dots().iter().any(|l| l.dot.abs() > 1e-6));
    }

    #[test]
    fn epsilon_range() {
        for bad in [-1e-3, 0.1, 0.5, f64::NAN] {
            assert!(matches!(
                build_ck_configuration(bad, 0),
                Err(ConstructionError::EpsilonOutOfRange(_))
            ));
        }
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(
            build_ck_configuration(1e-3, 42).unwrap(),
            build_ck_configuration(1e-3, 42).unwrap()
        );
        assert_ne!(
            build_ck_configuration(1e-3, 42).unwrap(),
            build_ck_configuration(1e-3, 43).unwrap()
        );
    }
}
