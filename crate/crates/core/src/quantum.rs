//! Quantum predictions: transition probabilities, the F functional, the
//! spin-1 projector correspondence P = 1 − (v·J)² (ħ = 1), and the union bound
//! for the perturbed eight-vector configuration.

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    build_nine_vectors, CkConfiguration, ConstructionError, FamilyParameters,
};
use crate::rational::Rational;
use crate::vector::{RationalUnitVector3, RealVector3};

pub type ComplexMatrix3 = Matrix3<Complex64>;

/// |⟨u|v⟩|² for real unit vectors, exactly.
pub fn transition_prob(u: &RationalUnitVector3, v: &RationalUnitVector3) -> Rational {
    u.dot(v).square()
}

pub fn transition_prob_real(u: &RealVector3, v: &RealVector3) -> f64 {
    let d = u.dot(v);
    d * d
}

/// Quantum value of F = P(A|B) + P(C|B) with both terms kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FValue {
    pub term_ab: Rational,
    pub term_cb: Rational,
}

impl FValue {
    pub fn value(&self) -> Rational {
        &self.term_ab + &self.term_cb
    }
}

pub fn f_qm(params: &FamilyParameters) -> Result<FValue, ConstructionError> {
    let set = build_nine_vectors(params)?;
    Ok(FValue {
        term_ab: transition_prob(&set.a, &set.b),
        term_cb: transition_prob(&set.c, &set.b),
    })
}

/// Spin-1 operators Jx, Jy, Jz with ħ = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Spin1Representation {
    pub j: [ComplexMatrix3; 3],
}

impl Spin1Representation {
    /// (J_k)_{lm} = −i ε_{klm}. In this basis 1 − (v·J)² = v vᵀ.
    pub fn vector() -> Self {
        let j = std::array::from_fn(|k| {
            ComplexMatrix3::from_fn(|l, m| Complex64::new(0.0, -levi_civita(k, l, m)))
        });
        Spin1Representation { j }
    }

    /// The usual Jz-diagonal basis.
    pub fn standard() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let z = c(0.0, 0.0);
        let jx = ComplexMatrix3::new(z, c(r, 0.0), z, c(r, 0.0), z, c(r, 0.0), z, c(r, 0.0), z);
        let jy = ComplexMatrix3::new(z, c(0.0, -r), z, c(0.0, r), z, c(0.0, -r), z, c(0.0, r), z);
        let jz = ComplexMatrix3::new(c(1.0, 0.0), z, z, z, z, z, z, z, c(-1.0, 0.0));
        Spin1Representation { j: [jx, jy, jz] }
    }

    /// v·J for a real direction.
    pub fn component(&self, v: &RealVector3) -> ComplexMatrix3 {
        self.j[0] * Complex64::from(v.x)
            + self.j[1] * Complex64::from(v.y)
            + self.j[2] * Complex64::from(v.z)
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// P = 1 − (v·J)² for a unit direction `v`.
pub fn spin1_projector(rep: &Spin1Representation, v: &RealVector3) -> ComplexMatrix3 {
    let s = rep.component(v);
    ComplexMatrix3::identity() - s * s
}

pub fn spin1_projector_rational(
    rep: &Spin1Representation,
    v: &RationalUnitVector3,
) -> ComplexMatrix3 {
    spin1_projector(rep, &v.to_real())
}

/// ⟨u|P|u⟩ with u embedded as a real state vector (meaningful in the vector
/// representation).
pub fn expectation(p: &ComplexMatrix3, u: &RealVector3) -> f64 {
    let psi = nalgebra::Vector3::new(
        Complex64::from(u.x),
        Complex64::from(u.y),
        Complex64::from(u.z),
    );
    (psi.adjoint() * p * psi)[(0, 0)].re
}

fn max_abs(m: &ComplexMatrix3) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericCheck {
    pub name: String,
    /// Largest absolute entry-wise deviation observed.
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumRuleReport {
    pub checks: Vec<NumericCheck>,
    pub triads: usize,
}

impl SumRuleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const SUM_RULE_TOLERANCE: f64 = 1e-12;
pub const SUM_RULE_TRIADS: usize = 100;

/// Random orthonormal real frame: the coordinate axes under a random rotation.
pub fn random_real_triad<R: Rng + ?Sized>(rng: &mut R) -> [RealVector3; 3] {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    let axis = RealVector3::new(r * phi.cos(), r * phi.sin(), z);
    let angle: f64 = rng.random_range(0.0..std::f64::consts::PI);
    [
        RealVector3::new(1.0, 0.0, 0.0),
        RealVector3::new(0.0, 1.0, 0.0),
        RealVector3::new(0.0, 0.0, 1.0),
    ]
    .map(|e| e.rotated(&axis, angle))
}

/// Checks the angular-momentum algebra, Jx² + Jy² + Jz² = 2, and that the
/// three projectors of any orthonormal triad are rank-1 projectors summing to
/// the identity.
pub fn verify_sum_rules(rep: &Spin1Representation, seed: u64) -> SumRuleReport {
    let tol = SUM_RULE_TOLERANCE;
    let check = |name: &str, deviation: f64| NumericCheck {
        name: name.to_string(),
        deviation,
        tolerance: tol,
        passed: deviation <= tol,
    };
    let i = Complex64::new(0.0, 1.0);
    let id = ComplexMatrix3::identity();
    let [jx, jy, jz] = &rep.j;

    let mut checks = Vec::new();
    let commutators = [
        max_abs(&(jx * jy - jy * jx - jz * i)),
        max_abs(&(jy * jz - jz * jy - jx * i)),
        max_abs(&(jz * jx - jx * jz - jy * i)),
    ];
    checks.push(check(
        "[Ji,Jj] = i eps_ijk Jk",
        commutators.into_iter().fold(0.0, f64::max),
    ));
    checks.push(check(
        "Jx^2 + Jy^2 + Jz^2 = 2",
        max_abs(&(jx * jx + jy * jy + jz * jz - id * Complex64::from(2.0))),
    ));

    let axes = [
        RealVector3::new(1.0, 0.0, 0.0),
        RealVector3::new(0.0, 1.0, 0.0),
        RealVector3::new(0.0, 0.0, 1.0),
    ];
    let coord_sum: ComplexMatrix3 = axes.iter().map(|v| spin1_projector(rep, v)).sum();
    checks.push(check("Px + Py + Pz = 1", max_abs(&(coord_sum - id))));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum_dev: f64 = 0.0;
    let mut herm_dev: f64 = 0.0;
    let mut idem_dev: f64 = 0.0;
    let mut trace_dev: f64 = 0.0;
    let mut eig_dev: f64 = 0.0;
    for _ in 0..SUM_RULE_TRIADS {
        let triad = random_real_triad(&mut rng);
        let ps = triad.map(|v| spin1_projector(rep, &v));
        sum_dev = sum_dev.max(max_abs(&(ps[0] + ps[1] + ps[2] - id)));
        for p in &ps {
            herm_dev = herm_dev.max(max_abs(&(p - p.adjoint())));
            idem_dev = idem_dev.max(max_abs(&(p * p - p)));
            trace_dev = trace_dev.max((p.trace() - Complex64::from(1.0)).norm());
            let hermitian_part = (p + p.adjoint()) * Complex64::from(0.5);
            let mut eig: Vec<f64> = SymmetricEigen::new(hermitian_part)
                .eigenvalues
                .iter()
                .copied()
                .collect();
            eig.sort_by(|a, b| a.total_cmp(b));
            let pattern = [0.0, 0.0, 1.0];
            let d = eig
                .iter()
                .zip(pattern)
                .map(|(e, t)| (e - t).abs())
                .fold(0.0, f64::max);
            eig_dev = eig_dev.max(d);
        }
    }
    checks.push(check("random triads: P1 + P2 + P3 = 1", sum_dev));
    checks.push(check("random triads: P Hermitian", herm_dev));
    checks.push(check("random triads: P^2 = P", idem_dev));
    checks.push(check("random triads: tr P = 1", trace_dev));
    checks.push(check("random triads: spectrum {1,0,0}", eig_dev));
    SumRuleReport {
        checks,
        triads: SUM_RULE_TRIADS,
    }
}

/// Sum of the five leak probabilities. Under the forced-assignment chain,
/// f(A') = f(B') = 1 requires one of the leak pairs to be jointly valued 1,
/// so this bounds that probability from above.
pub fn ck_union_bound(config: &CkConfiguration) -> f64 {
    config.leak_dots().iter().map(|l| l.dot * l.dot).sum()
}

/// |⟨A'|B'⟩|².
pub fn ck_overlap(config: &CkConfiguration) -> f64 {
    transition_prob_real(&config.a, &config.b)
}
