//! The rational nine-vector family obstructing f(A) = f(B) = f(C) = 1.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::coloring::VectorSet;
use crate::rational::{rational_sqrt, Rational};
use crate::vector::{CircleParameter, RationalUnitVector3, RationalVector3};

/// Cosines used by `--paper-params`.
pub const PAPER_COSINES: [(&str, &str); 4] = [
    ("cA", "104/185"),
    ("cB", "10209400000/12605796209"),
    ("cC", "490231/789769"),
    ("cD", "105/137"),
];

/// The four cosines, as stored in `family.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(rename = "cA")]
    pub c_a: Rational,
    #[serde(rename = "cB")]
    pub c_b: Rational,
    #[serde(rename = "cC")]
    pub c_c: Rational,
    #[serde(rename = "cD")]
    pub c_d: Rational,
}

impl FamilySpec {
    pub fn paper() -> Self {
        let c = |i: usize| PAPER_COSINES[i].1.parse().expect("valid literal");
        FamilySpec {
            c_a: c(0),
            c_b: c(1),
            c_c: c(2),
            c_d: c(3),
        }
    }

    pub fn params(&self) -> Result<FamilyParameters, ConstructionError> {
        family_params(&self.c_a, &self.c_b, &self.c_c, &self.c_d)
    }
}

/// Validated (cᵢ, sᵢ) pairs plus the normalizer N = [c_A² + (s_A c_D)²]^(-1/2),
/// all rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParameters {
    a: CircleParameter,
    b: CircleParameter,
    c: CircleParameter,
    d: CircleParameter,
    n: Rational,
}

impl FamilyParameters {
    pub fn paper() -> Self {
        FamilySpec::paper()
            .params()
            .expect("published parameters are rational")
    }

    pub fn a(&self) -> &CircleParameter {
        &self.a
    }
    pub fn b(&self) -> &CircleParameter {
        &self.b
    }
    pub fn c(&self) -> &CircleParameter {
        &self.c
    }
    pub fn d(&self) -> &CircleParameter {
        &self.d
    }
    pub fn normalizer(&self) -> &Rational {
        &self.n
    }

    pub fn spec(&self) -> FamilySpec {
        FamilySpec {
            c_a: self.a.c().clone(),
            c_b: self.b.c().clone(),
            c_c: self.c.c().clone(),
            c_d: self.d.c().clone(),
        }
    }
}

fn sine(name: &str, c: &Rational) -> Result<CircleParameter, ConstructionError> {
    if c.abs() > Rational::one() {
        return Err(ConstructionError::OutOfRange {
            name: name.to_string(),
            value: c.clone(),
        });
    }
    let rest = Rational::one() - c.square();
    match rational_sqrt(&rest).expect("non-negative") {
        Some(s) => Ok(CircleParameter::new(c.clone(), s).expect("c^2 + s^2 = 1")),
        None => Err(ConstructionError::IrrationalParameter {
            quantity: format!("s{} = sqrt(1 - {}^2)", &name[1..], name),
            radicand: rest,
        }),
    }
}

pub fn family_params(
    c_a: &Rational,
    c_b: &Rational,
    c_c: &Rational,
    c_d: &Rational,
) -> Result<FamilyParameters, ConstructionError> {
    let a = sine("cA", c_a)?;
    let b = sine("cB", c_b)?;
    let c = sine("cC", c_c)?;
    let d = sine("cD", c_d)?;
    let radicand = a.c().square() + (a.s() * d.c()).square();
    if radicand.is_zero() {
        return Err(ConstructionError::DegenerateNormalizer);
    }
    let root = rational_sqrt(&radicand)
        .expect("sum of squares")
        .ok_or_else(|| ConstructionError::IrrationalParameter {
            quantity: "N = [cA^2 + (sA cD)^2]^(-1/2)".to_string(),
            radicand: radicand.clone(),
        })?;
    let n = root.recip().expect("nonzero");
    debug_assert!((n.square() * &radicand).is_one());
    Ok(FamilyParameters { a, b, c, d, n })
}

/// Vectors A, B, C and the six auxiliary vectors of the obstruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NineVectorSet {
    pub a: RationalUnitVector3,
    pub b: RationalUnitVector3,
    pub c: RationalUnitVector3,
    pub v1: RationalUnitVector3,
    pub v2: RationalUnitVector3,
    pub v3: RationalUnitVector3,
    pub v4: RationalUnitVector3,
    pub v5: RationalUnitVector3,
    pub v6: RationalUnitVector3,
}

pub const NINE_NAMES: [&str; 9] = ["A", "B", "C", "v1", "v2", "v3", "v4", "v5", "v6"];

/// Pairs that must be orthogonal, by index into [`NINE_NAMES`].
pub const NINE_ORTHOGONALITIES: [(usize, usize); 11] = [
    (0, 3),
    (0, 4),
    (1, 5),
    (2, 6),
    (3, 5),
    (3, 7),
    (5, 7),
    (4, 6),
    (4, 8),
    (6, 8),
    (7, 8),
];

impl NineVectorSet {
    /// In the order A, B, C, v1, …, v6.
    pub fn vectors(&self) -> [&RationalUnitVector3; 9] {
        [
            &self.a, &self.b, &self.c, &self.v1, &self.v2, &self.v3, &self.v4, &self.v5, &self.v6,
        ]
    }

    pub fn to_vector_set(&self) -> VectorSet {
        VectorSet::from_units(self.vectors().into_iter().cloned())
    }
}

pub fn build_nine_vectors(params: &FamilyParameters) -> Result<NineVectorSet, ConstructionError> {
    let (ca, sa) = (params.a.c(), params.a.s());
    let (cb, sb) = (params.b.c(), params.b.s());
    let (cc, sc) = (params.c.c(), params.c.s());
    let (cd, sd) = (params.d.c(), params.d.s());
    let n = &params.n;
    let zero = Rational::zero;
    let one = Rational::one;

    let raw = [
        RationalVector3::new(zero(), ca.clone(), -sa),
        RationalVector3::new(cb.clone(), sb.clone(), zero()),
        RationalVector3::new(
            cc * cd + n * ca * sc * sd,
            n * sa * sc * cd,
            -(cc * sd) + n * ca * sc * cd,
        ),
        RationalVector3::new(one(), zero(), zero()),
        RationalVector3::new(ca * sd, sa * cd, ca * cd).scale(n),
        RationalVector3::new(zero(), zero(), one()),
        RationalVector3::new(sa * cd * sd, -ca, sa * cd * cd).scale(n),
        RationalVector3::new(zero(), one(), zero()),
        RationalVector3::new(cd.clone(), zero(), -sd),
    ];
    let mut units = Vec::with_capacity(9);
    for (name, v) in NINE_NAMES.iter().zip(raw) {
        let u = RationalUnitVector3::new(v)
            .map_err(|e| ConstructionError::Inconsistent(format!("{name} is not unit: {e}")))?;
        units.push(u);
    }
    let mut it = units.into_iter();
    let mut next = || it.next().expect("nine vectors");
    let set = NineVectorSet {
        a: next(),
        b: next(),
        c: next(),
        v1: next(),
        v2: next(),
        v3: next(),
        v4: next(),
        v5: next(),
        v6: next(),
    };
    if let Some(bad) = validate_nine(&set).into_iter().find(|c| !c.passed) {
        return Err(ConstructionError::Inconsistent(format!(
            "{} evaluates to {} instead of {}",
            bad.name, bad.value, bad.expected
        )));
    }
    Ok(set)
}

/// One exact identity with its evaluated value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCheck {
    pub name: String,
    pub value: Rational,
    pub expected: Rational,
    pub passed: bool,
}

/// Norms of all nine vectors and every orthogonality the obstruction uses.
pub fn validate_nine(set: &NineVectorSet) -> Vec<ExactCheck> {
    let vs = set.vectors();
    let norms = (0..9).map(|i| {
        let value = vs[i].as_vector().norm_squared();
        ExactCheck {
            name: format!("|{}|^2", NINE_NAMES[i]),
            passed: value.is_one(),
            value,
            expected: Rational::one(),
        }
    });
    let orth = NINE_ORTHOGONALITIES.iter().map(|&(i, j)| {
        let value = vs[i].dot(vs[j]);
        ExactCheck {
            name: format!("{}⊥{}", NINE_NAMES[i], NINE_NAMES[j]),
            passed: value.is_zero(),
            value,
            expected: Rational::zero(),
        }
    });
    norms.chain(orth).collect()
}

/// Draws a family with every square root rational.
///
/// c_A and c_D come from the tangent parameterization with numerator and
/// denominator up to `max_height` and are redrawn until N is rational; c_B and
/// c_C are unconstrained tangent points. Cosines 0 and ±1 are excluded so all
/// nine vectors are generic.
pub fn random_family_params<R: Rng + ?Sized>(rng: &mut R, max_height: i64) -> FamilyParameters {
    let max_height = max_height.max(2);
    let cosine = |rng: &mut R| loop {
        let p = rng.random_range(1..=max_height);
        let q = rng.random_range(1..=max_height);
        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
        let t = Rational::frac(sign * p, q);
        let cp = CircleParameter::from_tangent(&t);
        let c = cp.c();
        if !c.is_zero() && !c.abs().is_one() {
            return c.clone();
        }
    };
    loop {
        let c_a = cosine(rng);
        let c_d = cosine(rng);
        let c_b = cosine(rng);
        let c_c = cosine(rng);
        if let Ok(p) = family_params(&c_a, &c_b, &c_c, &c_d) {
            return p;
        }
    }
}
