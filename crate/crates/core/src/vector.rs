//! Exact rational 3-vectors, the rational unit sphere, rational points on the
//! unit circle, and plain `f64` vectors for configurations that need
//! irrational coordinates.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::{common_denominator, rational_sqrt, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VectorError {
    #[error("vector {0} is not a unit vector (squared norm {1})")]
    NotUnit(Box<RationalVector3>, Rational),
    #[error("pair ({0}, {1}) does not satisfy c^2 + s^2 = 1")]
    NotOnCircle(Box<Rational>, Box<Rational>),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("cosine {0} is outside [-1, 1]")]
    CosineOutOfRange(Rational),
    #[error("sine for cosine {0} is irrational")]
    IrrationalSine(Rational),
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[Rational; 3]", from = "[Rational; 3]")]
pub struct RationalVector3 {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl RationalVector3 {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        RationalVector3 { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        RationalVector3::new(x.into(), y.into(), z.into())
    }

    pub fn zero() -> Self {
        RationalVector3::from_ints(0, 0, 0)
    }

    pub fn components(&self) -> [&Rational; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// Exact inner product. A zero result certifies orthogonality.
    pub fn dot(&self, other: &RationalVector3) -> Rational {
        &self.x * &other.x + &self.y * &other.y + &self.z * &other.z
    }

    /// Exact cross product; zero iff the inputs are parallel (or one is zero).
    pub fn cross(&self, other: &RationalVector3) -> RationalVector3 {
        RationalVector3 {
            x: &self.y * &other.z - &self.z * &other.y,
            y: &self.z * &other.x - &self.x * &other.z,
            z: &self.x * &other.y - &self.y * &other.x,
        }
    }

    pub fn norm_squared(&self) -> Rational {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> RationalVector3 {
        RationalVector3 {
            x: &self.x * k,
            y: &self.y * k,
            z: &self.z * k,
        }
    }

    pub fn is_parallel(&self, other: &RationalVector3) -> bool {
        self.cross(other).is_zero()
    }

    /// Sign convention for directions: first nonzero component positive.
    pub fn sign_canonical(&self) -> RationalVector3 {
        match self.components().into_iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Integer numerators over the least common denominator.
    pub fn integer_form(&self) -> ([BigInt; 3], BigInt) {
        let common = common_denominator(self.components());
        let coords = std::array::from_fn(|i| {
            let c = self.components()[i];
            c.numer() * (&common / c.denom())
        });
        (coords, common)
    }

    pub fn to_real(&self) -> RealVector3 {
        RealVector3::new(self.x.to_f64(), self.y.to_f64(), self.z.to_f64())
    }
}

impl From<RationalVector3> for [Rational; 3] {
    fn from(v: RationalVector3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl From<[Rational; 3]> for RationalVector3 {
    fn from([x, y, z]: [Rational; 3]) -> Self {
        RationalVector3 { x, y, z }
    }
}

impl fmt::Display for RationalVector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl fmt::Debug for RationalVector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Neg for &RationalVector3 {
    type Output = RationalVector3;
    fn neg(self) -> RationalVector3 {
        RationalVector3 {
            x: -&self.x,
            y: -&self.y,
            z: -&self.z,
        }
    }
}

impl Add for &RationalVector3 {
    type Output = RationalVector3;
    fn add(self, rhs: &RationalVector3) -> RationalVector3 {
        RationalVector3 {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
            z: &self.z + &rhs.z,
        }
    }
}

impl Sub for &RationalVector3 {
    type Output = RationalVector3;
    fn sub(self, rhs: &RationalVector3) -> RationalVector3 {
        RationalVector3 {
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
            z: &self.z - &rhs.z,
        }
    }
}

/// A point of the rational unit sphere: x² + y² + z² = 1 exactly.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RationalUnitVector3(RationalVector3);

impl RationalUnitVector3 {
    pub fn new(v: RationalVector3) -> Result<Self, VectorError> {
        let n = v.norm_squared();
        if n.is_one() {
            Ok(RationalUnitVector3(v))
        } else {
            Err(VectorError::NotUnit(Box::new(v), n))
        }
    }

    pub fn from_ints_over(x: i64, y: i64, z: i64, denom: i64) -> Result<Self, VectorError> {
        let d = Rational::from_integer(denom);
        Self::new(
            RationalVector3::from_ints(x, y, z).scale(&d.recip().ok_or(VectorError::ZeroVector)?),
        )
    }

    pub fn e_x() -> Self {
        RationalUnitVector3(RationalVector3::from_ints(1, 0, 0))
    }

    pub fn e_y() -> Self {
        RationalUnitVector3(RationalVector3::from_ints(0, 1, 0))
    }

    pub fn e_z() -> Self {
        RationalUnitVector3(RationalVector3::from_ints(0, 0, 1))
    }

    pub fn axis(k: usize) -> Self {
        match k {
            0 => Self::e_x(),
            1 => Self::e_y(),
            _ => Self::e_z(),
        }
    }

    pub fn as_vector(&self) -> &RationalVector3 {
        &self.0
    }

    pub fn into_vector(self) -> RationalVector3 {
        self.0
    }

    pub fn dot(&self, other: &RationalUnitVector3) -> Rational {
        self.0.dot(&other.0)
    }

    pub fn negated(&self) -> Self {
        RationalUnitVector3(-&self.0)
    }

    /// v and -v name the same projector; pick the one whose first nonzero
    /// component is positive.
    pub fn canonicalize(&self) -> Self {
        RationalUnitVector3(self.0.sign_canonical())
    }

    pub fn to_real(&self) -> RealVector3 {
        self.0.to_real()
    }

    /// The unit vector `coords / scale`, checked exactly.
    pub fn from_integer_coords(coords: [BigInt; 3], scale: BigInt) -> Result<Self, VectorError> {
        if scale.is_zero() {
            return Err(VectorError::ZeroVector);
        }
        let [x, y, z] = &coords;
        let unit = x * x + y * y + z * z == &scale * &scale;
        let q = |n: &BigInt| Rational::new(n.clone(), scale.clone()).expect("nonzero scale");
        let v = RationalVector3::new(q(x), q(y), q(z));
        if unit {
            Ok(RationalUnitVector3(v))
        } else {
            let n = v.norm_squared();
            Err(VectorError::NotUnit(Box::new(v), n))
        }
    }

    /// Unchecked constructor for values that are unit by construction.
    pub(crate) fn new_unchecked(v: RationalVector3) -> Self {
        debug_assert!(v.norm_squared().is_one());
        RationalUnitVector3(v)
    }
}

impl<'de> Deserialize<'de> for RationalUnitVector3 {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = RationalVector3::deserialize(deserializer)?;
        RationalUnitVector3::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RationalUnitVector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for RationalUnitVector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// A rational point (c, s) on the unit circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleParameter {
    c: Rational,
    s: Rational,
}

impl CircleParameter {
    pub fn new(c: Rational, s: Rational) -> Result<Self, VectorError> {
        if (c.square() + s.square()).is_one() {
            Ok(CircleParameter { c, s })
        } else {
            Err(VectorError::NotOnCircle(Box::new(c), Box::new(s)))
        }
    }

    /// (c, √(1 − c²)) with the non-negative root, when that root is rational.
    pub fn from_cosine(c: Rational) -> Result<Self, VectorError> {
        let rest = Rational::one() - c.square();
        if rest.is_negative() {
            return Err(VectorError::CosineOutOfRange(c));
        }
        match rational_sqrt(&rest).expect("non-negative") {
            Some(s) => Ok(CircleParameter { c, s }),
            None => Err(VectorError::IrrationalSine(c)),
        }
    }

    /// Rational parameterization of the circle: t ↦ ((1−t²)/(1+t²), 2t/(1+t²)).
    pub fn from_tangent(t: &Rational) -> Self {
        let t2 = t.square();
        let denom = Rational::one() + &t2;
        let c = (Rational::one() - &t2) / &denom;
        let s = (t * &Rational::from_integer(2)) / &denom;
        CircleParameter { c, s }
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }
}

pub fn circle_param_from_tangent(t: &Rational) -> CircleParameter {
    CircleParameter::from_tangent(t)
}

/// Plain double-precision 3-vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", from = "[f64; 3]")]
pub struct RealVector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<RealVector3> for [f64; 3] {
    fn from(v: RealVector3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl From<[f64; 3]> for RealVector3 {
    fn from([x, y, z]: [f64; 3]) -> Self {
        RealVector3 { x, y, z }
    }
}

impl RealVector3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        RealVector3 { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, o: &RealVector3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &RealVector3) -> RealVector3 {
        RealVector3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, k: f64) -> RealVector3 {
        RealVector3::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn normalized(&self) -> Result<RealVector3, VectorError> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            Err(VectorError::ZeroVector)
        } else {
            Ok(self.scale(1.0 / n))
        }
    }

    pub fn is_unit(&self) -> bool {
        (self.dot(self) - 1.0).abs() <= 1e-12
    }

    /// Rodrigues rotation about a unit `axis` by `angle` radians.
    pub fn rotated(&self, axis: &RealVector3, angle: f64) -> RealVector3 {
        let (s, c) = angle.sin_cos();
        let k_cross = axis.cross(self);
        let k_dot = axis.dot(self);
        *self * c + k_cross * s + *axis * (k_dot * (1.0 - c))
    }

    /// Sign convention matching the rational one, with a tolerance for "nonzero".
    pub fn sign_canonical(&self, tolerance: f64) -> RealVector3 {
        match self.to_array().into_iter().find(|c| c.abs() > tolerance) {
            Some(c) if c < 0.0 => -*self,
            _ => *self,
        }
    }
}

impl Add for RealVector3 {
    type Output = RealVector3;
    fn add(self, o: RealVector3) -> RealVector3 {
        RealVector3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for RealVector3 {
    type Output = RealVector3;
    fn sub(self, o: RealVector3) -> RealVector3 {
        RealVector3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for RealVector3 {
    type Output = RealVector3;
    fn neg(self) -> RealVector3 {
        RealVector3::new(-self.x, -self.y, -self.z)
    }
}

impl std::ops::Mul<f64> for RealVector3 {
    type Output = RealVector3;
    fn mul(self, k: f64) -> RealVector3 {
        self.scale(k)
    }
}

/// Angle in radians between two nonzero vectors, in [0, π].
pub fn angle_between(u: &RealVector3, v: &RealVector3) -> Result<f64, VectorError> {
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(VectorError::ZeroVector);
    }
    // atan2 of |u×v| and u·v stays accurate for nearly parallel inputs,
    // where arccos of the clamped cosine loses half the digits.
    let cross = u.cross(v).norm();
    let dot = u.dot(v);
    Ok(cross.atan2(dot).clamp(0.0, std::f64::consts::PI))
}
