//! Exact rational orthogonal 3×3 matrices.
//!
//! Two sources: integer quaternions (proper rotations whose rows are a
//! rational orthonormal frame) and alignment maps that send a coordinate axis
//! onto a prescribed rational unit vector.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use thiserror::Error;

use crate::rational::Rational;
use crate::vector::{RationalUnitVector3, RationalVector3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("zero quaternion does not define a rotation")]
    ZeroQuaternion,
}

/// A 3×3 rational matrix with orthonormal rows, stored row-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalOrthogonalMatrix {
    rows: [RationalVector3; 3],
    /// The same matrix as integers over `common`, for fast application.
    numerators: [[BigInt; 3]; 3],
    common: BigInt,
}

impl RationalOrthogonalMatrix {
    fn from_rows(rows: [RationalVector3; 3]) -> Self {
        let common = rows
            .iter()
            .flat_map(|r| r.components())
            .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let numerators = std::array::from_fn(|i| {
            let c = rows[i].components();
            std::array::from_fn(|j| c[j].numer() * (&common / c[j].denom()))
        });
        RationalOrthogonalMatrix {
            rows,
            numerators,
            common,
        }
    }

    pub fn identity() -> Self {
        Self::from_rows([
            RationalVector3::from_ints(1, 0, 0),
            RationalVector3::from_ints(0, 1, 0),
            RationalVector3::from_ints(0, 0, 1),
        ])
    }

    /// Rotation matrix of the integer quaternion (w, x, y, z), divided by its
    /// squared norm. Orthonormal rows for any nonzero quaternion.
    pub fn from_quaternion(w: i64, x: i64, y: i64, z: i64) -> Result<Self, FrameError> {
        let (w, x, y, z) = (w as i128, x as i128, y as i128, z as i128);
        let norm = w * w + x * x + y * y + z * z;
        if norm == 0 {
            return Err(FrameError::ZeroQuaternion);
        }
        let entry =
            |v: i128| Rational::new(BigInt::from(v), BigInt::from(norm)).expect("nonzero norm");
        let row = |a: i128, b: i128, c: i128| RationalVector3::new(entry(a), entry(b), entry(c));
        Ok(Self::from_rows([
            row(
                w * w + x * x - y * y - z * z,
                2 * (x * y - w * z),
                2 * (x * z + w * y),
            ),
            row(
                2 * (x * y + w * z),
                w * w - x * x + y * y - z * z,
                2 * (y * z - w * x),
            ),
            row(
                2 * (x * z - w * y),
                2 * (y * z + w * x),
                w * w - x * x - y * y + z * z,
            ),
        ]))
    }

    /// Uniformly drawn integer quaternion with components in `[-bound, bound]`,
    /// redrawn until nonzero.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self {
        let bound = bound.max(1);
        loop {
            let q: [i64; 4] = std::array::from_fn(|_| rng.random_range(-bound..=bound));
            if let Ok(m) = Self::from_quaternion(q[0], q[1], q[2], q[3]) {
                return m;
            }
        }
    }

    /// A proper rotation sending `e_axis` to `target`.
    ///
    /// Built as the reflection swapping `e_axis` and `target` followed by a sign
    /// flip of another coordinate. When the primitive integer form (T, m) of
    /// `target` has T[axis] even, every denominator of the result divides the
    /// odd number m·(m − T[axis]).
    pub fn aligning_axis(axis: usize, target: &RationalUnitVector3) -> Self {
        let e = RationalUnitVector3::axis(axis);
        let t = target.as_vector();
        let w = e.as_vector() - t;
        let ww = w.norm_squared();
        if ww.is_zero() {
            return Self::identity();
        }
        let reflect = |v: &RationalVector3| -> RationalVector3 {
            let k = (w.dot(v) * Rational::from_integer(2)) / &ww;
            v - &w.scale(&k)
        };
        // Columns of the reflection are the images of the basis vectors; the
        // reflection is symmetric so these are also its rows.
        let flip = (axis + 1) % 3;
        let mut cols: [RationalVector3; 3] =
            std::array::from_fn(|j| reflect(RationalUnitVector3::axis(j).as_vector()));
        cols[flip] = -&cols[flip];
        let rows = std::array::from_fn(|i| {
            let c = |j: usize| cols[j].components()[i].clone();
            RationalVector3::new(c(0), c(1), c(2))
        });
        Self::from_rows(rows)
    }

    pub fn rows(&self) -> &[RationalVector3; 3] {
        &self.rows
    }

    pub fn apply(&self, v: &RationalVector3) -> RationalVector3 {
        RationalVector3::new(
            self.rows[0].dot(v),
            self.rows[1].dot(v),
            self.rows[2].dot(v),
        )
    }

    /// Integer numerators of M·(v / scale); the denominator is
    /// `scale · self.denominator()`.
    pub fn apply_integer(&self, v: &[BigInt; 3]) -> [BigInt; 3] {
        std::array::from_fn(|i| {
            let r = &self.numerators[i];
            &r[0] * &v[0] + &r[1] * &v[1] + &r[2] * &v[2]
        })
    }

    pub fn apply_unit(&self, v: &RationalUnitVector3) -> RationalUnitVector3 {
        let (coords, scale) = v.as_vector().integer_form();
        let out = self.apply_integer(&coords);
        RationalUnitVector3::from_integer_coords(out, scale * &self.common)
            .expect("rotations preserve the unit sphere")
    }

    /// The rows as unit vectors: an exact orthonormal frame.
    pub fn frame(&self) -> [RationalUnitVector3; 3] {
        std::array::from_fn(|i| RationalUnitVector3::new_unchecked(self.rows[i].clone()))
    }

    pub fn is_orthogonal(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                let d = self.rows[i].dot(&self.rows[j]);
                if i == j {
                    d.is_one()
                } else {
                    d.is_zero()
                }
            })
        })
    }

    pub fn determinant(&self) -> Rational {
        let [r0, r1, r2] = &self.rows;
        r0.dot(&r1.cross(r2))
    }

    /// Least common denominator of all nine entries.
    pub fn denominator(&self) -> &BigInt {
        &self.common
    }
}

/// Exact orthonormal frame from an integer quaternion.
pub fn rational_frame_from_quaternion(
    w: i64,
    x: i64,
    y: i64,
    z: i64,
) -> Result<[RationalUnitVector3; 3], FrameError> {
    Ok(RationalOrthogonalMatrix::from_quaternion(w, x, y, z)?.frame())
}

/// Exact orthonormal frame from a random integer quaternion with components in
/// `[-bound, bound]`.
pub fn random_rational_frame<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> [RationalUnitVector3; 3] {
    RationalOrthogonalMatrix::random(rng, bound).frame()
}
