//! Parity 3-coloring of the rational unit sphere.
//!
//! Clearing denominators of a rational unit vector gives a primitive integer
//! solution of a² + b² + c² = n². Squares are 0 or 1 mod 4, so n is odd and
//! exactly one of a, b, c is odd; the color is the axis of that coordinate.
//! Two orthogonal vectors can never share a color: if both had the same odd
//! coordinate their dot product would be odd.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::vector::RationalUnitVector3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Axis::ALL.get(i).copied()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(format!("unknown axis {other:?}")),
        }
    }
}

/// Primitive integer point (a, b, c) on the sphere of radius n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimitiveIntegerRep {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub n: BigInt,
}

impl PrimitiveIntegerRep {
    pub fn coords(&self) -> [&BigInt; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// Axis of the unique odd coordinate.
    pub fn odd_axis(&self) -> Axis {
        let odd: Vec<usize> = (0..3).filter(|&i| self.coords()[i].is_odd()).collect();
        assert_eq!(
            odd.len(),
            1,
            "primitive sphere point {self:?} must have exactly one odd coordinate"
        );
        Axis::from_index(odd[0]).expect("index < 3")
    }
}

pub fn primitive_integer_rep(v: &RationalUnitVector3) -> PrimitiveIntegerRep {
    let ([a, b, c], n) = v.as_vector().integer_form();
    let rep = PrimitiveIntegerRep { a, b, c, n };
    debug_assert!(rep.a.gcd(&rep.b).gcd(&rep.c) == BigInt::from(1));
    rep
}

/// Same as `primitive_integer_rep(v).odd_axis()`, read off 2-adic
/// valuations: the odd coordinate of the primitive form is the component
/// whose numerator has the fewest factors of two (denominators are odd).
pub fn meyer_color(v: &RationalUnitVector3) -> Axis {
    let valuation = |c: &Rational| {
        c.numer()
            .trailing_zeros()
            .map(|t| t as i64 - c.denom().trailing_zeros().unwrap_or(0) as i64)
    };
    let vals = v.as_vector().components().map(valuation);
    let (axis, _) = vals
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.map(|t| (i, t)))
        .min_by_key(|&(_, t)| t)
        .expect("unit vectors are nonzero");
    Axis::from_index(axis).expect("index < 3")
}

/// The KS coloring induced by the 3-coloring: 1 exactly on the `one_axis` class.
pub fn meyer_value(v: &RationalUnitVector3, one_axis: Axis) -> bool {
    meyer_color(v) == one_axis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{random_rational_frame, RationalOrthogonalMatrix};
    use crate::vector::{circle_param_from_tangent, RationalVector3};
    use num_traits::Signed;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(x: i64, y: i64, z: i64, n: i64) -> RationalUnitVector3 {
        RationalUnitVector3::from_ints_over(x, y, z, n).unwrap()
    }

    #[test]
    fn integer_reps() {
        let r = primitive_integer_rep(&unit(0, 3, 4, 5));
        assert_eq!(
            (r.a, r.b, r.c, r.n),
            (0.into(), 3.into(), 4.into(), 5.into())
        );
        let r = primitive_integer_rep(&RationalUnitVector3::e_x());
        assert_eq!(
            (r.a, r.b, r.c, r.n),
            (1.into(), 0.into(), 0.into(), 1.into())
        );
        let r = primitive_integer_rep(&unit(2, 2, 1, 3));
        assert_eq!(
            (r.a, r.b, r.c, r.n),
            (2.into(), 2.into(), 1.into(), 3.into())
        );
    }

    #[test]
    fn colors() {
        assert_eq!(meyer_color(&RationalUnitVector3::e_x()), Axis::X);
        assert_eq!(meyer_color(&unit(0, 3, 4, 5)), Axis::Y);
        assert_eq!(meyer_color(&unit(2, 2, 1, 3)), Axis::Z);
    }

    #[test]
    fn values() {
        assert!(meyer_value(&RationalUnitVector3::e_x(), Axis::X));
        assert!(!meyer_value(&RationalUnitVector3::e_y(), Axis::X));
        let triad = [unit(2, 2, 1, 3), unit(2, -1, -2, 3), unit(1, -2, 2, 3)];
        assert_eq!(
            triad.iter().map(meyer_color).collect::<Vec<_>>(),
            vec![Axis::Z, Axis::Y, Axis::X]
        );
        for axis in Axis::ALL {
            assert_eq!(triad.iter().filter(|v| meyer_value(v, axis)).count(), 1);
        }
    }

    #[test]
    fn frames_get_three_colors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..10_000 {
            let frame = random_rational_frame(&mut rng, 30);
            let mut colors: Vec<Axis> = frame.iter().map(meyer_color).collect();
            colors.sort();
            assert_eq!(colors, Axis::ALL.to_vec());
        }
    }

    #[test]
    fn orthogonal_pairs_differ() {
        // a frame row paired with a different unit vector in the span of the
        // other two rows is still an exactly orthogonal rational pair
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for i in 0..10_000 {
            let m = RationalOrthogonalMatrix::random(&mut rng, 25);
            let [u, v, w] = m.frame();
            let t = circle_param_from_tangent(&Rational::frac(i % 37 - 18, 19));
            let mixed =
                RationalUnitVector3::new(&v.as_vector().scale(t.c()) + &w.as_vector().scale(t.s()))
                    .unwrap();
            assert!(u.dot(&mixed).is_zero());
            assert_ne!(meyer_color(&u), meyer_color(&mixed));
        }
    }

    #[test]
    fn fast_color_matches_primitive_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..3000 {
            for v in random_rational_frame(&mut rng, 60) {
                assert_eq!(meyer_color(&v), primitive_integer_rep(&v).odd_axis());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn color_is_sign_invariant(p in -40i64..40, q in -40i64..40, r in 1i64..40) {
            // stereographic image of (p/r, q/r)
            let (p, q, r) = (p as i128, q as i128, r as i128);
            let d = r * r + p * p + q * q;
            let v = RationalVector3::new(
                Rational::new(2 * p * r, d).unwrap(),
                Rational::new(2 * q * r, d).unwrap(),
                Rational::new(r * r - p * p - q * q, d).unwrap(),
            );
            let u = RationalUnitVector3::new(v).unwrap();
            let rep = primitive_integer_rep(&u);
            prop_assert!(rep.n.is_odd() && rep.n.is_positive());
            prop_assert_eq!(meyer_color(&u), meyer_color(&u.negated()));
            prop_assert_eq!(meyer_color(&u), rep.odd_axis());
        }
    }
}
