//! Exact rational directions scattered over a spherical cap.
//!
//! A point of the cap around `e_k` is produced by inverse stereographic
//! projection of a grid point (A, B)/2^K, then carried onto the target by the
//! exact rotation [`RationalOrthogonalMatrix::aligning_axis`]. The axis k is
//! chosen so that the target's integer coordinate T[k] is even, which keeps
//! every denominator of that rotation odd.
//!
//! Consequence for the parity coloring: every cap point is congruent to e_k
//! modulo 2 (2-adically), and an odd-denominator rotation preserves that, so
//! each sampled direction has the same parity color as the target. The grid
//! only controls how finely the cap is covered.

use num_bigint::BigInt;
use rand::Rng;

use crate::coloring::primitive_integer_rep;
use crate::frame::RationalOrthogonalMatrix;
use crate::vector::RationalUnitVector3;

use super::SimulationError;

/// Grid points landing this close to the cap boundary (relative) are redrawn
/// so that the realized angle never exceeds ε after rounding.
const BOUNDARY_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct DirectionSampler {
    target: RationalUnitVector3,
    epsilon: f64,
    axis: usize,
    rotation: RationalOrthogonalMatrix,
    /// log2 of the grid denominator.
    grid_bits: u32,
    /// Cap radius in the stereographic chart, in grid units.
    chart_radius: f64,
    half_sin: f64,
}

impl DirectionSampler {
    pub fn new(target: &RationalUnitVector3, epsilon: f64) -> Result<Self, SimulationError> {
        check_epsilon(epsilon)?;
        let rep = primitive_integer_rep(target);
        let axis = (0..3)
            .find(|&i| !rep.coords()[i].bit(0))
            .expect("two coordinates of a primitive sphere point are even");
        let rotation = RationalOrthogonalMatrix::aligning_axis(axis, target);
        let tan_half = (epsilon / 2.0).tan();
        let grid_bits = if epsilon == 0.0 {
            0
        } else {
            ((1.0 / tan_half).log2().ceil().max(0.0) as u32 + 20).max(16)
        };
        Ok(DirectionSampler {
            target: target.clone(),
            epsilon,
            axis,
            rotation,
            grid_bits,
            chart_radius: tan_half * 2f64.powi(grid_bits as i32),
            half_sin: (epsilon / 2.0).sin(),
        })
    }

    pub fn target(&self) -> &RationalUnitVector3 {
        &self.target
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    /// Draws θ with 1 − cos θ uniform (area-uniform on the cap) and φ
    /// uniform, then rounds the chart point to the grid.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RationalUnitVector3 {
        let (coords, scale) = self.sample_integer(rng);
        RationalUnitVector3::from_integer_coords(coords, scale).expect("rotation of a sphere point")
    }

    /// As [`sample`](Self::sample), but returns unreduced integer
    /// coordinates over a common scale.
    pub fn sample_integer<R: Rng + ?Sized>(&self, rng: &mut R) -> ([BigInt; 3], BigInt) {
        if self.epsilon == 0.0 {
            return self.target.as_vector().integer_form();
        }
        let limit = self.chart_radius * self.chart_radius * (1.0 - BOUNDARY_MARGIN);
        let unit = 2f64.powi(self.grid_bits as i32);
        let (a, b) = loop {
            let u: f64 = rng.random();
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let theta = 2.0 * (u.sqrt() * self.half_sin).asin();
            let rho = (theta / 2.0).tan() * unit;
            let a = (rho * phi.cos()).round();
            let b = (rho * phi.sin()).round();
            if a * a + b * b <= limit {
                break (a as i64, b as i64);
            }
        };
        let (local, den) = cap_point(self.axis, a, b, self.grid_bits);
        let coords = self.rotation.apply_integer(&local);
        (coords, den * self.rotation.denominator())
    }
}

/// Inverse stereographic image of (a, b)/2^bits in the chart around e_axis,
/// as integer coordinates over a common denominator.
fn cap_point(axis: usize, a: i64, b: i64, bits: u32) -> ([BigInt; 3], BigInt) {
    let r = BigInt::from(1) << bits;
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let r2 = &r * &r;
    let s = &a * &a + &b * &b;
    let mut c: [BigInt; 3] = Default::default();
    c[axis] = &r2 - &s;
    c[(axis + 1) % 3] = BigInt::from(2) * &a * &r;
    c[(axis + 2) % 3] = BigInt::from(2) * &b * &r;
    (c, r2 + s)
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<(), SimulationError> {
    if (0.0..std::f64::consts::FRAC_PI_2).contains(&epsilon) {
        Ok(())
    } else {
        Err(SimulationError::EpsilonOutOfRange(epsilon))
    }
}

/// One direction within `epsilon` of `target`. Prefer [`DirectionSampler`]
/// when drawing many samples around the same target.
pub fn sample_direction_near<R: Rng + ?Sized>(
    target: &RationalUnitVector3,
    epsilon: f64,
    rng: &mut R,
) -> Result<RationalUnitVector3, SimulationError> {
    Ok(DirectionSampler::new(target, epsilon)?.sample(rng))
}
