//! Noncontextual hidden-variable models.

use rand_chacha::ChaCha8Rng;

use crate::coloring::{meyer_color, meyer_value, Axis};
use crate::frame::RationalOrthogonalMatrix;
use crate::vector::RationalUnitVector3;

/// An outcome rule that sees only the hidden state and the realized
/// direction. The signature leaves no room for co-measured directions, so
/// every implementation is noncontextual.
pub trait NchvModel: Sync {
    type Hidden;

    fn name(&self) -> String;
    fn sample_hidden(&self, rng: &mut ChaCha8Rng) -> Self::Hidden;
    fn outcome(&self, hidden: &Self::Hidden, direction: &RationalUnitVector3) -> bool;
}

/// The parity coloring itself: 1 exactly on the `one_axis` color class.
/// No hidden state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeyerModel {
    pub one_axis: Axis,
}

impl MeyerModel {
    pub fn new(one_axis: Axis) -> Self {
        MeyerModel { one_axis }
    }

    /// Valued 1 on the color class of `v`.
    pub fn matching(v: &RationalUnitVector3) -> Self {
        MeyerModel::new(meyer_color(v))
    }
}

impl NchvModel for MeyerModel {
    type Hidden = ();

    fn name(&self) -> String {
        format!("meyer(one_axis={})", self.one_axis)
    }

    fn sample_hidden(&self, _rng: &mut ChaCha8Rng) {}

    fn outcome(&self, _hidden: &(), direction: &RationalUnitVector3) -> bool {
        meyer_value(direction, self.one_axis)
    }
}

/// Each particle carries its own exact rational rotation R, drawn from
/// integer quaternions with components in `[-quaternion_bound,
/// quaternion_bound]`; the outcome is the parity coloring of R·v.
///
/// Rational rotations have odd denominators, so modulo 2 they act as signed
/// permutation matrices and merely permute the three parity classes. The
/// hidden state therefore mixes the three colorings of [`MeyerModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RotatedMeyerModel {
    pub one_axis: Axis,
    pub quaternion_bound: i64,
}

pub const DEFAULT_QUATERNION_BOUND: i64 = 20;

impl RotatedMeyerModel {
    pub fn new(one_axis: Axis) -> Self {
        RotatedMeyerModel {
            one_axis,
            quaternion_bound: DEFAULT_QUATERNION_BOUND,
        }
    }
}

impl NchvModel for RotatedMeyerModel {
    type Hidden = RationalOrthogonalMatrix;

    fn name(&self) -> String {
        format!(
            "rotated-meyer(one_axis={},bound={})",
            self.one_axis, self.quaternion_bound
        )
    }

    fn sample_hidden(&self, rng: &mut ChaCha8Rng) -> RationalOrthogonalMatrix {
        RationalOrthogonalMatrix::random(rng, self.quaternion_bound)
    }

    fn outcome(&self, hidden: &RationalOrthogonalMatrix, direction: &RationalUnitVector3) -> bool {
        meyer_value(&hidden.apply_unit(direction), self.one_axis)
    }
}

/// Same answer for every direction. Not a KS coloring; useful as a
/// degenerate or saturating baseline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstantModel(pub bool);

impl NchvModel for ConstantModel {
    type Hidden = ();

    fn name(&self) -> String {
        format!("constant({})", u8::from(self.0))
    }

    fn sample_hidden(&self, _rng: &mut ChaCha8Rng) {}

    fn outcome(&self, _hidden: &(), _direction: &RationalUnitVector3) -> bool {
        self.0
    }
}
