//! Frame rotations and the homomorphism `μ: SO(4) → SO(3) × SO(3)`.

use nalgebra::{Matrix3, Matrix4, Rotation3, UnitQuaternion};

use crate::error::GeomError;

use super::blocks::BlockData;
use super::hodge::{inner, n_family, p_family, TwoForm};

/// A frame change `ẽ_i = Σ_p e_p a_{pi}` together with its action on 2-forms.
///
/// `a_plus` and `a_minus` are the actions on the families that are `Λ^+` and
/// `Λ^-` for orientation +1 (see [`p_family`], [`n_family`]); for orientation
/// −1 their roles swap, which [`FrameRotation::factors`] takes care of.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRotation {
    pub a: Matrix4<f64>,
    pub a_plus: Matrix3<f64>,
    pub a_minus: Matrix3<f64>,
}

impl FrameRotation {
    pub fn identity() -> Self {
        Self {
            a: Matrix4::identity(),
            a_plus: Matrix3::identity(),
            a_minus: Matrix3::identity(),
        }
    }

    /// `(factor on Λ^+, factor on Λ^-)` for the given orientation.
    pub fn factors(&self, orientation: i8) -> (Matrix3<f64>, Matrix3<f64>) {
        if orientation < 0 {
            (self.a_minus, self.a_plus)
        } else {
            (self.a_plus, self.a_minus)
        }
    }

    pub fn compose(&self, other: &FrameRotation) -> FrameRotation {
        FrameRotation {
            a: self.a * other.a,
            a_plus: self.a_plus * other.a_plus,
            a_minus: self.a_minus * other.a_minus,
        }
    }
}

/// `(μ)_{qp} = ⟨a η_p aᵀ, η_q⟩ / ⟨η_q, η_q⟩`: how `a` moves the basis forms.
pub fn family_action(a: &Matrix4<f64>, family: &[TwoForm; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|q, p| {
        let moved = a * family[p] * a.transpose();
        inner(&moved, &family[q]) / inner(&family[q], &family[q])
    })
}

pub fn mu_homomorphism(a: &Matrix4<f64>) -> Result<FrameRotation, GeomError> {
    let orth = (a.transpose() * a - Matrix4::identity()).abs().max();
    if orth > 1e-10 {
        return Err(GeomError::InvalidArgument(format!(
            "matrix is not orthogonal (residual {orth:e})"
        )));
    }
    let det = a.determinant();
    if (det - 1.0).abs() > 1e-10 {
        return Err(GeomError::InvalidArgument(format!(
            "matrix reverses orientation (det {det})"
        )));
    }
    Ok(FrameRotation {
        a: *a,
        a_plus: family_action(a, &p_family()),
        a_minus: family_action(a, &n_family()),
    })
}

/// `Ã = a₊⁻¹ A a₊`, `B̃ = a₋⁻¹ B a₊`, `C̃ = a₋⁻¹ C a₋`.
pub fn rotate_blocks(blocks: &BlockData, rot: &FrameRotation) -> BlockData {
    let (ap, am) = rot.factors(blocks.orientation);
    // the factors are orthogonal, so inverses are transposes
    BlockData {
        a: ap.transpose() * blocks.a * ap,
        b: am.transpose() * blocks.b * ap,
        c: am.transpose() * blocks.c * am,
        ..blocks.clone()
    }
}

/// `w I + s(x J₁ + y J₂ + z J₃)` where `J_m` are the coefficient arrays of
/// one family. Each family's arrays form a quaternion triple of complex
/// structures commuting with the other family, so the result acts trivially
/// there; `sign` selects the orientation that reproduces `q`'s rotation.
fn lift(q: &UnitQuaternion<f64>, family: &[TwoForm; 3], sign: f64) -> Matrix4<f64> {
    let c = q.quaternion().coords; // (i, j, k, w)
    Matrix4::identity() * c[3] + (family[0] * c[0] + family[1] * c[1] + family[2] * c[2]) * sign
}

/// A frame rotation whose action on the `P` family is `r` and whose action on
/// the `N` family is the identity.
pub fn lift_p_rotation(r: &Matrix3<f64>) -> FrameRotation {
    let q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(*r));
    let a = lift(&q, &p_family(), -1.0);
    FrameRotation {
        a,
        a_plus: family_action(&a, &p_family()),
        a_minus: family_action(&a, &n_family()),
    }
}

/// A frame rotation acting by `r` on the `N` family and trivially on `P`.
pub fn lift_n_rotation(r: &Matrix3<f64>) -> FrameRotation {
    let q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(*r));
    let a = lift(&q, &n_family(), 1.0);
    FrameRotation {
        a,
        a_plus: family_action(&a, &p_family()),
        a_minus: family_action(&a, &n_family()),
    }
}

/// A frame rotation acting by `r` on `Λ^+` (for the given orientation) and
/// trivially on `Λ^-`.
pub fn lift_plus_rotation(r: &Matrix3<f64>, orientation: i8) -> FrameRotation {
    if orientation < 0 {
        lift_n_rotation(r)
    } else {
        lift_p_rotation(r)
    }
}
