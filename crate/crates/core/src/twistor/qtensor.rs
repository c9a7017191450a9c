//! Twistor-frame curvature, the q-tensors and the closed-form twistor scalar.
//!
//! Twistor constructions use frames that are negatively oriented relative to
//! the orientation of `M`. For a metric with orientation +1 the coordinate
//! frame is reflected (`ω⁴ → −ω⁴`); in the resulting frame the `P` family
//! `{ω¹∧ω²+ω³∧ω⁴, ω¹∧ω³+ω⁴∧ω², ω¹∧ω⁴+ω²∧ω³}` spans `Λ^-` of `M`.

use nalgebra::{Matrix3, Matrix4};

use crate::error::GeomError;
use crate::fourblocks::{curvature_blocks, BlockData};
use crate::geomcore::CurvatureData;

/// The coframe reflection taking an `orientation`-oriented frame to the
/// twistor convention (identity when the frame is already negative).
pub fn twistor_reflection(orientation: i8) -> Matrix4<f64> {
    let mut s = Matrix4::identity();
    if orientation > 0 {
        s[(3, 3)] = -1.0;
    }
    s
}

/// Curvature in the twistor-convention frame.
pub fn twistor_frame_curvature(
    curv: &CurvatureData,
    orientation: i8,
) -> Result<CurvatureData, GeomError> {
    if curv.dim != 4 {
        return Err(GeomError::DimensionMismatch {
            expected: 4,
            found: curv.dim,
        });
    }
    let s = twistor_reflection(orientation);
    let dyn_s = nalgebra::DMatrix::from_fn(4, 4, |i, j| s[(i, j)]);
    Ok(curv.rotated(&dyn_s))
}

/// Blocks in the twistor frame. Its `P` block (`a`) is the operator on
/// `Λ^-` of `M`; it plays the role of `A` in the twistor formulas.
pub fn twistor_blocks(curv_tw: &CurvatureData) -> Result<BlockData, GeomError> {
    curvature_blocks(curv_tw, 1)
}

/// `q² = R_{12ab}+R_{34ab}`, `q³ = R_{13ab}+R_{42ab}`, `q⁴ = R_{14ab}+R_{23ab}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QTensors {
    pub q2: Matrix4<f64>,
    pub q3: Matrix4<f64>,
    pub q4: Matrix4<f64>,
    /// `|q²|², |q³|², |q⁴|²` by full contraction over `(a, b)`.
    pub norms_squared: [f64; 3],
}

impl QTensors {
    pub fn vertical_norm(&self) -> f64 {
        self.norms_squared[1] + self.norms_squared[2]
    }
}

pub fn q_tensors(curv: &CurvatureData) -> Result<QTensors, GeomError> {
    if curv.dim != 4 {
        return Err(GeomError::DimensionMismatch {
            expected: 4,
            found: curv.dim,
        });
    }
    let r = &curv.riemann;
    // antisymmetrized in (a, b) so the antisymmetry holds exactly
    let pair = |i: usize, j: usize, k: usize, l: usize| {
        let m = Matrix4::from_fn(|a, b| r.get(i, j, a, b) + r.get(k, l, a, b));
        (m - m.transpose()) * 0.5
    };
    let q2 = pair(0, 1, 2, 3);
    let q3 = pair(0, 2, 3, 1);
    let q4 = pair(0, 3, 1, 2);
    let norms_squared = [q2.norm_squared(), q3.norm_squared(), q4.norm_squared()];
    Ok(QTensors {
        q2,
        q3,
        q4,
        norms_squared,
    })
}

/// `S̄ = S + 2/t² − (t²/4)(|q³|² + |q⁴|²)`.
pub fn twistor_scalar(scalar: f64, q: &QTensors, t: f64) -> Result<f64, GeomError> {
    check_t(t)?;
    Ok(scalar + 2.0 / (t * t) - t * t / 4.0 * q.vertical_norm())
}

pub(crate) fn check_t(t: f64) -> Result<(), GeomError> {
    if !(t.is_finite() && t > 0.0) {
        return Err(GeomError::InvalidArgument(format!(
            "twistor parameter t = {t} must be positive"
        )));
    }
    Ok(())
}

/// `K = Σ_p M_{p·}ᵀ M_{p·}` over the `P` columns of the full 6×6 operator
/// matrix in the twistor frame, so that `|q^{k+1}|² = 4 K_{kk}`.
pub fn fiber_quadratic_form(blocks_tw: &BlockData) -> Matrix3<f64> {
    blocks_tw.a.transpose() * blocks_tw.a + blocks_tw.b.transpose() * blocks_tw.b
}
