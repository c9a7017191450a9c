//! Pointwise identities linking the q-tensors to the curvature blocks.

use nalgebra::{Matrix3, SymmetricEigen};

use crate::error::GeomError;
use crate::fourblocks::{lift_p_rotation, weyl_minus_tensor};
use crate::geomcore::{curvature_at, ChartPoint, CurvatureData, MetricField};

use super::chart::TwistorChart;
use super::qtensor::{q_tensors, twistor_blocks, twistor_frame_curvature, twistor_scalar};

/// Residuals of the twistor identities at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    /// `| |W⁻|² − (|q²|² + |q³|² + |q⁴|² − S²/12) |`, tensor norms; the
    /// identity requires an Einstein metric.
    pub weyl_minus_q: f64,
    /// `max_k | |q^{k+1}|² − 4 Ã_kk² |` in the frame diagonalizing `A`, or
    /// `None` when the metric is not Einstein at this point.
    pub einstein_q: Option<f64>,
    /// `|S̄_formula − S̄_engine|` at the reference fiber point.
    pub scalar: f64,
    pub scalar_formula: f64,
    pub scalar_engine: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.weyl_minus_q
            .max(self.einstein_q.unwrap_or(0.0))
            .max(self.scalar)
    }
}

/// `|W⁻|²` against the q-tensor sum; both sides relative to `1 + S²`.
pub fn weyl_minus_identity_residual(
    curv: &CurvatureData,
    orientation: i8,
) -> Result<f64, GeomError> {
    let w_minus = weyl_minus_tensor(&curv.weyl, orientation).norm_squared();
    let q = q_tensors(&twistor_frame_curvature(curv, orientation)?)?;
    let total: f64 = q.norms_squared.iter().sum();
    let rhs = total - curv.scalar * curv.scalar / 12.0;
    Ok((w_minus - rhs).abs() / (1.0 + curv.scalar * curv.scalar))
}

/// A rotation with determinant +1 whose columns diagonalize `a`.
pub fn diagonalizing_rotation(a: &Matrix3<f64>) -> Matrix3<f64> {
    let eig = SymmetricEigen::new(*a);
    let mut v = eig.eigenvectors;
    if v.determinant() < 0.0 {
        v.column_mut(2).neg_mut();
    }
    v
}

/// `|q^{k+1}|² = 4 Ã_kk²` after rotating the twistor frame so that `A` is
/// diagonal; `None` unless `curv` is Einstein.
pub fn einstein_identity_residual(
    curv: &CurvatureData,
    orientation: i8,
) -> Result<Option<f64>, GeomError> {
    if curv.einstein_constant.is_none() {
        return Ok(None);
    }
    let tw = twistor_frame_curvature(curv, orientation)?;
    let blocks = twistor_blocks(&tw)?;
    let rot = lift_p_rotation(&diagonalizing_rotation(&blocks.a));
    let a4 = nalgebra::DMatrix::from_fn(4, 4, |i, j| rot.a[(i, j)]);
    let rotated = tw.rotated(&a4);
    let diag = twistor_blocks(&rotated)?.a;
    let q = q_tensors(&rotated)?;
    let worst = (0..3)
        .map(|k| (q.norms_squared[k] - 4.0 * diag[(k, k)].powi(2)).abs())
        .fold(0.0, f64::max);
    Ok(Some(worst / (1.0 + diag.abs().max().powi(2))))
}

/// All identity residuals of `m` at base point `x` for the twistor parameter `t`.
pub fn verify_identities(
    m: &MetricField,
    x: &ChartPoint,
    t: f64,
) -> Result<IdentityResiduals, GeomError> {
    let curv = curvature_at(m, x)?;
    let orientation = m.orientation();
    let q = q_tensors(&twistor_frame_curvature(&curv, orientation)?)?;
    let scalar_formula = twistor_scalar(curv.scalar, &q, t)?;
    let chart = TwistorChart::new(m.clone(), t)?;
    let scalar_engine = curvature_at(&chart, &TwistorChart::point(x, 0.0, 0.0))?.scalar;
    Ok(IdentityResiduals {
        weyl_minus_q: weyl_minus_identity_residual(&curv, orientation)?,
        einstein_q: einstein_identity_residual(&curv, orientation)?,
        scalar: (scalar_formula - scalar_engine).abs(),
        scalar_formula,
        scalar_engine,
    })
}
