//! The curvature operator as a block matrix on `Λ^+ ⊕ Λ^-`.

use nalgebra::{Matrix3, Matrix6};

use crate::error::GeomError;
use crate::geomcore::{CurvatureData, Tensor4};

use super::hodge::{inner, lambda_bases, TwoForm, TwoFormBasis, BASIS_CONVENTION};

/// Blocks `[[A, Bᵀ], [B, C]]` of the curvature operator: `A` acts on `Λ^+`,
/// `C` on `Λ^-`, `B` maps `Λ^+` to `Λ^-`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockData {
    pub a: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub c: Matrix3<f64>,
    pub scalar: f64,
    pub orientation: i8,
    pub basis_convention: &'static str,
}

impl BlockData {
    pub fn matrix6(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.a);
        m.fixed_view_mut::<3, 3>(0, 3)
            .copy_from(&self.b.transpose());
        m.fixed_view_mut::<3, 3>(3, 0).copy_from(&self.b);
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(&self.c);
        m
    }

    /// `W^+` as an operator on `Λ^+`: `A − (S/12) I`.
    pub fn weyl_plus(&self) -> Matrix3<f64> {
        self.a - Matrix3::identity() * (self.scalar / 12.0)
    }

    /// `W^-` as an operator on `Λ^-`: `C − (S/12) I`.
    pub fn weyl_minus(&self) -> Matrix3<f64> {
        self.c - Matrix3::identity() * (self.scalar / 12.0)
    }

    /// Scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        1.0 + self.matrix6().abs().max()
    }

    /// Residuals of the block invariants: symmetry of the 6×6 matrix and
    /// `tr A = tr C = S/4`.
    pub fn invariant_residual(&self) -> f64 {
        let m = self.matrix6();
        let sym = (m - m.transpose()).abs().max();
        let tr_a = (self.a.trace() - self.scalar / 4.0).abs();
        let tr_c = (self.c.trace() - self.scalar / 4.0).abs();
        sym.max(tr_a).max(tr_c)
    }
}

/// `(𝓡 η)_{ij} = ½ R_{ijkl} η_{kl}`.
pub fn curvature_operator(r: &Tensor4, eta: &TwoForm) -> TwoForm {
    TwoForm::from_fn(|i, j| {
        let mut s = 0.0;
        for k in 0..4 {
            for l in 0..4 {
                s += r.get(i, j, k, l) * eta[(k, l)];
            }
        }
        0.5 * s
    })
}

/// `M_{pq} = ⟨𝓡 η_q, η_p⟩ / ⟨η_p, η_p⟩` over the six basis forms.
pub fn operator_matrix(r: &Tensor4, basis: &TwoFormBasis) -> Matrix6<f64> {
    let all = basis.all();
    let images: Vec<TwoForm> = all.iter().map(|e| curvature_operator(r, e)).collect();
    Matrix6::from_fn(|p, q| inner(&images[q], &all[p]) / inner(&all[p], &all[p]))
}

pub fn curvature_blocks(curv: &CurvatureData, orientation: i8) -> Result<BlockData, GeomError> {
    if curv.dim != 4 {
        return Err(GeomError::DimensionMismatch {
            expected: 4,
            found: curv.dim,
        });
    }
    let basis = lambda_bases(orientation);
    let m = operator_matrix(&curv.riemann, &basis);
    // symmetrize away rounding; the residual is reported separately
    let m = (m + m.transpose()) * 0.5;
    Ok(BlockData {
        a: m.fixed_view::<3, 3>(0, 0).into(),
        b: m.fixed_view::<3, 3>(3, 0).into(),
        c: m.fixed_view::<3, 3>(3, 3).into(),
        scalar: curv.scalar,
        orientation: basis.orientation,
        basis_convention: BASIS_CONVENTION,
    })
}

/// Classification flags together with the residuals they were decided on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub einstein: bool,
    pub self_dual: bool,
    pub anti_self_dual: bool,
    pub weyl_flat: bool,
    /// `max |B|`.
    pub einstein_residual: f64,
    /// `max |C − (S/12) I|`, i.e. the size of `W^-`.
    pub self_dual_residual: f64,
    /// `max |A − (S/12) I|`, i.e. the size of `W^+`.
    pub anti_self_dual_residual: f64,
    /// The scale the tolerance was multiplied by.
    pub scale: f64,
}

impl Classification {
    /// Conjunction over several points; residuals take the maximum.
    pub fn combine(&self, other: &Classification) -> Classification {
        Classification {
            einstein: self.einstein && other.einstein,
            self_dual: self.self_dual && other.self_dual,
            anti_self_dual: self.anti_self_dual && other.anti_self_dual,
            weyl_flat: self.weyl_flat && other.weyl_flat,
            einstein_residual: self.einstein_residual.max(other.einstein_residual),
            self_dual_residual: self.self_dual_residual.max(other.self_dual_residual),
            anti_self_dual_residual: self
                .anti_self_dual_residual
                .max(other.anti_self_dual_residual),
            scale: self.scale.max(other.scale),
        }
    }
}

/// Einstein iff `B = 0`; self-dual iff `C = (S/12) I`; anti-self-dual iff
/// `A = (S/12) I`, each within `tol` relative to the size of the operator.
pub fn classify(blocks: &BlockData, tol: f64) -> Classification {
    let scale = blocks.scale();
    let einstein_residual = blocks.b.abs().max();
    let self_dual_residual = blocks.weyl_minus().abs().max();
    let anti_self_dual_residual = blocks.weyl_plus().abs().max();
    let bound = tol * scale;
    let self_dual = self_dual_residual <= bound;
    let anti_self_dual = anti_self_dual_residual <= bound;
    Classification {
        einstein: einstein_residual <= bound,
        self_dual,
        anti_self_dual,
        weyl_flat: self_dual && anti_self_dual,
        einstein_residual,
        self_dual_residual,
        anti_self_dual_residual,
        scale,
    }
}
