//! The O'Neill integrability tensor of the twistor submersion.

use crate::error::GeomError;
use crate::geomcore::CurvatureData;

use super::fiber::FiberScan;
use super::qtensor::{check_t, fiber_quadratic_form, q_tensors, twistor_blocks};
use crate::fourblocks::sym3_eigenvalues;

/// Default tolerance for the integrability verdict, relative to `1 + max|R|`.
pub const INTEGRABILITY_TOL: f64 = 1e-8;

/// Components `A^p_{qr}` in the frame `(e_1..e_4, e_5, e_6)`, 0-based, stored
/// `[p][q][r]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneillTensor {
    pub t: f64,
    pub components: Vec<f64>,
}

impl OneillTensor {
    pub fn get(&self, p: usize, q: usize, r: usize) -> f64 {
        self.components[(p * 6 + q) * 6 + r]
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `Σ_{p,a,b} (A^p_{ab})²` over horizontal `a, b` and vertical `p`.
    pub fn horizontal_norm_squared(&self) -> f64 {
        let mut s = 0.0;
        for p in 4..6 {
            for a in 0..4 {
                for b in 0..4 {
                    s += self.get(p, a, b).powi(2);
                }
            }
        }
        s
    }
}

/// `A⁵_{ab} = (t/2) q³_{ab}`, `A⁶_{ab} = (t/2) q⁴_{ab}`,
/// `A^b_{a5} = −(t/2) q³_{ab}`, `A^b_{a6} = −(t/2) q⁴_{ab}`; the rest vanish.
/// `curv_tw` is the curvature in the (possibly fiber-rotated) twistor frame.
pub fn oneill_components(curv_tw: &CurvatureData, t: f64) -> Result<OneillTensor, GeomError> {
    check_t(t)?;
    let q = q_tensors(curv_tw)?;
    let mut c = vec![0.0; 216];
    let idx = |p: usize, q: usize, r: usize| (p * 6 + q) * 6 + r;
    for a in 0..4 {
        for b in 0..4 {
            c[idx(4, a, b)] = 0.5 * t * q.q3[(a, b)];
            c[idx(5, a, b)] = 0.5 * t * q.q4[(a, b)];
            c[idx(b, a, 4)] = -0.5 * t * q.q3[(a, b)];
            c[idx(b, a, 5)] = -0.5 * t * q.q4[(a, b)];
        }
    }
    Ok(OneillTensor { t, components: c })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneillReport {
    /// Components at the reference fiber point.
    pub reference: OneillTensor,
    /// Largest component over the scanned fiber points.
    pub max_over_samples: f64,
    /// Largest `(Σ (A^p_{ab})²)^{1/2}` over the whole fiber (closed form).
    pub max_norm_over_fiber: f64,
    pub integrable: bool,
}

/// O'Neill tensor over a fiber; the verdict uses the whole fiber since the
/// components depend on the fiber point.
pub fn oneill_tensor(
    curv_tw: &CurvatureData,
    scan: &FiberScan,
    tol: f64,
) -> Result<OneillReport, GeomError> {
    let t = scan.t;
    let reference = oneill_components(curv_tw, t)?;
    let mut max_over_samples = reference.max_abs();
    for s in &scan.samples {
        let rotated = curv_tw.rotated(&s.point.rotation_matrix());
        max_over_samples = max_over_samples.max(oneill_components(&rotated, t)?.max_abs());
    }
    let k = fiber_quadratic_form(&twistor_blocks(curv_tw)?);
    let eig = sym3_eigenvalues(&k);
    // (t²/4)(|q³|² + |q⁴|²) = t²(tr K − nᵀKn), largest at the smallest eigenvalue
    let max_norm_over_fiber = (t * t * (k.trace() - eig[2])).max(0.0).sqrt();
    let bound = tol * curv_tw.scale();
    Ok(OneillReport {
        integrable: max_over_samples <= bound && max_norm_over_fiber <= bound,
        reference,
        max_over_samples,
        max_norm_over_fiber,
    })
}
