//! Spectra of the Weyl halves and the Bochner–Weitzenböck balance.

use nalgebra::Matrix3;

use crate::error::GeomError;
use crate::geomcore::{
    covariant_derivative_tensor, curvature_at, laplacian, ChartPoint, CurvatureData, MetricSource,
    Tensor4, DEFAULT_STEP, LAPLACIAN_STEP,
};

use super::blocks::{curvature_blocks, BlockData};
use super::hodge::levi_civita;

/// Identifier for the norm used in [`SpectralReport`]: squared norms and
/// determinants of `W^±` as operators on `Λ^±` (sum of squared eigenvalues).
/// The full tensor contraction is 4 times larger.
pub const NORM_CONVENTION: &str = "operator";

/// Eigenvalues of a symmetric 3×3 matrix, descending, by the trigonometric
/// closed form.
pub fn sym3_eigenvalues(m: &Matrix3<f64>) -> [f64; 3] {
    let m = (m + m.transpose()) * 0.5;
    let p1 = m[(0, 1)].powi(2) + m[(0, 2)].powi(2) + m[(1, 2)].powi(2);
    let q = m.trace() / 3.0;
    let mut out = if p1 == 0.0 {
        [m[(0, 0)], m[(1, 1)], m[(2, 2)]]
    } else {
        let p2 =
            (m[(0, 0)] - q).powi(2) + (m[(1, 1)] - q).powi(2) + (m[(2, 2)] - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        if p == 0.0 {
            [q, q, q]
        } else {
            let b = (m - Matrix3::identity() * q) / p;
            let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
            let phi = r.acos() / 3.0;
            let e1 = q + 2.0 * p * phi.cos();
            let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
            [e1, 3.0 * q - e1 - e3, e3]
        }
    };
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Frame components of `W^-`: `¼ P W P` with `P_{ijmn} = ½(δ_im δ_jn − δ_in δ_jm − o ε_{ijmn})`.
pub fn weyl_minus_tensor(weyl: &Tensor4, orientation: i8) -> Tensor4 {
    let o = if orientation < 0 { -1.0 } else { 1.0 };
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let proj = Tensor4::from_fn(4, |i, j, m, n| {
        0.5 * (d(i, m) * d(j, n) - d(i, n) * d(j, m) - o * levi_civita(i, j, m, n))
    });
    // (P W)_{ijpq} = ½ P_{ijmn} W_{mnpq}, then (P W P) likewise
    let half = |x: &Tensor4, y: &Tensor4| {
        Tensor4::from_fn(4, |i, j, k, l| {
            let mut s = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    s += x.get(i, j, m, n) * y.get(m, n, k, l);
                }
            }
            0.5 * s
        })
    };
    half(&half(&proj, weyl), &proj)
}

/// Spectral summary of the Weyl halves at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub weyl_minus_eigen: [f64; 3],
    pub weyl_minus_det: f64,
    pub weyl_plus_eigen: [f64; 3],
    pub weyl_plus_det: f64,
    /// `|W^-|²` in the operator convention.
    pub weyl_minus_norm: f64,
    /// `½Δ|W⁻|² − |∇W⁻|² − (S/2)|W⁻|² + 18 det W⁻`; `None` when derivative
    /// terms were not requested.
    pub bochner_residual: Option<f64>,
    /// The two derivative terms, `½Δ|W⁻|²` and `|∇W⁻|²`.
    pub laplacian_term: Option<f64>,
    pub gradient_term: Option<f64>,
    /// `(S/2)|W⁻|² − 18 det W⁻`, the algebraic part on its own.
    pub algebraic_balance: f64,
    /// `(24 |W⁻|²)^{1/3}`, 0 when `W^- = 0`.
    pub derdzinski_factor: f64,
    pub norm_convention: &'static str,
    pub accuracy_warning: bool,
}

/// Eigenvalues and determinants from the blocks alone.
pub fn algebraic_spectrum(blocks: &BlockData) -> SpectralReport {
    let wm = blocks.weyl_minus();
    let wp = blocks.weyl_plus();
    let weyl_minus_eigen = sym3_eigenvalues(&wm);
    let weyl_minus_norm: f64 = weyl_minus_eigen.iter().map(|x| x * x).sum();
    let weyl_minus_det = weyl_minus_eigen.iter().product();
    let weyl_plus_eigen = sym3_eigenvalues(&wp);
    SpectralReport {
        weyl_minus_eigen,
        weyl_minus_det,
        weyl_plus_eigen,
        weyl_plus_det: weyl_plus_eigen.iter().product(),
        weyl_minus_norm,
        bochner_residual: None,
        laplacian_term: None,
        gradient_term: None,
        algebraic_balance: blocks.scalar / 2.0 * weyl_minus_norm - 18.0 * weyl_minus_det,
        derdzinski_factor: (24.0 * weyl_minus_norm).cbrt(),
        norm_convention: NORM_CONVENTION,
        accuracy_warning: false,
    }
}

/// Full report including the Bochner–Weitzenböck residual at `p`.
///
/// `|∇W⁻|²` comes from finite differences of frame components with step
/// `DEFAULT_STEP`, the Laplacian from second differences with `LAPLACIAN_STEP`.
pub fn spectral_report(
    m: &dyn MetricSource,
    p: &ChartPoint,
    curv: &CurvatureData,
    blocks: &BlockData,
) -> Result<SpectralReport, GeomError> {
    if curv.dim != 4 {
        return Err(GeomError::DimensionMismatch {
            expected: 4,
            found: curv.dim,
        });
    }
    let mut report = algebraic_spectrum(blocks);
    let o = blocks.orientation;
    let grad = covariant_derivative_tensor(m, p, DEFAULT_STEP, &|q| {
        Ok(weyl_minus_tensor(&curvature_at(m, q)?.weyl, o))
    })?;
    let grad_norm = grad.value.norm_squared() / 4.0;
    let lap = laplacian(m, p, LAPLACIAN_STEP, &|q| {
        let c = curvature_at(m, q)?;
        let b = curvature_blocks(&c, o)?;
        // symmetric, so the Frobenius norm is the eigenvalue norm
        Ok(b.weyl_minus().norm_squared())
    })?;
    report.laplacian_term = Some(0.5 * lap.value);
    report.gradient_term = Some(grad_norm);
    report.bochner_residual = Some(0.5 * lap.value - grad_norm - report.algebraic_balance);
    report.accuracy_warning = grad.accuracy_warning || lap.accuracy_warning;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eigenvalues_match_library_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = Matrix3::from_fn(|_, _| rng.gen_range(-2.0..2.0));
            let s = a + a.transpose();
            let mine = sym3_eigenvalues(&s);
            let mut lib: Vec<f64> = s.symmetric_eigen().eigenvalues.iter().copied().collect();
            lib.sort_by(|x, y| y.total_cmp(x));
            for (x, y) in mine.iter().zip(&lib) {
                assert!((x - y).abs() < 1e-12, "{mine:?} vs {lib:?}");
            }
        }
    }

    #[test]
    fn repeated_eigenvalues() {
        assert_eq!(sym3_eigenvalues(&Matrix3::identity()), [1.0, 1.0, 1.0]);
        let m = Matrix3::from_diagonal(&nalgebra::Vector3::new(-2.0, 4.0, -2.0));
        assert_eq!(sym3_eigenvalues(&m), [4.0, -2.0, -2.0]);
    }
}
