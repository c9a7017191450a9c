//! Points of the twistor fiber and scans of the twistor scalar curvature
//! along a fiber.

use nalgebra::{DMatrix, Matrix3, UnitQuaternion, Vector3};
use rayon::prelude::*;

use crate::error::GeomError;
use crate::fourblocks::{lift_p_rotation, sym3_eigenvalues, FrameRotation};
use crate::geomcore::CurvatureData;

use super::qtensor::{check_t, fiber_quadratic_form, q_tensors, twistor_blocks, twistor_scalar};

/// Reference point of the fiber sphere.
pub const REFERENCE_POINT: [f64; 3] = [1.0, 0.0, 0.0];
/// Default number of fiber samples.
pub const DEFAULT_SAMPLES: usize = 64;
/// Fewest fiber samples `fiber_scan` accepts.
pub const MIN_SAMPLES: usize = 8;
/// Relative spread below which the twistor scalar counts as fiber-constant.
/// The spread is compared with the size of the fiber-dependent term
/// `t² nᵀKn`, not with `S̄` itself, whose `2/t²` part would hide it.
pub const FIBER_CONSTANT_TOL: f64 = 1e-7;

/// A point `n` of the fiber sphere with a frame rotation realizing it.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberPoint {
    pub n: Vector3<f64>,
    pub rotation: FrameRotation,
}

/// The rotation quaternion carrying the reference point to `n` along the
/// great circle between them; at the antipode a half turn about the third
/// axis is used.
pub fn fiber_quaternion(n: &Vector3<f64>) -> UnitQuaternion<f64> {
    let n0 = Vector3::from(REFERENCE_POINT);
    let w = 1.0 + n0.dot(n);
    let axis = n0.cross(n);
    if w < 1e-14 {
        return UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(0.0, 0.0, 0.0, 1.0));
    }
    UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(w, axis.x, axis.y, axis.z))
}

impl FiberPoint {
    pub fn new(n: Vector3<f64>) -> Result<Self, GeomError> {
        let norm = n.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(GeomError::InvalidArgument(
                "fiber point must be a nonzero vector".into(),
            ));
        }
        let n = n / norm;
        let r: Matrix3<f64> = *fiber_quaternion(&n).to_rotation_matrix().matrix();
        Ok(Self {
            n,
            rotation: lift_p_rotation(&r),
        })
    }

    pub fn reference() -> Self {
        Self {
            n: Vector3::from(REFERENCE_POINT),
            rotation: FrameRotation::identity(),
        }
    }

    /// Unit sphere point from stereographic coordinates, projecting from the
    /// antipode of the reference point.
    pub fn from_stereographic(u: f64, v: f64) -> Result<Self, GeomError> {
        let rho2 = u * u + v * v;
        Self::new(Vector3::new(1.0 - rho2, 2.0 * u, 2.0 * v) / (1.0 + rho2))
    }

    pub fn rotation_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(4, 4, |i, j| self.rotation.a[(i, j)])
    }
}

/// Deterministic, nearly uniform points on the unit sphere.
pub fn fibonacci_sphere(samples: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..samples)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / samples as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Twistor scalar curvature at one fiber point, by rotating the frame and
/// recomputing the q-tensors.
pub fn scalar_at_fiber_point(
    curv_tw: &CurvatureData,
    point: &FiberPoint,
    t: f64,
) -> Result<f64, GeomError> {
    let rotated = curv_tw.rotated(&point.rotation_matrix());
    twistor_scalar(curv_tw.scalar, &q_tensors(&rotated)?, t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberSample {
    pub point: FiberPoint,
    pub scalar: f64,
}

/// Result of a fiber scan.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberScan {
    pub t: f64,
    pub samples: Vec<FiberSample>,
    /// Extremes over the whole fiber, from the eigenvalues of the quadratic
    /// form `S̄(n) = S + 2/t² − t²(tr K − nᵀ K n)`.
    pub min: f64,
    pub max: f64,
    pub sample_min: f64,
    pub sample_max: f64,
    pub mean: f64,
    pub spread: f64,
    /// `FIBER_CONSTANT_TOL · t² (1 + λ_max(K))`.
    pub threshold: f64,
    pub constant: bool,
}

/// Scan `S̄` over a Fibonacci grid of the fiber at one base point.
/// `curv_tw` must be in the twistor frame.
pub fn fiber_scan(curv_tw: &CurvatureData, t: f64, samples: usize) -> Result<FiberScan, GeomError> {
    check_t(t)?;
    if samples < MIN_SAMPLES {
        return Err(GeomError::InvalidArgument(format!(
            "{samples} fiber samples, need at least {MIN_SAMPLES}"
        )));
    }
    let values: Vec<FiberSample> = fibonacci_sphere(samples)
        .into_par_iter()
        .map(|n| {
            let point = FiberPoint::new(n)?;
            let scalar = scalar_at_fiber_point(curv_tw, &point, t)?;
            Ok(FiberSample { point, scalar })
        })
        .collect::<Result<_, GeomError>>()?;
    let sample_min = values
        .iter()
        .map(|s| s.scalar)
        .fold(f64::INFINITY, f64::min);
    let sample_max = values
        .iter()
        .map(|s| s.scalar)
        .fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().map(|s| s.scalar).sum::<f64>() / values.len() as f64;

    let k = fiber_quadratic_form(&twistor_blocks(curv_tw)?);
    let eig = sym3_eigenvalues(&k);
    let base = curv_tw.scalar + 2.0 / (t * t) - t * t * k.trace();
    let min = (base + t * t * eig[2]).min(sample_min);
    let max = (base + t * t * eig[0]).max(sample_max);
    let spread = max - min;
    let threshold = FIBER_CONSTANT_TOL * t * t * (1.0 + eig[0].max(0.0));
    Ok(FiberScan {
        t,
        samples: values,
        min,
        max,
        sample_min,
        sample_max,
        mean,
        spread,
        threshold,
        constant: spread <= threshold,
    })
}
