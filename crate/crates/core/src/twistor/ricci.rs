//! Ricci analysis of the twistor chart by the generic curvature engine.

use nalgebra::DMatrix;

use crate::error::GeomError;
use crate::geomcore::covariant::{covariant_ricci, DEFAULT_STEP};
use crate::geomcore::curvature::{analyze_point, DEFAULT_TOL};
use crate::geomcore::ChartPoint;

use super::chart::TwistorChart;

/// Ricci data of the twistor metric at one chart point.
#[derive(Debug, Clone)]
pub struct TwistorRicci {
    /// Frame components of `Ric(g_t)`.
    pub ricci: DMatrix<f64>,
    /// Scalar curvature computed by the engine on the chart.
    pub scalar: f64,
    /// `max |Ric − (S̄/6) g_t|`.
    pub einstein_residual: f64,
    /// `|∇Ric|`, by finite differences.
    pub ricci_parallel_residual: f64,
    /// Norm of the second fundamental form of the fiber.
    pub fiber_second_fundamental_form: f64,
    /// Deviation of the horizontal metric from the base metric.
    pub horizontal_residual: f64,
    /// Largest structure-equation and symmetry residual of the 6-dim run.
    pub invariant_residual: f64,
    pub accuracy_warning: bool,
}

pub fn twistor_ricci_analysis(
    chart: &TwistorChart,
    p: &ChartPoint,
) -> Result<TwistorRicci, GeomError> {
    let analysis = analyze_point(chart, p, DEFAULT_TOL)?;
    let curv = &analysis.curvature;
    let n = curv.dim;
    let einstein = &curv.ricci - DMatrix::<f64>::identity(n, n) * (curv.scalar / n as f64);
    let cov = covariant_ricci(chart, p, DEFAULT_STEP)?;
    Ok(TwistorRicci {
        ricci: curv.ricci.clone(),
        scalar: curv.scalar,
        einstein_residual: einstein.abs().max(),
        ricci_parallel_residual: cov.value.norm_squared().sqrt(),
        fiber_second_fundamental_form: chart.fiber_second_fundamental_form(p)?,
        horizontal_residual: chart.horizontal_residual(p)?,
        invariant_residual: analysis.residuals.max(),
        accuracy_warning: cov.accuracy_warning,
    })
}
