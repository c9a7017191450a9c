//! Everything the twistor module computes at one base point.

use rayon::prelude::*;

use crate::error::GeomError;
use crate::geomcore::{curvature_at, ChartPoint, MetricField};

use super::chart::TwistorChart;
use super::fiber::{fiber_scan, FiberScan};
use super::oneill::{oneill_tensor, OneillReport};
use super::qtensor::{q_tensors, twistor_frame_curvature, twistor_scalar, QTensors};
use super::ricci::{twistor_ricci_analysis, TwistorRicci};

#[derive(Debug, Clone)]
pub struct TwistorReport {
    pub t: f64,
    pub base_point: ChartPoint,
    /// q-tensors at the reference fiber point.
    pub q: QTensors,
    /// `S̄` from the closed formula at the reference fiber point.
    pub scalar_formula: f64,
    /// `S̄` computed by the engine on the twistor chart at the same point.
    pub scalar_engine: f64,
    pub fiber_scan: FiberScan,
    pub oneill: OneillReport,
    /// Ricci data at the reference fiber point.
    pub ricci: TwistorRicci,
    /// Largest `|∇Ric|` over [`RICCI_FIBER_POINTS`].
    pub ricci_parallel_residual: f64,
    /// Largest Einstein residual over [`RICCI_FIBER_POINTS`].
    pub einstein_residual: f64,
    pub accuracy_warning: bool,
}

/// Fiber coordinates `(u, v)` at which the chart Ricci tensor is examined.
/// The reference point alone can be a critical point of the fiber geometry
/// (it is for a product of spheres), so two generic points are added.
pub const RICCI_FIBER_POINTS: [(f64, f64); 3] = [(0.0, 0.0), (0.3, -0.7), (-0.6, 0.4)];

impl TwistorReport {
    pub fn fiber_constant(&self) -> bool {
        self.fiber_scan.constant
    }

    pub fn integrable(&self) -> bool {
        self.oneill.integrable
    }
}

/// Twistor analysis of `m` over the base point `x`. The engine scalar is
/// taken at the reference fiber point `(u, v) = (0, 0)`.
pub fn twistor_report(
    m: &MetricField,
    x: &ChartPoint,
    t: f64,
    samples: usize,
    tol: f64,
) -> Result<TwistorReport, GeomError> {
    let curv = curvature_at(m, x)?;
    let tw = twistor_frame_curvature(&curv, m.orientation())?;
    let q = q_tensors(&tw)?;
    let scalar_formula = twistor_scalar(curv.scalar, &q, t)?;
    let scan = fiber_scan(&tw, t, samples)?;
    let oneill = oneill_tensor(&tw, &scan, tol)?;
    let chart = TwistorChart::new(m.clone(), t)?;
    let runs = RICCI_FIBER_POINTS
        .par_iter()
        .map(|&(u, v)| twistor_ricci_analysis(&chart, &TwistorChart::point(x, u, v)))
        .collect::<Result<Vec<_>, GeomError>>()?;
    let ricci_parallel_residual = runs
        .iter()
        .map(|r| r.ricci_parallel_residual)
        .fold(0.0, f64::max);
    let einstein_residual = runs.iter().map(|r| r.einstein_residual).fold(0.0, f64::max);
    let accuracy_warning = runs.iter().any(|r| r.accuracy_warning);
    let ricci = runs.into_iter().next().expect("reference fiber point");
    Ok(TwistorReport {
        t,
        base_point: x.clone(),
        q,
        scalar_formula,
        scalar_engine: ricci.scalar,
        fiber_scan: scan,
        oneill,
        ricci,
        ricci_parallel_residual,
        einstein_residual,
        accuracy_warning,
    })
}
