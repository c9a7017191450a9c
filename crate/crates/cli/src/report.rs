//! Serializable reports.

use std::collections::BTreeMap;

use fourfold::fourblocks::hodge::BASIS_CONVENTION;
use fourfold::fourblocks::{
    classify, curvature_blocks, spectral_report, BlockData, Classification, SpectralReport,
    NORM_CONVENTION,
};
use fourfold::geomcore::{analyze_point, InvariantResiduals};
use fourfold::nalgebra::{DMatrix, Matrix3};
use fourfold::twistor::{twistor_report, FiberScan, TwistorReport, INTEGRABILITY_TOL};
use fourfold::{ChartPoint, MetricField};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricInfo {
    pub name: String,
    pub dim: usize,
    pub orientation: i8,
    pub params: BTreeMap<String, f64>,
}

impl MetricInfo {
    pub fn of(m: &MetricField) -> Self {
        Self {
            name: m.name().to_string(),
            dim: m.dim(),
            orientation: m.orientation(),
            params: m.parameters().iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Conventions {
    pub orientation: i8,
    pub curvature_sign: String,
    pub two_form_basis: String,
    pub norm: String,
    pub weyl_norm_bridge: String,
    pub twistor_frame: String,
}

impl Conventions {
    pub fn new(orientation: i8) -> Self {
        Self {
            orientation,
            curvature_sign: "R_1212 = +1 on the unit sphere; Ric_ij = R_kikj".into(),
            two_form_basis: BASIS_CONVENTION.into(),
            norm: NORM_CONVENTION.into(),
            weyl_norm_bridge: "|W-|^2 as a tensor = 4 |W-|^2 as an operator".into(),
            twistor_frame:
                "negatively oriented: fourth coframe form reflected when orientation = +1".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationOut {
    pub einstein: bool,
    pub self_dual: bool,
    pub anti_self_dual: bool,
    pub weyl_flat: bool,
    pub einstein_residual: f64,
    pub self_dual_residual: f64,
    pub anti_self_dual_residual: f64,
}

impl From<&Classification> for ClassificationOut {
    fn from(c: &Classification) -> Self {
        Self {
            einstein: c.einstein,
            self_dual: c.self_dual,
            anti_self_dual: c.anti_self_dual,
            weyl_flat: c.weyl_flat,
            einstein_residual: c.einstein_residual,
            self_dual_residual: c.self_dual_residual,
            anti_self_dual_residual: c.anti_self_dual_residual,
        }
    }
}

fn rows3(m: &Matrix3<f64>) -> Vec<Vec<f64>> {
    (0..3)
        .map(|i| (0..3).map(|j| m[(i, j)]).collect())
        .collect()
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlocksOut {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
}

impl From<&BlockData> for BlocksOut {
    fn from(b: &BlockData) -> Self {
        Self {
            a: rows3(&b.a),
            b: rows3(&b.b),
            c: rows3(&b.c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralOut {
    pub weyl_plus_eigen: Vec<f64>,
    pub weyl_plus_det: f64,
    pub weyl_minus_eigen: Vec<f64>,
    pub weyl_minus_det: f64,
    pub weyl_minus_norm: f64,
    pub laplacian_term: f64,
    pub gradient_term: f64,
    pub algebraic_balance: f64,
    /// Absolute value of the Bochner–Weitzenböck balance.
    pub bochner_residual: f64,
    pub accuracy_warning: bool,
}

impl From<&SpectralReport> for SpectralOut {
    fn from(s: &SpectralReport) -> Self {
        Self {
            weyl_plus_eigen: s.weyl_plus_eigen.to_vec(),
            weyl_plus_det: s.weyl_plus_det,
            weyl_minus_eigen: s.weyl_minus_eigen.to_vec(),
            weyl_minus_det: s.weyl_minus_det,
            weyl_minus_norm: s.weyl_minus_norm,
            laplacian_term: s.laplacian_term.unwrap_or(0.0),
            gradient_term: s.gradient_term.unwrap_or(0.0),
            algebraic_balance: s.algebraic_balance,
            bochner_residual: s.bochner_residual.map_or(0.0, f64::abs),
            accuracy_warning: s.accuracy_warning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResidualsOut {
    pub first_structure: f64,
    pub second_structure: f64,
    pub connection_antisymmetry: f64,
    pub coframe: f64,
    pub antisymmetry: f64,
    pub pair: f64,
    pub bianchi: f64,
    pub reconstruction: f64,
    pub weyl_trace: f64,
    pub blocks: f64,
}

impl ResidualsOut {
    fn new(r: &InvariantResiduals, blocks: &BlockData) -> Self {
        Self {
            first_structure: r.first_structure,
            second_structure: r.second_structure,
            connection_antisymmetry: r.connection_antisymmetry,
            coframe: r.coframe,
            antisymmetry: r.antisymmetry,
            pair: r.pair,
            bianchi: r.bianchi,
            reconstruction: r.reconstruction,
            weyl_trace: r.weyl_trace,
            blocks: blocks.invariant_residual() / blocks.scale(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TwistorSummary {
    pub t: f64,
    pub scalar_formula: f64,
    pub scalar_engine: f64,
    pub fiber_min: f64,
    pub fiber_max: f64,
    pub fiber_spread: f64,
    pub fiber_constant: bool,
    pub oneill_max_component: f64,
    pub oneill_max_norm: f64,
    pub integrable: bool,
    pub ricci_parallel_residual: f64,
    pub einstein_residual: f64,
    pub fiber_second_fundamental_form: f64,
    pub horizontal_residual: f64,
    pub twistor_ricci: Vec<Vec<f64>>,
    pub accuracy_warning: bool,
}

impl From<&TwistorReport> for TwistorSummary {
    fn from(r: &TwistorReport) -> Self {
        Self {
            t: r.t,
            scalar_formula: r.scalar_formula,
            scalar_engine: r.scalar_engine,
            fiber_min: r.fiber_scan.min,
            fiber_max: r.fiber_scan.max,
            fiber_spread: r.fiber_scan.spread,
            fiber_constant: r.fiber_scan.constant,
            oneill_max_component: r.oneill.max_over_samples,
            oneill_max_norm: r.oneill.max_norm_over_fiber,
            integrable: r.oneill.integrable,
            ricci_parallel_residual: r.ricci_parallel_residual,
            einstein_residual: r.einstein_residual,
            fiber_second_fundamental_form: r.ricci.fiber_second_fundamental_form,
            horizontal_residual: r.ricci.horizontal_residual,
            twistor_ricci: rows(&r.ricci.ricci),
            accuracy_warning: r.accuracy_warning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PointReport {
    pub coords: Vec<f64>,
    pub scalar: f64,
    pub einstein_constant: Option<f64>,
    pub classification: ClassificationOut,
    pub blocks: BlocksOut,
    pub spectral: SpectralOut,
    pub residuals: ResidualsOut,
    pub twistor: Option<TwistorSummary>,
}

/// Report of `classify` and `twistor-ricci`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub metric: MetricInfo,
    pub conventions: Conventions,
    pub tolerance: f64,
    /// Flags conjoined over all points, residuals maximized.
    pub classification: ClassificationOut,
    pub points: Vec<PointReport>,
}

/// Options for the twistor part of a report.
#[derive(Debug, Clone, Copy)]
pub struct TwistorOptions {
    pub t: f64,
    pub samples: usize,
}

pub fn point_report(
    m: &MetricField,
    p: &ChartPoint,
    tol: f64,
    twistor: Option<TwistorOptions>,
) -> Result<(PointReport, Classification), CliError> {
    let analysis = analyze_point(m, p, tol)?;
    let curv = &analysis.curvature;
    let blocks = curvature_blocks(curv, m.orientation())?;
    let class = classify(&blocks, tol);
    let spectral = spectral_report(m, p, curv, &blocks)?;
    let twistor = twistor
        .map(|o| twistor_report(m, p, o.t, o.samples, INTEGRABILITY_TOL))
        .transpose()?;
    Ok((
        PointReport {
            coords: p.coords().to_vec(),
            scalar: curv.scalar,
            einstein_constant: curv.einstein_constant,
            classification: (&class).into(),
            blocks: (&blocks).into(),
            spectral: (&spectral).into(),
            residuals: ResidualsOut::new(&analysis.residuals, &blocks),
            twistor: twistor.as_ref().map(Into::into),
        },
        class,
    ))
}

pub fn build_report(
    command: &str,
    m: &MetricField,
    points: &[ChartPoint],
    tol: f64,
    twistor: Option<TwistorOptions>,
) -> Result<Report, CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Input(format!("tolerance {tol} must be positive")));
    }
    let mut reports = Vec::with_capacity(points.len());
    let mut combined: Option<Classification> = None;
    for p in points {
        let (r, c) = point_report(m, p, tol, twistor)?;
        combined = Some(match combined {
            None => c,
            Some(prev) => prev.combine(&c),
        });
        reports.push(r);
    }
    let combined = combined.ok_or_else(|| CliError::Input("no points".into()))?;
    Ok(Report {
        tool_version: TOOL_VERSION.into(),
        command: command.into(),
        metric: MetricInfo::of(m),
        conventions: Conventions::new(m.orientation()),
        tolerance: tol,
        classification: (&combined).into(),
        points: reports,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
    pub scalar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanSummary {
    pub min: f64,
    pub max: f64,
    pub sample_min: f64,
    pub sample_max: f64,
    pub mean: f64,
    pub spread: f64,
    pub fiber_constant: bool,
}

/// Report of `twistor-scan`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanReport {
    pub tool_version: String,
    pub metric: MetricInfo,
    pub conventions: Conventions,
    pub point: Vec<f64>,
    pub t: f64,
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

impl ScanReport {
    pub fn new(m: &MetricField, p: &ChartPoint, scan: &FiberScan) -> Self {
        Self {
            tool_version: TOOL_VERSION.into(),
            metric: MetricInfo::of(m),
            conventions: Conventions::new(m.orientation()),
            point: p.coords().to_vec(),
            t: scan.t,
            rows: scan
                .samples
                .iter()
                .map(|s| ScanRow {
                    nx: s.point.n.x,
                    ny: s.point.n.y,
                    nz: s.point.n.z,
                    scalar: s.scalar,
                })
                .collect(),
            summary: ScanSummary {
                min: scan.min,
                max: scan.max,
                sample_min: scan.sample_min,
                sample_max: scan.sample_max,
                mean: scan.mean,
                spread: scan.spread,
                fiber_constant: scan.constant,
            },
        }
    }
}
