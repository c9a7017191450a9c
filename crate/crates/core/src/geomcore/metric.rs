use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{EvalError, GeomError};
use crate::jet::{Jet, JetSpace};
use crate::metricdsl::document::PointEnv;
use crate::metricdsl::expr::{Env, Expr, BUILTIN_CONSTANTS};
use crate::metricdsl::MetricSpec;

/// Square matrix of jets, indexed `[row][col]`.
pub type JetMatrix = Vec<Vec<Jet>>;

/// A point of a coordinate chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    /// The point moved by `step` along coordinate `axis`.
    pub fn shifted(&self, axis: usize, step: f64) -> Self {
        let mut coords = self.coords.clone();
        coords[axis] += step;
        Self { coords }
    }
}

impl From<Vec<f64>> for ChartPoint {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

/// Anything that can hand out metric component jets at a point.
pub trait MetricSource: Sync {
    fn dim(&self) -> usize;

    /// +1 if the coordinate order is positively oriented, -1 otherwise.
    fn orientation(&self) -> i8;

    /// Components `g_ab` with all partials up to `order` at `p`.
    fn metric_jets(&self, p: &ChartPoint, order: usize) -> Result<JetMatrix, GeomError>;
}

/// A Riemannian metric on a chart, given by component expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    name: String,
    coords: Vec<String>,
    components: Vec<Vec<Expr>>,
    orientation: i8,
    params: Vec<(String, f64)>,
    points: Vec<ChartPoint>,
    positive: Vec<Expr>,
    warnings: Vec<String>,
}

struct JetEnv<'a> {
    space: &'a Arc<JetSpace>,
    coords: &'a [String],
    point: &'a ChartPoint,
    params: &'a [(String, f64)],
}

impl Env<Jet> for JetEnv<'_> {
    fn lookup(&self, name: &str) -> Option<Jet> {
        if let Some(i) = self.coords.iter().position(|c| c == name) {
            return Some(self.space.variable(i, self.point.coords[i]));
        }
        self.params
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .or_else(|| {
                BUILTIN_CONSTANTS
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, v)| *v)
            })
            .map(|v| self.space.constant(v))
    }
    fn constant(&self, v: f64) -> Jet {
        self.space.constant(v)
    }
}

impl MetricField {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        name: String,
        coords: Vec<String>,
        components: Vec<Vec<Expr>>,
        orientation: i8,
        params: Vec<(String, f64)>,
        points: Vec<ChartPoint>,
        positive: Vec<Expr>,
        warnings: Vec<String>,
    ) -> Self {
        Self {
            name,
            coords,
            components,
            orientation,
            params,
            points,
            positive,
            warnings,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.coords
    }

    pub fn components(&self) -> &[Vec<Expr>] {
        &self.components
    }

    pub fn parameters(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn suggested_points(&self) -> &[ChartPoint] {
        &self.points
    }

    /// Expressions that must be strictly positive wherever the metric is used.
    pub fn domain_constraints(&self) -> &[Expr] {
        &self.positive
    }

    /// Messages produced while loading (e.g. symmetrized entries).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The same metric with the opposite (or an explicit) orientation.
    pub fn with_orientation(mut self, orientation: i8) -> Self {
        self.orientation = if orientation < 0 { -1 } else { 1 };
        self
    }

    /// Back to the document representation.
    pub fn to_spec(&self) -> MetricSpec {
        MetricSpec {
            name: self.name.clone(),
            dim: self.coords.len(),
            coords: self.coords.clone(),
            orientation: self.orientation,
            params: self.params.clone(),
            components: self.components.clone(),
            points: self
                .points
                .iter()
                .map(|p| p.coords.iter().map(|&c| Expr::Num(c)).collect())
                .collect(),
            positive: self.positive.clone(),
        }
    }

    fn check_dim(&self, p: &ChartPoint) -> Result<(), GeomError> {
        if p.dim() != self.coords.len() {
            return Err(GeomError::DimensionMismatch {
                expected: self.coords.len(),
                found: p.dim(),
            });
        }
        if !p.is_finite() {
            return Err(GeomError::OutsideDomain("non-finite coordinate".into()));
        }
        Ok(())
    }

    /// Check the declared domain constraints at `p`.
    pub fn check_domain(&self, p: &ChartPoint) -> Result<(), GeomError> {
        self.check_dim(p)?;
        let env = PointEnv {
            coords: &self.coords,
            values: &p.coords,
            params: &self.params,
        };
        for c in &self.positive {
            let v = c.eval(&env)?;
            if v.is_nan() || v <= 0.0 {
                return Err(GeomError::OutsideDomain(format!(
                    "`{c}` = {v} is not positive"
                )));
            }
        }
        Ok(())
    }

    /// Plain evaluation of the component matrix.
    pub fn evaluate(&self, p: &ChartPoint) -> Result<DMatrix<f64>, GeomError> {
        let jets = self.metric_jets(p, 0)?;
        let n = self.dim();
        Ok(DMatrix::from_fn(n, n, |i, j| jets[i][j].value()))
    }
}

impl MetricSource for MetricField {
    fn dim(&self) -> usize {
        self.coords.len()
    }

    fn orientation(&self) -> i8 {
        self.orientation
    }

    fn metric_jets(&self, p: &ChartPoint, order: usize) -> Result<JetMatrix, GeomError> {
        self.check_domain(p)?;
        let n = self.dim();
        let space = JetSpace::cached(n, order);
        let env = JetEnv {
            space: &space,
            coords: &self.coords,
            point: p,
            params: &self.params,
        };
        let mut out: JetMatrix = vec![Vec::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                let v = if j < i && self.components[i][j] == self.components[j][i] {
                    out[j][i].clone()
                } else {
                    self.components[i][j].eval(&env)?
                };
                if !v.is_finite() {
                    return Err(EvalError::NonFinite(format!("g[{i}][{j}]")).into());
                }
                out[i].push(v);
            }
        }
        for i in 0..n {
            for j in 0..i {
                let residual = out[i][j]
                    .coeffs()
                    .iter()
                    .zip(out[j][i].coeffs())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                let scale = 1.0 + out[i][j].value().abs();
                if residual > 1e-12 * scale {
                    return Err(GeomError::NonSymmetric { i, j, residual });
                }
            }
        }
        Ok(out)
    }
}

/// Jet-valued metric components of `m` at `p`.
pub fn metric_jets(
    m: &dyn MetricSource,
    p: &ChartPoint,
    order: usize,
) -> Result<JetMatrix, GeomError> {
    if p.dim() != m.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: m.dim(),
            found: p.dim(),
        });
    }
    if order > 3 {
        return Err(GeomError::InvalidArgument(format!(
            "jet order {order} above the supported maximum 3"
        )));
    }
    m.metric_jets(p, order)
}
