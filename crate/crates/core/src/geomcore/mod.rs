//! Dimension-generic curvature engine: metric jets, orthonormal coframes,
//! connection and curvature forms, and the classical curvature tensors.

pub mod christoffel;
pub mod covariant;
pub mod curvature;
pub mod frame;
pub mod metric;
pub mod tensor;

pub use covariant::{
    covariant_derivative_tensor, covariant_ricci, covariant_riemann, laplacian,
    CovariantDerivative2, CovariantDerivative4, FdEstimate, DEFAULT_STEP, LAPLACIAN_STEP,
};
pub use curvature::{
    analyze_point, curvature_at, kulkarni_nomizu, reconstruction_residual, ricci_scalar_weyl,
    riemann_components, symmetry_residuals, weyl_trace_residual, CurvatureData, InvariantResiduals,
    PointAnalysis, DEFAULT_TOL,
};
pub use frame::{
    connection_forms, curvature_forms, first_structure_residual, orthonormal_coframe, CoframeData,
    ConnectionForms, CurvatureForms,
};
pub use metric::{metric_jets, ChartPoint, JetMatrix, MetricField, MetricSource};
pub use tensor::Tensor4;
