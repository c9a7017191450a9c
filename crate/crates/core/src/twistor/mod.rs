//! Twistor-space analytics over a four-manifold: q-tensors, the twistor
//! scalar curvature and its fiber scans, the O'Neill tensor and an explicit
//! six-dimensional chart of the twistor space.

pub mod chart;
pub mod fiber;
pub mod identities;
pub mod oneill;
pub mod qtensor;
pub mod report;
pub mod ricci;

pub use chart::{build_twistor_chart, TwistorChart, TwistorCoframe, VERTICAL_SCALE};
pub use fiber::{
    fiber_scan, fibonacci_sphere, FiberPoint, FiberSample, FiberScan, DEFAULT_SAMPLES,
    FIBER_CONSTANT_TOL, MIN_SAMPLES,
};
pub use identities::{verify_identities, IdentityResiduals};
pub use oneill::{oneill_components, oneill_tensor, OneillReport, OneillTensor, INTEGRABILITY_TOL};
pub use qtensor::{
    fiber_quadratic_form, q_tensors, twistor_blocks, twistor_frame_curvature, twistor_reflection,
    twistor_scalar, QTensors,
};
pub use report::{twistor_report, TwistorReport, RICCI_FIBER_POINTS};
pub use ricci::{twistor_ricci_analysis, TwistorRicci};
