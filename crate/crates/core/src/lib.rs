//! Chart-local curvature of Riemannian four-manifolds and their twistor spaces.
//!
//! Metrics are given by component expressions ([`metricdsl`]), differentiated
//! exactly with truncated Taylor jets ([`jet`]) and run through Cartan's
//! structure equations ([`geomcore`]). Dimension four gets the self-dual /
//! anti-self-dual block decomposition ([`fourblocks`]), and [`twistor`]
//! computes the curvature of the twistor metrics `g_t`, both in closed form
//! and by running the engine on an explicit six-dimensional chart.

pub mod error;
pub mod fourblocks;
pub mod geomcore;
pub mod jet;
pub mod metricdsl;
pub mod twistor;

pub use error::{EvalError, GeomError, JetError, ParseError, SpecError};
pub use geomcore::{ChartPoint, CurvatureData, MetricField, MetricSource, Tensor4};
pub use jet::{Jet, JetSpace};
pub use metricdsl::{builtin, load_metric_spec, parse_expression, Expr, MetricSpec};
pub use twistor::{TwistorChart, TwistorReport};

pub use nalgebra;
