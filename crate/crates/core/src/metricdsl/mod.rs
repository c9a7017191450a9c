//! Scalar expressions, the metric document format and the built-in catalog.

pub mod catalog;
pub mod document;
pub mod expr;

pub use catalog::{builtin, catalog_description, catalog_document, catalog_names, catalog_params};
pub use document::{load_metric_spec, MetricSpec};
pub use expr::{parse_expression, parse_expression_in, BinOp, Env, Expr, ExprValue, Func};
