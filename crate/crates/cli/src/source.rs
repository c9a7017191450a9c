//! Resolving the metric and the points a command runs on.

use std::path::Path;

use fourfold::metricdsl::{catalog_document, MetricSpec};
use fourfold::{ChartPoint, MetricField};

use crate::error::CliError;

/// `name=value` as given to `--param`.
pub fn parse_param(s: &str) -> Result<(String, f64), CliError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Input(format!("parameter `{s}` is not of the form name=value")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("parameter `{s}`: `{value}` is not a number")))?;
    if !value.is_finite() {
        return Err(CliError::Input(format!("parameter `{s}` is not finite")));
    }
    Ok((name.trim().to_string(), value))
}

/// Comma-separated coordinates.
pub fn parse_point(s: &str, dim: usize) -> Result<ChartPoint, CliError> {
    let coords = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    CliError::Input(format!("point `{s}`: `{c}` is not a finite number"))
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != dim {
        return Err(CliError::Input(format!(
            "point `{s}` has {} coordinates, the metric has dimension {dim}",
            coords.len()
        )));
    }
    Ok(ChartPoint::new(coords))
}

/// Load a built-in metric by name or a document from `spec`, apply
/// parameter overrides and an optional orientation.
pub fn load_metric(
    name: Option<&str>,
    spec: Option<&Path>,
    params: &[String],
    orientation: Option<i8>,
) -> Result<MetricField, CliError> {
    let params = params
        .iter()
        .map(|p| parse_param(p))
        .collect::<Result<Vec<_>, _>>()?;
    let field = match (name, spec) {
        (Some(_), Some(_)) => {
            return Err(CliError::Input(
                "give either a metric name or --spec, not both".into(),
            ))
        }
        (None, None) => return Err(CliError::Input("no metric given (name or --spec)".into())),
        (Some(name), None) => {
            if catalog_document(name).is_none() {
                return Err(fourfold::SpecError::UnknownMetric(name.into()).into());
            }
            fourfold::builtin(name, &params)?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            MetricSpec::parse(&text)?
                .with_params(&params)?
                .into_field()?
        }
    };
    match orientation {
        None => Ok(field),
        Some(1) => Ok(field.with_orientation(1)),
        Some(-1) => Ok(field.with_orientation(-1)),
        Some(o) => Err(CliError::Input(format!(
            "orientation must be +1 or -1, got {o}"
        ))),
    }
}

/// The points given with `--point`, or the metric's suggested points.
pub fn resolve_points(
    m: &MetricField,
    given: &[String],
    all_suggested: bool,
) -> Result<Vec<ChartPoint>, CliError> {
    if !given.is_empty() {
        return given.iter().map(|s| parse_point(s, m.dim())).collect();
    }
    let suggested = m.suggested_points();
    if suggested.is_empty() {
        return Err(CliError::Input(format!(
            "metric `{}` has no suggested points; pass --point",
            m.name()
        )));
    }
    Ok(if all_suggested {
        suggested.to_vec()
    } else {
        suggested[..1].to_vec()
    })
}
