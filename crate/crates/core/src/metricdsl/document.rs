//! The metric document format.
//!
//! ```text
//! # round 4-sphere of radius r
//! [metric]
//! name = s4
//! dim = 4
//! coords = [x1, x2, x3, x4]
//! orientation = +1
//! g = [
//!   [4*r^4/(r^2 + x1^2 + x2^2 + x3^2 + x4^2)^2, 0, 0, 0],
//!   ...
//! ]
//! points = [[0, 0, 0, 0], [0.3*r, -0.2*r, 0.5*r, 0.1*r]]
//! positive = [r]
//!
//! [params]
//! r = 1
//! ```
//!
//! The full grammar is in `docs/metric-format.md`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::expr::{parse_expression_in, Env, Expr, BUILTIN_CONSTANTS};
use crate::error::{EvalError, SpecError};
use crate::geomcore::{ChartPoint, MetricField};

/// Relative tolerance for accepting textually different off-diagonal entries.
pub const SYMMETRIZE_TOL: f64 = 1e-12;
const SYMMETRIZE_SAMPLES: usize = 10;

/// A parsed but not yet validated metric document.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<String>,
    pub orientation: i8,
    pub params: Vec<(String, f64)>,
    pub components: Vec<Vec<Expr>>,
    pub points: Vec<Vec<Expr>>,
    pub positive: Vec<Expr>,
}

struct Statement {
    line: usize,
    section: String,
    key: String,
    value: String,
}

fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

fn bracket_balance(s: &str) -> i64 {
    s.chars().fold(0, |acc, c| match c {
        '[' | '(' => acc + 1,
        ']' | ')' => acc - 1,
        _ => acc,
    })
}

fn statements(doc: &str) -> Result<Vec<Statement>, SpecError> {
    let mut out = Vec::new();
    let mut section = String::new();
    let mut pending: Option<Statement> = None;
    let mut depth = 0i64;
    for (idx, raw) in doc.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if let Some(st) = pending.as_mut() {
            st.value.push(' ');
            st.value.push_str(line);
            depth += bracket_balance(line);
            if depth <= 0 {
                out.push(pending.take().unwrap());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') && !line.contains('=') {
            section = line[1..line.len() - 1].trim().to_string();
            if section != "metric" && section != "params" {
                return Err(SpecError::Syntax {
                    line: line_no,
                    message: format!("unknown section [{section}]"),
                });
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(SpecError::Syntax {
                line: line_no,
                message: "expected `key = value`".into(),
            });
        };
        if section.is_empty() {
            return Err(SpecError::Syntax {
                line: line_no,
                message: "assignment before any section header".into(),
            });
        }
        let key = key.trim();
        if key.is_empty()
            || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            || key.starts_with(|c: char| c.is_ascii_digit())
        {
            return Err(SpecError::Syntax {
                line: line_no,
                message: format!("invalid key `{key}`"),
            });
        }
        let st = Statement {
            line: line_no,
            section: section.clone(),
            key: key.to_string(),
            value: value.trim().to_string(),
        };
        depth = bracket_balance(&st.value);
        if depth > 0 {
            pending = Some(st);
        } else {
            out.push(st);
        }
    }
    if let Some(st) = pending {
        return Err(SpecError::Syntax {
            line: st.line,
            message: "unterminated bracket".into(),
        });
    }
    Ok(out)
}

/// Split a bracketed, comma-separated list at top level.
fn split_list(text: &str, line: usize) -> Result<Vec<String>, SpecError> {
    let t = text.trim();
    if !(t.starts_with('[') && t.ends_with(']')) {
        return Err(SpecError::Syntax {
            line,
            message: format!("expected a bracketed list, found `{t}`"),
        });
    }
    let inner = &t[1..t.len() - 1];
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut items = Vec::new();
    let mut depth = 0i64;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(inner[start..i].trim().to_string());
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(SpecError::Syntax {
                line,
                message: "unbalanced brackets".into(),
            });
        }
    }
    items.push(inner[start..].trim().to_string());
    if items.iter().any(|s| s.is_empty()) {
        return Err(SpecError::Syntax {
            line,
            message: "empty list element".into(),
        });
    }
    Ok(items)
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    if s.len() >= 2 && s.starts_with('"') && s.ends_with('"') {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !s.starts_with(|c: char| c.is_ascii_digit())
}

struct ConstEnv<'a> {
    params: &'a [(String, f64)],
}

impl Env<f64> for ConstEnv<'_> {
    fn lookup(&self, name: &str) -> Option<f64> {
        BUILTIN_CONSTANTS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .or_else(|| self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v))
    }
    fn constant(&self, v: f64) -> f64 {
        v
    }
}

fn parse_expr(text: &str, names: &[&str]) -> Result<Expr, SpecError> {
    let text = unquote(text);
    parse_expression_in(text, names).map_err(|source| SpecError::Expression {
        text: text.to_string(),
        source,
    })
}

impl MetricSpec {
    pub fn parse(doc: &str) -> Result<Self, SpecError> {
        let stmts = statements(doc)?;
        let mut name = None;
        let mut dim = None;
        let mut coords: Option<Vec<String>> = None;
        let mut orientation = None;
        let mut g_text = None;
        let mut points_text = None;
        let mut positive_text = None;
        let mut params: Vec<(String, f64)> = Vec::new();

        for st in &stmts {
            let invalid = |message: String| SpecError::InvalidValue {
                field: st.key.clone(),
                message,
            };
            match (st.section.as_str(), st.key.as_str()) {
                ("metric", "name") => {
                    let n = unquote(&st.value);
                    if n.is_empty() {
                        return Err(invalid("empty name".into()));
                    }
                    name = Some(n.to_string());
                }
                ("metric", "dim") => {
                    let d: usize = st
                        .value
                        .parse()
                        .map_err(|_| invalid(format!("`{}` is not an integer", st.value)))?;
                    if ![2, 3, 4, 6].contains(&d) {
                        return Err(invalid(format!("dimension {d} not in {{2, 3, 4, 6}}")));
                    }
                    dim = Some(d);
                }
                ("metric", "coords") => {
                    let list = split_list(&st.value, st.line)?;
                    for c in &list {
                        if !is_identifier(c) {
                            return Err(invalid(format!("`{c}` is not an identifier")));
                        }
                    }
                    coords = Some(list);
                }
                ("metric", "orientation") => {
                    orientation = Some(match st.value.as_str() {
                        "+1" | "1" => 1,
                        "-1" => -1,
                        other => return Err(invalid(format!("`{other}` is not +1 or -1"))),
                    });
                }
                ("metric", "g") => g_text = Some((st.value.clone(), st.line)),
                ("metric", "points") => points_text = Some((st.value.clone(), st.line)),
                ("metric", "positive") => positive_text = Some((st.value.clone(), st.line)),
                ("params", key) => {
                    if params.iter().any(|(n, _)| n == key) {
                        return Err(invalid("duplicate parameter".into()));
                    }
                    let known: Vec<&str> = params.iter().map(|(n, _)| n.as_str()).collect();
                    let e = parse_expr(&st.value, &known)?;
                    let v = e.eval(&ConstEnv { params: &params })?;
                    if !v.is_finite() {
                        return Err(EvalError::NonFinite(key.to_string()).into());
                    }
                    params.push((key.to_string(), v));
                }
                (_, key) => {
                    return Err(SpecError::Syntax {
                        line: st.line,
                        message: format!("unknown key `{key}` in [{}]", st.section),
                    })
                }
            }
        }

        let name = name.ok_or(SpecError::MissingField("name"))?;
        let dim = dim.ok_or(SpecError::MissingField("dim"))?;
        let coords = coords.ok_or(SpecError::MissingField("coords"))?;
        let orientation = orientation.ok_or(SpecError::MissingField("orientation"))?;
        let (g_text, g_line) = g_text.ok_or(SpecError::MissingField("g"))?;
        if coords.len() != dim {
            return Err(SpecError::InvalidValue {
                field: "coords".into(),
                message: format!("{} coordinates for dimension {dim}", coords.len()),
            });
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) || params.iter().any(|(p, _)| p == c) {
                return Err(SpecError::InvalidValue {
                    field: "coords".into(),
                    message: format!("`{c}` declared twice"),
                });
            }
        }

        let mut all_names: Vec<&str> = coords.iter().map(String::as_str).collect();
        all_names.extend(params.iter().map(|(n, _)| n.as_str()));
        let param_names: Vec<&str> = params.iter().map(|(n, _)| n.as_str()).collect();

        let rows = split_list(&g_text, g_line)?;
        let mut components = Vec::with_capacity(rows.len());
        for row in &rows {
            let cells = split_list(row, g_line)?;
            if cells.len() != dim || rows.len() != dim {
                return Err(SpecError::Shape {
                    rows: rows.len(),
                    cols: cells.len(),
                    dim,
                });
            }
            components.push(
                cells
                    .iter()
                    .map(|c| parse_expr(c, &all_names))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        if components.len() != dim {
            return Err(SpecError::Shape {
                rows: components.len(),
                cols: dim,
                dim,
            });
        }

        let mut points = Vec::new();
        if let Some((text, line)) = points_text {
            for p in split_list(&text, line)? {
                let cells = split_list(&p, line)?;
                if cells.len() != dim {
                    return Err(SpecError::InvalidValue {
                        field: "points".into(),
                        message: format!("point with {} coordinates", cells.len()),
                    });
                }
                points.push(
                    cells
                        .iter()
                        .map(|c| parse_expr(c, &param_names))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
        }
        let mut positive = Vec::new();
        if let Some((text, line)) = positive_text {
            for c in split_list(&text, line)? {
                positive.push(parse_expr(&c, &all_names)?);
            }
        }

        Ok(MetricSpec {
            name,
            dim,
            coords,
            orientation,
            params,
            components,
            points,
            positive,
        })
    }

    /// Replace parameter values; unknown names are rejected.
    pub fn with_params(mut self, overrides: &[(String, f64)]) -> Result<Self, SpecError> {
        for (k, v) in overrides {
            let slot = self
                .params
                .iter_mut()
                .find(|(n, _)| n == k)
                .ok_or_else(|| SpecError::InvalidValue {
                    field: k.clone(),
                    message: format!("`{}` has no parameter `{k}`", self.name),
                })?;
            slot.1 = *v;
        }
        Ok(self)
    }

    /// Evaluate the suggested points with the current parameters.
    pub fn resolved_points(&self) -> Result<Vec<Vec<f64>>, SpecError> {
        let env = ConstEnv {
            params: &self.params,
        };
        self.points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|e| e.eval(&env).map_err(SpecError::from))
                    .collect()
            })
            .collect()
    }

    /// Check off-diagonal pairs; textually different entries are accepted (and
    /// the upper one copied down) only if they agree numerically.
    pub fn symmetrize(&mut self) -> Result<Vec<String>, SpecError> {
        let mut warnings = Vec::new();
        let base_points = self.resolved_points()?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let samples: Vec<Vec<f64>> = (0..SYMMETRIZE_SAMPLES)
            .map(|k| {
                if base_points.is_empty() {
                    (0..self.dim).map(|_| rng.gen_range(0.1..1.1)).collect()
                } else {
                    base_points[k % base_points.len()]
                        .iter()
                        .map(|x| x + rng.gen_range(-0.05..0.05))
                        .collect()
                }
            })
            .collect();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.components[i][j] == self.components[j][i] {
                    continue;
                }
                let mut agreed = 0;
                for s in &samples {
                    let env = PointEnv {
                        coords: &self.coords,
                        values: s,
                        params: &self.params,
                    };
                    let (Ok(a), Ok(b)) = (
                        self.components[i][j].eval(&env),
                        self.components[j][i].eval(&env),
                    ) else {
                        continue;
                    };
                    if (a - b).abs() > SYMMETRIZE_TOL * (1.0 + a.abs().max(b.abs())) {
                        return Err(SpecError::Asymmetric { i, j });
                    }
                    agreed += 1;
                }
                if agreed == 0 {
                    return Err(SpecError::Asymmetric { i, j });
                }
                warnings.push(format!(
                    "g[{j}][{i}] differs textually from g[{i}][{j}]; using `{}`",
                    self.components[i][j]
                ));
                self.components[j][i] = self.components[i][j].clone();
            }
        }
        Ok(warnings)
    }

    /// Validate and convert into an evaluable metric field.
    pub fn into_field(mut self) -> Result<MetricField, SpecError> {
        let warnings = self.symmetrize()?;
        for w in &warnings {
            log::warn!("{}: {w}", self.name);
        }
        let points = self
            .resolved_points()?
            .into_iter()
            .map(ChartPoint::new)
            .collect::<Vec<_>>();
        for p in &points {
            if !p.is_finite() {
                return Err(SpecError::InvalidValue {
                    field: "points".into(),
                    message: "non-finite coordinate".into(),
                });
            }
        }
        let field = MetricField::from_parts(
            self.name,
            self.coords,
            self.components,
            self.orientation,
            self.params,
            points,
            self.positive,
            warnings,
        );
        for p in field.suggested_points() {
            field.check_domain(p).map_err(|e| SpecError::InvalidValue {
                field: "points".into(),
                message: e.to_string(),
            })?;
        }
        Ok(field)
    }

    /// Render back into the document format. Parsing the output yields an
    /// identical spec.
    pub fn to_document(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[metric]");
        let _ = writeln!(s, "name = \"{}\"", self.name);
        let _ = writeln!(s, "dim = {}", self.dim);
        let _ = writeln!(s, "coords = [{}]", self.coords.join(", "));
        let _ = writeln!(s, "orientation = {:+}", self.orientation);
        let _ = writeln!(s, "g = [");
        for row in &self.components {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(s, "  [{}],", cells.join(", "));
        }
        // drop the trailing comma of the last row
        if s.ends_with("],\n") {
            s.truncate(s.len() - 2);
            s.push('\n');
        }
        let _ = writeln!(s, "]");
        if !self.points.is_empty() {
            let pts: Vec<String> = self
                .points
                .iter()
                .map(|p| {
                    let cells: Vec<String> = p.iter().map(|e| e.to_string()).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            let _ = writeln!(s, "points = [{}]", pts.join(", "));
        }
        if !self.positive.is_empty() {
            let cells: Vec<String> = self.positive.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(s, "positive = [{}]", cells.join(", "));
        }
        if !self.params.is_empty() {
            let _ = writeln!(s, "\n[params]");
            for (k, v) in &self.params {
                let _ = writeln!(s, "{k} = {v:?}");
            }
        }
        s
    }
}

/// Real-valued bindings for coordinates plus parameters.
pub(crate) struct PointEnv<'a> {
    pub coords: &'a [String],
    pub values: &'a [f64],
    pub params: &'a [(String, f64)],
}

impl Env<f64> for PointEnv<'_> {
    fn lookup(&self, name: &str) -> Option<f64> {
        if let Some(i) = self.coords.iter().position(|c| c == name) {
            return Some(self.values[i]);
        }
        ConstEnv {
            params: self.params,
        }
        .lookup(name)
    }
    fn constant(&self, v: f64) -> f64 {
        v
    }
}

/// Parse and validate a metric document.
pub fn load_metric_spec(doc: &str) -> Result<MetricField, SpecError> {
    MetricSpec::parse(doc)?.into_field()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE2: &str = "
# unit 2-sphere
[metric]
name = s2
dim = 2
coords = [theta, phi]
orientation = +1
g = [[r^2, 0],
     [0, r^2*sin(theta)^2]]   # rows may span lines
points = [[pi/3, 0.2]]
positive = [sin(theta)]

[params]
r = 1
";

    #[test]
    fn loads_small_document() {
        let spec = MetricSpec::parse(SPHERE2).unwrap();
        assert_eq!(spec.dim, 2);
        assert_eq!(spec.coords, vec!["theta", "phi"]);
        assert_eq!(spec.params, vec![("r".to_string(), 1.0)]);
        let field = spec.into_field().unwrap();
        assert_eq!(field.dim(), 2);
        assert_eq!(field.suggested_points().len(), 1);
    }

    #[test]
    fn shape_error() {
        let doc = "[metric]\nname=x\ndim=4\ncoords=[a,b,c,d]\norientation=+1\n\
                   g=[[1,0,0,0],[0,1,0,0],[0,0,1,0]]\n";
        assert!(matches!(
            MetricSpec::parse(doc),
            Err(SpecError::Shape {
                rows: 3,
                cols: 4,
                dim: 4
            })
        ));
    }

    #[test]
    fn asymmetric_components_rejected() {
        let doc =
            "[metric]\nname=x\ndim=2\ncoords=[a,b]\norientation=+1\ng=[[1,\"1\"],[\"0\",1]]\n";
        assert!(matches!(
            load_metric_spec(doc),
            Err(SpecError::Asymmetric { i: 0, j: 1 })
        ));
    }

    #[test]
    fn equivalent_components_symmetrized_with_warning() {
        let doc = "[metric]\nname=x\ndim=2\ncoords=[a,b]\norientation=+1\n\
                   g=[[2, a*b],[b*a, 2]]\npoints=[[0.3, 0.4]]\n";
        let field = load_metric_spec(doc).unwrap();
        assert_eq!(field.warnings().len(), 1);
    }

    #[test]
    fn missing_and_unknown_fields() {
        assert!(matches!(
            MetricSpec::parse("[metric]\nname=x\n"),
            Err(SpecError::MissingField("dim"))
        ));
        assert!(matches!(
            MetricSpec::parse("[metric]\nfoo=1\n"),
            Err(SpecError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            MetricSpec::parse("[other]\n"),
            Err(SpecError::Syntax { line: 1, .. })
        ));
        let bad_ident = "[metric]\nname=x\ndim=2\ncoords=[a,b]\norientation=+1\ng=[[1,0],[0,c]]\n";
        assert!(matches!(
            MetricSpec::parse(bad_ident),
            Err(SpecError::Expression { .. })
        ));
    }

    #[test]
    fn round_trip_through_document() {
        let spec = MetricSpec::parse(SPHERE2).unwrap();
        let again = MetricSpec::parse(&spec.to_document()).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn point_outside_domain_rejected() {
        let doc = SPHERE2.replace("points = [[pi/3, 0.2]]", "points = [[0, 0.2]]");
        assert!(matches!(
            load_metric_spec(&doc),
            Err(SpecError::InvalidValue { .. })
        ));
    }
}
