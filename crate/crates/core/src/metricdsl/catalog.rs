//! Built-in metrics with known curvature.

use crate::error::SpecError;
use crate::geomcore::MetricField;

use super::document::MetricSpec;
use super::expr::Expr;

const FLAT4: &str = "
[metric]
name = flat4
dim = 4
coords = [x1, x2, x3, x4]
orientation = +1
g = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
points = [[0, 0, 0, 0], [0.5, -0.3, 1.2, 0.7], [-1.1, 0.4, 0.2, -0.8],
          [2.0, 1.5, -0.6, 0.3], [0.1, -2.2, 0.9, 1.4]]
";

const S4: &str = "
# round sphere of radius r, stereographic chart
[metric]
name = s4
dim = 4
coords = [x1, x2, x3, x4]
orientation = +1
g = [
  [4*r^4/(r^2 + x1^2 + x2^2 + x3^2 + x4^2)^2, 0, 0, 0],
  [0, 4*r^4/(r^2 + x1^2 + x2^2 + x3^2 + x4^2)^2, 0, 0],
  [0, 0, 4*r^4/(r^2 + x1^2 + x2^2 + x3^2 + x4^2)^2, 0],
  [0, 0, 0, 4*r^4/(r^2 + x1^2 + x2^2 + x3^2 + x4^2)^2]
]
points = [[0, 0, 0, 0], [0.3*r, -0.2*r, 0.5*r, 0.1*r], [r, 0.5*r, -0.4*r, 0.2*r],
          [-0.7*r, 0.2*r, 0.3*r, -0.6*r], [0.1*r, 0.9*r, -0.3*r, 0.4*r]]
positive = [r]

[params]
r = 1
";

const CP2: &str = "
# Fubini-Study, affine chart z1 = x1 + i x2, z2 = x3 + i x4,
# holomorphic sectional curvature 4; complex orientation
[metric]
name = cp2
dim = 4
coords = [x1, x2, x3, x4]
orientation = +1
g = [
  [(1 + x3^2 + x4^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2, 0,
   -(x1*x3 + x2*x4)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2,
   -(x1*x4 - x2*x3)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2],
  [0, (1 + x3^2 + x4^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2,
   -(x2*x3 - x1*x4)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2,
   -(x2*x4 + x1*x3)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2],
  [-(x1*x3 + x2*x4)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2,
   -(x2*x3 - x1*x4)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2,
   (1 + x1^2 + x2^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2, 0],
  [-(x1*x4 - x2*x3)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2,
   -(x2*x4 + x1*x3)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2,
   0, (1 + x1^2 + x2^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2]
]
points = [[0, 0, 0, 0], [0.3, -0.2, 0.5, 0.1], [1.0, 0.5, -0.4, 0.2],
          [-0.7, 0.2, 0.3, -0.6], [0.1, 0.9, -0.3, 0.4]]
";

const S2XS2: &str = "
# product of round 2-spheres of radii r1, r2
[metric]
name = s2xs2
dim = 4
coords = [th1, ph1, th2, ph2]
orientation = +1
g = [[r1^2, 0, 0, 0], [0, r1^2*sin(th1)^2, 0, 0],
     [0, 0, r2^2, 0], [0, 0, 0, r2^2*sin(th2)^2]]
points = [[1.2, 0.3, 1.9, -0.4], [0.7, 1.0, 1.1, 0.5], [2.1, -0.8, 0.6, 2.0],
          [1.5707963267948966, 0, 1.5707963267948966, 0], [0.4, 2.5, 2.6, 1.1]]
positive = [r1, r2, sin(th1), sin(th2)]

[params]
r1 = 1
r2 = 1
";

const H4: &str = "
# hyperbolic space, upper half-space model
[metric]
name = h4
dim = 4
coords = [x1, x2, x3, x4]
orientation = +1
g = [[1/x4^2, 0, 0, 0], [0, 1/x4^2, 0, 0], [0, 0, 1/x4^2, 0], [0, 0, 0, 1/x4^2]]
points = [[0, 0, 0, 1], [0.5, -0.3, 1.2, 0.7], [-1.1, 0.4, 0.2, 2.5],
          [2.0, 1.5, -0.6, 0.3], [0.1, -2.2, 0.9, 1.4]]
positive = [x4]
";

const SCHWARZSCHILD: &str = "
# Riemannian Schwarzschild of mass m, exterior region r > 2m
[metric]
name = schwarzschild
dim = 4
coords = [r, th, ph, tau]
orientation = +1
g = [[1/(1 - 2*m/r), 0, 0, 0], [0, r^2, 0, 0],
     [0, 0, r^2*sin(th)^2, 0], [0, 0, 0, 1 - 2*m/r]]
points = [[3*m, 1.1, 0.3, 0], [4*m, 0.7, 1.0, 0.5], [2.5*m, 1.9, -0.4, 1.0],
          [6*m, 1.3, 2.0, -0.7], [10*m, 0.9, 0.1, 0.2]]
positive = [m, r - 2*m, sin(th)]

[params]
m = 1
";

const EGUCHI_HANSON: &str = "
# Eguchi-Hanson with f = 1 - a^4/r^4, Euler angles (th, ph, psi), r > a
[metric]
name = eguchi_hanson
dim = 4
coords = [r, th, ph, psi]
orientation = +1
g = [
  [1/(1 - a^4/r^4), 0, 0, 0],
  [0, r^2/4, 0, 0],
  [0, 0, r^2/4*(sin(th)^2 + (1 - a^4/r^4)*cos(th)^2), r^2/4*(1 - a^4/r^4)*cos(th)],
  [0, 0, r^2/4*(1 - a^4/r^4)*cos(th), r^2/4*(1 - a^4/r^4)]
]
points = [[1.5*a, 1.1, 0.3, 0.2], [2*a, 0.7, 1.0, -0.5], [3*a, 1.9, -0.4, 1.0],
          [1.2*a, 1.3, 2.0, 0.7], [5*a, 0.6, 0.1, -1.2]]
positive = [a, r - a, sin(th)]

[params]
a = 1
";

const ENTRIES: [(&str, &str, &str); 7] = [
    ("flat4", FLAT4, "flat Euclidean 4-space"),
    ("s4", S4, "round 4-sphere of radius r (stereographic chart)"),
    (
        "cp2",
        CP2,
        "Fubini-Study metric on CP^2, holomorphic sectional curvature 4",
    ),
    ("s2xs2", S2XS2, "product of round 2-spheres of radii r1, r2"),
    ("h4", H4, "hyperbolic 4-space (upper half-space)"),
    (
        "schwarzschild",
        SCHWARZSCHILD,
        "Riemannian Schwarzschild of mass m",
    ),
    (
        "eguchi_hanson",
        EGUCHI_HANSON,
        "Eguchi-Hanson metric with parameter a",
    ),
];

/// Names of the built-in metrics, in a fixed order.
pub fn catalog_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

/// One-line description of a built-in metric.
pub fn catalog_description(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|e| e.0 == name).map(|e| e.2)
}

/// The document source of a built-in metric.
pub fn catalog_document(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|e| e.0 == name).map(|e| e.1)
}

/// Parameter names of a built-in metric with their default values.
pub fn catalog_params(name: &str) -> Result<Vec<(String, f64)>, SpecError> {
    let doc = catalog_document(name).ok_or_else(|| SpecError::UnknownMetric(name.into()))?;
    Ok(MetricSpec::parse(doc)?.params)
}

/// Load a built-in metric, overriding any of its parameters.
pub fn builtin(name: &str, params: &[(String, f64)]) -> Result<MetricField, SpecError> {
    let doc = catalog_document(name).ok_or_else(|| SpecError::UnknownMetric(name.into()))?;
    let spec = MetricSpec::parse(doc)?.with_params(params)?;
    // constraints that are a bare parameter name are parameter ranges
    for c in &spec.positive {
        if let Expr::Ident(p) = c {
            if let Some((_, v)) = spec.params.iter().find(|(n, _)| n == p) {
                if !(*v > 0.0) {
                    return Err(SpecError::ParameterOutOfRange {
                        name: p.clone(),
                        value: *v,
                        message: "must be positive".into(),
                    });
                }
            }
        }
    }
    spec.into_field()
}
