use nalgebra::DMatrix;

use crate::error::GeomError;

use super::christoffel::riemann_from_christoffel;
use super::frame::{
    connection_antisymmetry_residual, connection_forms, curvature_forms, first_structure_residual,
    orthonormal_coframe, CoframeData, ConnectionForms, CurvatureForms,
};
use super::metric::{metric_jets, ChartPoint, MetricSource};
use super::tensor::Tensor4;

/// Default relative tolerance for classification predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Symmetry residual above which the curvature is considered corrupted.
const CONSISTENCY_BOUND: f64 = 1e-7;

/// Curvature of a metric at one point, in an orthonormal frame.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    pub dim: usize,
    pub riemann: Tensor4,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
    pub traceless_ricci: DMatrix<f64>,
    pub weyl: Tensor4,
    /// `λ` with `Ric = λ g`, present when the traceless Ricci part vanishes
    /// within tolerance.
    pub einstein_constant: Option<f64>,
    pub cov_riemann_norm: Option<f64>,
    pub cov_weyl_minus_norm: Option<f64>,
}

impl CurvatureData {
    /// Scale used for relative tolerances.
    pub fn scale(&self) -> f64 {
        1.0 + self.riemann.max_abs()
    }

    pub fn traceless_ricci_max(&self) -> f64 {
        self.traceless_ricci.abs().max()
    }

    /// Curvature of the same metric in the frame `ẽ_i = Σ_p e_p a_{pi}`.
    pub fn rotated(&self, a: &DMatrix<f64>) -> CurvatureData {
        let conj = |m: &DMatrix<f64>| a.transpose() * m * a;
        CurvatureData {
            dim: self.dim,
            riemann: self.riemann.transform(a),
            ricci: conj(&self.ricci),
            scalar: self.scalar,
            traceless_ricci: conj(&self.traceless_ricci),
            weyl: self.weyl.transform(a),
            einstein_constant: self.einstein_constant,
            cov_riemann_norm: self.cov_riemann_norm,
            cov_weyl_minus_norm: self.cov_weyl_minus_norm,
        }
    }
}

/// Read `R_{ijkl}` off the curvature forms and check its symmetries.
pub fn riemann_components(forms: &CurvatureForms) -> Result<CurvatureData, GeomError> {
    let r = forms.components.clone();
    let n = r.dim();
    let sym = symmetry_residuals(&r);
    let worst = sym.antisymmetry.max(sym.pair);
    if worst > CONSISTENCY_BOUND * (1.0 + r.max_abs()) {
        return Err(GeomError::Inconsistent { residual: worst });
    }
    Ok(CurvatureData {
        dim: n,
        riemann: r,
        ricci: DMatrix::zeros(n, n),
        scalar: 0.0,
        traceless_ricci: DMatrix::zeros(n, n),
        weyl: Tensor4::zeros(n),
        einstein_constant: None,
        cov_riemann_norm: None,
        cov_weyl_minus_norm: None,
    })
}

/// `(h ⊘ k)_{ijkl} = h_ik k_jl + h_jl k_ik - h_il k_jk - h_jk k_il`.
pub fn kulkarni_nomizu(h: &DMatrix<f64>, k: &DMatrix<f64>) -> Result<Tensor4, GeomError> {
    let n = h.nrows();
    if h.ncols() != n || k.nrows() != n || k.ncols() != n {
        return Err(GeomError::InvalidArgument(
            "inputs must be square of equal size".into(),
        ));
    }
    for m in [h, k] {
        for i in 0..n {
            for j in 0..i {
                let residual = (m[(i, j)] - m[(j, i)]).abs();
                if residual > 1e-12 * (1.0 + m[(i, j)].abs()) {
                    return Err(GeomError::NonSymmetric { i, j, residual });
                }
            }
        }
    }
    Ok(Tensor4::from_fn(n, |i, j, a, b| {
        h[(i, a)] * k[(j, b)] + h[(j, b)] * k[(i, a)]
            - h[(i, b)] * k[(j, a)]
            - h[(j, a)] * k[(i, b)]
    }))
}

/// Fill in Ricci, scalar, traceless Ricci, Weyl and the Einstein constant.
pub fn ricci_scalar_weyl(curv: &CurvatureData, tol: f64) -> Result<CurvatureData, GeomError> {
    let n = curv.dim;
    if n < 3 {
        return Err(GeomError::UnsupportedDimension(n));
    }
    let r = &curv.riemann;
    let ricci = DMatrix::from_fn(n, n, |i, j| (0..n).map(|k| r.get(k, i, k, j)).sum());
    let ricci = (&ricci + ricci.transpose()) * 0.5;
    let scalar = ricci.trace();
    let g = DMatrix::<f64>::identity(n, n);
    let traceless = &ricci - &g * (scalar / n as f64);
    let nf = n as f64;
    let eg = kulkarni_nomizu(&traceless, &g)?;
    let gg = kulkarni_nomizu(&g, &g)?;
    let weyl = Tensor4::from_fn(n, |i, j, k, l| {
        r.get(i, j, k, l)
            - eg.get(i, j, k, l) / (nf - 2.0)
            - scalar / (2.0 * nf * (nf - 1.0)) * gg.get(i, j, k, l)
    });
    let einstein_constant =
        (traceless.abs().max() <= tol * (1.0 + scalar.abs())).then_some(scalar / nf);
    Ok(CurvatureData {
        dim: n,
        riemann: r.clone(),
        ricci,
        scalar,
        traceless_ricci: traceless,
        weyl,
        einstein_constant,
        cov_riemann_norm: curv.cov_riemann_norm,
        cov_weyl_minus_norm: curv.cov_weyl_minus_norm,
    })
}

/// Algebraic symmetry residuals of a curvature tensor.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SymmetryResiduals {
    pub antisymmetry: f64,
    pub pair: f64,
    pub bianchi: f64,
}

pub fn symmetry_residuals(r: &Tensor4) -> SymmetryResiduals {
    let n = r.dim();
    let mut out = SymmetryResiduals::default();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = r.get(i, j, k, l);
                    out.antisymmetry = out
                        .antisymmetry
                        .max((v + r.get(j, i, k, l)).abs())
                        .max((v + r.get(i, j, l, k)).abs());
                    out.pair = out.pair.max((v - r.get(k, l, i, j)).abs());
                    out.bianchi = out
                        .bianchi
                        .max((v + r.get(i, k, l, j) + r.get(i, l, j, k)).abs());
                }
            }
        }
    }
    out
}

/// Residuals of every pointwise identity the engine relies on, each divided
/// by `1 + max |R|`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InvariantResiduals {
    pub first_structure: f64,
    pub second_structure: f64,
    pub connection_antisymmetry: f64,
    pub coframe: f64,
    pub antisymmetry: f64,
    pub pair: f64,
    pub bianchi: f64,
    pub reconstruction: f64,
    pub weyl_trace: f64,
}

impl InvariantResiduals {
    pub fn max(&self) -> f64 {
        [
            self.first_structure,
            self.second_structure,
            self.connection_antisymmetry,
            self.coframe,
            self.antisymmetry,
            self.pair,
            self.bianchi,
            self.reconstruction,
            self.weyl_trace,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Everything computed at a point by the frame pipeline.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub coframe: CoframeData,
    pub connection: ConnectionForms,
    pub curvature: CurvatureData,
    pub residuals: InvariantResiduals,
}

/// Curvature of `m` at `p`, without the cross-checks.
pub fn curvature_at(m: &dyn MetricSource, p: &ChartPoint) -> Result<CurvatureData, GeomError> {
    let g = metric_jets(m, p, 2)?;
    let frame = orthonormal_coframe(&g)?;
    let conn = connection_forms(&frame)?;
    let forms = curvature_forms(&frame, &conn)?;
    let curv = riemann_components(&forms)?;
    if m.dim() >= 3 {
        ricci_scalar_weyl(&curv, DEFAULT_TOL)
    } else {
        Ok(curv)
    }
}

/// Full pipeline at `p` including structure-equation and identity residuals.
pub fn analyze_point(
    m: &dyn MetricSource,
    p: &ChartPoint,
    tol: f64,
) -> Result<PointAnalysis, GeomError> {
    let g = metric_jets(m, p, 2)?;
    let coframe = orthonormal_coframe(&g)?;
    let connection = connection_forms(&coframe)?;
    let forms = curvature_forms(&coframe, &connection)?;
    let mut curvature = riemann_components(&forms)?;
    if m.dim() >= 3 {
        curvature = ricci_scalar_weyl(&curvature, tol)?;
    }
    let scale = curvature.scale();
    let christ = riemann_from_christoffel(&g, &coframe)?;
    let sym = symmetry_residuals(&curvature.riemann);
    let mut residuals = InvariantResiduals {
        first_structure: first_structure_residual(&coframe, &connection),
        second_structure: curvature.riemann.max_abs_diff(&christ) / scale,
        connection_antisymmetry: connection_antisymmetry_residual(&connection),
        coframe: coframe.metric_residual(&g),
        antisymmetry: sym.antisymmetry / scale,
        pair: sym.pair / scale,
        bianchi: sym.bianchi / scale,
        ..Default::default()
    };
    if m.dim() >= 3 {
        residuals.reconstruction = reconstruction_residual(&curvature)? / scale;
        residuals.weyl_trace = weyl_trace_residual(&curvature.weyl) / scale;
    }
    Ok(PointAnalysis {
        coframe,
        connection,
        curvature,
        residuals,
    })
}

/// `max |Riem - (W + E⊘g/(n-2) + S g⊘g/(2n(n-1)))|`; the sign of the last
/// term follows from `R_{1212} = +1` on the unit sphere.
pub fn reconstruction_residual(curv: &CurvatureData) -> Result<f64, GeomError> {
    let n = curv.dim;
    let nf = n as f64;
    let g = DMatrix::<f64>::identity(n, n);
    let eg = kulkarni_nomizu(&curv.traceless_ricci, &g)?;
    let gg = kulkarni_nomizu(&g, &g)?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let rebuilt = curv.weyl.get(i, j, k, l)
                        + eg.get(i, j, k, l) / (nf - 2.0)
                        + curv.scalar / (2.0 * nf * (nf - 1.0)) * gg.get(i, j, k, l);
                    worst = worst.max((curv.riemann.get(i, j, k, l) - rebuilt).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Largest single contraction of the Weyl tensor over any index pair.
pub fn weyl_trace_residual(w: &Tensor4) -> f64 {
    let n = w.dim();
    let mut worst: f64 = 0.0;
    // contractions (1,3) and (1,4); the others follow from the symmetries
    // but are checked anyway since the tensor is numerical
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for &(s, t) in &pairs {
        for a in 0..n {
            for b in 0..n {
                let mut sum = 0.0;
                for m in 0..n {
                    let mut idx = [0usize; 4];
                    idx[s] = m;
                    idx[t] = m;
                    let free: Vec<usize> = (0..4).filter(|x| *x != s && *x != t).collect();
                    idx[free[0]] = a;
                    idx[free[1]] = b;
                    sum += w.get(idx[0], idx[1], idx[2], idx[3]);
                }
                worst = worst.max(sum.abs());
            }
        }
    }
    worst
}
