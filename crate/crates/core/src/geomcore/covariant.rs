//! Covariant derivatives of curvature by finite differences of frame
//! components plus connection corrections.

use nalgebra::DMatrix;

use crate::error::GeomError;

use super::christoffel::{christoffel, inverse_metric};
use super::curvature::{analyze_point, curvature_at, CurvatureData};
use super::metric::{metric_jets, ChartPoint, MetricSource};
use super::tensor::Tensor4;

/// Default step for first derivatives of curvature components.
pub const DEFAULT_STEP: f64 = 1e-4;
/// Step for the second differences in the Laplacian (roundoff dominates below this).
pub const LAPLACIAN_STEP: f64 = 1e-3;
/// Relative disagreement between the `h` and `h/2` estimates that triggers a warning.
pub const RICHARDSON_WARN: f64 = 0.1;
const ABS_FLOOR: f64 = 1e-8;

/// `∇_m T_{ijkl}` for a rank-4 frame tensor, stored as `[m][i][j][k][l]`.
#[derive(Debug, Clone)]
pub struct CovariantDerivative4 {
    pub n: usize,
    pub data: Vec<f64>,
}

impl CovariantDerivative4 {
    pub fn get(&self, m: usize, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.data[(((m * n + i) * n + j) * n + k) * n + l]
    }

    pub fn norm_squared(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }
}

/// `∇_m T_{ij}` for a rank-2 frame tensor, stored as `[m][i][j]`.
#[derive(Debug, Clone)]
pub struct CovariantDerivative2 {
    pub n: usize,
    pub data: Vec<f64>,
}

impl CovariantDerivative2 {
    pub fn norm_squared(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }
}

/// Outcome of a finite-difference derivative estimate.
#[derive(Debug, Clone)]
pub struct FdEstimate<T> {
    pub value: T,
    /// Largest disagreement between the step-`h` and step-`h/2` estimates.
    pub richardson_gap: f64,
    /// Set when the two estimates disagree by more than 10%.
    pub accuracy_warning: bool,
}

fn check_step(h: f64) -> Result<(), GeomError> {
    if !(h.is_finite() && h > 1e-10) {
        return Err(GeomError::InvalidArgument(format!(
            "finite-difference step {h} too small"
        )));
    }
    Ok(())
}

/// Coordinate derivatives `∂_a f` (flattened `[a][..]`) of a vector-valued
/// function, Richardson-extrapolated from steps `h` and `h/2`.
fn coordinate_gradient(
    p: &ChartPoint,
    h: f64,
    f: &(dyn Fn(&ChartPoint) -> Result<Vec<f64>, GeomError> + Sync),
) -> Result<(Vec<Vec<f64>>, f64, bool), GeomError> {
    let n = p.dim();
    let mut grads = Vec::with_capacity(n);
    let mut gap: f64 = 0.0;
    let mut warn = false;
    for a in 0..n {
        let central = |step: f64| -> Result<Vec<f64>, GeomError> {
            let plus = f(&p.shifted(a, step))?;
            let minus = f(&p.shifted(a, -step))?;
            Ok(plus
                .iter()
                .zip(&minus)
                .map(|(x, y)| (x - y) / (2.0 * step))
                .collect())
        };
        let d1 = central(h)?;
        let d2 = central(h / 2.0)?;
        let mut g = Vec::with_capacity(d1.len());
        for (x, y) in d1.iter().zip(&d2) {
            let diff = (x - y).abs();
            gap = gap.max(diff);
            if diff > RICHARDSON_WARN * y.abs() + ABS_FLOOR {
                warn = true;
            }
            g.push((4.0 * y - x) / 3.0);
        }
        grads.push(g);
    }
    Ok((grads, gap, warn))
}

/// `∇_m T_{ijkl} = e_m(T_{ijkl}) - Σ_p (ω_{pim} T_{pjkl} + ω_{pjm} T_{ipkl} + ω_{pkm} T_{ijpl} + ω_{plm} T_{ijkp})`.
fn covariant_from_gradient(
    n: usize,
    grads: &[Vec<f64>],
    frame: &DMatrix<f64>,
    omega: &[f64],
    t: &Tensor4,
) -> CovariantDerivative4 {
    let w = |p: usize, i: usize, m: usize| omega[(p * n + i) * n + m];
    let mut data = vec![0.0; n.pow(5)];
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let flat = ((i * n + j) * n + k) * n + l;
                        let mut s: f64 = (0..n).map(|a| frame[(a, m)] * grads[a][flat]).sum();
                        for p in 0..n {
                            s -= w(p, i, m) * t.get(p, j, k, l)
                                + w(p, j, m) * t.get(i, p, k, l)
                                + w(p, k, m) * t.get(i, j, p, l)
                                + w(p, l, m) * t.get(i, j, k, p);
                        }
                        data[m * n.pow(4) + flat] = s;
                    }
                }
            }
        }
    }
    CovariantDerivative4 { n, data }
}

/// Covariant derivative of a rank-4 frame tensor field given pointwise by `field`.
pub fn covariant_derivative_tensor(
    m: &dyn MetricSource,
    p: &ChartPoint,
    h: f64,
    field: &(dyn Fn(&ChartPoint) -> Result<Tensor4, GeomError> + Sync),
) -> Result<FdEstimate<CovariantDerivative4>, GeomError> {
    check_step(h)?;
    let here = analyze_point(m, p, super::curvature::DEFAULT_TOL)?;
    let t = field(p)?;
    let flat = |q: &ChartPoint| field(q).map(|x| x.as_slice().to_vec());
    let (grads, gap, warn) = coordinate_gradient(p, h, &flat)?;
    let frame = here.coframe.b_inv_values();
    let value = covariant_from_gradient(m.dim(), &grads, &frame, &here.connection.values(), &t);
    Ok(FdEstimate {
        value,
        richardson_gap: gap,
        accuracy_warning: warn,
    })
}

/// `∇ Riem` at `p`.
pub fn covariant_riemann(
    m: &dyn MetricSource,
    p: &ChartPoint,
    h: f64,
) -> Result<FdEstimate<CovariantDerivative4>, GeomError> {
    covariant_derivative_tensor(m, p, h, &|q| Ok(curvature_at(m, q)?.riemann))
}

/// `∇ Ric` at `p`, as `[m][i][j]`.
pub fn covariant_ricci(
    m: &dyn MetricSource,
    p: &ChartPoint,
    h: f64,
) -> Result<FdEstimate<CovariantDerivative2>, GeomError> {
    check_step(h)?;
    let n = m.dim();
    let here = analyze_point(m, p, super::curvature::DEFAULT_TOL)?;
    let ric = &here.curvature.ricci;
    let flat = |q: &ChartPoint| -> Result<Vec<f64>, GeomError> {
        Ok(curvature_at(m, q)?.ricci.transpose().as_slice().to_vec())
    };
    let (grads, gap, warn) = coordinate_gradient(p, h, &flat)?;
    let frame = here.coframe.b_inv_values();
    let omega = here.connection.values();
    let w = |p: usize, i: usize, m: usize| omega[(p * n + i) * n + m];
    let mut data = vec![0.0; n * n * n];
    for mm in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s: f64 = (0..n).map(|a| frame[(a, mm)] * grads[a][i * n + j]).sum();
                for q in 0..n {
                    s -= w(q, i, mm) * ric[(q, j)] + w(q, j, mm) * ric[(i, q)];
                }
                data[(mm * n + i) * n + j] = s;
            }
        }
    }
    Ok(FdEstimate {
        value: CovariantDerivative2 { n, data },
        richardson_gap: gap,
        accuracy_warning: warn,
    })
}

/// Coordinate Laplacian `Δf = g^{ab}(∂_a ∂_b f - Γ^c_{ab} ∂_c f)` of a scalar
/// function, by central second differences with step `h`.
pub fn laplacian(
    m: &dyn MetricSource,
    p: &ChartPoint,
    h: f64,
    f: &(dyn Fn(&ChartPoint) -> Result<f64, GeomError> + Sync),
) -> Result<FdEstimate<f64>, GeomError> {
    check_step(h)?;
    let n = m.dim();
    let g = metric_jets(m, p, 1)?;
    let ginv = inverse_metric(&g)?;
    let gam = christoffel(&g)?;
    let estimate = |h: f64| -> Result<f64, GeomError> {
        let f0 = f(p)?;
        let mut first = vec![0.0; n];
        let mut second = DMatrix::<f64>::zeros(n, n);
        for a in 0..n {
            let fp = f(&p.shifted(a, h))?;
            let fm = f(&p.shifted(a, -h))?;
            first[a] = (fp - fm) / (2.0 * h);
            second[(a, a)] = (fp - 2.0 * f0 + fm) / (h * h);
        }
        for a in 0..n {
            for b in (a + 1)..n {
                let pp = f(&p.shifted(a, h).shifted(b, h))?;
                let pm = f(&p.shifted(a, h).shifted(b, -h))?;
                let mp = f(&p.shifted(a, -h).shifted(b, h))?;
                let mm = f(&p.shifted(a, -h).shifted(b, -h))?;
                let v = (pp - pm - mp + mm) / (4.0 * h * h);
                second[(a, b)] = v;
                second[(b, a)] = v;
            }
        }
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut hess = second[(a, b)];
                for (c, fc) in first.iter().enumerate() {
                    hess -= gam[c][a][b].value() * fc;
                }
                s += ginv[a][b].value() * hess;
            }
        }
        Ok(s)
    };
    let coarse = estimate(h)?;
    let fine = estimate(h / 2.0)?;
    let gap = (coarse - fine).abs();
    Ok(FdEstimate {
        value: (4.0 * fine - coarse) / 3.0,
        richardson_gap: gap,
        accuracy_warning: gap > RICHARDSON_WARN * fine.abs() + 1e-6,
    })
}

/// Attach `|∇Riem|²` to a curvature record.
pub fn with_covariant_riemann_norm(
    m: &dyn MetricSource,
    p: &ChartPoint,
    h: f64,
    mut curv: CurvatureData,
) -> Result<(CurvatureData, bool), GeomError> {
    let est = covariant_riemann(m, p, h)?;
    curv.cov_riemann_norm = Some(est.value.norm_squared());
    Ok((curv, est.accuracy_warning))
}
