//! An explicit chart of the twistor space `Z` with the metric
//! `g_t = π*g + t²⟨,⟩`, built from the base coframe and connection.
//!
//! Coordinates are `(x¹..x⁴, u, v)`: the base chart followed by
//! stereographic coordinates of the fiber sphere, projected from `−n₀`.
//! Over `(x, u, v)` the frame is the twistor-convention base frame rotated by
//! `a(n)`, the lift of the rotation carrying `n₀` to `n` with identity second
//! factor. With `ω̃ = a⁻¹ωa + a⁻¹da` the coframe is
//! `(aᵀb)ⁱ_c dx^c`, `θ⁵ = t(ω̃¹₃ + ω̃⁴₂)`, `θ⁶ = t(ω̃¹₄ + ω̃²₃)`.

use nalgebra::{DMatrix, Matrix2};

use crate::error::GeomError;
use crate::fourblocks::hodge::p_family;
use crate::geomcore::christoffel::christoffel;
use crate::geomcore::{
    connection_forms, curvature_at, orthonormal_coframe, ChartPoint, CoframeData, JetMatrix,
    MetricField, MetricSource,
};
use crate::jet::{Jet, JetSpace};

use super::fiber::FiberPoint;
use super::qtensor::{check_t, q_tensors, twistor_frame_curvature};

/// Weight of `θ⁵θ⁵ + θ⁶θ⁶` in the chart metric. With `θ^p` carrying one
/// factor of `t` the fibers of a flat base are round spheres of radius `t`,
/// i.e. of scalar curvature `2/t²`.
pub const VERTICAL_SCALE: f64 = 1.0;

/// Identifier of the fiber coordinates.
pub const FIBER_PARAMETRIZATION: &str = "stereographic from -n0, n0 = (1, 0, 0)";

/// Highest jet order of the chart metric (the base needs one more).
pub const MAX_CHART_ORDER: usize = 2;

/// The twistor space of a four-dimensional metric as a 6-dimensional chart.
#[derive(Debug, Clone)]
pub struct TwistorChart {
    base: MetricField,
    t: f64,
}

/// One-forms of the chart coframe, `forms[r][A]`: rows `0..4` are the
/// rotated base coframe, rows 4 and 5 are `θ⁵`, `θ⁶`.
#[derive(Debug, Clone)]
pub struct TwistorCoframe {
    pub forms: JetMatrix,
}

impl TwistorChart {
    pub fn new(base: MetricField, t: f64) -> Result<Self, GeomError> {
        check_t(t)?;
        if base.dim() != 4 {
            return Err(GeomError::DimensionMismatch {
                expected: 4,
                found: base.dim(),
            });
        }
        Ok(Self { base, t })
    }

    pub fn base(&self) -> &MetricField {
        &self.base
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn fiber_parametrization(&self) -> &'static str {
        FIBER_PARAMETRIZATION
    }

    /// The chart point over base point `x` at fiber coordinates `(u, v)`.
    pub fn point(x: &ChartPoint, u: f64, v: f64) -> ChartPoint {
        let mut c = x.coords().to_vec();
        c.extend([u, v]);
        ChartPoint::new(c)
    }

    /// Base point and fiber coordinates of a chart point.
    pub fn split(&self, p: &ChartPoint) -> Result<(ChartPoint, f64, f64), GeomError> {
        if p.dim() != 6 {
            return Err(GeomError::DimensionMismatch {
                expected: 6,
                found: p.dim(),
            });
        }
        let c = p.coords();
        if !(c[4].is_finite() && c[5].is_finite()) {
            return Err(GeomError::OutsideDomain(
                "fiber coordinates at the excluded pole of the stereographic chart".into(),
            ));
        }
        Ok((ChartPoint::new(c[..4].to_vec()), c[4], c[5]))
    }

    /// Base coframe in the twistor convention (fourth form reflected for a
    /// positively oriented base).
    fn base_coframe(&self, x: &ChartPoint, order: usize) -> Result<CoframeData, GeomError> {
        let g = self.base.metric_jets(x, order)?;
        let mut cf = orthonormal_coframe(&g)?;
        if self.base.orientation() > 0 {
            for a in 0..4 {
                cf.b[3][a] = -&cf.b[3][a];
                cf.b_inv[a][3] = -&cf.b_inv[a][3];
            }
        }
        Ok(cf)
    }

    /// `a(u, v)` over six variables.
    fn fiber_rotation(
        space: &std::sync::Arc<JetSpace>,
        u: f64,
        v: f64,
    ) -> Result<JetMatrix, GeomError> {
        let uj = space.variable(4, u);
        let vj = space.variable(5, v);
        let norm = (&(&space.constant(1.0) + &(&uj * &uj)) + &(&vj * &vj)).powf(-0.5)?;
        let fam = p_family();
        // unit quaternion (1, 0, −v, u)/N lifted with the P-family sign
        Ok((0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let mut e = &vj * fam[1][(i, j)] - &uj * fam[2][(i, j)];
                        if i == j {
                            e += &space.constant(1.0);
                        }
                        &e * &norm
                    })
                    .collect()
            })
            .collect())
    }

    /// The coframe `(Ω¹..Ω⁴, θ⁵, θ⁶)` with jets of the given order.
    pub fn coframe_jets(&self, p: &ChartPoint, order: usize) -> Result<TwistorCoframe, GeomError> {
        if order > MAX_CHART_ORDER {
            return Err(GeomError::InvalidArgument(format!(
                "twistor chart jets above order {MAX_CHART_ORDER}"
            )));
        }
        let (x, u, v) = self.split(p)?;
        let cf = self.base_coframe(&x, order + 1)?;
        let conn = connection_forms(&cf)?;
        let space = JetSpace::cached(6, order);
        let map = [0, 1, 2, 3];
        let b: JetMatrix =
            cf.b.iter()
                .map(|row| row.iter().map(|e| e.embed(&space, &map)).collect())
                .collect();
        // w[i][j][c]: coordinate components of ω^i_j
        let base_space = conn.omega_jet(0, 0, 0).space().clone();
        let mut w = vec![vec![vec![space.zero(); 4]; 4]; 4];
        for (i, wi) in w.iter_mut().enumerate() {
            for (j, wij) in wi.iter_mut().enumerate() {
                for (c, slot) in wij.iter_mut().enumerate() {
                    let mut s = base_space.zero();
                    for m in 0..4 {
                        s += &(conn.omega_jet(i, j, m) * &cf.b[m][c]);
                    }
                    *slot = s.embed(&space, &map);
                }
            }
        }
        let a_hi = Self::fiber_rotation(&JetSpace::cached(6, order + 1), u, v)?;
        let a: JetMatrix = a_hi
            .iter()
            .map(|row| row.iter().map(|e| e.truncate(order)).collect())
            .collect();
        let da: Vec<JetMatrix> = [4, 5]
            .iter()
            .map(|&var| {
                a_hi.iter()
                    .map(|row| row.iter().map(|e| e.derivative(var)).collect())
                    .collect()
            })
            .collect();

        let mut forms = vec![vec![space.zero(); 6]; 6];
        for i in 0..4 {
            for c in 0..4 {
                let mut s = space.zero();
                for q in 0..4 {
                    s += &(&a[q][i] * &b[q][c]);
                }
                forms[i][c] = s;
            }
        }
        // ω̃^i_j along coordinate A
        let tilde = |i: usize, j: usize, col: usize| -> Jet {
            let mut s = space.zero();
            if col < 4 {
                for p in 0..4 {
                    for q in 0..4 {
                        s += &(&(&a[p][i] * &w[p][q][col]) * &a[q][j]);
                    }
                }
            } else {
                let d = &da[col - 4];
                for p in 0..4 {
                    s += &(&a[p][i] * &d[p][j]);
                }
            }
            s
        };
        let scale = self.t * VERTICAL_SCALE.sqrt();
        for col in 0..6 {
            forms[4][col] = (&tilde(0, 2, col) + &tilde(3, 1, col)).scale(scale);
            forms[5][col] = (&tilde(0, 3, col) + &tilde(1, 2, col)).scale(scale);
        }
        Ok(TwistorCoframe { forms })
    }

    /// Chart metric values at `p`.
    pub fn evaluate(&self, p: &ChartPoint) -> Result<DMatrix<f64>, GeomError> {
        let g = self.metric_jets(p, 0)?;
        Ok(DMatrix::from_fn(6, 6, |i, j| g[i][j].value()))
    }

    /// Largest deviation of the horizontal metric (the Schur complement
    /// `G_xx − G_xv G_vv⁻¹ G_vx`) from the base metric, relative to `1 + |g|`.
    pub fn horizontal_residual(&self, p: &ChartPoint) -> Result<f64, GeomError> {
        let (x, _, _) = self.split(p)?;
        let g6 = self.evaluate(p)?;
        let g4 = self.base.evaluate(&x)?;
        let gxx = g6.view((0, 0), (4, 4));
        let gxv = g6.view((0, 4), (4, 2));
        let gvv = g6.view((4, 4), (2, 2)).into_owned();
        let inv = gvv
            .try_inverse()
            .ok_or(GeomError::NotPositiveDefinite { minor: 2 })?;
        let schur = gxx - gxv * inv * gxv.transpose();
        let scale = 1.0 + g4.abs().max();
        Ok((schur - g4).abs().max() / scale)
    }

    /// `Σ_{a,b} |A_{e_a} e_b|²` from the chart metric: `A_X Y = ½ V[X, Y]`
    /// for horizontal lifts `X_a = ∂_a + c_a^s ∂_s`, `c = −G_vv⁻¹ G_vx`.
    pub fn oneill_norm_squared(&self, p: &ChartPoint) -> Result<f64, GeomError> {
        let (x, _, _) = self.split(p)?;
        let g = self.metric_jets(p, 1)?;
        let det = &(&g[4][4] * &g[5][5]) - &(&g[4][5] * &g[4][5]);
        let inv_det = det.recip()?;
        let ginv = [
            [&g[5][5] * &inv_det, -&(&g[4][5] * &inv_det)],
            [-&(&g[4][5] * &inv_det), &g[4][4] * &inv_det],
        ];
        // c[s][a]
        let c: Vec<Vec<Jet>> = (0..2)
            .map(|s| {
                (0..4)
                    .map(|a| {
                        let v = &(&ginv[s][0] * &g[4][a]) + &(&ginv[s][1] * &g[5][a]);
                        -&v
                    })
                    .collect()
            })
            .collect();
        let d = |s: usize, a: usize, var: usize| c[s][a].partial(&[var]);
        let cv = |s: usize, a: usize| c[s][a].value();
        let bracket = |a: usize, b: usize, s: usize| {
            let mut v = d(s, b, a) - d(s, a, b);
            for r in 0..2 {
                v += cv(r, a) * d(s, b, 4 + r) - cv(r, b) * d(s, a, 4 + r);
            }
            v
        };
        let e = self.base_coframe(&x, 0)?.b_inv_values();
        let gvv = Matrix2::new(
            g[4][4].value(),
            g[4][5].value(),
            g[5][4].value(),
            g[5][5].value(),
        );
        let mut total = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let mut vs = nalgebra::Vector2::zeros();
                for a in 0..4 {
                    for b in 0..4 {
                        let w = e[(a, i)] * e[(b, j)];
                        if w == 0.0 {
                            continue;
                        }
                        for s in 0..2 {
                            vs[s] += w * bracket(a, b, s);
                        }
                    }
                }
                total += 0.25 * vs.dot(&(gvv * vs));
            }
        }
        Ok(total)
    }

    /// The same quantity from the q-tensors at the fiber point:
    /// `(t²/4)(|q³|² + |q⁴|²)`.
    pub fn oneill_norm_squared_formula(&self, p: &ChartPoint) -> Result<f64, GeomError> {
        let (x, u, v) = self.split(p)?;
        let curv =
            twistor_frame_curvature(&curvature_at(&self.base, &x)?, self.base.orientation())?;
        let fp = FiberPoint::from_stereographic(u, v)?;
        let q = q_tensors(&curv.rotated(&fp.rotation_matrix()))?;
        Ok(self.t * self.t / 4.0 * q.vertical_norm())
    }

    /// Norm of the second fundamental form of the fiber through `p`.
    pub fn fiber_second_fundamental_form(&self, p: &ChartPoint) -> Result<f64, GeomError> {
        let (x, _, _) = self.split(p)?;
        let g = self.metric_jets(p, 1)?;
        let gam = christoffel(&g)?;
        let g4 = self.base.evaluate(&x)?;
        let gvv = Matrix2::new(
            g[4][4].value(),
            g[4][5].value(),
            g[5][4].value(),
            g[5][5].value(),
        );
        let gvv_inv = gvv
            .try_inverse()
            .ok_or(GeomError::NotPositiveDefinite { minor: 2 })?;
        // horizontal part of ∇_{∂s} ∂r projects to Γ^i_{sr} ∂_i on the base
        let h = |s: usize, r: usize| -> [f64; 4] {
            std::array::from_fn(|i| gam[i][4 + s][4 + r].value())
        };
        let mut total = 0.0;
        for s in 0..2 {
            for r in 0..2 {
                for s2 in 0..2 {
                    for r2 in 0..2 {
                        let w = gvv_inv[(s, s2)] * gvv_inv[(r, r2)];
                        let (h1, h2) = (h(s, r), h(s2, r2));
                        for i in 0..4 {
                            for j in 0..4 {
                                total += w * g4[(i, j)] * h1[i] * h2[j];
                            }
                        }
                    }
                }
            }
        }
        Ok(total.max(0.0).sqrt())
    }
}

impl MetricSource for TwistorChart {
    fn dim(&self) -> usize {
        6
    }

    fn orientation(&self) -> i8 {
        1
    }

    fn metric_jets(&self, p: &ChartPoint, order: usize) -> Result<JetMatrix, GeomError> {
        let cf = self.coframe_jets(p, order)?;
        let f = &cf.forms;
        let space = f[0][0].space().clone();
        let mut g = vec![vec![space.zero(); 6]; 6];
        for a in 0..6 {
            for b in a..6 {
                let mut s = space.zero();
                for row in f.iter() {
                    if row[a].is_constant() && row[a].value() == 0.0 {
                        continue;
                    }
                    s += &(&row[a] * &row[b]);
                }
                if b > a {
                    g[b][a] = s.clone();
                }
                g[a][b] = s;
            }
        }
        Ok(g)
    }
}

/// Build the twistor chart of a four-dimensional metric.
pub fn build_twistor_chart(m: &MetricField, t: f64) -> Result<TwistorChart, GeomError> {
    TwistorChart::new(m.clone(), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metricdsl::builtin;

    #[test]
    fn flat_base_gives_product_with_round_sphere() {
        let m = builtin("flat4", &[]).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let chart = build_twistor_chart(&m, t).unwrap();
            for (u, v) in [(0.0, 0.0), (0.4, -1.3), (2.0, 0.5)] {
                let p = TwistorChart::point(&ChartPoint::new(vec![0.1, 0.2, -0.3, 0.4]), u, v);
                let g = chart.evaluate(&p).unwrap();
                let round = 4.0 * t * t / (1.0 + u * u + v * v).powi(2);
                let mut want = DMatrix::<f64>::identity(6, 6);
                want[(4, 4)] = round;
                want[(5, 5)] = round;
                assert!((g - want).abs().max() < 1e-13, "t={t} ({u},{v})");
            }
        }
    }

    #[test]
    fn vertical_scale_is_pinned() {
        // the calibration that makes the flat-base fiber of curvature 2/t²
        assert_eq!(VERTICAL_SCALE, 1.0);
        let chart = build_twistor_chart(&builtin("flat4", &[]).unwrap(), 0.5).unwrap();
        let p = TwistorChart::point(&ChartPoint::new(vec![0.0; 4]), 0.3, 0.2);
        let s = curvature_at(&chart, &p).unwrap().scalar;
        assert!((s - 8.0).abs() < 1e-10, "{s}");
    }

    #[test]
    fn rejects_bad_input() {
        let m = builtin("s4", &[]).unwrap();
        assert!(build_twistor_chart(&m, 0.0).is_err());
        let chart = build_twistor_chart(&m, 1.0).unwrap();
        assert!(matches!(
            chart.metric_jets(&ChartPoint::new(vec![0.0; 4]), 1),
            Err(GeomError::DimensionMismatch { .. })
        ));
        let pole = ChartPoint::new(vec![0.0, 0.0, 0.0, 0.0, f64::INFINITY, 0.0]);
        assert!(matches!(
            chart.metric_jets(&pole, 1),
            Err(GeomError::OutsideDomain(_))
        ));
        let p = TwistorChart::point(&ChartPoint::new(vec![0.0; 4]), 0.0, 0.0);
        assert!(chart.metric_jets(&p, 3).is_err());
    }
}
