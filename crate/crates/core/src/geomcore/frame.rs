//! Orthonormal coframes and Cartan's structure equations.
//!
//! Conventions: `ω^i = b^i_a dx^a`, `dx^a = bInv^a_j ω^j`, connection forms
//! `ω^i_j = ω_{ijk} ω^k` with `dω^i = -ω^i_j ∧ ω^j` and `∇e_j = ω^i_j e_i`,
//! curvature forms `Ω^i_j = dω^i_j + ω^i_k ∧ ω^k_j = ½ R_{ijkl} ω^k ∧ ω^l`.

use crate::error::GeomError;
use crate::jet::Jet;

use super::metric::JetMatrix;
use super::tensor::Tensor4;

/// Orthonormal coframe of a metric, jet-valued.
#[derive(Debug, Clone)]
pub struct CoframeData {
    /// `b[i][a] = b^i_a`, lower triangular with positive diagonal.
    pub b: JetMatrix,
    /// `b_inv[a][i]`: the frame vector `e_i = Σ_a b_inv[a][i] ∂_a`.
    pub b_inv: JetMatrix,
}

impl CoframeData {
    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// `b` evaluated at the base point.
    pub fn b_values(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        nalgebra::DMatrix::from_fn(n, n, |i, a| self.b[i][a].value())
    }

    /// `bInv` evaluated at the base point.
    pub fn b_inv_values(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        nalgebra::DMatrix::from_fn(n, n, |a, i| self.b_inv[a][i].value())
    }

    /// Largest relative deviation of `Σ_i b^i_a b^i_b` from `g_ab`.
    pub fn metric_residual(&self, g: &JetMatrix) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for c in 0..n {
                let s: f64 = (0..n)
                    .map(|i| self.b[i][a].value() * self.b[i][c].value())
                    .sum();
                let gv = g[a][c].value();
                worst = worst.max((s - gv).abs() / (1.0 + gv.abs()));
            }
        }
        worst
    }
}

/// Cholesky-type factorization `g = bᵀ b` with `b` lower triangular.
///
/// The factorization runs from the last coordinate backwards, which is what
/// makes `b` lower (rather than upper) triangular.
pub fn orthonormal_coframe(g: &JetMatrix) -> Result<CoframeData, GeomError> {
    let n = g.len();
    if g.iter().any(|row| row.len() != n) {
        return Err(GeomError::InvalidArgument(
            "metric jets are not square".into(),
        ));
    }
    let space = g[0][0].space().clone();
    let mut b: JetMatrix = vec![vec![space.zero(); n]; n];
    for a in (0..n).rev() {
        let mut d = g[a][a].clone();
        for row in b.iter().skip(a + 1) {
            d -= &(&row[a] * &row[a]);
        }
        if d.value().is_nan() || d.value() <= 0.0 {
            return Err(GeomError::NotPositiveDefinite { minor: n - a });
        }
        let diag = d.sqrt()?;
        let inv = diag.recip()?;
        for c in 0..a {
            let mut s = g[a][c].clone();
            for row in b.iter().skip(a + 1) {
                s -= &(&row[a] * &row[c]);
            }
            b[a][c] = &s * &inv;
        }
        b[a][a] = diag;
    }
    let b_inv = lower_triangular_inverse(&b)?;
    Ok(CoframeData { b, b_inv })
}

fn lower_triangular_inverse(b: &JetMatrix) -> Result<JetMatrix, GeomError> {
    let n = b.len();
    let space = b[0][0].space().clone();
    let mut e: JetMatrix = vec![vec![space.zero(); n]; n];
    for i in 0..n {
        let inv = b[i][i].recip()?;
        e[i][i] = inv.clone();
        for j in 0..i {
            let mut s = space.zero();
            for k in j..i {
                s += &(&b[i][k] * &e[k][j]);
            }
            e[i][j] = -(&s * &inv);
        }
    }
    Ok(e)
}

/// Levi-Civita connection forms in the orthonormal coframe.
#[derive(Debug, Clone)]
pub struct ConnectionForms {
    n: usize,
    /// `c^i_{jk}` with `dω^i = ½ c^i_{jk} ω^j ∧ ω^k`.
    structure: Vec<Jet>,
    /// `ω_{ijk}` with `ω^i_j = ω_{ijk} ω^k`.
    omega: Vec<Jet>,
}

impl ConnectionForms {
    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// `ω^i_j(e_k)` at the base point.
    pub fn omega(&self, i: usize, j: usize, k: usize) -> f64 {
        self.omega[self.idx(i, j, k)].value()
    }

    pub fn omega_jet(&self, i: usize, j: usize, k: usize) -> &Jet {
        &self.omega[self.idx(i, j, k)]
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure[self.idx(i, j, k)].value()
    }

    /// All `ω_{ijk}` values, flattened in `(i, j, k)` order.
    pub fn values(&self) -> Vec<f64> {
        self.omega.iter().map(Jet::value).collect()
    }
}

/// Solve `dω^i = -ω^i_j ∧ ω^j` for the antisymmetric connection forms.
pub fn connection_forms(coframe: &CoframeData) -> Result<ConnectionForms, GeomError> {
    let n = coframe.dim();
    let order = coframe.b[0][0].order();
    if order < 1 {
        return Err(GeomError::InsufficientOrder {
            required: 1,
            found: order,
        });
    }
    let b = &coframe.b;
    let e = &coframe.b_inv;
    // db[i][a][c] = ∂_c b^i_a
    let db: Vec<Vec<Vec<Jet>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|a| (0..n).map(|c| b[i][a].derivative(c)).collect())
                .collect()
        })
        .collect();
    let lower = db[0][0][0].space().clone();
    let mut structure = vec![lower.zero(); n * n * n];
    for i in 0..n {
        // coordinate components D_{ca} = ∂_c b^i_a - ∂_a b^i_c, then to the frame
        for j in 0..n {
            for k in (j + 1)..n {
                let mut s = lower.zero();
                for c in 0..n {
                    for a in 0..n {
                        if a == c {
                            continue;
                        }
                        let d = &db[i][a][c] - &db[i][c][a];
                        s += &(&d * &(&e[c][j] * &e[a][k]));
                    }
                }
                structure[(i * n + k) * n + j] = -&s;
                structure[(i * n + j) * n + k] = s;
            }
        }
    }
    let c = |i: usize, j: usize, k: usize| &structure[(i * n + j) * n + k];
    let mut omega = vec![lower.zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = &(c(i, j, k) + c(j, k, i)) - c(k, i, j);
                omega[(i * n + j) * n + k] = v.scale(0.5);
            }
        }
    }
    Ok(ConnectionForms {
        n,
        structure,
        omega,
    })
}

/// Coefficients of the curvature 2-forms, `Ω^i_j = ½ R_{ijkl} ω^k ∧ ω^l`.
#[derive(Debug, Clone)]
pub struct CurvatureForms {
    pub components: Tensor4,
}

/// `W[i][j][a]`: coordinate components of `ω^i_j`.
fn coordinate_connection(coframe: &CoframeData, conn: &ConnectionForms) -> Vec<Jet> {
    let n = coframe.dim();
    let space = conn.omega_jet(0, 0, 0).space().clone();
    let mut w = vec![space.zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                let mut s = space.zero();
                for m in 0..n {
                    s += &(conn.omega_jet(i, j, m) * &coframe.b[m][a]);
                }
                w[(i * n + j) * n + a] = s;
            }
        }
    }
    w
}

/// Second structure equation.
pub fn curvature_forms(
    coframe: &CoframeData,
    conn: &ConnectionForms,
) -> Result<CurvatureForms, GeomError> {
    let n = coframe.dim();
    let order = coframe.b[0][0].order();
    if order < 2 {
        return Err(GeomError::InsufficientOrder {
            required: 2,
            found: order,
        });
    }
    let w = coordinate_connection(coframe, conn);
    let ev = coframe.b_inv_values();
    // dW[i][j][a][c] = ∂_c W_{ija}
    let dw = |i: usize, j: usize, a: usize, c: usize| w[(i * n + j) * n + a].partial(&[c]);
    let mut coord = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for c in 0..n {
                for a in 0..n {
                    coord[((i * n + j) * n + c) * n + a] = dw(i, j, a, c) - dw(i, j, c, a);
                }
            }
        }
    }
    let mut r = Tensor4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for c in 0..n {
                        for a in 0..n {
                            s += coord[((i * n + j) * n + c) * n + a] * ev[(c, k)] * ev[(a, l)];
                        }
                    }
                    for m in 0..n {
                        s += conn.omega(i, m, k) * conn.omega(m, j, l)
                            - conn.omega(i, m, l) * conn.omega(m, j, k);
                    }
                    r.set(i, j, k, l, s);
                }
            }
        }
    }
    Ok(CurvatureForms { components: r })
}

/// `max |dω^i + ω^i_j ∧ ω^j|` over coordinate components, relative to the
/// size of `dω`.
pub fn first_structure_residual(coframe: &CoframeData, conn: &ConnectionForms) -> f64 {
    let n = coframe.dim();
    let w = coordinate_connection(coframe, conn);
    let b = &coframe.b;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..n {
        for c in 0..n {
            for a in (c + 1)..n {
                let d = b[i][a].partial(&[c]) - b[i][c].partial(&[a]);
                let mut wedge = 0.0;
                for j in 0..n {
                    wedge += w[(i * n + j) * n + c].value() * b[j][a].value()
                        - w[(i * n + j) * n + a].value() * b[j][c].value();
                }
                worst = worst.max((d + wedge).abs());
                scale = scale.max(d.abs());
            }
        }
    }
    worst / (1.0 + scale)
}

/// `max |ω^i_j + ω^j_i|`.
pub fn connection_antisymmetry_residual(conn: &ConnectionForms) -> f64 {
    let n = conn.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((conn.omega(i, j, k) + conn.omega(j, i, k)).abs());
            }
        }
    }
    worst
}
