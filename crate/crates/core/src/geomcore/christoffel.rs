//! Coordinate (Christoffel) route to curvature, used as an independent check
//! on the moving-frame computation and for coordinate Laplacians.

use crate::error::GeomError;
use crate::jet::Jet;

use super::frame::CoframeData;
use super::metric::JetMatrix;
use super::tensor::Tensor4;

/// Inverse of a symmetric positive definite jet matrix by Gauss-Jordan
/// elimination.
pub fn inverse_metric(g: &JetMatrix) -> Result<JetMatrix, GeomError> {
    let n = g.len();
    let space = g[0][0].space().clone();
    let mut a: JetMatrix = g.to_vec();
    let mut inv: JetMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| space.constant(if i == j { 1.0 } else { 0.0 }))
                .collect()
        })
        .collect();
    for col in 0..n {
        if a[col][col].value() <= 0.0 {
            return Err(GeomError::NotPositiveDefinite { minor: col + 1 });
        }
        let p = a[col][col].recip()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= &t;
                let t = &f * &inv[col][j];
                inv[r][j] -= &t;
            }
        }
    }
    Ok(inv)
}

/// `Γ^a_{bc}`, stored `[a][b][c]`, one jet order below the metric.
pub fn christoffel(g: &JetMatrix) -> Result<Vec<Vec<Vec<Jet>>>, GeomError> {
    let n = g.len();
    let order = g[0][0].order();
    if order < 1 {
        return Err(GeomError::InsufficientOrder {
            required: 1,
            found: order,
        });
    }
    let ginv = inverse_metric(g)?;
    let dg: Vec<Vec<Vec<Jet>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (0..n).map(|c| g[a][b].derivative(c)).collect())
                .collect()
        })
        .collect();
    let lower = dg[0][0][0].space().clone();
    // first kind: Γ_{dbc} = ½(∂_b g_dc + ∂_c g_db - ∂_d g_bc)
    let mut first = vec![vec![vec![lower.zero(); n]; n]; n];
    for d in 0..n {
        for b in 0..n {
            for c in 0..n {
                first[d][b][c] = (&(&dg[d][c][b] + &dg[d][b][c]) - &dg[b][c][d]).scale(0.5);
            }
        }
    }
    let mut out = vec![vec![vec![lower.zero(); n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let mut s = lower.zero();
                for d in 0..n {
                    s += &(&ginv[a][d] * &first[d][b][c]);
                }
                out[a][c][b] = s.clone();
                out[a][b][c] = s;
            }
        }
    }
    Ok(out)
}

/// Frame components `R_{ijkl} = ⟨R(e_k, e_l) e_j, e_i⟩` from Christoffel symbols.
pub fn riemann_from_christoffel(
    g: &JetMatrix,
    coframe: &CoframeData,
) -> Result<Tensor4, GeomError> {
    let n = g.len();
    let order = g[0][0].order();
    if order < 2 {
        return Err(GeomError::InsufficientOrder {
            required: 2,
            found: order,
        });
    }
    let gam = christoffel(g)?;
    // R^a_{bcd} = ∂_c Γ^a_{db} - ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db} - Γ^a_{de} Γ^e_{cb}
    let mut coord = Tensor4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut s = gam[a][d][b].partial(&[c]) - gam[a][c][b].partial(&[d]);
                    for e in 0..n {
                        s += gam[a][c][e].value() * gam[e][d][b].value()
                            - gam[a][d][e].value() * gam[e][c][b].value();
                    }
                    coord.set(a, b, c, d, s);
                }
            }
        }
    }
    let bv = coframe.b_values();
    let ev = coframe.b_inv_values();
    // lower the first index with b, the others with bInv
    let mut step = Tensor4::zeros(n);
    for i in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let s: f64 = (0..n).map(|a| bv[(i, a)] * coord.get(a, b, c, d)).sum();
                    step.set(i, b, c, d, s);
                }
            }
        }
    }
    let mut out = Tensor4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for b in 0..n {
                        for c in 0..n {
                            for d in 0..n {
                                s += step.get(i, b, c, d) * ev[(b, j)] * ev[(c, k)] * ev[(d, l)];
                            }
                        }
                    }
                    out.set(i, j, k, l, s);
                }
            }
        }
    }
    Ok(out)
}
