//! Hodge star and the standard bases of `Λ^±` in an orthonormal coframe.
//!
//! A 2-form `η = ½ η_{ij} ω^i ∧ ω^j` is stored as its antisymmetric 4×4
//! coefficient array, so `ω^1 ∧ ω^2` has `η_{12} = 1 = -η_{21}`.

use nalgebra::Matrix4;

use crate::error::GeomError;

pub type TwoForm = Matrix4<f64>;

/// Sign of the permutation `(i, j, k, l)` of `(0, 1, 2, 3)`, or 0.
pub fn levi_civita(i: usize, j: usize, k: usize, l: usize) -> f64 {
    let idx = [i, j, k, l];
    let mut sign = 1.0;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if idx[a] == idx[b] {
                return 0.0;
            }
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `ω^i ∧ ω^j` (0-based indices).
pub fn wedge(i: usize, j: usize) -> TwoForm {
    let mut m = TwoForm::zeros();
    m[(i, j)] += 1.0;
    m[(j, i)] -= 1.0;
    m
}

/// Induced inner product, `⟨η, ξ⟩ = ½ η_{ij} ξ_{ij}`; `ω^1∧ω^2` has unit norm.
pub fn inner(eta: &TwoForm, xi: &TwoForm) -> f64 {
    0.5 * eta.component_mul(xi).sum()
}

pub fn antisymmetry_residual(eta: &TwoForm) -> f64 {
    (eta + eta.transpose()).abs().max()
}

fn require_antisymmetric(eta: &TwoForm) -> Result<(), GeomError> {
    let r = antisymmetry_residual(eta);
    if r > 1e-12 * (1.0 + eta.abs().max()) {
        return Err(GeomError::InvalidArgument(format!(
            "2-form coefficients not antisymmetric (residual {r:e})"
        )));
    }
    Ok(())
}

/// `(⋆η)_{ij} = ½ ε_{ijkl} η_{kl}`, with `ε_{1234} = orientation`.
pub fn hodge_star(eta: &TwoForm, orientation: i8) -> Result<TwoForm, GeomError> {
    require_antisymmetric(eta)?;
    let o = if orientation < 0 { -1.0 } else { 1.0 };
    Ok(TwoForm::from_fn(|i, j| {
        let mut s = 0.0;
        for k in 0..4 {
            for l in 0..4 {
                s += levi_civita(i, j, k, l) * eta[(k, l)];
            }
        }
        0.5 * o * s
    }))
}

/// `{ω¹∧ω²+ω³∧ω⁴, ω¹∧ω³+ω⁴∧ω², ω¹∧ω⁴+ω²∧ω³}`: self-dual for orientation +1.
pub fn p_family() -> [TwoForm; 3] {
    [
        wedge(0, 1) + wedge(2, 3),
        wedge(0, 2) + wedge(3, 1),
        wedge(0, 3) + wedge(1, 2),
    ]
}

/// `{ω¹∧ω²−ω³∧ω⁴, ω¹∧ω³−ω⁴∧ω², ω¹∧ω⁴−ω²∧ω³}`: anti-self-dual for orientation +1.
pub fn n_family() -> [TwoForm; 3] {
    [
        wedge(0, 1) - wedge(2, 3),
        wedge(0, 2) - wedge(3, 1),
        wedge(0, 3) - wedge(1, 2),
    ]
}

/// Identifier recorded in reports for the basis and normalization in use.
pub const BASIS_CONVENTION: &str = "unnormalized-sums";

/// Bases of `Λ^+` and `Λ^-` for a given orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFormBasis {
    pub orientation: i8,
    pub plus: [TwoForm; 3],
    pub minus: [TwoForm; 3],
}

impl TwoFormBasis {
    /// The six elements, `Λ^+` first.
    pub fn all(&self) -> [TwoForm; 6] {
        [
            self.plus[0],
            self.plus[1],
            self.plus[2],
            self.minus[0],
            self.minus[1],
            self.minus[2],
        ]
    }
}

/// Un-normalized standard bases; orientation −1 swaps the two families.
pub fn lambda_bases(orientation: i8) -> TwoFormBasis {
    if orientation < 0 {
        TwoFormBasis {
            orientation: -1,
            plus: n_family(),
            minus: p_family(),
        }
    } else {
        TwoFormBasis {
            orientation: 1,
            plus: p_family(),
            minus: n_family(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(rng: &mut ChaCha8Rng) -> TwoForm {
        let mut m = TwoForm::zeros();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let v = rng.gen_range(-1.0..1.0);
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        m
    }

    #[test]
    fn star_of_e12_is_e34() {
        assert_eq!(hodge_star(&wedge(0, 1), 1).unwrap(), wedge(2, 3));
    }

    #[test]
    fn star_is_an_involution_and_flips_with_orientation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let eta = random_form(&mut rng);
            let once = hodge_star(&eta, 1).unwrap();
            assert!((hodge_star(&once, 1).unwrap() - eta).abs().max() < 1e-15);
            assert!((hodge_star(&eta, -1).unwrap() + once).abs().max() < 1e-15);
        }
    }

    #[test]
    fn rejects_symmetric_input() {
        assert!(hodge_star(&TwoForm::identity(), 1).is_err());
    }

    #[test]
    fn bases_are_eigenforms_and_orthogonal() {
        for o in [1, -1] {
            let basis = lambda_bases(o);
            for eta in &basis.plus {
                assert_eq!(hodge_star(eta, o).unwrap(), *eta);
            }
            for eta in &basis.minus {
                assert_eq!(hodge_star(eta, o).unwrap(), -*eta);
            }
            let all = basis.all();
            for (p, a) in all.iter().enumerate() {
                for (q, b) in all.iter().enumerate() {
                    let expect = if p == q { 2.0 } else { 0.0 };
                    assert_eq!(inner(a, b), expect);
                }
            }
        }
        assert_eq!(lambda_bases(-1).plus, lambda_bases(1).minus);
    }
}
