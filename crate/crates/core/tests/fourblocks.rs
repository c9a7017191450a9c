use fourfold::fourblocks::{
    algebraic_spectrum, classify, curvature_blocks, mu_homomorphism, rotate_blocks,
};
use fourfold::geomcore::{curvature_at, DEFAULT_TOL};
use fourfold::metricdsl::{builtin, catalog_names};
use fourfold::nalgebra::{DMatrix, Matrix4};
use proptest::prelude::*;

fn rotation(angles: &[f64]) -> Matrix4<f64> {
    let mut x = Matrix4::zeros();
    let mut k = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            x[(i, j)] = angles[k];
            x[(j, i)] = -angles[k];
            k += 1;
        }
    }
    x.exp()
}

fn angles() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-3.2f64..3.2, 6)
}

fn max_diff(a: &Matrix4<f64>, b: &Matrix4<f64>) -> f64 {
    (a - b).abs().max()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mu_is_a_homomorphism(x in angles(), y in angles()) {
        let (a, b) = (rotation(&x), rotation(&y));
        let ab = mu_homomorphism(&(a * b)).unwrap();
        let prod = mu_homomorphism(&a).unwrap().compose(&mu_homomorphism(&b).unwrap());
        prop_assert!((ab.a_plus - prod.a_plus).abs().max() < 1e-12);
        prop_assert!((ab.a_minus - prod.a_minus).abs().max() < 1e-12);
    }

    #[test]
    fn mu_is_even_and_lands_in_so3(x in angles()) {
        let a = rotation(&x);
        let r = mu_homomorphism(&a).unwrap();
        let s = mu_homomorphism(&(-a)).unwrap();
        prop_assert!((r.a_plus - s.a_plus).abs().max() < 1e-12);
        prop_assert!((r.a_minus - s.a_minus).abs().max() < 1e-12);
        for f in [r.a_plus, r.a_minus] {
            prop_assert!((f.transpose() * f - fourfold::nalgebra::Matrix3::identity()).abs().max() < 1e-12);
            prop_assert!((f.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mu_kernel_is_plus_minus_identity(x in angles()) {
        let a = rotation(&x);
        let r = mu_homomorphism(&a).unwrap();
        let id = fourfold::nalgebra::Matrix3::identity();
        let trivial = (r.a_plus - id).abs().max() < 1e-9 && (r.a_minus - id).abs().max() < 1e-9;
        let central = max_diff(&a, &Matrix4::identity()) < 1e-6 || max_diff(&a, &-Matrix4::identity()) < 1e-6;
        prop_assert_eq!(trivial, central);
    }
}

#[test]
fn mu_kernel_contains_minus_identity() {
    let r = mu_homomorphism(&-Matrix4::identity()).unwrap();
    assert_eq!(r.a_plus, fourfold::nalgebra::Matrix3::identity());
    assert_eq!(r.a_minus, fourfold::nalgebra::Matrix3::identity());
    let pi = std::f64::consts::PI;
    // half turns in two orthogonal planes compose to −I
    let a = rotation(&[pi, 0.0, 0.0, 0.0, 0.0, pi]);
    assert!(max_diff(&a, &-Matrix4::identity()) < 1e-12);
    let r = mu_homomorphism(&a).unwrap();
    assert!(
        (r.a_plus - fourfold::nalgebra::Matrix3::identity())
            .abs()
            .max()
            < 1e-12
    );
    // a half turn in one plane is not in the kernel
    let r = mu_homomorphism(&rotation(&[pi, 0.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
    assert!(
        (r.a_plus - fourfold::nalgebra::Matrix3::identity())
            .abs()
            .max()
            > 1.0
    );
    let mut reflection = Matrix4::identity();
    reflection[(3, 3)] = -1.0;
    assert!(mu_homomorphism(&reflection).is_err());
    assert!(mu_homomorphism(&(Matrix4::identity() * 2.0)).is_err());
}

#[test]
fn block_transformation_laws_match_frame_recomputation() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for name in catalog_names() {
        let m = builtin(name, &[]).unwrap();
        for orientation in [1, -1] {
            let p = &m.suggested_points()[1];
            let curv = curvature_at(&m, p).unwrap();
            let blocks = curvature_blocks(&curv, orientation).unwrap();
            let class = classify(&blocks, DEFAULT_TOL);
            for _ in 0..20 {
                let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.2..3.2)).collect();
                let a = rotation(&x);
                let moved = rotate_blocks(&blocks, &mu_homomorphism(&a).unwrap());
                let direct = curvature_blocks(
                    &curv.rotated(&DMatrix::from_fn(4, 4, |i, j| a[(i, j)])),
                    orientation,
                )
                .unwrap();
                let s = blocks.scale();
                assert!((moved.a - direct.a).abs().max() < 1e-9 * s, "{name} A");
                assert!((moved.b - direct.b).abs().max() < 1e-9 * s, "{name} B");
                assert!((moved.c - direct.c).abs().max() < 1e-9 * s, "{name} C");
                let c2 = classify(&moved, DEFAULT_TOL);
                assert_eq!(
                    (c2.einstein, c2.self_dual, c2.anti_self_dual),
                    (class.einstein, class.self_dual, class.anti_self_dual),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn einstein_flag_tracks_traceless_ricci() {
    for name in catalog_names() {
        let m = builtin(name, &[]).unwrap();
        for p in m.suggested_points() {
            let curv = curvature_at(&m, p).unwrap();
            let class = classify(&curvature_blocks(&curv, 1).unwrap(), DEFAULT_TOL);
            let small = curv.traceless_ricci_max() <= 1e-9 * curv.scale();
            assert_eq!(class.einstein, small, "{name}");
        }
    }
    // a product of spheres of different radii is not Einstein
    let m = builtin("s2xs2", &[("r2".into(), 2.0)]).unwrap();
    let curv = curvature_at(&m, &m.suggested_points()[0]).unwrap();
    assert!(!classify(&curvature_blocks(&curv, 1).unwrap(), DEFAULT_TOL).einstein);
    assert!(curv.traceless_ricci_max() > 0.1);
}

#[test]
fn weyl_norm_bridge() {
    for name in catalog_names() {
        let m = builtin(name, &[]).unwrap();
        for p in m.suggested_points() {
            let curv = curvature_at(&m, p).unwrap();
            let s = algebraic_spectrum(&curvature_blocks(&curv, m.orientation()).unwrap());
            let ops: f64 = s
                .weyl_plus_eigen
                .iter()
                .chain(&s.weyl_minus_eigen)
                .map(|x| x * x)
                .sum();
            let tensor = curv.weyl.norm_squared();
            assert!(
                (tensor - 4.0 * ops).abs() < 1e-10 * (1.0 + tensor),
                "{name}: {tensor} vs 4·{ops}"
            );
        }
    }
}

#[test]
fn kahler_side_determinant_has_the_sign_of_the_scalar_curvature() {
    // complex orientation: the Kähler side is W⁺
    for name in ["cp2", "s2xs2"] {
        let m = builtin(name, &[]).unwrap();
        for p in m.suggested_points() {
            let curv = curvature_at(&m, p).unwrap();
            let s = algebraic_spectrum(&curvature_blocks(&curv, 1).unwrap());
            assert!(s.weyl_plus_det.abs() > 1e-3, "{name}");
            assert_eq!(s.weyl_plus_det.signum(), curv.scalar.signum(), "{name}");
        }
    }
}
