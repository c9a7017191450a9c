use fourfold::fourblocks::{algebraic_spectrum, curvature_blocks};
use fourfold::geomcore::{analyze_point, curvature_at, DEFAULT_TOL};
use fourfold::metricdsl::{builtin, catalog_names, BinOp, Expr};
use fourfold::{load_metric_spec, ChartPoint, MetricField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(m: &MetricField, count: usize, seed: u64) -> Vec<ChartPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = m.suggested_points();
    let mut out = Vec::new();
    while out.len() < count {
        let b = &base[rng.gen_range(0..base.len())];
        let p = ChartPoint::new(
            b.coords()
                .iter()
                .map(|x| x + rng.gen_range(-0.3..0.3))
                .collect(),
        );
        if m.check_domain(&p).is_ok() {
            out.push(p);
        }
    }
    out
}

#[test]
fn invariants_hold_at_random_points() {
    for name in catalog_names() {
        let m = builtin(name, &[]).unwrap();
        for p in random_points(&m, 10, 3) {
            let r = analyze_point(&m, &p, DEFAULT_TOL).unwrap().residuals;
            for (what, v) in [
                ("first structure", r.first_structure),
                ("second structure", r.second_structure),
                ("connection antisymmetry", r.connection_antisymmetry),
                ("coframe", r.coframe),
                ("antisymmetry", r.antisymmetry),
                ("pair", r.pair),
                ("bianchi", r.bianchi),
                ("reconstruction", r.reconstruction),
                ("weyl trace", r.weyl_trace),
            ] {
                assert!(v <= 1e-9, "{name} at {:?}: {what} {v:e}", p.coords());
            }
        }
    }
}

fn scaled(m: &MetricField, c: f64) -> MetricField {
    let mut spec = m.to_spec();
    for row in &mut spec.components {
        for e in row {
            *e = Expr::Binary(BinOp::Mul, Box::new(Expr::Num(c * c)), Box::new(e.clone()));
        }
    }
    load_metric_spec(&spec.to_document()).unwrap()
}

#[test]
fn constant_rescaling_divides_scalar_and_weyl_spectrum() {
    let c = 2.0;
    for name in ["s4", "s2xs2", "cp2", "schwarzschild"] {
        let m = builtin(name, &[]).unwrap();
        let big = scaled(&m, c);
        for p in m.suggested_points() {
            let k0 = curvature_at(&m, p).unwrap();
            let k1 = curvature_at(&big, p).unwrap();
            assert!((k1.scalar - k0.scalar / (c * c)).abs() < 1e-12 * (1.0 + k0.scalar.abs()));
            let s0 = algebraic_spectrum(&curvature_blocks(&k0, 1).unwrap());
            let s1 = algebraic_spectrum(&curvature_blocks(&k1, 1).unwrap());
            for (e0, e1) in s0
                .weyl_plus_eigen
                .iter()
                .chain(&s0.weyl_minus_eigen)
                .zip(s1.weyl_plus_eigen.iter().chain(&s1.weyl_minus_eigen))
            {
                assert!((e1 * c * c - e0).abs() < 1e-11 * (1.0 + e0.abs()), "{name}");
            }
        }
    }
    // the ratios are what survives; S²×S² has a nonzero W⁺ with ratios 2 : −1 : −1
    let m = builtin("s2xs2", &[]).unwrap();
    let p = &m.suggested_points()[0];
    let e = algebraic_spectrum(
        &curvature_blocks(&curvature_at(&scaled(&m, c), p).unwrap(), 1).unwrap(),
    )
    .weyl_plus_eigen;
    assert!((e[1] / e[0] + 0.5).abs() < 1e-12 && (e[2] / e[0] + 0.5).abs() < 1e-12);
}

#[test]
fn sphere_radius_sets_the_curvature() {
    // sectional curvature 1/r² in every plane: R_ijij = 1/r²
    for r in [0.5, 1.0, 3.0] {
        let m = builtin("s4", &[("r".into(), r)]).unwrap();
        for p in random_points(&m, 5, 9) {
            let k = curvature_at(&m, &p).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { 0.0 } else { 1.0 / (r * r) };
                    assert!((k.riemann.get(i, j, i, j) - want).abs() < 1e-11 / (r * r));
                }
            }
            assert!((k.scalar - 12.0 / (r * r)).abs() < 1e-10 / (r * r));
        }
    }
}

#[test]
fn hyperbolic_and_flat_space() {
    let m = builtin("h4", &[]).unwrap();
    for p in random_points(&m, 5, 1) {
        let k = curvature_at(&m, &p).unwrap();
        assert!((k.scalar + 12.0).abs() < 1e-10);
        assert!(k.weyl.max_abs() < 1e-10);
    }
    let m = builtin("flat4", &[]).unwrap();
    let k = curvature_at(&m, &ChartPoint::new(vec![0.3, -0.4, 2.0, 1.0])).unwrap();
    assert_eq!(k.riemann.max_abs(), 0.0);
}

#[test]
fn schwarzschild_is_ricci_flat_with_the_known_kretschmann_scalar() {
    // |Riem|² = 48 m² / r⁶
    for mass in [0.5, 1.0, 2.0] {
        let m = builtin("schwarzschild", &[("m".into(), mass)]).unwrap();
        for p in m.suggested_points() {
            let k = curvature_at(&m, p).unwrap();
            let r = p.coords()[0];
            let want = 48.0 * mass * mass / r.powi(6);
            assert!((k.riemann.norm_squared() - want).abs() < 1e-10 * want);
            assert!(k.ricci.abs().max() < 1e-12 / (mass * mass));
        }
    }
}
