//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;

use fourfold::fourblocks::{
    algebraic_spectrum, curvature_blocks, lift_p_rotation, mu_homomorphism, rotate_blocks,
    spectral_report, sym3_eigenvalues,
};
use fourfold::geomcore::{analyze_point, curvature_at, DEFAULT_TOL};
use fourfold::metricdsl::{builtin, catalog_names};
use fourfold::nalgebra::{DMatrix, Matrix3, Matrix4, Quaternion, UnitQuaternion, Vector3};
use fourfold::twistor::identities::{einstein_identity_residual, weyl_minus_identity_residual};
use fourfold::twistor::{
    fiber_scan, oneill_tensor, q_tensors, twistor_frame_curvature, twistor_report, twistor_scalar,
    verify_identities, INTEGRABILITY_TOL,
};
use fourfold::{CurvatureData, MetricField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn metric(name: &str) -> MetricField {
    builtin(name, &[]).expect("catalog metric")
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// 1. Unit S⁴: S = 12, W = 0, A = C = I, B = 0.
fn constant_curvature_pin() -> Check {
    let tol = 1e-9;
    let m = metric("s4");
    let mut worst: f64 = 0.0;
    for p in m.suggested_points() {
        let curv = curvature_at(&m, p).map_err(err)?;
        let b = curvature_blocks(&curv, m.orientation()).map_err(err)?;
        let id = Matrix3::identity();
        worst = worst
            .max((curv.scalar - 12.0).abs())
            .max(curv.weyl.max_abs())
            .max((b.a - id).abs().max())
            .max((b.c - id).abs().max())
            .max(b.b.abs().max());
    }
    ensure(
        worst <= tol,
        format!("max deviation {worst:.2e} (tol {tol:.0e})"),
    )
}

/// 2. CP²: Kähler-side Weyl eigenvalues {4, −2, −2}, S = 24.
fn kahler_spectrum() -> Check {
    let tol = 1e-8;
    let m = metric("cp2");
    let mut worst: f64 = 0.0;
    for p in m.suggested_points() {
        let curv = curvature_at(&m, p).map_err(err)?;
        let s = algebraic_spectrum(&curvature_blocks(&curv, m.orientation()).map_err(err)?);
        let e = s.weyl_plus_eigen;
        worst = worst
            .max((e[0] - 4.0).abs())
            .max((e[1] + 2.0).abs())
            .max((e[2] + 2.0).abs())
            .max((curv.scalar - 24.0).abs());
    }
    ensure(
        worst <= tol,
        format!("max deviation {worst:.2e} (tol {tol:.0e})"),
    )
}

/// 3. S²×S²: eig(A) = {1, 0, 0}, S = 4.
fn product_spectrum() -> Check {
    let tol = 1e-8;
    let m = metric("s2xs2");
    let mut worst: f64 = 0.0;
    for p in m.suggested_points() {
        let curv = curvature_at(&m, p).map_err(err)?;
        let b = curvature_blocks(&curv, m.orientation()).map_err(err)?;
        let e = sym3_eigenvalues(&b.a);
        worst = worst
            .max((e[0] - 1.0).abs())
            .max(e[1].abs())
            .max(e[2].abs())
            .max((curv.scalar - 4.0).abs());
    }
    ensure(
        worst <= tol,
        format!("max deviation {worst:.2e} (tol {tol:.0e})"),
    )
}

/// 4. Closed-form twistor scalar vs. the 6-dim engine.
fn scalar_cross_validation() -> Check {
    let tol = 1e-6;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for name in ["flat4", "s4", "s2xs2", "schwarzschild", "eguchi_hanson"] {
        let m = metric(name);
        for t in [0.5, 1.0, 2.0] {
            for p in m.suggested_points() {
                let ids = verify_identities(&m, p, t).map_err(err)?;
                worst = worst.max(ids.scalar);
                count += 1;
            }
        }
    }
    ensure(
        worst <= tol,
        format!("max |formula - engine| {worst:.2e} over {count} cases (tol {tol:.0e})"),
    )
}

fn twistor_curvature(m: &MetricField, p: &fourfold::ChartPoint) -> Result<CurvatureData, String> {
    let curv = curvature_at(m, p).map_err(err)?;
    twistor_frame_curvature(&curv, m.orientation()).map_err(err)
}

/// Extremes of `S̄` over the fiber by sampling SO(3) densely and polishing
/// the best samples with a shrinking-step local search. It only evaluates
/// `S̄` at rotated frames and never uses the quadratic-form closed form.
fn sampled_extremes(curv_tw: &CurvatureData, t: f64) -> Result<(f64, f64), String> {
    let f = |q: &UnitQuaternion<f64>| -> Result<f64, String> {
        let a = lift_p_rotation(q.to_rotation_matrix().matrix()).a;
        let rotated = curv_tw.rotated(&DMatrix::from_fn(4, 4, |i, j| a[(i, j)]));
        twistor_scalar(curv_tw.scalar, &q_tensors(&rotated).map_err(err)?, t).map_err(err)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut samples = Vec::new();
    for _ in 0..4000 {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let q = Quaternion::new(v[0], v[1], v[2], v[3]);
        if q.norm() > 1e-3 {
            let q = UnitQuaternion::from_quaternion(q);
            samples.push((f(&q)?, q));
        }
    }
    let polish = |start: UnitQuaternion<f64>, sign: f64| -> Result<f64, String> {
        let mut best = start;
        let mut value = sign * f(&best)?;
        let mut step = 0.1;
        while step > 1e-9 {
            let mut improved = false;
            for axis in [Vector3::x(), Vector3::y(), Vector3::z()] {
                for dir in [1.0, -1.0] {
                    let cand = UnitQuaternion::from_scaled_axis(axis * (dir * step)) * best;
                    let v = sign * f(&cand)?;
                    if v > value {
                        value = v;
                        best = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        Ok(sign * value)
    };
    let argmin = samples.iter().min_by(|a, b| a.0.total_cmp(&b.0)).unwrap().1;
    let argmax = samples.iter().max_by(|a, b| a.0.total_cmp(&b.0)).unwrap().1;
    Ok((polish(argmin, -1.0)?, polish(argmax, 1.0)?))
}

/// 5. Fiber constancy verdicts, and the S²×S² range at t = 1.
fn fiber_constancy() -> Check {
    let tol = 1e-6;
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, want) in [
        ("s4", true),
        ("cp2", true),
        ("eguchi_hanson", true),
        ("s2xs2", false),
        ("schwarzschild", false),
    ] {
        let m = metric(name);
        for p in m.suggested_points() {
            let scan = fiber_scan(&twistor_curvature(&m, p)?, 1.0, 64).map_err(err)?;
            if scan.constant != want {
                ok = false;
                lines.push(format!(
                    "{name} at {:?}: constant={}",
                    p.coords(),
                    scan.constant
                ));
            }
        }
    }
    let m = metric("s2xs2");
    let tw = twistor_curvature(&m, &m.suggested_points()[0])?;
    let scan = fiber_scan(&tw, 1.0, 64).map_err(err)?;
    let (lo, hi) = sampled_extremes(&tw, 1.0)?;
    let range_ok = (scan.min - 5.0).abs() <= tol
        && (scan.max - 6.0).abs() <= tol
        && (lo - 5.0).abs() <= tol
        && (hi - 6.0).abs() <= tol;
    ok &= range_ok;
    lines.push(format!(
        "s2xs2 scan [{:.9}, {:.9}], sampled oracle [{lo:.9}, {hi:.9}] (tol {tol:.0e})",
        scan.min, scan.max
    ));
    ensure(ok, lines.join("; "))
}

/// 6. S⁴ with S = 12/t²: twistor metric Einstein with scalar 12/t².
fn einstein_twistor_sphere() -> Check {
    let tol = 1e-6;
    let mut worst_res: f64 = 0.0;
    let mut worst_scalar: f64 = 0.0;
    for t in [0.5, 1.0, 2.0] {
        let m = builtin("s4", &[("r".into(), t)]).map_err(err)?;
        for p in m.suggested_points().iter().take(2) {
            let r = twistor_report(&m, p, t, 16, INTEGRABILITY_TOL).map_err(err)?;
            worst_res = worst_res.max(r.einstein_residual);
            let want = 12.0 / (t * t);
            worst_scalar = worst_scalar
                .max((r.scalar_engine - want).abs())
                .max((r.scalar_formula - want).abs());
        }
    }
    ensure(
        worst_res <= tol && worst_scalar <= tol,
        format!("einsteinResidual {worst_res:.2e}, |S̄ - 12/t²| {worst_scalar:.2e} (tol {tol:.0e})"),
    )
}

/// 7. O'Neill tensor vanishes exactly on the self-dual Ricci-flat metrics.
fn oneill_vanishing() -> Check {
    let (zero_tol, nonzero) = (1e-8, 1e-3);
    let mut largest_zero: f64 = 0.0;
    let mut smallest_nonzero = f64::INFINITY;
    for (name, vanishes) in [
        ("flat4", true),
        ("eguchi_hanson", true),
        ("schwarzschild", false),
        ("s2xs2", false),
        ("s4", false),
        ("cp2", false),
    ] {
        let m = metric(name);
        for p in m.suggested_points() {
            let tw = twistor_curvature(&m, p)?;
            let scan = fiber_scan(&tw, 1.0, 64).map_err(err)?;
            let o = oneill_tensor(&tw, &scan, INTEGRABILITY_TOL).map_err(err)?;
            let size = o.max_norm_over_fiber.max(o.max_over_samples);
            if vanishes {
                largest_zero = largest_zero.max(size);
            } else {
                smallest_nonzero = smallest_nonzero.min(size);
            }
        }
    }
    ensure(
        largest_zero <= zero_tol && smallest_nonzero > nonzero,
        format!(
            "flat/EH max {largest_zero:.2e} (tol {zero_tol:.0e}); others min {smallest_nonzero:.2e} (> {nonzero:.0e})"
        ),
    )
}

/// 8. Ricci-parallel twistor metric on flat and Eguchi–Hanson only.
fn ricci_parallel() -> Check {
    let (zero_tol, nonzero) = (1e-5, 1e-3);
    let mut largest_zero: f64 = 0.0;
    let mut smallest_nonzero = f64::INFINITY;
    for (name, parallel) in [
        ("flat4", true),
        ("eguchi_hanson", true),
        ("schwarzschild", false),
        ("s2xs2", false),
    ] {
        let m = metric(name);
        for p in m.suggested_points() {
            let r = twistor_report(&m, p, 1.0, 16, INTEGRABILITY_TOL).map_err(err)?;
            if parallel {
                largest_zero = largest_zero.max(r.ricci_parallel_residual);
            } else {
                smallest_nonzero = smallest_nonzero.min(r.ricci_parallel_residual);
            }
        }
    }
    ensure(
        largest_zero <= zero_tol && smallest_nonzero > nonzero,
        format!(
            "flat/EH max {largest_zero:.2e} (tol {zero_tol:.0e}); others min {smallest_nonzero:.2e} (> {nonzero:.0e})"
        ),
    )
}

fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let mut x = Matrix4::zeros();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = rng.gen_range(-3.2..3.2);
            x[(i, j)] = v;
            x[(j, i)] = -v;
        }
    }
    x.exp()
}

/// 9. Block transformation laws under random rotations; μ properties.
fn equivariance() -> Check {
    let (tol, mu_tol) = (1e-9, 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for name in catalog_names() {
        let m = metric(name);
        let curv = curvature_at(&m, &m.suggested_points()[1]).map_err(err)?;
        let blocks = curvature_blocks(&curv, m.orientation()).map_err(err)?;
        for _ in 0..100 {
            let a = random_rotation(&mut rng);
            let moved = rotate_blocks(&blocks, &mu_homomorphism(&a).map_err(err)?);
            let direct = curvature_blocks(
                &curv.rotated(&DMatrix::from_fn(4, 4, |i, j| a[(i, j)])),
                m.orientation(),
            )
            .map_err(err)?;
            worst = worst.max((moved.matrix6() - direct.matrix6()).abs().max() / blocks.scale());
        }
    }
    let mut mu_worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b) = (random_rotation(&mut rng), random_rotation(&mut rng));
        let ab = mu_homomorphism(&(a * b)).map_err(err)?;
        let prod = mu_homomorphism(&a)
            .map_err(err)?
            .compose(&mu_homomorphism(&b).map_err(err)?);
        let neg = mu_homomorphism(&(-a)).map_err(err)?;
        let mu_a = mu_homomorphism(&a).map_err(err)?;
        mu_worst = mu_worst
            .max((ab.a_plus - prod.a_plus).abs().max())
            .max((ab.a_minus - prod.a_minus).abs().max())
            .max((neg.a_plus - mu_a.a_plus).abs().max())
            .max((neg.a_minus - mu_a.a_minus).abs().max());
    }
    let minus = mu_homomorphism(&-Matrix4::identity()).map_err(err)?;
    let kernel = (minus.a_plus - Matrix3::identity()).abs().max()
        + (minus.a_minus - Matrix3::identity()).abs().max();
    ensure(
        worst <= tol && mu_worst <= mu_tol && kernel <= mu_tol,
        format!(
            "blocks {worst:.2e} (tol {tol:.0e}); homomorphism/parity {mu_worst:.2e}, kernel {kernel:.2e} (tol {mu_tol:.0e})"
        ),
    )
}

/// 10. |W⁻|² = Σ|q|² − S²/12 and the Einstein identity in the diagonalizing frame.
fn weyl_q_identities() -> Check {
    let tol = 1e-9;
    let mut weyl_sum: f64 = 0.0;
    let mut einstein: f64 = 0.0;
    let mut einstein_count = 0;
    for name in catalog_names() {
        let m = metric(name);
        for p in m.suggested_points() {
            let curv = curvature_at(&m, p).map_err(err)?;
            weyl_sum =
                weyl_sum.max(weyl_minus_identity_residual(&curv, m.orientation()).map_err(err)?);
            if let Some(r) = einstein_identity_residual(&curv, m.orientation()).map_err(err)? {
                einstein = einstein.max(r);
                einstein_count += 1;
            }
        }
    }
    ensure(
        weyl_sum <= tol && einstein <= tol && einstein_count > 0,
        format!(
            "W- sum {weyl_sum:.2e}, einstein {einstein:.2e} at {einstein_count} points (tol {tol:.0e})"
        ),
    )
}

/// 11. Bochner–Weitzenböck balance on the locally symmetric metrics.
fn bochner() -> Check {
    let tol = 1e-6;
    let alg_tol = 1e-9;
    let mut worst: f64 = 0.0;
    let mut alg: f64 = 0.0;
    for (name, orientation) in [("s2xs2", 1), ("s4", 1), ("cp2", 1), ("cp2", -1)] {
        let m = metric(name).with_orientation(orientation);
        for p in m.suggested_points().iter().take(3) {
            let curv = curvature_at(&m, p).map_err(err)?;
            let blocks = curvature_blocks(&curv, orientation).map_err(err)?;
            let s = spectral_report(&m, p, &curv, &blocks).map_err(err)?;
            worst = worst.max(s.bochner_residual.map(f64::abs).unwrap_or(f64::INFINITY));
            // (S/2)|W⁻|² = 18 det W⁻, from the eigenvalues
            let e = s.weyl_minus_eigen;
            let lhs = curv.scalar / 2.0 * e.iter().map(|x| x * x).sum::<f64>();
            let rhs = 18.0 * e.iter().product::<f64>();
            alg = alg.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
        }
    }
    ensure(
        worst <= tol && alg <= alg_tol,
        format!(
            "residual {worst:.2e} (tol {tol:.0e}); algebraic balance {alg:.2e} (tol {alg_tol:.0e})"
        ),
    )
}

/// 12. Structure equations and curvature symmetries at every suggested point.
fn structure_equations() -> Check {
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for name in catalog_names() {
        let m = metric(name);
        for p in m.suggested_points() {
            let a = analyze_point(&m, p, DEFAULT_TOL).map_err(err)?;
            worst = worst.max(a.residuals.max());
            count += 1;
        }
    }
    ensure(
        worst <= tol,
        format!("max residual {worst:.2e} over {count} points (tol {tol:.0e})"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("constant-curvature pin (S4)", constant_curvature_pin),
        ("Kahler Weyl spectrum (CP2)", kahler_spectrum),
        ("block spectrum (S2xS2)", product_spectrum),
        ("twistor scalar formula vs engine", scalar_cross_validation),
        ("fiber constancy", fiber_constancy),
        ("Einstein twistor metric of S4", einstein_twistor_sphere),
        ("O'Neill tensor", oneill_vanishing),
        ("Ricci-parallel twistor metric", ricci_parallel),
        ("transformation-law equivariance", equivariance),
        ("Weyl / q-tensor identities", weyl_q_identities),
        ("Bochner-Weitzenbock balance", bochner),
        ("structure equations", structure_equations),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
