//! Verification suites run by `fourfold verify`.

use fourfold::fourblocks::{
    classify, curvature_blocks, mu_homomorphism, rotate_blocks, spectral_report,
};
use fourfold::geomcore::{analyze_point, DEFAULT_TOL};
use fourfold::nalgebra::{DMatrix, Matrix4};
use fourfold::twistor::identities::{einstein_identity_residual, weyl_minus_identity_residual};
use fourfold::twistor::{twistor_report, INTEGRABILITY_TOL};
use fourfold::MetricField;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::format_f64;

/// Bound for residuals of exact identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Bound for formula vs. 6-dim engine agreement.
pub const CROSS_TOL: f64 = 1e-6;
/// `|∇Ric|` below this counts as Ricci-parallel.
pub const PARALLEL_TOL: f64 = 1e-5;
/// Twistor Einstein residual below this counts as Einstein.
pub const TWISTOR_EINSTEIN_TOL: f64 = 1e-6;
/// Bound for the Bochner–Weitzenböck balance (finite differences).
pub const BOCHNER_TOL: f64 = 1e-6;
/// Bound for the second fundamental form of the fibers.
pub const FIBER_GEODESIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Invariants,
    Identities,
    Twistor,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub metric: String,
    pub suite: String,
    pub check: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub tool_version: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let failed = checks.iter().filter(|c| !c.passed).count();
        Self {
            tool_version: crate::report::TOOL_VERSION.into(),
            passed: checks.len() - failed,
            failed,
            checks,
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{}  {:<14} {:<10} {:<32} {} (bound {}){}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.metric,
                c.suite,
                c.check,
                format_f64(c.value),
                format_f64(c.bound),
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!("  {}", c.detail)
                }
            ));
        }
        out.push_str(&format!("{} passed, {} failed\n", self.passed, self.failed));
        out
    }
}

struct Recorder<'a> {
    metric: &'a str,
    /// Bound for exact identities.
    tol: f64,
    checks: Vec<Check>,
}

impl Recorder<'_> {
    fn bound(&mut self, suite: &str, check: String, value: f64, bound: f64, detail: String) {
        self.checks.push(Check {
            metric: self.metric.into(),
            suite: suite.into(),
            check,
            value,
            bound,
            passed: value.is_finite() && value <= bound,
            detail,
        });
    }

    fn relation(
        &mut self,
        suite: &str,
        check: &str,
        value: f64,
        bound: f64,
        passed: bool,
        detail: String,
    ) {
        self.checks.push(Check {
            metric: self.metric.into(),
            suite: suite.into(),
            check: check.into(),
            value,
            bound,
            passed,
            detail,
        });
    }
}

/// Fixed rotations of the orthonormal frame, `exp` of antisymmetric generators.
pub fn test_rotations() -> Vec<Matrix4<f64>> {
    let gens = [
        [0.3, -1.1, 0.4, 0.9, -0.2, 0.7],
        [2.1, 0.5, -0.8, 0.1, 1.4, -0.6],
        [-0.4, 0.2, 2.7, -1.3, 0.8, 0.05],
    ];
    gens.iter()
        .map(|g| {
            let mut x = Matrix4::zeros();
            let mut k = 0;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    x[(i, j)] = g[k];
                    x[(j, i)] = -g[k];
                    k += 1;
                }
            }
            x.exp()
        })
        .collect()
}

fn invariants(m: &MetricField, rec: &mut Recorder) -> Result<(), CliError> {
    for (i, p) in m.suggested_points().iter().enumerate() {
        let a = analyze_point(m, p, DEFAULT_TOL)?;
        rec.bound(
            "invariants",
            format!("structure[{i}]"),
            a.residuals.max(),
            rec.tol,
            String::new(),
        );
        let blocks = curvature_blocks(&a.curvature, m.orientation())?;
        rec.bound(
            "invariants",
            format!("blocks[{i}]"),
            blocks.invariant_residual() / blocks.scale(),
            rec.tol,
            String::new(),
        );
    }
    Ok(())
}

fn identities(m: &MetricField, t: f64, rec: &mut Recorder) -> Result<(), CliError> {
    let o = m.orientation();
    for (i, p) in m.suggested_points().iter().enumerate() {
        let curv = analyze_point(m, p, DEFAULT_TOL)?.curvature;
        if curv.einstein_constant.is_some() {
            rec.bound(
                "identities",
                format!("weylMinusQ[{i}]"),
                weyl_minus_identity_residual(&curv, o)?,
                rec.tol,
                String::new(),
            );
            let r = einstein_identity_residual(&curv, o)?.unwrap_or(0.0);
            rec.bound(
                "identities",
                format!("einsteinQ[{i}]"),
                r,
                rec.tol,
                String::new(),
            );
        } else {
            rec.relation(
                "identities",
                &format!("weylMinusQ[{i}]"),
                0.0,
                rec.tol,
                true,
                "skipped: requires an Einstein metric".into(),
            );
        }
    }
    let p = &m.suggested_points()[0];
    let curv = analyze_point(m, p, DEFAULT_TOL)?.curvature;
    let blocks = curvature_blocks(&curv, o)?;
    let mut worst: f64 = 0.0;
    for a in test_rotations() {
        let rot = mu_homomorphism(&a)?;
        let moved = rotate_blocks(&blocks, &rot);
        let direct = curvature_blocks(&curv.rotated(&DMatrix::from_fn(4, 4, |i, j| a[(i, j)])), o)?;
        worst = worst.max((moved.matrix6() - direct.matrix6()).abs().max() / blocks.scale());
    }
    rec.bound(
        "identities",
        "transformLaw".into(),
        worst,
        rec.tol,
        String::new(),
    );
    // the balance needs a harmonic W⁻, which Einstein metrics have
    if curv.einstein_constant.is_some() {
        let spectral = spectral_report(m, p, &curv, &blocks)?;
        rec.bound(
            "identities",
            "bochnerWeitzenbock".into(),
            spectral.bochner_residual.map_or(0.0, f64::abs),
            BOCHNER_TOL,
            if spectral.accuracy_warning {
                "finite-difference accuracy warning".into()
            } else {
                String::new()
            },
        );
    } else {
        rec.relation(
            "identities",
            "bochnerWeitzenbock",
            0.0,
            BOCHNER_TOL,
            true,
            "skipped: requires an Einstein metric".into(),
        );
    }
    let ids = fourfold::twistor::verify_identities(m, p, t)?;
    rec.bound(
        "identities",
        "twistorScalar".into(),
        ids.scalar,
        CROSS_TOL,
        format!(
            "formula {} engine {}",
            format_f64(ids.scalar_formula),
            format_f64(ids.scalar_engine)
        ),
    );
    Ok(())
}

fn twistor(m: &MetricField, t: f64, samples: usize, rec: &mut Recorder) -> Result<(), CliError> {
    let p = &m.suggested_points()[0];
    let curv = analyze_point(m, p, DEFAULT_TOL)?.curvature;
    let class = classify(&curvature_blocks(&curv, m.orientation())?, DEFAULT_TOL);
    let ricci_flat = class.einstein && curv.scalar.abs() <= DEFAULT_TOL * class.scale;
    let r = twistor_report(m, p, t, samples, INTEGRABILITY_TOL)?;
    rec.bound(
        "twistor",
        "scalarFormulaVsEngine".into(),
        (r.scalar_formula - r.scalar_engine).abs(),
        CROSS_TOL,
        String::new(),
    );
    let expect = class.einstein && class.self_dual;
    rec.relation(
        "twistor",
        "fiberConstant<=>einstein&selfDual",
        r.fiber_scan.spread,
        r.fiber_scan.threshold,
        r.fiber_scan.constant == expect,
        format!(
            "fiberConstant={} einstein&selfDual={expect}",
            r.fiber_scan.constant
        ),
    );
    let expect = class.self_dual && ricci_flat;
    rec.relation(
        "twistor",
        "integrable<=>selfDual&ricciFlat",
        r.oneill.max_norm_over_fiber,
        INTEGRABILITY_TOL * curv.scale(),
        r.oneill.integrable == expect,
        format!(
            "integrable={} selfDual&ricciFlat={expect}",
            r.oneill.integrable
        ),
    );
    let parallel = r.ricci_parallel_residual <= PARALLEL_TOL;
    let twistor_einstein = r.einstein_residual <= TWISTOR_EINSTEIN_TOL;
    let expect = twistor_einstein || (class.self_dual && ricci_flat);
    rec.relation(
        "twistor",
        "ricciParallel<=>einstein|hyperkahler",
        r.ricci_parallel_residual,
        PARALLEL_TOL,
        parallel == expect,
        format!(
            "ricciParallelResidual={} twistorEinstein={twistor_einstein} selfDual&ricciFlat={}",
            format_f64(r.ricci_parallel_residual),
            class.self_dual && ricci_flat
        ),
    );
    rec.bound(
        "twistor",
        "totallyGeodesicFibers".into(),
        r.ricci.fiber_second_fundamental_form,
        FIBER_GEODESIC_TOL,
        String::new(),
    );
    rec.bound(
        "twistor",
        "horizontalMetric".into(),
        r.ricci.horizontal_residual,
        rec.tol,
        String::new(),
    );
    Ok(())
}

/// Run the selected suites on one metric, in a fixed order. `tol` bounds the
/// residuals of exact identities.
pub fn verify_metric(
    m: &MetricField,
    suite: Suite,
    t: f64,
    samples: usize,
    tol: f64,
) -> Result<Vec<Check>, CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Input(format!("tolerance {tol} must be positive")));
    }
    if m.dim() != 4 {
        return Err(CliError::Input(format!(
            "verify needs a 4-dimensional metric, got {}",
            m.dim()
        )));
    }
    if m.suggested_points().is_empty() {
        return Err(CliError::Input(format!(
            "metric `{}` has no suggested points",
            m.name()
        )));
    }
    let mut rec = Recorder {
        metric: m.name(),
        tol,
        checks: Vec::new(),
    };
    if suite.includes(Suite::Invariants) {
        invariants(m, &mut rec)?;
    }
    if suite.includes(Suite::Identities) {
        identities(m, t, &mut rec)?;
    }
    if suite.includes(Suite::Twistor) {
        twistor(m, t, samples, &mut rec)?;
    }
    Ok(rec.checks)
}
