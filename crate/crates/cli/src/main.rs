use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fourfold::geomcore::curvature_at;
use fourfold::metricdsl::{catalog_description, catalog_names, catalog_params};
use fourfold::twistor::{fiber_scan, twistor_frame_curvature, DEFAULT_SAMPLES, MIN_SAMPLES};
use fourfold_cli::output::{scan_csv, scan_summary_line, to_json};
use fourfold_cli::report::{build_report, ScanReport, TwistorOptions};
use fourfold_cli::source::{load_metric, resolve_points};
use fourfold_cli::verify::{verify_metric, Suite, VerifyReport};
use fourfold_cli::CliError;

#[derive(Parser)]
#[command(
    name = "fourfold",
    version,
    about = "Curvature of Riemannian four-manifolds and their twistor spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Curvature blocks, Weyl spectra and Einstein / self-duality flags.
    Classify(ClassifyArgs),
    /// Twistor scalar curvature over the fiber above one base point.
    TwistorScan(ScanArgs),
    /// Ricci analysis of the twistor metric on an explicit 6-dim chart.
    TwistorRicci(RicciArgs),
    /// Run verification suites; exits with 1 if any check fails.
    Verify(VerifyArgs),
    /// The built-in metrics.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List built-in metrics with their parameters.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct MetricArgs {
    /// Built-in metric name (see `catalog list`).
    metric: Option<String>,
    /// Read the metric from a document instead.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Override a parameter, `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Use this orientation (+1 or -1) instead of the declared one.
    #[arg(long, allow_hyphen_values = true)]
    orientation: Option<i8>,
    /// Chart point as comma-separated coordinates; repeatable.
    #[arg(long = "point", value_name = "X1,X2,..", allow_hyphen_values = true)]
    points: Vec<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    metric: MetricArgs,
    #[arg(long, default_value_t = fourfold::geomcore::DEFAULT_TOL)]
    tol: f64,
    /// Also run the twistor analysis with this parameter.
    #[arg(long = "t")]
    t: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = parse_samples)]
    samples: usize,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    metric: MetricArgs,
    #[arg(long = "t", default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = parse_samples)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct RicciArgs {
    #[command(flatten)]
    metric: MetricArgs,
    #[arg(long, default_value_t = fourfold::geomcore::DEFAULT_TOL)]
    tol: f64,
    #[arg(long = "t", default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = parse_samples)]
    samples: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Built-in metric name, or `all` for the whole catalog.
    metric: Option<String>,
    /// Read the metric from a document instead.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Override a parameter, `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Use this orientation (+1 or -1) instead of the declared one.
    #[arg(long, allow_hyphen_values = true)]
    orientation: Option<i8>,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Bound for the residuals of exact identities.
    #[arg(long, default_value_t = fourfold_cli::verify::IDENTITY_TOL)]
    tol: f64,
    #[arg(long = "t", default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = parse_samples)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    to_json(v).map_err(|e| CliError::Input(format!("serialization failed: {e}")))
}

fn load(a: &MetricArgs) -> Result<fourfold::MetricField, CliError> {
    load_metric(
        a.metric.as_deref(),
        a.spec.as_deref(),
        &a.params,
        a.orientation,
    )
}

fn parse_samples(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < MIN_SAMPLES {
        return Err(format!("need at least {MIN_SAMPLES} fiber samples"));
    }
    Ok(n)
}

fn check_t(t: f64) -> Result<(), CliError> {
    if !(t.is_finite() && t > 0.0) {
        return Err(CliError::Input(format!("--t must be positive, got {t}")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify(a) => {
            let m = load(&a.metric)?;
            let points = resolve_points(&m, &a.metric.points, true)?;
            if let Some(t) = a.t {
                check_t(t)?;
            }
            let twistor = a.t.map(|t| TwistorOptions {
                t,
                samples: a.samples,
            });
            let report = build_report("classify", &m, &points, a.tol, twistor)?;
            print!("{}", json(&report)?);
        }
        Command::TwistorScan(a) => {
            check_t(a.t)?;
            let m = load(&a.metric)?;
            let p = resolve_points(&m, &a.metric.points, false)?.remove(0);
            let curv = twistor_frame_curvature(&curvature_at(&m, &p)?, m.orientation())?;
            let scan = fiber_scan(&curv, a.t, a.samples)?;
            let report = ScanReport::new(&m, &p, &scan);
            match a.format {
                Format::Csv => {
                    print!("{}", scan_csv(&report));
                    eprintln!("{}", scan_summary_line(&report));
                }
                _ => print!("{}", json(&report)?),
            }
        }
        Command::TwistorRicci(a) => {
            check_t(a.t)?;
            let m = load(&a.metric)?;
            let points = resolve_points(&m, &a.metric.points, false)?;
            let twistor = Some(TwistorOptions {
                t: a.t,
                samples: a.samples,
            });
            let report = build_report("twistor-ricci", &m, &points, a.tol, twistor)?;
            print!("{}", json(&report)?);
        }
        Command::Verify(a) => {
            check_t(a.t)?;
            let metrics = if a.metric.as_deref() == Some("all") && a.spec.is_none() {
                catalog_names()
                    .into_iter()
                    .map(|n| load_metric(Some(n), None, &a.params, a.orientation))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                vec![load_metric(
                    a.metric.as_deref(),
                    a.spec.as_deref(),
                    &a.params,
                    a.orientation,
                )?]
            };
            let mut checks = Vec::new();
            for m in &metrics {
                checks.extend(verify_metric(m, a.suite, a.t, a.samples, a.tol)?);
            }
            let report = VerifyReport::new(checks);
            match a.format {
                Format::Json => print!("{}", json(&report)?),
                _ => print!("{}", report.table()),
            }
            if report.failed > 0 {
                return Err(CliError::Verification {
                    failed: report.failed,
                    total: report.checks.len(),
                });
            }
        }
        Command::Catalog {
            command: CatalogCommand::List { format },
        } => {
            let names = catalog_names();
            if format == Format::Json {
                let entries: Vec<serde_json::Value> = names
                    .iter()
                    .map(|n| {
                        let params: serde_json::Map<String, serde_json::Value> = catalog_params(n)
                            .unwrap_or_default()
                            .into_iter()
                            .map(|(k, v)| (k, v.into()))
                            .collect();
                        serde_json::json!({
                            "name": n,
                            "description": catalog_description(n).unwrap_or_default(),
                            "params": params,
                        })
                    })
                    .collect();
                print!("{}", json(&entries)?);
            } else {
                for n in names {
                    let params = catalog_params(n)?
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(" ");
                    println!(
                        "{n:<14} {:<12} {}",
                        params,
                        catalog_description(n).unwrap_or_default()
                    );
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
