//! Command-line front end: admissibility + natural-reductivity checks,
//! two-route flag-curvature scans, tensor-oracle verification, and a catalog
//! of reference models.
//!
//! Exit codes are a stable contract: 0 pass, 1 geometric fail, 2 input
//! error, 3 inconclusive verdict, 4 precondition gate (curvature on a model
//! that is not naturally reductive, without --force).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frhs_core::config::{seed_from_env, ToleranceOverrides};
use frhs_core::curvature::{scan, CurvatureError, ScanOptions, ScanTable};
use frhs_core::metric::AdmissibilityReport;
use frhs_core::model::{Model, ModelFile};
use frhs_core::reductivity::{reductivity_verdict, ReductivityReport, Verdict};
use frhs_core::verify::{verify_tensors, TensorVerification};
use frhs_core::catalog;

const EXIT_PASS: u8 = 0;
const EXIT_GEOMETRIC_FAIL: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_PRECONDITION_GATE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "frhs",
    version,
    about = "Invariant (α,β)-metrics on homogeneous spaces: admissibility, natural reductivity, and flag curvature from Lie-algebra data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// RNG seed (overrides the model file and the FRHS_SEED environment variable)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of seeded base-point samples
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Output format (table is advisory; json is the machine contract)
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(flatten)]
    tol: TolFlags,
}

/// Tolerance overrides; each mirrors a named entry of the run configuration.
#[derive(Args)]
struct TolFlags {
    /// Jacobi-identity residual allowed in the bracket table
    #[arg(long = "tol.jacobi", value_name = "TOL", global = true)]
    jacobi: Option<f64>,
    /// Riemannian natural-reductivity residual per sampled triple
    #[arg(long = "tol.nr", value_name = "TOL", global = true)]
    nr: Option<f64>,
    /// Finsler natural-reductivity residual per sampled pair
    #[arg(long = "tol.nr_finsler", value_name = "TOL", global = true)]
    nr_finsler: Option<f64>,
    /// Margin required of the convexity factor on the admissible range
    #[arg(long = "tol.phiprime", value_name = "TOL", global = true)]
    phiprime: Option<f64>,
    /// Smallest norm accepted for a flagpole
    #[arg(long = "tol.alpha_floor", value_name = "TOL", global = true)]
    alpha_floor: Option<f64>,
    /// Smallest denominator accepted in curvature ratios
    #[arg(long = "tol.denom_floor", value_name = "TOL", global = true)]
    denom_floor: Option<f64>,
    /// Allowed gap between the two flag-curvature routes
    #[arg(long = "tol.curvature_agree", value_name = "TOL", global = true)]
    curvature_agree: Option<f64>,
    /// Relative error allowed between the fundamental tensor and its oracle
    #[arg(long = "tol.g_fd_rel", value_name = "TOL", global = true)]
    g_fd_rel: Option<f64>,
    /// Relative error allowed between the Cartan tensor and its oracle
    #[arg(long = "tol.cartan_fd_rel", value_name = "TOL", global = true)]
    cartan_fd_rel: Option<f64>,
}

impl TolFlags {
    fn overrides(&self) -> ToleranceOverrides {
        ToleranceOverrides {
            jacobi: self.jacobi,
            nr: self.nr,
            nr_finsler: self.nr_finsler,
            phiprime: self.phiprime,
            alpha_floor: self.alpha_floor,
            denom_floor: self.denom_floor,
            curvature_agree: self.curvature_agree,
            g_fd_rel: self.g_fd_rel,
            cartan_fd_rel: self.cartan_fd_rel,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a model and decide natural reductivity
    Check {
        /// Model file (JSON)
        model: PathBuf,
    },
    /// Scan flag curvature along two independent routes
    Curvature {
        /// Model file (JSON)
        model: PathBuf,
        /// Number of flagpole samples
        #[arg(long, default_value_t = 16)]
        ny: usize,
        /// Number of plane mates per flagpole
        #[arg(long, default_value_t = 16)]
        nplanes: usize,
        /// Write the CSV scan table to this path
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Scan even when the model is not naturally reductive
        #[arg(long)]
        force: bool,
        /// Evaluate the numerator pairing by finite differences for a fully
        /// independent route
        #[arg(long)]
        fd_numerator: bool,
    },
    /// Compare closed-form tensors against finite-difference oracles
    VerifyTensors {
        /// Model file (JSON)
        model: PathBuf,
    },
    /// Built-in reference models
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print ids and one-line notes
    List,
    /// Write a catalog model file
    Export {
        /// Catalog id
        id: String,
        /// Destination path (JSON)
        path: PathBuf,
    },
}

/// A failure that maps to a contract exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(err: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT_ERROR,
            message: err.to_string(),
        }
    }
}

impl From<CurvatureError> for Failure {
    fn from(err: CurvatureError) -> Self {
        let code = match err {
            CurvatureError::NotNaturallyReductive { .. } => EXIT_PRECONDITION_GATE,
            _ => EXIT_INPUT_ERROR,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Check { model } => cmd_check(model, &cli.common),
        Command::Curvature {
            model,
            ny,
            nplanes,
            out,
            force,
            fd_numerator,
        } => cmd_curvature(
            model,
            &cli.common,
            ScanOptions {
                n_y: *ny,
                n_planes: *nplanes,
                force: *force,
                fd_numerator: *fd_numerator,
            },
            out.as_deref(),
        ),
        Command::VerifyTensors { model } => cmd_verify_tensors(model, &cli.common),
        Command::Catalog { action } => cmd_catalog(action, &cli.common),
    }
}

/// Load a model and fold in command-line overrides. Precedence for the seed:
/// --seed, then the model file, then FRHS_SEED, then the default. Tolerance
/// flags override file values and take effect before validation, so they
/// also govern validation-time residual checks.
fn load_model(path: &Path, common: &Common) -> Result<Model, Failure> {
    let mut file = ModelFile::load(path).map_err(Failure::input)?;
    let mut overrides = file.config.take().unwrap_or_default();
    if let Some(seed) = common.seed {
        overrides.seed = Some(seed);
    } else if overrides.seed.is_none() {
        overrides.seed = seed_from_env();
    }
    if let Some(n) = common.samples {
        overrides.n_samples = Some(n);
    }
    overrides.tolerances.overlay(&common.tol.overrides());
    file.config = Some(overrides);
    Model::assemble(&file).map_err(Failure::input)
}

fn print_json(value: &serde_json::Value) {
    // to_string_pretty cannot fail on Value trees built from Serialize types
    println!("{}", serde_json::to_string_pretty(value).expect("valid JSON tree"));
}

fn json_of<T: serde::Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn render_admissibility(a: &AdmissibilityReport) {
    println!("admissibility");
    println!("  family              {}", a.family);
    match a.b0 {
        Some(b0) => println!("  drift norm          {:.6} (bound {b0})", a.drift_norm),
        None => println!("  drift norm          {:.6} (unbounded family)", a.drift_norm),
    }
    println!("  norm bound          {}", pass_str(a.norm_ok));
    match (a.convexity_min, a.convexity_argmin) {
        (Some(min), Some(at)) => println!(
            "  strong convexity    min {min:.6e} at s = {at:.4} ({} grid points, {} outside the domain)",
            a.grid_points, a.grid_skipped
        ),
        _ => println!(
            "  strong convexity    no admissible grid points ({} examined)",
            a.grid_points
        ),
    }
    if let Some(phi_min) = a.phi_min {
        println!("  phi positivity      min {phi_min:.6e}");
    }
    println!("  pass                {}", pass_str(a.pass));
}

fn render_reductivity(r: &ReductivityReport) {
    println!("reductivity");
    println!(
        "  riemannian          residual {:.3e}  {}{}",
        r.riemannian_nr.max_residual,
        pass_str(r.riemannian_nr.pass),
        r.riemannian_nr
            .witness
            .map(|[x, u, v]| format!("  (worst triple x=e{x} u=e{u} v=e{v})"))
            .unwrap_or_default()
    );
    println!(
        "  skew-adjointness    residual {:.3e}  {}{}",
        r.skew_adjoint.max_residual,
        pass_str(r.skew_adjoint.pass),
        r.skew_adjoint
            .witness
            .map(|x| format!("  (worst generator e{x})"))
            .unwrap_or_default()
    );
    println!(
        "  drift orthogonality residual {:.3e}  {}{}",
        r.drift_orthogonal.max_residual,
        pass_str(r.drift_orthogonal.pass),
        r.drift_orthogonal
            .witness
            .map(|[u, v]| format!("  (worst pair u=e{u} v=e{v})"))
            .unwrap_or_default()
    );
    println!("  certificate         {}", pass_str(r.certificate));
    print!(
        "  sampled criterion   residual {:.3e}  {}  ({} samples, {} rejected",
        r.finsler_nr.max_residual,
        pass_str(r.finsler_nr.pass),
        r.finsler_nr.samples_used,
        r.finsler_nr.samples_rejected,
    );
    if r.finsler_nr.low_phi_derivative_samples > 0 {
        print!(
            ", {} with tiny phi-derivative",
            r.finsler_nr.low_phi_derivative_samples
        );
    }
    println!(")");
    if let Some(w) = &r.finsler_nr.witness {
        println!(
            "                      worst at y = [{}], triple x=e{} u=e{} v=e{}",
            join_coords(&w.y),
            w.triple[0],
            w.triple[1],
            w.triple[2]
        );
    }
    println!(
        "  geodesic vectors    residual {:.3e}  {}  (route delta {:.3e})",
        r.geodesic_vectors.max_residual,
        pass_str(r.geodesic_vectors.pass),
        r.geodesic_vectors.route_delta
    );
    for note in &r.notes {
        println!("  note: {note}");
    }
    println!("verdict: {:?}", r.verdict);
}

fn join_coords(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.4}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn pass_str(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn cmd_check(path: &Path, common: &Common) -> Result<u8, Failure> {
    if common.format == Format::Csv {
        return Err(Failure::input(
            "csv format applies to curvature scans; use table or json here",
        ));
    }
    let model = load_model(path, common)?;
    let admissibility = model.metric.check_admissibility(model.config.convexity_grid);
    let reductivity = reductivity_verdict(&model, &model.config).map_err(Failure::input)?;
    match common.format {
        Format::Json => print_json(&serde_json::json!({
            "admissibility": json_of(&admissibility),
            "reductivity": json_of(&reductivity),
        })),
        _ => {
            render_admissibility(&admissibility);
            render_reductivity(&reductivity);
        }
    }
    Ok(match reductivity.verdict {
        Verdict::NaturallyReductive => EXIT_PASS,
        Verdict::NotNaturallyReductive => EXIT_GEOMETRIC_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn render_scan_summary(table: &ScanTable) {
    let s = &table.summary;
    println!("curvature scan");
    println!("  rows                {}", s.rows);
    if let (Some(k_min), Some(k_max)) = (s.k_min, s.k_max) {
        println!("  K range             [{k_min:.12}, {k_max:.12}]");
    }
    if let Some(d) = s.max_delta {
        println!("  max route delta     {d:.3e}  {}", pass_str(s.delta_pass));
    }
    if let Some(d) = s.max_reduced_delta {
        println!("  max reduced delta   {d:.3e}");
    }
    if s.skipped_degenerate > 0 {
        println!("  degenerate skipped  {}", s.skipped_degenerate);
    }
    if s.skipped_domain > 0 {
        println!("  domain skipped      {}", s.skipped_domain);
    }
    if s.forced {
        println!("  FORCED: model is not naturally reductive; values are formal");
    }
    if s.fd_numerator {
        println!("  numerator pairing evaluated by finite differences");
    }
}

fn cmd_curvature(
    path: &Path,
    common: &Common,
    opts: ScanOptions,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let model = load_model(path, common)?;
    let reductivity = reductivity_verdict(&model, &model.config).map_err(Failure::input)?;
    let table = scan(&model, &model.config, reductivity.verdict, &opts)?;
    if let Some(out_path) = out {
        std::fs::write(out_path, table.to_csv()).map_err(Failure::input)?;
    }
    match common.format {
        Format::Csv => print!("{}", table.to_csv()),
        Format::Json => print_json(&serde_json::json!({"summary": json_of(&table.summary)})),
        Format::Table => render_scan_summary(&table),
    }
    Ok(if table.summary.delta_pass {
        EXIT_PASS
    } else {
        EXIT_GEOMETRIC_FAIL
    })
}

fn render_verification(v: &TensorVerification) {
    println!("tensor verification");
    println!(
        "  samples             {} used, {} rejected while drawing",
        v.samples_used, v.samples_rejected
    );
    if v.fd_domain_skips > 0 {
        println!("  stencil skips       {} (probe left the domain)", v.fd_domain_skips);
    }
    if v.cartan_edge_skips > 0 {
        println!(
            "  edge skips          {} samples too close to the domain boundary for the third-derivative stencil",
            v.cartan_edge_skips
        );
    }
    println!(
        "  fundamental tensor  max rel err {:.3e}  {}",
        v.g_max_rel_err,
        pass_str(v.g_pass)
    );
    println!(
        "  cartan tensor       max rel err {:.3e}  {}",
        v.cartan_max_rel_err,
        pass_str(v.cartan_pass)
    );
    println!("  pass                {}", pass_str(v.pass));
}

fn cmd_verify_tensors(path: &Path, common: &Common) -> Result<u8, Failure> {
    if common.format == Format::Csv {
        return Err(Failure::input(
            "csv format applies to curvature scans; use table or json here",
        ));
    }
    let model = load_model(path, common)?;
    let report = verify_tensors(&model, &model.config).map_err(Failure::input)?;
    match common.format {
        Format::Json => print_json(&json_of(&report)),
        _ => render_verification(&report),
    }
    Ok(if report.pass {
        EXIT_PASS
    } else {
        EXIT_GEOMETRIC_FAIL
    })
}

fn cmd_catalog(action: &CatalogAction, common: &Common) -> Result<u8, Failure> {
    match action {
        CatalogAction::List => {
            if common.format == Format::Json {
                let rows: Vec<serde_json::Value> = catalog::entries()
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "id": e.id,
                            "summary": e.summary,
                            "verdict": json_of(&e.verdict),
                            "constant_curvature": e.constant_curvature,
                        })
                    })
                    .collect();
                print_json(&serde_json::Value::Array(rows));
            } else {
                for e in catalog::entries() {
                    println!("{:<22} {}", e.id, e.summary);
                }
            }
            Ok(EXIT_PASS)
        }
        CatalogAction::Export { id, path } => {
            let file = catalog::model_file(id).map_err(Failure::input)?;
            file.save(path).map_err(Failure::input)?;
            eprintln!("wrote {}", path.display());
            Ok(EXIT_PASS)
        }
    }
}
