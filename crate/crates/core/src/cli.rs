//! Command-line front end: `gen`, `pipeline` and `lattice`.
//!
//! Exit codes: 0 success, 2 generation failure, 3 pipeline stage failure,
//! 4 bad input.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclide::{family_intersection, implicitize, Cyclide, Family, PencilCertificate, MIN_SAMPLES};
use crate::error::Error;
use crate::generate::{random_motion, GenConstraints};
use crate::orbit::{eval_biquadratic, orbit_of_quadric, BilinearMotion};
use crate::picard::{conic_classes, decompositions_of_minus_2kappa, pair, pair_product_census, Census, DivisorClass};
use crate::quatfactor::{factor, to_motion, BilinearQuatPoly, FactorizationCertificate, ACCEPTED, DEFAULT_RESTARTS};
use crate::reconstruct::{check_not_in_Uo, compare_with_motion, reconstruct_quadric, UoMembership};
use crate::scalar::{Rational, Scalar};

pub const EXIT_GENERATION: i32 = 2;
pub const EXIT_STAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

pub const DEFAULT_FLOAT_TOL: f64 = 1e-7;
pub const DEFAULT_POINTS: usize = 200;
const POINT_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "darboux", version, about = "Ruled quadrics in the Study quadric and Darboux cyclides in S³")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a random bilinear motion with H((1:0),(1:0)) = 𝔢.
    Gen(GenArgs),
    /// Orbit, implicitize, reconstruct and factor a motion.
    Pipeline(PipelineArgs),
    /// Conic classes and pairing census of the Picard lattice.
    Lattice(LatticeArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Only rotations about axes through the origin (b ≡ 0).
    #[arg(long)]
    pub rotations_only: bool,
    /// Permit coefficient 3-spaces inside the Study quadric.
    #[arg(long)]
    pub allow_uo: bool,
    /// Output file (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    /// Motion JSON as written by `gen`.
    pub motion: PathBuf,
    #[arg(long, value_enum, default_value_t = ScalarMode::Exact)]
    pub scalar: ScalarMode,
    /// Float tolerance for the subspace distance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for the factorization restarts and the exported points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Implicitization sample count.
    #[arg(long, default_value_t = MIN_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    /// Number of exported surface points.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    /// Output directory for cyclide.json, report.json, points.csv and points.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    /// JSON array of classes, each six integers.
    #[arg(long)]
    pub subset: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated pipeline settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scalar: ScalarMode,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub restarts: usize,
    pub points: usize,
}

impl RunConfig {
    pub fn from_args(a: &PipelineArgs) -> Result<Self, CliError> {
        let tol = a.tol.unwrap_or(match a.scalar {
            ScalarMode::Exact => 0.0,
            ScalarMode::Float => DEFAULT_FLOAT_TOL,
        });
        if a.tol.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return Err(CliError::Input("--tol must be positive".into()));
        }
        if a.samples < MIN_SAMPLES {
            return Err(CliError::Input(format!("--samples must be at least {MIN_SAMPLES}")));
        }
        if a.restarts == 0 {
            return Err(CliError::Input("--restarts must be positive".into()));
        }
        Ok(RunConfig { scalar: a.scalar, tol, seed: a.seed, samples: a.samples, restarts: a.restarts, points: a.points })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("generation failed: {0}")]
    Generation(Error),
    #[error("stage {stage} failed: {error}")]
    Stage { stage: &'static str, error: Error },
    #[error("bad input: {0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Generation(_) => EXIT_GENERATION,
            CliError::Stage { .. } => EXIT_STAGE,
            CliError::Input(_) => EXIT_INPUT,
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_gen(seed: u64, constraints: GenConstraints) -> Result<BilinearMotion<Rational>, CliError> {
    random_motion(seed, constraints).map_err(CliError::Generation)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionSummary {
    pub subspace_distance: f64,
    pub rulings_matched: bool,
    pub families_noncospherical: bool,
    pub uo: UoMembership,
    pub steps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorSummary {
    pub certificate: FactorizationCertificate,
    pub pencil_match: bool,
    #[serde(rename = "A")]
    pub a: BilinearQuatPoly<f64>,
    #[serde(rename = "B")]
    pub b: BilinearQuatPoly<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointsSummary {
    pub count: usize,
    pub max_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub config: RunConfig,
    pub stages: Vec<String>,
    pub cyclide: PencilCertificate,
    pub family_intersection: usize,
    pub reconstruction: ReconstructionSummary,
    pub factorization: FactorSummary,
    pub points: PointsSummary,
    pub roundtrip: Verdict,
}

/// Sampled surface points: homogeneous coordinates scaled to max-abs 1 and
/// their stereographic images.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub homogeneous: Vec<[f64; 5]>,
    pub euclidean: Vec<[f64; 3]>,
}

pub struct PipelineOutput {
    pub report: PipelineReport,
    pub cyclide_json: String,
    pub points: PointCloud,
}

fn stage<T>(name: &'static str, r: crate::Result<T>) -> Result<T, CliError> {
    r.map_err(|error| CliError::Stage { stage: name, error })
}

fn sample_cloud(d: &Cyclide<f64>, seed: u64, n: usize) -> (PointCloud, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cloud = PointCloud { homogeneous: Vec::new(), euclidean: Vec::new() };
    let mut worst: f64 = 0.0;
    let mut guard = 0;
    while cloud.homogeneous.len() < n && guard < 20 * n.max(1) {
        guard += 1;
        let th: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let ph: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let Ok(p) = eval_biquadratic(&d.param, &[th.cos(), th.sin()], &[ph.cos(), ph.sin()]) else { continue };
        let Some(v) = p.euclidean() else { continue };
        let m = p.0.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        let h = p.0.map(|c| c / m);
        worst = d.pencil.iter().map(|q| q.relative_residual(&h)).fold(worst, f64::max);
        cloud.homogeneous.push(h);
        cloud.euclidean.push(v);
    }
    (cloud, worst)
}

fn run_pipeline<S: Scalar>(m: &BilinearMotion<S>, cfg: &RunConfig) -> Result<PipelineOutput, CliError> {
    let mut stages = Vec::new();
    let x = stage("orbit", orbit_of_quadric(m))?;
    stages.push("orbit".to_string());
    let d = stage("implicitize", implicitize(&x, cfg.samples))?;
    stages.push("implicitize".to_string());
    let (fs, ft) = (d.family(Family::S), d.family(Family::T));
    let meet = stage("families", family_intersection(&fs, &ft))?;
    if meet != 1 {
        return Err(CliError::Stage { stage: "families", error: Error::FamiliesNotTransversal(meet) });
    }
    stages.push("families".to_string());
    let rec = stage("reconstruct", reconstruct_quadric(&d, &fs, &ft))?;
    let cmp = compare_with_motion(m, &d, &rec);
    stages.push("reconstruct".to_string());

    let (a, b, certificate) = stage("factor", factor(&x, cfg.seed, cfg.restarts))?;
    let rebuilt = stage("factor", to_motion(&a, &b))?;
    let d_float = d.map(|c| c.to_f64());
    let pencil_match = implicitize(&stage("factor", orbit_of_quadric(&rebuilt))?, cfg.samples)
        .map(|d2| d2.same_pencil(&d_float))
        .unwrap_or(false);
    stages.push("factor".to_string());

    let (points, max_residual) = sample_cloud(&d_float, cfg.seed, cfg.points);
    stages.push("export".to_string());

    let pass = cmp.pass(cfg.tol) && certificate.accepted(ACCEPTED) && pencil_match && max_residual < POINT_RESIDUAL_TOL;
    let report = PipelineReport {
        config: cfg.clone(),
        stages,
        cyclide: d.certificate.clone(),
        family_intersection: meet,
        reconstruction: ReconstructionSummary {
            subspace_distance: cmp.subspace_distance,
            rulings_matched: cmp.rulings_matched,
            families_noncospherical: cmp.families_noncospherical,
            uo: check_not_in_Uo(&rec.quadric),
            steps: cmp.steps,
        },
        factorization: FactorSummary { certificate, pencil_match, a, b },
        points: PointsSummary { count: points.homogeneous.len(), max_residual },
        roundtrip: if pass { Verdict::Pass } else { Verdict::Fail },
    };
    Ok(PipelineOutput { report, cyclide_json: to_json(&d), points })
}

pub fn parse_motion(text: &str) -> Result<BilinearMotion<Rational>, CliError> {
    let m: BilinearMotion<Rational> = serde_json::from_str(text).map_err(|e| CliError::Input(format!("motion JSON: {e}")))?;
    m.validate().map_err(|e| CliError::Input(format!("invalid motion: {e}")))?;
    Ok(m)
}

pub fn cmd_pipeline(motion: &BilinearMotion<Rational>, cfg: &RunConfig) -> Result<PipelineOutput, CliError> {
    match cfg.scalar {
        ScalarMode::Exact => run_pipeline(motion, cfg),
        ScalarMode::Float => run_pipeline(&motion.map(|c| c.to_f64()), cfg),
    }
}

pub fn points_csv(cloud: &PointCloud) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x0", "x1", "x2", "x3", "x4", "vx", "vy", "vz"]).expect("in-memory write");
    for (h, v) in cloud.homogeneous.iter().zip(&cloud.euclidean) {
        let row: Vec<String> = h.iter().chain(v.iter()).map(|c| format!("{c:.17e}")).collect();
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub count: usize,
    pub all_two_matched_pairs: bool,
    pub all_contain_pairing_two: bool,
    pub decompositions: Vec<[DivisorClass; 4]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub conic_classes: Vec<DivisorClass>,
    pub census: Census,
    pub decompositions: DecompositionReport,
}

/// `{α₀−αᵢ, 2α₀+αᵢ−Σ, α₀−αⱼ, 2α₀+αⱼ−Σ}` for some `i, j`.
pub fn is_two_matched_pairs(d: &[DivisorClass; 4]) -> bool {
    let lines: Vec<usize> = (1..=5).flat_map(|i| std::iter::repeat_n(i, d.iter().filter(|c| **c == DivisorClass::line_conic(i)).count())).collect();
    let quads: Vec<usize> = (1..=5).flat_map(|i| std::iter::repeat_n(i, d.iter().filter(|c| **c == DivisorClass::quadric_conic(i)).count())).collect();
    lines.len() == 2 && lines == quads
}

pub fn cmd_lattice(subset: Option<&str>) -> Result<LatticeReport, CliError> {
    let classes = match subset {
        None => conic_classes(),
        Some(text) => {
            let raw: Vec<[i64; 6]> = serde_json::from_str(text).map_err(|e| CliError::Input(format!("subset JSON: {e}")))?;
            raw.into_iter().map(DivisorClass).collect()
        }
    };
    let census = pair_product_census(&classes).map_err(|e| CliError::Input(e.to_string()))?;
    let decompositions = decompositions_of_minus_2kappa();
    let report = DecompositionReport {
        count: decompositions.len(),
        all_two_matched_pairs: decompositions.iter().all(is_two_matched_pairs),
        all_contain_pairing_two: decompositions
            .iter()
            .all(|d| (0..4).any(|i| (i + 1..4).any(|j| pair(&d[i], &d[j]) == 2))),
        decompositions,
    };
    let mut sorted = classes;
    sorted.sort();
    sorted.dedup();
    Ok(LatticeReport { conic_classes: sorted, census, decompositions: report })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(a) => {
            let m = cmd_gen(a.seed, GenConstraints { rotations_only: a.rotations_only, allow_uo: a.allow_uo })?;
            write_or_print(a.out.as_deref(), &to_json(&m))
        }
        Command::Pipeline(a) => {
            let cfg = RunConfig::from_args(&a)?;
            let motion = parse_motion(&read(&a.motion)?)?;
            let out = cmd_pipeline(&motion, &cfg)?;
            let report = to_json(&out.report);
            if let Some(dir) = a.out.as_deref() {
                fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
                write_or_print(Some(&dir.join("cyclide.json")), &out.cyclide_json)?;
                write_or_print(Some(&dir.join("report.json")), &report)?;
                write_or_print(Some(&dir.join("points.json")), &to_json(&out.points))?;
                write_or_print(Some(&dir.join("points.csv")), &points_csv(&out.points))?;
            }
            print!("{report}");
            Ok(())
        }
        Command::Lattice(a) => {
            let subset = a.subset.as_deref().map(read).transpose()?;
            let report = cmd_lattice(subset.as_deref())?;
            write_or_print(a.out.as_deref(), &to_json(&report))
        }
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
