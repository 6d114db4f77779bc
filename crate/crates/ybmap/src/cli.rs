//! Command implementations behind the `ybmap` binary.
//!
//! Exit-code contract: `0` success, `1` input error, `2` mathematical
//! precondition violation, `3` verification failure. Output files are
//! written atomically (temp file + rename) and are byte-identical across
//! repeated runs with the same inputs and seed; timing information goes to
//! stderr only.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;

use crate::chain::Chain;
use crate::error::Error;
use crate::json::{
    ChainJson, CollideInput, CollideOutput, GrassmannianSiteJson, KdvGridJson, KdvInput,
    KdvReport, PolarizationJson, ProjectorSiteJson, SubspaceJson, TrajectoryRecord,
};
use crate::kdv::{residual_scan, soliton_amplitude_field, ScanGrid};
use crate::lax::ZetaGrid;
use crate::maps::{
    grassmannian_map_certified, projector_map_certified, vector_soliton_map_certified,
};
use crate::tol::Tolerances;
use crate::verify::{
    check_reversibility, check_yang_baxter, CampaignConfig, GrassmannianFamily, ProjectorFamily,
    VectorFamily, VerificationReport,
};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_VERIFICATION_FAILED: i32 = 3;

fn exit_code_for(error: &Error) -> i32 {
    if error.is_precondition() {
        EXIT_PRECONDITION
    } else {
        EXIT_INPUT_ERROR
    }
}

/// Write `contents` to `path` atomically: temp file in the same directory,
/// then rename over the target.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

fn emit(out: &Option<PathBuf>, contents: &str) -> i32 {
    match out {
        Some(path) => {
            if let Err(e) = write_atomic(path, contents) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INPUT_ERROR;
            }
            EXIT_SUCCESS
        }
        None => {
            println!("{contents}");
            EXIT_SUCCESS
        }
    }
}

fn read_input(path: &Path) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INPUT_ERROR
    })
}

#[derive(Debug, Clone)]
pub struct CollideConfig {
    pub input: PathBuf,
    pub out: Option<PathBuf>,
    pub zeta_samples: usize,
    pub seed: u64,
}

/// Collide two states from a JSON file, writing the updated states plus the
/// refactorization certificate.
pub fn run_collide(config: &CollideConfig) -> i32 {
    let text = match read_input(&config.input) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let input: CollideInput = match serde_json::from_str(&text) {
        Ok(input) => input,
        Err(e) => {
            eprintln!("error: malformed collide input: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let tols = Tolerances::default();
    let outcome = collide(&input, &tols, config.zeta_samples, config.seed);
    match outcome {
        Ok((states, residual)) => {
            let output = CollideOutput {
                states,
                refactorization_residual: residual,
                zeta_samples: config.zeta_samples,
                seed: config.seed,
            };
            let rendered = serde_json::to_string_pretty(&output).expect("output serializes");
            emit(&config.out, &rendered)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn collide(
    input: &CollideInput,
    tols: &Tolerances,
    zeta_samples: usize,
    seed: u64,
) -> crate::error::Result<(CollideInput, f64)> {
    match input {
        CollideInput::Vector { first, second } => {
            let first = first.decode(tols)?;
            let second = second.decode(tols)?;
            let grid = ZetaGrid::circle(&[first.lambda(), second.lambda()], zeta_samples, seed)?;
            let result = vector_soliton_map_certified(&first, &second, tols, &grid)?;
            Ok((
                CollideInput::Vector {
                    first: PolarizationJson::encode(&result.first),
                    second: PolarizationJson::encode(&result.second),
                },
                result.refactor_residual,
            ))
        }
        CollideInput::Projector { first, second } => {
            let (lambda1, p1) = first.decode(tols)?;
            let (lambda2, p2) = second.decode(tols)?;
            let grid = ZetaGrid::circle(&[lambda1, lambda2], zeta_samples, seed)?;
            let result = projector_map_certified(lambda1, &p1, lambda2, &p2, tols, &grid)?;
            Ok((
                CollideInput::Projector {
                    first: ProjectorSiteJson::encode(lambda1, &result.first),
                    second: ProjectorSiteJson::encode(lambda2, &result.second),
                },
                result.refactor_residual,
            ))
        }
        CollideInput::Grassmannian { first, second } => {
            let sub1 = first.subspace.decode(tols)?;
            let sub2 = second.subspace.decode(tols)?;
            let lambdas = [
                Complex64::new(first.lambda, 0.0),
                Complex64::new(second.lambda, 0.0),
            ];
            let grid = ZetaGrid::circle(&lambdas, zeta_samples, seed)?;
            let result =
                grassmannian_map_certified(first.lambda, &sub1, second.lambda, &sub2, tols, &grid)?;
            Ok((
                CollideInput::Grassmannian {
                    first: GrassmannianSiteJson {
                        lambda: first.lambda,
                        subspace: SubspaceJson::encode(&result.first),
                    },
                    second: GrassmannianSiteJson {
                        lambda: second.lambda,
                        subspace: SubspaceJson::encode(&result.second),
                    },
                },
                result.refactor_residual,
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    YangBaxter,
    Reversibility,
    Both,
}

impl CheckKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "yang-baxter" | "yang_baxter" | "yb" => Some(Self::YangBaxter),
            "reversibility" => Some(Self::Reversibility),
            "both" => Some(Self::Both),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub family: String,
    pub check: CheckKind,
    pub trials: u64,
    pub seed: u64,
    pub tol: Option<f64>,
    pub zeta_samples: usize,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Default tolerances per check: the Yang-Baxter deviation bound is 1e-9,
/// reversibility is tighter at 1e-10.
pub const DEFAULT_YB_TOL: f64 = 1e-9;
pub const DEFAULT_REVERSIBILITY_TOL: f64 = 1e-10;

/// Run verification campaigns for one family; exit 0 iff every requested
/// check passes. The report file is written even on failure.
pub fn run_verify(config: &VerifyConfig) -> i32 {
    let tols = Tolerances::default();
    let start = Instant::now();

    let campaign = |tol: f64| CampaignConfig {
        trials: config.trials,
        seed: config.seed,
        tol,
        zeta_samples: config.zeta_samples,
        threads: config.threads,
    };
    let yb_config = campaign(config.tol.unwrap_or(DEFAULT_YB_TOL));
    let reversibility_config = campaign(config.tol.unwrap_or(DEFAULT_REVERSIBILITY_TOL));

    macro_rules! run_family {
        ($family:expr) => {{
            let family = $family;
            let mut reports: Vec<VerificationReport> = Vec::new();
            if matches!(config.check, CheckKind::YangBaxter | CheckKind::Both) {
                reports.push(check_yang_baxter(&family, &yb_config, &tols));
            }
            if matches!(config.check, CheckKind::Reversibility | CheckKind::Both) {
                reports.push(check_reversibility(&family, &reversibility_config, &tols));
            }
            reports
        }};
    }

    let reports = match config.family.as_str() {
        "vector" => run_family!(VectorFamily::default()),
        "projector" => run_family!(ProjectorFamily::default()),
        "grassmannian" => run_family!(GrassmannianFamily::default()),
        other => {
            eprintln!("error: unknown family '{other}' (expected vector | projector | grassmannian)");
            return EXIT_INPUT_ERROR;
        }
    };

    let elapsed = start.elapsed().as_millis();
    let all_passed = reports.iter().all(|r| r.passed());
    for report in &reports {
        eprintln!(
            "{} {}: max deviation {:.3e} (tol {:.1e}), max certificate {:.3e}, {} failures [{} trials, seed {}, {} ms]",
            report.family,
            report.check,
            report.max_deviation,
            report.tol,
            report.max_certificate_residual,
            report.failures.len(),
            report.trials,
            report.seed,
            elapsed,
        );
    }

    let file_body: serde_json::Map<String, serde_json::Value> = reports
        .iter()
        .map(|r| {
            (
                r.check.clone(),
                serde_json::to_value(r.without_runtime()).expect("report serializes"),
            )
        })
        .collect();
    let rendered =
        serde_json::to_string_pretty(&serde_json::Value::Object(file_body)).expect("serializes");
    let emit_code = emit(&config.out, &rendered);
    if emit_code != EXIT_SUCCESS {
        return emit_code;
    }
    if all_passed {
        EXIT_SUCCESS
    } else {
        EXIT_VERIFICATION_FAILED
    }
}

#[derive(Debug, Clone)]
pub struct TransferConfig {
    pub input: PathBuf,
    pub steps: usize,
    pub zeta_samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

/// Iterate the transfer map over a chain file, writing one JSON line per
/// step with the invariant drift. Exit 0 iff the drift stays within `tol`.
pub fn run_transfer(config: &TransferConfig) -> i32 {
    let text = match read_input(&config.input) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let parsed: ChainJson = match serde_json::from_str(&text) {
        Ok(parsed) => parsed,
        Err(e) => {
            eprintln!("error: malformed chain input: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let tols = Tolerances::default();
    let chain: Chain = match parsed.decode(&tols) {
        Ok(chain) => chain,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let grid = match ZetaGrid::circle(&chain.lambdas(), config.zeta_samples, config.seed) {
        Ok(grid) => grid,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let trajectory = match chain.iterate(config.steps, &grid, &tols) {
        Ok(trajectory) => trajectory,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let mut lines = String::new();
    for step in &trajectory.steps {
        let record = TrajectoryRecord {
            step: step.step,
            invariant_drift: step.invariant_drift,
        };
        lines.push_str(&serde_json::to_string(&record).expect("record serializes"));
        lines.push('\n');
    }
    eprintln!(
        "transfer: {} steps, max invariant drift {:.3e} (tol {:.1e})",
        config.steps, trajectory.max_drift, config.tol
    );
    let emit_code = emit(&config.out, lines.trim_end());
    if emit_code != EXIT_SUCCESS {
        return emit_code;
    }
    if trajectory.max_drift <= config.tol {
        EXIT_SUCCESS
    } else {
        EXIT_VERIFICATION_FAILED
    }
}

#[derive(Debug, Clone)]
pub struct KdvConfig {
    pub input: PathBuf,
    pub out: Option<PathBuf>,
    pub field_out: Option<PathBuf>,
    pub tol: f64,
}

/// Scan the matrix KdV residual of a soliton ansatz over an `(x, t)` grid.
/// Exit 0 iff the max relative residual is within `tol`; a non-projector
/// amplitude fails the scan with exit 3.
pub fn run_kdv(config: &KdvConfig) -> i32 {
    let text = match read_input(&config.input) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let input: KdvInput = match serde_json::from_str(&text) {
        Ok(input) => input,
        Err(e) => {
            eprintln!("error: malformed kdv input: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    if !input.lambda.is_finite() {
        eprintln!("error: lambda must be finite");
        return EXIT_INPUT_ERROR;
    }
    let amplitude = match crate::json::decode_matrix(&input.amplitude) {
        Ok(m) if m.nrows() == m.ncols() => m,
        Ok(m) => {
            eprintln!("error: amplitude must be square, got {}x{}", m.nrows(), m.ncols());
            return EXIT_INPUT_ERROR;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let grid: ScanGrid = input.grid.map(Into::into).unwrap_or_default();
    let scan = match residual_scan(&amplitude, input.lambda, &grid) {
        Ok(scan) => scan,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let report = KdvReport {
        lambda: input.lambda,
        grid: KdvGridJson::from(grid),
        max_relative_residual: scan.max_relative_residual,
        argmax_x: scan.argmax_x,
        argmax_t: scan.argmax_t,
        tol: config.tol,
        pass: scan.max_relative_residual <= config.tol,
    };
    if let Some(path) = &config.field_out {
        let csv = field_csv(&amplitude, input.lambda, &grid);
        if let Err(e) = write_atomic(path, &csv) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_INPUT_ERROR;
        }
    }
    let rendered = serde_json::to_string_pretty(&report).expect("report serializes");
    let emit_code = emit(&config.out, &rendered);
    if emit_code != EXIT_SUCCESS {
        return emit_code;
    }
    if report.pass {
        EXIT_SUCCESS
    } else {
        eprintln!(
            "kdv: max relative residual {:.3e} at (x, t) = ({}, {}) exceeds tol {:.1e}",
            report.max_relative_residual, report.argmax_x, report.argmax_t, report.tol
        );
        EXIT_VERIFICATION_FAILED
    }
}

/// Field snapshot as CSV: `x, t`, then the flattened field entries
/// row-major as `re(u_ij), im(u_ij)` pairs.
fn field_csv(amplitude: &nalgebra::DMatrix<Complex64>, lambda: f64, grid: &ScanGrid) -> String {
    let n = amplitude.nrows();
    let mut header = String::from("x,t");
    for i in 0..n {
        for j in 0..n {
            header.push_str(&format!(",re_u{i}{j},im_u{i}{j}"));
        }
    }
    let mut out = header;
    out.push('\n');
    for &t in &grid.t_values() {
        for &x in &grid.x_values() {
            let field = soliton_amplitude_field(amplitude, lambda, x, t);
            out.push_str(&format!("{x},{t}"));
            for i in 0..n {
                for j in 0..n {
                    out.push_str(&format!(",{},{}", field[(i, j)].re, field[(i, j)].im));
                }
            }
            out.push('\n');
        }
    }
    out
}
