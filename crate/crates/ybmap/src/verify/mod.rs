//! Randomized property campaigns for the Yang-Baxter relation and
//! reversibility of any registered map family.
//!
//! Conventions: `R_ij(l_i, l_j)` acts on slots `i, j` of a triple with
//! velocities bound to slot positions; compositions apply right to left.
//! The Yang-Baxter check compares
//! `R_12(l1,l2) R_13(l1,l3) R_23(l2,l3)` with
//! `R_23(l2,l3) R_13(l1,l3) R_12(l1,l2)` on sampled triples; the
//! reversibility check verifies `R_21(l2,l1) R(l1,l2) = Id` with
//! `R_21 = P o R o P` for the factor swap `P`.
//!
//! Campaigns are deterministic: trial `i` draws from an independent ChaCha
//! stream of the campaign seed, so reports are byte-identical for a fixed
//! `(family, check, trials, seed, tol)` regardless of thread count.

mod families;
mod report;

pub use families::{
    sample_lambdas, GrassmannianFamily, LambdaKind, MapFamily, ProjectorFamily, VectorFamily,
    VectorState,
};
pub use report::{TrialFailure, VerificationReport};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::Result;
use crate::lax::ZetaGrid;
use crate::tol::Tolerances;

/// Campaign parameters. `threads: None` reads `YBMAP_THREADS`, falling back
/// to the available parallelism capped at 8.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub zeta_samples: usize,
    pub threads: Option<usize>,
}

impl CampaignConfig {
    pub fn new(trials: u64, seed: u64, tol: f64) -> Self {
        Self {
            trials,
            seed,
            tol,
            zeta_samples: ZetaGrid::DEFAULT_SAMPLES,
            threads: None,
        }
    }
}

/// Number of worker threads: explicit override, else `YBMAP_THREADS`, else
/// available parallelism capped at 8.
pub fn thread_count(requested: Option<usize>) -> usize {
    if let Some(n) = requested {
        return n.max(1);
    }
    if let Ok(value) = std::env::var("YBMAP_THREADS") {
        if let Ok(n) = value.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

/// Run `trials` independent jobs on `threads` workers, collecting results
/// in trial order. Each job owns its RNG stream, so the outcome does not
/// depend on the execution schedule.
pub(crate) fn run_trials<T: Send>(
    trials: u64,
    threads: usize,
    job: impl Fn(u64) -> T + Sync,
) -> Vec<T> {
    if threads <= 1 || trials <= 1 {
        return (0..trials).map(job).collect();
    }
    let mut results: Vec<Option<T>> = (0..trials).map(|_| None).collect();
    let chunk = (trials as usize).div_ceil(threads);
    std::thread::scope(|scope| {
        for (index, slots) in results.chunks_mut(chunk).enumerate() {
            let job = &job;
            let start = (index * chunk) as u64;
            scope.spawn(move || {
                for (offset, slot) in slots.iter_mut().enumerate() {
                    *slot = Some(job(start + offset as u64));
                }
            });
        }
    });
    results.into_iter().map(|r| r.expect("job ran")).collect()
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

struct TrialOutcome {
    deviation: f64,
    certificate: f64,
    failure: Option<TrialFailure>,
}

fn aggregate(
    family: &str,
    check: &str,
    config: &CampaignConfig,
    outcomes: Vec<TrialOutcome>,
) -> VerificationReport {
    let mut max_deviation = 0.0f64;
    let mut max_certificate = 0.0f64;
    let mut failures = Vec::new();
    for outcome in outcomes {
        max_deviation = max_deviation.max(outcome.deviation);
        max_certificate = max_certificate.max(outcome.certificate);
        if let Some(failure) = outcome.failure {
            failures.push(failure);
        }
    }
    VerificationReport {
        family: family.to_string(),
        check: check.to_string(),
        trials: config.trials,
        seed: config.seed,
        tol: config.tol,
        max_deviation,
        max_certificate_residual: max_certificate,
        failures,
        runtime_ms: None,
    }
}

/// Apply `R_21(l2, l1) = P o R(l2, l1) o P` to a pair.
pub fn apply_r21<F: MapFamily>(
    family: &F,
    lambda2: Complex64,
    lambda1: Complex64,
    first: &F::State,
    second: &F::State,
    tols: &Tolerances,
    grid: &ZetaGrid,
) -> Result<(F::State, F::State, f64)> {
    // swap, apply R(l2, l1), swap back
    let (swapped_first, swapped_second, certificate) =
        family.apply(lambda2, second, lambda1, first, tols, grid)?;
    Ok((swapped_second, swapped_first, certificate))
}

/// Check the parameter-dependent Yang-Baxter relation on random triples.
pub fn check_yang_baxter<F: MapFamily>(
    family: &F,
    config: &CampaignConfig,
    tols: &Tolerances,
) -> VerificationReport {
    let threads = thread_count(config.threads);
    let outcomes = run_trials(config.trials, threads, |trial| {
        yang_baxter_trial(family, config, tols, trial)
    });
    aggregate(family.identifier(), "yang_baxter", config, outcomes)
}

fn yang_baxter_trial<F: MapFamily>(
    family: &F,
    config: &CampaignConfig,
    tols: &Tolerances,
    trial: u64,
) -> TrialOutcome {
    let mut rng = trial_rng(config.seed, trial);
    let dim = family.sample_dim(&mut rng);
    let lambdas = sample_lambdas(&mut rng, 3, family.lambda_kind());
    let states = [
        family.sample_state(&mut rng, dim),
        family.sample_state(&mut rng, dim),
        family.sample_state(&mut rng, dim),
    ];
    let grid_seed: u64 = rng.gen();
    let grid = match ZetaGrid::circle(&lambdas, config.zeta_samples, grid_seed) {
        Ok(grid) => grid,
        Err(e) => return error_outcome(family, trial, &lambdas, &states, e),
    };
    let (l1, l2, l3) = (lambdas[0], lambdas[1], lambdas[2]);

    let mut certificate = 0.0f64;
    let mut apply = |la, a: &F::State, lb, b: &F::State| -> Result<(F::State, F::State)> {
        let (x, y, residual) = family.apply(la, a, lb, b, tols, &grid)?;
        certificate = certificate.max(residual);
        Ok((x, y))
    };

    // left side: R_23 first, then R_13, then R_12
    let left = (|| -> Result<[F::State; 3]> {
        let (b1, c1) = apply(l2, &states[1], l3, &states[2])?;
        let (a1, c2) = apply(l1, &states[0], l3, &c1)?;
        let (a2, b2) = apply(l1, &a1, l2, &b1)?;
        Ok([a2, b2, c2])
    })();
    // right side: R_12 first, then R_13, then R_23
    let right = (|| -> Result<[F::State; 3]> {
        let (a1, b1) = apply(l1, &states[0], l2, &states[1])?;
        let (a2, c1) = apply(l1, &a1, l3, &states[2])?;
        let (b2, c2) = apply(l2, &b1, l3, &c1)?;
        Ok([a2, b2, c2])
    })();

    match (left, right) {
        (Ok(left), Ok(right)) => {
            let deviation = (0..3)
                .map(|i| family.distance(&left[i], &right[i]).unwrap_or(f64::INFINITY))
                .fold(0.0f64, f64::max);
            finish_outcome(family, trial, &lambdas, &states, deviation, certificate, config.tol)
        }
        (Err(e), _) | (_, Err(e)) => error_outcome(family, trial, &lambdas, &states, e),
    }
}

/// Check reversibility `R_21(l2, l1) R(l1, l2) = Id` on random pairs.
pub fn check_reversibility<F: MapFamily>(
    family: &F,
    config: &CampaignConfig,
    tols: &Tolerances,
) -> VerificationReport {
    let threads = thread_count(config.threads);
    let outcomes = run_trials(config.trials, threads, |trial| {
        reversibility_trial(family, config, tols, trial)
    });
    aggregate(family.identifier(), "reversibility", config, outcomes)
}

fn reversibility_trial<F: MapFamily>(
    family: &F,
    config: &CampaignConfig,
    tols: &Tolerances,
    trial: u64,
) -> TrialOutcome {
    let mut rng = trial_rng(config.seed, trial);
    let dim = family.sample_dim(&mut rng);
    let lambdas = sample_lambdas(&mut rng, 2, family.lambda_kind());
    let states = [
        family.sample_state(&mut rng, dim),
        family.sample_state(&mut rng, dim),
    ];
    let grid_seed: u64 = rng.gen();
    let grid = match ZetaGrid::circle(&lambdas, config.zeta_samples, grid_seed) {
        Ok(grid) => grid,
        Err(e) => return error_outcome(family, trial, &lambdas, &states, e),
    };
    let (l1, l2) = (lambdas[0], lambdas[1]);

    let result = (|| -> Result<(f64, f64)> {
        let (a, b, cert_forward) = family.apply(l1, &states[0], l2, &states[1], tols, &grid)?;
        let (back_a, back_b, cert_back) = apply_r21(family, l2, l1, &a, &b, tols, &grid)?;
        let deviation = family
            .distance(&states[0], &back_a)?
            .max(family.distance(&states[1], &back_b)?);
        Ok((deviation, cert_forward.max(cert_back)))
    })();

    match result {
        Ok((deviation, certificate)) => {
            finish_outcome(family, trial, &lambdas, &states, deviation, certificate, config.tol)
        }
        Err(e) => error_outcome(family, trial, &lambdas, &states, e),
    }
}

fn echo_inputs<F: MapFamily>(
    family: &F,
    lambdas: &[Complex64],
    states: &[F::State],
) -> serde_json::Value {
    json!({
        "lambdas": lambdas.iter().map(|l| [l.re, l.im]).collect::<Vec<_>>(),
        "states": states.iter().map(|s| family.echo_state(s)).collect::<Vec<_>>(),
    })
}

fn finish_outcome<F: MapFamily>(
    family: &F,
    trial: u64,
    lambdas: &[Complex64],
    states: &[F::State],
    deviation: f64,
    certificate: f64,
    tol: f64,
) -> TrialOutcome {
    let failure = (deviation > tol).then(|| TrialFailure {
        trial,
        deviation: Some(deviation),
        detail: format!("deviation {deviation:.3e} exceeds tolerance {tol:.3e}"),
        inputs: echo_inputs(family, lambdas, states),
    });
    TrialOutcome {
        deviation,
        certificate,
        failure,
    }
}

fn error_outcome<F: MapFamily>(
    family: &F,
    trial: u64,
    lambdas: &[Complex64],
    states: &[F::State],
    error: crate::error::Error,
) -> TrialOutcome {
    TrialOutcome {
        deviation: 0.0,
        certificate: 0.0,
        failure: Some(TrialFailure {
            trial,
            deviation: None,
            detail: error.to_string(),
            inputs: echo_inputs(family, lambdas, states),
        }),
    }
}
