//! Randomized check of every inequality chain on random POVMs, Lüders
//! instruments and states.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instruments::luders;
use crate::quantum::{random_basis, random_mixed_state_with, random_povm, random_pure_state_with, Povm};
use crate::uncertainty::{full_report, InequalityCheck, CHECK_NAMES, INEQUALITY_SLACK};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub dim: usize,
    pub seed: u64,
}

impl VerifyConfig {
    pub fn new(trials: usize, dim: usize, seed: u64) -> Result<Self> {
        if trials < 1 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(2..=4).contains(&dim) {
            return Err(Error::InvalidArgument(format!(
                "dim must be 2, 3 or 4, got {dim}"
            )));
        }
        Ok(VerifyConfig { trials, dim, seed })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub evaluations: usize,
    pub failures: usize,
    pub worst_slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub trials: usize,
    pub dim: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verify: trials={} dim={} seed={} tolerance={:e}",
            self.trials, self.dim, self.seed, self.tolerance
        )?;
        for c in &self.checks {
            let status = if c.failures == 0 { "ok  " } else { "FAIL" };
            writeln!(
                f,
                "{status} {:<28} evaluations={:<6} failures={:<4} worst_slack={:.6e}",
                c.name, c.evaluations, c.failures, c.worst_slack
            )?;
        }
        write!(f, "{}", if self.passed { "PASS" } else { "FAIL" })
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Every fourth trial swaps one of the observables for a random rank-one PVM
/// so the sharp corner cases are exercised too.
fn random_observable(dim: usize, sharp: bool, rng: &mut ChaCha8Rng) -> Povm {
    if sharp {
        Povm::from_basis(&random_basis(dim, rng)).expect("orthonormal basis")
    } else {
        let outcomes = rng.gen_range(2..=dim + 1);
        random_povm(dim, outcomes, rng)
    }
}

fn run_trial(cfg: &VerifyConfig, trial: usize) -> Result<Vec<InequalityCheck>> {
    let mut rng = trial_rng(cfg.seed, trial);
    let a = random_observable(cfg.dim, trial % 4 == 2, &mut rng);
    let b = random_observable(cfg.dim, trial % 4 == 3, &mut rng);
    let rho = if trial.is_multiple_of(2) {
        random_pure_state_with(cfg.dim, &mut rng)
    } else {
        random_mixed_state_with(cfg.dim, &mut rng)
    };
    Ok(full_report(&luders(&a)?, &b, &rho)?.checks)
}

/// Runs all trials (in parallel on the current rayon pool) and reduces them
/// in trial order, so the summary is identical for any thread count.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifySummary> {
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, trial))
        .collect::<Result<Vec<_>>>()?;

    let mut checks: Vec<CheckSummary> = CHECK_NAMES
        .iter()
        .map(|&name| CheckSummary {
            name,
            evaluations: 0,
            failures: 0,
            worst_slack: f64::INFINITY,
        })
        .collect();
    for trial in &per_trial {
        for c in trial {
            let summary = checks.iter_mut().find(|s| s.name == c.name).expect("known check");
            summary.evaluations += 1;
            summary.worst_slack = summary.worst_slack.min(c.slack);
            if !c.holds {
                summary.failures += 1;
            }
        }
    }
    let passed = checks.iter().all(|c| c.failures == 0 && c.evaluations > 0);
    Ok(VerifySummary {
        trials: cfg.trials,
        dim: cfg.dim,
        seed: cfg.seed,
        tolerance: INEQUALITY_SLACK,
        checks,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_validation() {
        assert!(VerifyConfig::new(0, 2, 1).is_err());
        assert!(VerifyConfig::new(10, 1, 1).is_err());
        assert!(VerifyConfig::new(10, 5, 1).is_err());
        assert!(VerifyConfig::new(1, 4, 1).is_ok());
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let cfg = VerifyConfig::new(40, 2, 7).unwrap();
        let a = run_verify(&cfg).unwrap();
        assert!(a.passed, "{a}");
        assert_eq!(a, run_verify(&cfg).unwrap());
        assert!(a.checks.iter().all(|c| c.evaluations == 40));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let cfg = VerifyConfig::new(24, 3, 99).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_verify(&cfg)).unwrap();
        let b = four.install(|| run_verify(&cfg)).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a, b);
    }
}
