//! Full-batch Levenberg-Marquardt training.
//!
//! Each epoch computes the residual Jacobian once, solves the damped
//! normal equations `[JᵀJ + μI]·Δw = Jᵀe`, and applies `w ← w − Δw`
//! only if the MSE decreases. Accepted steps divide μ by β; rejected
//! steps multiply μ by β and re-solve against the cached JᵀJ. With
//! β = 1 a rejected step can never change, so a bounded retry guard
//! records the epoch as stagnated instead of looping forever.

use alloc::vec::Vec;

use crate::damage::Sample;
use crate::error::{Error, Result};
use crate::linalg::{solve_damped, DenseMatrix, DenseVector};
use crate::net::{jacobian, network_mse, NetworkWeights};

/// Consecutive stagnated epochs tolerated before stopping; only
/// reachable with β = 1, where μ cannot adapt.
const STAGNATION_STOP_EPOCHS: usize = 50;

/// Levenberg-Marquardt hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Initial damping μ.
    pub mu_init: f64,
    /// μ adaptation factor β ≥ 1: divide on acceptance, multiply on
    /// rejection.
    pub beta: f64,
    /// Stop once the MSE reaches this goal.
    pub error_goal: f64,
    /// Epoch budget.
    pub max_epochs: usize,
    /// Divergence guard: stop when μ grows past this.
    pub mu_max: f64,
    /// Rejected re-solves tolerated per epoch when β = 1.
    pub max_inner_retries: usize,
    /// Seed consumed by callers that initialize the weights; the loop
    /// itself is deterministic.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            mu_init: 0.01,
            beta: 2.0,
            error_goal: 1e-5,
            max_epochs: 1000,
            mu_max: 1e10,
            max_inner_retries: 20,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu_init > 0.0) || !self.mu_init.is_finite() {
            return Err(Error::InvalidConfig("mu_init must be positive"));
        }
        if !(self.beta >= 1.0) || !self.beta.is_finite() {
            return Err(Error::InvalidConfig("beta must be at least 1"));
        }
        if !(self.error_goal > 0.0) {
            return Err(Error::InvalidConfig("error_goal must be positive"));
        }
        if self.max_epochs < 1 {
            return Err(Error::InvalidConfig("max_epochs must be at least 1"));
        }
        if !(self.mu_max > self.mu_init) {
            return Err(Error::InvalidConfig("mu_max must exceed mu_init"));
        }
        Ok(())
    }
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ErrorGoalReached,
    MaxEpochs,
    MuOverflow,
    Stagnated,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::ErrorGoalReached => "error_goal_reached",
            StopReason::MaxEpochs => "max_epochs",
            StopReason::MuOverflow => "mu_overflow",
            StopReason::Stagnated => "stagnated",
        }
    }
}

impl core::fmt::Display for StopReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One epoch of the log: the MSE after the epoch, the μ in effect for
/// the epoch's final solve, and whether the step was accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub mse: f64,
    pub mu: f64,
    pub accepted: bool,
}

/// Complete training history.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainLog {
    pub records: Vec<EpochRecord>,
    pub stop_reason: StopReason,
    /// MSE of the initial weights, before any update.
    pub initial_mse: f64,
}

impl TrainLog {
    /// MSE in effect at the end of the run.
    pub fn final_mse(&self) -> f64 {
        self.records.last().map_or(self.initial_mse, |r| r.mse)
    }

    pub fn epochs(&self) -> usize {
        self.records.len()
    }

    /// First epoch whose MSE reached `goal`, if any.
    pub fn epochs_to_goal(&self, goal: f64) -> Option<usize> {
        self.records.iter().find(|r| r.mse <= goal).map(|r| r.epoch)
    }
}

/// One damped Gauss-Newton step: solves `[JᵀJ + μI]·Δw = Jᵀe`.
/// The caller applies `w ← w − Δw`.
pub fn lm_step(j: &DenseMatrix, e: &DenseVector, mu: f64) -> Result<DenseVector> {
    if j.rows() != e.len() {
        return Err(Error::DimensionMismatch {
            what: "residual vector",
            expected: j.rows(),
            actual: e.len(),
        });
    }
    let jtj = j.gram();
    let jte = j.tr_mul_vec(e)?;
    solve_damped(&jtj, mu, &jte)
}

enum EpochOutcome {
    Accepted { weights: NetworkWeights, mse: f64 },
    Stagnated,
    MuOverflow,
}

/// Runs the damped Gauss-Newton loop on normalized samples until the
/// error goal, the epoch budget, μ overflow, or persistent stagnation.
pub fn train(
    weights: NetworkWeights,
    samples: &[Sample],
    cfg: &TrainConfig,
) -> Result<(NetworkWeights, TrainLog)> {
    cfg.validate()?;
    let mut weights = weights;
    let mut mse = network_mse(&weights, samples)?;
    let initial_mse = mse;
    let mut records = Vec::new();

    // Goal checking precedes everything: weights that already satisfy
    // the goal return untouched.
    if mse <= cfg.error_goal {
        return Ok((
            weights,
            TrainLog {
                records,
                stop_reason: StopReason::ErrorGoalReached,
                initial_mse,
            },
        ));
    }

    let mut mu = cfg.mu_init;
    let mut consecutive_stagnant = 0usize;
    let mut stop_reason = StopReason::MaxEpochs;

    for epoch in 1..=cfg.max_epochs {
        let (j, e) = jacobian(&weights, samples)?;
        let jtj = j.gram();
        let jte = j.tr_mul_vec(&e)?;

        let mut retries = 0usize;
        let outcome = loop {
            // A numerically singular damped system is treated like a
            // rejected step: more damping restores invertibility. This
            // matters once μ underflows the pivot threshold against the
            // zero Jacobian columns of constant input features.
            match solve_damped(&jtj, mu, &jte) {
                Ok(delta) => {
                    let trial = weights.step(&delta)?;
                    let trial_mse = network_mse(&trial, samples)?;
                    if trial_mse < mse {
                        break EpochOutcome::Accepted {
                            weights: trial,
                            mse: trial_mse,
                        };
                    }
                }
                Err(Error::SingularMatrix) => {}
                Err(other) => return Err(other),
            }

            if cfg.beta == 1.0 {
                retries += 1;
                if retries >= cfg.max_inner_retries {
                    break EpochOutcome::Stagnated;
                }
            } else {
                mu *= cfg.beta;
                if mu > cfg.mu_max {
                    break EpochOutcome::MuOverflow;
                }
            }
        };

        match outcome {
            EpochOutcome::Accepted {
                weights: next,
                mse: next_mse,
            } => {
                weights = next;
                mse = next_mse;
                records.push(EpochRecord {
                    epoch,
                    mse,
                    mu,
                    accepted: true,
                });
                mu /= cfg.beta;
                consecutive_stagnant = 0;
                if mse <= cfg.error_goal {
                    stop_reason = StopReason::ErrorGoalReached;
                    break;
                }
            }
            EpochOutcome::Stagnated => {
                records.push(EpochRecord {
                    epoch,
                    mse,
                    mu,
                    accepted: false,
                });
                consecutive_stagnant += 1;
                if consecutive_stagnant >= STAGNATION_STOP_EPOCHS {
                    stop_reason = StopReason::Stagnated;
                    break;
                }
            }
            EpochOutcome::MuOverflow => {
                records.push(EpochRecord {
                    epoch,
                    mse,
                    mu,
                    accepted: false,
                });
                stop_reason = StopReason::MuOverflow;
                break;
            }
        }
    }

    Ok((
        weights,
        TrainLog {
            records,
            stop_reason,
            initial_mse,
        },
    ))
}
