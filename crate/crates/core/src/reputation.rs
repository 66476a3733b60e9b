//! Shared experience counters per consultant and the two ways of filling them.
//!
//! R1 counts a consultation as positive exactly when the consultant knew more
//! than the client. R2 additionally re-judges a client's whole advice history
//! each time new advice arrives, trusting the newest advice and penalizing
//! every past consultant whose advised argument had the other parity.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::market::AdviceEvent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReputationSystem {
    R1,
    R2,
}

impl fmt::Display for ReputationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReputationSystem::R1 => "R1",
            ReputationSystem::R2 => "R2",
        })
    }
}

impl FromStr for ReputationSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "r1" => Ok(ReputationSystem::R1),
            "r2" => Ok(ReputationSystem::R2),
            _ => Err(format!("unknown reputation system `{s}` (expected r1 or r2)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReputationError {
    #[error("ledger runs {ledger}, operation requires {required}")]
    WrongSystem {
        ledger: ReputationSystem,
        required: ReputationSystem,
    },
    #[error("cannot normalize an empty list")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReputationLedger {
    system: ReputationSystem,
    positive: Vec<u64>,
    negative: Vec<u64>,
}

impl ReputationLedger {
    pub fn new(system: ReputationSystem, n_consultants: usize) -> Self {
        Self {
            system,
            positive: vec![0; n_consultants],
            negative: vec![0; n_consultants],
        }
    }

    pub fn system(&self) -> ReputationSystem {
        self.system
    }

    pub fn positive(&self, consultant: usize) -> u64 {
        self.positive[consultant]
    }

    pub fn negative(&self, consultant: usize) -> u64 {
        self.negative[consultant]
    }

    /// Sum of all counters.
    pub fn mass(&self) -> u64 {
        self.positive.iter().sum::<u64>() + self.negative.iter().sum::<u64>()
    }

    fn require(&self, required: ReputationSystem) -> Result<(), ReputationError> {
        if self.system == required {
            Ok(())
        } else {
            Err(ReputationError::WrongSystem {
                ledger: self.system,
                required,
            })
        }
    }

    pub fn record_r1(&mut self, consultant: usize, success: bool) -> Result<(), ReputationError> {
        self.require(ReputationSystem::R1)?;
        if success {
            self.positive[consultant] += 1;
        } else {
            self.negative[consultant] += 1;
        }
        Ok(())
    }

    /// On failure only `failed_consultant` is penalized. Otherwise every event in
    /// `history` (which already holds the new advice) is judged against the
    /// parity of `truth_index`.
    pub fn record_r2(
        &mut self,
        history: &[AdviceEvent],
        truth_index: u32,
        failed_consultant: Option<usize>,
    ) -> Result<(), ReputationError> {
        self.require(ReputationSystem::R2)?;
        if let Some(c) = failed_consultant {
            self.negative[c] += 1;
            return Ok(());
        }
        let truth = truth_index % 2;
        for event in history {
            if event.last_advised_index % 2 == truth {
                self.positive[event.consultant] += 1;
            } else {
                self.negative[event.consultant] += 1;
            }
        }
        Ok(())
    }

    pub fn raw_scores(&self) -> Vec<i64> {
        self.positive
            .iter()
            .zip(&self.negative)
            .map(|(&p, &n)| raw_score(p, n))
            .collect()
    }

    /// Normalized reputation of every consultant.
    pub fn scores(&self) -> Vec<f64> {
        let raw: Vec<f64> = self.raw_scores().into_iter().map(|r| r as f64).collect();
        if raw.is_empty() {
            return raw;
        }
        minmax_normalize(&raw).expect("non-empty")
    }
}

pub fn raw_score(n_pos: u64, n_neg: u64) -> i64 {
    n_pos as i64 - n_neg as i64
}

/// Affine map of `values` onto `[0, 1]`. All-equal input maps to 0.5.
pub fn minmax_normalize(values: &[f64]) -> Result<Vec<f64>, ReputationError> {
    let (min, max) = values
        .iter()
        .fold(None, |acc: Option<(f64, f64)>, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
        .ok_or(ReputationError::Empty)?;
    if max > min {
        let span = max - min;
        Ok(values.iter().map(|v| (v - min) / span).collect())
    } else {
        Ok(vec![0.5; values.len()])
    }
}
