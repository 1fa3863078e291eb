//! Diagonal arguments as programs: refuters for candidate halting and
//! printing deciders, the flipped-diagonal digit stream, a fixed-point
//! combinator for machine transformations, and an adversary against
//! digit-stream adders.

pub mod adder;
pub mod diagonal;
pub mod fixpoint;
pub mod refute;

use thiserror::Error;

pub use adder::{adder_adversary, builtin_adders, check_adder_evidence, Adder, AdderDefeat, AdderError, AdderEvidence};
pub use diagonal::{diagonal_digits, AcceptAll, AcceptNone, Classifier, Diagonal, DiagonalError, Truthful};
pub use fixpoint::{builtin_transforms, fixed_point, fixed_point_machine, Transform};
pub use refute::{
    builtin_halting_deciders, builtin_printing_deciders, check_refutation, refute_halting_decider,
    refute_printing_decider, Decider, DeciderKind, ExternalDecider, RefuteError, Refutation,
};

/// Default per-query allowance of host-level work for candidate procedures.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Work meter handed to candidate procedures for one query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(amount: u64) -> Fuel {
        Fuel { remaining: amount }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    pub fn spend(&mut self, amount: u64) -> Result<(), CandidateError> {
        if amount > self.remaining {
            self.remaining = 0;
            return Err(CandidateError::Timeout);
        }
        self.remaining -= amount;
        Ok(())
    }
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel::new(DEFAULT_FUEL)
    }
}

/// Ways a candidate procedure can fail to answer.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CandidateError {
    #[error("candidate exceeded its per-query budget")]
    Timeout,
    #[error("candidate failed: {0}")]
    Failed(String),
}
