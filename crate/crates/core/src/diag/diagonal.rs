//! The flipped diagonal over machines a classifier claims are circle-free.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CandidateError, Fuel, DEFAULT_FUEL};
use crate::codec::{DescriptionNumber, Enumerator};
use crate::exec::{emit_digits, Budget, DigitPrefix};
use crate::machine::Machine;

/// Candidate decider for "emits infinitely many digits on blank tape".
pub trait Classifier: Send + Sync {
    fn name(&self) -> String;
    fn accepts(&self, m: &Machine, fuel: &mut Fuel) -> Result<bool, CandidateError>;
}

/// Accepts machines that emit `digits` digits within `steps` steps.
pub struct Truthful {
    pub digits: usize,
    pub steps: u64,
}

impl Classifier for Truthful {
    fn name(&self) -> String {
        format!("emits-{}-within-{}", self.digits, self.steps)
    }

    fn accepts(&self, m: &Machine, fuel: &mut Fuel) -> Result<bool, CandidateError> {
        fuel.spend(self.steps)?;
        Ok(matches!(
            emit_digits(m, self.digits, &Budget::steps(self.steps)),
            Ok(DigitPrefix::Digits(_))
        ))
    }
}

pub struct AcceptAll;

impl Classifier for AcceptAll {
    fn name(&self) -> String {
        "accept-all".into()
    }

    fn accepts(&self, _: &Machine, _: &mut Fuel) -> Result<bool, CandidateError> {
        Ok(true)
    }
}

pub struct AcceptNone;

impl Classifier for AcceptNone {
    fn name(&self) -> String {
        "accept-none".into()
    }

    fn accepts(&self, _: &Machine, _: &mut Fuel) -> Result<bool, CandidateError> {
        Ok(false)
    }
}

/// One accepted machine and the digit it contributed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalEntry {
    /// Position in the enumeration, 0-based.
    pub index: usize,
    pub number: DescriptionNumber,
    /// Its own digit at the diagonal position.
    pub digit: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagonal {
    pub digits: Vec<u8>,
    pub entries: Vec<DiagonalEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagonalError {
    /// The classifier accepted a machine that does not produce the digit
    /// the diagonal needs from it.
    #[error("machine #{index} (n = {number}) was accepted but emitted only {emitted} of {position} digits")]
    ClassifierCounterexample {
        index: usize,
        number: DescriptionNumber,
        position: usize,
        emitted: usize,
    },
    #[error("only {accepted} machines accepted among the first {scanned}")]
    EmptyListExhausted { scanned: usize, accepted: usize },
    #[error("classifier failed on machine #{index}: {error}")]
    Candidate { index: usize, error: CandidateError },
}

/// A digit guaranteed to differ from `d`.
pub fn flip(d: u8) -> u8 {
    if d == 0 {
        1
    } else {
        0
    }
}

/// First `n` digits of the flipped diagonal: digit i differs from the i-th
/// digit of the i-th accepted machine. Scans at most `scan_cap` machines.
pub fn diagonal_digits(
    classifier: &dyn Classifier,
    n: usize,
    budget: &Budget,
    scan_cap: usize,
) -> Result<Diagonal, DiagonalError> {
    let mut out = Diagonal { digits: Vec::with_capacity(n), entries: Vec::with_capacity(n) };
    for (index, (number, m)) in Enumerator::new().take(scan_cap).enumerate() {
        if out.digits.len() == n {
            break;
        }
        let accepted = classifier
            .accepts(&m, &mut Fuel::new(DEFAULT_FUEL))
            .map_err(|error| DiagonalError::Candidate { index, error })?;
        if !accepted {
            continue;
        }
        let position = out.digits.len() + 1;
        let digit = match emit_digits(&m, position, budget) {
            Ok(DigitPrefix::Digits(ds)) => ds[position - 1],
            Ok(DigitPrefix::Insufficient(ds, _)) => {
                return Err(DiagonalError::ClassifierCounterexample { index, number, position, emitted: ds.len() })
            }
            Err(_) => {
                return Err(DiagonalError::ClassifierCounterexample { index, number, position, emitted: 0 })
            }
        };
        out.digits.push(flip(digit));
        out.entries.push(DiagonalEntry { index, number, digit });
    }
    if out.digits.len() < n {
        let scanned = scan_cap;
        return Err(DiagonalError::EmptyListExhausted { scanned, accepted: out.digits.len() });
    }
    Ok(out)
}
