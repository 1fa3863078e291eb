//! An adversary against procedures that add two digit streams.
//!
//! Inputs are streams of fractional base-10 digits (values in [0, 1]). An
//! adder returns a machine whose first emitted digit is the integer digit
//! of the sum, followed by fractional digits. Against a = 0.222... the
//! adversary offers b = 0.77...7sss... with k sevens: the sum's integer
//! digit depends on s, which no finite lookahead of k digits reveals.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CandidateError, Fuel, DEFAULT_FUEL};
use crate::codec::{decode, encode, DescriptionNumber};
use crate::exec::{emit_digits, Budget, DigitPrefix};
use crate::machine::{Builder, Convention, Machine, Move, Rule};
use crate::reals::Rational;

pub const BASE: u32 = 10;

pub trait Adder: Send + Sync {
    fn name(&self) -> String;
    fn add(&self, a: &Machine, b: &Machine, fuel: &mut Fuel) -> Result<Machine, CandidateError>;
}

/// Emits `prefix`, then `tail` forever, or halts if there is no tail.
pub fn digit_stream(name: &str, prefix: &[u8], tail: Option<u8>) -> Machine {
    let mut b = Builder::new(name, Convention::HaltState);
    b.base(BASE);
    let states: Vec<_> = (0..=prefix.len()).map(|i| b.state(&format!("d{i}"))).collect();
    b.set_start(states[0]);
    for (i, &d) in prefix.iter().enumerate() {
        b.rule_all(states[i], Rule { write: None, emit: Some(d), mv: Move::Stay, next: states[i + 1] });
    }
    if let Some(t) = tail {
        let last = states[prefix.len()];
        b.rule_all(last, Rule { write: None, emit: Some(t), mv: Move::Stay, next: last });
    }
    b.build().expect("digit stream is well formed")
}

/// The adversary's second summand: k sevens, then `s` forever.
pub fn sevens_then(k: usize, s: u8) -> Machine {
    digit_stream(&format!("sevens{k}-{s}"), &vec![7; k], Some(s))
}

pub fn two_ninths() -> Machine {
    digit_stream("two-ninths", &[], Some(2))
}

/// Commits to 0.999... without reading its inputs.
pub struct EagerNines;

/// Commits to 1.000... without reading its inputs.
pub struct EagerOne;

/// Reads `digits` digits of each summand and commits to the floor of the
/// prefix sum.
pub struct Lookahead {
    pub digits: usize,
    pub steps: u64,
}

/// Never emits anything; not a total adder, so it is not among the
/// built-ins.
pub struct Waiting;

impl Adder for EagerNines {
    fn name(&self) -> String {
        "eager-0.999".into()
    }

    fn add(&self, _: &Machine, _: &Machine, _: &mut Fuel) -> Result<Machine, CandidateError> {
        Ok(digit_stream("eager-nines", &[0], Some(9)))
    }
}

impl Adder for EagerOne {
    fn name(&self) -> String {
        "eager-1.000".into()
    }

    fn add(&self, _: &Machine, _: &Machine, _: &mut Fuel) -> Result<Machine, CandidateError> {
        Ok(digit_stream("eager-one", &[1], Some(0)))
    }
}

impl Adder for Lookahead {
    fn name(&self) -> String {
        format!("lookahead-{}", self.digits)
    }

    fn add(&self, a: &Machine, b: &Machine, fuel: &mut Fuel) -> Result<Machine, CandidateError> {
        let mut sum = Rational::zero();
        for m in [a, b] {
            fuel.spend(self.steps)?;
            let digits = match emit_digits(m, self.digits, &Budget::steps(self.steps)) {
                Ok(DigitPrefix::Digits(ds)) => ds,
                _ => return Err(CandidateError::Failed(format!("{} gave too few digits", m.name()))),
            };
            sum = &sum + &prefix_value(0, &digits);
        }
        let integer = sum.floor();
        let frac = &sum - &Rational::from_integer(integer.clone());
        let mut out = vec![u8::try_from(integer).map_err(|_| CandidateError::Failed("sum too large".into()))?];
        let mut rest = frac;
        for _ in 0..self.digits {
            rest = rest.mul_int(&BASE.into());
            let d = rest.floor();
            rest = &rest - &Rational::from_integer(d.clone());
            out.push(u8::try_from(d).expect("digit"));
        }
        Ok(digit_stream("lookahead-sum", &out, Some(0)))
    }
}

impl Adder for Waiting {
    fn name(&self) -> String {
        "waiting".into()
    }

    fn add(&self, _: &Machine, _: &Machine, _: &mut Fuel) -> Result<Machine, CandidateError> {
        let mut b = Builder::new("waiting", Convention::HaltState);
        let q = b.state("q");
        b.rule_all(q, Rule { write: None, emit: None, mv: Move::Right, next: q });
        Ok(b.build().expect("well formed"))
    }
}

pub fn builtin_adders() -> Vec<Box<dyn Adder>> {
    vec![
        Box::new(EagerNines),
        Box::new(EagerOne),
        Box::new(Lookahead { digits: 3, steps: 1000 }),
        Box::new(Lookahead { digits: 10, steps: 1000 }),
    ]
}

/// `integer` plus 0.d1d2...dn in base 10.
fn prefix_value(integer: u64, digits: &[u8]) -> Rational {
    let mut num = num_bigint::BigInt::from(integer);
    for &d in digits {
        num = num * BASE + d;
    }
    Rational::new(num, num_bigint::BigInt::from(BASE).pow(digits.len() as u32))
}

/// Exact value of 0.77...7sss... with k sevens.
pub fn sevens_value(k: usize, s: u8) -> Rational {
    let tail = Rational::new(1.into(), num_bigint::BigInt::from(BASE).pow(k as u32));
    let sevens = &Rational::from_ratio(7, 9) * &(&Rational::one() - &tail);
    &sevens + &(&Rational::from_ratio(s as i64, 9) * &tail)
}

/// Rational-interval evidence that the adder's output is wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdderEvidence {
    pub k: usize,
    pub s: u8,
    pub output: DescriptionNumber,
    /// Emitted by the output: integer digit, then fractional digits.
    pub digits: Vec<u8>,
    pub sum: Rational,
    /// The output claims its value lies in [low, high].
    pub low: Rational,
    pub high: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdderDefeat {
    pub adder: String,
    pub evidence: AdderEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AdderError {
    #[error("adder {adder} emitted no first digit within {steps} steps on k = {k}, s = {s}")]
    Undecided { adder: String, k: usize, s: u8, steps: u64 },
    #[error("adder {adder} failed: {error}")]
    Candidate { adder: String, error: CandidateError },
    #[error("adder {0} was right on every summand tried")]
    Escaped(String),
}

pub const MAX_SEVENS: usize = 64;

/// Offers b(k, s) for k = 1, 2, 4, ... and s = 8 then 0 until the adder's
/// committed integer digit is inconsistent with the exact sum.
pub fn adder_adversary(adder: &dyn Adder, steps: u64) -> Result<AdderDefeat, AdderError> {
    let a = two_ninths();
    let a_value = Rational::from_ratio(2, 9);
    let mut k = 1;
    while k <= MAX_SEVENS {
        for s in [8u8, 0] {
            let b = sevens_then(k, s);
            let out = adder
                .add(&a, &b, &mut Fuel::new(DEFAULT_FUEL))
                .map_err(|error| AdderError::Candidate { adder: adder.name(), error })?;
            let digits = match emit_digits(&out, 1, &Budget::steps(steps)) {
                Ok(DigitPrefix::Digits(ds)) => ds,
                _ => return Err(AdderError::Undecided { adder: adder.name(), k, s, steps }),
            };
            let sum = &a_value + &sevens_value(k, s);
            let low = prefix_value(digits[0] as u64, &[]);
            let high = &low + &Rational::one();
            if sum < low || sum > high {
                let evidence = AdderEvidence { k, s, output: encode(&out), digits, sum, low, high };
                return Ok(AdderDefeat { adder: adder.name(), evidence });
            }
        }
        k *= 2;
    }
    Err(AdderError::Escaped(adder.name()))
}

/// Replays the output machine and recomputes the sum from the summands'
/// own emissions, independently of how the adversary computed it.
pub fn check_adder_evidence(e: &AdderEvidence, steps: u64) -> Result<(), String> {
    let out = decode(&e.output).map_err(|err| err.to_string())?;
    match emit_digits(&out, e.digits.len(), &Budget::steps(steps)) {
        Ok(DigitPrefix::Digits(ds)) if ds == e.digits => {}
        _ => return Err("output does not emit the recorded digits".into()),
    }
    let (&integer, frac) = e.digits.split_first().ok_or("no digits")?;
    let low = prefix_value(integer as u64, frac);
    let high = &low + &Rational::new(1.into(), num_bigint::BigInt::from(BASE).pow(frac.len() as u32));
    if low != e.low || high != e.high {
        return Err("interval does not match the digits".into());
    }
    // Both summands are eventually periodic: a = 2/9 and
    // b = (77...7 + s/9) / 10^k with k sevens.
    let b = sevens_then(e.k, e.s);
    let need = e.k + 2;
    let bd = match emit_digits(&b, need, &Budget::steps(steps)) {
        Ok(DigitPrefix::Digits(ds)) => ds,
        _ => return Err("summand b is too short".into()),
    };
    if bd[e.k..].iter().any(|&d| d != e.s) {
        return Err("summand b is not eventually constant".into());
    }
    let head = prefix_value(0, &bd[..e.k]);
    let scale = Rational::new(1.into(), num_bigint::BigInt::from(BASE).pow(e.k as u32));
    let b_value = &head + &(&Rational::from_ratio(e.s as i64, 9) * &scale);
    let sum = &Rational::from_ratio(2, 9) + &b_value;
    if sum != e.sum {
        return Err("recorded sum is wrong".into());
    }
    if sum >= low && sum <= high {
        return Err("sum lies inside the claimed interval".into());
    }
    Ok(())
}
