//! Computable reals in two representations: digit streams emitted by
//! machines, and modulus reals (a rational approximation within 2^-n for
//! every precision n). Arithmetic lives on the modulus side; turning a
//! modulus real back into digits is deliberately partial.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{Budget, Runner, Verdict};
use crate::machine::Machine;

/// Exact rational with a positive denominator.
///
/// Arithmetic results are only cheaply simplified (powers of two, small
/// operands); [`Rational::reduced`], `numer`, `denom`, `Display` and
/// serialization always present lowest terms.
#[derive(Clone, Debug)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

const SMALL_BITS: u64 = 256;

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Rational {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let mut r = Rational { num, den };
        r.tidy();
        r
    }

    pub fn from_integer(i: impl Into<BigInt>) -> Rational {
        Rational { num: i.into(), den: BigInt::one() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn zero() -> Rational {
        Rational::from_integer(0)
    }

    pub fn one() -> Rational {
        Rational::from_integer(1)
    }

    /// 2^-n.
    pub fn pow2_neg(n: u32) -> Rational {
        Rational { num: BigInt::one(), den: BigInt::one() << n as usize }
    }

    fn tidy(&mut self) {
        if self.den.is_one() {
            return;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.num.bits() + self.den.bits() <= SMALL_BITS {
            self.reduce_fully();
        } else if let Some(t) = pow2_exponent(&self.den) {
            let tz = self.num.trailing_zeros().unwrap_or(0).min(t);
            self.num >>= tz as usize;
            self.den >>= tz as usize;
        }
    }

    fn reduce_fully(&mut self) {
        let g = self.num.gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.num /= &g;
            self.den /= &g;
        }
    }

    /// Lowest terms.
    pub fn reduced(&self) -> Rational {
        let mut r = self.clone();
        r.reduce_fully();
        r
    }

    pub fn numer(&self) -> BigInt {
        self.reduced().num
    }

    pub fn denom(&self) -> BigInt {
        self.reduced().den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Rational {
        Rational { num: self.num.abs(), den: self.den.clone() }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.den))
    }

    pub fn recip(&self) -> Rational {
        Rational::new(self.den.clone(), self.num.clone())
    }

    pub fn mul_int(&self, k: &BigInt) -> Rational {
        let mut r = Rational { num: &self.num * k, den: self.den.clone() };
        r.tidy();
        r
    }

    pub fn pow(&self, e: u32) -> Rational {
        let mut r = Rational { num: self.num.pow(e), den: self.den.pow(e) };
        r.tidy();
        r
    }

    /// Smallest `c` with `|self| <= 2^c`.
    pub fn ceil_log2_abs(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN / 4;
        }
        let a = self.num.magnitude();
        let d = self.den.magnitude();
        let mut c = a.bits() as i64 - d.bits() as i64;
        // Now 2^(c-1) < a/d < 2^(c+1).
        loop {
            if le_pow2(a, d, c - 1) {
                c -= 1;
            } else if !le_pow2(a, d, c) {
                c += 1;
            } else {
                return c;
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let shift = (self.num.bits() as i64).max(self.den.bits() as i64) - 60;
        let (n, d) = if shift > 0 {
            (&self.num >> shift as usize, &self.den >> shift as usize)
        } else {
            (self.num.clone(), self.den.clone())
        };
        match (n.to_f64(), d.to_f64()) {
            (Some(n), Some(d)) if d != 0.0 => n / d,
            _ => f64::NAN,
        }
    }

    /// Decimal expansion truncated toward zero to `places` digits.
    pub fn to_decimal(&self, places: usize) -> String {
        let scale = BigInt::from(10u32).pow(places as u32);
        let scaled = (self.num.abs() * &scale) / &self.den;
        let int = &scaled / &scale;
        let frac = &scaled % &scale;
        let sign = if self.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{:0>width$}", frac.to_string(), width = places)
        }
    }
}

/// a/d <= 2^c
fn le_pow2(a: &BigUint, d: &BigUint, c: i64) -> bool {
    if c >= 0 {
        *a <= d << c as usize
    } else {
        a << (-c) as usize <= *d
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Rational) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

fn pow2_exponent(x: &BigInt) -> Option<u64> {
    x.trailing_zeros().filter(|&t| x.bits() == t + 1)
}

fn add_parts(a: &Rational, b: &Rational, negate_b: bool) -> Rational {
    let bn = if negate_b { -&b.num } else { b.num.clone() };
    let mut r = if a.den == b.den {
        Rational { num: &a.num + bn, den: a.den.clone() }
    } else if a.den.is_one() {
        Rational { num: &a.num * &b.den + bn, den: b.den.clone() }
    } else if b.den.is_one() {
        Rational { num: &a.num + bn * &a.den, den: a.den.clone() }
    } else {
        match (pow2_exponent(&a.den), pow2_exponent(&b.den)) {
            (Some(ta), Some(tb)) if ta >= tb => {
                Rational { num: &a.num + (bn << (ta - tb) as usize), den: a.den.clone() }
            }
            (Some(ta), Some(tb)) => {
                Rational { num: (&a.num << (tb - ta) as usize) + bn, den: b.den.clone() }
            }
            // Shifts instead of a full multiplication by a power of two.
            (Some(ta), None) => Rational {
                num: (&a.num * &b.den) + (bn << ta as usize),
                den: &b.den << ta as usize,
            },
            (None, Some(tb)) => Rational {
                num: (&a.num << tb as usize) + bn * &a.den,
                den: &a.den << tb as usize,
            },
            (None, None) => Rational { num: &a.num * &b.den + bn * &a.den, den: &a.den * &b.den },
        }
    };
    r.tidy();
    r
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, o: &Rational) -> Rational {
        add_parts(self, o, false)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, o: &Rational) -> Rational {
        add_parts(self, o, true)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, o: &Rational) -> Rational {
        let mut r = Rational { num: &self.num * &o.num, den: &self.den * &o.den };
        r.tidy();
        r
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Rational {
            type Output = Rational;
            fn $f(self, o: Rational) -> Rational {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.den.is_one() {
            write!(f, "{}", r.num)
        } else {
            write!(f, "{}/{}", r.num, r.den)
        }
    }
}

impl FromStr for Rational {
    type Err = String;

    /// Accepts `p`, `p/q` and decimal literals like `-1.25`.
    fn from_str(s: &str) -> Result<Rational, String> {
        let s = s.trim();
        let bad = || format!("not a rational literal: `{s}`");
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Rational::new(p, q));
        }
        if let Some((i, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = i.starts_with('-');
            let digits = format!("{}{frac}", i.trim_start_matches(['-', '+']));
            let n = BigInt::from_str(&digits).map_err(|_| bad())?;
            let n = if neg { -n } else { n };
            return Ok(Rational::new(n, BigInt::from(10u32).pow(frac.len() as u32)));
        }
        BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Modulus reals

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("digit stream supplied {got} of the {needed} digits needed ({verdict:?})")]
    InsufficientDigits { needed: usize, got: usize, verdict: Verdict },
    #[error("digit stream failed: {0}")]
    Exec(String),
    #[error("exp needs a magnitude bound for its argument")]
    MissingBound,
}

type Approx = dyn Fn(u32) -> Result<Rational, RealError> + Send + Sync;

/// A real given by approximations: `approx(n)` is within 2^-n of it.
#[derive(Clone)]
pub struct ModulusReal {
    approx: Arc<Approx>,
    label: String,
}

impl fmt::Debug for ModulusReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModulusReal({})", self.label)
    }
}

fn ceil_log2_int(q: &Rational) -> u32 {
    q.ceil_log2_abs().max(0) as u32
}

impl ModulusReal {
    pub fn new<F>(label: impl Into<String>, f: F) -> ModulusReal
    where
        F: Fn(u32) -> Result<Rational, RealError> + Send + Sync + 'static,
    {
        ModulusReal { approx: Arc::new(f), label: label.into() }
    }

    pub fn from_rational(q: Rational) -> ModulusReal {
        let label = q.to_string();
        ModulusReal::new(label, move |_| Ok(q.clone()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn approx(&self, n: u32) -> Result<Rational, RealError> {
        (self.approx)(n)
    }

    pub fn add(&self, other: &ModulusReal) -> ModulusReal {
        let (x, y) = (self.clone(), other.clone());
        ModulusReal::new(format!("(add {} {})", x.label, y.label), move |n| {
            Ok(&x.approx(n + 1)? + &y.approx(n + 1)?)
        })
    }

    pub fn neg(&self) -> ModulusReal {
        let x = self.clone();
        ModulusReal::new(format!("(neg {})", x.label), move |n| Ok(-x.approx(n)?))
    }

    pub fn sub(&self, other: &ModulusReal) -> ModulusReal {
        self.add(&other.neg())
    }

    /// |x| <= |approx(0)| + 1 bounds each factor.
    pub fn mul(&self, other: &ModulusReal) -> ModulusReal {
        let (x, y) = (self.clone(), other.clone());
        ModulusReal::new(format!("(mul {} {})", x.label, y.label), move |n| {
            let mx = &x.approx(0)?.abs() + &Rational::one();
            let my = &y.approx(0)?.abs() + &Rational::one();
            // |x'y' - xy| <= |x'||y' - y| + |y||x' - x| with |x'| <= mx + 1.
            let py = n + 1 + ceil_log2_int(&(&mx + &Rational::one()));
            let px = n + 1 + ceil_log2_int(&my);
            Ok(&x.approx(px)? * &y.approx(py)?)
        })
    }

    /// e^x for |x| <= bound, by a Taylor polynomial whose remainder is
    /// bounded by M^(K+1)/(K+1)! * 3^ceil(M), M = bound + 1.
    pub fn exp(&self, bound: Option<Rational>) -> Result<ModulusReal, RealError> {
        let bound = bound.ok_or(RealError::MissingBound)?;
        let x = self.clone();
        let m = &bound.abs() + &Rational::one();
        let e_bound = Rational::from_integer(BigInt::from(3u32).pow(m.ceil().to_u32().unwrap_or(u32::MAX)));
        let label = format!("(exp {} {})", x.label, bound);
        Ok(ModulusReal::new(label, move |n| {
            let target = Rational::pow2_neg(n + 2);
            let mut k: u32 = 0;
            let mut term = &m * &e_bound; // M^(k+1)/(k+1)! * e_bound at k = 0
            while term > target {
                k += 1;
                term = &(&term * &m) * &Rational::from_ratio(1, k as i64 + 1);
            }
            let p = n + 2 + ceil_log2_int(&e_bound);
            let xv = x.approx(p)?;
            let mut sum = Rational::one();
            let mut t = Rational::one();
            for i in 1..=k {
                t = &(&t * &xv) * &Rational::from_ratio(1, i as i64);
                sum = &sum + &t;
            }
            Ok(sum)
        }))
    }
}

/// A Turing-style real: integer part plus the digits a machine emits.
#[derive(Clone, Debug)]
pub struct DigitStreamReal {
    pub integer_part: BigInt,
    pub machine: Machine,
}

impl DigitStreamReal {
    pub fn new(integer_part: impl Into<BigInt>, machine: Machine) -> DigitStreamReal {
        DigitStreamReal { integer_part: integer_part.into(), machine }
    }

    pub fn base(&self) -> u32 {
        self.machine.base() as u32
    }
}

/// Digits needed so that base^-k <= 2^-n.
pub fn digits_for_precision(n: u32, base: u32) -> usize {
    (n as f64 * std::f64::consts::LN_2 / (base as f64).ln()).ceil() as usize + 1
}

struct DigitCache {
    runner: Runner,
    /// Value of the first `k` digits as an integer, and base^k.
    k: usize,
    num: BigInt,
    scale: BigInt,
}

impl DigitCache {
    fn prefix(&mut self, k: usize, base: u32) -> Result<(BigInt, BigInt), RealError> {
        while self.runner.config().emitted.len() < k {
            match self.runner.advance() {
                Ok(None) => {}
                Ok(Some(verdict)) => {
                    return Err(RealError::InsufficientDigits {
                        needed: k,
                        got: self.runner.config().emitted.len(),
                        verdict,
                    })
                }
                Err(e) => return Err(RealError::Exec(e.to_string())),
            }
        }
        let b = BigInt::from(base);
        while self.k < k {
            let d = self.runner.config().emitted[self.k];
            self.num = &self.num * &b + BigInt::from(d);
            self.scale = &self.scale * &b;
            self.k += 1;
        }
        if k == self.k {
            return Ok((self.num.clone(), self.scale.clone()));
        }
        let cut = b.pow((self.k - k) as u32);
        Ok((&self.num / &cut, &self.scale / &cut))
    }
}

/// Truncations of the digit stream. Fails with `InsufficientDigits` when
/// the stream cannot supply even the first digit within the budget; later
/// precisions can fail the same way.
pub fn digit_to_modulus(d: &DigitStreamReal, b: &Budget) -> Result<ModulusReal, RealError> {
    let base = d.base();
    let cache = DigitCache {
        runner: Runner::new(&d.machine, &[], b),
        k: 0,
        num: BigInt::zero(),
        scale: BigInt::one(),
    };
    let cache = Arc::new(Mutex::new(cache));
    let int = Rational::from_integer(d.integer_part.clone());
    let label = format!("(digits {} {})", d.integer_part, d.machine.name());
    let m = ModulusReal::new(label, move |n| {
        let k = digits_for_precision(n, base);
        let (num, scale) = cache.lock().expect("digit cache").prefix(k, base)?;
        Ok(&int + &Rational { num, den: scale })
    });
    m.approx(0)?;
    Ok(m)
}

mod decimal {
    use super::*;

    pub fn serialize<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        BigInt::from_str(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum DigitExtraction {
    Digits {
        #[serde(with = "decimal")]
        integer_part: BigInt,
        digits: Vec<u8>,
    },
    /// Position `position` (1-based) could not be separated from a cell
    /// boundary; `low`..`high` is the last approximation interval.
    Undetermined { position: usize, digits: Vec<u8>, low: Rational, high: Rational },
}

/// Emits the i-th digit only once an approximation interval lies strictly
/// inside one cell [N B^-i, (N+1) B^-i). Precision rises by one per try; a
/// position gets `tie_budget` tries.
pub fn modulus_to_digits(
    m: &ModulusReal,
    count: usize,
    base: u32,
    tie_budget: usize,
) -> Result<DigitExtraction, RealError> {
    let bb = BigInt::from(base);
    let mut digits = Vec::new();
    let mut integer_part = BigInt::zero();
    let mut n: u32 = 0;
    for i in 1..=count {
        let scale = bb.pow(i as u32);
        n = n.max((i as f64 * (base as f64).log2()).ceil() as u32 + 2);
        let mut last = None;
        let mut found = None;
        for _ in 0..tie_budget {
            let q = m.approx(n)?;
            let eps = Rational::pow2_neg(n);
            let lo = &q - &eps;
            let hi = &q + &eps;
            let slo = lo.mul_int(&scale);
            let shi = hi.mul_int(&scale);
            let cell = slo.floor();
            if shi.floor() == cell && slo > Rational::from_integer(cell.clone()) {
                found = Some(cell);
                break;
            }
            last = Some((lo, hi));
            n += 1;
        }
        match found {
            Some(cell) => {
                let (q, r) = cell.div_mod_floor(&bb);
                if i == 1 {
                    integer_part = q;
                }
                digits.push(r.to_u8().expect("digit below base"));
            }
            None => {
                let (low, high) = last.expect("tie budget is positive");
                return Ok(DigitExtraction::Undetermined { position: i, digits, low, high });
            }
        }
    }
    Ok(DigitExtraction::Digits { integer_part, digits })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Comparison {
    Less { precision: u32 },
    Greater { precision: u32 },
    Overlapping { precision: u32 },
}

pub fn compare(a: &ModulusReal, b: &ModulusReal, max_precision: u32) -> Result<Comparison, RealError> {
    for n in 0..=max_precision {
        let (x, y) = (a.approx(n)?, b.approx(n)?);
        let two_eps = Rational::pow2_neg(n).mul_int(&BigInt::from(2));
        if &x + &two_eps < y {
            return Ok(Comparison::Less { precision: n });
        }
        if &y + &two_eps < x {
            return Ok(Comparison::Greater { precision: n });
        }
    }
    Ok(Comparison::Overlapping { precision: max_precision })
}

/// Digit stream of a constant-digit machine as a modulus real, with the
/// default stream budget.
pub fn constant_digit_real(digit: u8, base: u32, budget: &Budget) -> ModulusReal {
    let m = crate::corpus::constant_emitter(digit, base);
    digit_to_modulus(&DigitStreamReal::new(0, m), budget).expect("constant emitters are productive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rational_basics() {
        assert_eq!(q("2/4").to_string(), "1/2");
        assert_eq!(q("-6/-4").to_string(), "3/2");
        assert_eq!(q("1.25"), q("5/4"));
        assert_eq!(q("-0.5").to_string(), "-1/2");
        assert_eq!((&q("1/3") + &q("1/6")).to_string(), "1/2");
        assert_eq!((&q("1/3") * &q("3/7")).to_string(), "1/7");
        assert!(q("1/3") < q("1/2"));
        assert_eq!(q("7/2").floor(), BigInt::from(3));
        assert_eq!(q("-7/2").floor(), BigInt::from(-4));
        assert_eq!(q("-7/2").ceil(), BigInt::from(-3));
        assert_eq!(q("3").ceil_log2_abs(), 2);
        assert_eq!(q("4").ceil_log2_abs(), 2);
        assert_eq!(q("1/4").ceil_log2_abs(), -2);
        assert_eq!(q("1/3").to_decimal(4), "0.3333");
    }

    #[test]
    fn emit01_is_one_third() {
        let x = digit_to_modulus(&DigitStreamReal::new(0, corpus::m_emit01()), &Budget::steps(10_000)).unwrap();
        let err = (&x.approx(10).unwrap() - &q("1/3")).abs();
        assert!(err <= Rational::pow2_neg(10));
    }

    #[test]
    fn zeros_and_short_streams() {
        let z = constant_digit_real(0, 2, &Budget::steps(1000));
        assert!(z.approx(20).unwrap().is_zero());
        let one = digit_to_modulus(&DigitStreamReal::new(0, corpus::m_emit_one()), &Budget::steps(1000)).unwrap();
        assert!(matches!(one.approx(3), Err(RealError::InsufficientDigits { got: 1, .. })));
        assert!(digit_to_modulus(&DigitStreamReal::new(0, corpus::m_halt()), &Budget::steps(1000)).is_err());
    }

    #[test]
    fn exp_values() {
        let e = ModulusReal::from_rational(Rational::one()).exp(Some(Rational::one())).unwrap();
        let v = e.approx(8).unwrap();
        assert!((&v - &q("2.71828125")).abs() <= Rational::pow2_neg(8));
        let e0 = ModulusReal::from_rational(Rational::zero()).exp(Some(Rational::zero())).unwrap();
        assert!((&e0.approx(12).unwrap() - &Rational::one()).abs() <= Rational::pow2_neg(12));
        assert!(ModulusReal::from_rational(Rational::one()).exp(None).is_err());
    }

    #[test]
    fn boundary_extraction() {
        let quarter = ModulusReal::from_rational(q("1/4"));
        match modulus_to_digits(&quarter, 4, 2, 64).unwrap() {
            DigitExtraction::Undetermined { position, digits, low, high } => {
                assert_eq!(position, 2);
                assert_eq!(digits, vec![0]);
                assert!(low < q("1/4") && q("1/4") < high);
            }
            other => panic!("{other:?}"),
        }
        let third = ModulusReal::from_rational(q("1/3"));
        let d = modulus_to_digits(&third, 8, 2, 64).unwrap();
        assert_eq!(
            d,
            DigitExtraction::Digits { integer_part: BigInt::zero(), digits: vec![0, 1, 0, 1, 0, 1, 0, 1] }
        );
    }

    #[test]
    fn comparisons() {
        let z = ModulusReal::from_rational(Rational::zero());
        let o = ModulusReal::from_rational(Rational::one());
        assert_eq!(compare(&z, &o, 10).unwrap(), Comparison::Less { precision: 2 });
        assert_eq!(compare(&o, &o, 10).unwrap(), Comparison::Overlapping { precision: 10 });
    }
}
