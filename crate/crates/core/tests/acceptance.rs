//! End-to-end acceptance checks. Run with `cargo test --test acceptance`;
//! prints one PASS/FAIL line per criterion and fails if any criterion does.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use circlefree::codec::{canonicalize, first_machines};
use circlefree::corpus::corpus;
use circlefree::diag::{self, AcceptAll, DiagonalError, Truthful, DEFAULT_FUEL};
use circlefree::exec::{
    check_certificate, classify, emit_digits, make_certificate, run, run_traced, universal, Budget,
    Classification, DigitPrefix, Goal, TraceCertificate, Verdict,
};
use circlefree::machine::{Machine, StepResult};
use circlefree::reals::{digit_to_modulus, modulus_to_digits, DigitExtraction, DigitStreamReal, Rational};
use circlefree::reduce::{self, bounded_agreement, Reduction};
use circlefree::{decode, encode, parse_text, render};

const SWEEP_MACHINES: usize = 500;
const SWEEP_BUDGETS: [u64; 3] = [100, 1_000, 10_000];
const SWEEP_TIME_LIMIT: Duration = Duration::from_secs(300);
const MIN_DECIDERS: usize = 10;
const CARRY_MAX_N: u32 = 24;
const CARRY_TIE_BUDGETS: [usize; 5] = [1, 16, 256, 4096, 1 << 16];
const MIN_ADDERS: usize = 3;
const MIN_TRANSFORMS: usize = 20;
const FIXPOINT_DIGITS: usize = 10;
const FIXPOINT_STEPS: u64 = 10_000;
const DIAGONAL_N: usize = 20;
const DIAGONAL_STEPS: u64 = 10_000;
/// The first 50 machines contain only 15 that emit 20 digits; the 20th
/// such machine sits at index 65.
const DIAGONAL_SCAN_CAP: usize = 100;
const PI02_STEPS: u64 = 200_000;
const PI02_UNBOUNDED_MIN: usize = 10;
const CERT_MACHINES: usize = 500;
const CERT_STEPS: u64 = 10_000;
const TAMPER_SAMPLE: usize = 40;
const UNIVERSAL_MACHINES: usize = 200;
const UNIVERSAL_STEPS: u64 = 2_000;
const CLASSIFY_STEPS: u64 = 10_000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reductions() -> Vec<Reduction> {
    vec![
        Reduction::HaltingToPrinting,
        Reduction::PrintingToHalting { symbol: 0 },
        Reduction::NDigitsToHalting { n: 3 },
        Reduction::HaltingToNDigits { n: 3 },
        Reduction::OmdToHalting { t: 2 },
        Reduction::HaltingToOmd,
    ]
}

fn reduction_sweep() -> Outcome {
    let start = Instant::now();
    let machines = first_machines(SWEEP_MACHINES);
    let mut checked = 0;
    for r in reductions() {
        let mismatches: Vec<_> = machines
            .par_iter()
            .flat_map_iter(|(_, m)| bounded_agreement(r, m, &[], &SWEEP_BUDGETS))
            .collect();
        ensure(mismatches.is_empty(), || format!("{}: {} mismatches, first {:?}", r.name(), mismatches.len(), mismatches[0]))?;
        checked += machines.len() * SWEEP_BUDGETS.len();
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("6 reductions, {checked} (machine, budget) pairs, 0 mismatches, {:.1}s", elapsed.as_secs_f64()))
}

fn refuters() -> Outcome {
    let halting = diag::builtin_halting_deciders();
    let printing = diag::builtin_printing_deciders(0);
    ensure(halting.len() >= MIN_DECIDERS && printing.len() >= MIN_DECIDERS, || "too few deciders".into())?;
    for d in &halting {
        let r = diag::refute_halting_decider(d.as_ref(), DEFAULT_FUEL).map_err(|e| e.to_string())?;
        ensure(check_certificate(&r.certificate).is_valid(), || format!("{}: certificate rejected", d.name()))?;
        ensure(diag::check_refutation(&r).is_valid(), || format!("{}: refutation rejected", d.name()))?;
    }
    for d in &printing {
        let r = diag::refute_printing_decider(d.as_ref(), 0, DEFAULT_FUEL).map_err(|e| e.to_string())?;
        ensure(check_certificate(&r.certificate).is_valid(), || format!("{}: certificate rejected", d.name()))?;
        ensure(diag::check_refutation(&r).is_valid(), || format!("{}: refutation rejected", d.name()))?;
    }
    Ok(format!("{} halting and {} printing deciders refuted, 0 escapes", halting.len(), printing.len()))
}

fn carry() -> Outcome {
    let budget = Budget::steps(1 << 20);
    let stream = |d| DigitStreamReal::new(0, circlefree::corpus::constant_emitter(d, 10));
    let a = digit_to_modulus(&stream(2), &budget).map_err(|e| e.to_string())?;
    let b = digit_to_modulus(&stream(7), &budget).map_err(|e| e.to_string())?;
    let sum = a.add(&b);
    for n in 0..=CARRY_MAX_N {
        let q = sum.approx(n).map_err(|e| e.to_string())?;
        let err = (&q - &Rational::one()).abs();
        ensure(err <= Rational::pow2_neg(n), || format!("approx({n}) = {q} is not within 2^-{n} of 1"))?;
    }
    for tie in CARRY_TIE_BUDGETS {
        let d = modulus_to_digits(&sum, 1, 10, tie).map_err(|e| e.to_string())?;
        ensure(matches!(d, DigitExtraction::Undetermined { position: 1, .. }), || {
            format!("tie budget {tie}: {d:?}")
        })?;
    }
    let adders = diag::builtin_adders();
    ensure(adders.len() >= MIN_ADDERS, || "too few adders".into())?;
    for adder in &adders {
        let defeat = diag::adder_adversary(adder.as_ref(), 10_000).map_err(|e| e.to_string())?;
        diag::check_adder_evidence(&defeat.evidence, 10_000).map_err(|e| format!("{}: {e}", adder.name()))?;
    }
    Ok(format!(
        "approx within 2^-n for n <= {CARRY_MAX_N}; undetermined at tie budgets up to 2^16; {} adders defeated",
        adders.len()
    ))
}

/// Emitted prefix of up to `n` digits and whether all `n` appeared.
fn prefix(m: &Machine, n: usize, steps: u64) -> Result<(Vec<u8>, bool), String> {
    match emit_digits(m, n, &Budget::steps(steps)).map_err(|e| e.to_string())? {
        DigitPrefix::Digits(d) => Ok((d, true)),
        DigitPrefix::Insufficient(d, _) => Ok((d, false)),
    }
}

fn fixed_points() -> Outcome {
    let transforms = diag::builtin_transforms();
    ensure(transforms.len() >= MIN_TRANSFORMS, || "too few transforms".into())?;
    for f in &transforms {
        let e = decode(&diag::fixed_point(f)).map_err(|e| e.to_string())?;
        let fe = f.apply(&e);
        let (pe, full_e) = prefix(&e, FIXPOINT_DIGITS, FIXPOINT_STEPS)?;
        let (pf, full_f) = prefix(&fe, FIXPOINT_DIGITS, FIXPOINT_STEPS)?;
        ensure(pe == pf && full_e == full_f, || format!("{f}: e gives {pe:?}, f(e) gives {pf:?}"))?;
    }
    Ok(format!("{} transforms, 0 disagreements", transforms.len()))
}

fn diagonal() -> Outcome {
    let budget = Budget::steps(DIAGONAL_STEPS);
    let truthful = Truthful { digits: DIAGONAL_N, steps: DIAGONAL_STEPS };
    let beta = diag::diagonal_digits(&truthful, DIAGONAL_N, &budget, DIAGONAL_SCAN_CAP).map_err(|e| e.to_string())?;
    ensure(beta.digits.len() == DIAGONAL_N, || "short diagonal".into())?;
    for (i, entry) in beta.entries.iter().enumerate() {
        let m = decode(&entry.number).map_err(|e| e.to_string())?;
        let (ds, _) = prefix(&m, i + 1, DIAGONAL_STEPS)?;
        ensure(ds.len() == i + 1 && ds[i] != beta.digits[i], || {
            format!("position {}: machine {} gives {:?}, beta has {}", i + 1, entry.number, ds.get(i), beta.digits[i])
        })?;
    }
    let small = diag::diagonal_digits(&truthful, DIAGONAL_N, &budget, 50);
    let accepted_in_50 = match small {
        Err(DiagonalError::EmptyListExhausted { accepted, .. }) => accepted,
        Ok(_) => DIAGONAL_N,
        Err(e) => return Err(e.to_string()),
    };
    let all = diag::diagonal_digits(&AcceptAll, DIAGONAL_N, &budget, DIAGONAL_SCAN_CAP);
    ensure(matches!(all, Err(DiagonalError::ClassifierCounterexample { .. })), || format!("accept-all: {all:?}"))?;
    Ok(format!(
        "beta differs at all {DIAGONAL_N} positions (p_20 is machine #{}; first 50 machines give {accepted_in_50}); accept-all refuted",
        beta.entries.last().map_or(0, |e| e.index)
    ))
}

fn pi02() -> Outcome {
    let count = |p: &Machine| {
        let q = reduce::pi02_to_circlefree(p, &[]);
        run(&q, &[], &Budget::steps(PI02_STEPS).with_configs(0)).map(|o| o.emitted.len()).map_err(|e| e.to_string())
    };
    let unbounded = count(&reduce::pred_k_equals_n())?;
    let three = count(&reduce::pred_n_below_3())?;
    let zero = count(&reduce::pred_reject_all())?;
    ensure(unbounded >= PI02_UNBOUNDED_MIN && three == 3 && zero == 0, || {
        format!("emission counts {unbounded}, {three}, {zero}")
    })?;
    Ok(format!("emission counts {unbounded} (unbounded), {three}, {zero} within {PI02_STEPS} steps"))
}

/// Every claim the bounded run witnesses, as goals.
fn witnessed_goals(m: &Machine) -> Vec<Goal> {
    let mut goals = Vec::new();
    let Ok(c) = classify(m, &[], &Budget::steps(CERT_STEPS)) else { return goals };
    match c {
        Classification::Halted { .. } => goals.push(Goal::Halts),
        Classification::ProvablyLooping { .. } => goals.push(Goal::Repeats),
        Classification::Unknown => {}
    }
    if let Ok(out) = run(m, &[], &Budget::steps(CERT_STEPS).with_configs(0)) {
        if let Some(&d) = out.emitted.first() {
            goals.push(Goal::PrintsSymbol(d));
            goals.push(Goal::EmitsNthDigit(out.emitted.len().min(5)));
        }
        if let Verdict::Halted { .. } = out.verdict {
            for d in 0..m.base() {
                if !out.emitted.contains(&d) {
                    goals.push(Goal::HaltsWithoutPrinting(d));
                }
            }
        }
    }
    goals
}

fn certificates() -> Outcome {
    let mut machines: Vec<Machine> = first_machines(CERT_MACHINES).into_iter().map(|(_, m)| m).collect();
    machines.extend(corpus().into_iter().filter(|(_, x)| x.is_empty()).map(|(m, _)| m));
    let certs: Vec<TraceCertificate> = machines
        .par_iter()
        .map(|m| {
            witnessed_goals(m)
                .into_iter()
                .map(|g| make_certificate(m, &[], g, &Budget::steps(CERT_STEPS)).map_err(|e| format!("{}: {e}", m.name())))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    for c in &certs {
        ensure(check_certificate(c).is_valid(), || format!("valid certificate rejected: {:?}", c.claim))?;
    }
    let sample: Vec<&TraceCertificate> = certs.iter().step_by((certs.len() / TAMPER_SAMPLE).max(1)).collect();
    let tampered: usize = sample
        .par_iter()
        .map(|c| {
            let json = c.to_json().into_bytes();
            let mut n = 0;
            for i in 0..json.len() {
                let mut bad = json.clone();
                bad[i] ^= 0x01;
                let accepted = std::str::from_utf8(&bad)
                    .ok()
                    .and_then(|s| TraceCertificate::from_json(s).ok())
                    .is_some_and(|t| check_certificate(&t).is_valid());
                if accepted {
                    return Err(format!("tampered byte {i} accepted in {:?}", c.claim));
                }
                n += 1;
            }
            Ok(n)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    Ok(format!("{} certificates valid; {tampered} single-byte tamperings all rejected", certs.len()))
}

fn infrastructure() -> Outcome {
    for (m, _) in corpus() {
        let back = decode(&encode(&m)).map_err(|e| e.to_string())?;
        ensure(back.same_table(&canonicalize(&m).0), || format!("{}: decode(encode) differs", m.name()))?;
        let parsed = parse_text(&render(&m)).map_err(|e| e.to_string())?;
        ensure(parsed.same_table(&m), || format!("{}: parse(render) differs", m.name()))?;
    }
    let machines = first_machines(SWEEP_MACHINES);
    let budget = Budget::steps(UNIVERSAL_STEPS);
    for (n, m) in machines.iter().take(UNIVERSAL_MACHINES) {
        let direct = run_traced(m, &[], &budget);
        let via = universal(n, &[], &budget, true);
        match (direct, via) {
            (Ok(a), Ok(b)) => ensure(a == b, || format!("machine {}: universal trace differs", n.0))?,
            (Err(a), Err(b)) => ensure(a == b, || format!("machine {}: errors differ", n.0))?,
            _ => return Err(format!("machine {}: one run failed", n.0)),
        }
    }
    let bad: Vec<String> = machines
        .par_iter()
        .filter_map(|(n, m)| trichotomy_error(m).map(|e| format!("machine {}: {e}", n.0)))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("corpus round-trips; {UNIVERSAL_MACHINES} universal traces equal; {SWEEP_MACHINES} classifications sound"))
}

/// Replays a classification with the plain step function.
fn trichotomy_error(m: &Machine) -> Option<String> {
    let c = match classify(m, &[], &Budget::steps(CLASSIFY_STEPS)) {
        Ok(c) => c,
        Err(_) => return None,
    };
    let mut configs = vec![m.initial_config(&[])];
    let upto = match c {
        Classification::Halted { steps } => steps,
        Classification::ProvablyLooping { first_repeat_step, period } => first_repeat_step + period,
        Classification::Unknown => return None,
    };
    for _ in 0..upto {
        match m.step(configs.last().unwrap()) {
            Ok(StepResult::Next(c)) => configs.push(c),
            other => return Some(format!("replay stopped early: {other:?}")),
        }
    }
    let last = configs.last().unwrap();
    match c {
        Classification::Halted { .. } if !m.terminal_status(last).is_terminal() => Some("halted but not terminal".into()),
        Classification::ProvablyLooping { first_repeat_step, .. } => {
            let first = &configs[first_repeat_step as usize];
            (!first.same_situation(last) || m.terminal_status(last).is_terminal())
                .then(|| "claimed repeat does not repeat".into())
        }
        _ => None,
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("reduction soundness sweep", reduction_sweep),
        ("refuter completeness", refuters),
        ("carry problem", carry),
        ("fixed-point combinator", fixed_points),
        ("diagonal construction", diagonal),
        ("pi-0-2 construction", pi02),
        ("certificate soundness", certificates),
        ("infrastructure", infrastructure),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
