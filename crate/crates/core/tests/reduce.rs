use circlefree::corpus::{self, corpus};
use circlefree::exec::{event_step, run, Budget, Event, EventLog, Verdict};
use circlefree::machine::{Convention, Machine};
use circlefree::reduce::{
    self, bounded_agreement, circlefree_from_infinite, infinite_from_printing, to_halt_state, to_halt_symbol,
    variant_pk, OracleAnswer, ReduceError, Reduction,
};

/// Bounded printing oracle used as a stand-in for the real one.
fn prints_zero_within(steps: u64) -> impl FnMut(&Machine) -> OracleAnswer {
    move |m| OracleAnswer::from_bool(event_step(m, &[], Event::Emit(0), steps).is_some())
}

#[test]
fn single_zero_machine_answers_no_at_k1() {
    let p = corpus::m_emit_one_digit(0);
    let a = infinite_from_printing(&p, prints_zero_within(1000), 10).unwrap();
    assert_eq!((a.answer, a.k), (OracleAnswer::No, 1));
}

#[test]
fn endless_zeros_stay_inconclusive() {
    let p = corpus::constant_emitter(0, 2);
    let e = infinite_from_printing(&p, prints_zero_within(1000), 5).unwrap_err();
    assert_eq!(e, ReduceError::Inconclusive { cap: 5 });
}

#[test]
fn variant_replaces_the_first_zeros() {
    let p = corpus::m_emit01();
    let v = variant_pk(&p, 2).unwrap();
    let out = run(&v, &[], &Budget::steps(8).with_configs(0)).unwrap();
    assert_eq!(out.emitted, vec![2, 1, 2, 1, 0, 1, 0, 1]);
    assert_eq!(v.base(), 3);
}

#[test]
fn circle_free_by_either_digit() {
    let mut asked = Vec::new();
    let ans = circlefree_from_infinite(&corpus::m_emit01(), |_, d| {
        asked.push(d);
        OracleAnswer::from_bool(d == 1)
    });
    assert_eq!(ans, OracleAnswer::Yes);
    assert_eq!(asked, vec![0, 1]);
}

#[test]
fn convention_translations_keep_halting_times() {
    for (m, x) in corpus() {
        let input = m.tape_from_names(&x).unwrap();
        let b = Budget::steps(5_000);
        let Ok(orig) = run(&m, &input, &b) else { continue };
        let other = match m.convention() {
            Convention::HaltState => to_halt_symbol(&m),
            Convention::HaltSymbol => to_halt_state(&m),
        };
        let moved = reduce::remap_tape(&m, &other, &input);
        let out = run(&other, &moved, &b).unwrap();
        if let Verdict::Halted { steps } = orig.verdict {
            assert_eq!(out.verdict, Verdict::Halted { steps }, "{}", m.name());
        }
        assert_eq!(out.emitted, orig.emitted, "{}", m.name());
    }
}

#[test]
fn reductions_agree_on_the_corpus() {
    let rs = [
        Reduction::HaltingToPrinting,
        Reduction::PrintingToHalting { symbol: 0 },
        Reduction::NDigitsToHalting { n: 2 },
        Reduction::HaltingToNDigits { n: 2 },
        Reduction::OmdToHalting { t: 3 },
        Reduction::HaltingToOmd,
    ];
    for (m, x) in corpus() {
        let input = m.tape_from_names(&x).unwrap();
        for r in rs {
            let bad = bounded_agreement(r, &m, &input, &[10, 100, 1000]);
            assert!(bad.is_empty(), "{} on {}: {bad:?}", r.name(), m.name());
        }
    }
}

#[test]
fn halting_to_printing_emits_exactly_when_halting() {
    let q = reduce::halting_to_printing(&corpus::bb2(), &[]);
    let log = EventLog::record(&q, &[], 1000, 10);
    assert_eq!(log.emissions.len(), 1);
    assert_eq!(log.emissions[0].1, 0);
    let spin = reduce::halting_to_printing(&corpus::m_spin(), &[]);
    assert!(EventLog::record(&spin, &[], 1000, 10).emissions.is_empty());
}

#[test]
fn pi02_counts() {
    let count = |p: &Machine| {
        let q = reduce::pi02_to_circlefree(p, &[]);
        run(&q, &[], &Budget::steps(300_000).with_configs(0)).unwrap().emitted.len()
    };
    assert!(count(&reduce::pred_k_equals_n()) >= 10);
    assert_eq!(count(&reduce::pred_n_below_3()), 3);
    assert_eq!(count(&reduce::pred_reject_all()), 0);
}
