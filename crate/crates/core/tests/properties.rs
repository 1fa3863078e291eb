use proptest::prelude::*;

use circlefree::codec::{canonicalize, decode, encode, parse_text, render, DescriptionNumber};
use circlefree::diag::{fixed_point_machine, Transform};
use circlefree::exec::{
    check_certificate, emit_digits, event_step, make_certificate, run, universal, Budget, DigitPrefix, Event, Goal,
    Verdict,
};
use circlefree::machine::Machine;
use circlefree::reals::{ModulusReal, Rational};
use circlefree::reduce::{bounded_agreement, Reduction};

fn valid_machine() -> impl Strategy<Value = (DescriptionNumber, Machine)> {
    (0u64..2_000_000).prop_filter_map("invalid encoding", |n| {
        let n = DescriptionNumber::from_u64(n);
        decode(&n).ok().map(|m| (n, m))
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..1000).prop_map(|(p, q)| Rational::from_ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn encode_inverts_decode((n, m) in valid_machine()) {
        prop_assert_eq!(encode(&m), n);
    }

    #[test]
    fn render_parses_back((_, m) in valid_machine()) {
        let back = parse_text(&render(&m)).unwrap();
        prop_assert!(back.same_table(&m));
    }

    #[test]
    fn canonical_form_is_idempotent((_, m) in valid_machine()) {
        let (c, r) = canonicalize(&m);
        prop_assert!(r.is_identity());
        prop_assert!(canonicalize(&c).0.same_table(&c));
    }

    #[test]
    fn universal_matches_direct_run((n, m) in valid_machine()) {
        let b = Budget::steps(500);
        prop_assert_eq!(universal(&n, &[], &b, false).ok(), run(&m, &[], &b).ok());
    }

    #[test]
    fn larger_budgets_keep_verdicts((_, m) in valid_machine(), small in 1u64..200) {
        if let Ok(a) = run(&m, &[], &Budget::steps(small)) {
            if a.verdict != Verdict::BudgetExhausted {
                let b = run(&m, &[], &Budget::steps(small * 10)).unwrap();
                prop_assert_eq!(a.verdict, b.verdict);
                prop_assert_eq!(a.emitted, b.emitted);
            }
        }
    }

    #[test]
    fn event_steps_agree_with_runs((_, m) in valid_machine()) {
        let b = Budget::steps(300).with_configs(0);
        if let Ok(out) = run(&m, &[], &b) {
            let halt = event_step(&m, &[], Event::Halt, 300);
            prop_assert_eq!(halt, match out.verdict { Verdict::Halted { steps } => Some(steps), _ => None });
            prop_assert_eq!(event_step(&m, &[], Event::NthDigit(1), 300).is_some(), !out.emitted.is_empty());
        }
    }

    #[test]
    fn certificates_validate_and_reject_edits((_, m) in valid_machine(), pick in any::<prop::sample::Index>()) {
        let goal = match run(&m, &[], &Budget::steps(2_000)) {
            Ok(out) => match out.verdict {
                Verdict::Halted { .. } => Goal::Halts,
                Verdict::ProvablyLooping { .. } => Goal::Repeats,
                Verdict::BudgetExhausted => return Ok(()),
            },
            Err(_) => return Ok(()),
        };
        let cert = make_certificate(&m, &[], goal, &Budget::steps(2_000)).unwrap();
        prop_assert!(check_certificate(&cert).is_valid());
        if !cert.steps.is_empty() {
            let mut bad = cert.clone();
            let i = pick.index(bad.steps.len());
            let d = &mut bad.steps[i].digest;
            let flipped = if d.starts_with('0') { "1" } else { "0" };
            d.replace_range(0..1, flipped);
            prop_assert!(!check_certificate(&bad).is_valid());
        }
    }

    #[test]
    fn reductions_agree_on_random_machines((_, m) in valid_machine()) {
        for r in [
            Reduction::HaltingToPrinting,
            Reduction::PrintingToHalting { symbol: 1 },
            Reduction::NDigitsToHalting { n: 2 },
            Reduction::HaltingToNDigits { n: 2 },
            Reduction::OmdToHalting { t: 1 },
            Reduction::HaltingToOmd,
        ] {
            let mismatches = bounded_agreement(r, &m, &[], &[50, 500]);
            prop_assert!(mismatches.is_empty(), "{:?}", mismatches);
        }
    }

    #[test]
    fn rational_ring_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) * &b.recip(), a.clone());
        }
        if (a.to_f64() - b.to_f64()).abs() > 1e-9 {
            prop_assert_eq!(a < b, a.to_f64() < b.to_f64());
        }
    }

    #[test]
    fn rational_text_round_trips(a in rational()) {
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn floor_brackets(a in rational()) {
        let f = Rational::from_integer(a.floor());
        prop_assert!(f <= a && a < &f + &Rational::one());
    }

    #[test]
    fn modulus_arithmetic_is_within_tolerance(a in rational(), b in rational(), n in 0u32..40) {
        let (x, y) = (ModulusReal::from_rational(a.clone()), ModulusReal::from_rational(b.clone()));
        let eps = Rational::pow2_neg(n);
        prop_assert!((&x.add(&y).approx(n).unwrap() - &(&a + &b)).abs() <= eps);
        prop_assert!((&x.mul(&y).approx(n).unwrap() - &(&a * &b)).abs() <= eps);
        prop_assert!((&x.neg().approx(n).unwrap() + &a).abs() <= eps);
    }
}

fn transform() -> impl Strategy<Value = Transform> {
    let leaf = prop_oneof![
        Just(Transform::Identity),
        prop::collection::vec(0u8..3, 0..4).prop_map(|ds| Transform::prepend(&ds)),
        Just(Transform::Constant(circlefree::corpus::m_emit01())),
        Just(Transform::Constant(circlefree::corpus::bb2())),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.then(b)),
            (inner, 0u8..3, prop::option::of(0u8..3)).prop_map(|(t, d, to)| Transform::map(&[(d, to)], t)),
        ]
    })
}

fn prefix(m: &Machine) -> (Vec<u8>, bool) {
    match emit_digits(m, 10, &Budget::steps(10_000)).unwrap() {
        DigitPrefix::Digits(d) => (d, true),
        DigitPrefix::Insufficient(d, _) => (d, false),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_transforms_have_fixed_points(f in transform()) {
        let e = decode(&encode(&fixed_point_machine(&f))).unwrap();
        prop_assert_eq!(prefix(&e), prefix(&f.apply(&e)));
    }
}
