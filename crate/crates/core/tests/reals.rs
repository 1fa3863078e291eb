use circlefree::corpus;
use circlefree::exec::Budget;
use circlefree::reals::{
    compare, constant_digit_real, digit_to_modulus, digits_for_precision, modulus_to_digits, Comparison,
    DigitExtraction, DigitStreamReal, ModulusReal, RealError, Rational,
};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn digits_for_precision_covers_the_tolerance() {
    for base in [2u32, 3, 10, 16] {
        for n in 0..64 {
            let k = digits_for_precision(n, base);
            let tail = Rational::new(1.into(), num_bigint::BigInt::from(base).pow(k as u32));
            assert!(tail <= Rational::pow2_neg(n), "n = {n}, base = {base}");
        }
    }
}

#[test]
fn exp_one_matches_e() {
    // e = 2.71828182845904523536028747135...
    let e = q("2.71828182845904523536028747135");
    let x = ModulusReal::from_rational(Rational::one()).exp(Some(Rational::one())).unwrap();
    assert!((&x.approx(8).unwrap() - &q("2.71828125")).abs() <= Rational::pow2_neg(8));
    for n in [0, 8, 30, 60] {
        let err = (&x.approx(n).unwrap() - &e).abs();
        assert!(err <= &Rational::pow2_neg(n) + &Rational::pow2_neg(90), "n = {n}");
    }
}

#[test]
fn exp_needs_a_bound() {
    let x = ModulusReal::from_rational(Rational::one());
    assert!(matches!(x.exp(None), Err(RealError::MissingBound)));
}

#[test]
fn exp_of_zero_is_one() {
    let x = ModulusReal::from_rational(Rational::zero()).exp(Some(Rational::one())).unwrap();
    assert!((&x.approx(40).unwrap() - &Rational::one()).abs() <= Rational::pow2_neg(40));
}

#[test]
fn third_has_alternating_binary_digits() {
    let x = digit_to_modulus(&DigitStreamReal::new(0, corpus::m_emit01()), &Budget::steps(100_000)).unwrap();
    match modulus_to_digits(&x, 12, 2, 64).unwrap() {
        DigitExtraction::Digits { integer_part, digits } => {
            assert_eq!(integer_part, 0.into());
            assert_eq!(digits, vec![0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn short_streams_cannot_be_approximated() {
    let d = DigitStreamReal::new(0, corpus::m_emit_one());
    let x = digit_to_modulus(&d, &Budget::steps(10_000));
    let err = match x {
        Err(e) => e,
        Ok(x) => x.approx(10).unwrap_err(),
    };
    assert!(matches!(err, RealError::InsufficientDigits { .. }));
}

#[test]
fn sevens_and_twos_sum_to_one_without_a_first_digit() {
    let b = Budget::steps(1 << 20);
    let s = constant_digit_real(2, 10, &b).add(&constant_digit_real(7, 10, &b));
    for n in 0..=24 {
        assert!((&s.approx(n).unwrap() - &Rational::one()).abs() <= Rational::pow2_neg(n));
    }
    assert!(matches!(modulus_to_digits(&s, 1, 10, 32).unwrap(), DigitExtraction::Undetermined { position: 1, .. }));
}

#[test]
fn separated_values_compare() {
    let a = ModulusReal::from_rational(q("1/3"));
    let b = ModulusReal::from_rational(q("0.34"));
    assert!(matches!(compare(&a, &b, 20).unwrap(), Comparison::Less { .. }));
    assert!(matches!(compare(&b, &a, 20).unwrap(), Comparison::Greater { .. }));
    assert!(matches!(compare(&a, &a, 20).unwrap(), Comparison::Overlapping { precision: 20 }));
}

#[test]
fn products_of_streams() {
    let b = Budget::steps(1 << 20);
    let two = constant_digit_real(2, 10, &b);
    let p = two.mul(&two);
    let exact = q("4/81");
    assert!((&p.approx(30).unwrap() - &exact).abs() <= Rational::pow2_neg(30));
}
