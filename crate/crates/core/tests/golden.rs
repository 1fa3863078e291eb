use circlefree::codec::{decode, encode, enumerate_machines, first_machines, pair, DescriptionNumber, Enumerator};
use circlefree::corpus::{self, corpus};
use num_bigint::BigUint;

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn valid_count_below_ten_thousand() {
    let valid = (0u64..10_000).filter(|&n| decode(&DescriptionNumber::from_u64(n)).is_ok()).count();
    assert_eq!(valid, 5117);
}

#[test]
fn first_hundred_numbers_are_pinned() {
    let expected: Vec<String> = golden("first100.txt").lines().map(String::from).collect();
    let got: Vec<String> = first_machines(100).into_iter().map(|(n, _)| n.0.to_string()).collect();
    assert_eq!(got, expected);
}

#[test]
fn first_five_hundred_end_at_680() {
    let ms = first_machines(500);
    assert_eq!(ms.last().unwrap().0, DescriptionNumber::from_u64(680));
}

#[test]
fn zero_is_the_empty_halting_machine() {
    let m = decode(&DescriptionNumber::from_u64(0)).unwrap();
    assert_eq!(m.num_states(), 1);
    assert!(m.table().iter().all(Option::is_none));
    assert_eq!(encode(&corpus::m_halt()), DescriptionNumber::from_u64(0));
    assert_eq!(enumerate_machines(0).table(), m.table());
}

#[test]
fn hand_computed_numbers() {
    // One state, blank only: radix 1 + 2 * 3 * 3 * 1 = 19 and header 0.
    // M_RUN moves right without writing: digit 1 + (0 * 3 + 1) * 1 = 2.
    // M_SPIN writes blank in place: digit 1 + ((1 * 3 + 0) * 3 + 2) * 1 = 12.
    let cantor = |a: u64, b: u64| (a + b) * (a + b + 1) / 2 + b;
    assert_eq!(cantor(0, 2), 5);
    assert_eq!(cantor(0, 12), 90);
    assert_eq!(encode(&corpus::m_run()), DescriptionNumber::from_u64(5));
    assert_eq!(encode(&corpus::m_spin()), DescriptionNumber::from_u64(90));
    assert_eq!(pair(&BigUint::from(0u32), &BigUint::from(12u32)), BigUint::from(90u32));
}

#[test]
fn corpus_numbers_are_pinned() {
    for line in golden("corpus_numbers.txt").lines() {
        let (name, number) = line.split_once(' ').unwrap();
        let m = corpus().into_iter().map(|(m, _)| m).find(|m| m.name() == name).unwrap();
        assert_eq!(encode(&m).0.to_string(), number, "{name}");
    }
}

#[test]
fn small_corpus_machines_appear_once_in_the_enumeration() {
    for (m, _) in corpus() {
        let n = encode(&m);
        if n.0 > BigUint::from(100_000u32) {
            continue;
        }
        let hits: Vec<usize> = Enumerator::new()
            .take_while(|(k, _)| k.0 <= n.0)
            .enumerate()
            .filter(|(_, (k, _))| *k == n)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(hits.len(), 1, "{}", m.name());
    }
}
