use fperfect_core::arith::fib;
use fperfect_core::markov::{
    brute_solutions, k3_pairs, verify_no_solutions, vieta_next, EmptinessArgument,
    EmptinessStatus, MarkovPair,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn as_u64(p: &MarkovPair) -> (u64, u64) {
    (
        u64::try_from(p.x()).unwrap(),
        u64::try_from(p.y()).unwrap(),
    )
}

fn fibonacci_pairs(bound: u64) -> Vec<(u64, u64)> {
    let mut expected = vec![(1, 1)];
    let mut j = 1;
    while fib(2 * j + 1) <= BigUint::from(bound) {
        expected.push((
            u64::try_from(fib(2 * j - 1)).unwrap(),
            u64::try_from(fib(2 * j + 1)).unwrap(),
        ));
        j += 1;
    }
    expected
}

#[test]
fn k3_brute_force_equals_fibonacci_pairs() {
    let bound = 100_000;
    let got: Vec<_> = brute_solutions(3, bound).iter().map(as_u64).collect();
    assert_eq!(got, fibonacci_pairs(bound));
}

#[test]
fn k3_vieta_iteration_equals_fibonacci_pairs() {
    let bound = BigUint::from(100_000u32);
    let mut p = MarkovPair::new(3, 1u32.into(), 1u32.into()).unwrap();
    let mut walked = vec![as_u64(&p)];
    loop {
        p = vieta_next(&p).unwrap();
        if *p.y() > bound {
            break;
        }
        walked.push(as_u64(&p));
    }
    assert_eq!(walked, fibonacci_pairs(100_000));
    let listed: Vec<_> = k3_pairs(walked.len() - 1).iter().map(as_u64).collect();
    assert_eq!(listed, walked[1..]);
}

#[test]
fn double_loop_oracle_agrees_for_small_bounds() {
    let bound = 600u64;
    for k in 1..=12u64 {
        let mut oracle = Vec::new();
        for x in 1..=bound {
            for y in x..=bound {
                if 1 + x * x + y * y == k * x * y {
                    oracle.push((x, y));
                }
            }
        }
        let got: Vec<_> = brute_solutions(k, bound).iter().map(as_u64).collect();
        assert_eq!(got, oracle, "k = {k}");
    }
}

#[test]
fn no_solutions_for_k_other_than_three() {
    let ks: Vec<u64> = [1, 2].into_iter().chain(4..=101).collect();
    for k in ks {
        assert!(brute_solutions(k, 10_000).is_empty(), "k = {k}");
    }
}

#[test]
fn every_k_other_than_three_is_certified_empty() {
    for k in [1u64, 2].into_iter().chain(4..=201) {
        let report = verify_no_solutions(k, 1000).unwrap();
        assert_eq!(report.status, EmptinessStatus::CertifiedEmpty, "k = {k}");
        assert!(report.argument.certifies());
        match (k, &report.argument) {
            (1 | 2, EmptinessArgument::Inequality) => {}
            (k, EmptinessArgument::Parity { residue_solutions, .. }) if k % 2 == 0 => {
                assert!(residue_solutions.is_empty(), "k = {k}");
            }
            (k, EmptinessArgument::Period { period_length, pattern_matches, .. }) if k % 2 == 1 => {
                assert_eq!(*period_length, 6);
                assert!(*pattern_matches);
            }
            (k, arg) => panic!("k = {k}: unexpected argument {arg:?}"),
        }
    }
}

#[test]
fn three_is_rejected() {
    assert!(verify_no_solutions(3, 100).is_err());
}

proptest! {
    #[test]
    fn vieta_jump_preserves_the_equation(j in 1usize..200) {
        let p = k3_pairs(j).pop().unwrap();
        let q = vieta_next(&p).unwrap();
        let lhs = BigUint::from(1u32) + q.x() * q.x() + q.y() * q.y();
        prop_assert_eq!(lhs, q.x() * q.y() * 3u32);
        prop_assert_eq!(q.x(), p.y());
    }
}
