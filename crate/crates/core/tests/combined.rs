use std::collections::BTreeSet;

use agcodes_core::center::Strategy;
use agcodes_core::code::{hamming_distance, Word};
use agcodes_core::combined::{build_combined, threshold_check, CombinedParams, CombinedResult};
use agcodes_core::curve::Divisor;
use agcodes_core::field::{field_of_order, ProjValue};

fn brute_distance(words: &[Word]) -> usize {
    let mut best = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            best = best.min(hamming_distance(a, b));
        }
    }
    best
}

fn build(q: u64, divisor: &str, h: usize, s0: usize, d0: usize, strategy: Strategy) -> CombinedResult {
    let f = field_of_order(q).unwrap();
    let divisor = if divisor.is_empty() {
        Divisor::zero()
    } else {
        Divisor::parse(&f, divisor).unwrap()
    };
    let params = CombinedParams {
        divisor,
        h,
        s0,
        d0,
        points: None,
        strategy,
        center: None,
    };
    build_combined(&f, &params).unwrap()
}

#[test]
fn gf4_instance_meets_its_distance() {
    for d in ["", "pt(1):1;inf:-1"] {
        let res = build(4, d, 2, 1, 2, Strategy::Exhaustive);
        assert_eq!(res.section_count, 4usize.pow(5));
        assert!(res.is_injective());
        assert!(res.code.len() >= 2);
        assert!(brute_distance(res.code.words()) >= 2);
        let report = res.agreement_check(5000, 1).unwrap();
        assert_eq!(report.violations, 0, "{report:?}");
        assert!(report.min_agree0 + 2 >= 5);
        assert!(report.max_multiplicity <= 4);
    }
}

#[test]
fn exhaustive_beats_random_and_average() {
    let best = build(4, "", 2, 1, 2, Strategy::Exhaustive);
    let random = build(4, "", 2, 1, 2, Strategy::Random { seed: 9, trials: 50 });
    let again = build(4, "", 2, 1, 2, Strategy::Random { seed: 9, trials: 50 });
    assert_eq!(random.center, again.center);
    assert!(random.survivors.len() <= best.survivors.len());
    let avg = best.average.ceil().to_integer();
    assert!(num_bigint::BigInt::from(best.survivors.len()) >= avg);
}

#[test]
fn zero_radius_reduces_to_a_fibre() {
    // with s0 = 0 survivors share phi_0, so phi_1 alone must separate them
    let f = field_of_order(4).unwrap();
    let res = build(4, "", 3, 0, 4, Strategy::Exhaustive);
    let n = res.points.len();
    let fibre: Vec<_> = res
        .space
        .enumerate(3)
        .unwrap()
        .into_iter()
        .filter(|g| res.space.phi0(g, &res.points).unwrap() == res.center)
        .collect();
    assert_eq!(fibre.len(), res.survivors.len());
    assert!(brute_distance(res.code.words()) >= 2 * n - 2 * 3);
    assert_eq!(res.agreement_check(1000, 2).unwrap().violations, 0);

    let mut params = CombinedParams {
        divisor: Divisor::zero(),
        h: 3,
        s0: 0,
        d0: 4,
        points: None,
        strategy: Strategy::Exhaustive,
        center: Some(vec![0, 1, 2, 3, 4]),
    };
    let fixed = build_combined(&f, &params).unwrap();
    assert_eq!(fixed.center, vec![0, 1, 2, 3, 4]);
    let words: BTreeSet<Word> = fixed.code.words().iter().cloned().collect();
    assert_eq!(words.len(), fixed.survivors.len());
    params.center = Some(vec![0, 1, 2, 3, 5]);
    assert!(build_combined(&f, &params).is_err());
}

#[test]
fn first_derivative_examples() {
    let f5 = field_of_order(5).unwrap();
    let space = agcodes_core::section::SectionSpace::new(&f5, &Divisor::zero()).unwrap();
    let x2 = agcodes_core::rational::RationalFunction::parse(&f5, "0,0,1").unwrap();
    let pts: Vec<ProjValue> = (0..5).map(ProjValue::Finite).collect();
    // d/dx x^2 = 2x
    assert_eq!(space.phi1(&x2, &pts).unwrap(), vec![0, 2, 4, 1, 3]);
    let inv = agcodes_core::rational::RationalFunction::parse(&f5, "1/0,1").unwrap();
    // 1/x has a pole at 0, where its inverse x is expanded instead
    assert_eq!(space.phi1(&inv, &pts[..2]).unwrap(), vec![1, 4]);
}

#[test]
fn threshold_examples() {
    assert!(threshold_check(2, 1, 1));
    assert!(!threshold_check(4, 1, 4));
    // equality is not above the threshold
    assert!(!threshold_check(4, 4, 15));
    assert!(threshold_check(4, 5, 15));
    assert!(build(4, "", 2, 1, 2, Strategy::Exhaustive).threshold);
}

#[test]
fn preconditions() {
    let f = field_of_order(4).unwrap();
    let mut params = CombinedParams {
        divisor: Divisor::zero(),
        h: 3,
        s0: 1,
        d0: 2,
        points: None,
        strategy: Strategy::Exhaustive,
        center: None,
    };
    assert!(build_combined(&f, &params).is_err());
    params.h = 2;
    params.d0 = 0;
    assert!(build_combined(&f, &params).is_err());
    params.d0 = 2;
    params.divisor = Divisor::parse(&f, "inf:1").unwrap();
    assert!(build_combined(&f, &params).is_err());
}
