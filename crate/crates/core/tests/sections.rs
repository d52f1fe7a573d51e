use std::collections::BTreeSet;

use agcodes_core::code::{hamming_distance, Word};
use agcodes_core::curve::{Divisor, Place};
use agcodes_core::field::{field_of_order, Field, ProjValue};
use agcodes_core::poly::Poly;
use agcodes_core::rational::RationalFunction;
use agcodes_core::section::{
    asymptotic_count_estimate, build_section_code, multiplicity_with_twist, p1_points, SectionSpace,
};

fn space(q: u64, divisor: &str) -> SectionSpace {
    let f = field_of_order(q).unwrap();
    let d = if divisor.is_empty() {
        Divisor::zero()
    } else {
        Divisor::parse(&f, divisor).unwrap()
    };
    SectionSpace::new(&f, &d).unwrap()
}

fn brute_distance(words: &[Word]) -> usize {
    let mut best = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            best = best.min(hamming_distance(a, b));
        }
    }
    best
}

#[test]
fn section_counts() {
    // rational functions of degree exactly d >= 1 number q^(2d-1) (q^2 - 1),
    // so together with the q constants there are q^(2h+1) of height <= h
    for (q, h, d) in [
        (2u64, 0, ""),
        (2, 1, ""),
        (2, 3, "poly(1,1,1):1;inf:-2"),
        (3, 2, "pt(1):1;inf:-1"),
        (4, 2, ""),
        (5, 1, "pt(0):2;pt(4):-2"),
    ] {
        let s = space(q, d);
        let all = s.enumerate(h).unwrap();
        assert_eq!(all.len() as u64, q.pow(2 * h as u32 + 1), "q = {q}, h = {h}, D = {d}");
        let distinct: BTreeSet<String> = all.iter().map(|f| f.to_string()).collect();
        assert_eq!(distinct.len(), all.len());
    }
    assert_eq!(space(2, "").enumerate(1).unwrap().len(), 8);
    assert!(space(2, "").enumerate(10).is_err());
}

#[test]
fn heights_agree_with_valuations() {
    let s = space(2, "poly(1,1,1):1;inf:-2");
    assert_eq!(
        s.psi().to_string(),
        RationalFunction::parse(s.field(), "1,1,1").unwrap().to_string()
    );
    for h in 0..=3 {
        for f in s.enumerate(h).unwrap() {
            let height = s.height(&f);
            assert!(height <= h);
            if !f.is_zero() {
                // (f) + D is principal, so its positive and negative parts balance
                assert_eq!(s.height_by_valuations(&f), (height, height), "{f}");
            }
        }
    }
}

#[test]
fn multiplicity_examples() {
    let s = space(3, "");
    let f = RationalFunction::parse(s.field(), "0,1").unwrap();
    let g = RationalFunction::parse(s.field(), "0,1,1").unwrap();
    // x and x + x^2 differ by x^2: a double solution at 0 and a simple one at infinity
    assert_eq!(s.total_multiplicity(&f, &g).unwrap(), 3);
    assert_eq!(
        s.solution_multiplicity(&f, &g, &Place::p1(ProjValue::Finite(0)))
            .unwrap(),
        2
    );
    assert_eq!(s.solution_multiplicity(&f, &g, &Place::infinity()).unwrap(), 1);
    assert_eq!(
        s.solution_multiplicity(&f, &g, &Place::p1(ProjValue::Finite(1)))
            .unwrap(),
        0
    );

    // over GF(2), x^2 + x + 1 and 0 agree only at the degree-2 place
    let s = space(2, "");
    let f = RationalFunction::parse(s.field(), "1,1,1").unwrap();
    let g = RationalFunction::zero(s.field());
    let place = Place::from_irreducible(Poly::new(s.field(), vec![1, 1, 1]));
    assert_eq!(s.solution_multiplicity(&f, &g, &place).unwrap(), 1);
    assert_eq!(s.total_multiplicity(&f, &g).unwrap(), 2);
}

#[test]
fn multiplicity_equals_total_height() {
    for (q, d) in [
        (2u64, ""),
        (2, "poly(1,1,1):1;inf:-2"),
        (3, "pt(1):1;inf:-1"),
        (3, "poly(1,0,1):-1;pt(0):2"),
        (4, ""),
        (4, "pt(2):1;pt(3):-1"),
    ] {
        let report = space(q, d).proposition_check(5, 200, q).unwrap();
        assert_eq!(report.pairs, 200);
        assert!(report.holds(), "q = {q}, D = {d}: {report:?}");
    }
}

/// Multiplying the twist by a unit at the place leaves multiplicities unchanged.
#[test]
fn multiplicity_does_not_depend_on_the_twist() {
    let s = space(5, "pt(1):2;pt(3):-1;inf:-1");
    let f = s.field().clone();
    let sections = s.enumerate(1).unwrap();
    let mut places: Vec<Place> = (0..5).map(|a| Place::p1(ProjValue::Finite(a))).collect();
    places.push(Place::infinity());
    for place in &places {
        let unit = match place {
            Place::Rational(p) => match p.as_p1().unwrap() {
                // x - a + 1 takes the value 1 at a
                ProjValue::Finite(a) => RationalFunction::from_poly(Poly::new(&f, vec![f.sub(1, a), 1])),
                ProjValue::Infinity => RationalFunction::parse(&f, "1,2/0,1").unwrap(),
            },
            Place::Closed(_) => unreachable!(),
        };
        let phi = s.twist(place).unwrap();
        let other = &phi * &unit;
        for (i, a) in sections.iter().enumerate().step_by(7) {
            for b in sections[i + 1..].iter().step_by(5) {
                assert_eq!(
                    multiplicity_with_twist(&phi, a, b, place).unwrap(),
                    multiplicity_with_twist(&other, a, b, place).unwrap(),
                    "{a} vs {b} at {place}"
                );
            }
        }
    }
}

fn times(f: &Field, c: u32, n: usize) -> u32 {
    (0..n).fold(0, |acc, _| f.add(acc, c))
}

fn derivative(p: &Poly) -> Poly {
    let f = p.field();
    let c: Vec<u32> = p
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| times(f, c, i))
        .collect();
    Poly::new(f, c)
}

/// `(u'v - uv') / v^2` at `a`, for `v(a) != 0`.
fn derivative_value(g: &RationalFunction, a: u32) -> u32 {
    let f = g.field();
    let (u, v) = (g.num(), g.den());
    let top = f.sub(
        f.mul(derivative(u).eval(a), v.eval(a)),
        f.mul(u.eval(a), derivative(v).eval(a)),
    );
    f.div(top, f.mul(v.eval(a), v.eval(a))).unwrap()
}

#[test]
fn first_derivative_words_match_formal_derivatives() {
    for (q, d) in [(5u64, ""), (5, "pt(2):1;inf:-1"), (4, "pt(1):-1;inf:1")] {
        let s = space(q, d);
        let points: Vec<ProjValue> = (0..q as u32).map(ProjValue::Finite).collect();
        for g in s.enumerate(1).unwrap() {
            let phi1 = s.phi1(&g, &points).unwrap();
            for (j, &p) in points.iter().enumerate() {
                let twisted = s.twisted(&g, &Place::p1(p)).unwrap();
                let ProjValue::Finite(a) = p else { unreachable!() };
                if twisted.den().eval(a) != 0 {
                    assert_eq!(phi1[j], derivative_value(&twisted, a), "{g} at {a}");
                }
            }
        }
    }
}

#[test]
fn phi0_separates_sections_of_small_height() {
    let s = space(3, "pt(0):1;inf:-1");
    let points = p1_points(s.field());
    let sections = s.enumerate(1).unwrap();
    let words: BTreeSet<Word> = sections.iter().map(|f| s.phi0(f, &points).unwrap()).collect();
    assert_eq!(words.len(), sections.len());
}

#[test]
fn section_code_examples() {
    let s = space(5, "");
    let points = p1_points(s.field());
    let code = build_section_code(&s, 2, &points).unwrap();
    assert_eq!(code.code.length(), 6);
    assert_eq!(code.code.len(), 3125);
    assert!(brute_distance(code.code.words()) >= 2);

    let s = space(4, "");
    let code = build_section_code(&s, 0, &p1_points(s.field())).unwrap();
    let words: BTreeSet<Word> = code.code.words().iter().cloned().collect();
    let repetition: BTreeSet<Word> = (0..4).map(|c| vec![c; 5]).collect();
    assert_eq!(words, repetition);
    assert_eq!(brute_distance(code.code.words()), 5);

    assert!(build_section_code(&s, 3, &p1_points(s.field())).is_err());
}

#[test]
fn count_against_asymptotic_estimate() {
    for (q, h) in [(2u64, 2usize), (3, 2), (4, 1)] {
        let s = space(q, "");
        let exact = s.enumerate(h).unwrap().len() as f64;
        let n = q as usize + 1;
        let estimate = asymptotic_count_estimate(q as u32, n, h);
        println!("q = {q}, h = {h}: #M = {exact}, estimate = {estimate:.3}");
        assert!(estimate > 0.0);
    }
}
