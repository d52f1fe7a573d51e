use agcodes_core::curve::{build_curve, Curve, CurveFunction, CurveKind, Divisor, Place, Point};
use agcodes_core::field::{field_of_order, Field, ProjValue};
use agcodes_core::poly::{enumerate_irreducibles, Poly};
use proptest::prelude::*;

fn hermitian_affine_count(f: &Field, q0: u64) -> usize {
    let mut n = 0;
    for a in f.elements() {
        for b in f.elements() {
            if f.add(f.pow(b, q0), b) == f.pow(a, q0 + 1) {
                n += 1;
            }
        }
    }
    n
}

/// Pole orders `i q0 + j (q0 + 1) <= m` with `j < q0`, counted directly.
fn monomial_count(q0: i64, m: i64) -> usize {
    let mut n = 0;
    for j in 0..q0 {
        for i in 0..=m.max(0) {
            if i * q0 + j * (q0 + 1) <= m {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn point_counts_match_closed_forms() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
        let c = build_curve(CurveKind::ProjectiveLine, q).unwrap();
        assert_eq!(c.points().len() as u64, q + 1);
        assert_eq!(c.genus(), 0);
    }
    for (q, q0) in [(4u64, 2u64), (9, 3), (16, 4)] {
        let c = build_curve(CurveKind::Hermitian, q).unwrap();
        let brute = hermitian_affine_count(c.field(), q0) + 1;
        assert_eq!(c.points().len(), brute);
        assert_eq!(c.points().len() as u64, q0 * q0 * q0 + 1);
        assert_eq!(c.genus(), q0 * (q0 - 1) / 2);
    }
    assert!(build_curve(CurveKind::Hermitian, 8).is_err());
}

#[test]
fn canonical_uniformizers_have_valuation_one_everywhere() {
    for (kind, q) in [
        (CurveKind::ProjectiveLine, 5),
        (CurveKind::ProjectiveLine, 4),
        (CurveKind::Hermitian, 4),
        (CurveKind::Hermitian, 9),
    ] {
        let c = build_curve(kind, q).unwrap();
        for p in c.points() {
            let t = c.uniformizer(p).unwrap();
            assert_eq!(c.parameter_valuation(&t, p).unwrap(), 1, "{kind} q = {q} at {p}");
        }
    }
}

#[test]
fn hermitian_riemann_roch_dimensions() {
    for q in [4u64, 9] {
        let c = build_curve(CurveKind::Hermitian, q).unwrap();
        let q0 = c.q0().unwrap() as i64;
        let g = c.genus() as i64;
        for m in 0..=20 {
            let d = Divisor::single(Place::infinity(), m);
            let basis = c.riemann_roch_basis(&d).unwrap();
            assert_eq!(basis.len(), monomial_count(q0, m), "q0 = {q0}, m = {m}");
            if m > 2 * g - 2 {
                assert_eq!(basis.len() as i64, m - g + 1, "q0 = {q0}, m = {m}");
            }
            for f in &basis {
                let v = c.valuation(f, &Place::infinity()).unwrap().unwrap();
                assert!(v >= -m);
                for p in c.points().iter().filter(|p| **p != Point::Infinity) {
                    assert!(c.valuation(f, &Place::Rational(p.clone())).unwrap().unwrap() >= 0);
                }
            }
        }
    }
}

#[test]
fn evaluation_examples() {
    let f5 = field_of_order(5).unwrap();
    let p1 = Curve::projective_line(&f5);
    let inv_x = CurveFunction::P1(agcodes_core::rational::RationalFunction::parse(&f5, "1/0,1").unwrap());
    assert_eq!(
        p1.evaluate(&inv_x, &Point::parse("0").unwrap()).unwrap(),
        ProjValue::Infinity
    );
    let x2 = CurveFunction::P1(agcodes_core::rational::RationalFunction::parse(&f5, "0,0,1").unwrap());
    assert_eq!(
        p1.evaluate(&x2, &Point::parse("3").unwrap()).unwrap(),
        ProjValue::Finite(4)
    );
    let herm = build_curve(CurveKind::Hermitian, 4).unwrap();
    let basis = herm.riemann_roch_basis(&Divisor::single(Place::infinity(), 3)).unwrap();
    assert_eq!(basis.len(), 3);
    let y = basis.last().unwrap();
    assert_eq!(herm.valuation(y, &Place::infinity()).unwrap(), Some(-3));
    assert_eq!(herm.evaluate(y, &Point::Infinity).unwrap(), ProjValue::Infinity);
}

/// Places of P^1 over GF(q) of degree at most 2.
fn small_places(f: &Field) -> Vec<Place> {
    let mut places: Vec<Place> = f.elements().map(|a| Place::p1(ProjValue::Finite(a))).collect();
    places.push(Place::infinity());
    for p in enumerate_irreducibles(f, 2).unwrap() {
        if p.deg() == Some(2) {
            places.push(Place::from_irreducible(p));
        }
    }
    places
}

/// Places where a P^1 function can have a pole: factors of its denominator and infinity.
fn pole_candidates(f: &CurveFunction) -> Vec<Place> {
    let g = f.as_p1().unwrap();
    let mut out: Vec<Place> = g
        .den()
        .factor()
        .into_iter()
        .map(|(p, _)| Place::from_irreducible(p))
        .collect();
    out.push(Place::infinity());
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn p1_riemann_roch_dimension_and_divisor_bound(
        qi in 0usize..3,
        picks in prop::collection::vec((any::<prop::sample::Index>(), -3i64..=4), 1..4),
    ) {
        let q = [2u64, 3, 4][qi];
        let f = field_of_order(q).unwrap();
        let c = Curve::projective_line(&f);
        let places = small_places(&f);
        let mut d = Divisor::zero();
        for (ix, k) in picks {
            d.add_term(ix.get(&places).clone(), k);
        }
        prop_assume!((-3..=10).contains(&d.degree()));
        let basis = c.riemann_roch_basis(&d).unwrap();
        prop_assert_eq!(basis.len() as i64, (d.degree() + 1).max(0));
        for b in &basis {
            let mut places_to_check: Vec<Place> = d.support().cloned().collect();
            places_to_check.extend(pole_candidates(b));
            for p in places_to_check {
                let v = c.valuation(b, &p).unwrap().unwrap();
                prop_assert!(v + d.coefficient(&p) >= 0, "{} at {} for D = {}", b, p, d);
            }
        }
    }
}

#[test]
fn degree_two_place_riemann_roch_space() {
    let f2 = field_of_order(2).unwrap();
    let c = Curve::projective_line(&f2);
    let place = Place::from_irreducible(Poly::new(&f2, vec![1, 1, 1]));
    let d = Divisor::single(place, 1);
    assert_eq!(d.degree(), 2);
    assert_eq!(c.riemann_roch_basis(&d).unwrap().len(), 3);
}
