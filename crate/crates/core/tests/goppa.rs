use agcodes_core::code::{hamming_distance, Word};
use agcodes_core::curve::{build_curve, Curve, CurveKind, Divisor};
use agcodes_core::field::ProjValue;
use agcodes_core::goppa::{build_goppa, goppa_sum_check};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimum distance by comparing every pair of words.
fn brute_distance(words: &[Word]) -> usize {
    let mut best = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            best = best.min(hamming_distance(a, b));
        }
    }
    best
}

fn goppa(kind: CurveKind, q: u64, divisor: &str) -> (Curve, agcodes_core::goppa::GoppaCode) {
    let c = build_curve(kind, q).unwrap();
    let d = Divisor::parse(c.field(), divisor).unwrap();
    let g = build_goppa(&c, &d, None).unwrap();
    (c, g)
}

#[test]
fn reed_solomon_and_constant_codes() {
    let (_, rs) = goppa(CurveKind::ProjectiveLine, 5, "inf:2");
    assert_eq!((rs.code.length(), rs.code.len()), (5, 125));
    assert_eq!(rs.code.linear_dimension(), Some(3));
    assert_eq!(brute_distance(rs.code.words()), 3);

    let (_, constant) = goppa(CurveKind::ProjectiveLine, 5, "inf:0");
    assert_eq!(constant.code.len(), 5);
    assert_eq!(constant.code.length(), 6);
    assert_eq!(brute_distance(constant.code.words()), 6);
}

#[test]
fn hermitian_code_over_gf4() {
    let (_, h) = goppa(CurveKind::Hermitian, 4, "inf:3");
    assert_eq!(h.code.length(), 8);
    assert_eq!(h.code.linear_dimension(), Some(3));
    assert!(brute_distance(h.code.words()) >= 5);
}

#[test]
fn word_count_matches_riemann_roch() {
    let cases = [
        (CurveKind::ProjectiveLine, 4, "inf:3"),
        (CurveKind::ProjectiveLine, 5, "pt(0):1;pt(1):1"),
        (CurveKind::ProjectiveLine, 2, "poly(1,1,1):1"),
        (CurveKind::Hermitian, 4, "inf:4"),
        (CurveKind::Hermitian, 4, "inf:5"),
        (CurveKind::Hermitian, 9, "inf:4"),
    ];
    for (kind, q, text) in cases {
        let (c, g) = goppa(kind, q, text);
        let deg = g.divisor.degree();
        let genus = c.genus() as i64;
        if deg > 2 * genus - 2 {
            let expected = (q as usize).pow((deg - genus + 1) as u32);
            assert_eq!(g.code.len(), expected, "{kind} q = {q}, D = {text}");
        }
        assert_eq!(g.code.len(), (q as usize).pow(g.basis.len() as u32));
    }
}

#[test]
fn nonzero_functions_have_at_most_deg_d_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (kind, q, text) in [
        (CurveKind::ProjectiveLine, 5, "inf:3"),
        (CurveKind::Hermitian, 4, "inf:5"),
        (CurveKind::Hermitian, 9, "inf:6"),
    ] {
        let (c, g) = goppa(kind, q, text);
        let deg = g.divisor.degree() as usize;
        for _ in 0..1000 {
            let mut f = g.basis[0].scale(0);
            for b in &g.basis {
                f = f.add(&b.scale(rng.random_range(0..q as u32))).unwrap();
            }
            if f.is_zero() {
                continue;
            }
            let zeros = g
                .code
                .meta()
                .points
                .iter()
                .filter(|p| c.evaluate(&f, p).unwrap() == ProjValue::Finite(0))
                .count();
            assert!(zeros <= deg, "{kind} q = {q}: {zeros} zeros for deg D = {deg}");
        }
    }
}

#[test]
fn goppa_sum_inequality_holds() {
    for (kind, q, text) in [
        (CurveKind::ProjectiveLine, 5, "inf:2"),
        (CurveKind::ProjectiveLine, 7, "inf:4"),
        (CurveKind::Hermitian, 4, "inf:3"),
        (CurveKind::Hermitian, 4, "inf:6"),
    ] {
        let (c, g) = goppa(kind, q, text);
        let report = goppa_sum_check(&g.code, c.genus()).unwrap();
        assert!(report.pass, "{report:?}");
        let d = brute_distance(g.code.words());
        assert_eq!(report.distance.value(), Some(d));
    }
}

#[test]
fn precondition_failures() {
    let c = build_curve(CurveKind::ProjectiveLine, 5).unwrap();
    let too_big = Divisor::parse(c.field(), "inf:5").unwrap();
    assert!(build_goppa(&c, &too_big, None).is_err());
    let negative = Divisor::parse(c.field(), "inf:-1").unwrap();
    assert!(build_goppa(&c, &negative, None).is_err());
}
