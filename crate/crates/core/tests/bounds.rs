use agcodes_core::bounds::{
    ball_entropy_limit_check, binomial, combined_objective, entropy, entropy_alt, finite_difference_slope,
    frontier_table, golden_section_argmax, goppa_line, gv_crossing, new_gain, optimal_sigma, optimal_sigma0,
    slope_sign_change, xing_gain, xing_gain_limit, xing_objective, xing_term, Family, Real,
};
use num_bigint::BigUint;

const QS: [u64; 6] = [2, 3, 4, 9, 16, 49];

fn close(a: &Real, b: &Real, tol: &str) -> bool {
    (a - b).abs() <= Real::parse(tol)
}

fn rel_close(a: &Real, b: &Real, tol: &str) -> bool {
    (a - b).abs() <= &Real::parse(tol) * &b.abs()
}

fn entropy_f64(q: f64, d: f64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    if d == 1.0 {
        return (q - 1.0).ln() / q.ln();
    }
    (d * (q - 1.0).ln() - d * d.ln() - (1.0 - d) * (1.0 - d).ln()) / q.ln()
}

#[test]
fn entropy_forms_agree() {
    for q in QS {
        for i in 0..=1000 {
            let d = Real::ratio(i, 1000);
            let a = entropy(q, &d).unwrap();
            let b = entropy_alt(q, &d).unwrap();
            assert!(close(&a, &b, "1e-30"), "q = {q}, i = {i}");
            let f = entropy_f64(q as f64, i as f64 / 1000.0);
            assert!((a.to_f64() - f).abs() < 1e-12, "q = {q}, i = {i}");
        }
    }
}

#[test]
fn gains_leading_terms() {
    for q in [16u64, 64, 256] {
        let qr = Real::from_u64(q);
        let ln_q = qr.ln();
        let leading = Real::one() / qr.powi(3) - Real::one() / qr.powi(4);
        let c = &xing_gain_limit(q).unwrap() * &ln_q;
        assert!(
            close(&c, &leading, &format!("{}", 10.0 * (q as f64).powi(-5))),
            "q = {q}"
        );
        let n = &new_gain(q).unwrap() * &ln_q;
        assert!(close(
            &n,
            &(Real::one() / qr.powi(3)),
            &format!("{}", (q as f64).powi(-6))
        ));
    }
}

#[test]
fn gain_limit_matches_long_partial_sum() {
    for q in [2u64, 3, 49] {
        // ln(1 + x) summed term by term up to i = 400
        let qr = Real::from_u64(q);
        let mut sum = Real::zero();
        for i in 2..=400 {
            let x = &Real::from_u64(q - 1) / &qr.powi(2 * i);
            sum = sum + (Real::one() + x).ln();
        }
        let sum = &sum / &qr.ln();
        assert!(close(&xing_gain_limit(q).unwrap(), &sum, "1e-44"), "q = {q}");
    }
}

#[test]
fn gains_are_ordered() {
    for q in 2..=64u64 {
        let limit = xing_gain_limit(q).unwrap();
        let n = new_gain(q).unwrap();
        assert!(n > limit, "q = {q}");
        let mut prev = Real::zero();
        for m in 1..=4 {
            let g = xing_gain(q, m).unwrap();
            assert!(g > prev && limit > g, "q = {q}, m = {m}");
            prev = g;
        }
    }
}

#[test]
fn optimizers_certify_closed_forms() {
    for q in QS {
        let cap = Real::ratio(q as i64 - 1, q);
        for i in 1..=4u32 {
            let f = |s: &Real| xing_objective(q, i, s);
            let sigma = Real::from_rational(&optimal_sigma(q, i));
            let golden = golden_section_argmax(f, &Real::zero(), &cap, 400).unwrap();
            assert!(rel_close(&golden, &sigma, "1e-9"), "q = {q}, i = {i}");
            let lo = &sigma / &Real::from_u64(10);
            let hi = (&sigma * &Real::from_u64(10)).min(&cap);
            let bisect = slope_sign_change(f, &lo, &hi, 300).unwrap();
            assert!(rel_close(&bisect, &sigma, "1e-9"), "q = {q}, i = {i}");
            let value = f(&golden).unwrap();
            assert!(close(&value, &xing_term(q, i).unwrap(), "1e-12"), "q = {q}, i = {i}");
        }
        let f = |s: &Real| combined_objective(q, s);
        let sigma0 = Real::from_rational(&optimal_sigma0(q));
        let top = Real::ratio(q as i64, q + 1);
        let golden = golden_section_argmax(f, &Real::zero(), &top, 400).unwrap();
        assert!(rel_close(&golden, &sigma0, "1e-9"), "q = {q}");
        let bisect = slope_sign_change(
            f,
            &(&sigma0 / &Real::from_u64(10)),
            &(&sigma0 * &Real::from_u64(10)).min(&top),
            300,
        )
        .unwrap();
        assert!(rel_close(&bisect, &sigma0, "1e-9"), "q = {q}");
        assert!(close(&f(&golden).unwrap(), &new_gain(q).unwrap(), "1e-12"), "q = {q}");
    }
}

#[test]
fn optimal_sigma_examples() {
    assert_eq!(optimal_sigma(4, 2).to_string(), "3/259");
    assert_eq!(optimal_sigma(2, 1).to_string(), "1/5");
    assert_eq!(optimal_sigma0(2).to_string(), "1/9");
}

/// The slope of `H_q(s) - 2ks` is `log_q((q-1)(1-s)/s) - 2k`, which grows
/// without bound as `s -> 0` but only logarithmically.
#[test]
fn objective_slope_diverges_at_zero() {
    for q in [2u64, 4, 49] {
        for k in 1..=3u32 {
            let f = |s: &Real| xing_objective(q, k, s);
            let at = |s: &Real| {
                let h = s * &Real::parse("1e-30");
                finite_difference_slope(f, s, &h).unwrap()
            };
            let closed = |s: &Real| {
                let inner = &(&Real::from_u64(q - 1) * &(Real::one() - s.clone())) / s;
                inner.log(q) - Real::from_u64(2 * k as u64)
            };
            let s = Real::parse("1e-8");
            assert!(rel_close(&at(&s), &closed(&s), "1e-20"));
            let tiny = Real::one() / Real::from_u64(q).powi(1010);
            assert!(at(&tiny) > Real::from_u64(1000), "q = {q}, k = {k}");
        }
    }
}

#[test]
fn crossing_examples() {
    assert!(gv_crossing(49).unwrap().crosses);
    assert!(!gv_crossing(25).unwrap().crosses);
    assert!(gv_crossing(64).unwrap().crosses);
    assert!(!gv_crossing(4).unwrap().crosses);
    // H_q(d) - d peaks at d = (q-1)/(2q-1)
    let r = gv_crossing(49).unwrap();
    assert!(close(&r.delta, &Real::ratio(48, 97), "1e-10"));
}

#[test]
fn binomials_match_pascal() {
    let mut row = vec![BigUint::from(1u32)];
    for n in 1..=60u64 {
        let mut next = vec![BigUint::from(1u32); n as usize + 1];
        for k in 1..n as usize {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
        for k in 0..=n {
            assert_eq!(binomial(n, k), row[k as usize]);
        }
    }
}

#[test]
fn ball_entropy_examples() {
    let r = ball_entropy_limit_check(2, 1, 2, 1000).unwrap();
    assert!(r.gap < Real::parse("0.03") && r.within);
    let r = ball_entropy_limit_check(4, 1, 4, 400).unwrap();
    assert!(r.gap < Real::parse("0.03") && r.within);
    let r = ball_entropy_limit_check(3, 0, 1, 50).unwrap();
    assert!(r.normalized_log.is_zero() && r.entropy.is_zero());
    assert!(ball_entropy_limit_check(2, 1, 3, 1000).is_err());
}

#[test]
fn frontier_table_shape() {
    let t = frontier_table(49, 99, 1).unwrap();
    let csv = t.to_csv();
    assert_eq!(csv.lines().count(), 100);
    assert_eq!(t.header(), "delta,R_GV,R_Goppa,R_Xing_m1,R_Xing_inf,R_new");
    assert!(t.ordering_violations().is_empty());
    assert_eq!(t.dv_ceiling, Some(6));
    let goppa = t.profile(Family::Goppa).unwrap();
    let line = goppa_line(49).unwrap();
    for (d, v) in t.deltas.iter().zip(&goppa.values) {
        let expected = (&line - d).max(&Real::zero());
        assert!(close(v.as_ref().unwrap(), &expected, "1e-90"));
    }
    let odd = frontier_table(7, 9, 2).unwrap();
    assert!(odd.profile(Family::Goppa).unwrap().values.iter().all(Option::is_none));
    assert!(odd.to_csv().lines().nth(1).unwrap().ends_with(",,,,"));
    assert_eq!(odd.dv_ceiling, None);
}
