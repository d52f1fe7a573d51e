//! Ball-centered selection applied to rational sections: keep the sections
//! whose twisted values `phi_0(f)` lie within `s0` of a center in
//! `P^1(k)^N`, then publish the first-derivative words `phi_1(f)` over `k`.
//!
//! Two survivors agree in `phi_0` at `>= N - 2 s0` points, and where `phi_1`
//! also agrees the solution has multiplicity at least 2. Total multiplicity
//! is at most `2h`, so `2h <= 2N - 4 s0 - d0` forces distance `>= d0`.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::center::{SearchProblem, Strategy};
use crate::code::{hamming_distance, Alphabet, Code, CodeMeta, Word};
use crate::curve::{Divisor, Point};
use crate::error::{Error, Result};
use crate::field::{Field, ProjValue};
use crate::rational::RationalFunction;
use crate::section::{check_distinct, p1_points, SectionSpace};

#[derive(Clone, Debug)]
pub struct CombinedParams {
    pub divisor: Divisor,
    pub h: usize,
    pub s0: usize,
    pub d0: usize,
    /// Evaluation points; defaults to all of `P^1(k)`.
    pub points: Option<Vec<ProjValue>>,
    pub strategy: Strategy,
    /// A fixed center over `P^1(k)` (symbol `q` is infinity), bypassing the search.
    pub center: Option<Word>,
}

#[derive(Clone, Debug)]
pub struct CombinedResult {
    pub code: Code,
    pub center: Word,
    pub survivors: Vec<RationalFunction>,
    /// `#M_D(h)`
    pub section_count: usize,
    /// Exact mean survivor count over all `(q+1)^N` centers.
    pub average: BigRational,
    pub threshold: bool,
    pub space: SectionSpace,
    pub points: Vec<ProjValue>,
    pub h: usize,
    pub s0: usize,
    pub d0: usize,
}

/// `h / N > q / (q^2 - 1)`, compared exactly.
pub fn threshold_check(q: u64, h: u64, n: u64) -> bool {
    h as u128 * (q as u128 * q as u128 - 1) > q as u128 * n as u128
}

pub fn build_combined(field: &Field, params: &CombinedParams) -> Result<CombinedResult> {
    let q = field.order();
    let points = params.points.clone().unwrap_or_else(|| p1_points(field));
    check_distinct(&points)?;
    let n = points.len();
    let (h, s0, d0) = (params.h, params.s0, params.d0);
    if d0 == 0 {
        return Err(Error::precondition("d0 must be positive"));
    }
    if 2 * h + 4 * s0 + d0 > 2 * n {
        return Err(Error::precondition(format!(
            "need 2h <= 2N - 4 s0 - d0, got h = {h}, s0 = {s0}, d0 = {d0}, N = {n}"
        )));
    }
    if s0 as u64 * (q as u64 + 1) >= n as u64 * q as u64 {
        return Err(Error::precondition(format!("radius s0 = {s0} must be below Nq/(q+1)")));
    }
    let space = SectionSpace::new(field, &params.divisor)?;
    let sections = space.enumerate(h)?;
    let items: Vec<Vec<Word>> = sections
        .iter()
        .map(|f| Ok(vec![space.phi0(f, &points)?]))
        .collect::<Result<_>>()?;
    let radii = [s0];
    let problem = SearchProblem {
        alphabet: q + 1,
        n,
        radii: &radii,
        items: &items,
    };
    let (center, idx, label) = match &params.center {
        Some(c) => {
            if c.len() != n || c.iter().any(|&s| s > q) {
                return Err(Error::precondition(
                    "fixed center must be a word of length N over P^1(k)",
                ));
            }
            (
                c.clone(),
                problem.survivors(std::slice::from_ref(c)),
                "fixed".to_owned(),
            )
        }
        None => {
            let out = problem.search(params.strategy)?;
            (
                out.centers[0].clone(),
                out.survivors,
                params.strategy.label().to_owned(),
            )
        }
    };
    let survivors: Vec<RationalFunction> = idx.iter().map(|&i| sections[i].clone()).collect();
    let words = survivors
        .iter()
        .map(|f| space.phi1(f, &points))
        .collect::<Result<Vec<_>>>()?;
    let threshold = threshold_check(q as u64, h as u64, n as u64);
    let meta = CodeMeta {
        construction: "combined".into(),
        alphabet: Alphabet::Field,
        points: points.iter().map(|&p| Point::p1(p)).collect(),
        params: json!({
            "curve": "p1",
            "divisor": params.divisor.to_string(),
            "h": h,
            "s0": s0,
            "d0": d0,
            "strategy": label,
            "center": center,
            "sections": sections.len(),
            "threshold": threshold,
        }),
        claimed_distance: Some(d0 as i64),
    };
    let code = Code::new(field, meta, words)?;
    Ok(CombinedResult {
        code,
        center,
        survivors,
        section_count: sections.len(),
        average: problem.exact_average(),
        threshold,
        space,
        points,
        h,
        s0,
        d0,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AgreementReport {
    pub pairs: usize,
    /// Smallest number of `phi_0` agreements seen.
    pub min_agree0: usize,
    pub max_multiplicity: u64,
    /// Pairs breaking one link of the chain
    /// `N - 2 s0 <= A0`, `A0 + A01 <= total multiplicity <= 2h`,
    /// `2N - 4 s0 - d(phi_1) <= 2h`.
    pub violations: usize,
}

impl CombinedResult {
    /// `phi_0` of every section of height at most `h`, as one-word tuples.
    pub fn source_items(&self) -> Result<Vec<Vec<Word>>> {
        self.space
            .enumerate(self.h)?
            .iter()
            .map(|f| Ok(vec![self.space.phi0(f, &self.points)?]))
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.code.len() == self.survivors.len()
    }

    /// Audits the distance argument on up to `max_pairs` survivor pairs.
    pub fn agreement_check(&self, max_pairs: usize, seed: u64) -> Result<AgreementReport> {
        let k = self.survivors.len();
        let total = k * k.saturating_sub(1) / 2;
        let pairs: Vec<(usize, usize)> = if total <= max_pairs {
            (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..max_pairs)
                .map(|_| {
                    let i = rng.random_range(0..k);
                    let mut j = rng.random_range(0..k - 1);
                    if j >= i {
                        j += 1;
                    }
                    (i, j)
                })
                .collect()
        };
        let n = self.points.len();
        let mut report = AgreementReport {
            min_agree0: n,
            ..Default::default()
        };
        let phi0 = |f: &RationalFunction| self.space.phi0(f, &self.points);
        let phi1 = |f: &RationalFunction| self.space.phi1(f, &self.points);
        for (a, b) in pairs {
            let (f, g) = (&self.survivors[a], &self.survivors[b]);
            let (u0, v0) = (phi0(f)?, phi0(g)?);
            let (u1, v1) = (phi1(f)?, phi1(g)?);
            let agree0 = (0..n).filter(|&j| u0[j] == v0[j]).count();
            let agree01 = (0..n).filter(|&j| u0[j] == v0[j] && u1[j] == v1[j]).count();
            let mult = self.space.total_multiplicity(f, g)?;
            let d1 = hamming_distance(&u1, &v1);
            let mut bad = agree0 + 2 * self.s0 < n;
            bad |= (agree0 + agree01) as u64 > mult;
            bad |= mult > 2 * self.h as u64;
            bad |= 2 * n > 2 * self.h + 4 * self.s0 + d1;
            report.pairs += 1;
            report.min_agree0 = report.min_agree0.min(agree0);
            report.max_multiplicity = report.max_multiplicity.max(mult);
            report.violations += bad as usize;
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn params(h: usize, s0: usize, d0: usize, strategy: Strategy) -> CombinedParams {
        CombinedParams {
            divisor: Divisor::zero(),
            h,
            s0,
            d0,
            points: None,
            strategy,
            center: None,
        }
    }

    #[test]
    fn threshold_examples() {
        assert!(threshold_check(16, 2, 5));
        assert!(!threshold_check(2, 0, 3));
        // h/N = 4/15 exactly
        assert!(!threshold_check(4, 4, 15));
    }

    #[test]
    fn gf4_instance() {
        let f4 = make_field(2, 2).unwrap();
        let res = build_combined(&f4, &params(2, 1, 2, Strategy::Exhaustive)).unwrap();
        assert!(!res.code.is_empty());
        assert!(res.is_injective());
        assert!(res.code.exact_min_distance().unwrap().meets(2));
        let report = res.agreement_check(2000, 3).unwrap();
        assert_eq!(report.violations, 0);
        let random = build_combined(&f4, &params(2, 1, 2, Strategy::Random { seed: 5, trials: 50 })).unwrap();
        assert!(res.survivors.len() >= random.survivors.len());
    }

    #[test]
    fn precondition_violations() {
        let f4 = make_field(2, 2).unwrap();
        assert!(build_combined(&f4, &params(3, 1, 2, Strategy::Exhaustive)).is_err());
        assert!(build_combined(&f4, &params(1, 0, 0, Strategy::Exhaustive)).is_err());
    }
}
