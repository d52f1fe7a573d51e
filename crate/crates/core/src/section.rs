//! Rational sections of the line bundle of a degree-zero divisor `D` on P^1.
//!
//! On P^1 every degree-zero divisor is principal: with
//! `psi = prod_pi pi^(d_pi)` over the finite places we get `(psi) = D`, so
//! `(f) + D = (f psi)` and the sections of height at most `h` are exactly
//! `{ g / psi : deg g <= h }`. The height of `f` is the degree of `f psi` as
//! a rational function (the zero section has height 0).
//!
//! At a place `P` the twist `phi_P` has the same order at `P` as `D`:
//! `pi^(d_P)` at a finite place, `x^(-d_inf)` at infinity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::code::{Alphabet, Code, CodeMeta, Word};
use crate::curve::{p1_valuation, Divisor, Place, Point};
use crate::error::{Error, Result};
use crate::extension::Extension;
use crate::field::{Field, ProjValue};
use crate::poly::{monic_up_to_degree, polys_up_to_degree, Poly};
use crate::rational::RationalFunction;

/// Enumeration of sections refuses `q^(2h+1)` above this.
pub const MAX_SECTION_ENUMERATION: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct SectionSpace {
    field: Field,
    divisor: Divisor,
    psi: RationalFunction,
}

/// Multiplicity data of the pair at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceMultiplicity {
    pub place: Place,
    pub degree: usize,
    pub m: u64,
    /// Pole orders of the two twisted sections at the place.
    pub mu: u64,
    pub mu_prime: u64,
    /// Valuation of the difference of twisted sections.
    pub v_diff: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofIdentity {
    /// `sum_P deg(P) m(P)`
    pub total_m: u64,
    /// `sum_P deg(P) (mu(P) + mu'(P))`
    pub total_mu: u64,
    /// `sum_P deg(P) v_P(twisted difference)`
    pub total_v: i64,
    /// Places where `m - (mu + mu') != v`.
    pub mismatches: usize,
}

impl ProofIdentity {
    pub fn holds(&self) -> bool {
        self.mismatches == 0 && self.total_v == 0 && self.total_m as i64 - self.total_mu as i64 == self.total_v
    }
}

impl SectionSpace {
    pub fn new(field: &Field, divisor: &Divisor) -> Result<SectionSpace> {
        if divisor.degree() != 0 {
            return Err(Error::precondition(format!(
                "sections need a degree-zero divisor, got degree {}",
                divisor.degree()
            )));
        }
        let mut num = Poly::one(field);
        let mut den = Poly::one(field);
        for (place, c) in divisor.terms() {
            let pi = match place {
                Place::Rational(Point::Infinity) => continue,
                Place::Rational(Point::Affine(v)) if v.len() == 1 => Poly::linear(field, v[0]),
                Place::Closed(pi) => {
                    pi.field().same_as(field)?;
                    pi.clone()
                }
                _ => return Err(Error::UnsupportedDivisor(format!("{place} is not a place of P^1"))),
            };
            let power = pi.pow(c.unsigned_abs() as u32);
            if c > 0 {
                num = &num * &power;
            } else {
                den = &den * &power;
            }
        }
        Ok(SectionSpace {
            field: field.clone(),
            divisor: divisor.clone(),
            psi: RationalFunction::reduce(num, den)?,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    /// A function whose divisor is exactly `D`.
    pub fn psi(&self) -> &RationalFunction {
        &self.psi
    }

    /// `f psi`, whose divisor is `(f) + D`.
    pub fn untwist(&self, f: &RationalFunction) -> RationalFunction {
        f * &self.psi
    }

    pub fn height(&self, f: &RationalFunction) -> usize {
        if f.is_zero() {
            0
        } else {
            self.untwist(f).degree()
        }
    }

    /// Height from the divisor `(f) + D` directly: the degree of its
    /// positive part, read off valuations at every place where `f` or `D`
    /// has a zero or pole.
    pub fn height_by_valuations(&self, f: &RationalFunction) -> (usize, usize) {
        if f.is_zero() {
            return (0, 0);
        }
        let mut places: Vec<Place> = self.divisor.support().cloned().collect();
        for p in [f.num(), f.den()] {
            for (pi, _) in p.factor() {
                places.push(Place::from_irreducible(pi));
            }
        }
        places.push(Place::infinity());
        places.sort();
        places.dedup();
        let (mut pos, mut neg) = (0usize, 0usize);
        for place in &places {
            let v = p1_valuation(f, place).expect("nonzero") + self.divisor.coefficient(place);
            if v > 0 {
                pos += v as usize * place.degree();
            } else {
                neg += (-v) as usize * place.degree();
            }
        }
        (pos, neg)
    }

    /// All sections of height at most `h`: `g / psi` for reduced `g = u/v`
    /// with `max(deg u, deg v) <= h`, the zero section first.
    pub fn enumerate(&self, h: usize) -> Result<Vec<RationalFunction>> {
        let q = self.field.order() as u64;
        if q.checked_pow(2 * h as u32 + 1)
            .is_none_or(|c| c > MAX_SECTION_ENUMERATION)
        {
            return Err(Error::guard(
                "section enumeration",
                format!("{q}^{}", 2 * h + 1),
                MAX_SECTION_ENUMERATION,
            ));
        }
        let numerators = polys_up_to_degree(&self.field, h);
        let mut out = vec![RationalFunction::zero(&self.field)];
        for v in monic_up_to_degree(&self.field, h) {
            for u in numerators.iter().skip(1) {
                if u.gcd(&v).is_one() {
                    let g = RationalFunction::reduce(u.clone(), v.clone())?;
                    out.push(g.try_div(&self.psi)?);
                }
            }
        }
        Ok(out)
    }

    /// The canonical twist at a place.
    pub fn twist(&self, place: &Place) -> Result<RationalFunction> {
        let d = self.divisor.coefficient(place);
        match place {
            Place::Rational(Point::Infinity) => RationalFunction::x(&self.field).powi(-d),
            _ => {
                let pi = place
                    .p1_polynomial(&self.field)
                    .ok_or_else(|| Error::precondition(format!("{place} is not a place of P^1")))?;
                RationalFunction::from_poly(pi).powi(d)
            }
        }
    }

    pub fn twisted(&self, f: &RationalFunction, place: &Place) -> Result<RationalFunction> {
        Ok(f * &self.twist(place)?)
    }

    pub fn twisted_value(&self, f: &RationalFunction, point: ProjValue) -> Result<ProjValue> {
        Ok(self.twisted(f, &Place::p1(point))?.value_at(point))
    }

    /// `phi_0`: twisted values at the points, with infinity as symbol `q`.
    pub fn phi0(&self, f: &RationalFunction, points: &[ProjValue]) -> Result<Word> {
        let q = self.field.order();
        points
            .iter()
            .map(|&p| Ok(self.twisted_value(f, p)?.symbol(q)))
            .collect()
    }

    /// `phi_r` for `r >= 1`: the `t^r` coefficient of the twisted section, or
    /// of its reciprocal where the twisted value is infinite.
    pub fn phi_r(&self, f: &RationalFunction, points: &[ProjValue], r: usize) -> Result<Word> {
        points
            .iter()
            .map(|&p| {
                let g = self.twisted(f, &Place::p1(p))?;
                let g = if g.value_at(p).is_infinite() { g.inv()? } else { g };
                Ok(g.expand_at(p, r)?[r])
            })
            .collect()
    }

    pub fn phi1(&self, f: &RationalFunction, points: &[ProjValue]) -> Result<Word> {
        self.phi_r(f, points, 1)
    }

    /// Multiplicity of `place` as a solution of `f = f'`, using the
    /// canonical twist; places of degree `e > 1` are evaluated at the least
    /// root of their polynomial in GF(q^e).
    pub fn solution_multiplicity(&self, f: &RationalFunction, g: &RationalFunction, place: &Place) -> Result<u64> {
        Ok(self.place_data(f, g, place)?.m)
    }

    fn place_data(&self, f: &RationalFunction, g: &RationalFunction, place: &Place) -> Result<PlaceMultiplicity> {
        if f == g {
            return Err(Error::precondition("solution multiplicity needs distinct sections"));
        }
        let phi = self.twist(place)?;
        let m = multiplicity_with_twist(&phi, f, g, place)?;
        let tf = f * &phi;
        let tg = g * &phi;
        let pole = |h: &RationalFunction| -> u64 { p1_valuation(h, place).map_or(0, |v| (-v).max(0) as u64) };
        let v_diff = p1_valuation(&(&tf - &tg), place).expect("distinct sections");
        Ok(PlaceMultiplicity {
            place: place.clone(),
            degree: place.degree(),
            m,
            mu: pole(&tf),
            mu_prime: pole(&tg),
            v_diff,
        })
    }

    /// Places where the pair can have a solution or a twisted pole: the
    /// factors of the numerator of `f psi - f' psi`, of both denominators,
    /// and infinity.
    fn candidate_places(&self, f: &RationalFunction, g: &RationalFunction) -> Vec<Place> {
        let a = self.untwist(f);
        let b = self.untwist(g);
        let diff = &a - &b;
        let mut places = vec![Place::infinity()];
        for p in [diff.num(), a.den(), b.den()] {
            if p.is_zero() {
                continue;
            }
            for (pi, _) in p.factor() {
                places.push(Place::from_irreducible(pi));
            }
        }
        places.sort();
        places.dedup();
        places
    }

    /// Per-place data at every place where the pair has a solution or a pole.
    pub fn multiplicity_profile(&self, f: &RationalFunction, g: &RationalFunction) -> Result<Vec<PlaceMultiplicity>> {
        self.candidate_places(f, g)
            .iter()
            .map(|p| self.place_data(f, g, p))
            .collect()
    }

    /// `sum_P m(P)` over geometric points: each closed place counts `deg(P)` times.
    pub fn total_multiplicity(&self, f: &RationalFunction, g: &RationalFunction) -> Result<u64> {
        Ok(self
            .multiplicity_profile(f, g)?
            .iter()
            .map(|d| d.degree as u64 * d.m)
            .sum())
    }

    /// Checks `m(P) - (mu(P) + mu'(P)) = v_P(twisted difference)` place by
    /// place, and that the degree-weighted sums agree.
    pub fn proof_identity(&self, f: &RationalFunction, g: &RationalFunction) -> Result<ProofIdentity> {
        let profile = self.multiplicity_profile(f, g)?;
        let mut id = ProofIdentity {
            total_m: 0,
            total_mu: 0,
            total_v: 0,
            mismatches: 0,
        };
        for d in &profile {
            let e = d.degree as u64;
            id.total_m += e * d.m;
            id.total_mu += e * (d.mu + d.mu_prime);
            id.total_v += e as i64 * d.v_diff;
            if d.m as i64 - (d.mu + d.mu_prime) as i64 != d.v_diff {
                id.mismatches += 1;
            }
        }
        Ok(id)
    }
}

/// Solution multiplicity at `place` for a given twist `phi` with
/// `ord_P(phi) = ord_P(D)`. Equal finite twisted values give the valuation
/// of the difference; both infinite give the valuation of the difference of
/// reciprocals; otherwise 0.
pub fn multiplicity_with_twist(
    phi: &RationalFunction,
    f: &RationalFunction,
    g: &RationalFunction,
    place: &Place,
) -> Result<u64> {
    let a = f * phi;
    let b = g * phi;
    let (a, b, point) = match place {
        Place::Rational(p) => {
            let v = p
                .as_p1()
                .ok_or_else(|| Error::precondition(format!("{p} is not a point of P^1")))?;
            (a, b, v)
        }
        Place::Closed(pi) => {
            let ext = Extension::new(f.field(), pi.deg().unwrap_or(1) as u32)?;
            let beta = ext.roots(pi)[0];
            (ext.embed_rational(&a), ext.embed_rational(&b), ProjValue::Finite(beta))
        }
    };
    let (va, vb) = (a.value_at(point), b.value_at(point));
    if va != vb {
        return Ok(0);
    }
    let diff = if va.is_infinite() {
        &a.inv()? - &b.inv()?
    } else {
        &a - &b
    };
    let v = diff
        .valuation_at(point)
        .ok_or_else(|| Error::precondition("twisted sections coincide"))?;
    Ok(v.max(0) as u64)
}

/// Result of sampling section pairs against the multiplicity count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropositionReport {
    pub pairs: usize,
    /// Pairs whose total multiplicity differs from `h(f) + h(f')`.
    pub count_failures: usize,
    /// Pairs where `sum [m - (mu + mu')]` is nonzero or a place disagrees.
    pub identity_failures: usize,
    pub max_total_height: usize,
}

impl PropositionReport {
    pub fn holds(&self) -> bool {
        self.count_failures == 0 && self.identity_failures == 0
    }
}

fn random_poly(field: &Field, rng: &mut ChaCha8Rng, deg: usize, monic: bool) -> Poly {
    let q = field.order();
    let mut c: Vec<u32> = (0..=deg).map(|_| rng.random_range(0..q)).collect();
    if monic {
        c[deg] = 1;
    }
    Poly::new(field, c)
}

impl SectionSpace {
    /// A nonzero section of height at most `max_h`, from random `u / v` with
    /// `deg u, deg v <= a` for a random `a <= max_h`.
    pub fn random_section(&self, rng: &mut ChaCha8Rng, max_h: usize) -> Result<RationalFunction> {
        let a = rng.random_range(0..=max_h);
        loop {
            let u = random_poly(&self.field, rng, a, false);
            if u.is_zero() {
                continue;
            }
            let dv = rng.random_range(0..=a);
            let v = random_poly(&self.field, rng, dv, true);
            let g = RationalFunction::reduce(u, v)?;
            return g.try_div(&self.psi);
        }
    }

    /// Samples `pairs` distinct pairs with `h(f) + h(f') <= max_total` and
    /// checks that their total multiplicity is exactly `h(f) + h(f')`.
    pub fn proposition_check(&self, max_total: usize, pairs: usize, seed: u64) -> Result<PropositionReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = PropositionReport::default();
        while report.pairs < pairs {
            let f = self.random_section(&mut rng, max_total)?;
            let hf = self.height(&f);
            let g = self.random_section(&mut rng, max_total - hf)?;
            if f == g {
                continue;
            }
            let total = self.height(&f) + self.height(&g);
            report.pairs += 1;
            report.max_total_height = report.max_total_height.max(total);
            if self.total_multiplicity(&f, &g)? != total as u64 {
                report.count_failures += 1;
            }
            let id = self.proof_identity(&f, &g)?;
            if !id.holds() {
                report.identity_failures += 1;
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug)]
pub struct SectionCode {
    pub code: Code,
    pub sections: Vec<RationalFunction>,
    pub h: usize,
}

/// The code of twisted evaluations of all sections of height at most `h`,
/// over the alphabet `P^1(k)`; requires `2h < N`.
pub fn build_section_code(space: &SectionSpace, h: usize, points: &[ProjValue]) -> Result<SectionCode> {
    let n = points.len();
    if 2 * h >= n {
        return Err(Error::precondition(format!("need 2h < N, got h = {h}, N = {n}")));
    }
    check_distinct(points)?;
    let sections = space.enumerate(h)?;
    let words = sections
        .iter()
        .map(|f| space.phi0(f, points))
        .collect::<Result<Vec<_>>>()?;
    let meta = CodeMeta {
        construction: "section".into(),
        alphabet: Alphabet::ProjectiveLine,
        points: points.iter().map(|&p| Point::p1(p)).collect(),
        params: json!({
            "curve": "p1",
            "divisor": space.divisor().to_string(),
            "h": h,
            "sections": sections.len(),
        }),
        claimed_distance: Some(n as i64 - 2 * h as i64),
    };
    Ok(SectionCode {
        code: Code::new(space.field(), meta, words)?,
        sections,
        h,
    })
}

pub(crate) fn check_distinct(points: &[ProjValue]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for p in points {
        if !seen.insert(p.symbol(u32::MAX)) {
            return Err(Error::precondition(format!("evaluation point {p} repeated")));
        }
    }
    Ok(())
}

/// The asymptotic size estimate `((q+1)/q)^N q^(2h-g)` (with `g = 0`),
/// reported next to empirical counts and never asserted.
pub fn asymptotic_count_estimate(q: u32, n: usize, h: usize) -> f64 {
    let q = q as f64;
    ((q + 1.0) / q).powi(n as i32) * q.powi(2 * h as i32)
}

/// All rational points of P^1 in canonical order.
pub fn p1_points(field: &Field) -> Vec<ProjValue> {
    field
        .elements()
        .map(ProjValue::Finite)
        .chain(std::iter::once(ProjValue::Infinity))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn rf(field: &Field, s: &str) -> RationalFunction {
        RationalFunction::parse(field, s).unwrap()
    }

    #[test]
    fn sampled_pairs_meet_the_multiplicity_count() {
        let f3 = make_field(3, 1).unwrap();
        let d = Divisor::parse(&f3, "pt(1):1;inf:-1").unwrap();
        let space = SectionSpace::new(&f3, &d).unwrap();
        let report = space.proposition_check(4, 40, 11).unwrap();
        assert_eq!(report.pairs, 40);
        assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn counts_for_trivial_divisor() {
        let f2 = make_field(2, 1).unwrap();
        let s = SectionSpace::new(&f2, &Divisor::zero()).unwrap();
        assert_eq!(s.enumerate(0).unwrap().len(), 2);
        assert_eq!(s.enumerate(1).unwrap().len(), 8);
        let f3 = make_field(3, 1).unwrap();
        let s = SectionSpace::new(&f3, &Divisor::zero()).unwrap();
        assert_eq!(s.enumerate(0).unwrap().len(), 3);
        assert!(SectionSpace::new(&f3, &Divisor::single(Place::infinity(), 1)).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let f3 = make_field(3, 1).unwrap();
        let s = SectionSpace::new(&f3, &Divisor::zero()).unwrap();
        let f = rf(&f3, "0,1");
        let g = rf(&f3, "0,1,1");
        let zero = Place::p1(ProjValue::Finite(0));
        assert_eq!(s.solution_multiplicity(&f, &g, &zero).unwrap(), 2);
        assert_eq!(s.solution_multiplicity(&f, &g, &Place::infinity()).unwrap(), 1);
        assert_eq!(s.total_multiplicity(&f, &g).unwrap(), 3);
        assert!(s.proof_identity(&f, &g).unwrap().holds());
        let c1 = rf(&f3, "1");
        let c2 = rf(&f3, "2");
        assert_eq!(s.total_multiplicity(&c1, &c2).unwrap(), 0);
        assert!(s.solution_multiplicity(&f, &f, &zero).is_err());
        // x and x + 1: never equal at finite points, both infinite at infinity
        let g = rf(&f3, "1,1");
        assert_eq!(
            s.solution_multiplicity(&f, &g, &Place::p1(ProjValue::Finite(1)))
                .unwrap(),
            0
        );
        assert_eq!(s.total_multiplicity(&f, &g).unwrap(), 2);
    }

    #[test]
    fn nontrivial_divisor_heights() {
        let f2 = make_field(2, 1).unwrap();
        let d = Divisor::parse(&f2, "poly(1,1,1):1;inf:-2").unwrap();
        let s = SectionSpace::new(&f2, &d).unwrap();
        let all = s.enumerate(1).unwrap();
        assert_eq!(all.len(), 8);
        for f in &all {
            let (pos, neg) = s.height_by_valuations(f);
            assert_eq!(pos, neg);
            assert_eq!(pos, s.height(f));
            assert!(pos <= 1);
        }
    }

    #[test]
    fn phi_maps() {
        let f2 = make_field(2, 1).unwrap();
        let s = SectionSpace::new(&f2, &Divisor::zero()).unwrap();
        let zero = [ProjValue::Finite(0)];
        assert_eq!(s.phi0(&rf(&f2, "1/0,1"), &zero).unwrap(), vec![2]);
        assert_eq!(s.phi1(&rf(&f2, "1/0,1"), &zero).unwrap(), vec![1]);
        assert_eq!(s.phi1(&rf(&f2, "0,1/1,1"), &zero).unwrap(), vec![1]);
        assert_eq!(s.phi1(&rf(&f2, "1"), &p1_points(&f2)).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn section_code_examples() {
        let f2 = make_field(2, 1).unwrap();
        let s = SectionSpace::new(&f2, &Divisor::zero()).unwrap();
        let c = build_section_code(&s, 1, &p1_points(&f2)).unwrap();
        assert_eq!(c.code.len(), 8);
        assert!(c.code.exact_min_distance().unwrap().meets(1));
        let f4 = make_field(2, 2).unwrap();
        let s = SectionSpace::new(&f4, &Divisor::zero()).unwrap();
        let c = build_section_code(&s, 0, &p1_points(&f4)).unwrap();
        assert_eq!(c.code.len(), 4);
        assert_eq!(c.code.exact_min_distance().unwrap().value(), Some(5));
        assert!(build_section_code(&s, 3, &p1_points(&f4)).is_err());
    }
}
