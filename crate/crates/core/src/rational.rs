//! Reduced rational functions `u / v` over a finite field, viewed as functions on P^1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, ProjValue};
use crate::poly::Poly;

/// A reduced quotient of polynomials: `gcd(num, den) = 1` and `den` is monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Cancels common factors and normalizes the denominator to be monic.
    pub fn reduce(num: Poly, den: Poly) -> Result<RationalFunction> {
        num.field().same_as(den.field())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(RationalFunction::zero(&field));
        }
        let g = num.gcd(&den);
        let (num, den) = (num.exact_div(&g), den.exact_div(&g));
        let lead = field.inv(den.leading()).expect("nonzero");
        Ok(RationalFunction {
            num: num.scale(lead),
            den: den.scale(lead),
        })
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        let one = Poly::one(p.field());
        RationalFunction { num: p, den: one }
    }

    pub fn zero(field: &Field) -> RationalFunction {
        RationalFunction {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn constant(field: &Field, c: u32) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(field, c))
    }

    pub fn x(field: &Field) -> RationalFunction {
        RationalFunction::from_poly(Poly::x(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `max(deg num, deg den)`; the zero function has degree 0.
    pub fn degree(&self) -> usize {
        self.num.deg().unwrap_or(0).max(self.den.deg().unwrap_or(0))
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        RationalFunction::reduce(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, rhs: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::reduce(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn powi(&self, e: i64) -> Result<RationalFunction> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Value at a point of P^1, which may be infinite.
    pub fn value_at(&self, point: ProjValue) -> ProjValue {
        let f = self.field();
        match point {
            ProjValue::Finite(a) => {
                let d = self.den.eval(a);
                if d == 0 {
                    ProjValue::Infinity
                } else {
                    ProjValue::Finite(f.div(self.num.eval(a), d).expect("nonzero"))
                }
            }
            ProjValue::Infinity => {
                let (du, dv) = (self.num.degree(), self.den.degree());
                if du > dv {
                    ProjValue::Infinity
                } else if du < dv {
                    ProjValue::Finite(0)
                } else {
                    ProjValue::Finite(f.div(self.num.leading(), self.den.leading()).expect("nonzero"))
                }
            }
        }
    }

    /// Order of vanishing at a point of P^1; `None` for the zero function.
    pub fn valuation_at(&self, point: ProjValue) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        match point {
            ProjValue::Finite(a) => {
                let lin = Poly::linear(self.field(), a);
                Some(self.num.multiplicity(&lin) as i64 - self.den.multiplicity(&lin) as i64)
            }
            ProjValue::Infinity => Some(self.den.deg().unwrap() as i64 - self.num.deg().unwrap() as i64),
        }
    }

    /// Valuation at the finite place of a monic irreducible polynomial, by factor multiplicity.
    pub fn valuation_at_place(&self, place: &Poly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.multiplicity(place) as i64 - self.den.multiplicity(place) as i64)
    }

    /// Coefficients `f^(0..=r_max)` of the expansion in the canonical
    /// uniformizer at `point`: `x - a` at a finite point, `1/x` at infinity.
    pub fn expand_at(&self, point: ProjValue, r_max: usize) -> Result<Vec<u32>> {
        let f = self.field();
        let terms = r_max + 1;
        if self.is_zero() {
            return Ok(vec![0; terms]);
        }
        match point {
            ProjValue::Finite(a) => {
                let num = self.num.taylor_shift(a);
                let den = self.den.taylor_shift(a);
                if den[0] == 0 {
                    return Err(Error::PoleAtPlace(format!("x = {a}")));
                }
                Ok(series_div(f, &num, &den, terms))
            }
            ProjValue::Infinity => {
                let du = self.num.deg().unwrap();
                let dv = self.den.deg().unwrap();
                if du > dv {
                    return Err(Error::PoleAtPlace("infinity".into()));
                }
                // f(1/t) = t^(dv - du) * rev(num)(t) / rev(den)(t)
                let shift = dv - du;
                let mut out = vec![0; terms];
                if shift < terms {
                    let tail = series_div(f, &self.num.reversed(), &self.den.reversed(), terms - shift);
                    out[shift..].copy_from_slice(&tail);
                }
                Ok(out)
            }
        }
    }

    /// Parses `num/den` (each a comma-separated coefficient list, low degree
    /// first) or a bare numerator.
    pub fn parse(field: &Field, text: &str) -> Result<RationalFunction> {
        match text.split_once('/') {
            Some((n, d)) => RationalFunction::reduce(Poly::parse(field, n)?, Poly::parse(field, d)?),
            None => Ok(RationalFunction::from_poly(Poly::parse(field, text)?)),
        }
    }
}

/// First `terms` coefficients of `num / den` as power series; requires `den[0] != 0`.
pub(crate) fn series_div(field: &Field, num: &[u32], den: &[u32], terms: usize) -> Vec<u32> {
    let inv = field.inv(den[0]).expect("unit constant term");
    let mut out: Vec<u32> = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = num.get(k).copied().unwrap_or(0);
        for i in 1..=k.min(den.len().saturating_sub(1)) {
            acc = field.sub(acc, field.mul(den[i], out[k - i]));
        }
        out.push(field.mul(acc, inv));
    }
    out
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduce(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduce(&(&self.num * &rhs.den) - &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn rf(field: &Field, num: &[u32], den: &[u32]) -> RationalFunction {
        RationalFunction::reduce(Poly::new(field, num.to_vec()), Poly::new(field, den.to_vec())).unwrap()
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let f2 = make_field(2, 1).unwrap();
        let r = rf(&f2, &[0, 1, 1], &[0, 1]);
        assert_eq!(r.to_string(), "1,1/1");
        assert_eq!(r.degree(), 1);
        let r = rf(&f2, &[1], &[0, 1]);
        assert_eq!(r.to_string(), "1/0,1");
        assert_eq!(r.degree(), 1);
    }

    #[test]
    fn reduce_normalizes_denominator() {
        // x^3 / (2 x^2) over GF(3): Euclid gives gcd x^2, leaving x / 2 -> 2x / 1
        let f3 = make_field(3, 1).unwrap();
        let r = rf(&f3, &[0, 0, 0, 1], &[0, 0, 2]);
        assert!(r.den().is_monic());
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &Poly::new(&f3, vec![0, 2]));
        assert!(matches!(
            RationalFunction::reduce(Poly::one(&f3), Poly::zero(&f3)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn expansion_at_zero_by_long_division() {
        // x/(x+1) = x + x^2 + x^3 + ... over GF(2)
        let f2 = make_field(2, 1).unwrap();
        let r = rf(&f2, &[0, 1], &[1, 1]);
        assert_eq!(r.expand_at(ProjValue::Finite(0), 2).unwrap(), vec![0, 1, 1]);
    }

    #[test]
    fn expansion_at_infinity() {
        let f5 = make_field(5, 1).unwrap();
        let r = rf(&f5, &[1], &[0, 1]);
        assert_eq!(r.expand_at(ProjValue::Infinity, 1).unwrap(), vec![0, 1]);
        let c = RationalFunction::constant(&f5, 3);
        assert_eq!(c.expand_at(ProjValue::Infinity, 3).unwrap(), vec![3, 0, 0, 0]);
        assert_eq!(c.expand_at(ProjValue::Finite(2), 3).unwrap(), vec![3, 0, 0, 0]);
        assert!(matches!(
            RationalFunction::x(&f5).expand_at(ProjValue::Infinity, 1),
            Err(Error::PoleAtPlace(_))
        ));
        assert!(matches!(
            r.expand_at(ProjValue::Finite(0), 1),
            Err(Error::PoleAtPlace(_))
        ));
    }

    #[test]
    fn values_and_valuations() {
        let f5 = make_field(5, 1).unwrap();
        let inv_x = rf(&f5, &[1], &[0, 1]);
        assert_eq!(inv_x.value_at(ProjValue::Finite(0)), ProjValue::Infinity);
        let sq = rf(&f5, &[0, 0, 1], &[1]);
        assert_eq!(sq.value_at(ProjValue::Finite(3)), ProjValue::Finite(4));
        assert_eq!(sq.valuation_at(ProjValue::Finite(0)), Some(2));
        assert_eq!(sq.valuation_at(ProjValue::Infinity), Some(-2));
        assert_eq!(RationalFunction::zero(&f5).valuation_at(ProjValue::Infinity), None);
    }
}
