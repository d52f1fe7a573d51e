use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, ProjValue};
use crate::poly::Poly;

/// A rational point: affine coordinates (one for P^1, two for the Hermitian
/// curve) or the unique point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Affine(Vec<u32>),
    Infinity,
}

impl Point {
    pub fn p1(value: ProjValue) -> Point {
        match value {
            ProjValue::Finite(a) => Point::Affine(vec![a]),
            ProjValue::Infinity => Point::Infinity,
        }
    }

    /// The P^1 coordinate of this point, if it is a point of P^1.
    pub fn as_p1(&self) -> Option<ProjValue> {
        match self {
            Point::Affine(c) if c.len() == 1 => Some(ProjValue::Finite(c[0])),
            Point::Affine(_) => None,
            Point::Infinity => Some(ProjValue::Infinity),
        }
    }

    pub fn parse(text: &str) -> Result<Point> {
        let text = text.trim();
        if text == "inf" {
            return Ok(Point::Infinity);
        }
        let coords = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::parse(format!("bad point '{text}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Point::Affine(coords))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Affine(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                f.write_str(&parts.join(","))
            }
            Point::Infinity => f.write_str("inf"),
        }
    }
}

/// A closed point. Degree-one places are always represented by their
/// rational point; `Closed` holds a monic irreducible of degree at least 2
/// and exists only on P^1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Rational(Point),
    Closed(Poly),
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Rational(_) => 1,
            Place::Closed(p) => p.deg().unwrap_or(0),
        }
    }

    pub fn infinity() -> Place {
        Place::Rational(Point::Infinity)
    }

    pub fn p1(value: ProjValue) -> Place {
        Place::Rational(Point::p1(value))
    }

    /// For a finite place of P^1, the monic irreducible polynomial defining it.
    pub fn p1_polynomial(&self, field: &Field) -> Option<Poly> {
        match self {
            Place::Rational(Point::Affine(c)) if c.len() == 1 => Some(Poly::linear(field, c[0])),
            Place::Closed(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// Canonical place of P^1 for a monic irreducible polynomial.
    pub fn from_irreducible(p: Poly) -> Place {
        if p.deg() == Some(1) {
            let a = p.field().neg(p.coeff(0));
            Place::Rational(Point::Affine(vec![a]))
        } else {
            Place::Closed(p)
        }
    }

    /// Parses `inf`, `pt(a)`, `pt(a,b)` or `poly(c0,c1,...)`.
    pub fn parse(field: &Field, text: &str) -> Result<Place> {
        let text = text.trim();
        if text == "inf" {
            return Ok(Place::infinity());
        }
        let inner = |prefix: &str| {
            text.strip_prefix(prefix)
                .and_then(|t| t.strip_suffix(')'))
                .map(str::to_owned)
        };
        if let Some(body) = inner("pt(") {
            let point = Point::parse(&body)?;
            if let Point::Affine(c) = &point {
                if c.iter().any(|&v| v >= field.order()) {
                    return Err(Error::parse(format!("coordinate outside GF({})", field.order())));
                }
            }
            return Ok(Place::Rational(point));
        }
        if let Some(body) = inner("poly(") {
            let p = Poly::parse(field, &body)?;
            if !p.is_monic() || !p.is_irreducible() {
                return Err(Error::parse(format!("poly({body}) is not monic irreducible")));
            }
            return Ok(Place::from_irreducible(p));
        }
        Err(Error::parse(format!("unrecognized place '{text}'")))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Rational(Point::Infinity) => f.write_str("inf"),
            Place::Rational(p) => write!(f, "pt({p})"),
            Place::Closed(p) => write!(f, "poly({p})"),
        }
    }
}

/// Finite formal sum of places with nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Place, i64)>) -> Divisor {
        let mut d = Divisor::zero();
        for (place, c) in terms {
            d.add_term(place, c);
        }
        d
    }

    pub fn single(place: Place, coefficient: i64) -> Divisor {
        Divisor::from_terms([(place, coefficient)])
    }

    pub fn add_term(&mut self, place: Place, coefficient: i64) {
        let entry = self.terms.entry(place.clone()).or_insert(0);
        *entry += coefficient;
        if *entry == 0 {
            self.terms.remove(&place);
        }
    }

    pub fn coefficient(&self, place: &Place) -> i64 {
        self.terms.get(place).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, &c)| c * p.degree() as i64).sum()
    }

    pub fn positive_part(&self) -> Divisor {
        Divisor::from_terms(self.terms().filter(|(_, c)| *c > 0).map(|(p, c)| (p.clone(), c)))
    }

    pub fn negative_part(&self) -> Divisor {
        Divisor::from_terms(self.terms().filter(|(_, c)| *c < 0).map(|(p, c)| (p.clone(), -c)))
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    pub fn contains_point(&self, point: &Point) -> bool {
        self.terms.contains_key(&Place::Rational(point.clone()))
    }

    pub fn plus(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, c) in other.terms() {
            d.add_term(p.clone(), c);
        }
        d
    }

    pub fn minus(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, c) in other.terms() {
            d.add_term(p.clone(), -c);
        }
        d
    }

    /// Parses `place:coefficient` terms separated by `;`. An empty string or
    /// `0` is the zero divisor.
    pub fn parse(field: &Field, text: &str) -> Result<Divisor> {
        let text = text.trim();
        let mut d = Divisor::zero();
        if text.is_empty() || text == "0" {
            return Ok(d);
        }
        for term in text.split(';') {
            let (place, coeff) = term
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(format!("divisor term '{term}' lacks ':'")))?;
            let coeff: i64 = coeff
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad coefficient in '{term}'")))?;
            d.add_term(Place::parse(field, place)?, coeff);
        }
        Ok(d)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|(p, c)| format!("{p}:{c}")).collect();
        f.write_str(&parts.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn parse_and_display_round_trip() {
        let f = make_field(2, 1).unwrap();
        let d = Divisor::parse(&f, "poly(1,1,1):1; inf:-2").unwrap();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.to_string(), "inf:-2;poly(1,1,1):1");
        assert_eq!(Divisor::parse(&f, &d.to_string()).unwrap(), d);
        // linear polynomials canonicalize to rational points
        let d = Divisor::parse(&f, "poly(1,1):3").unwrap();
        assert_eq!(d.to_string(), "pt(1):3");
        assert!(Divisor::parse(&f, "poly(1,0,1):1").is_err());
        assert!(Divisor::parse(&f, "0").unwrap().is_zero());
    }

    #[test]
    fn parts_and_degree() {
        let f = make_field(3, 1).unwrap();
        let d = Divisor::parse(&f, "pt(0):2;pt(1):-1;poly(1,0,1):-1").unwrap();
        assert_eq!(d.degree(), -1);
        assert_eq!(d.positive_part().degree(), 2);
        assert_eq!(d.negative_part().degree(), 3);
        assert!(d.positive_part().is_effective());
        assert_eq!(d.minus(&d), Divisor::zero());
    }
}
