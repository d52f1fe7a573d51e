//! Explicit curves: the projective line and the Hermitian curve
//! `y^q0 + y = x^(q0+1)` over GF(q0^2).
//!
//! Rational points are ordered canonically: affine points ascending by
//! coordinate encodings, then the point at infinity last. That order fixes
//! codeword coordinates everywhere downstream.

mod divisor;
mod hermitian;

use std::fmt;

pub use divisor::{Divisor, Place, Point};
pub use hermitian::HermitianFunction;

use crate::error::{Error, Result};
use crate::extension::Extension;
use crate::field::{prime_power, Field, ProjValue};
use crate::poly::Poly;
use crate::rational::RationalFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    ProjectiveLine,
    Hermitian,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::ProjectiveLine => "p1",
            CurveKind::Hermitian => "hermitian",
        })
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<CurveKind> {
        match s {
            "p1" | "projective_line" => Ok(CurveKind::ProjectiveLine),
            "hermitian" => Ok(CurveKind::Hermitian),
            _ => Err(Error::parse(format!("unknown curve kind '{s}'"))),
        }
    }
}

/// A function on a curve: a rational function on P^1, or a reduced
/// polynomial in `x, y` on the Hermitian curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurveFunction {
    P1(RationalFunction),
    Hermitian(HermitianFunction),
}

impl CurveFunction {
    pub fn is_zero(&self) -> bool {
        match self {
            CurveFunction::P1(f) => f.is_zero(),
            CurveFunction::Hermitian(f) => f.is_zero(),
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            CurveFunction::P1(f) => f.field(),
            CurveFunction::Hermitian(f) => f.field(),
        }
    }

    pub fn scale(&self, c: u32) -> CurveFunction {
        match self {
            CurveFunction::P1(f) => CurveFunction::P1(&RationalFunction::constant(f.field(), c) * f),
            CurveFunction::Hermitian(f) => CurveFunction::Hermitian(f.scale(c)),
        }
    }

    pub fn add(&self, other: &CurveFunction) -> Result<CurveFunction> {
        match (self, other) {
            (CurveFunction::P1(a), CurveFunction::P1(b)) => Ok(CurveFunction::P1(a + b)),
            (CurveFunction::Hermitian(a), CurveFunction::Hermitian(b)) => Ok(CurveFunction::Hermitian(a.add(b))),
            _ => Err(Error::precondition("functions live on different curves")),
        }
    }

    pub fn sub(&self, other: &CurveFunction) -> Result<CurveFunction> {
        self.add(&other.scale(self.field().neg(1)))
    }

    pub fn as_p1(&self) -> Option<&RationalFunction> {
        match self {
            CurveFunction::P1(f) => Some(f),
            CurveFunction::Hermitian(_) => None,
        }
    }
}

impl fmt::Display for CurveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveFunction::P1(g) => g.fmt(f),
            CurveFunction::Hermitian(g) => g.fmt(f),
        }
    }
}

/// A local parameter written as a quotient of two functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalParameter {
    pub num: CurveFunction,
    pub den: CurveFunction,
}

/// Expansion coefficients `f^(0), ..., f^(r_max)` in a uniformizer at a place.
/// At a place of degree `e > 1` the coefficients live in GF(q^e) and refer to
/// `t = x - beta` for the least root `beta` of the place's polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalExpansion {
    pub place: Place,
    pub field: Field,
    pub coefficients: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct Curve {
    kind: CurveKind,
    field: Field,
    q0: u32,
    genus: u64,
    points: Vec<Point>,
}

impl Curve {
    pub fn projective_line(field: &Field) -> Curve {
        let mut points: Vec<Point> = field.elements().map(|a| Point::Affine(vec![a])).collect();
        points.push(Point::Infinity);
        Curve {
            kind: CurveKind::ProjectiveLine,
            field: field.clone(),
            q0: 0,
            genus: 0,
            points,
        }
    }

    pub fn hermitian(field: &Field) -> Result<Curve> {
        if !field.degree().is_multiple_of(2) {
            return Err(Error::precondition(format!(
                "Hermitian curve needs a square field order, got {}",
                field.order()
            )));
        }
        let q0 = field.characteristic().pow(field.degree() / 2);
        let mut points = Vec::new();
        for a in field.elements() {
            let rhs = field.pow(a, q0 as u64 + 1);
            for b in field.elements() {
                if field.add(field.pow(b, q0 as u64), b) == rhs {
                    points.push(Point::Affine(vec![a, b]));
                }
            }
        }
        points.push(Point::Infinity);
        Ok(Curve {
            kind: CurveKind::Hermitian,
            field: field.clone(),
            q0,
            genus: q0 as u64 * (q0 as u64 - 1) / 2,
            points,
        })
    }

    pub fn build(kind: CurveKind, field: &Field) -> Result<Curve> {
        match kind {
            CurveKind::ProjectiveLine => Ok(Curve::projective_line(field)),
            CurveKind::Hermitian => Curve::hermitian(field),
        }
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Square root of the field order for the Hermitian curve.
    pub fn q0(&self) -> Option<u32> {
        (self.kind == CurveKind::Hermitian).then_some(self.q0)
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point_index(&self, point: &Point) -> Option<usize> {
        self.points.binary_search(point).ok()
    }

    pub fn infinity(&self) -> Point {
        Point::Infinity
    }

    pub fn is_on_curve(&self, point: &Point) -> bool {
        self.point_index(point).is_some()
    }

    /// Rejects places that do not exist on this curve.
    pub fn check_place(&self, place: &Place) -> Result<()> {
        match place {
            Place::Rational(p) if self.is_on_curve(p) => Ok(()),
            Place::Rational(p) => Err(Error::precondition(format!("{p} is not a point of the curve"))),
            Place::Closed(poly) if self.kind == CurveKind::ProjectiveLine => {
                poly.field().same_as(&self.field)?;
                Ok(())
            }
            Place::Closed(_) => Err(Error::UnsupportedDivisor(
                "higher-degree places are only available on P^1".into(),
            )),
        }
    }

    pub fn check_divisor(&self, d: &Divisor) -> Result<()> {
        d.support().try_for_each(|p| self.check_place(p))
    }

    pub fn x(&self) -> CurveFunction {
        match self.kind {
            CurveKind::ProjectiveLine => CurveFunction::P1(RationalFunction::x(&self.field)),
            CurveKind::Hermitian => CurveFunction::Hermitian(HermitianFunction::x(&self.field, self.q0)),
        }
    }

    pub fn constant(&self, c: u32) -> CurveFunction {
        match self.kind {
            CurveKind::ProjectiveLine => CurveFunction::P1(RationalFunction::constant(&self.field, c)),
            CurveKind::Hermitian => CurveFunction::Hermitian(HermitianFunction::constant(&self.field, self.q0, c)),
        }
    }

    /// Canonical uniformizer: `x - a` at finite points, `1/x` at infinity on
    /// P^1, and `x/y` at the Hermitian point at infinity (valuations -q0 and -(q0+1)).
    pub fn uniformizer(&self, point: &Point) -> Result<LocalParameter> {
        if !self.is_on_curve(point) {
            return Err(Error::precondition(format!("{point} is not a point of the curve")));
        }
        let field = &self.field;
        let one = self.constant(1);
        Ok(match (self.kind, point) {
            (_, Point::Affine(c)) => {
                let t = match self.kind {
                    CurveKind::ProjectiveLine => {
                        CurveFunction::P1(RationalFunction::from_poly(Poly::linear(field, c[0])))
                    }
                    CurveKind::Hermitian => CurveFunction::Hermitian(HermitianFunction::from_components(
                        field,
                        self.q0,
                        vec![Poly::linear(field, c[0])],
                    )),
                };
                LocalParameter { num: t, den: one }
            }
            (CurveKind::ProjectiveLine, Point::Infinity) => LocalParameter {
                num: one,
                den: self.x(),
            },
            (CurveKind::Hermitian, Point::Infinity) => LocalParameter {
                num: self.x(),
                den: CurveFunction::Hermitian(HermitianFunction::y(field, self.q0)),
            },
        })
    }

    /// Valuation of a local parameter at a rational point.
    pub fn parameter_valuation(&self, t: &LocalParameter, point: &Point) -> Result<i64> {
        let place = Place::Rational(point.clone());
        let vn = self.valuation(&t.num, &place)?;
        let vd = self.valuation(&t.den, &place)?;
        match (vn, vd) {
            (Some(a), Some(b)) => Ok(a - b),
            _ => Err(Error::DivisionByZero),
        }
    }

    /// Basis of `L(D) = { f : (f) + D >= 0 }`. On P^1 any divisor is allowed;
    /// on the Hermitian curve only multiples of the point at infinity.
    pub fn riemann_roch_basis(&self, d: &Divisor) -> Result<Vec<CurveFunction>> {
        self.check_divisor(d)?;
        match self.kind {
            CurveKind::ProjectiveLine => Ok(p1_riemann_roch_basis(&self.field, d)
                .into_iter()
                .map(CurveFunction::P1)
                .collect()),
            CurveKind::Hermitian => {
                let inf = Place::infinity();
                if d.support().any(|p| *p != inf) {
                    return Err(Error::UnsupportedDivisor(format!(
                        "Hermitian Riemann-Roch spaces need D = m*P_inf, got {d}"
                    )));
                }
                let m = d.coefficient(&inf);
                Ok(hermitian_monomials(self.q0, m)
                    .into_iter()
                    .map(|(i, j)| CurveFunction::Hermitian(HermitianFunction::monomial(&self.field, self.q0, 1, i, j)))
                    .collect())
            }
        }
    }

    pub fn evaluate(&self, f: &CurveFunction, point: &Point) -> Result<ProjValue> {
        match (f, point) {
            (CurveFunction::P1(g), _) if self.kind == CurveKind::ProjectiveLine => {
                let v = point
                    .as_p1()
                    .ok_or_else(|| Error::precondition(format!("{point} is not a point of P^1")))?;
                Ok(g.value_at(v))
            }
            (CurveFunction::Hermitian(g), Point::Affine(c)) if c.len() == 2 => {
                Ok(ProjValue::Finite(g.value_at_affine(c[0], c[1])))
            }
            (CurveFunction::Hermitian(g), Point::Infinity) => Ok(g.value_at_infinity()),
            _ => Err(Error::precondition("function and point belong to different curves")),
        }
    }

    /// Expansion coefficients at a rational point in the canonical uniformizer.
    pub fn local_expand(&self, f: &CurveFunction, point: &Point, r_max: usize) -> Result<LocalExpansion> {
        let coefficients = match (f, point) {
            (CurveFunction::P1(g), _) => {
                let v = point
                    .as_p1()
                    .ok_or_else(|| Error::precondition(format!("{point} is not a point of P^1")))?;
                g.expand_at(v, r_max)?
            }
            (CurveFunction::Hermitian(g), Point::Affine(c)) => g.expand_at_affine(c[0], c[1], r_max),
            (CurveFunction::Hermitian(_), Point::Infinity) => {
                return Err(Error::Precondition(
                    "expansions at the Hermitian point at infinity are not supported".into(),
                ))
            }
        };
        Ok(LocalExpansion {
            place: Place::Rational(point.clone()),
            field: self.field.clone(),
            coefficients,
        })
    }

    /// Valuation at a place; `None` for the zero function.
    pub fn valuation(&self, f: &CurveFunction, place: &Place) -> Result<Option<i64>> {
        self.check_place(place)?;
        match (f, place) {
            (CurveFunction::P1(g), _) => Ok(p1_valuation(g, place)),
            (CurveFunction::Hermitian(g), Place::Rational(Point::Affine(c))) => Ok(g.valuation_at_affine(c[0], c[1])),
            (CurveFunction::Hermitian(g), Place::Rational(Point::Infinity)) => Ok(g.pole_order().map(|n| -(n as i64))),
            (CurveFunction::Hermitian(_), Place::Closed(_)) => unreachable!("rejected by check_place"),
        }
    }
}

/// Reduced monomials `x^i y^j` with `i*q0 + j*(q0+1) <= m`, ordered by pole order.
pub fn hermitian_monomials(q0: u32, m: i64) -> Vec<(usize, usize)> {
    let q0 = q0 as i64;
    let mut out = Vec::new();
    for j in 0..q0 {
        let mut i = 0;
        while i * q0 + j * (q0 + 1) <= m {
            out.push((i as usize, j as usize));
            i += 1;
        }
    }
    out.sort_by_key(|&(i, j)| i as i64 * q0 + j as i64 * (q0 + 1));
    out
}

/// `x^i * A- / A+` for `i = 0..=deg D`, where `A+` (resp. `A-`) collects the
/// finite places with positive (resp. negative) coefficient. Empty when `deg D < 0`.
pub fn p1_riemann_roch_basis(field: &Field, d: &Divisor) -> Vec<RationalFunction> {
    let deg = d.degree();
    if deg < 0 {
        return Vec::new();
    }
    let mut a_plus = Poly::one(field);
    let mut a_minus = Poly::one(field);
    for (place, c) in d.terms() {
        if let Some(pi) = place.p1_polynomial(field) {
            let power = pi.pow(c.unsigned_abs() as u32);
            if c > 0 {
                a_plus = &a_plus * &power;
            } else {
                a_minus = &a_minus * &power;
            }
        }
    }
    (0..=deg as usize)
        .map(|i| {
            RationalFunction::reduce(&Poly::monomial(field, 1, i) * &a_minus, a_plus.clone())
                .expect("nonzero denominator")
        })
        .collect()
}

/// Valuation of a rational function at any place of P^1; `None` for zero.
pub fn p1_valuation(f: &RationalFunction, place: &Place) -> Option<i64> {
    match place {
        Place::Rational(p) => f.valuation_at(p.as_p1()?),
        Place::Closed(pi) => f.valuation_at_place(pi),
    }
}

/// Expansion of a rational function at any place of P^1. Rational places
/// use `x - a` or `1/x`; a place of degree `e > 1` uses `x - beta` over
/// GF(q^e) with `beta` the least root of its polynomial.
pub fn p1_local_expand(f: &RationalFunction, place: &Place, r_max: usize) -> Result<LocalExpansion> {
    match place {
        Place::Rational(p) => {
            let v = p
                .as_p1()
                .ok_or_else(|| Error::precondition(format!("{p} is not a point of P^1")))?;
            Ok(LocalExpansion {
                place: place.clone(),
                field: f.field().clone(),
                coefficients: f.expand_at(v, r_max)?,
            })
        }
        Place::Closed(pi) => {
            let ext = Extension::new(f.field(), pi.deg().unwrap_or(1) as u32)?;
            let beta = ext.roots(pi)[0];
            let lifted = ext.embed_rational(f);
            Ok(LocalExpansion {
                place: place.clone(),
                field: ext.field().clone(),
                coefficients: lifted.expand_at(ProjValue::Finite(beta), r_max)?,
            })
        }
    }
}

/// Builds a curve of the given kind over GF(q).
pub fn build_curve(kind: CurveKind, q: u64) -> Result<Curve> {
    if kind == CurveKind::Hermitian {
        match prime_power(q) {
            Some((_, a)) if a % 2 == 0 => {}
            _ => {
                return Err(Error::precondition(format!(
                    "Hermitian curve needs q = q0^2 with q0 a prime power, got {q}"
                )))
            }
        }
    }
    Curve::build(kind, &crate::field::field_of_order(q)?)
}
