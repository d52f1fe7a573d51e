//! Goppa evaluation codes `{ (f(P_1), ..., f(P_N)) : f in L(D) }`.

use serde_json::json;

use crate::code::{Alphabet, Code, CodeMeta, MinDistance, Word};
use crate::curve::{Curve, CurveFunction, Divisor, Place, Point};
use crate::error::{Error, Result};
use crate::field::{Field, ProjValue};

/// Largest `#L(D)` that will be enumerated into words.
pub const MAX_SPACE_SIZE: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct GoppaCode {
    pub code: Code,
    pub basis: Vec<CurveFunction>,
    pub divisor: Divisor,
    pub genus: u64,
}

/// Rational points of the curve outside the support of `d`, in canonical order.
pub fn points_off_support(curve: &Curve, d: &Divisor) -> Vec<Point> {
    curve
        .points()
        .iter()
        .filter(|p| !d.contains_point(p))
        .cloned()
        .collect()
}

/// Checks that the evaluation points are distinct curve points off `supp(d)`.
pub fn check_points(curve: &Curve, d: &Divisor, points: &[Point]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for p in points {
        curve.check_place(&Place::Rational(p.clone()))?;
        if d.contains_point(p) {
            return Err(Error::precondition(format!(
                "evaluation point {p} lies in the support of D"
            )));
        }
        if !seen.insert(p) {
            return Err(Error::precondition(format!("evaluation point {p} repeated")));
        }
    }
    Ok(())
}

/// Coefficients of the `index`-th element of a `dim`-dimensional space:
/// the base-`q` digits of `index`, least significant first. Index 0 is zero.
pub fn combination(q: u32, mut index: u64, dim: usize) -> Vec<u32> {
    let mut c = vec![0; dim];
    for slot in c.iter_mut() {
        *slot = (index % q as u64) as u32;
        index /= q as u64;
    }
    c
}

/// `q^dim` if it fits under `limit`.
pub fn space_size(q: u32, dim: usize, limit: u64) -> Result<u64> {
    (q as u64)
        .checked_pow(dim as u32)
        .filter(|&s| s <= limit)
        .ok_or_else(|| Error::guard("size of the function space", format!("{q}^{dim}"), limit))
}

/// Sum of `c_i * rows_i` over the field.
pub fn combine_rows(field: &Field, coeffs: &[u32], rows: &[Vec<u32>], n: usize) -> Word {
    let mut w = vec![0; n];
    for (&c, row) in coeffs.iter().zip(rows) {
        if c == 0 {
            continue;
        }
        for (x, &r) in w.iter_mut().zip(row) {
            *x = field.add(*x, field.mul(c, r));
        }
    }
    w
}

/// Evaluates each basis function at each point; all values must be finite.
pub fn evaluation_rows(curve: &Curve, basis: &[CurveFunction], points: &[Point]) -> Result<Vec<Vec<u32>>> {
    basis
        .iter()
        .map(|f| {
            points
                .iter()
                .map(|p| match curve.evaluate(f, p)? {
                    ProjValue::Finite(v) => Ok(v),
                    ProjValue::Infinity => Err(Error::PoleAtPlace(p.to_string())),
                })
                .collect()
        })
        .collect()
}

pub fn build_goppa(curve: &Curve, d: &Divisor, points: Option<Vec<Point>>) -> Result<GoppaCode> {
    curve.check_divisor(d)?;
    let points = points.unwrap_or_else(|| points_off_support(curve, d));
    check_points(curve, d, &points)?;
    let n = points.len() as i64;
    let deg = d.degree();
    if deg < 0 || deg >= n {
        return Err(Error::precondition(format!(
            "need 0 <= deg D < N, got deg D = {deg}, N = {n}"
        )));
    }
    let basis = curve.riemann_roch_basis(d)?;
    let field = curve.field();
    let q = field.order();
    let size = space_size(q, basis.len(), MAX_SPACE_SIZE)?;
    let rows = evaluation_rows(curve, &basis, &points)?;
    let words: Vec<Word> = (0..size)
        .map(|k| combine_rows(field, &combination(q, k, basis.len()), &rows, points.len()))
        .collect();
    let meta = CodeMeta {
        construction: "goppa".into(),
        alphabet: Alphabet::Field,
        points,
        params: json!({
            "curve": curve.kind().to_string(),
            "divisor": d.to_string(),
            "dimension": basis.len(),
            "genus": curve.genus(),
        }),
        claimed_distance: Some(n - deg),
    };
    Ok(GoppaCode {
        code: Code::new(field, meta, words)?,
        basis,
        divisor: d.clone(),
        genus: curve.genus(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoppaSumReport {
    pub n: usize,
    pub words: usize,
    pub distance: MinDistance,
    pub genus: u64,
    /// `R + d/N`
    pub lhs: f64,
    /// `1 - g/N`
    pub rhs: f64,
    pub pass: bool,
}

/// Checks `R + d/N > 1 - g/N` from measured parameters. For linear codes
/// the comparison is done exactly as `k + d > N - g`.
pub fn goppa_sum_check(code: &Code, genus: u64) -> Result<GoppaSumReport> {
    let n = code.length();
    let distance = code.exact_min_distance()?;
    let d = distance.value().unwrap_or(n);
    let lhs = code.rate() + d as f64 / n as f64;
    let rhs = 1.0 - genus as f64 / n as f64;
    let pass = match code.linear_dimension() {
        Some(k) => (k + d) as i64 > n as i64 - genus as i64,
        None => lhs > rhs,
    };
    Ok(GoppaSumReport {
        n,
        words: code.len(),
        distance,
        genus,
        lhs,
        rhs,
        pass,
    })
}
