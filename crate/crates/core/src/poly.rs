//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;

/// Largest number of monic candidates scanned when enumerating irreducibles of one degree.
pub const MAX_IRREDUCIBLE_SCAN: u64 = 1 << 24;

/// Degree of a polynomial. The zero polynomial has degree `MinusInfinity`,
/// which sorts below every finite degree and carries no integer value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Coefficients are stored low degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<u32>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|&c| c < field.order()));
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn constant(field: &Field, c: u32) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![0, 1])
    }

    pub fn monomial(field: &Field, c: u32, n: usize) -> Poly {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        Poly::new(field, coeffs)
    }

    /// `x - a`
    pub fn linear(field: &Field, a: u32) -> Poly {
        Poly::new(field, vec![field.neg(a), 1])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree of a nonzero polynomial; `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn eval(&self, a: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// Coefficients (low first) of `self(a + t)` as a polynomial in `t`.
    pub fn taylor_shift(&self, a: u32) -> Vec<u32> {
        let f = &self.field;
        let mut c = self.coeffs.clone();
        let n = c.len();
        // repeated synthetic division by (x - a)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                c[j] = f.add(c[j], f.mul(a, c[j + 1]));
            }
        }
        c
    }

    /// Coefficients reversed to length `deg + 1` (the polynomial `x^deg p(1/x)`).
    pub fn reversed(&self) -> Vec<u32> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.field.same_as(&divisor.field)?;
        let f = &self.field;
        let dd = divisor.deg().ok_or(Error::DivisionByZero)?;
        let inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![0; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(rem[k], inv);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + i] = f.sub(rem[k - dd + i], f.mul(c, dc));
            }
        }
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divrem(divisor).expect("nonzero divisor").1
    }

    /// Exact quotient; panics if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor).expect("nonzero divisor");
        assert!(r.is_zero(), "exact_div with nonzero remainder");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(&self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(modulus);
            }
            base = (&base * &base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Irreducibility by Ben-Or's test: no factor of degree `i <= n/2` divides
    /// `x^(q^i) - x`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.deg() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let q = self.field.order() as u64;
        let x = Poly::x(&self.field);
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.pow_mod(q, self);
            if !(&h - &x).gcd(self).is_one() {
                return false;
            }
        }
        true
    }

    /// Number of times `factor` divides `self`; zero polynomials are rejected by the caller.
    pub fn multiplicity(&self, factor: &Poly) -> u32 {
        debug_assert!(!self.is_zero() && factor.deg().unwrap_or(0) > 0);
        let mut count = 0;
        let mut rest = self.clone();
        loop {
            let (q, r) = rest.divrem(factor).expect("nonzero factor");
            if !r.is_zero() {
                return count;
            }
            rest = q;
            count += 1;
        }
    }

    /// Factorization into monic irreducibles with multiplicities, sorted by the
    /// canonical polynomial order. Constants factor as the empty product.
    pub fn factor(&self) -> Vec<(Poly, u32)> {
        let f = &self.field;
        let mut rest = self.monic();
        let mut out = Vec::new();
        let x = Poly::x(f);
        let q = f.order() as u64;
        let mut frob = x.clone();
        let mut d = 1;
        while let Some(n) = rest.deg() {
            if n < 2 * d {
                if n > 0 {
                    out.push((rest.clone(), 1));
                }
                break;
            }
            frob = frob.pow_mod(q, &rest);
            let g = (&frob - &x).gcd(&rest);
            if g.deg().unwrap_or(0) > 0 {
                for coeffs in irreducibles_of_degree(f, d).iter() {
                    let pi = Poly::new(f, coeffs.clone());
                    if !pi.divides(&g) {
                        continue;
                    }
                    let m = rest.multiplicity(&pi);
                    rest = rest.exact_div(&pi.pow(m));
                    out.push((pi, m));
                }
                frob = frob.rem(&rest);
            }
            d += 1;
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn parse(field: &Field, text: &str) -> Result<Poly> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Poly::zero(field));
        }
        let coeffs = text
            .split(',')
            .map(|t| {
                let c: u32 = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad coefficient '{t}'")))?;
                if c >= field.order() {
                    return Err(Error::parse(format!("coefficient {c} outside GF({})", field.order())));
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(field, coeffs))
    }
}

/// Canonical order: by degree, then coefficients compared low degree first.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comma-separated coefficient encodings, low degree first.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}

/// Monic polynomials of exact degree `d` in canonical order (the constant
/// coefficient is the most significant digit).
fn monic_of_degree(field: &Field, d: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
    let q = field.order() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |k| {
        let mut coeffs = vec![0u32; d + 1];
        let mut rest = k;
        for i in (0..d).rev() {
            coeffs[i] = (rest % q) as u32;
            rest /= q;
        }
        coeffs[d] = 1;
        coeffs
    })
}

/// Monic polynomials of degree at most `d`, by degree then canonical order.
pub fn monic_up_to_degree(field: &Field, d: usize) -> Vec<Poly> {
    (0..=d)
        .flat_map(|e| monic_of_degree(field, e).map(|c| Poly::new(field, c)))
        .collect()
}

/// Every polynomial of degree at most `d`, the zero polynomial first.
pub fn polys_up_to_degree(field: &Field, d: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(field)];
    for p in monic_up_to_degree(field, d) {
        for c in 1..field.order() {
            out.push(p.scale(c));
        }
    }
    out
}

/// Monic irreducibles of exact degree `d`, cached per field.
pub(crate) fn irreducibles_of_degree(field: &Field, d: usize) -> Arc<Vec<Vec<u32>>> {
    if let Some(list) = field.irreducible_cache(d) {
        return list;
    }
    let list: Vec<Vec<u32>> = monic_of_degree(field, d)
        .filter(|c| Poly::new(field, c.clone()).is_irreducible())
        .collect();
    let list = Arc::new(list);
    field.store_irreducibles(d, list.clone());
    list
}

/// All monic irreducible polynomials of degree `1..=max_degree`, sorted by
/// degree and then lexicographically by coefficients (low degree first).
pub fn enumerate_irreducibles(field: &Field, max_degree: usize) -> Result<Vec<Poly>> {
    if max_degree == 0 {
        return Err(Error::precondition("max_degree must be at least 1"));
    }
    let scan = (field.order() as u64).checked_pow(max_degree as u32);
    if scan.is_none_or(|s| s > MAX_IRREDUCIBLE_SCAN) {
        return Err(Error::guard(
            "irreducible enumeration",
            format!("{}^{}", field.order(), max_degree),
            MAX_IRREDUCIBLE_SCAN,
        ));
    }
    Ok((1..=max_degree)
        .flat_map(|d| {
            irreducibles_of_degree(field, d)
                .iter()
                .map(|c| Poly::new(field, c.clone()))
                .collect::<Vec<_>>()
        })
        .collect())
}
