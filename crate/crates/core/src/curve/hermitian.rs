//! Functions on the Hermitian curve `y^q0 + y = x^(q0+1)` that are regular
//! away from the point at infinity, in the reduced form `sum_{j<q0} a_j(x) y^j`.

use std::fmt;

use crate::field::{Field, ProjValue};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermitianFunction {
    q0: u32,
    comps: Vec<Poly>,
}

impl HermitianFunction {
    pub fn zero(field: &Field, q0: u32) -> HermitianFunction {
        HermitianFunction {
            q0,
            comps: vec![Poly::zero(field); q0 as usize],
        }
    }

    pub fn constant(field: &Field, q0: u32, c: u32) -> HermitianFunction {
        HermitianFunction::monomial(field, q0, c, 0, 0)
    }

    /// `c * x^i * y^j` with `j < q0`.
    pub fn monomial(field: &Field, q0: u32, c: u32, i: usize, j: usize) -> HermitianFunction {
        assert!(j < q0 as usize, "y exponent must be reduced");
        let mut f = HermitianFunction::zero(field, q0);
        f.comps[j] = Poly::monomial(field, c, i);
        f
    }

    pub fn x(field: &Field, q0: u32) -> HermitianFunction {
        HermitianFunction::monomial(field, q0, 1, 1, 0)
    }

    pub fn y(field: &Field, q0: u32) -> HermitianFunction {
        HermitianFunction::monomial(field, q0, 1, 0, 1)
    }

    /// Builds `sum_j comps[j](x) y^j`, reducing powers of `y` modulo the curve equation.
    pub fn from_components(field: &Field, q0: u32, comps: Vec<Poly>) -> HermitianFunction {
        reduce(field, q0, comps)
    }

    pub fn field(&self) -> &Field {
        self.comps[0].field()
    }

    pub fn q0(&self) -> u32 {
        self.q0
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn scale(&self, c: u32) -> HermitianFunction {
        HermitianFunction {
            q0: self.q0,
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &HermitianFunction) -> HermitianFunction {
        HermitianFunction {
            q0: self.q0,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &HermitianFunction) -> HermitianFunction {
        HermitianFunction {
            q0: self.q0,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &HermitianFunction) -> HermitianFunction {
        let field = self.field();
        let mut prod = vec![Poly::zero(field); 2 * self.q0 as usize - 1];
        for (i, a) in self.comps.iter().enumerate() {
            for (j, b) in other.comps.iter().enumerate() {
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        reduce(field, self.q0, prod)
    }

    /// Pole order at the point at infinity, where `x^i y^j` has pole order
    /// `i*q0 + j*(q0+1)`; these are distinct for reduced monomials. `None` for zero.
    pub fn pole_order(&self) -> Option<u64> {
        let q0 = self.q0 as u64;
        self.comps
            .iter()
            .enumerate()
            .filter_map(|(j, p)| p.deg().map(|i| i as u64 * q0 + j as u64 * (q0 + 1)))
            .max()
    }

    pub fn value_at_affine(&self, a: u32, b: u32) -> u32 {
        let f = self.field();
        self.comps
            .iter()
            .rev()
            .fold(0, |acc, p| f.add(f.mul(acc, b), p.eval(a)))
    }

    pub fn value_at_infinity(&self) -> ProjValue {
        match self.pole_order() {
            Some(n) if n > 0 => ProjValue::Infinity,
            _ => ProjValue::Finite(self.comps[0].coeff(0)),
        }
    }

    /// Coefficients `0..=r_max` of the expansion at the affine point `(a, b)`
    /// in the uniformizer `t = x - a`.
    pub fn expand_at_affine(&self, a: u32, b: u32, r_max: usize) -> Vec<u32> {
        let f = self.field();
        let terms = r_max + 1;
        let y = expand_y(f, self.q0, a, b, terms);
        let mut out = vec![0; terms];
        let mut y_pow = vec![0; terms];
        y_pow[0] = 1;
        for (j, comp) in self.comps.iter().enumerate() {
            if j > 0 {
                y_pow = series_mul(f, &y_pow, &y, terms);
            }
            if comp.is_zero() {
                continue;
            }
            let shifted = comp.taylor_shift(a);
            let term = series_mul(f, &shifted, &y_pow, terms);
            for (o, t) in out.iter_mut().zip(term) {
                *o = f.add(*o, t);
            }
        }
        out
    }

    /// Order of vanishing at an affine point; `None` for the zero function.
    pub fn valuation_at_affine(&self, a: u32, b: u32) -> Option<i64> {
        // the number of zeros counted with multiplicity equals the pole order
        let bound = self.pole_order()? as usize;
        let exp = self.expand_at_affine(a, b, bound);
        let v = exp
            .iter()
            .position(|&c| c != 0)
            .expect("zero order bounded by pole order");
        Some(v as i64)
    }
}

fn reduce(field: &Field, q0: u32, mut comps: Vec<Poly>) -> HermitianFunction {
    let q0u = q0 as usize;
    // y^q0 = x^(q0+1) - y
    let xq = Poly::monomial(field, 1, q0u + 1);
    for k in (q0u..comps.len()).rev() {
        let c = std::mem::replace(&mut comps[k], Poly::zero(field));
        if c.is_zero() {
            continue;
        }
        let lower = k - q0u;
        comps[lower] = &comps[lower] + &(&c * &xq);
        comps[lower + 1] = &comps[lower + 1] - &c;
    }
    comps.resize(q0u, Poly::zero(field));
    HermitianFunction { q0, comps }
}

/// Expansion of `y` at `(a, b)` in `t = x - a`. Since `y(t)^q0 = sum Y_r^q0 t^(r q0)`
/// in characteristic `p`, the coefficients satisfy
/// `Y_r = R_r - [q0 | r] Y_(r/q0)^q0` with `R(t) = (a + t)^(q0+1)`.
fn expand_y(field: &Field, q0: u32, a: u32, b: u32, terms: usize) -> Vec<u32> {
    let r_poly = Poly::linear(field, field.neg(a)).pow(q0 + 1);
    let mut y = vec![0; terms];
    if terms == 0 {
        return y;
    }
    y[0] = b;
    let q0u = q0 as usize;
    for r in 1..terms {
        let mut v = r_poly.coeff(r);
        if r % q0u == 0 {
            v = field.sub(v, field.pow(y[r / q0u], q0 as u64));
        }
        y[r] = v;
    }
    y
}

fn series_mul(field: &Field, a: &[u32], b: &[u32], terms: usize) -> Vec<u32> {
    let mut out = vec![0; terms];
    for (i, &x) in a.iter().enumerate().take(terms) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(terms - i) {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    out
}

impl fmt::Display for HermitianFunction {
    /// Components separated by `|`, the `j`-th being the coefficient list of `y^j`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join("|"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn curve_equation_reduces_to_zero() {
        for (p, a) in [(2, 2), (3, 2)] {
            let f = make_field(p, a).unwrap();
            let q0 = p;
            let y = HermitianFunction::y(&f, q0);
            let x = HermitianFunction::x(&f, q0);
            let mut yq = HermitianFunction::constant(&f, q0, 1);
            for _ in 0..q0 {
                yq = yq.mul(&y);
            }
            let mut xq = HermitianFunction::constant(&f, q0, 1);
            for _ in 0..=q0 {
                xq = xq.mul(&x);
            }
            assert!(yq.add(&y).sub(&xq).is_zero());
        }
    }

    #[test]
    fn expansion_of_y_satisfies_curve_equation() {
        let f = make_field(3, 2).unwrap();
        let q0 = 3;
        for a in f.elements() {
            for b in f.elements() {
                if f.add(f.pow(b, 3), b) != f.pow(a, 4) {
                    continue;
                }
                let terms = 12;
                let y = expand_y(&f, q0, a, b, terms);
                let mut yq = vec![0; terms];
                yq[0] = 1;
                for _ in 0..q0 {
                    yq = series_mul(&f, &yq, &y, terms);
                }
                let lhs: Vec<u32> = yq.iter().zip(&y).map(|(&u, &v)| f.add(u, v)).collect();
                let rhs = Poly::linear(&f, f.neg(a)).pow(4);
                for (r, &v) in lhs.iter().enumerate() {
                    assert_eq!(v, rhs.coeff(r));
                }
            }
        }
    }

    #[test]
    fn pole_orders_of_monomials() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(HermitianFunction::x(&f, 2).pole_order(), Some(2));
        assert_eq!(HermitianFunction::y(&f, 2).pole_order(), Some(3));
        assert_eq!(HermitianFunction::y(&f, 2).value_at_infinity(), ProjValue::Infinity);
        assert_eq!(HermitianFunction::zero(&f, 2).pole_order(), None);
    }
}
