//! Small finite fields GF(p^a).
//!
//! Elements are stored as their canonical integer encoding: an element with
//! polynomial-basis coefficients `c_0, ..., c_{a-1}` (residues mod p of the
//! powers of the generator class `x`) encodes as `sum c_i p^i`. The encoding
//! order is the canonical total order used by every tie-break in the crate.
//!
//! The defining modulus is the lexicographically least monic irreducible
//! polynomial of degree `a` over GF(p), coefficients compared low degree
//! first. For a prime field the modulus is `x` and the encoding is the
//! residue itself.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest field order the crate will construct.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// A value of the projective line over a field: a finite element or infinity.
///
/// Doubles as a point of P^1 and as a symbol of the `q + 1` letter alphabet,
/// where infinity is the symbol `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjValue {
    Finite(u32),
    Infinity,
}

impl ProjValue {
    pub fn symbol(self, q: u32) -> u32 {
        match self {
            ProjValue::Finite(a) => a,
            ProjValue::Infinity => q,
        }
    }

    pub fn from_symbol(symbol: u32, q: u32) -> Self {
        if symbol == q {
            ProjValue::Infinity
        } else {
            ProjValue::Finite(symbol)
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ProjValue::Infinity)
    }
}

impl fmt::Display for ProjValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjValue::Finite(a) => write!(f, "{a}"),
            ProjValue::Infinity => f.write_str("inf"),
        }
    }
}

struct Inner {
    p: u32,
    alpha: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    // monic irreducibles of each exact degree, as low-first coefficient vectors
    irreducibles: Mutex<BTreeMap<usize, Arc<Vec<Vec<u32>>>>>,
}

/// Handle to a finite field. Cheap to clone; all clones share tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.alpha)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power into `(p, alpha)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut alpha = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        alpha += 1;
    }
    Some((p as u32, alpha))
}

/// Builds GF(p^alpha) with the lexicographically least monic irreducible modulus.
pub fn make_field(p: u32, alpha: u32) -> Result<Field> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if alpha == 0 {
        return Err(Error::InvalidField("extension degree must be positive".into()));
    }
    let q = (p as u64)
        .checked_pow(alpha)
        .filter(|&q| q <= MAX_FIELD_ORDER)
        .ok_or_else(|| Error::guard("field order", format!("{p}^{alpha}"), MAX_FIELD_ORDER))?;
    let modulus = if alpha == 1 {
        vec![0, 1]
    } else {
        least_irreducible_modulus(p, alpha)?
    };
    Ok(Field::from_modulus(p, alpha, q as u32, modulus))
}

/// Builds the field of order `q`, which must be a prime power.
pub fn field_of_order(q: u64) -> Result<Field> {
    let (p, alpha) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    make_field(p, alpha)
}

fn least_irreducible_modulus(p: u32, alpha: u32) -> Result<Vec<u32>> {
    let prime = make_field(p, 1)?;
    let count = (p as u64).pow(alpha);
    for k in 0..count {
        // c_0 is the most significant digit of k
        let mut coeffs = vec![0u32; alpha as usize + 1];
        let mut rest = k;
        for i in (0..alpha as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[alpha as usize] = 1;
        if Poly::new(&prime, coeffs.clone()).is_irreducible() {
            return Ok(coeffs);
        }
    }
    Err(Error::InvalidField(format!(
        "no irreducible polynomial of degree {alpha} over GF({p})"
    )))
}

impl Field {
    fn from_modulus(p: u32, alpha: u32, q: u32, modulus: Vec<u32>) -> Field {
        let mut field = Inner {
            p,
            alpha,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            irreducibles: Mutex::new(BTreeMap::new()),
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&l| slow_pow(&field, g, order / l) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..q - 1 {
            exp.push(acc);
            log[acc as usize] = i;
            acc = slow_mul(&field, acc, generator);
        }
        field.exp = exp;
        field.log = log;
        Field(Arc::new(field))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.alpha
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients over GF(p), low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// All elements in canonical encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.0.q {
            return Err(Error::parse(format!(
                "{value} is not an element encoding of GF({})",
                self.0.q
            )));
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    /// Residue of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    /// The class of `x` in GF(p)[x]/(modulus); for a prime field this is 0.
    pub fn generator_class(&self) -> u32 {
        if self.0.alpha == 1 {
            0
        } else {
            self.0.p
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.alpha == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.0.alpha {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.alpha == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.0.alpha {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.q - 1;
        let e = self.0.log[a as usize] + self.0.log[b as usize];
        self.0.exp[(if e >= n { e - n } else { e }) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.0.q - 1;
        let l = self.0.log[a as usize];
        Some(self.0.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (e % n)) % n) as usize]
    }

    /// Polynomial-basis coefficients of an element, low degree first.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        (0..self.0.alpha)
            .map(|_| {
                let c = a % self.0.p;
                a /= self.0.p;
                c
            })
            .collect()
    }

    pub(crate) fn irreducible_cache(&self, degree: usize) -> Option<Arc<Vec<Vec<u32>>>> {
        self.0.irreducibles.lock().unwrap().get(&degree).cloned()
    }

    pub(crate) fn store_irreducibles(&self, degree: usize, list: Arc<Vec<Vec<u32>>>) {
        self.0.irreducibles.lock().unwrap().insert(degree, list);
    }

    pub(crate) fn same_as(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }
}

// Schoolbook multiplication in GF(p)[x]/(modulus), used only to build the tables.
fn slow_mul(field: &Inner, a: u32, b: u32) -> u32 {
    let p = field.p as u64;
    let n = field.alpha as usize;
    let digits = |mut v: u32| {
        let mut d = vec![0u64; n];
        for slot in d.iter_mut() {
            *slot = (v % field.p) as u64;
            v /= field.p;
        }
        d
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * n];
    for i in 0..n {
        if da[i] == 0 {
            continue;
        }
        for j in 0..n {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    for k in (n..2 * n).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..n {
            let m = field.modulus[i] as u64;
            prod[k - n + i] = (prod[k - n + i] + p - (c * m) % p) % p;
        }
    }
    let mut out = 0u64;
    for i in (0..n).rev() {
        out = out * p + prod[i];
    }
    out as u32
}

fn slow_pow(field: &Inner, a: u32, mut e: u64) -> u32 {
    let mut base = a;
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(field, acc, base);
        }
        base = slow_mul(field, base, base);
        e >>= 1;
    }
    acc
}

/// An element bundled with its field, for checked arithmetic across field boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn coefficients(&self) -> Vec<u32> {
        self.field.coefficients(self.value)
    }

    fn lift(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn try_add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.same_as(&rhs.field)?;
        Ok(self.lift(self.field.add(self.value, rhs.value)))
    }

    pub fn try_sub(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.same_as(&rhs.field)?;
        Ok(self.lift(self.field.sub(self.value, rhs.value)))
    }

    pub fn try_mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.same_as(&rhs.field)?;
        Ok(self.lift(self.field.mul(self.value, rhs.value)))
    }

    pub fn try_div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.same_as(&rhs.field)?;
        Ok(self.lift(self.field.div(self.value, rhs.value)?))
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        Ok(self.lift(self.field.inv(self.value).ok_or(Error::DivisionByZero)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.lift(self.field.pow(self.value, e))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on mixed fields; use the `try_*` methods to handle that case.
macro_rules! element_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs)
                    .expect(concat!("FieldElement::", stringify!($method)))
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

element_op!(Add, add, try_add);
element_op!(Sub, sub, try_sub);
element_op!(Mul, mul, try_mul);
element_op!(Div, div, try_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.lift(self.field.neg(self.value))
    }
}

/// Outcome of [`self_test`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelfTestReport {
    pub order: u32,
    pub triples: usize,
    /// Triples breaking associativity, commutativity or distributivity.
    pub axiom_failures: usize,
    /// Pairs `(a, b)` with `b != 0` and `(a / b) b != a`.
    pub division_failures: usize,
    /// Elements with `a^q != a`.
    pub frobenius_failures: usize,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.axiom_failures == 0 && self.division_failures == 0 && self.frobenius_failures == 0
    }
}

/// Checks the ring axioms and division on `triples` random triples drawn
/// from a seeded ChaCha8 stream, and `a^q = a` on every element.
pub fn self_test(field: &Field, triples: usize, seed: u64) -> SelfTestReport {
    use rand::{Rng, SeedableRng};
    let q = field.order();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut report = SelfTestReport {
        order: q,
        triples,
        ..Default::default()
    };
    let f = field;
    for _ in 0..triples {
        let [a, b, c] = [0; 3].map(|_: u32| rng.random_range(0..q));
        let ok = f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            && f.add(a, b) == f.add(b, a)
            && f.mul(a, b) == f.mul(b, a)
            && f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
            && f.add(a, f.neg(a)) == 0
            && f.sub(f.add(a, b), b) == a;
        report.axiom_failures += !ok as usize;
        if b != 0 && f.div(a, b).ok().map(|x| f.mul(x, b)) != Some(a) {
            report.division_failures += 1;
        }
    }
    report.frobenius_failures = f.elements().filter(|&a| f.pow(a, q as u64) != a).count();
    report
}
