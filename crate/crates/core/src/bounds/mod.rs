//! Asymptotic rate/distance bounds evaluated at 320-bit precision.
//!
//! Entropy, the Gilbert-Varshamov curve, the Goppa line for square `q`,
//! Xing's gains (finite `m` and the limit `c_q`), the `log_q(1 + q^-3)`
//! gain of the section construction, and a CSV frontier table.

mod real;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

pub use real::{Real, PRECISION};

/// Digits used in CSV output.
pub const CSV_DIGITS: usize = 12;

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::precondition(format!(
            "alphabet size must be at least 2, got {q}"
        )));
    }
    Ok(())
}

fn check_unit(delta: &Real) -> Result<()> {
    if !delta.is_finite() || *delta < Real::zero() || *delta > Real::one() {
        return Err(Error::precondition(format!(
            "delta = {} is outside [0, 1]",
            delta.to_sig(CSV_DIGITS)
        )));
    }
    Ok(())
}

/// `sqrt(q)` when `q` is a perfect square.
pub fn square_root(q: u64) -> Option<u64> {
    let r = q.isqrt();
    (r * r == q).then_some(r)
}

/// `H_q(d) = d log_q(q-1) - d log_q d - (1-d) log_q(1-d)`, with the
/// continuous extension at `d = 0` and `d = 1`.
pub fn entropy(q: u64, delta: &Real) -> Result<Real> {
    check_q(q)?;
    check_unit(delta)?;
    let one = Real::one();
    if delta.is_zero() {
        return Ok(Real::zero());
    }
    let qm1 = Real::from_u64(q - 1).log(q);
    if *delta == one {
        return Ok(qm1);
    }
    let rest = &one - delta;
    Ok(delta * &qm1 - delta * &delta.log(q) - &rest * &rest.log(q))
}

/// The same function written as `d log_q((q-1)(1-d)/d) - log_q(1-d)`.
pub fn entropy_alt(q: u64, delta: &Real) -> Result<Real> {
    check_q(q)?;
    check_unit(delta)?;
    let one = Real::one();
    if delta.is_zero() {
        return Ok(Real::zero());
    }
    if *delta == one {
        return Ok(Real::from_u64(q - 1).log(q));
    }
    let rest = &one - delta;
    let inner = &(&Real::from_u64(q - 1) * &rest) / delta;
    Ok(delta * &inner.log(q) - rest.log(q))
}

/// `1 - H_q(d)` on `0 < d < (q-1)/q`.
pub fn gv_feasible(q: u64, delta: &Real) -> Result<Real> {
    check_q(q)?;
    let cap = Real::ratio(q as i64 - 1, q);
    if *delta <= Real::zero() || *delta >= cap {
        return Err(Error::precondition(format!(
            "delta = {} is outside (0, (q-1)/q)",
            delta.to_sig(CSV_DIGITS)
        )));
    }
    Ok(Real::one() - entropy(q, delta)?)
}

/// `1 - 1/(sqrt(q) - 1)` for square `q >= 4`.
pub fn goppa_line(q: u64) -> Result<Real> {
    match square_root(q) {
        Some(q0) if q0 >= 2 => Ok(Real::one() - Real::ratio(1, q0 - 1)),
        _ => Err(Error::precondition(format!(
            "q = {q} is not the square of an integer >= 2"
        ))),
    }
}

/// `log_q(1 + (q-1) q^(-2i))`.
pub fn xing_term(q: u64, i: u32) -> Result<Real> {
    check_q(q)?;
    let qr = Real::from_u64(q);
    let t = &Real::from_u64(q - 1) / &qr.powi(2 * i as usize);
    Ok((Real::one() + t).log(q))
}

/// `sum_{i=2}^{m+1} log_q(1 + (q-1) q^(-2i))`.
pub fn xing_gain(q: u64, m: u32) -> Result<Real> {
    check_q(q)?;
    if m == 0 {
        return Err(Error::precondition("m must be at least 1"));
    }
    (2..=m + 1).try_fold(Real::zero(), |acc, i| Ok(acc + xing_term(q, i)?))
}

/// Absolute tail bound below which `xing_gain_limit` stops summing.
pub const TAIL_TOLERANCE: &str = "1e-45";

/// Bound on `sum_{i > last} log_q(1 + (q-1) q^(-2i))` using `ln(1+x) <= x`.
pub fn xing_tail_bound(q: u64, last: u32) -> Real {
    let qr = Real::from_u64(q);
    let q2 = qr.powi(2);
    let first = &Real::from_u64(q - 1) / &qr.powi(2 * (last as usize + 1));
    let geometric = &first / &(Real::one() - (Real::one() / q2));
    &geometric / &qr.ln()
}

/// `c_q`, the limit of `xing_gain(q, m)`, with the summation cut once the
/// tail bound drops below [`TAIL_TOLERANCE`].
pub fn xing_gain_limit(q: u64) -> Result<Real> {
    check_q(q)?;
    let tol = Real::parse(TAIL_TOLERANCE);
    let mut sum = Real::zero();
    let mut i = 2;
    loop {
        sum = sum + xing_term(q, i)?;
        if xing_tail_bound(q, i) < tol {
            return Ok(sum);
        }
        i += 1;
    }
}

/// `log_q(1 + q^-3)`.
pub fn new_gain(q: u64) -> Result<Real> {
    check_q(q)?;
    let t = Real::one() / Real::from_u64(q).powi(3);
    Ok((Real::one() + t).log(q))
}

/// Maximizer of `H_q(s) - 2is`: `(q-1)/(q^(2i) + q - 1)`.
pub fn optimal_sigma(q: u64, i: u32) -> BigRational {
    let qb = BigUint::from(q);
    let num = BigUint::from(q - 1);
    let den = qb.pow(2 * i) + &num;
    BigRational::new(num.into(), den.into())
}

/// Maximizer of `log_q(q+1) H_{q+1}(s) - 4s`: `1/(q^3 + 1)`.
pub fn optimal_sigma0(q: u64) -> BigRational {
    let den = BigUint::from(q).pow(3) + 1u32;
    BigRational::new(One::one(), den.into())
}

/// `H_q(s) - 2is`.
pub fn xing_objective(q: u64, i: u32, sigma: &Real) -> Result<Real> {
    Ok(entropy(q, sigma)? - Real::from_u64(2 * i as u64) * sigma.clone())
}

/// `log_q(q+1) H_{q+1}(s) - 4s`.
pub fn combined_objective(q: u64, sigma: &Real) -> Result<Real> {
    let scale = Real::from_u64(q + 1).log(q);
    Ok(scale * entropy(q + 1, sigma)? - Real::from_u64(4) * sigma.clone())
}

/// Golden-section search for the maximizer of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_argmax<F>(f: F, lo: &Real, hi: &Real, iterations: usize) -> Result<Real>
where
    F: Fn(&Real) -> Result<Real>,
{
    let five = Real::from_u64(5);
    // (sqrt(5) - 1) / 2 via exp(ln(5)/2)
    let sqrt5 = (five.ln() / Real::from_u64(2)).exp();
    let ratio = (sqrt5 - Real::one()) / Real::from_u64(2);
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let mut c = &b - &(&ratio * &(&b - &a));
    let mut d = &a + &(&ratio * &(&b - &a));
    let (mut fc, mut fd) = (f(&c)?, f(&d)?);
    for _ in 0..iterations {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = &b - &(&ratio * &(&b - &a));
            fc = f(&c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = &a + &(&ratio * &(&b - &a));
            fd = f(&d)?;
        }
    }
    Ok((a + b) / Real::from_u64(2))
}

/// Locates the sign change of a central-difference slope of `f` on `[lo, hi]`
/// by bisection. Requires the slope to be positive at `lo` and negative at `hi`.
pub fn slope_sign_change<F>(f: F, lo: &Real, hi: &Real, iterations: usize) -> Result<Real>
where
    F: Fn(&Real) -> Result<Real>,
{
    let rel = Real::parse("1e-30");
    let slope = |x: &Real| -> Result<Real> {
        let h = x * &rel;
        Ok((f(&(x + &h))? - f(&(x - &h))?) / (Real::from_u64(2) * h))
    };
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let zero = Real::zero();
    if slope(&a)? <= zero || slope(&b)? >= zero {
        return Err(Error::precondition("slope does not change sign on the bracket"));
    }
    for _ in 0..iterations {
        let mid = (&a + &b) / Real::from_u64(2);
        if slope(&mid)? > zero {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((a + b) / Real::from_u64(2))
}

/// Central-difference slope of `f` at `x` with step `h`.
pub fn finite_difference_slope<F>(f: F, x: &Real, h: &Real) -> Result<Real>
where
    F: Fn(&Real) -> Result<Real>,
{
    Ok((f(&(x + h))? - f(&(x - h))?) / (Real::from_u64(2) * h.clone()))
}

#[derive(Clone, Debug)]
pub struct CrossingReport {
    pub q: u64,
    /// Maximizer of `H_q(d) - d` found by ternary search.
    pub delta: Real,
    pub max_gap: Real,
    /// `1/(sqrt(q) - 1)`
    pub goppa_deficit: Real,
    pub crosses: bool,
}

/// Whether the Goppa line rises above the GV curve somewhere, decided by
/// ternary search for the maximum of `H_q(d) - d` on `(0, (q-1)/q)`.
pub fn gv_crossing(q: u64) -> Result<CrossingReport> {
    let q0 = square_root(q)
        .filter(|&r| r >= 2)
        .ok_or_else(|| Error::precondition(format!("q = {q} is not the square of an integer >= 2")))?;
    let f = |d: &Real| -> Result<Real> { Ok(entropy(q, d)? - d.clone()) };
    let (mut a, mut b) = (Real::zero(), Real::ratio(q as i64 - 1, q));
    let width = Real::parse("1e-12");
    let three = Real::from_u64(3);
    while &b - &a > width {
        let third = (&b - &a) / three.clone();
        let m1 = &a + &third;
        let m2 = &b - &third;
        if f(&m1)? < f(&m2)? {
            a = m1;
        } else {
            b = m2;
        }
    }
    let delta = (a + b) / Real::from_u64(2);
    let max_gap = f(&delta)?;
    let goppa_deficit = Real::ratio(1, q0 - 1);
    let crosses = max_gap > goppa_deficit;
    Ok(CrossingReport {
        q,
        delta,
        max_gap,
        goppa_deficit,
        crosses,
    })
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct BallEntropyReport {
    pub q: u64,
    pub n: u64,
    pub radius: u64,
    /// `N^-1 log_q [C(N, dN) (q-1)^(dN)]`
    pub normalized_log: Real,
    pub entropy: Real,
    pub gap: Real,
    /// `3 log_q(N) / N`
    pub allowance: Real,
    pub within: bool,
}

/// Compares the normalized log of the sphere size `C(N, dN)(q-1)^(dN)` with
/// `H_q(d)`, where `d = num/den` and `dN` must be an integer.
pub fn ball_entropy_limit_check(q: u64, num: u64, den: u64, n: u64) -> Result<BallEntropyReport> {
    check_q(q)?;
    if den == 0 || num > den || n == 0 {
        return Err(Error::precondition("need 0 <= num <= den, den > 0 and N > 0"));
    }
    let (radius, rem) = (num as u128 * n as u128).div_rem(&(den as u128));
    if rem != 0 {
        return Err(Error::precondition(format!(
            "delta N = {num}*{n}/{den} is not an integer"
        )));
    }
    let radius = radius as u64;
    let count = binomial(n, radius) * BigUint::from(q - 1).pow(radius as u32);
    let nr = Real::from_u64(n);
    let normalized_log = &Real::from_biguint(&count).log(q) / &nr;
    let entropy = entropy(q, &Real::ratio(num as i64, den))?;
    let gap = (&normalized_log - &entropy).abs();
    let allowance = &(Real::from_u64(3) * nr.log(q)) / &nr;
    let within = gap <= allowance;
    Ok(BallEntropyReport {
        q,
        n,
        radius,
        normalized_log,
        entropy,
        gap,
        allowance,
        within,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    GilbertVarshamov,
    Goppa,
    Xing(u32),
    XingLimit,
    New,
}

impl Family {
    pub fn column(&self) -> String {
        match self {
            Family::GilbertVarshamov => "R_GV".into(),
            Family::Goppa => "R_Goppa".into(),
            Family::Xing(m) => format!("R_Xing_m{m}"),
            Family::XingLimit => "R_Xing_inf".into(),
            Family::New => "R_new".into(),
        }
    }
}

/// One bound family sampled on a grid; `None` marks a family with no
/// value for this `q` (the AG families when `q` is not a square).
#[derive(Clone, Debug)]
pub struct BoundProfile {
    pub family: Family,
    pub q: u64,
    pub values: Vec<Option<Real>>,
}

#[derive(Clone, Debug)]
pub struct FrontierTable {
    pub q: u64,
    pub m: u32,
    pub deltas: Vec<Real>,
    pub profiles: Vec<BoundProfile>,
    /// `sqrt(q) - 1`, the ceiling on `N/g` for curves over `GF(q)`.
    pub dv_ceiling: Option<u64>,
}

fn clip(x: Real) -> Real {
    x.max(&Real::zero())
}

/// Samples every family at `d = i/(grid+1)`, `i = 1..=grid`. The GV column
/// is `1 - H_q(d)` up to `(q-1)/q` and 0 past it; the linear families are
/// clipped at 0.
pub fn frontier_table(q: u64, grid: usize, m: u32) -> Result<FrontierTable> {
    check_q(q)?;
    if grid == 0 {
        return Err(Error::precondition("grid must be at least 1"));
    }
    if m == 0 {
        return Err(Error::precondition("m must be at least 1"));
    }
    let deltas: Vec<Real> = (1..=grid).map(|i| Real::ratio(i as i64, grid as u64 + 1)).collect();
    let q0 = square_root(q).filter(|&r| r >= 2);
    let intercepts = match q0 {
        Some(_) => {
            let base = goppa_line(q)?;
            Some([
                base.clone(),
                &base + &xing_gain(q, m)?,
                &base + &xing_gain_limit(q)?,
                &base + &new_gain(q)?,
            ])
        }
        None => None,
    };
    let cap = Real::ratio(q as i64 - 1, q);
    let rows: Vec<Vec<Option<Real>>> = deltas
        .par_iter()
        .map(|d| {
            let gv = if *d < cap {
                clip(gv_feasible(q, d)?)
            } else {
                Real::zero()
            };
            let mut row = vec![Some(gv)];
            match &intercepts {
                Some(c) => row.extend(c.iter().map(|c0| Some(clip(c0 - d)))),
                None => row.extend(std::iter::repeat_n(None, 4)),
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let families = [
        Family::GilbertVarshamov,
        Family::Goppa,
        Family::Xing(m),
        Family::XingLimit,
        Family::New,
    ];
    let profiles = families
        .iter()
        .enumerate()
        .map(|(c, &family)| BoundProfile {
            family,
            q,
            values: rows.iter().map(|r| r[c].clone()).collect(),
        })
        .collect();
    Ok(FrontierTable {
        q,
        m,
        deltas,
        profiles,
        dv_ceiling: q0.map(|r| r - 1),
    })
}

impl FrontierTable {
    pub fn header(&self) -> String {
        let mut cols = vec!["delta".to_owned()];
        cols.extend(self.profiles.iter().map(|p| p.family.column()));
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for (i, d) in self.deltas.iter().enumerate() {
            out.push_str(&d.to_sig(CSV_DIGITS));
            for p in &self.profiles {
                out.push(',');
                if let Some(v) = &p.values[i] {
                    out.push_str(&v.to_sig(CSV_DIGITS));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn profile(&self, family: Family) -> Option<&BoundProfile> {
        self.profiles.iter().find(|p| p.family == family)
    }

    /// Rows where the AG columns are out of order: each column must be at
    /// least the one to its left, and strictly above it whenever positive.
    pub fn ordering_violations(&self) -> Vec<usize> {
        let ag = &self.profiles[1..];
        (0..self.deltas.len())
            .filter(|&i| {
                ag.windows(2).any(|w| match (&w[0].values[i], &w[1].values[i]) {
                    (Some(lo), Some(hi)) => hi < lo || (*hi > Real::zero() && hi <= lo),
                    _ => false,
                })
            })
            .collect()
    }
}
