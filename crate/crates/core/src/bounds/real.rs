//! A thin value type over `astro_float::BigFloat` at a fixed 320-bit
//! precision (about 96 significant decimal digits).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

pub const PRECISION: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn from_u64(n: u64) -> Real {
        Real(BigFloat::from_u64(n, PRECISION))
    }

    pub fn from_i64(n: i64) -> Real {
        Real(BigFloat::from_i64(n, PRECISION))
    }

    pub fn zero() -> Real {
        Real::from_u64(0)
    }

    pub fn one() -> Real {
        Real::from_u64(1)
    }

    pub fn ratio(num: i64, den: u64) -> Real {
        &Real::from_i64(num) / &Real::from_u64(den)
    }

    /// Parses a decimal literal such as `1e-30` or `0.25`.
    pub fn parse(s: &str) -> Real {
        with_consts(|cc| Real(BigFloat::parse(s, Radix::Dec, PRECISION, RM, cc)))
    }

    pub fn from_biguint(n: &BigUint) -> Real {
        Real::parse(&n.to_string())
    }

    pub fn from_bigint(n: &BigInt) -> Real {
        Real::parse(&n.to_string())
    }

    pub fn from_rational(r: &BigRational) -> Real {
        &Real::from_bigint(r.numer()) / &Real::from_bigint(r.denom())
    }

    pub fn ln(&self) -> Real {
        with_consts(|cc| Real(self.0.ln(PRECISION, RM, cc)))
    }

    pub fn exp(&self) -> Real {
        with_consts(|cc| Real(self.0.exp(PRECISION, RM, cc)))
    }

    /// Logarithm to an integer base.
    pub fn log(&self, base: u64) -> Real {
        &self.ln() / &Real::from_u64(base).ln()
    }

    pub fn powi(&self, n: usize) -> Real {
        Real(self.0.powi(n, PRECISION, RM))
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn max(&self, other: &Real) -> Real {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn min(&self, other: &Real) -> Real {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Full-precision decimal form `d.ddd...e±x`.
    pub fn to_decimal(&self) -> String {
        with_consts(|cc| self.0.format(Radix::Dec, RM, cc).expect("finite value"))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal().parse().unwrap_or(f64::NAN)
    }

    /// `digits` significant digits in the style of C's `%.{digits}g`:
    /// plain notation for exponents in `[-5, digits)`, trailing zeros removed.
    pub fn to_sig(&self, digits: usize) -> String {
        format_sig(&self.to_decimal(), digits)
    }
}

fn format_sig(decimal: &str, digits: usize) -> String {
    let (negative, body) = match decimal.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, decimal),
    };
    let (mantissa, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().expect("decimal exponent")),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let mut ds: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    // decimal exponent of the first digit
    let mut e10 = exp + int_part.len() as i64 - 1;
    let lead = ds.iter().position(|&d| d != 0);
    let Some(lead) = lead else {
        return "0".into();
    };
    ds.drain(..lead);
    e10 -= lead as i64;
    // round half up on the decimal expansion
    if ds.len() > digits {
        let up = ds[digits] >= 5;
        ds.truncate(digits);
        if up {
            let mut k = digits;
            loop {
                if k == 0 {
                    ds.insert(0, 1);
                    ds.truncate(digits);
                    e10 += 1;
                    break;
                }
                k -= 1;
                if ds[k] == 9 {
                    ds[k] = 0;
                } else {
                    ds[k] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && *ds.last().unwrap() == 0 {
        ds.pop();
    }
    let digits_str: String = ds.iter().map(|d| (d + b'0') as char).collect();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e10 < -5 || e10 >= digits as i64 {
        out.push_str(&digits_str[..1]);
        if digits_str.len() > 1 {
            out.push('.');
            out.push_str(&digits_str[1..]);
        }
        out.push_str(&format!("e{}{:02}", if e10 < 0 { '-' } else { '+' }, e10.abs()));
    } else if e10 < 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e10 - 1) as usize));
        out.push_str(&digits_str);
    } else {
        let int_len = e10 as usize + 1;
        if digits_str.len() <= int_len {
            out.push_str(&digits_str);
            out.push_str(&"0".repeat(int_len - digits_str.len()));
        } else {
            out.push_str(&digits_str[..int_len]);
            out.push('.');
            out.push_str(&digits_str[int_len..]);
        }
    }
    out
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real(self.0.$method(&rhs.0, PRECISION, RM))
            }
        }
        impl $trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                Real(self.0.$method(&rhs.0, PRECISION, RM))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.clone().neg())
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.neg())
    }
}
