//! Exact rationals and rationals extended by +∞.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// Exact rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` form, or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde helper writing a rational as a `"p/q"` string.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

impl serde::Serialize for ExtRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Decimal form when it terminates (denominator of the form 2^a 5^b),
/// `p/q` otherwise.
pub fn fmt_rational_decimal(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return fmt_rational(r);
    }
    let digits = twos.max(fives);
    let scaled = r * Rational::from_integer(BigInt::from(10).pow(digits));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (ip, fp) = s.split_at(s.len() - digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

/// Parse `p`, `p/q` or a finite decimal such as `4.5`, with optional sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::parse(0, format!("not a rational number: `{t}`"));
    if t.is_empty() {
        return Err(bad());
    }
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let value = if let Some((p, q)) = body.split_once('/') {
        if !digits(p) || !digits(q) {
            return Err(bad());
        }
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Rational::new(p.parse().map_err(|_| bad())?, q)
    } else if let Some((ip, fp)) = body.split_once('.') {
        if !(digits(ip) || ip.is_empty()) || !digits(fp) || (ip.is_empty() && fp.is_empty()) {
            return Err(bad());
        }
        let whole = format!("{}{}", ip, fp);
        let n: BigInt = whole.parse().map_err(|_| bad())?;
        Rational::new(n, BigInt::from(10).pow(fp.len() as u32))
    } else {
        if !digits(body) {
            return Err(bad());
        }
        Rational::from_integer(body.parse().map_err(|_| bad())?)
    };
    Ok(if neg { -value } else { value })
}

/// gcd of positive rationals: gcd of numerators over lcm of denominators.
pub fn gcd_rationals<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    let mut acc: Option<(BigInt, BigInt)> = None;
    for v in values {
        if v.is_zero() {
            continue;
        }
        let (n, d) = (v.numer().abs(), v.denom().clone());
        acc = Some(match acc {
            None => (n, d),
            Some((an, ad)) => (an.gcd(&n), ad.lcm(&d)),
        });
    }
    acc.map(|(n, d)| Rational::new(n, d))
}

pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// A rational or +∞. Finite values may be negative: orders of polyvector
/// fields go below zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn int(n: i64) -> Self {
        ExtRational::Finite(int(n))
    }

    pub fn rat(n: i64, d: i64) -> Self {
        ExtRational::Finite(rat(n, d))
    }

    pub fn zero() -> Self {
        ExtRational::Finite(Rational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinity => None,
        }
    }

    /// `1/a` with `1/∞ = 0`. Panics on zero.
    pub fn reciprocal_weight(&self) -> Rational {
        match self {
            ExtRational::Finite(r) => {
                assert!(!r.is_zero(), "reciprocal of zero");
                r.recip()
            }
            ExtRational::Infinity => Rational::zero(),
        }
    }

    /// Inverse of [`reciprocal_weight`](Self::reciprocal_weight): `1/0 = ∞`.
    pub fn from_weight(w: &Rational) -> Self {
        if w.is_zero() {
            ExtRational::Infinity
        } else {
            ExtRational::Finite(w.recip())
        }
    }

    pub fn add(&self, other: &ExtRational) -> ExtRational {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }

    pub fn add_rat(&self, r: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a + r),
            ExtRational::Infinity => ExtRational::Infinity,
        }
    }

    /// Multiplication by a positive rational.
    pub fn scale(&self, r: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a * r),
            ExtRational::Infinity => ExtRational::Infinity,
        }
    }

    pub fn ge_rat(&self, r: &Rational) -> bool {
        match self {
            ExtRational::Finite(a) => a >= r,
            ExtRational::Infinity => true,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            Ok(ExtRational::Infinity)
        } else {
            parse_rational(t).map(ExtRational::Finite)
        }
    }

    /// Decimal-friendly rendering used for invariants.
    pub fn to_decimal_string(&self) -> String {
        match self {
            ExtRational::Finite(r) => fmt_rational_decimal(r),
            ExtRational::Infinity => "inf".to_string(),
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Infinity, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{}", fmt_rational(r)),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("9/2").unwrap(), rat(9, 2));
        assert_eq!(parse_rational("4.5").unwrap(), rat(9, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&rat(7, 3)), "7/3");
        assert_eq!(fmt_rational_decimal(&rat(9, 2)), "4.5");
        assert_eq!(fmt_rational_decimal(&rat(-1, 8)), "-0.125");
        assert_eq!(fmt_rational_decimal(&rat(1, 3)), "1/3");
        assert_eq!(fmt_rational_decimal(&rat(1, 20)), "0.05");
    }

    #[test]
    fn ext_order_and_arith() {
        let inf = ExtRational::Infinity;
        assert!(ExtRational::int(1000) < inf);
        assert!(ExtRational::rat(-1, 6) < ExtRational::zero());
        assert_eq!(inf.add(&ExtRational::int(-3)), inf);
        assert_eq!(inf.reciprocal_weight(), Rational::zero());
        assert_eq!(ExtRational::from_weight(&Rational::zero()), inf);
        assert_eq!(ExtRational::parse("inf").unwrap(), inf);
        assert_eq!(ExtRational::parse("3").unwrap().to_string(), "3");
    }

    #[test]
    fn rational_gcd() {
        let g = gcd_rationals([rat(1, 2), rat(1, 3)].iter()).unwrap();
        assert_eq!(g, rat(1, 6));
        let g = gcd_rationals([rat(3, 4), rat(9, 8)].iter()).unwrap();
        assert_eq!(g, rat(3, 8));
        assert!(gcd_rationals([Rational::zero()].iter()).is_none());
    }
}
