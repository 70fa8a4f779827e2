//! Exact rational numbers.
//!
//! `Rat` keeps small values in a pair of `i128`s and falls back to
//! [`BigRational`] when an intermediate result overflows. Values are always
//! stored in lowest terms with a positive denominator, and a value that fits
//! the small representation is never stored as a big one, so structural
//! equality and hashing coincide with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `den > 0`, neither field equal to `i128::MIN`.
    Small(i128, i128),
    Big(Box<BigRational>),
}

/// An exact rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

#[inline]
fn small_ok(v: i128) -> bool {
    v != i128::MIN
}

impl Rat {
    /// Builds `n/d` from unreduced `i128` parts; falls back to big arithmetic
    /// only for the `i128::MIN` corner.
    fn from_parts(n: i128, d: i128) -> Rat {
        debug_assert!(d != 0);
        if !small_ok(n) || !small_ok(d) {
            return Rat::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)));
        }
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        if d != 1 {
            let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
            if g > 1 {
                n /= g;
                d /= g;
            }
        }
        Rat(Repr::Small(n, d))
    }

    fn from_big(r: BigRational) -> Rat {
        // BigRational::new already reduces; demote when both parts fit.
        if let (Some(n), Some(d)) = (r.numer().to_i128(), r.denom().to_i128()) {
            if small_ok(n) && small_ok(d) {
                return Rat(Repr::Small(n, d));
            }
        }
        Rat(Repr::Big(Box::new(r)))
    }

    /// The value as an `i128` when it is an integer that fits.
    pub fn as_i128(&self) -> Option<i128> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    /// Exact conversion to a [`BigRational`].
    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "zero denominator");
        Rat::from_parts(numer as i128, denom as i128)
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Rat {
        assert!(!denom.is_zero(), "zero denominator");
        Rat::from_big(BigRational::new(numer, denom))
    }

    pub fn integer(v: i64) -> Rat {
        Rat(Repr::Small(v as i128, 1))
    }

    pub fn zero() -> Rat {
        Rat(Repr::Small(0, 1))
    }

    pub fn one() -> Rat {
        Rat(Repr::Small(1, 1))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => match b.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn recip(&self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                Rat::from_parts(*d, *n)
            }
            Repr::Big(b) => Rat::from_big(b.recip()),
        }
    }

    pub fn square(&self) -> Rat {
        self * self
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// The simplest rational within `tol` of `x` (continued-fraction
    /// convergents). Returns `None` for non-finite input.
    pub fn approximate(x: f64, tol: f64) -> Option<Rat> {
        if !x.is_finite() || !(tol >= 0.0) {
            return None;
        }
        let negative = x < 0.0;
        let target = x.abs();
        let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
        let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
        let mut rem = target;
        for _ in 0..64 {
            let a = rem.floor();
            let ai = BigInt::from(a as u128);
            let h2 = &ai * &h1 + &h0;
            let k2 = &ai * &k1 + &k0;
            h0 = std::mem::replace(&mut h1, h2);
            k0 = std::mem::replace(&mut k1, k2);
            let approx = Rat::from_bigints(h1.clone(), k1.clone());
            if (approx.to_f64() - target).abs() <= tol {
                return Some(if negative { -approx } else { approx });
            }
            let frac = rem - a;
            if frac <= f64::EPSILON {
                return Some(if negative { -approx } else { approx });
            }
            rem = 1.0 / frac;
        }
        None
    }

    fn cmp_slow(&self, other: &Rat) -> Ordering {
        self.to_big().cmp(&other.to_big())
    }

    /// Smallest positive integer multiplier that clears the denominator.
    pub fn denom_lcm(values: &[Rat]) -> BigInt {
        values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()))
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::integer(v)
    }
}

impl From<i32> for Rat {
    fn from(v: i32) -> Self {
        Rat::integer(v as i64)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Self {
        Rat::from_big(BigRational::from_integer(v))
    }
}

impl From<BigRational> for Rat {
    fn from(v: BigRational) -> Self {
        Rat::from_big(v)
    }
}

fn add_small(n1: i128, d1: i128, n2: i128, d2: i128) -> Option<Rat> {
    if d1 == 1 && d2 == 1 {
        let n = n1.checked_add(n2)?;
        return small_ok(n).then_some(Rat(Repr::Small(n, 1)));
    }
    if d1 == d2 {
        let n = n1.checked_add(n2)?;
        return Some(Rat::from_parts(n, d1));
    }
    let g = gcd_u128(d1 as u128, d2 as u128) as i128;
    let (s1, s2) = (d2 / g, d1 / g);
    let n = n1.checked_mul(s1)?.checked_add(n2.checked_mul(s2)?)?;
    let d = d1.checked_mul(s1)?;
    Some(Rat::from_parts(n, d))
}

fn mul_small(n1: i128, d1: i128, n2: i128, d2: i128) -> Option<Rat> {
    if d1 == 1 && d2 == 1 {
        let n = n1.checked_mul(n2)?;
        return small_ok(n).then_some(Rat(Repr::Small(n, 1)));
    }
    let g1 = gcd_u128(n1.unsigned_abs(), d2 as u128).max(1) as i128;
    let g2 = gcd_u128(n2.unsigned_abs(), d1 as u128).max(1) as i128;
    let n = (n1 / g1).checked_mul(n2 / g2)?;
    let d = (d1 / g2).checked_mul(d2 / g1)?;
    if !small_ok(n) || !small_ok(d) {
        return None;
    }
    Some(Rat(Repr::Small(n, d)))
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &'a Rat) -> Rat {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &rhs.0) {
            if let Some(r) = add_small(*n1, *d1, *n2, *d2) {
                return r;
            }
        }
        Rat::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &'a Rat) -> Rat {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &rhs.0) {
            if let Some(r) = mul_small(*n1, *d1, *n2, *d2) {
                return r;
            }
        }
        Rat::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => Rat(Repr::Small(-n, *d)),
            Repr::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, rhs: &'a Rat) -> Rat {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &rhs.0) {
            if let Some(r) = add_small(*n1, *d1, -*n2, *d2) {
                return r;
            }
        }
        Rat::from_big(self.to_big() - rhs.to_big())
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        self * &rhs.recip()
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident, $assign_imp:ident, $assign_method:ident) => {
        impl $imp<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                self.$method(&rhs)
            }
        }
        impl $assign_imp<Rat> for Rat {
            fn $assign_method(&mut self, rhs: Rat) {
                *self = (&*self).$method(&rhs);
            }
        }
        impl<'a> $assign_imp<&'a Rat> for Rat {
            fn $assign_method(&mut self, rhs: &'a Rat) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &other.0) {
            if d1 == d2 {
                return n1.cmp(n2);
            }
            if let (Some(a), Some(b)) = (n1.checked_mul(*d2), n2.checked_mul(*d1)) {
                return a.cmp(&b);
            }
        }
        self.cmp_slow(other)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `"n"` and `"n/d"` with optional sign; rejects decimals.
    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRatError::Empty);
        }
        let parse_int = |t: &str| -> Result<BigInt, ParseRatError> {
            let t = t.trim();
            let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParseRatError::Invalid(s.to_string()));
            }
            t.trim_start_matches('+')
                .parse::<BigInt>()
                .map_err(|_| ParseRatError::Invalid(s.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Rat::from(parse_int(s)?)),
            Some((n, d)) => {
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(ParseRatError::ZeroDenominator(s.to_string()));
                }
                Ok(Rat::from_bigints(n, d))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Int(i64),
            Str(String),
        }
        match Lit::deserialize(deserializer)? {
            Lit::Int(v) => Ok(Rat::integer(v)),
            Lit::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn lowest_terms_and_sign() {
        assert_eq!(r(2, 4), r(1, 2));
        assert_eq!(r(3, -6), r(-1, 2));
        assert_eq!(r(3, -6).denom(), BigInt::from(2));
        assert_eq!(r(0, -5), Rat::zero());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("6/4".parse::<Rat>().unwrap(), r(3, 2));
        assert_eq!("-7".parse::<Rat>().unwrap(), r(-7, 1));
        assert_eq!(r(-3, 2).to_string(), "-3/2");
        assert_eq!(r(4, 2).to_string(), "2");
        assert!("1.5".parse::<Rat>().is_err());
        assert!("1/0".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rat::from_parts(i128::MAX / 3, 1);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
    }

    #[test]
    fn approximate_recovers_simple_fractions() {
        assert_eq!(Rat::approximate(0.75, 1e-12).unwrap(), r(3, 4));
        assert_eq!(Rat::approximate(-2.5, 1e-12).unwrap(), r(-5, 2));
        assert_eq!(Rat::approximate(0.3333333333, 1e-6).unwrap(), r(1, 3));
        assert!(Rat::approximate(f64::NAN, 1e-6).is_none());
    }

    fn big_of(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    proptest! {
        #[test]
        fn field_ops_match_bigrational(
            a in any::<i64>(), b in 1i64..i64::MAX,
            c in any::<i64>(), d in 1i64..i64::MAX,
        ) {
            let (x, y) = (r(a, b), r(c, d));
            let (bx, by) = (big_of(a, b), big_of(c, d));
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            if c != 0 {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
            let prod = &(&x * &y) * &(&x * &y);
            prop_assert_eq!(prod.to_big(), (&bx * &by) * (&bx * &by));
        }
    }
}
