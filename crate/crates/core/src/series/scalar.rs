//! Exact Gaussian rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `re + im·i` of Q(i). Both parts are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a nonnegative rational, if it is a rational square.
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

/// Exact k-th root of a rational (odd k allows negatives).
fn rational_nth_root(q: &BigRational, k: u32) -> Option<BigRational> {
    if q.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return rational_nth_root(&-q, k).map(|r| -r);
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.nth_root(k);
    let rd = d.nth_root(k);
    (num_traits::pow(rn.clone(), k as usize) == *n && num_traits::pow(rd.clone(), k as usize) == *d)
        .then(|| BigRational::new(rn, rd))
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    /// Total bit length of the four integers stored.
    pub fn bit_size(&self) -> u64 {
        [self.re.numer(), self.re.denom(), self.im.numer(), self.im.denom()].iter().map(|n| n.bits()).sum()
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(n.into()), im: BigRational::zero() }
    }

    /// `n/d` as a real scalar. Panics on `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        Scalar { re: rat(n, d), im: BigRational::zero() }
    }

    /// `(a/b) + (c/d)·i`.
    pub fn gauss(a: i64, b: i64, c: i64, d: i64) -> Self {
        Scalar { re: rat(a, b), im: rat(c, d) }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_real() && self.re.is_integer()
    }

    pub fn is_nonneg_integer(&self) -> bool {
        self.is_integer() && !self.re.is_negative()
    }

    /// The integer value, when this is a real integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |w|² = re² + im².
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("division by zero scalar".into()));
        }
        if self.im.is_zero() {
            return Ok(Scalar::from_rational(self.re.recip()));
        }
        let n = self.norm_sqr();
        Ok(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Lexicographic order on (re, im); used for canonical root and sign choices.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// True when (re, im) is lexicographically greater than zero.
    pub fn is_lex_positive(&self) -> bool {
        self.lex_cmp(&Scalar::zero()) == Ordering::Greater
    }

    /// Exact square root in Q(i), if one exists. Returns the lexicographically positive root.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(2.into());
        let x2 = (&modulus + &self.re) / &two;
        let root = if x2.is_zero() {
            let y = rational_sqrt(&((&modulus - &self.re) / &two))?;
            Scalar { re: BigRational::zero(), im: y }
        } else {
            let x = rational_sqrt(&x2)?;
            let y = &self.im / (&two * &x);
            Scalar { re: x, im: y }
        };
        debug_assert_eq!(&root * &root, *self);
        Some(if root.is_lex_positive() { root } else { -root })
    }

    /// Exact k-th root for k ≥ 1. Handles real rationals for any k and all of Q(i) for k a
    /// power of two. Picks the lexicographically positive root when several exist in Q(i).
    pub fn nth_root(&self, k: u32) -> Option<Self> {
        match k {
            0 => None,
            1 => Some(self.clone()),
            _ if self.is_zero() => Some(Scalar::zero()),
            _ if k.is_multiple_of(2) => self.sqrt()?.nth_root(k / 2).or_else(|| (-self.sqrt()?).nth_root(k / 2)),
            _ if self.is_real() => rational_nth_root(&self.re, k).map(Scalar::from_rational),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_text = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", im)
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}", im_text(&self.im)),
            (false, false) => {
                let t = im_text(&self.im);
                if t.starts_with('-') {
                    write!(f, "{}{}", self.re, t)
                } else {
                    write!(f, "{}+{}", self.re, t)
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str, signed: bool| {
        let digits = if signed { t.strip_prefix(['+', '-']).unwrap_or(t) } else { t };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(n, true) || !valid(d, false) {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// The imaginary part of a term ending in `i`: "i", "-i", "3*i", "-1/2*i".
fn parse_imag(term: &str) -> Option<BigRational> {
    let body = term.trim().strip_suffix('i')?.trim_end();
    let body = body.strip_suffix('*').map(str::trim_end).unwrap_or(body);
    match body {
        "" | "+" => Some(BigRational::one()),
        "-" => Some(-BigRational::one()),
        _ => parse_rational(body),
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts "p/q", "r/s*i", "p/q+r/s*i", "i", "-i" and the like; whitespace is ignored.
    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::parse("scalar", format!("invalid scalar {:?}", text));
        if s.is_empty() {
            return Err(bad());
        }
        if !s.ends_with('i') {
            return parse_rational(&s).map(Scalar::from_rational).ok_or_else(bad);
        }
        // Split at the last sign that is not leading and not part of an exponent-free rational.
        let split = s
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .next_back();
        match split {
            Some(k) => {
                let re = parse_rational(&s[..k]).ok_or_else(bad)?;
                let im = parse_imag(&s[k..]).ok_or_else(bad)?;
                Ok(Scalar { re, im })
            }
            None => Ok(Scalar { re: BigRational::zero(), im: parse_imag(&s).ok_or_else(bad)? }),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::from_rational(&self.re * &o.re);
        }
        Scalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::inv`] for a checked variant.
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(it: I) -> Scalar {
        it.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for t in ["0", "3", "-1/2", "i", "-i", "2*i", "1/2+3/4*i", "1-i", "-5/3-7/2*i"] {
            assert_eq!(s(t).to_string(), t);
        }
        assert_eq!(s(" 2/4 + 1 * i "), Scalar::gauss(1, 2, 1, 1));
        assert_eq!(s("+i"), Scalar::i());
    }

    #[test]
    fn parse_rejects_garbage() {
        for t in ["", "1/0", "abc", "1+", "i*i", "1//2", "--1", "2**i", "1e5"] {
            assert!(t.parse::<Scalar>().is_err(), "{t:?} accepted");
        }
    }

    #[test]
    fn field_operations() {
        let a = Scalar::gauss(1, 2, 1, 3);
        let b = Scalar::gauss(-2, 1, 3, 4);
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::int(-1));
        assert!(Scalar::zero().inv().is_err());
        assert_eq!(Scalar::int(2).pow(-3).unwrap(), Scalar::frac(1, 8));
    }

    #[test]
    fn integer_tests() {
        assert!(Scalar::int(-3).is_integer());
        assert!(!Scalar::int(-3).is_nonneg_integer());
        assert!(!Scalar::frac(1, 2).is_integer());
        assert!(!Scalar::gauss(1, 1, 1, 1).is_integer());
        assert_eq!(Scalar::int(7).to_i64(), Some(7));
    }

    #[test]
    fn square_roots() {
        assert_eq!(Scalar::frac(9, 4).sqrt(), Some(Scalar::frac(3, 2)));
        assert_eq!(Scalar::int(-4).sqrt(), Some(Scalar::gauss(0, 1, 2, 1)));
        // (1+i)^2 = 2i; (2-i)^2 = 3-4i
        assert_eq!(Scalar::gauss(0, 1, 2, 1).sqrt(), Some(Scalar::gauss(1, 1, 1, 1)));
        assert_eq!(Scalar::gauss(3, 1, -4, 1).sqrt(), Some(Scalar::gauss(2, 1, -1, 1)));
        assert_eq!(Scalar::int(2).sqrt(), None);
        assert_eq!(Scalar::i().sqrt(), None);
    }

    #[test]
    fn higher_roots() {
        assert_eq!(Scalar::frac(-8, 27).nth_root(3), Some(Scalar::frac(-2, 3)));
        assert_eq!(Scalar::int(16).nth_root(4), Some(Scalar::int(2)));
        assert_eq!(Scalar::int(-4).nth_root(4), Some(Scalar::gauss(1, 1, 1, 1)));
        assert_eq!(Scalar::int(2).nth_root(3), None);
    }
}
