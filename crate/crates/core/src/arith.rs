//! Exact arithmetic over ℚ and the Gaussian rationals ℚ(i).
//!
//! Both types keep a canonical representation at all times, so derived
//! equality is mathematical equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                let f: fn(&$ty, &$ty) -> $ty = $body;
                f(self, rhs)
            }
        }
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<$ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$method(&rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; fails on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn powi(&self, exp: i64) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(Pow::pow(&self.0, exp)))
    }
}

// Integer operands skip the gcd normalisation of BigRational.
forward_binop!(Rational, Add, add, |a, b| {
    if a.0.is_integer() && b.0.is_integer() {
        Rational(BigRational::from_integer(a.0.numer() + b.0.numer()))
    } else {
        Rational(&a.0 + &b.0)
    }
});
forward_binop!(Rational, Sub, sub, |a, b| {
    if a.0.is_integer() && b.0.is_integer() {
        Rational(BigRational::from_integer(a.0.numer() - b.0.numer()))
    } else {
        Rational(&a.0 - &b.0)
    }
});
forward_binop!(Rational, Mul, mul, |a, b| {
    if a.0.is_integer() && b.0.is_integer() {
        Rational(BigRational::from_integer(a.0.numer() * b.0.numer()))
    } else {
        Rational(&a.0 * &b.0)
    }
});

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        if num.is_empty() || den.is_empty() {
            return Err(bad());
        }
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        Rational::from_big(num, den)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The unique rational `r` with `r^k = q`, for odd `k`.
///
/// Returns `None` when no rational root exists, or when `k` is even or zero.
pub fn rational_odd_root(q: &Rational, k: u32) -> Option<Rational> {
    if k.is_multiple_of(2) {
        return None;
    }
    let root_of = |n: &BigInt| {
        let r = n.nth_root(k);
        (Pow::pow(&r, k) == *n).then_some(r)
    };
    let num = root_of(q.numer())?;
    let den = root_of(q.denom())?;
    let r = Rational::from_big(num, den).ok()?;
    debug_assert_eq!(r.powi(k as i64).ok().as_ref(), Some(q));
    Some(r)
}

/// An element `re + im·i` of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational::new(re, Rational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::real(Rational::from_integer(n))
    }

    /// `(re_num/re_den) + (im_num/im_den)·i`; panics on a zero denominator,
    /// intended for literals.
    pub fn from_ratios(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussianRational::new(
            Rational::new(re.0, re.1).expect("literal denominator"),
            Rational::new(im.0, im.1).expect("literal denominator"),
        )
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

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    /// `z·z̄`
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm().inverse()?;
        Ok(GaussianRational::new(&self.re * &n, -(&self.im * &n)))
    }

    pub fn checked_div(&self, rhs: &GaussianRational) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational::new(&self.re * r, &self.im * r)
    }

    /// The real part when the imaginary part vanishes.
    pub fn as_real(&self) -> Option<&Rational> {
        self.is_real().then_some(&self.re)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = GaussianRational::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

// Real operands are the common case; skipping the zero imaginary parts
// avoids needless bignum normalisation.
forward_binop!(GaussianRational, Add, add, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        GaussianRational::real(&a.re + &b.re)
    } else {
        GaussianRational::new(&a.re + &b.re, &a.im + &b.im)
    }
});
forward_binop!(GaussianRational, Sub, sub, |a, b| GaussianRational::new(
    &a.re - &b.re,
    &a.im - &b.im
));
forward_binop!(GaussianRational, Mul, mul, |a, b| {
    match (a.im.is_zero(), b.im.is_zero()) {
        (true, true) => GaussianRational::real(&a.re * &b.re),
        (true, false) => GaussianRational::new(&a.re * &b.re, &a.re * &b.im),
        (false, true) => GaussianRational::new(&a.re * &b.re, &a.im * &b.re),
        (false, false) => GaussianRational::new(
            &a.re * &b.re - &a.im * &b.im,
            &a.re * &b.im + &a.im * &b.re,
        ),
    }
});

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_integer(n)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &Rational| {
            if im.is_one() {
                String::from("i")
            } else if (-im).is_one() {
                String::from("-i")
            } else {
                format!("{im}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => f.write_str(&im_part(&self.im)),
            (false, false) => {
                let im = im_part(&self.im);
                if im.starts_with('-') {
                    write!(f, "{}{}", self.re, im)
                } else {
                    write!(f, "{}+{}", self.re, im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, with `a`, `b` rationals
/// such as `-3/4`.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty coefficient".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(GaussianRational::real(s.parse()?));
        };
        // split before the last sign that is not the leading character
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-') && !body[..i].ends_with('/'))
            .map(|(i, _)| i)
            .next_back();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let im = match im {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => other.trim_start_matches('+').parse()?,
        };
        let re = if re.is_empty() {
            Rational::zero()
        } else {
            re.parse()?
        };
        Ok(GaussianRational::new(re, im))
    }
}

#[derive(Serialize, Deserialize)]
struct GaussianRepr {
    re: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Rational>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GaussianInput {
    Object(GaussianRepr),
    Text(String),
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GaussianRepr {
            re: self.re.clone(),
            im: (!self.im.is_zero()).then(|| self.im.clone()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match GaussianInput::deserialize(deserializer)? {
            GaussianInput::Object(r) => Ok(GaussianRational::new(r.re, r.im.unwrap_or_default())),
            GaussianInput::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
