//! Sparse Laurent polynomials in the invariant `T = ab` over ℚ(i).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{forward_binop, GaussianRational, Rational};
use crate::error::{Error, Result};

/// Element of `ℚ(i)[T, T⁻¹]`. No zero coefficient is ever stored, so the
/// zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// The variable `T`.
    pub fn t() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: GaussianRational, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// Ascending coefficients: `coeffs[j]` multiplies `T^j`.
    pub fn from_coeffs<I, C>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<GaussianRational>,
    {
        Self::from_coeffs_at(0, coeffs)
    }

    /// Ascending coefficients starting at exponent `valuation`.
    pub fn from_coeffs_at<I, C>(valuation: i64, coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<GaussianRational>,
    {
        let mut p = Self::zero();
        for (j, c) in coeffs.into_iter().enumerate() {
            p.add_term(valuation + j as i64, c.into());
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, GaussianRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// Number of nonzero terms; emptiness is `is_zero`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    pub fn coeff(&self, exp: i64) -> GaussianRational {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn valuation(&self) -> Result<i64> {
        self.terms.keys().next().copied().ok_or(Error::ZeroPolynomial)
    }

    pub fn degree(&self) -> Result<i64> {
        self.terms.keys().next_back().copied().ok_or(Error::ZeroPolynomial)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    /// No negative exponents (the zero polynomial qualifies).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().next().is_none_or(|&e| e >= 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    /// `Some((c, k))` when the polynomial is the single term `c·T^k`.
    pub fn as_monomial(&self) -> Option<(&GaussianRational, i64)> {
        match self.terms.len() {
            1 => self.terms.iter().next().map(|(&e, c)| (c, e)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&GaussianRational::real(r.clone()))
    }

    /// Multiplication by `T^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `Σ_{j=0}^{count-1} self^j`.
    pub fn geometric_sum(&self, count: u32) -> Self {
        let mut acc = Self::zero();
        let mut power = Self::one();
        for _ in 0..count {
            acc = &acc + &power;
            power = &power * self;
        }
        acc
    }

    /// Coefficientwise conjugation; `T` is fixed.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, c.conj())).collect(),
        }
    }

    /// Drops every term of exponent `≥ m`, i.e. reduction modulo `T^m`.
    pub fn truncate_mod(&self, m: u32) -> Result<Self> {
        if let Some(v) = self.terms.keys().next().filter(|&&v| v < 0) {
            return Err(Error::NegativeExponent(*v));
        }
        Ok(LaurentPoly {
            terms: self
                .terms
                .range(..i64::from(m))
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        })
    }

    /// `p(λ·T)`: coefficient of `T^j` is multiplied by `λ^j` (negative `j`
    /// allowed).
    pub fn rescale_argument(&self, lambda: &Rational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroScale);
        }
        let mut terms = BTreeMap::new();
        for (&e, c) in &self.terms {
            terms.insert(e, c.scale(&lambda.powi(e)?));
        }
        Ok(LaurentPoly { terms })
    }

    /// `r·h(r²T)`, computed coefficientwise as `c_j ↦ r^{2j+1}·c_j`.
    pub fn apply_scaling(&self, r: &Rational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::ZeroScale);
        }
        let mut terms = BTreeMap::new();
        for (&e, c) in &self.terms {
            terms.insert(e, c.scale(&r.powi(2 * e + 1)?));
        }
        Ok(LaurentPoly { terms })
    }

    /// Exact division by the unit `c·T^k`.
    pub fn div_monomial(&self, c: &GaussianRational, k: i64) -> Result<Self> {
        Ok(self.scale(&c.inverse()?).shift(-k))
    }

    /// Fails with [`Error::NotReal`] unless every coefficient is real.
    pub fn require_real(&self) -> Result<()> {
        match self.terms.values().find(|c| !c.is_real()) {
            Some(c) => Err(Error::NotReal(c.to_string())),
            None => Ok(()),
        }
    }
}

forward_binop!(LaurentPoly, Add, add, |a, b| {
    let mut out = a.clone();
    for (&e, c) in &b.terms {
        out.add_term(e, c.clone());
    }
    out
});

forward_binop!(LaurentPoly, Sub, sub, |a, b| {
    let mut out = a.clone();
    for (&e, c) in &b.terms {
        out.add_term(e, -c);
    }
    out
});

forward_binop!(LaurentPoly, Mul, mul, |a, b| {
    let mut out = LaurentPoly::zero();
    for (&ea, ca) in &a.terms {
        for (&eb, cb) in &b.terms {
            out.add_term(ea + eb, ca * cb);
        }
    }
    out
});

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl From<GaussianRational> for LaurentPoly {
    fn from(c: GaussianRational) -> Self {
        LaurentPoly::constant(c)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let coeff = if c.is_real() {
                c.to_string()
            } else {
                format!("({c})")
            };
            let (sign, body) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            if i == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let var = match e {
                0 => String::new(),
                1 => "T".into(),
                _ => format!("T^{e}"),
            };
            match (body.as_str(), var.is_empty()) {
                (_, true) => f.write_str(&body)?,
                ("1", false) => f.write_str(&var)?,
                (_, false) => write!(f, "{body}*{var}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    valuation: i64,
    coeffs: Vec<GaussianRational>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LaurentInput {
    Dense(Vec<GaussianRational>),
    Shifted(LaurentRepr),
}

fn dense_from(p: &LaurentPoly, start: i64) -> Vec<GaussianRational> {
    match p.degree() {
        Ok(deg) => (start..=deg).map(|e| p.coeff(e)).collect(),
        Err(_) => Vec::new(),
    }
}

/// Polynomials serialize as an ascending array indexed by exponent;
/// anything with a negative exponent as `{"valuation": v, "coeffs": [...]}`.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_polynomial() {
            dense_from(self, 0).serialize(serializer)
        } else {
            let valuation = self.valuation().expect("nonzero Laurent polynomial");
            LaurentRepr {
                valuation,
                coeffs: dense_from(self, valuation),
            }
            .serialize(serializer)
        }
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(match LaurentInput::deserialize(deserializer)? {
            LaurentInput::Dense(c) => LaurentPoly::from_coeffs(c),
            LaurentInput::Shifted(r) => LaurentPoly::from_coeffs_at(r.valuation, r.coeffs),
        })
    }
}

/// Parses an ascending comma-separated coefficient list such as `"2,8"`
/// (meaning `2 + 8T`) or `"1,i"`.
pub fn parse_coefficient_list(s: &str) -> Result<LaurentPoly> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty coefficient list".into()));
    }
    let coeffs = s
        .split(',')
        .map(str::parse::<GaussianRational>)
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentPoly::from_coeffs(coeffs))
}
