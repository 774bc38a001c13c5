//! Four-variable polynomial maps of ℂ⁴ in the coordinates `a, b, x, y`.
//!
//! This is the literal, expanded model of the automorphisms and real
//! structures. It is slow by construction and exists to validate the
//! contracted [`StructuredMatrix`] arithmetic.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{forward_binop, GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::StructuredMatrix;

pub const A: usize = 0;
pub const B: usize = 1;
pub const X: usize = 2;
pub const Y: usize = 3;

pub type Exponents = [u32; 4];

/// Polynomial in `a, b, x, y` over ℚ(i); zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exponents, GaussianRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(GaussianRational::one(), [0; 4])
    }

    pub fn var(index: usize) -> Self {
        let mut exps = [0; 4];
        exps[index] = 1;
        Self::monomial(GaussianRational::one(), exps)
    }

    pub fn monomial(c: GaussianRational, exps: Exponents) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, GaussianRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exps: Exponents, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `p(T)·a^{extra_a}·b^{extra_b}` with `T = ab` written out.
    pub fn from_t_poly(p: &LaurentPoly, extra_a: u32, extra_b: u32) -> Result<Self> {
        let mut out = Self::zero();
        for (k, c) in p.terms() {
            let ea = i64::from(extra_a) + k;
            let eb = i64::from(extra_b) + k;
            if ea < 0 || eb < 0 {
                return Err(Error::NegativeExponent(ea.min(eb)));
            }
            out.add_term([ea as u32, eb as u32, 0, 0], c.clone());
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GaussianRational)> + '_ {
        self.terms.iter()
    }

    /// Number of nonzero terms; emptiness is `is_zero`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &Exponents) -> GaussianRational {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn bar(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// `self(images[0], images[1], images[2], images[3])`.
    pub fn substitute(&self, images: &[MultiPoly; 4]) -> MultiPoly {
        let mut powers: [Vec<MultiPoly>; 4] = Default::default();
        let mut power = |var: usize, exp: u32| -> MultiPoly {
            let cache = &mut powers[var];
            if cache.is_empty() {
                cache.push(MultiPoly::one());
            }
            while cache.len() <= exp as usize {
                let next = cache.last().expect("nonempty") * &images[var];
                cache.push(next);
            }
            cache[exp as usize].clone()
        };
        let mut out = MultiPoly::zero();
        for (exps, c) in &self.terms {
            let mut term = MultiPoly::monomial(c.clone(), [0; 4]);
            for (var, &k) in exps.iter().enumerate() {
                if k > 0 {
                    term = &term * &power(var, k);
                }
            }
            for (e, c) in term.terms {
                out.add_term(e, c);
            }
        }
        out
    }

    /// Every monomial has weighted degree `target` under `weights`.
    pub fn is_weight_homogeneous(&self, weights: &[i64; 4], target: i64) -> bool {
        self.terms.keys().all(|e| weighted_degree(e, weights) == target)
    }
}

pub fn weighted_degree(exps: &Exponents, weights: &[i64; 4]) -> i64 {
    exps.iter().zip(weights).map(|(&e, &w)| i64::from(e) * w).sum()
}

forward_binop!(MultiPoly, Add, add, |a, b| {
    let mut out = a.clone();
    for (e, c) in &b.terms {
        out.add_term(*e, c.clone());
    }
    out
});

forward_binop!(MultiPoly, Sub, sub, |a, b| {
    let mut out = a.clone();
    for (e, c) in &b.terms {
        out.add_term(*e, -c);
    }
    out
});

forward_binop!(MultiPoly, Mul, mul, |a, b| {
    let mut out = MultiPoly::zero();
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
            out.add_term(e, ca * cb);
        }
    }
    out
});

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_multipoly(f, self, ["a", "b", "x", "y"])
    }
}

pub(crate) fn write_multipoly(
    f: &mut dyn fmt::Write,
    p: &MultiPoly,
    names: [&str; 4],
) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (i, (exps, c)) in p.terms.iter().enumerate() {
        let negative = c.is_real() && c.re.is_negative();
        let c = if negative { -c } else { c.clone() };
        match (i, negative) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let vars: Vec<String> = exps
            .iter()
            .zip(names)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, n)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        let coeff = if c.is_real() { c.to_string() } else { format!("({c})") };
        match (vars.is_empty(), c.is_one()) {
            (true, _) => f.write_str(&coeff)?,
            (false, true) => f.write_str(&vars.join("*"))?,
            (false, false) => write!(f, "{coeff}*{}", vars.join("*"))?,
        }
    }
    Ok(())
}

/// Weights `(k, −k, n, −n)` of the ℂ*-action on `W_k × W_n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Weights {
    pub base: u32,
    pub fiber: u32,
}

impl Weights {
    pub fn new(base: u32, fiber: u32) -> Self {
        Weights { base, fiber }
    }

    /// `W₂ × W_{2m+1}`.
    pub fn for_family(m: u32) -> Self {
        Weights::new(2, 2 * m + 1)
    }

    pub fn quadruple(&self) -> [i64; 4] {
        let (k, n) = (i64::from(self.base), i64::from(self.fiber));
        [k, -k, n, -n]
    }

    /// Cross-exponent `e` with `e·k = 2n`, if integral.
    pub fn cross_exponent(&self) -> Option<u32> {
        (self.base > 0 && (2 * self.fiber).is_multiple_of(self.base)).then(|| 2 * self.fiber / self.base)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    /// holomorphic equivariance: component `i` has weight `w_i`
    Plus,
    /// antiholomorphic compatibility with `σ(t) = t̄⁻¹`: weight `−w_i`
    Minus,
}

impl Sign {
    fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Polynomial self-map of ℂ⁴ given by the images of `a, b, x, y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    pub images: [MultiPoly; 4],
}

impl PolyMap {
    pub fn new(images: [MultiPoly; 4]) -> Self {
        PolyMap { images }
    }

    pub fn identity() -> Self {
        PolyMap::new([
            MultiPoly::var(A),
            MultiPoly::var(B),
            MultiPoly::var(X),
            MultiPoly::var(Y),
        ])
    }

    /// Diagonal linear map `(ca·a, cb·b, cx·x, cy·y)`.
    pub fn diagonal(c: [GaussianRational; 4]) -> Self {
        let [ca, cb, cx, cy] = c;
        PolyMap::new([
            MultiPoly::var(A).scale(&ca),
            MultiPoly::var(B).scale(&cb),
            MultiPoly::var(X).scale(&cx),
            MultiPoly::var(Y).scale(&cy),
        ])
    }

    /// `τ₀`: exchanges `a ↔ b` and `x ↔ y`.
    pub fn swap() -> Self {
        PolyMap::new([
            MultiPoly::var(B),
            MultiPoly::var(A),
            MultiPoly::var(Y),
            MultiPoly::var(X),
        ])
    }

    /// `self ∘ inner`
    pub fn after(&self, inner: &PolyMap) -> PolyMap {
        PolyMap::new(self.images.clone().map(|f| f.substitute(&inner.images)))
    }

    pub fn bar(&self) -> PolyMap {
        PolyMap::new(self.images.clone().map(|f| f.bar()))
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMap::identity()
    }

    /// `ℓ_r`: scales the base coordinates, `(r·a, r·b, x, y)`.
    pub fn base_scaling(r: &Rational) -> PolyMap {
        let r = GaussianRational::real(r.clone());
        let one = GaussianRational::one();
        PolyMap::diagonal([r.clone(), r, one.clone(), one])
    }

    /// `ρ_ω = (ω²a, ω⁻²b, ωⁿx, ω⁻ⁿy)` for `|ω| = 1`, so `ω⁻¹ = ω̄`.
    pub fn circle_rotation(omega: &GaussianRational, weights: &Weights) -> Result<PolyMap> {
        if !omega.norm().is_one() {
            return Err(Error::InvalidForm(format!("{omega} is not on the unit circle")));
        }
        let inv = omega.conj();
        Ok(PolyMap::diagonal([
            omega.pow(weights.base),
            inv.pow(weights.base),
            omega.pow(weights.fiber),
            inv.pow(weights.fiber),
        ]))
    }
}

/// `v ↦ map(v̄)` when `conjugates_input`, otherwise `v ↦ map(v)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealStructureMap {
    pub map: PolyMap,
    pub conjugates_input: bool,
}

impl RealStructureMap {
    pub fn holomorphic(map: PolyMap) -> Self {
        RealStructureMap {
            map,
            conjugates_input: false,
        }
    }

    pub fn antiholomorphic(map: PolyMap) -> Self {
        RealStructureMap {
            map,
            conjugates_input: true,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.conjugates_input && self.map.is_identity()
    }
}

/// `f ∘ g`. Conjugating the input of `f` conjugates the coefficients of
/// `g`'s polynomial part, so the result is `f.map ∘ ḡ.map` (or `g.map`) with
/// flag `f xor g`.
pub fn compose(f: &RealStructureMap, g: &RealStructureMap) -> RealStructureMap {
    let inner = if f.conjugates_input {
        g.map.bar()
    } else {
        g.map.clone()
    };
    RealStructureMap {
        map: f.map.after(&inner),
        conjugates_input: f.conjugates_input ^ g.conjugates_input,
    }
}

/// Component `i` of `f` is homogeneous of weight `sign·w_i`.
pub fn weight_check(f: &PolyMap, weights: &Weights, sign: Sign) -> bool {
    let w = weights.quadruple();
    f.images
        .iter()
        .zip(w)
        .all(|(img, wi)| img.is_weight_homogeneous(&w, sign.factor() * wi))
}

pub fn is_involution(f: &RealStructureMap) -> bool {
    compose(f, f).is_identity()
}

/// Conditions `s² = 1` and `st = t⁻¹s` for an action of the reflection
/// `s ∈ O₂(ℂ)` by `tau`.
pub fn o2_relation_check(tau: &PolyMap, weights: &Weights) -> bool {
    tau.after(tau).is_identity() && weight_check(tau, weights, Sign::Minus)
}

/// `φ_M`: fixes `a, b` and sends `(x, y)` to `M·(x, y)` with the `aᵉ`, `bᵉ`
/// factors written out. Requires polynomial entries.
pub fn expand(m: &StructuredMatrix, weights: &Weights) -> Result<PolyMap> {
    if weights.cross_exponent() != Some(m.e()) {
        return Err(Error::WeightMismatch {
            base: weights.base,
            fiber: weights.fiber,
            e: m.e(),
        });
    }
    let e = m.e();
    let x = MultiPoly::var(X);
    let y = MultiPoly::var(Y);
    let x_img = &MultiPoly::from_t_poly(m.p(), 0, 0)? * &x + &MultiPoly::from_t_poly(m.q(), e, 0)? * &y;
    let y_img = &MultiPoly::from_t_poly(m.s(), 0, e)? * &x + &MultiPoly::from_t_poly(m.r(), 0, 0)? * &y;
    Ok(PolyMap::new([MultiPoly::var(A), MultiPoly::var(B), x_img, y_img]))
}
