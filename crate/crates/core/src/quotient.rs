//! Invariants of the ℂ*-action on `W₂ × W_n` and the quotient hypersurface
//! `UV = TⁿW²`.

use serde::Serialize;

use crate::arith::GaussianRational;
use crate::error::{Error, Result};
use crate::symmap::{write_multipoly, Exponents, MultiPoly, RealStructureMap, Weights, A, B, X, Y};

pub const GENERATOR_NAMES: [&str; 4] = ["T", "W", "U", "V"];

/// `T = ab`, `W = xy`, `U = aⁿy²`, `V = bⁿx²`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantTuple {
    pub n: u32,
    pub t: MultiPoly,
    pub w: MultiPoly,
    pub u: MultiPoly,
    pub v: MultiPoly,
}

impl InvariantTuple {
    pub fn generators(&self) -> [&MultiPoly; 4] {
        [&self.t, &self.w, &self.u, &self.v]
    }

    /// Exponents in `a, b, x, y` of `T^α W^β U^γ V^δ`.
    fn monomial_of(&self, g: Exponents) -> Exponents {
        let [alpha, beta, gamma, delta] = g;
        let n = self.n;
        [alpha + n * gamma, alpha + n * delta, beta + 2 * delta, beta + 2 * gamma]
    }

    /// Preimage of a monomial in the generator monomials, normalised so that
    /// `U` and `V` never both occur.
    fn preimage(&self, exps: &Exponents) -> Option<Exponents> {
        let [p, q, s, t] = exps.map(i64::from);
        let n = i64::from(self.n);
        if (p - q) % n != 0 || (t - s) % 2 != 0 || (p - q) / n != (t - s) / 2 {
            return None;
        }
        let d = (p - q) / n;
        let (gamma, delta) = if d >= 0 { (d, 0) } else { (0, -d) };
        let alpha = p - n * gamma;
        let beta = t - 2 * gamma;
        if alpha < 0 || beta < 0 {
            return None;
        }
        let g = [alpha, beta, gamma, delta].map(|x| x as u32);
        debug_assert_eq!(self.monomial_of(g), *exps);
        Some(g)
    }

    /// `f` as a polynomial in `T, W, U, V` (exponent slots in that order), or
    /// `None` when `f` is not in the subring they generate.
    ///
    /// The generators are monomials, so the subring is spanned by monomials
    /// and membership is decided monomial by monomial. Every preimage has
    /// degree at most twice that of `f`.
    pub fn express(&self, f: &MultiPoly) -> Option<MultiPoly> {
        let mut terms = Vec::with_capacity(f.len());
        for (exps, c) in f.terms() {
            terms.push((self.preimage(exps)?, c.clone()));
        }
        Some(MultiPoly::from_terms(terms))
    }
}

pub fn make_invariants(m: u32) -> Result<InvariantTuple> {
    if m == 0 {
        return Err(Error::InvalidForm("m must be at least 1".into()));
    }
    let n = 2 * m + 1;
    let one = GaussianRational::one();
    let mono = |e: Exponents| MultiPoly::monomial(one.clone(), e);
    Ok(InvariantTuple {
        n,
        t: &MultiPoly::var(A) * &MultiPoly::var(B),
        w: &MultiPoly::var(X) * &MultiPoly::var(Y),
        u: mono([n, 0, 0, 2]),
        v: mono([0, n, 2, 0]),
    })
}

/// `U·V − Tⁿ·W²`.
pub fn relation_residual(inv: &InvariantTuple, t_exponent: u32) -> MultiPoly {
    &(&inv.u * &inv.v) - &(&inv.t.pow(t_exponent) * &inv.w.pow(2))
}

pub fn verify_relation(m: u32) -> Result<bool> {
    let inv = make_invariants(m)?;
    Ok(relation_residual(&inv, inv.n).is_zero())
}

/// Every generator has weight zero for `(2, −2, n, −n)`.
pub fn generators_weight_zero(inv: &InvariantTuple) -> bool {
    let w = Weights::new(2, inv.n).quadruple();
    inv.generators().iter().all(|g| g.is_weight_homogeneous(&w, 0))
}

/// The holomorphic function `f ∘ μ`, conjugated once more when `μ` is
/// antiholomorphic.
pub fn pullback(f: &MultiPoly, mu: &RealStructureMap) -> MultiPoly {
    let g = f.substitute(&mu.map.images);
    if mu.conjugates_input {
        g.bar()
    } else {
        g
    }
}

#[derive(Clone, Debug)]
pub struct InducedImages {
    pub images: [MultiPoly; 4],
    /// Each image rewritten in `T, W, U, V` when possible.
    pub expressions: [Option<MultiPoly>; 4],
}

impl InducedImages {
    pub fn all_expressible(&self) -> bool {
        self.expressions.iter().all(Option::is_some)
    }

    pub fn report(&self) -> QuotientImages {
        let show = |p: &MultiPoly, names: [&str; 4]| {
            let mut s = String::new();
            write_multipoly(&mut s, p, names).expect("writing to a String");
            s
        };
        let rows = GENERATOR_NAMES
            .iter()
            .zip(&self.images)
            .zip(&self.expressions)
            .map(|((name, img), expr)| ImageRow {
                generator: name.to_string(),
                image: show(img, ["a", "b", "x", "y"]),
                in_invariants: expr.as_ref().map(|e| show(e, GENERATOR_NAMES)),
            })
            .collect();
        QuotientImages { rows, all_expressible: self.all_expressible() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageRow {
    pub generator: String,
    pub image: String,
    pub in_invariants: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientImages {
    pub rows: Vec<ImageRow>,
    pub all_expressible: bool,
}

/// Pullbacks of `T, W, U, V` along `mu`.
pub fn induced_images(mu: &RealStructureMap, m: u32) -> Result<InducedImages> {
    let inv = make_invariants(m)?;
    let images = inv.generators().map(|g| pullback(g, mu));
    let expressions = images.clone().map(|img| inv.express(&img));
    Ok(InducedImages { images, expressions })
}
