//! The groups Λ and Λ′ of 2×2 matrices `(P(T), aᵉQ(T); bᵉS(T), R(T))`.
//!
//! A matrix is stored as its four entries in `T = ab` plus the
//! cross-exponent `e`; products contract `aᵉbᵉ` to `Tᵉ`. The same type covers
//! the `W₂ × W_n` family (`e = n`) and the `W₁ × W₂` bundle (`e = 4`).

use serde::{Deserialize, Serialize};

use crate::arith::{GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr")]
pub struct StructuredMatrix {
    e: u32,
    #[serde(rename = "P")]
    p: LaurentPoly,
    #[serde(rename = "Q")]
    q: LaurentPoly,
    #[serde(rename = "S")]
    s: LaurentPoly,
    #[serde(rename = "R")]
    r: LaurentPoly,
}

#[derive(Deserialize)]
struct MatrixRepr {
    e: u32,
    #[serde(rename = "P")]
    p: LaurentPoly,
    #[serde(rename = "Q")]
    q: LaurentPoly,
    #[serde(rename = "S")]
    s: LaurentPoly,
    #[serde(rename = "R")]
    r: LaurentPoly,
}

impl TryFrom<MatrixRepr> for StructuredMatrix {
    type Error = Error;
    fn try_from(m: MatrixRepr) -> Result<Self> {
        StructuredMatrix::new(m.e, m.p, m.q, m.s, m.r)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Membership {
    /// Polynomial entries, determinant a nonzero constant.
    Lambda,
    /// Laurent entries, determinant `c·T^k` with `c ≠ 0` (and not in Λ).
    LambdaPrime,
    Neither,
}

impl StructuredMatrix {
    pub fn new(
        e: u32,
        p: LaurentPoly,
        q: LaurentPoly,
        s: LaurentPoly,
        r: LaurentPoly,
    ) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidCrossExponent);
        }
        Ok(StructuredMatrix { e, p, q, s, r })
    }

    pub fn identity(e: u32) -> Self {
        Self::diag(e, GaussianRational::one(), GaussianRational::one())
    }

    pub fn diag(e: u32, top: GaussianRational, bottom: GaussianRational) -> Self {
        StructuredMatrix {
            e: e.max(1),
            p: top.into(),
            q: LaurentPoly::zero(),
            s: LaurentPoly::zero(),
            r: bottom.into(),
        }
    }

    pub fn zero(e: u32) -> Self {
        StructuredMatrix {
            e: e.max(1),
            p: LaurentPoly::zero(),
            q: LaurentPoly::zero(),
            s: LaurentPoly::zero(),
            r: LaurentPoly::zero(),
        }
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn p(&self) -> &LaurentPoly {
        &self.p
    }

    pub fn q(&self) -> &LaurentPoly {
        &self.q
    }

    pub fn s(&self) -> &LaurentPoly {
        &self.s
    }

    pub fn r(&self) -> &LaurentPoly {
        &self.r
    }

    pub fn entries(&self) -> [&LaurentPoly; 4] {
        [&self.p, &self.q, &self.s, &self.r]
    }

    fn t_e(&self) -> i64 {
        i64::from(self.e)
    }

    pub fn is_identity(&self) -> bool {
        self.p.is_one() && self.q.is_zero() && self.s.is_zero() && self.r.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries().iter().all(|x| x.is_polynomial())
    }

    pub fn is_real(&self) -> bool {
        self.entries().iter().all(|x| x.is_real())
    }

    pub fn mul(&self, rhs: &StructuredMatrix) -> Result<StructuredMatrix> {
        if self.e != rhs.e {
            return Err(Error::CrossExponentMismatch {
                left: self.e,
                right: rhs.e,
            });
        }
        let k = self.t_e();
        Ok(StructuredMatrix {
            e: self.e,
            p: &self.p * &rhs.p + (&self.q * &rhs.s).shift(k),
            q: &self.p * &rhs.q + &self.q * &rhs.r,
            s: &self.s * &rhs.p + &self.r * &rhs.s,
            r: (&self.s * &rhs.q).shift(k) + &self.r * &rhs.r,
        })
    }

    /// `P·R − Tᵉ·Q·S`
    pub fn det(&self) -> LaurentPoly {
        &self.p * &self.r - (&self.q * &self.s).shift(self.t_e())
    }

    /// The Galois twist `(P,Q,S,R) ↦ (R̄, S̄, Q̄, P̄)` induced by conjugating
    /// with `μ₀`.
    pub fn galois(&self) -> StructuredMatrix {
        StructuredMatrix {
            e: self.e,
            p: self.r.bar(),
            q: self.s.bar(),
            s: self.q.bar(),
            r: self.p.bar(),
        }
    }

    /// The bundle twist `(P,Q,S,R) ↦ (R, S, Q, P)` induced by conjugating
    /// with `τ₀`; no coefficient conjugation.
    pub fn s_twist(&self) -> StructuredMatrix {
        StructuredMatrix {
            e: self.e,
            p: self.r.clone(),
            q: self.s.clone(),
            s: self.q.clone(),
            r: self.p.clone(),
        }
    }

    /// `Δ⁻¹·(R, −Q, −S, P)`, defined when `Δ = det` is a unit `c·T^k`.
    pub fn inverse(&self) -> Result<StructuredMatrix> {
        let det = self.det();
        let (c, k) = det
            .as_monomial()
            .ok_or_else(|| Error::NotInvertible(det.to_string()))?;
        let inv = |x: &LaurentPoly| x.div_monomial(c, k);
        Ok(StructuredMatrix {
            e: self.e,
            p: inv(&self.r)?,
            q: inv(&-&self.q)?,
            s: inv(&-&self.s)?,
            r: inv(&self.p)?,
        })
    }

    /// Substitutes `(a, b) ↦ (r·a, r·b)` in the full matrix.
    pub fn base_rescale(&self, r: &Rational) -> Result<StructuredMatrix> {
        if r.is_zero() {
            return Err(Error::ZeroScale);
        }
        let r2 = r * r;
        let re = r.powi(self.t_e())?;
        Ok(StructuredMatrix {
            e: self.e,
            p: self.p.rescale_argument(&r2)?,
            q: self.q.rescale_argument(&r2)?.scale_rational(&re),
            s: self.s.rescale_argument(&r2)?.scale_rational(&re),
            r: self.r.rescale_argument(&r2)?,
        })
    }

    pub fn membership(&self) -> Membership {
        let det = self.det();
        match det.as_monomial() {
            Some((_, 0)) if self.is_polynomial() => Membership::Lambda,
            Some(_) => Membership::LambdaPrime,
            None => Membership::Neither,
        }
    }

    /// Returns `α` when the matrix is `diag(α, ᾱ)` with `α ≠ 0`.
    ///
    /// For odd `e`, every γ-fixed member of Λ′ with constant determinant has
    /// this shape: the top terms of `P·P̄` and `Tᵉ·Q·Q̄` have degrees of
    /// different parity and cannot cancel.
    pub fn fixed_point_shape(&self) -> Option<GaussianRational> {
        if !self.q.is_zero() || !self.s.is_zero() || !self.p.is_constant() {
            return None;
        }
        let alpha = self.p.coeff(0);
        (!alpha.is_zero() && self.r == self.p.bar()).then_some(alpha)
    }
}

/// `P = …; a^e·Q = …` style listing of the four entries.
impl std::fmt::Display for StructuredMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "e = {}; P = {}; Q = {}; S = {}; R = {}", self.e, self.p, self.q, self.s, self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c.iter().copied())
    }

    fn z(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn mat(e: u32, p: &[i64], q: &[i64], s: &[i64], r: &[i64]) -> StructuredMatrix {
        StructuredMatrix::new(e, poly(p), poly(q), poly(s), poly(r)).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let id = StructuredMatrix::identity(3);
        assert!(id.det().is_one());
        assert_eq!(id.galois(), id);
        assert_eq!(id.inverse().unwrap(), id);
        assert_eq!(StructuredMatrix::zero(3).membership(), Membership::Neither);
        assert_eq!(id.fixed_point_shape(), Some(GaussianRational::one()));
        assert_eq!(
            StructuredMatrix::new(0, poly(&[1]), poly(&[]), poly(&[]), poly(&[1])),
            Err(Error::InvalidCrossExponent)
        );
    }

    #[test]
    fn antidiagonal_determinant() {
        let m = mat(5, &[], &[1], &[1], &[]);
        assert_eq!(m.det(), LaurentPoly::monomial((-1).into(), 5));
        assert_eq!(m.galois(), m);
        assert_eq!(m.fixed_point_shape(), None);
        assert_eq!(m.membership(), Membership::LambdaPrime);
    }

    #[test]
    fn mismatched_cross_exponent() {
        let a = StructuredMatrix::identity(3);
        let b = StructuredMatrix::identity(5);
        assert_eq!(
            a.mul(&b),
            Err(Error::CrossExponentMismatch { left: 3, right: 5 })
        );
    }

    #[test]
    fn non_unit_determinant_rejected() {
        let m = mat(3, &[1, 1], &[], &[], &[1]);
        assert!(matches!(m.inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn diagonal_inverse() {
        let a = z("2+i");
        let m = StructuredMatrix::diag(3, a.clone(), a.conj());
        let inv = m.inverse().unwrap();
        assert_eq!(
            inv,
            StructuredMatrix::diag(3, a.inverse().unwrap(), a.conj().inverse().unwrap())
        );
        assert_eq!(m.fixed_point_shape(), Some(a));
    }

    #[test]
    fn s_twist_of_real_is_galois() {
        let m = mat(4, &[1, -1], &[1], &[-1], &[1, 1, 1, 1]);
        assert_eq!(m.s_twist(), m.galois());
        assert_eq!(m.s_twist(), mat(4, &[1, 1, 1, 1], &[-1], &[1], &[1, -1]));
        assert_eq!(m.s_twist().s_twist(), m);
    }

    #[test]
    fn rescale_identity_factor() {
        let m = mat(3, &[1, -1], &[1], &[-1], &[1, 1, 1]);
        assert_eq!(m.base_rescale(&Rational::one()).unwrap(), m);
        assert_eq!(m.base_rescale(&Rational::zero()), Err(Error::ZeroScale));
    }

    #[test]
    fn json_shape() {
        let m = mat(3, &[1], &[], &[2], &[1]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"e":3,"P":[{"re":"1"}],"Q":[],"S":[{"re":"2"}],"R":[{"re":"1"}]}"#
        );
        assert_eq!(serde_json::from_str::<StructuredMatrix>(&s).unwrap(), m);
        assert!(serde_json::from_str::<StructuredMatrix>(r#"{"e":0,"P":[],"Q":[],"S":[],"R":[]}"#).is_err());
    }

    fn gaussian() -> impl Strategy<Value = GaussianRational> {
        (-3i64..=3, 1i64..=2, -3i64..=3, 1i64..=2)
            .prop_map(|(a, b, c, d)| GaussianRational::from_ratios((a, b), (c, d)))
    }

    fn entry() -> impl Strategy<Value = LaurentPoly> {
        (-1i64..=1, proptest::collection::vec(gaussian(), 0..3))
            .prop_map(|(v, c)| LaurentPoly::from_coeffs_at(v, c))
    }

    fn any_matrix() -> impl Strategy<Value = StructuredMatrix> {
        (1u32..=5, entry(), entry(), entry(), entry())
            .prop_map(|(e, p, q, s, r)| StructuredMatrix::new(e, p, q, s, r).unwrap())
    }

    fn pair() -> impl Strategy<Value = (StructuredMatrix, StructuredMatrix)> {
        (any_matrix(), entry(), entry(), entry(), entry()).prop_map(|(a, p, q, s, r)| {
            let b = StructuredMatrix::new(a.e(), p, q, s, r).unwrap();
            (a, b)
        })
    }

    /// Members of Λ built as products of elementary generators.
    fn lambda_member() -> impl Strategy<Value = StructuredMatrix> {
        (1u32..=5).prop_flat_map(lambda_member_with)
    }

    fn lambda_member_with(e: u32) -> impl Strategy<Value = StructuredMatrix> {
        let poly_entry = || proptest::collection::vec(gaussian(), 0..3).prop_map(LaurentPoly::from_coeffs);
        (gaussian(), gaussian(), poly_entry(), poly_entry()).prop_map(
            move |(a, b, upper, lower)| {
                let a = if a.is_zero() { GaussianRational::one() } else { a };
                let b = if b.is_zero() { GaussianRational::i() } else { b };
                let d = StructuredMatrix::diag(e, a, b);
                let u = StructuredMatrix::new(e, LaurentPoly::one(), upper, LaurentPoly::zero(), LaurentPoly::one()).unwrap();
                let l = StructuredMatrix::new(e, LaurentPoly::one(), LaurentPoly::zero(), lower, LaurentPoly::one()).unwrap();
                d.mul(&u).unwrap().mul(&l).unwrap()
            },
        )
    }

    fn lambda_prime_pair() -> impl Strategy<Value = (StructuredMatrix, StructuredMatrix)> {
        (1u32..=5).prop_flat_map(|e| (lambda_prime_member_with(e), lambda_prime_member_with(e)))
    }

    fn lambda_prime_member_with(e: u32) -> impl Strategy<Value = StructuredMatrix> {
        (lambda_member_with(e), -2i64..=2).prop_map(|(m, k)| {
            let shift = StructuredMatrix::new(
                m.e(),
                LaurentPoly::monomial(GaussianRational::one(), k),
                LaurentPoly::zero(),
                LaurentPoly::zero(),
                LaurentPoly::one(),
            )
            .unwrap();
            let upper = StructuredMatrix::new(
                m.e(),
                LaurentPoly::one(),
                LaurentPoly::monomial(GaussianRational::one(), -1),
                LaurentPoly::zero(),
                LaurentPoly::one(),
            )
            .unwrap();
            shift.mul(&m).unwrap().mul(&upper).unwrap()
        })
    }

    #[test]
    fn even_cross_exponent_admits_antidiagonal_fixed_points() {
        let c = LaurentPoly::monomial(GaussianRational::i(), -1);
        let psi = StructuredMatrix::new(2, LaurentPoly::zero(), c.clone(), c.bar(), LaurentPoly::zero()).unwrap();
        assert_eq!(psi.galois(), psi);
        assert_eq!(psi.det(), LaurentPoly::constant(GaussianRational::from_integer(-1)));
        assert_eq!(psi.fixed_point_shape(), None);
    }

    proptest! {
        #[test]
        fn det_is_multiplicative((a, b) in pair()) {
            prop_assert_eq!(a.mul(&b).unwrap().det(), &a.det() * &b.det());
        }

        #[test]
        fn galois_is_automorphism((a, b) in pair()) {
            prop_assert_eq!(a.mul(&b).unwrap().galois(), a.galois().mul(&b.galois()).unwrap());
            prop_assert_eq!(a.galois().det(), a.det().bar());
            prop_assert_eq!(a.galois().galois(), a);
        }

        #[test]
        fn rescale_composes(m in any_matrix(), r in 1i64..=3, s in -3i64..=-1) {
            let r = Rational::new(r, 2).unwrap();
            let s = Rational::from_integer(s);
            let lhs = m.base_rescale(&r).unwrap().base_rescale(&s).unwrap();
            prop_assert_eq!(lhs, m.base_rescale(&(&r * &s)).unwrap());
        }

        #[test]
        fn lambda_closed(a in lambda_member(), b_raw in lambda_member()) {
            prop_assert_eq!(a.membership(), Membership::Lambda);
            let b = StructuredMatrix::new(a.e(), b_raw.p().clone(), b_raw.q().clone(), b_raw.s().clone(), b_raw.r().clone()).unwrap();
            if b.membership() == Membership::Lambda {
                prop_assert_eq!(a.mul(&b).unwrap().membership(), Membership::Lambda);
            }
            let inv = a.inverse().unwrap();
            prop_assert_eq!(inv.membership(), Membership::Lambda);
            prop_assert!(a.mul(&inv).unwrap().is_identity());
            prop_assert!(inv.mul(&a).unwrap().is_identity());
        }

        #[test]
        fn lambda_prime_closed((a, b) in lambda_prime_pair()) {
            prop_assert_ne!(a.membership(), Membership::Neither);
            prop_assert_ne!(a.mul(&b).unwrap().membership(), Membership::Neither);
            let inv = a.inverse().unwrap();
            prop_assert_ne!(inv.membership(), Membership::Neither);
            prop_assert!(a.mul(&inv).unwrap().is_identity());
        }

        /// γ-fixed candidates `(P, Q, Q̄, P̄)` with odd cross-exponent that
        /// have constant determinant are all diagonal.
        #[test]
        fn fixed_points_with_constant_det_are_diagonal(
            e in prop::sample::select(vec![1u32, 3, 5, 7]),
            alpha in gaussian(),
            dp in entry(),
            dq in entry(),
            perturb in 0u8..4,
        ) {
            prop_assume!(!alpha.is_zero());
            let mut p = LaurentPoly::constant(alpha.clone());
            let mut q = LaurentPoly::zero();
            if perturb & 1 == 1 { p = &p + &dp; }
            if perturb & 2 == 2 { q = dq; }
            let psi = StructuredMatrix::new(e, p.clone(), q.clone(), q.bar(), p.bar()).unwrap();
            prop_assert_eq!(&psi.galois(), &psi);
            let det = psi.det();
            if det.is_constant() && !det.is_zero() {
                prop_assert!(psi.fixed_point_shape().is_some(), "{:?}", psi);
            }
            if perturb == 0 {
                prop_assert_eq!(psi.fixed_point_shape(), Some(alpha));
            }
        }
    }
}
