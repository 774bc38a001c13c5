//! Constructors for the named objects of the `μ_h` family and the `W₁ × W₂`
//! bundle, with exact checks of the identities they satisfy.

use crate::arith::{GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{Membership, StructuredMatrix};
use crate::symmap::{self, PolyMap, RealStructureMap, Sign, Weights};

/// A real polynomial `h ∈ ℝ[T]` together with `m ≥ 1` (so `n = 2m + 1`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormSpec {
    m: u32,
    h: LaurentPoly,
}

impl FormSpec {
    pub fn new(m: u32, h: LaurentPoly) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidForm("m must be at least 1".into()));
        }
        if !h.is_polynomial() {
            return Err(Error::NegativeExponent(h.valuation()?));
        }
        h.require_real()?;
        Ok(FormSpec { m, h })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        2 * self.m + 1
    }

    pub fn h(&self) -> &LaurentPoly {
        &self.h
    }

    pub fn weights(&self) -> Weights {
        Weights::for_family(self.m)
    }

    /// `T·h²`
    fn th2(&self) -> LaurentPoly {
        (&self.h * &self.h).shift(1)
    }
}

/// `M_h = (1 − Th², aⁿhⁿ; −bⁿhⁿ, Σ_{j<n} (Th²)^j)`.
pub fn make_m(spec: &FormSpec) -> StructuredMatrix {
    let n = spec.n();
    let th2 = spec.th2();
    let hn = spec.h.pow(n);
    StructuredMatrix::new(n, LaurentPoly::one() - &th2, hn.clone(), -hn, th2.geometric_sum(n))
        .expect("n >= 3")
}

/// `K_h = (1, aⁿ q_h; bⁿ s_h, r_h)` in Λ′ with
/// `q_h = h/T^m`, `s_h = h·Σ_{j<m}(Th²)^j / T^m`, `r_h = Σ_{j≤m}(Th²)^j`.
///
/// The sums are read as sums of powers of `Th²`; the displayed matrix
/// elides the exponent, and only this reading gives `det K_h = 1`.
pub fn make_k(spec: &FormSpec) -> StructuredMatrix {
    let m = spec.m;
    let shift = -i64::from(m);
    let th2 = spec.th2();
    let q = spec.h.shift(shift);
    let s = (&spec.h * &th2.geometric_sum(m)).shift(shift);
    let r = th2.geometric_sum(m + 1);
    StructuredMatrix::new(spec.n(), LaurentPoly::one(), q, s, r).expect("n >= 3")
}

/// Cocycle condition at the matrix level: `M·γM = I`.
pub fn verify_cocycle(m: &StructuredMatrix) -> bool {
    m.mul(&m.galois()).map(|p| p.is_identity()).unwrap_or(false)
}

/// `det K_h = 1` and `K_h·(γK_h)⁻¹ = M_h`.
pub fn verify_k_factorization(spec: &FormSpec) -> bool {
    let k = make_k(spec);
    if !k.det().is_one() {
        return false;
    }
    let Ok(inv) = k.galois().inverse() else {
        return false;
    };
    k.mul(&inv).map(|c| c == make_m(spec)).unwrap_or(false)
}

/// `μ₀((a,b),(x,y)) = ((b̄, ā), (ȳ, x̄))`.
pub fn make_mu0() -> RealStructureMap {
    RealStructureMap::antiholomorphic(PolyMap::swap())
}

/// `μ_h = φ_h ∘ μ₀`.
pub fn make_mu(spec: &FormSpec) -> RealStructureMap {
    let phi = symmap::expand(&make_m(spec), &spec.weights()).expect("M_h has polynomial entries");
    symmap::compose(&RealStructureMap::holomorphic(phi), &make_mu0())
}

/// `τ₀`, the reflection of the trivial `O₂(ℂ)`-bundle.
pub fn make_tau0() -> PolyMap {
    PolyMap::swap()
}

fn gr(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    GaussianRational::from_ratios(re, im)
}

/// `Φ = (1 − T, a⁴; −b⁴, 1 + T + T² + T³)` on `W₁ × W₂`.
pub fn make_phi12() -> StructuredMatrix {
    StructuredMatrix::new(
        4,
        LaurentPoly::from_coeffs([1, -1]),
        LaurentPoly::from_coeffs([1]),
        LaurentPoly::from_coeffs([-1]),
        LaurentPoly::from_coeffs([1, 1, 1, 1]),
    )
    .expect("e = 4")
}

/// The conjugator `N` with `N·γN⁻¹ = Φ`; its coefficients are not real.
pub fn make_n12() -> StructuredMatrix {
    let p = LaurentPoly::from_coeffs([gr((1, 1), (0, 1)), gr((-1, 2), (1, 2)), gr((-1, 4), (-1, 4))]);
    let q = LaurentPoly::from_coeffs([gr((1, 4), (-1, 4))]);
    // −(3 − i + (1 + i)T)/4
    let s = LaurentPoly::from_coeffs([gr((-3, 4), (1, 4)), gr((-1, 4), (-1, 4))]);
    // 1 + (1 − i)/4·(2T + T² + T³)
    let c = gr((1, 4), (-1, 4));
    let r = LaurentPoly::from_coeffs([
        GaussianRational::one(),
        c.scale(&Rational::from_integer(2)),
        c.clone(),
        c,
    ]);
    StructuredMatrix::new(4, p, q, s, r).expect("e = 4")
}

/// `τ = φ_Φ ∘ τ₀` on `W₁ × W₂`.
pub fn make_tau12() -> PolyMap {
    let phi = symmap::expand(&make_phi12(), &Weights::new(1, 2)).expect("Φ is polynomial");
    phi.after(&make_tau0())
}

/// `N·(γN)⁻¹ = Φ`, `det N` a nonzero constant and `N ∈ Λ`.
pub fn verify_o2_trivialization() -> bool {
    let n = make_n12();
    let det = n.det();
    if !(det.is_constant() && !det.is_zero()) || n.membership() != Membership::Lambda {
        return false;
    }
    let Ok(inv) = n.galois().inverse() else {
        return false;
    };
    n.mul(&inv).map(|c| c == make_phi12()).unwrap_or(false)
}

/// Everything asserted about one `μ_h`, as separate verdicts.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FormReport {
    pub det_is_one: bool,
    pub cocycle: bool,
    pub in_lambda: bool,
    pub phi_equivariant: bool,
    pub involution: bool,
    pub sigma_compatible: bool,
}

impl FormReport {
    pub fn all_pass(&self) -> bool {
        self.det_is_one
            && self.cocycle
            && self.in_lambda
            && self.phi_equivariant
            && self.involution
            && self.sigma_compatible
    }
}

pub fn verify_form(spec: &FormSpec) -> FormReport {
    let m = make_m(spec);
    let w = spec.weights();
    let phi = symmap::expand(&m, &w).expect("M_h has polynomial entries");
    let mu = make_mu(spec);
    FormReport {
        det_is_one: m.det().is_one(),
        cocycle: verify_cocycle(&m),
        in_lambda: m.membership() == Membership::Lambda,
        phi_equivariant: symmap::weight_check(&phi, &w, Sign::Plus),
        involution: symmap::is_involution(&mu),
        sigma_compatible: symmap::weight_check(&mu.map, &w, Sign::Minus),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmap::{compose, expand, is_involution, o2_relation_check, weight_check};

    fn spec(m: u32, h: &[i64]) -> FormSpec {
        FormSpec::new(m, LaurentPoly::from_coeffs(h.iter().copied())).unwrap()
    }

    fn poly(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c.iter().copied())
    }

    #[test]
    fn form_spec_validation() {
        assert!(FormSpec::new(0, poly(&[1])).is_err());
        assert!(matches!(
            FormSpec::new(1, LaurentPoly::from_coeffs([GaussianRational::i()])),
            Err(Error::NotReal(_))
        ));
        assert!(FormSpec::new(1, LaurentPoly::monomial(1.into(), -1)).is_err());
    }

    #[test]
    fn m_for_zero_is_identity() {
        for m in 1..=3 {
            assert!(make_m(&spec(m, &[])).is_identity());
            assert!(make_k(&spec(m, &[])).is_identity());
        }
    }

    #[test]
    fn m_for_one_at_m1() {
        let mh = make_m(&spec(1, &[1]));
        let expect = StructuredMatrix::new(3, poly(&[1, -1]), poly(&[1]), poly(&[-1]), poly(&[1, 1, 1])).unwrap();
        assert_eq!(mh, expect);
    }

    #[test]
    fn m_for_t_at_m2() {
        let mh = make_m(&spec(2, &[0, 1]));
        assert_eq!(mh.e(), 5);
        assert_eq!(mh.p(), &poly(&[1, 0, 0, -1]));
        assert_eq!(mh.q(), &LaurentPoly::t().pow(5));
        assert_eq!(mh.s(), &-LaurentPoly::t().pow(5));
        let r = LaurentPoly::from_terms((0..5).map(|j| (3 * j, 1.into())));
        assert_eq!(mh.r(), &r);
    }

    #[test]
    fn galois_of_m() {
        let sp = spec(2, &[2, -1, 1]);
        let mh = make_m(&sp);
        let g = mh.galois();
        assert_eq!(g.p(), mh.r());
        assert_eq!(g.q(), &-mh.q());
        assert_eq!(g.s(), mh.q());
        assert_eq!(g.r(), mh.p());
    }

    #[test]
    fn k_for_one_at_m1() {
        let k = make_k(&spec(1, &[1]));
        let t_inv = LaurentPoly::monomial(1.into(), -1);
        let expect = StructuredMatrix::new(3, poly(&[1]), t_inv.clone(), t_inv, poly(&[1, 1])).unwrap();
        assert_eq!(k, expect);
        assert!(k.det().is_one());
        assert_eq!(k.membership(), Membership::LambdaPrime);
    }

    #[test]
    fn memberships() {
        let sp = spec(2, &[1, 3]);
        assert_eq!(make_m(&sp).membership(), Membership::Lambda);
        assert_eq!(make_k(&sp).membership(), Membership::LambdaPrime);
        assert!(make_k(&sp).inverse().unwrap().det().is_one());
    }

    #[test]
    fn cocycle_examples() {
        assert!(verify_cocycle(&StructuredMatrix::identity(3)));
        assert!(verify_cocycle(&make_m(&spec(1, &[1]))));
        let bad = StructuredMatrix::diag(3, 2.into(), 1.into());
        assert!(!verify_cocycle(&bad));
    }

    #[test]
    fn k_factorization_examples() {
        assert!(verify_k_factorization(&spec(1, &[])));
        assert!(verify_k_factorization(&spec(1, &[1])));
        assert!(verify_k_factorization(&spec(3, &[1, 2])));
        assert!(verify_k_factorization(&spec(2, &[-2, 0, 5, 1])));
    }

    #[test]
    fn mu_examples() {
        assert!(is_involution(&make_mu0()));
        let sp = spec(1, &[1]);
        let mu = make_mu(&sp);
        assert!(mu.conjugates_input);
        assert!(is_involution(&mu));
        assert!(weight_check(&mu.map, &sp.weights(), Sign::Minus));
        let phi = RealStructureMap::holomorphic(expand(&make_m(&sp), &sp.weights()).unwrap());
        assert!(!is_involution(&phi));
        assert!(verify_form(&sp).all_pass());
    }

    #[test]
    fn expanded_m_is_equivariant() {
        let sp = spec(2, &[1, -1]);
        let phi = expand(&make_m(&sp), &sp.weights()).unwrap();
        assert!(weight_check(&phi, &sp.weights(), Sign::Plus));
    }

    #[test]
    fn phi12_data() {
        let phi = make_phi12();
        assert_eq!(phi.p(), &poly(&[1, -1]));
        assert_eq!(phi.q(), &poly(&[1]));
        assert_eq!(phi.s(), &poly(&[-1]));
        assert_eq!(phi.r(), &poly(&[1, 1, 1, 1]));
        let tw = phi.s_twist();
        assert!(tw.mul(&phi).unwrap().is_identity());
        assert!(phi.mul(&tw).unwrap().is_identity());
        assert!(verify_cocycle(&phi));
    }

    #[test]
    fn n12_denominators() {
        let n = make_n12();
        for entry in n.entries() {
            for (_, c) in entry.terms() {
                for part in [&c.re, &c.im] {
                    let d = part.denom().to_string();
                    assert!(["1", "2", "4"].contains(&d.as_str()), "{c}");
                }
            }
        }
        assert_ne!(n.galois(), n);
        assert!(!n.is_real());
    }

    #[test]
    fn o2_trivialization() {
        assert!(verify_o2_trivialization());
    }

    #[test]
    fn tau12_is_an_o2_reflection() {
        let w = Weights::new(1, 2);
        let tau = make_tau12();
        assert!(o2_relation_check(&tau, &w));
        assert!(o2_relation_check(&make_tau0(), &w));
        let mu = compose(
            &RealStructureMap::holomorphic(expand(&make_phi12(), &w).unwrap()),
            &make_mu0(),
        );
        assert!(is_involution(&mu));
    }
}
