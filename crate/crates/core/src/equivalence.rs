//! Deciding `μ_h ∼ μ_{h′}` and producing conjugating certificates.
//!
//! The forms are equivalent iff some real `r ≠ 0` satisfies
//! `h(T) ≡ r·h′(r²T) mod T^m`, i.e. `c_j = r^{2j+1}·c′_j` for all `j < m`.
//!
//! Such an `r` exists iff the supports of the truncations agree and, with
//! pivot `p` the least exponent of the support and `ρ_j = c_j / c′_j`,
//! `ρ_p^{2j+1} = ρ_j^{2p+1}` for every `j` in the support. Necessity is
//! immediate (both sides equal `r^{(2p+1)(2j+1)}`). For sufficiency take `r`
//! the real `(2p+1)`-th root of `ρ_p`; then `ρ_j^{2p+1} = (r^{2j+1})^{2p+1}`
//! and odd real roots are unique, so `ρ_j = r^{2j+1}`. All exponents are
//! odd, so signs need no separate treatment.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{rational_odd_root, Rational};
use crate::error::{Error, Result};
use crate::forms::{make_k, make_m, FormSpec};
use crate::laurent::LaurentPoly;
use crate::matrix::{Membership, StructuredMatrix};
use crate::oracle::verify_conjugation;

/// A rational witness `r` with a conjugator `N ∈ Λ` satisfying
/// `N·M_h·(γN)⁻¹ = M_{h″}`, `h″ = r·h′(r²T)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub r: Rational,
    #[serde(rename = "N")]
    pub n: StructuredMatrix,
}

impl Certificate {
    /// Independent re-check against the inputs: `N ∈ Λ` and
    /// `N·M_h·(γN)⁻¹ = base_rescale(M_{h′}, r)`.
    pub fn verify(&self, h: &LaurentPoly, h2: &LaurentPoly, m: u32) -> Result<bool> {
        let src = make_m(&FormSpec::new(m, h.clone())?);
        let dst = make_m(&FormSpec::new(m, h2.clone())?).base_rescale(&self.r)?;
        Ok(verify_conjugation(&self.n, &src, &dst))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DecisionResult {
    pub equivalent: bool,
    pub witness_exists_over_reals: bool,
    pub rational_witness: Option<Rational>,
    pub certificate: Option<Certificate>,
}

/// Verdict of the cross-ratio test, without certificate construction.
#[derive(Clone, PartialEq, Eq, Debug)]
enum Verdict {
    Inequivalent,
    /// `pivot_ratio` is `ρ_p` and `pivot` is `p`; `None` when both
    /// truncations vanish.
    Equivalent { pivot: Option<(i64, Rational)> },
}

fn real_coefficients(h: &LaurentPoly, m: u32) -> Result<Vec<(i64, Rational)>> {
    let t = h.truncate_mod(m)?;
    Ok(t.terms()
        .map(|(e, c)| (e, c.as_real().cloned().expect("validated real")))
        .collect())
}

fn verdict(h: &LaurentPoly, h2: &LaurentPoly, m: u32) -> Result<Verdict> {
    FormSpec::new(m, h.clone())?;
    FormSpec::new(m, h2.clone())?;
    let c = real_coefficients(h, m)?;
    let c2 = real_coefficients(h2, m)?;
    if c.len() != c2.len() || c.iter().zip(&c2).any(|(a, b)| a.0 != b.0) {
        return Ok(Verdict::Inequivalent);
    }
    let Some(((p, cp), (_, cp2))) = c.first().zip(c2.first()) else {
        return Ok(Verdict::Equivalent { pivot: None });
    };
    let rho_p = cp.checked_div(cp2)?;
    for ((j, cj), (_, cj2)) in c.iter().zip(&c2).skip(1) {
        let rho_j = cj.checked_div(cj2)?;
        if rho_p.powi(2 * j + 1)? != rho_j.powi(2 * p + 1)? {
            return Ok(Verdict::Inequivalent);
        }
    }
    Ok(Verdict::Equivalent {
        pivot: Some((*p, rho_p)),
    })
}

/// Whether `μ_h ∼ μ_{h2}` for the given `m`, without building certificates.
pub fn is_equivalent(h: &LaurentPoly, h2: &LaurentPoly, m: u32) -> Result<bool> {
    Ok(matches!(verdict(h, h2, m)?, Verdict::Equivalent { .. }))
}

/// The rational witness, if one exists.
pub fn rational_witness(h: &LaurentPoly, h2: &LaurentPoly, m: u32) -> Result<Option<Rational>> {
    Ok(match verdict(h, h2, m)? {
        Verdict::Inequivalent => None,
        Verdict::Equivalent { pivot: None } => Some(Rational::one()),
        Verdict::Equivalent {
            pivot: Some((p, rho)),
        } => rational_odd_root(&rho, (2 * p + 1) as u32),
    })
}

pub fn decide_equiv(h: &LaurentPoly, h2: &LaurentPoly, m: u32) -> Result<DecisionResult> {
    let equivalent = is_equivalent(h, h2, m)?;
    let rational_witness = rational_witness(h, h2, m)?;
    let certificate = match &rational_witness {
        Some(r) => Some(build_certificate(h, h2, m, r)?),
        None => None,
    };
    Ok(DecisionResult {
        equivalent,
        witness_exists_over_reals: equivalent,
        rational_witness,
        certificate,
    })
}

/// `N = K_{h″}·K_h⁻¹`, which lies in Λ exactly when `h ≡ h″ mod T^m`.
pub fn build_certificate(
    h: &LaurentPoly,
    h2: &LaurentPoly,
    m: u32,
    r: &Rational,
) -> Result<Certificate> {
    let spec = FormSpec::new(m, h.clone())?;
    let spec2 = FormSpec::new(m, h2.clone())?;
    let h_dd = h2.apply_scaling(r)?;
    if h.truncate_mod(m)? != h_dd.truncate_mod(m)? {
        return Err(Error::InvalidForm(format!(
            "r = {r} does not satisfy h ≡ r·h′(r²T) mod T^{m}"
        )));
    }
    let spec_dd = FormSpec::new(m, h_dd)?;
    let n = make_k(&spec_dd).mul(&make_k(&spec).inverse()?)?;
    let fail = |what: &str| Err(Error::Consistency(format!("certificate for r = {r}: {what}")));
    if !n.is_polynomial() {
        return fail("entries are not polynomial");
    }
    if !n.det().is_one() {
        return fail("det N ≠ 1");
    }
    if n.membership() != Membership::Lambda {
        return fail("N ∉ Λ");
    }
    let m_dd = make_m(&spec_dd);
    if make_m(&spec2).base_rescale(r)? != m_dd {
        return fail("base rescaling of M_h′ differs from M_h″");
    }
    let conj = n.mul(&make_m(&spec))?.mul(&n.galois().inverse()?)?;
    if conj != m_dd {
        return fail("N·M_h·(γN)⁻¹ ≠ M_h″");
    }
    Ok(Certificate { r: r.clone(), n })
}

/// Equivalence classes of indices, each sorted, ordered by least member.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Partition {
    pub classes: Vec<Vec<usize>>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, index: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&index))
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Partition of `hs` under `μ_h ∼ μ_{h′}`. Every pair inside a class is
/// re-decided, so a non-transitive verdict surfaces as an error.
pub fn classify(hs: &[LaurentPoly], m: u32) -> Result<Partition> {
    let pairs: Vec<(usize, usize)> = (0..hs.len())
        .flat_map(|i| (i + 1..hs.len()).map(move |j| (i, j)))
        .collect();
    let verdicts = pairs
        .par_iter()
        .map(|&(i, j)| is_equivalent(&hs[i], &hs[j], m))
        .collect::<Result<Vec<bool>>>()?;
    for h in hs {
        // reflexivity, and validation of singleton inputs
        if !is_equivalent(h, h, m)? {
            return Err(Error::Consistency(format!("{h} is not equivalent to itself")));
        }
    }

    let mut uf = UnionFind::new(hs.len());
    for (&(i, j), &eq) in pairs.iter().zip(&verdicts) {
        if eq {
            uf.union(i, j);
        }
    }
    let roots: Vec<usize> = (0..hs.len()).map(|i| uf.find(i)).collect();
    for (&(i, j), &eq) in pairs.iter().zip(&verdicts) {
        if roots[i] == roots[j] && !eq {
            return Err(Error::Consistency(format!(
                "transitivity fails: forms {i} and {j} are joined through a chain but decided inequivalent"
            )));
        }
    }

    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = std::collections::HashMap::new();
    for (i, root) in roots.into_iter().enumerate() {
        let k = *slot.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(i);
    }
    Ok(Partition { classes })
}

/// The four disjuncts for `h = c₀ + c₁T`, `h′ = c₀′ + c₁′T` at `m = 2`,
/// transcribed directly.
pub fn case_m2_conditions(c0: &Rational, c1: &Rational, c0p: &Rational, c1p: &Rational) -> bool {
    let nz = |x: &Rational| !x.is_zero();
    let all_zero = !nz(c0) && !nz(c0p) && !nz(c1) && !nz(c1p);
    let linear = !nz(c0) && !nz(c0p) && nz(&(c1 * c1p));
    let constant = !nz(c1) && !nz(c1p) && nz(&(c0 * c0p));
    let general = nz(&(c0 * c0p * c1 * c1p)) && {
        let ratio = c0p.checked_div(c0).expect("nonzero");
        ratio.powi(3).expect("nonzero") == c1p.checked_div(c1).expect("nonzero")
    };
    all_zero || linear || constant || general
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c.iter().copied())
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn cubic_ratio_case() {
        let d = decide_equiv(&poly(&[1, 1]), &poly(&[2, 8]), 2).unwrap();
        assert!(d.equivalent && d.witness_exists_over_reals);
        assert_eq!(d.rational_witness, Some(q("1/2")));
        let cert = d.certificate.unwrap();
        assert_eq!(cert.r, q("1/2"));
        assert!(cert.n.is_identity());
        assert!(cert.verify(&poly(&[1, 1]), &poly(&[2, 8]), 2).unwrap());
    }

    #[test]
    fn linear_form_is_not_the_first_example() {
        let d = decide_equiv(&poly(&[]), &poly(&[1]), 1).unwrap();
        assert!(!d.equivalent && !d.witness_exists_over_reals);
        assert_eq!(d.rational_witness, None);
        assert_eq!(d.certificate, None);
    }

    #[test]
    fn irrational_witness() {
        let d = decide_equiv(&poly(&[0, 1]), &poly(&[0, 3]), 2).unwrap();
        assert!(d.equivalent);
        assert_eq!(d.rational_witness, None);
        assert_eq!(d.certificate, None);
    }

    #[test]
    fn self_equivalence_has_unit_witness() {
        for h in [poly(&[]), poly(&[3, -1, 2]), poly(&[0, 0, 5])] {
            let d = decide_equiv(&h, &h, 3).unwrap();
            assert!(d.equivalent);
            assert_eq!(d.rational_witness, Some(Rational::one()));
            assert!(d.certificate.unwrap().n.is_identity());
        }
    }

    #[test]
    fn non_real_input_rejected() {
        let bad = LaurentPoly::from_coeffs([crate::GaussianRational::i()]);
        assert!(matches!(decide_equiv(&bad, &poly(&[1]), 1), Err(Error::NotReal(_))));
        let laurent = LaurentPoly::monomial(1.into(), -1);
        assert!(decide_equiv(&poly(&[1]), &laurent, 1).is_err());
        assert!(decide_equiv(&poly(&[1]), &poly(&[1]), 0).is_err());
    }

    #[test]
    fn certificate_for_pure_power() {
        // h = 0 vs h′ = T^m: N = K_{T^m} is polynomial
        for m in 1..=3 {
            let tm = LaurentPoly::t().pow(m);
            let cert = build_certificate(&poly(&[]), &tm, m, &Rational::one()).unwrap();
            let k = make_k(&FormSpec::new(m, tm.clone()).unwrap());
            assert_eq!(cert.n, k);
            assert!(k.is_polynomial());
            assert_eq!(k.q(), &poly(&[1]));
        }
    }

    #[test]
    fn certificate_rejects_bad_witness() {
        assert!(matches!(
            build_certificate(&poly(&[1, 1]), &poly(&[2, 8]), 2, &q("1/3")),
            Err(Error::InvalidForm(_))
        ));
    }

    #[test]
    fn sign_flip_is_equivalent() {
        let h = poly(&[1, 2, -1]);
        let d = decide_equiv(&h, &-&h, 3).unwrap();
        assert_eq!(d.rational_witness, Some(q("-1")));
        assert!(d.certificate.unwrap().verify(&h, &-&h, 3).unwrap());
    }

    #[test]
    fn classify_examples() {
        let family: Vec<_> = (1..=10).map(|c| poly(&[1, c])).collect();
        assert_eq!(classify(&family, 2).unwrap().len(), 10);

        let hs = [poly(&[]), poly(&[0, 1]), poly(&[0, 0, 1]), poly(&[0, 2])];
        let part = classify(&hs, 2).unwrap();
        assert_eq!(part.classes, vec![vec![0, 2], vec![1, 3]]);

        assert_eq!(classify(&[poly(&[4])], 1).unwrap().classes, vec![vec![0]]);
        assert!(classify(&[], 1).unwrap().is_empty());
    }

    #[test]
    fn case_m2_examples() {
        let z = Rational::zero();
        assert!(case_m2_conditions(&z, &z, &z, &z));
        assert!(case_m2_conditions(&z, &q("5"), &z, &q("-2")));
        assert!(case_m2_conditions(&q("3"), &z, &q("-1"), &z));
        assert!(!case_m2_conditions(&q("1"), &q("1"), &q("2"), &q("7")));
        assert!(case_m2_conditions(&q("1"), &q("1"), &q("2"), &q("8")));
        assert!(!case_m2_conditions(&q("1"), &z, &z, &q("1")));
    }

    #[test]
    fn decision_json() {
        let d = decide_equiv(&poly(&[1, 1]), &poly(&[2, 8]), 2).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let back: DecisionResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        let no = decide_equiv(&poly(&[0, 1]), &poly(&[0, 3]), 2).unwrap();
        assert!(serde_json::to_string(&no).unwrap().contains(r#""rational_witness":null"#));
    }
}
