//! Brute-force conjugator search, independent of the decision procedure.
//!
//! For fixed `h`, `h″` the condition `N·M_h = M_{h″}·γN` is linear over ℝ
//! in the real and imaginary parts of the coefficients of `N`. We write the
//! map down term by term, solve it exactly over ℚ up to a degree bound, and
//! keep the solutions whose determinant is a nonzero constant. Every match
//! is re-verified with the structured-matrix arithmetic before it is
//! returned, so false positives are impossible; the search is only a
//! semi-decision (bounded degree, finite grid of `r`).

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith::{GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::forms::{make_k, make_m, FormSpec};
use crate::laurent::LaurentPoly;
use crate::matrix::{Membership, StructuredMatrix};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Entry {
    P,
    Q,
    S,
    R,
}

impl Entry {
    pub const ALL: [Entry; 4] = [Entry::P, Entry::Q, Entry::S, Entry::R];

    fn of(self, m: &StructuredMatrix) -> &LaurentPoly {
        match self {
            Entry::P => m.p(),
            Entry::Q => m.q(),
            Entry::S => m.s(),
            Entry::R => m.r(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Part {
    Re,
    Im,
}

impl Part {
    fn unit(self) -> GaussianRational {
        match self {
            Part::Re => GaussianRational::one(),
            Part::Im => GaussianRational::i(),
        }
    }

    fn of(self, c: &GaussianRational) -> &Rational {
        match self {
            Part::Re => &c.re,
            Part::Im => &c.im,
        }
    }
}

/// Unknown `part(coeff of T^exponent in entry)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarLabel {
    pub entry: Entry,
    pub exponent: i64,
    pub part: Part,
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub labels: Vec<VarLabel>,
}

impl LinearSystem {
    pub fn new(matrix: Vec<Vec<Rational>>, rhs: Vec<Rational>, labels: Vec<VarLabel>) -> Result<Self> {
        let cols = labels.len();
        if rhs.len() != matrix.len() || matrix.iter().any(|row| row.len() != cols) {
            return Err(Error::InvalidForm("inconsistent linear system dimensions".into()));
        }
        Ok(LinearSystem { matrix, rhs, labels })
    }

    /// Homogeneous system with generic labels, for plain linear algebra.
    pub fn homogeneous(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = matrix.first().map_or(0, Vec::len);
        let labels = (0..cols as i64)
            .map(|j| VarLabel { entry: Entry::P, exponent: j, part: Part::Re })
            .collect();
        let rhs = vec![Rational::zero(); matrix.len()];
        Self::new(matrix, rhs, labels)
    }

    pub fn cols(&self) -> usize {
        self.labels.len()
    }

    /// `A·v − b`
    pub fn residual(&self, v: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                row.iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
                    - b
            })
            .collect()
    }
}

/// Basis of `{v : A·v = 0}` by exact reduced row echelon form; the right-hand
/// side is ignored.
pub fn nullspace(sys: &LinearSystem) -> Vec<Vec<Rational>> {
    let cols = sys.cols();
    let mut rows: Vec<Vec<Rational>> = sys.matrix.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(found) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let free = (0..cols).filter(|c| !pivots.contains(c));
    free.map(|f| {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -&rows[i][f];
        }
        v
    })
    .collect()
}

/// One summand `factor·X` (or `factor·X̄`) of output entry `out`.
#[derive(Clone, Debug)]
struct Term {
    out: Entry,
    input: Entry,
    factor: LaurentPoly,
    conjugate: bool,
}

/// An ℝ-linear map on structured matrices given as a sum of terms, each
/// either ℂ-linear or conjugate-linear in one input entry.
#[derive(Clone, Debug)]
pub struct RealLinearMap {
    e: u32,
    terms: Vec<Term>,
}

impl RealLinearMap {
    /// `N ↦ γN = (R̄, S̄, Q̄, P̄)`.
    pub fn galois(e: u32) -> Self {
        let one = LaurentPoly::one();
        let t = |out, input| Term { out, input, factor: one.clone(), conjugate: true };
        RealLinearMap {
            e,
            terms: vec![t(Entry::P, Entry::R), t(Entry::Q, Entry::S), t(Entry::S, Entry::Q), t(Entry::R, Entry::P)],
        }
    }

    /// `N ↦ N·src − dst·γN`.
    pub fn conjugation(src: &StructuredMatrix, dst: &StructuredMatrix) -> Result<Self> {
        if src.e() != dst.e() {
            return Err(Error::CrossExponentMismatch { left: src.e(), right: dst.e() });
        }
        let k = i64::from(src.e());
        let lin = |out, input, factor: LaurentPoly| Term { out, input, factor, conjugate: false };
        let anti = |out, input, factor: &LaurentPoly| Term { out, input, factor: -factor, conjugate: true };
        let (mp, mq, ms, mr) = (src.p(), src.q(), src.s(), src.r());
        let (np, nq, ns, nr) = (dst.p(), dst.q(), dst.s(), dst.r());
        use Entry::*;
        let terms = vec![
            // N·src
            lin(P, P, mp.clone()),
            lin(P, Q, ms.shift(k)),
            lin(Q, P, mq.clone()),
            lin(Q, Q, mr.clone()),
            lin(S, S, mp.clone()),
            lin(S, R, ms.clone()),
            lin(R, S, mq.shift(k)),
            lin(R, R, mr.clone()),
            // −dst·(R̄, S̄; Q̄, P̄)
            anti(P, R, np),
            anti(P, Q, &nq.shift(k)),
            anti(Q, S, np),
            anti(Q, P, nq),
            anti(S, R, ns),
            anti(S, Q, nr),
            anti(R, S, &ns.shift(k)),
            anti(R, P, nr),
        ];
        Ok(RealLinearMap { e: src.e(), terms })
    }

    fn image_of_unknown(&self, label: &VarLabel) -> [LaurentPoly; 4] {
        let mut out: [LaurentPoly; 4] = Default::default();
        let unit = label.part.unit();
        for term in self.terms.iter().filter(|t| t.input == label.entry) {
            let c = if term.conjugate { unit.conj() } else { unit.clone() };
            let contribution = term.factor.shift(label.exponent).scale(&c);
            let slot = &mut out[term.out as usize];
            *slot = &*slot + &contribution;
        }
        out
    }

    /// The map as a rational matrix on the unknowns in `labels`, one row per
    /// (output entry, exponent, part) that any column touches.
    pub fn system(&self, labels: Vec<VarLabel>) -> LinearSystem {
        let columns: Vec<[LaurentPoly; 4]> = labels.iter().map(|l| self.image_of_unknown(l)).collect();
        let mut row_index: BTreeMap<(Entry, i64, Part), usize> = BTreeMap::new();
        for col in &columns {
            for (out, poly) in Entry::ALL.iter().zip(col) {
                for (exp, _) in poly.terms() {
                    for part in [Part::Re, Part::Im] {
                        let next = row_index.len();
                        row_index.entry((*out, exp, part)).or_insert(next);
                    }
                }
            }
        }
        let mut matrix = vec![vec![Rational::zero(); labels.len()]; row_index.len()];
        for (j, col) in columns.iter().enumerate() {
            for (out, poly) in Entry::ALL.iter().zip(col) {
                for (exp, c) in poly.terms() {
                    for part in [Part::Re, Part::Im] {
                        matrix[row_index[&(*out, exp, part)]][j] = part.of(c).clone();
                    }
                }
            }
        }
        let rhs = vec![Rational::zero(); matrix.len()];
        LinearSystem { matrix, rhs, labels }
    }

    /// Evaluates the map on a concrete matrix through the term table.
    pub fn apply(&self, n: &StructuredMatrix) -> StructuredMatrix {
        let mut out: [LaurentPoly; 4] = Default::default();
        for term in &self.terms {
            let x = term.input.of(n);
            let x = if term.conjugate { x.bar() } else { x.clone() };
            let slot = &mut out[term.out as usize];
            *slot = &*slot + &(&term.factor * &x);
        }
        let [p, q, s, r] = out;
        StructuredMatrix::new(self.e, p, q, s, r).expect("e >= 1")
    }
}

/// Unknowns for `P, Q, S, R` of degree `≤ deg`, real and imaginary parts.
pub fn unknowns(deg: u32) -> Vec<VarLabel> {
    let mut labels = Vec::new();
    for entry in Entry::ALL {
        for exponent in 0..=i64::from(deg) {
            for part in [Part::Re, Part::Im] {
                labels.push(VarLabel { entry, exponent, part });
            }
        }
    }
    labels
}

pub fn matrix_from_coordinates(e: u32, labels: &[VarLabel], v: &[Rational]) -> StructuredMatrix {
    let mut entries: [Vec<(i64, GaussianRational)>; 4] = Default::default();
    for (label, x) in labels.iter().zip(v) {
        if x.is_zero() {
            continue;
        }
        let c = label.part.unit().scale(x);
        entries[label.entry as usize].push((label.exponent, c));
    }
    let [p, q, s, r] = entries.map(LaurentPoly::from_terms);
    StructuredMatrix::new(e, p, q, s, r).expect("e >= 1")
}

pub fn coordinates_of(n: &StructuredMatrix, labels: &[VarLabel]) -> Vec<Rational> {
    labels
        .iter()
        .map(|l| l.part.of(&l.entry.of(n).coeff(l.exponent)).clone())
        .collect()
}

/// `N ∈ Λ` and `N·src·(γN)⁻¹ = dst`.
pub fn verify_conjugation(n: &StructuredMatrix, src: &StructuredMatrix, dst: &StructuredMatrix) -> bool {
    if n.membership() != Membership::Lambda {
        return false;
    }
    let Ok(inv) = n.galois().inverse() else {
        return false;
    };
    n.mul(src)
        .and_then(|x| x.mul(&inv))
        .map(|x| x == *dst)
        .unwrap_or(false)
}

fn add_scaled(a: &[Rational], b: &[Rational], sign: i64) -> Vec<Rational> {
    let s = Rational::from_integer(sign);
    a.iter().zip(b).map(|(x, y)| x + &(&s * y)).collect()
}

/// Conjugators of minimal degree for one `(src, dst)` pair, scanning
/// degrees `0..=deg_bound` and stopping at the first that yields any.
fn search_pair(src: &StructuredMatrix, dst: &StructuredMatrix, deg_bound: u32) -> Result<Vec<StructuredMatrix>> {
    let map = RealLinearMap::conjugation(src, dst)?;
    for deg in 0..=deg_bound {
        let sys = map.system(unknowns(deg));
        let basis = nullspace(&sys);
        let mut candidates: Vec<Vec<Rational>> = basis.clone();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                candidates.push(add_scaled(&basis[i], &basis[j], 1));
                candidates.push(add_scaled(&basis[i], &basis[j], -1));
            }
        }
        let mut found: Vec<StructuredMatrix> = Vec::new();
        for v in &candidates {
            let n = matrix_from_coordinates(src.e(), &sys.labels, v);
            let det = n.det();
            if det.is_zero() || !det.is_constant() {
                continue;
            }
            if verify_conjugation(&n, src, dst) && !found.contains(&n) {
                found.push(n);
            }
        }
        if !found.is_empty() {
            return Ok(found);
        }
    }
    Ok(Vec::new())
}

/// For each `r` in the grid, conjugators `N ∈ Λ` of degree `≤ deg_bound`
/// with `N·M_h·(γN)⁻¹ = M_{h″}`, `h″ = r·h2(r²T)`. Results are ordered by
/// grid index.
pub fn search_conjugator(
    h: &LaurentPoly,
    h2: &LaurentPoly,
    m: u32,
    deg_bound: u32,
    r_grid: &[Rational],
) -> Result<Vec<(Rational, StructuredMatrix)>> {
    if r_grid.is_empty() {
        return Err(Error::InvalidForm("empty r-grid".into()));
    }
    if r_grid.iter().any(Rational::is_zero) {
        return Err(Error::ZeroScale);
    }
    let src = make_m(&FormSpec::new(m, h.clone())?);
    FormSpec::new(m, h2.clone())?;
    let per_r = r_grid
        .par_iter()
        .map(|r| -> Result<Vec<(Rational, StructuredMatrix)>> {
            let dst = make_m(&FormSpec::new(m, h2.apply_scaling(r)?)?);
            let found = search_pair(&src, &dst, deg_bound)?;
            Ok(found.into_iter().map(|n| (r.clone(), n)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_r.into_iter().flatten().collect())
}

/// The two polynomiality conditions on `α` from the proof:
/// `α·q_{h″} − ᾱ·q_h ∈ ℂ[T]` and `α·s_h·r_{h″} − ᾱ·r_h·s_{h″} ∈ ℂ[T]`.
pub fn proof_conditions(h: &LaurentPoly, h_dd: &LaurentPoly, m: u32, alpha: &GaussianRational) -> Result<bool> {
    if alpha.is_zero() {
        return Ok(false);
    }
    let k = make_k(&FormSpec::new(m, h.clone())?);
    let k_dd = make_k(&FormSpec::new(m, h_dd.clone())?);
    let a = LaurentPoly::constant(alpha.clone());
    let a_bar = LaurentPoly::constant(alpha.conj());
    let first = &a * k_dd.q() - &a_bar * k.q();
    let second = &(&a * k.s()) * k_dd.r() - &(&a_bar * k.r()) * k_dd.s();
    Ok(first.is_polynomial() && second.is_polynomial())
}

/// `{a + bi : a, b ∈ −2..=2} \ {0}`.
pub fn default_alpha_grid() -> Vec<GaussianRational> {
    let mut grid = Vec::new();
    for a in -2..=2 {
        for b in -2..=2 {
            if a != 0 || b != 0 {
                grid.push(GaussianRational::from_ratios((a, 1), (b, 1)));
            }
        }
    }
    grid
}

/// First `(r, α)` in grid order satisfying [`proof_conditions`].
pub fn proof_conditions_scan(
    h: &LaurentPoly,
    h2: &LaurentPoly,
    m: u32,
    r_grid: &[Rational],
    alpha_grid: &[GaussianRational],
) -> Result<Option<(Rational, GaussianRational)>> {
    for r in r_grid {
        let h_dd = h2.apply_scaling(r)?;
        for alpha in alpha_grid {
            if proof_conditions(h, &h_dd, m, alpha)? {
                return Ok(Some((r.clone(), alpha.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{make_n12, make_phi12};
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c.iter().copied())
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect()).collect()
    }

    #[test]
    fn nullspace_of_identity_is_trivial() {
        let sys = LinearSystem::homogeneous(ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert!(nullspace(&sys).is_empty());
    }

    #[test]
    fn nullspace_of_difference() {
        let sys = LinearSystem::homogeneous(ints(&[&[1, -1]])).unwrap();
        assert_eq!(nullspace(&sys), vec![vec![Rational::one(), Rational::one()]]);
    }

    #[test]
    fn nullspace_residuals_vanish() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let matrix: Vec<Vec<Rational>> = (0..6)
                .map(|_| {
                    (0..8)
                        .map(|_| Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)).unwrap())
                        .collect()
                })
                .collect();
            let sys = LinearSystem::homogeneous(matrix).unwrap();
            let basis = nullspace(&sys);
            assert!(basis.len() >= 2);
            for v in &basis {
                assert!(sys.residual(v).iter().all(Rational::is_zero));
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let labels = unknowns(0);
        assert!(LinearSystem::new(ints(&[&[1, 2]]), vec![Rational::zero()], labels).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let mh = make_m(&FormSpec::new(2, poly(&[1, 3])).unwrap());
        assert!(verify_conjugation(&StructuredMatrix::identity(5), &mh, &mh));
        assert!(verify_conjugation(&make_n12(), &StructuredMatrix::identity(4), &make_phi12()));
        let m0 = make_m(&FormSpec::new(1, poly(&[])).unwrap());
        let m1 = make_m(&FormSpec::new(1, poly(&[1])).unwrap());
        assert!(!verify_conjugation(&StructuredMatrix::identity(3), &m0, &m1));
    }

    #[test]
    fn finds_identity_for_equal_forms() {
        let h = poly(&[2, -1]);
        let found = search_conjugator(&h, &h, 2, 2, &[Rational::one()]).unwrap();
        assert!(found.iter().any(|(r, n)| r.is_one() && n.is_identity()));
    }

    #[test]
    fn no_conjugator_between_linear_and_nonlinear() {
        let grid: Vec<Rational> = ["1", "-1", "2", "-2", "1/2", "-1/2", "3", "-3", "1/3", "-1/3"]
            .iter()
            .map(|s| q(s))
            .collect();
        let found = search_conjugator(&poly(&[]), &poly(&[1]), 1, 6, &grid).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn finds_conjugator_for_cubic_ratio_case() {
        let found = search_conjugator(&poly(&[1, 1]), &poly(&[2, 8]), 2, 6, &[q("2"), q("1/2")]).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().all(|(r, _)| *r == q("1/2")));
        assert!(found.iter().any(|(_, n)| n.det().is_one()));
    }

    #[test]
    fn finds_nonconstant_conjugator() {
        // h = 0 vs h′ = T² at m = 2 needs a non-constant N
        let found = search_conjugator(&poly(&[]), &poly(&[0, 0, 1]), 2, 10, &[Rational::one()]).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().any(|(_, n)| !n.p().is_constant() || !n.q().is_zero()));
    }

    #[test]
    fn search_argument_checks() {
        assert!(search_conjugator(&poly(&[1]), &poly(&[1]), 1, 1, &[]).is_err());
        assert_eq!(
            search_conjugator(&poly(&[1]), &poly(&[1]), 1, 1, &[Rational::zero()]).unwrap_err(),
            Error::ZeroScale
        );
    }

    #[test]
    fn conjugators_factor_through_diagonal() {
        // Ψ = K_{h″}⁻¹·N·K_h is γ-fixed with constant det, hence diag(α, ᾱ)
        let h = poly(&[1, -1]);
        let h2 = poly(&[-1, 1]);
        for (r, n) in search_conjugator(&h, &h2, 2, 3, &[q("1"), q("-1")]).unwrap() {
            let k = make_k(&FormSpec::new(2, h.clone()).unwrap());
            let k_dd = make_k(&FormSpec::new(2, h2.apply_scaling(&r).unwrap()).unwrap());
            let psi = k_dd.inverse().unwrap().mul(&n).unwrap().mul(&k).unwrap();
            assert_eq!(psi.galois(), psi);
            let alpha = psi.fixed_point_shape().expect("diagonal");
            assert!(proof_conditions(&h, &h2.apply_scaling(&r).unwrap(), 2, &alpha).unwrap());
        }
    }

    #[test]
    fn proof_conditions_agree_with_identity_choice() {
        let h = poly(&[1, 1]);
        assert!(proof_conditions(&h, &h, 2, &GaussianRational::one()).unwrap());
        assert!(proof_conditions(&h, &-&h, 2, &GaussianRational::i()).unwrap());
        assert!(!proof_conditions(&h, &-&h, 2, &GaussianRational::one()).unwrap());
        assert!(!proof_conditions(&h, &h, 2, &GaussianRational::zero()).unwrap());
        let hit = proof_conditions_scan(&h, &poly(&[2, 8]), 2, &[q("1"), q("1/2")], &default_alpha_grid()).unwrap();
        assert_eq!(hit.map(|(r, _)| r), Some(q("1/2")));
        assert!(proof_conditions_scan(&poly(&[]), &poly(&[1]), 1, &[q("1"), q("2")], &default_alpha_grid())
            .unwrap()
            .is_none());
    }

    fn gaussian() -> impl Strategy<Value = GaussianRational> {
        (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3)
            .prop_map(|(a, b, c, d)| GaussianRational::from_ratios((a, b), (c, d)))
    }

    fn poly_entry() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec(gaussian(), 0..4).prop_map(LaurentPoly::from_coeffs)
    }

    fn random_matrix() -> impl Strategy<Value = StructuredMatrix> {
        (1u32..=5, poly_entry(), poly_entry(), poly_entry(), poly_entry())
            .prop_map(|(e, p, q, s, r)| StructuredMatrix::new(e, p, q, s, r).unwrap())
    }

    proptest! {
        /// The re/im doubled matrix of γ reproduces structured galois.
        #[test]
        fn doubled_galois_matches(n in random_matrix()) {
            let labels = unknowns(3);
            let map = RealLinearMap::galois(n.e());
            let sys = map.system(labels.clone());
            let v = coordinates_of(&n, &labels);
            prop_assert_eq!(matrix_from_coordinates(n.e(), &labels, &v), n.clone());
            // A·v, re-read through the row labels
            let image: Vec<Rational> = sys.residual(&v);
            let g = n.galois();
            let rebuilt = {
                let mut rows: BTreeMap<(Entry, i64, Part), usize> = BTreeMap::new();
                for l in &labels {
                    for out in Entry::ALL {
                        let _ = (out, l);
                    }
                }
                // rows are keyed in the same order `system` assigns them
                let cols: Vec<[LaurentPoly; 4]> = labels.iter().map(|l| map.image_of_unknown(l)).collect();
                for col in &cols {
                    for (out, p) in Entry::ALL.iter().zip(col) {
                        for (exp, _) in p.terms() {
                            for part in [Part::Re, Part::Im] {
                                let next = rows.len();
                                rows.entry((*out, exp, part)).or_insert(next);
                            }
                        }
                    }
                }
                let mut entries: [Vec<(i64, GaussianRational)>; 4] = Default::default();
                for ((out, exp, part), idx) in rows {
                    let c = part.unit().scale(&image[idx]);
                    entries[out as usize].push((exp, c));
                }
                let [p, q, s, r] = entries.map(LaurentPoly::from_terms);
                StructuredMatrix::new(n.e(), p, q, s, r).unwrap()
            };
            prop_assert_eq!(&rebuilt, &g);
            prop_assert_eq!(map.apply(&n), g);
        }

        #[test]
        fn term_table_matches_matrix_algebra(n in random_matrix(), h in proptest::collection::vec(-2i64..=2, 0..3)) {
            let e = n.e();
            let src = StructuredMatrix::new(e, LaurentPoly::from_coeffs(h.clone()), LaurentPoly::one(), LaurentPoly::zero(), LaurentPoly::t()).unwrap();
            let dst = StructuredMatrix::new(e, LaurentPoly::one(), LaurentPoly::from_coeffs(h), LaurentPoly::t(), LaurentPoly::one()).unwrap();
            let map = RealLinearMap::conjugation(&src, &dst).unwrap();
            let direct = n.mul(&src).unwrap();
            let other = dst.mul(&n.galois()).unwrap();
            let expect = StructuredMatrix::new(
                e,
                direct.p() - other.p(),
                direct.q() - other.q(),
                direct.s() - other.s(),
                direct.r() - other.r(),
            ).unwrap();
            prop_assert_eq!(map.apply(&n), expect);
        }
    }
}
