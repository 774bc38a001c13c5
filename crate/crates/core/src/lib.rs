//! Exact construction, verification and classification of the equivariant
//! real circle forms `μ_h = φ_h ∘ μ₀` on `W₂ × W_{2m+1}`.
//!
//! Everything is exact: coefficients live in ℚ(i), the structured 2×2
//! matrices are stored as Laurent polynomials in `T = ab`, and the
//! four-variable [`symmap`] layer re-checks the matrix shortcuts by literal
//! substitution.

pub mod arith;
pub mod equivalence;
pub mod error;
pub mod forms;
pub mod laurent;
pub mod matrix;
pub mod oracle;
pub mod quotient;
pub mod selftest;
pub mod symmap;

pub use arith::{rational_odd_root, GaussianRational, Rational};
pub use equivalence::{
    build_certificate, case_m2_conditions, classify, decide_equiv, Certificate, DecisionResult,
    Partition,
};
pub use error::{Error, Result};
pub use forms::FormSpec;
pub use laurent::LaurentPoly;
pub use matrix::{Membership, StructuredMatrix};
pub use symmap::{MultiPoly, PolyMap, RealStructureMap, Sign, Weights};
