//! Exact moments of the binomial distribution.
//!
//! The crate derives closed-form formulas for raw, factorial and central
//! moments of Binom(n, p), rewrites central moments in the variance basis
//! sigma^2 = p(1-p), and cross-checks every formula against a brute-force
//! density summation oracle. All arithmetic is exact (big integers and big
//! rationals); floating point appears only in the asymptotic-envelope
//! report columns.
//!
//! Everything is immutable and the derivations are pure functions, so the
//! whole API is safe to drive from multiple threads.
//!
//! ```
//! use binomial_moments::{central_moment_variance_form, VarianceMethod};
//! use binomial_moments::{evaluate_formula, oracle_moment, MomentKind};
//! use binomial_moments::numeric::parse_rational;
//!
//! let doc = central_moment_variance_form(4, VarianceMethod::Symmetrize).unwrap();
//! assert_eq!(doc.to_text().unwrap(), "3*n^2*s2^2 + n*(-6*s2^2 + s2)");
//!
//! // exact agreement with the brute-force density oracle
//! let p = parse_rational("1/3").unwrap();
//! let lhs = evaluate_formula(&doc, 6, &p).unwrap();
//! let rhs = oracle_moment(6, &p, 4, MomentKind::Central).unwrap();
//! assert_eq!(lhs, rhs);
//! ```

pub mod asymptotics;
pub mod combinatorics;
pub mod moments;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod render;
pub mod verify;

pub use moments::{
    central_moment_fast, central_moment_from_raw, central_moment_stable,
    central_moment_variance_form, density, derive_moment, factorial_moment,
    raw_moment_via_counting, raw_moment_via_factorial, Basis, DerivationMethod, FormulaDoc,
    MomentError, MomentKind, MomentQuery, Provenance, VarianceMethod,
};
pub use oracle::{evaluate_formula, oracle_moment, DomainError};
pub use poly::{ElemSymPoly, Monomial, Poly, PolyError, RationalFn, VarId, VarValues};
