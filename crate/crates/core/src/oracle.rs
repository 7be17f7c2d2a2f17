//! Independent ground truth: exact moments computed by direct summation of
//! g(k) against the binomial density. Every derived formula is adjudicated
//! against this module, so it deliberately shares no code with the
//! derivation routes beyond the density itself.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::combinatorics::falling_power_big;
use crate::moments::{FormulaDoc, MomentKind};
use crate::poly::VarValues;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("probability must lie in [0, 1], got {0}")]
    ProbabilityOutOfRange(String),
    #[error("index k = {k} outside 0..={n}")]
    IndexOutOfRange { k: u64, n: u64 },
    #[error("trial count {0} exceeds the supported range")]
    TrialCountTooLarge(u64),
}

pub(crate) fn check_probability(p: &BigRational) -> Result<(), DomainError> {
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(DomainError::ProbabilityOutOfRange(p.to_string()));
    }
    Ok(())
}

/// An oracle evaluation together with the query that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub n: u64,
    pub p: BigRational,
    pub d: u32,
    pub kind: MomentKind,
    pub value: BigRational,
}

/// Exact moment of Binom(n, p) by brute-force summation:
/// sum_k binom(n,k) p^k q^(n-k) g(k) with g fixed by the moment kind.
///
/// Writing p = a/b in lowest terms, every density shares the denominator
/// b^n, so the sum runs entirely over integer numerators
/// w(k) = binom(n,k) a^k (b-a)^(n-k), produced by the exact one-step
/// recurrence w(k) = w(k-1) (n-k+1) a / (k (b-a)); only the final result
/// is reduced. A test pins this against the directly computed [`density`]
/// values term by term.
pub fn oracle_moment(
    n: u64,
    p: &BigRational,
    d: u32,
    kind: MomentKind,
) -> Result<BigRational, DomainError> {
    check_probability(p)?;
    let n_exp =
        u32::try_from(n).map_err(|_| DomainError::TrialCountTooLarge(n))?;
    let a = p.numer().clone();
    let b = p.denom().clone();
    let mean_num = BigInt::from(n) * &a; // n p scaled by b
    // g(k) scaled so it is an integer: central moments by b^d, others by 1
    let g_num = |k: u64| -> BigInt {
        match kind {
            MomentKind::Raw => BigInt::from(k).pow(d),
            MomentKind::Central => (BigInt::from(k) * &b - &mean_num).pow(d),
            MomentKind::Factorial => falling_power_big(&BigInt::from(k), d),
        }
    };
    let g_denom = |value: BigInt| -> BigRational {
        match kind {
            MomentKind::Central => BigRational::new(value, b.pow(d)),
            _ => BigRational::from_integer(value),
        }
    };
    // point mass at k = n when p = 1 (the recurrence would divide by b-a)
    if p == &BigRational::one() {
        return Ok(g_denom(g_num(n)));
    }
    let c = &b - &a; // q = c/b
    let mut weight = c.pow(n_exp); // w(0)
    let mut acc = &weight * g_num(0);
    for k in 1..=n {
        weight = weight * BigInt::from(n - k + 1) * &a / (BigInt::from(k) * &c);
        acc += &weight * g_num(k);
    }
    Ok(g_denom(acc) / BigRational::from_integer(b.pow(n_exp)))
}

pub fn oracle_result(
    n: u64,
    p: &BigRational,
    d: u32,
    kind: MomentKind,
) -> Result<OracleResult, DomainError> {
    Ok(OracleResult {
        n,
        p: p.clone(),
        d,
        kind,
        value: oracle_moment(n, p, d, kind)?,
    })
}

/// Evaluates a formula document at exact (n, p): substitutes q = 1-p and
/// sigma^2 = p(1-p) and multiplies the (1-2p) odd prefactor back in.
pub fn evaluate_formula(doc: &FormulaDoc, n: u64, p: &BigRational) -> Result<BigRational, DomainError> {
    check_probability(p)?;
    let at = VarValues::binomial_point(n, p);
    let value = doc.body.eval(&at);
    if doc.odd_factor {
        let two_p = BigRational::from_integer(BigInt::from(2)) * p;
        Ok(value * (BigRational::one() - two_p))
    } else {
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{central_moment_variance_form, density, VarianceMethod};
    use crate::numeric::{parse_rational, rational_pow};

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn oracle_examples() {
        // three-term sum: (+-1)^4 * 1/4 each
        assert_eq!(oracle_moment(2, &r("1/2"), 4, MomentKind::Central).unwrap(), r("1/2"));
        // sum k(k-1) binom(5,k) / 32
        assert_eq!(oracle_moment(5, &r("1/2"), 2, MomentKind::Factorial).unwrap(), r("5"));
        assert_eq!(oracle_moment(7, &r("1/3"), 1, MomentKind::Central).unwrap(), r("0"));
    }

    #[test]
    fn degenerate_endpoints() {
        for n in [0u64, 1, 5, 9] {
            for d in 1..=6u32 {
                assert_eq!(oracle_moment(n, &r("0"), d, MomentKind::Central).unwrap(), r("0"));
                assert_eq!(oracle_moment(n, &r("1"), d, MomentKind::Central).unwrap(), r("0"));
                assert_eq!(oracle_moment(n, &r("0"), d, MomentKind::Raw).unwrap(), r("0"));
                let expected = rational_pow(&r(&n.to_string()), d);
                assert_eq!(oracle_moment(n, &r("1"), d, MomentKind::Raw).unwrap(), expected);
            }
            assert_eq!(oracle_moment(n, &r("0"), 0, MomentKind::Raw).unwrap(), r("1"));
        }
    }

    #[test]
    fn odd_moments_vanish_at_half() {
        for n in 0..=9u64 {
            for d in [1u32, 3, 5, 7, 9] {
                assert_eq!(
                    oracle_moment(n, &r("1/2"), d, MomentKind::Central).unwrap(),
                    r("0")
                );
            }
        }
    }

    #[test]
    fn evaluate_formula_examples() {
        let d2 = central_moment_variance_form(2, VarianceMethod::Symmetrize).unwrap();
        assert_eq!(evaluate_formula(&d2, 3, &r("1/4")).unwrap(), r("9/16"));
        let d4 = central_moment_variance_form(4, VarianceMethod::Symmetrize).unwrap();
        assert_eq!(evaluate_formula(&d4, 2, &r("1/2")).unwrap(), r("1/2"));
        let d3 = central_moment_variance_form(3, VarianceMethod::Symmetrize).unwrap();
        assert_eq!(evaluate_formula(&d3, 4, &r("1/2")).unwrap(), r("0"));
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(oracle_moment(3, &r("-1/2"), 2, MomentKind::Raw).is_err());
        assert!(oracle_moment(3, &r("3/2"), 2, MomentKind::Raw).is_err());
    }

    #[test]
    fn oracle_matches_naive_density_summation() {
        for n in [0u64, 1, 7, 24] {
            for p in ["0", "1", "1/3", "2/7", "9/10"] {
                let p = r(p);
                for d in 0..=8u32 {
                    for kind in [MomentKind::Raw, MomentKind::Central, MomentKind::Factorial] {
                        let mean = BigRational::from_integer(BigInt::from(n)) * &p;
                        let naive: BigRational = (0..=n)
                            .map(|k| {
                                let k_rat = BigRational::from_integer(BigInt::from(k));
                                let g = match kind {
                                    MomentKind::Raw => rational_pow(&k_rat, d),
                                    MomentKind::Central => rational_pow(&(&k_rat - &mean), d),
                                    MomentKind::Factorial => BigRational::from_integer(
                                        falling_power_big(&BigInt::from(k), d),
                                    ),
                                };
                                density(n, &p, k).unwrap() * g
                            })
                            .sum();
                        assert_eq!(
                            oracle_moment(n, &p, d, kind).unwrap(),
                            naive,
                            "n={n} d={d} {kind}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn result_invariants() {
        for n in [0u64, 3, 8] {
            for p in ["0", "2/7", "1/2", "9/10", "1"] {
                let p = r(p);
                assert_eq!(oracle_result(n, &p, 0, MomentKind::Raw).unwrap().value, r("1"));
                assert_eq!(
                    oracle_result(n, &p, 1, MomentKind::Central).unwrap().value,
                    r("0")
                );
                for d in [2u32, 4, 6] {
                    let central = oracle_result(n, &p, d, MomentKind::Central).unwrap();
                    assert!(central.value >= r("0"), "n={n} d={d}");
                }
            }
        }
    }
}
