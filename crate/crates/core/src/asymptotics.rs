//! Growth envelope for even-order central moments and the exact rational
//! inequalities that establish it. The Theta-statement itself hides
//! constants, so the checkable content is: an exact upper bound through the
//! composition count k^d, and an exact lower witness built from one balanced
//! even composition per k. Pass/fail decisions are made on exact rationals;
//! floating point only appears in the report columns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::combinatorics::{binomial, multinomial};
use crate::moments::MomentKind;
use crate::numeric::{rational_pow, to_f64};
use crate::oracle::{oracle_moment, DomainError};

#[derive(Debug, Error)]
pub enum AsymptoticsError {
    #[error("the envelope is defined for even orders, got d = {0}")]
    OddOrder(u32),
    #[error("the envelope k-range 2..=d/2 is empty for d = {0}")]
    OrderTooSmall(u32),
    #[error("witness index k = {k} outside 1..={} for d = {d}", d / 2)]
    WitnessRange { k: u32, d: u32 },
    #[error("the upper inequality requires p <= 1/2, got {0}")]
    ProbabilityAboveHalf(String),
    #[error("the lower witness requires 0 < p < 1, got {0}")]
    ProbabilityNotInterior(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// max{ k^(1-k/d) (n sigma^2)^(k/d) : k = 2..d/2 } as a float; requires
/// even d >= 4 so the k-range is non-empty.
pub fn envelope(n: u64, sigma2: &BigRational, d: u32) -> Result<f64, AsymptoticsError> {
    if d % 2 == 1 {
        return Err(AsymptoticsError::OddOrder(d));
    }
    if d < 4 {
        return Err(AsymptoticsError::OrderTooSmall(d));
    }
    let ns = to_f64(&(BigRational::from_integer(BigInt::from(n)) * sigma2));
    let d_f = f64::from(d);
    let mut best = 0.0f64;
    for k in 2..=d / 2 {
        let k_f = f64::from(k);
        let candidate = k_f.powf(1.0 - k_f / d_f) * ns.powf(k_f / d_f);
        best = best.max(candidate);
    }
    Ok(best)
}

/// Right-hand side of the exact upper bound:
/// sum_{k=1}^{d/2} binom(n,k) (pq)^k k^d.
pub fn upper_bound_rhs(n: u64, p: &BigRational, d: u32) -> BigRational {
    let pq = p * &(BigRational::one() - p);
    let mut acc = BigRational::zero();
    for k in 1..=d / 2 {
        let k_pow = BigRational::from_integer(BigInt::from(k).pow(d));
        acc += BigRational::from_integer(binomial(n, k as u64)) * rational_pow(&pq, k) * k_pow;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct UpperCheck {
    pub holds: bool,
    pub moment: BigRational,
    pub bound: BigRational,
}

/// Exact check of moment <= sum binom(n,k) (pq)^k k^d for p <= 1/2, even d.
pub fn check_upper_inequality(
    n: u64,
    p: &BigRational,
    d: u32,
) -> Result<UpperCheck, AsymptoticsError> {
    if d % 2 == 1 {
        return Err(AsymptoticsError::OddOrder(d));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if p > &half {
        return Err(AsymptoticsError::ProbabilityAboveHalf(p.to_string()));
    }
    let moment = oracle_moment(n, p, d, MomentKind::Central)?;
    let bound = upper_bound_rhs(n, p, d);
    Ok(UpperCheck {
        holds: moment <= bound,
        moment,
        bound,
    })
}

/// The balanced even composition of d into k parts used by the lower-bound
/// proof: write d = k*r + l with r, l non-negative even (adjusting the plain
/// division remainder when r comes out odd), then take l/2 parts of r+2 and
/// the rest of r.
pub fn lower_witness_composition(d: u32, k: u32) -> Vec<u32> {
    debug_assert!(d.is_multiple_of(2) && k >= 1 && k <= d / 2);
    let mut r = d / k;
    let mut l = d % k;
    if r % 2 == 1 {
        r -= 1;
        l += k;
    }
    let mut parts = Vec::with_capacity(k as usize);
    for i in 0..k {
        parts.push(if i < l / 2 { r + 2 } else { r });
    }
    // the construction must land on even parts >= 2 summing to d
    assert!(parts.iter().all(|&x| x >= 2 && x % 2 == 0));
    assert_eq!(parts.iter().sum::<u32>(), d);
    parts
}

/// binom(n,k) (pq)^k multinomial(d; parts) 2^(2k-d) for the balanced
/// composition; a single positive term of the stable expansion, minorized
/// through q^(e) + p^(e) >= 2^(1-e).
pub fn lower_witness_bound(n: u64, p: &BigRational, d: u32, k: u32) -> (BigRational, Vec<u32>) {
    let parts = lower_witness_composition(d, k);
    let pq = p * &(BigRational::one() - p);
    let mult = BigRational::from_integer(multinomial(d, &parts));
    let two_pow = if 2 * k >= d {
        BigRational::from_integer(BigInt::from(2).pow(2 * k - d))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(2).pow(d - 2 * k))
    };
    let bound =
        BigRational::from_integer(binomial(n, k as u64)) * rational_pow(&pq, k) * mult * two_pow;
    (bound, parts)
}

#[derive(Clone, Debug)]
pub struct LowerCheck {
    pub holds: bool,
    pub moment: BigRational,
    pub bound: BigRational,
    pub composition: Vec<u32>,
}

/// Exact check of moment >= binom(n,k) (pq)^k multinomial 2^(2k-d) for the
/// balanced composition at index k.
pub fn check_lower_witness(
    n: u64,
    p: &BigRational,
    d: u32,
    k: u32,
) -> Result<LowerCheck, AsymptoticsError> {
    if d % 2 == 1 {
        return Err(AsymptoticsError::OddOrder(d));
    }
    if k < 1 || k > d / 2 {
        return Err(AsymptoticsError::WitnessRange { k, d });
    }
    if p <= &BigRational::zero() || p >= &BigRational::one() {
        return Err(AsymptoticsError::ProbabilityNotInterior(p.to_string()));
    }
    let moment = oracle_moment(n, p, d, MomentKind::Central)?;
    let (bound, composition) = lower_witness_bound(n, p, d, k);
    Ok(LowerCheck {
        holds: moment >= bound,
        moment,
        bound,
        composition,
    })
}

/// One grid row of the envelope report: exact quantities plus the float
/// ratio column. `envelope`/`ratio` are absent for d = 2, where the
/// envelope's k-range is empty and only the exact moment n sigma^2 is shown.
#[derive(Clone, Debug)]
pub struct EnvelopeReport {
    pub n: u64,
    pub p: BigRational,
    pub d: u32,
    pub moment: BigRational,
    pub upper_bound: BigRational,
    pub best_lower: Option<(u32, BigRational)>,
    pub moment_root: f64,
    pub envelope: Option<f64>,
    pub ratio: Option<f64>,
}

pub fn envelope_report(n: u64, p: &BigRational, d: u32) -> Result<EnvelopeReport, AsymptoticsError> {
    if d % 2 == 1 {
        return Err(AsymptoticsError::OddOrder(d));
    }
    let moment = oracle_moment(n, p, d, MomentKind::Central)?;
    let upper_bound = upper_bound_rhs(n, p, d);
    let interior = p > &BigRational::zero() && p < &BigRational::one();
    let best_lower = (interior && d >= 2)
        .then(|| {
            (1..=d / 2)
                .map(|k| (k, lower_witness_bound(n, p, d, k).0))
                .max_by(|a, b| a.1.cmp(&b.1))
        })
        .flatten();
    let moment_root = to_f64(&moment).powf(1.0 / f64::from(d));
    let sigma2 = p * &(BigRational::one() - p);
    let env = if d >= 4 { Some(envelope(n, &sigma2, d)?) } else { None };
    let ratio = env.and_then(|e| (e > 0.0).then(|| moment_root / e));
    Ok(EnvelopeReport {
        n,
        p: p.clone(),
        d,
        moment,
        upper_bound,
        best_lower,
        moment_root,
        envelope: env,
        ratio,
    })
}
