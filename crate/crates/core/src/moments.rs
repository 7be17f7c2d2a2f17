//! Closed-form moment derivations for Binom(n, p): factorial moments, raw
//! moments through two independent routes (factorial-moment base change and
//! direct multinomial counting), the stable positive expansion of central
//! moments, its associated-Stirling fast form, expansion through raw
//! moments, and the variance-basis rewriting via either symmetrization or
//! ideal reduction.
//!
//! Every route produces a [`FormulaDoc`]; the routes are proven equal to one
//! another and to the density oracle by the verification suites.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{
    binomial, binomial_poly, compositions_min2, compositions_positive, falling_power_poly,
    multinomial, Composition, StirlingTable,
};
use crate::numeric::{parse_rational, rational_pow, rational_str};
use crate::oracle::DomainError;
use crate::poly::{Monomial, Poly, PolyError, VarId};
use crate::render::{self, RenderError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MomentKind {
    Raw,
    Central,
    Factorial,
}

impl MomentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MomentKind::Raw => "raw",
            MomentKind::Central => "central",
            MomentKind::Factorial => "factorial",
        }
    }
}

impl fmt::Display for MomentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Basis {
    /// Plain polynomial in n and p (q and sigma^2 eliminated on demand).
    P,
    /// Polynomial in n and sigma^2, with an optional (1-2p) prefactor.
    Variance,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::P => "p",
            Basis::Variance => "variance",
        }
    }
}

/// Which algorithm rewrites a central moment into the variance basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarianceMethod {
    /// Elementary-symmetric rewriting of the p,q form.
    Symmetrize,
    /// Normal-form reduction modulo sigma^2 - p(1-p) in the p form.
    Reduction,
}

/// Derivation route requested through the CLI.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DerivationMethod {
    Direct,
    Fast,
    Symmetrize,
    Reduction,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    Definition,
    FactorialLink,
    DirectCounting,
    StableExpansion,
    FastStirling,
    Symmetrization,
    IdealReduction,
    RawExpansion,
    Parsed,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MomentQuery {
    pub kind: MomentKind,
    pub d: u32,
    pub basis: Basis,
    pub method: Option<DerivationMethod>,
}

#[derive(Debug, Error)]
pub enum MomentError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Render(#[from] RenderError),
}

/// A derived formula plus the metadata needed to render and evaluate it.
///
/// For variance-basis documents of odd order the (1-2p) prefactor is carried
/// in `odd_factor` and never folded into `body`, which then lies in
/// Z[n, sigma^2] with no p or q in its support.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaDoc {
    pub query: MomentQuery,
    pub body: Poly,
    pub odd_factor: bool,
    pub provenance: Provenance,
}

impl FormulaDoc {
    fn new(kind: MomentKind, d: u32, basis: Basis, body: Poly, odd_factor: bool, provenance: Provenance) -> Self {
        FormulaDoc {
            query: MomentQuery {
                kind,
                d,
                basis,
                method: None,
            },
            body,
            odd_factor,
            provenance,
        }
    }

    /// The fully expanded polynomial in Z[n, p]: q is replaced by 1-p,
    /// sigma^2 by p(1-p), and the odd prefactor is multiplied back in.
    pub fn to_p_basis_poly(&self) -> Poly {
        let one_minus_p = &Poly::one() - &Poly::var(VarId::P);
        match self.query.basis {
            Basis::P => {
                let body = self.body.substitute(VarId::Q, &one_minus_p);
                if self.odd_factor {
                    &body * &one_minus_2p()
                } else {
                    body
                }
            }
            Basis::Variance => {
                let s_value = &Poly::var(VarId::P) * &one_minus_p;
                let body = self.body.substitute(VarId::S, &s_value);
                if self.odd_factor {
                    &body * &one_minus_2p()
                } else {
                    body
                }
            }
        }
    }

    /// Same content as an expanded p-basis document.
    pub fn to_p_basis(&self) -> FormulaDoc {
        FormulaDoc {
            query: MomentQuery {
                kind: self.query.kind,
                d: self.query.d,
                basis: Basis::P,
                method: self.query.method,
            },
            body: self.to_p_basis_poly(),
            odd_factor: false,
            provenance: self.provenance,
        }
    }

    /// Variance-basis view `(body in Z[n, s2], carries_odd_factor)` computed
    /// from the document's own polynomial, independent of how it was derived.
    fn variance_view(&self) -> Result<(Poly, bool), MomentError> {
        if self.query.kind != MomentKind::Central {
            return Err(MomentError::InvalidQuery(
                "variance view only exists for central moments".into(),
            ));
        }
        if self.query.basis == Basis::Variance {
            return Ok((self.body.clone(), self.odd_factor));
        }
        let odd = self.query.d % 2 == 1;
        let expanded = self.to_p_basis_poly();
        let stripped = if odd {
            expanded.exact_div(&one_minus_2p())?
        } else {
            expanded
        };
        let nf = stripped.reduce_mod_variance();
        if nf.contains_var(VarId::P) || nf.contains_var(VarId::Q) {
            return Err(MomentError::Inconsistent(format!(
                "normal form still mentions p or q: {nf}"
            )));
        }
        Ok((nf, odd))
    }

    pub fn to_text(&self) -> Result<String, MomentError> {
        match self.query.kind {
            MomentKind::Central => {
                let (vbody, odd) = self.variance_view()?;
                Ok(match self.query.basis {
                    Basis::Variance => render::variance_body_text(&vbody, odd),
                    Basis::P => render::central_p_basis_text(&vbody, odd),
                })
            }
            MomentKind::Raw | MomentKind::Factorial => {
                let rows = render::falling_basis_rows(&self.to_p_basis_poly())?;
                Ok(render::falling_form_text(&rows))
            }
        }
    }

    pub fn to_latex(&self) -> Result<String, MomentError> {
        match self.query.kind {
            MomentKind::Central => {
                let (vbody, odd) = self.variance_view()?;
                Ok(match self.query.basis {
                    Basis::Variance => render::variance_body_latex(&vbody, odd),
                    Basis::P => render::central_p_basis_latex(&vbody, odd),
                })
            }
            MomentKind::Raw | MomentKind::Factorial => {
                let rows = render::falling_basis_rows(&self.to_p_basis_poly())?;
                Ok(render::falling_form_latex(&rows))
            }
        }
    }

    /// Renders a raw-moment document as coefficients against p^k binom(n,k),
    /// the layout used for the moment tables.
    pub fn to_binom_basis_text(&self) -> Result<String, MomentError> {
        let rows = render::binom_basis_rows(&self.to_p_basis_poly())?;
        Ok(render::binom_form_text(&rows))
    }

    pub fn to_binom_basis_latex(&self) -> Result<String, MomentError> {
        let rows = render::binom_basis_rows(&self.to_p_basis_poly())?;
        Ok(render::binom_form_latex(&rows))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&FormulaJson::from_doc(self)).expect("formula serialization")
    }
}

fn one_minus_2p() -> Poly {
    Poly::from_terms(&[(1, [0, 0, 0, 0]), (-2, [0, 0, 1, 0])])
}

/// JSON wire form of a formula: terms as [exponent-vector, coefficient]
/// pairs with decimal-string coefficients, ordered by descending graded-lex
/// monomial so the bytes are reproducible.
#[derive(Serialize, Deserialize)]
pub struct FormulaJson {
    pub kind: String,
    pub d: u32,
    pub basis: String,
    pub odd_factor: bool,
    pub vars: Vec<String>,
    pub terms: Vec<(Vec<u32>, String)>,
}

impl FormulaJson {
    pub fn from_doc(doc: &FormulaDoc) -> Self {
        let terms = doc
            .body
            .terms()
            .rev()
            .map(|(m, c)| (m.exponents().to_vec(), rational_str(c)))
            .collect();
        FormulaJson {
            kind: doc.query.kind.as_str().to_string(),
            d: doc.query.d,
            basis: doc.query.basis.as_str().to_string(),
            odd_factor: doc.odd_factor,
            vars: VarId::ALL.iter().map(|v| v.ascii_name().to_string()).collect(),
            terms,
        }
    }

    pub fn into_doc(self) -> Result<FormulaDoc, MomentError> {
        let kind = match self.kind.as_str() {
            "raw" => MomentKind::Raw,
            "central" => MomentKind::Central,
            "factorial" => MomentKind::Factorial,
            other => return Err(MomentError::InvalidQuery(format!("unknown kind `{other}`"))),
        };
        let basis = match self.basis.as_str() {
            "p" => Basis::P,
            "variance" => Basis::Variance,
            other => return Err(MomentError::InvalidQuery(format!("unknown basis `{other}`"))),
        };
        if basis == Basis::Variance && kind != MomentKind::Central {
            return Err(MomentError::InvalidQuery(
                "variance basis is only defined for central moments".into(),
            ));
        }
        let expected_vars: Vec<String> = VarId::ALL.iter().map(|v| v.ascii_name().to_string()).collect();
        if self.vars != expected_vars {
            return Err(MomentError::InvalidQuery(format!(
                "unexpected variable list {:?}",
                self.vars
            )));
        }
        let mut body = Poly::zero();
        for (exps, coeff) in &self.terms {
            let exps: [u32; 4] = exps
                .as_slice()
                .try_into()
                .map_err(|_| MomentError::InvalidQuery("exponent vector must have 4 entries".into()))?;
            let c = parse_rational(coeff)
                .map_err(|e| MomentError::InvalidQuery(format!("bad coefficient `{coeff}`: {e}")))?;
            body = &body + &Poly::monomial(Monomial::new(exps), c);
        }
        Ok(FormulaDoc {
            query: MomentQuery {
                kind,
                d: self.d,
                basis,
                method: None,
            },
            body,
            odd_factor: self.odd_factor,
            provenance: Provenance::Parsed,
        })
    }
}

/// Factorial moment E[S^(falling d)] = n^(falling d) p^d.
pub fn factorial_moment(d: u32) -> FormulaDoc {
    let body = &falling_power_poly(&Poly::var(VarId::N), d)
        * &Poly::monomial(Monomial::var(VarId::P, d), BigRational::one());
    FormulaDoc::new(MomentKind::Factorial, d, Basis::P, body, false, Provenance::Definition)
}

/// Raw moment by the factorial-moment base change:
/// E[S^d] = sum_k S(d,k) n^(falling k) p^k.
pub fn raw_moment_via_factorial(d: u32) -> FormulaDoc {
    let table = StirlingTable::new(d);
    let mut body = Poly::zero();
    for k in 0..=d {
        let coeff = table.stirling2(d, k);
        if coeff.is_zero() {
            continue;
        }
        let term = &falling_power_poly(&Poly::var(VarId::N), k)
            * &Poly::monomial(Monomial::var(VarId::P, k), BigRational::from_integer(coeff));
        body = &body + &term;
    }
    FormulaDoc::new(MomentKind::Raw, d, Basis::P, body, false, Provenance::FactorialLink)
}

/// Raw moment by direct counting: groups the multinomial expansion of
/// (X_1 + ... + X_n)^d by the number of distinct indices, enumerating the
/// positive compositions explicitly instead of using Stirling numbers.
pub fn raw_moment_via_counting(d: u32) -> FormulaDoc {
    let mut body = if d == 0 { Poly::one() } else { Poly::zero() };
    for k in 1..=d {
        let count: BigInt = compositions_positive(d, k)
            .map(|c| multinomial(d, c.parts()))
            .sum();
        if count.is_zero() {
            continue;
        }
        let term = &binomial_poly(k)
            * &Poly::monomial(Monomial::var(VarId::P, k), BigRational::from_integer(count));
        body = &body + &term;
    }
    FormulaDoc::new(MomentKind::Raw, d, Basis::P, body, false, Provenance::DirectCounting)
}

/// One centered-Bernoulli factor q^(d_i - 1) - (-p)^(d_i - 1): symmetric in
/// p, q when d_i is even and anti-symmetric when d_i is odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliCentralFactor {
    part: u32,
}

impl BernoulliCentralFactor {
    pub fn new(part: u32) -> Self {
        debug_assert!(part >= 2);
        BernoulliCentralFactor { part }
    }

    pub fn part(&self) -> u32 {
        self.part
    }

    pub fn poly(&self) -> Poly {
        let e = self.part - 1;
        let q_term = Poly::monomial(Monomial::var(VarId::Q, e), BigRational::one());
        // -(-p)^e = (-1)^(e+1) p^e
        let sign = if e.is_multiple_of(2) { -1 } else { 1 };
        let p_term = Poly::monomial(
            Monomial::var(VarId::P, e),
            BigRational::from_integer(BigInt::from(sign)),
        );
        &q_term + &p_term
    }

    pub fn is_symmetric_pq(&self) -> bool {
        self.part.is_multiple_of(2)
    }

    /// Numeric value at exact p (with q = 1-p).
    pub fn eval(&self, p: &BigRational) -> BigRational {
        let q = BigRational::one() - p;
        let e = self.part - 1;
        let neg_p = -p.clone();
        rational_pow(&q, e) - rational_pow(&neg_p, e)
    }
}

/// One additive term of the stable expansion, kept factored so per-term
/// sign claims can be checked numerically before anything is expanded.
#[derive(Clone, Debug)]
pub struct StableTerm {
    pub k: u32,
    pub composition: Composition,
    pub multinomial: BigInt,
    pub factors: Vec<BernoulliCentralFactor>,
}

impl StableTerm {
    /// binom(n,k) (pq)^k multinomial prod_i factor_i, expanded.
    pub fn poly(&self) -> Poly {
        let mut acc = &binomial_poly(self.k)
            * &Poly::monomial(
                Monomial::var(VarId::P, self.k).mul(&Monomial::var(VarId::Q, self.k)),
                BigRational::from_integer(self.multinomial.clone()),
            );
        for f in &self.factors {
            acc = &acc * &f.poly();
        }
        acc
    }

    /// Exact numeric value at (n, p).
    pub fn eval(&self, n: u64, p: &BigRational) -> BigRational {
        let q = BigRational::one() - p;
        let mut acc = BigRational::from_integer(binomial(n, self.k as u64) * &self.multinomial);
        acc *= rational_pow(&(p * &q), self.k);
        for f in &self.factors {
            acc *= f.eval(p);
        }
        acc
    }
}

/// The terms of the stable positive expansion of the d-th central moment:
/// sum over k = 1..floor(d/2) and over compositions of d into k parts >= 2.
pub fn stable_terms(d: u32) -> Vec<StableTerm> {
    let mut terms = Vec::new();
    for k in 1..=d / 2 {
        for composition in compositions_min2(d, k) {
            let m = multinomial(d, composition.parts());
            let factors = composition
                .parts()
                .iter()
                .map(|&part| BernoulliCentralFactor::new(part))
                .collect();
            terms.push(StableTerm {
                k,
                composition,
                multinomial: m,
                factors,
            });
        }
    }
    terms
}

/// Central moment as the stable expansion, a polynomial in n, p and q in
/// which every additive term is non-negative for p <= 1/2.
pub fn central_moment_stable(d: u32) -> FormulaDoc {
    if d == 0 {
        return FormulaDoc::new(MomentKind::Central, 0, Basis::P, Poly::one(), false, Provenance::StableExpansion);
    }
    let mut body = Poly::zero();
    for term in stable_terms(d) {
        body = &body + &term.poly();
    }
    debug_assert!(body.has_integer_coefficients());
    FormulaDoc::new(MomentKind::Central, d, Basis::P, body, false, Provenance::StableExpansion)
}

/// Central moment through the regrouped form
/// U_k = k! sum_l binom(d,l) sum_j S2(l,j) S2(d-l,k-j) (-1)^j x^(l-j)
/// with x = -p/q; the q^d prefactor clears every denominator, which the
/// implementation verifies exponent by exponent.
pub fn central_moment_fast(d: u32) -> Result<FormulaDoc, MomentError> {
    if d == 0 {
        return Ok(FormulaDoc::new(
            MomentKind::Central,
            0,
            Basis::P,
            Poly::one(),
            false,
            Provenance::FastStirling,
        ));
    }
    let table = StirlingTable::new(d);
    let mut body = Poly::zero();
    for k in 1..=d / 2 {
        let n_falling = falling_power_poly(&Poly::var(VarId::N), k);
        let mut inner = Poly::zero();
        for l in 0..=d {
            let binom_dl = binomial(d as u64, l as u64);
            for j in 0..=k.min(l) {
                let s_left = table.assoc_stirling2(l, j);
                if s_left.is_zero() {
                    continue;
                }
                let s_right = table.assoc_stirling2(d - l, k - j);
                if s_right.is_zero() {
                    continue;
                }
                // x^(l-j) * q^d = (-1)^(l-j) p^(l-j) q^(d-l+j)
                let t = l - j;
                if t > d {
                    return Err(MomentError::Inconsistent(format!(
                        "q^{d} prefactor does not clear x^{t} at d={d}, k={k}"
                    )));
                }
                let mut coeff = &binom_dl * &s_left * &s_right;
                if l % 2 == 1 {
                    coeff = -coeff;
                }
                let mono = Monomial::var(VarId::P, k + t).mul(&Monomial::var(VarId::Q, d - t));
                inner = &inner + &Poly::monomial(mono, BigRational::from_integer(coeff));
            }
        }
        body = &body + &(&n_falling * &inner);
    }
    debug_assert!(body.has_integer_coefficients());
    Ok(FormulaDoc::new(MomentKind::Central, d, Basis::P, body, false, Provenance::FastStirling))
}

/// Number of (l, j) summands actually used per k by the fast route; the
/// structural point is that this is polynomial in d, bounded by
/// (d+1)(k+1), while the stable route enumerates exponentially many
/// compositions.
pub fn fast_term_counts(d: u32) -> Vec<usize> {
    let table = StirlingTable::new(d);
    (1..=d / 2)
        .map(|k| {
            let mut count = 0;
            for l in 0..=d {
                for j in 0..=k.min(l) {
                    if !table.assoc_stirling2(l, j).is_zero()
                        && !table.assoc_stirling2(d - l, k - j).is_zero()
                    {
                        count += 1;
                    }
                }
            }
            count
        })
        .collect()
}

/// Central moment expanded through raw moments:
/// E[(S - np)^d] = sum_j binom(d,j) E[S^j] (-np)^(d-j).
pub fn central_moment_from_raw(d: u32) -> FormulaDoc {
    let minus_np = Poly::monomial(
        Monomial::var(VarId::N, 1).mul(&Monomial::var(VarId::P, 1)),
        BigRational::from_integer(BigInt::from(-1)),
    );
    let mut body = Poly::zero();
    for j in 0..=d {
        let raw = raw_moment_via_factorial(j);
        let c = BigRational::from_integer(binomial(d as u64, j as u64));
        let term = &raw.body.scale(&c) * &minus_np.pow(d - j);
        body = &body + &term;
    }
    FormulaDoc::new(MomentKind::Central, d, Basis::P, body, false, Provenance::RawExpansion)
}

/// Rewrites a central-moment polynomial given in p,q form into the variance
/// basis; `d` fixes the odd/even handling.
pub fn variance_body_from_pq(u: &Poly, d: u32, method: VarianceMethod) -> Result<Poly, MomentError> {
    let odd = d % 2 == 1;
    let body = match method {
        VarianceMethod::Symmetrize => {
            let symmetric = if odd {
                let q_minus_p = &Poly::var(VarId::Q) - &Poly::var(VarId::P);
                u.exact_div(&q_minus_p)?
            } else {
                u.clone()
            };
            symmetric.symmetrize_pq()?.to_variance_poly()
        }
        VarianceMethod::Reduction => {
            let one_minus_p = &Poly::one() - &Poly::var(VarId::P);
            let in_p = u.substitute(VarId::Q, &one_minus_p);
            let stripped = if odd { in_p.exact_div(&one_minus_2p())? } else { in_p };
            let nf = stripped.reduce_mod_variance();
            if nf.contains_var(VarId::P) || nf.contains_var(VarId::Q) {
                return Err(MomentError::Inconsistent(format!(
                    "variance normal form still mentions p or q: {nf}"
                )));
            }
            nf
        }
    };
    if !body.has_integer_coefficients() {
        return Err(MomentError::Inconsistent(format!(
            "variance body has non-integer coefficients: {body}"
        )));
    }
    Ok(body)
}

/// The d-th central moment in the variance basis. For odd d the returned
/// document carries the (1-2p) prefactor as metadata and its body is the
/// sigma^2 polynomial alone.
pub fn central_moment_variance_form(d: u32, method: VarianceMethod) -> Result<FormulaDoc, MomentError> {
    central_moment_variance_from(&central_moment_stable(d), method)
}

/// Variance form computed from any p,q-form central document, letting the
/// caller choose the source route (stable or fast).
pub fn central_moment_variance_from(
    source: &FormulaDoc,
    method: VarianceMethod,
) -> Result<FormulaDoc, MomentError> {
    if source.query.kind != MomentKind::Central || source.query.basis != Basis::P {
        return Err(MomentError::InvalidQuery(
            "variance rewriting expects a p,q-form central document".into(),
        ));
    }
    let d = source.query.d;
    if d == 0 {
        return Ok(FormulaDoc::new(
            MomentKind::Central,
            0,
            Basis::Variance,
            Poly::one(),
            false,
            provenance_of(method),
        ));
    }
    let body = variance_body_from_pq(&source.body, d, method)?;
    Ok(FormulaDoc::new(
        MomentKind::Central,
        d,
        Basis::Variance,
        body,
        d % 2 == 1,
        provenance_of(method),
    ))
}

fn provenance_of(method: VarianceMethod) -> Provenance {
    match method {
        VarianceMethod::Symmetrize => Provenance::Symmetrization,
        VarianceMethod::Reduction => Provenance::IdealReduction,
    }
}

/// Binomial density Pr[S = k] = binom(n,k) p^k (1-p)^(n-k), exactly.
pub fn density(n: u64, p: &BigRational, k: u64) -> Result<BigRational, DomainError> {
    crate::oracle::check_probability(p)?;
    if k > n {
        return Err(DomainError::IndexOutOfRange { k, n });
    }
    let exp_k = exponent(k, n)?;
    let exp_rest = exponent(n - k, n)?;
    let q = BigRational::one() - p;
    Ok(BigRational::from_integer(binomial(n, k)) * rational_pow(p, exp_k) * rational_pow(&q, exp_rest))
}

fn exponent(e: u64, n: u64) -> Result<u32, DomainError> {
    u32::try_from(e).map_err(|_| DomainError::TrialCountTooLarge(n))
}

/// Derives the formula a [`MomentQuery`] asks for, routing through the
/// requested method.
pub fn derive_moment(query: &MomentQuery) -> Result<FormulaDoc, MomentError> {
    let d = query.d;
    let method = query.method;
    match (query.kind, query.basis) {
        (MomentKind::Raw, Basis::P) => {
            ensure_method(method, &[DerivationMethod::Direct], "raw moments")?;
            let mut doc = raw_moment_via_factorial(d);
            doc.query.method = method;
            Ok(doc)
        }
        (MomentKind::Factorial, Basis::P) => {
            ensure_method(method, &[DerivationMethod::Direct], "factorial moments")?;
            let mut doc = factorial_moment(d);
            doc.query.method = method;
            Ok(doc)
        }
        (MomentKind::Central, basis) => {
            let method = method.unwrap_or(match basis {
                Basis::P => DerivationMethod::Direct,
                Basis::Variance => DerivationMethod::Symmetrize,
            });
            let variance = match method {
                DerivationMethod::Direct | DerivationMethod::Symmetrize => {
                    central_moment_variance_from(&central_moment_stable(d), VarianceMethod::Symmetrize)?
                }
                DerivationMethod::Fast => {
                    central_moment_variance_from(&central_moment_fast(d)?, VarianceMethod::Symmetrize)?
                }
                DerivationMethod::Reduction => {
                    central_moment_variance_from(&central_moment_stable(d), VarianceMethod::Reduction)?
                }
            };
            let mut doc = match basis {
                Basis::Variance => variance,
                Basis::P => variance.to_p_basis(),
            };
            doc.query.method = Some(method);
            Ok(doc)
        }
        (kind, Basis::Variance) => Err(MomentError::InvalidQuery(format!(
            "variance basis is not defined for {kind} moments"
        ))),
    }
}

fn ensure_method(
    method: Option<DerivationMethod>,
    allowed: &[DerivationMethod],
    what: &str,
) -> Result<(), MomentError> {
    match method {
        None => Ok(()),
        Some(m) if allowed.contains(&m) => Ok(()),
        Some(m) => Err(MomentError::InvalidQuery(format!(
            "method {m:?} is not applicable to {what}"
        ))),
    }
}
