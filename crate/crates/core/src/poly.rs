//! Sparse exact polynomials in the four fixed variables `n`, `s2` (for
//! sigma^2), `p` and `q`, together with the two rewriting engines the moment
//! derivations rest on: representation of p,q-symmetric polynomials in the
//! elementary symmetric basis (e1 = p+q, e2 = pq), and normal-form reduction
//! modulo the variance relation sigma^2 = p(1-p).
//!
//! Coefficients are arbitrary-precision rationals so that intermediate
//! objects like the symbolic binomial coefficient n(n-1)/2 stay exact; every
//! published formula ends up with integer coefficients, which callers can
//! assert with [`Poly::has_integer_coefficients`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numeric::rational_pow;

/// The four variables every polynomial in this crate lives in.
///
/// The declaration order is also the printing precedence: n before s2 before
/// p before q.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    /// Number of trials.
    N,
    /// The variance sigma^2 = pq.
    S,
    /// Success probability.
    P,
    /// Failure probability q = 1 - p.
    Q,
}

impl VarId {
    pub const ALL: [VarId; 4] = [VarId::N, VarId::S, VarId::P, VarId::Q];

    pub fn index(self) -> usize {
        self as usize
    }

    /// ASCII spelling used by the plain-text renderer and JSON `vars` field.
    pub fn ascii_name(self) -> &'static str {
        match self {
            VarId::N => "n",
            VarId::S => "s2",
            VarId::P => "p",
            VarId::Q => "q",
        }
    }
}

/// Exponent vector over the four variables; absent variables carry
/// exponent zero, so the representation is canonical by construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: [u32; 4],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; 4] };

    pub fn new(exps: [u32; 4]) -> Self {
        Monomial { exps }
    }

    pub fn var(v: VarId, e: u32) -> Self {
        let mut exps = [0; 4];
        exps[v.index()] = e;
        Monomial { exps }
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.exps[v.index()]
    }

    pub fn with_exponent(&self, v: VarId, e: u32) -> Self {
        let mut exps = self.exps;
        exps[v.index()] = e;
        Monomial { exps }
    }

    pub fn exponents(&self) -> [u32; 4] {
        self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps == [0; 4]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps) {
            *e += o;
        }
        Monomial { exps }
    }

    /// `self / other` when `other` divides `self` componentwise.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps) {
            *e = e.checked_sub(o)?;
        }
        Some(Monomial { exps })
    }

    pub fn swap_pq(&self) -> Monomial {
        let mut exps = self.exps;
        exps.swap(VarId::P.index(), VarId::Q.index());
        Monomial { exps }
    }

    /// Variables with nonzero exponent, in precedence order.
    pub fn vars(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        VarId::ALL
            .iter()
            .map(|&v| (v, self.exps[v.index()]))
            .filter(|&(_, e)| e > 0)
    }
}

// Graded lexicographic order with n > s2 > p > q; the leading monomial of a
// polynomial is the maximum under this order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("`{dividend}` is not exactly divisible by `{divisor}`")]
    NotDivisible { dividend: String, divisor: String },
    #[error("polynomial is not symmetric under p <-> q: `{0}`")]
    NotSymmetric(String),
}

/// Sparse multivariate polynomial over exact rational coefficients.
///
/// Invariant: no stored coefficient is zero; the zero polynomial has an
/// empty term map. Terms are kept in graded-lex order, so iteration and
/// printing are deterministic.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::ONE, c);
        }
        Poly { terms }
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        Poly::constant(BigRational::from_integer(c))
    }

    pub fn var(v: VarId) -> Self {
        Poly::monomial(Monomial::var(v, 1), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Builds a polynomial from `(coefficient, [n, s2, p, q])` tuples;
    /// convenient for tests and frozen expected values.
    pub fn from_terms(terms: &[(i64, [u32; 4])]) -> Self {
        let mut out = Poly::zero();
        for &(c, exps) in terms {
            out.add_term(Monomial::new(exps), BigRational::from_integer(BigInt::from(c)));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn max_exponent(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    /// Ascending graded-lex iteration over `(monomial, coefficient)`.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.last_key_value()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Replaces every occurrence of `var` by `value` and re-canonicalizes.
    pub fn substitute(&self, var: VarId, value: &Poly) -> Poly {
        let mut powers: Vec<Poly> = vec![Poly::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let rest = Poly::monomial(m.with_exponent(var, 0), c.clone());
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    /// Evaluates at an exact rational point.
    pub fn eval(&self, at: &VarValues) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.vars() {
                term *= rational_pow(at.get(v), e);
            }
            acc += term;
        }
        acc
    }

    /// Exact quotient `self / divisor`; fails unless the division leaves no
    /// remainder. Used to strip the (1-2p) factor from odd-order moments, so
    /// a divisibility failure signals a non-anti-symmetric input upstream.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        let (dm, dc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let Some(qm) = rm.div(dm) else {
                return Err(PolyError::NotDivisible {
                    dividend: self.to_string(),
                    divisor: divisor.to_string(),
                });
            };
            let t = Poly::monomial(qm, rc / dc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    pub fn swap_pq(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.swap_pq(), c.clone())).collect(),
        }
    }

    /// True iff swapping p and q leaves the polynomial fixed.
    pub fn is_symmetric_pq(&self) -> bool {
        self.swap_pq() == *self
    }

    /// True iff swapping p and q negates the polynomial.
    pub fn is_antisymmetric_pq(&self) -> bool {
        self.swap_pq() == -self
    }

    /// Normal form modulo the ideal generated by p^2 - p + s2 (the relation
    /// sigma^2 = p(1-p)), eliminating all p-exponents above 1 through the
    /// single rewrite p^2 -> p - s2. The result equals the input as a
    /// function on the variety sigma^2 = p(1-p).
    pub fn reduce_mod_variance(&self) -> Poly {
        let max_p = self.max_exponent(VarId::P) as usize;
        // nf[a] = (A, B) with p^a == A + B*p modulo the ideal, A, B in Z[s2]
        let mut nf: Vec<(Poly, Poly)> = Vec::with_capacity(max_p + 1);
        nf.push((Poly::one(), Poly::zero()));
        if max_p >= 1 {
            nf.push((Poly::zero(), Poly::one()));
        }
        let minus_s = -&Poly::var(VarId::S);
        for a in 2..=max_p {
            let (prev_a, prev_b) = &nf[a - 1];
            let next = (&minus_s * prev_b, prev_a + prev_b);
            nf.push(next);
        }
        let p = Poly::var(VarId::P);
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let a = m.exponent(VarId::P) as usize;
            let rest = Poly::monomial(m.with_exponent(VarId::P, 0), c.clone());
            let (na, nb) = &nf[a];
            out = &out + &(&rest * &(na + &(nb * &p)));
        }
        out
    }

    /// Rewrites a p,q-symmetric polynomial in the elementary symmetric basis
    /// e1 = p+q, e2 = pq by repeated leading-term subtraction.
    ///
    /// The returned [`ElemSymPoly`] keeps the e1/e2 exponents explicit so the
    /// rewrite can be checked by expanding back; collapsing to a polynomial
    /// in sigma^2 (e1 -> 1, e2 -> s2) is a separate step.
    pub fn symmetrize_pq(&self) -> Result<ElemSymPoly, PolyError> {
        if !self.is_symmetric_pq() {
            return Err(PolyError::NotSymmetric(self.to_string()));
        }
        // Split into slices with fixed n,s2-part; symmetry acts slice-wise.
        let mut slices: BTreeMap<Monomial, BTreeMap<(u32, u32), BigRational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let rest = m.with_exponent(VarId::P, 0).with_exponent(VarId::Q, 0);
            let pq = (m.exponent(VarId::P), m.exponent(VarId::Q));
            slices.entry(rest).or_default().insert(pq, c.clone());
        }
        let mut out = ElemSymPoly::default();
        for (rest, mut slice) in slices {
            while let Some((&(a, b), coeff)) = slice.last_key_value() {
                let c = coeff.clone();
                debug_assert!(a >= b, "leading term of a symmetric slice has a >= b");
                out.add_term(rest, a - b, b, c.clone());
                // subtract c * (p+q)^(a-b) * (pq)^b
                for i in 0..=(a - b) {
                    let binom = crate::combinatorics::binomial((a - b) as u64, i as u64);
                    let delta = &c * BigRational::from_integer(binom);
                    let key = (i + b, a - b - i + b);
                    use std::collections::btree_map::Entry;
                    match slice.entry(key) {
                        Entry::Vacant(e) => {
                            if !delta.is_zero() {
                                e.insert(-delta);
                            }
                        }
                        Entry::Occupied(mut e) => {
                            let v = e.get() - &delta;
                            if v.is_zero() {
                                e.remove();
                            } else {
                                *e.get_mut() = v;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Exact rational point to evaluate a [`Poly`] at.
#[derive(Clone, Debug)]
pub struct VarValues {
    vals: [BigRational; 4],
}

impl VarValues {
    pub fn new(n: BigRational, s: BigRational, p: BigRational, q: BigRational) -> Self {
        VarValues { vals: [n, s, p, q] }
    }

    /// The consistent assignment for a Binom(n, p) query:
    /// q = 1-p and s2 = p(1-p).
    pub fn binomial_point(n: u64, p: &BigRational) -> Self {
        let q = BigRational::one() - p;
        let s = p * &q;
        VarValues::new(BigRational::from_integer(BigInt::from(n)), s, p.clone(), q)
    }

    pub fn get(&self, v: VarId) -> &BigRational {
        &self.vals[v.index()]
    }
}

/// A p,q-symmetric polynomial written in the elementary symmetric basis:
/// a sum of terms `c * rest * e1^i * e2^j` where `rest` is free of p and q.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElemSymPoly {
    terms: BTreeMap<(Monomial, u32, u32), BigRational>,
}

impl ElemSymPoly {
    fn add_term(&mut self, rest: Monomial, e1: u32, e2: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((rest, e1, e2)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, u32, u32), &BigRational)> {
        self.terms.iter()
    }

    /// Substitutes e1 -> 1 and e2 -> s2, giving a polynomial free of p, q.
    pub fn to_variance_poly(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(rest, _e1, e2), c) in &self.terms {
            let s_exp = rest.exponent(VarId::S) + e2;
            out.add_term(rest.with_exponent(VarId::S, s_exp), c.clone());
        }
        out
    }

    /// Substitutes e1 -> p+q and e2 -> pq back; by construction this
    /// reproduces the symmetrized input exactly.
    pub fn expand(&self) -> Poly {
        let e1 = &Poly::var(VarId::P) + &Poly::var(VarId::Q);
        let e2 = &Poly::var(VarId::P) * &Poly::var(VarId::Q);
        let mut out = Poly::zero();
        for (&(rest, a, b), c) in &self.terms {
            let term = &Poly::monomial(rest, c.clone()) * &(&e1.pow(a) * &e2.pow(b));
            out = &out + &term;
        }
        out
    }
}

/// Quotient of two polynomials; only used transiently while checking exact
/// divisibility, never as a persistent value.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(RationalFn { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Collapses to a polynomial when the denominator divides exactly.
    pub fn into_poly(self) -> Result<Poly, PolyError> {
        self.num.exact_div(&self.den)
    }
}

fn add_impl(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.add_term(*m, c.clone());
    }
    out
}

fn mul_impl(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            out.add_term(ma.mul(mb), ca * cb);
        }
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        add_impl(self, rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        add_impl(self, &-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        mul_impl(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        add_impl(&self, &rhs)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        add_impl(&self, &-&rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        mul_impl(&self, &rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

// Debug-friendly rendering: descending graded-lex monomials, `s2` spelling.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(if mag.denom().is_one() {
                    mag.numer().to_string()
                } else {
                    format!("{}/{}", mag.numer(), mag.denom())
                });
            }
            for (v, e) in m.vars() {
                if e == 1 {
                    factors.push(v.ascii_name().to_string());
                } else {
                    factors.push(format!("{}^{}", v.ascii_name(), e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Poly {
        Poly::var(VarId::P)
    }
    fn q() -> Poly {
        Poly::var(VarId::Q)
    }
    fn s() -> Poly {
        Poly::var(VarId::S)
    }

    #[test]
    fn addition_canonicalizes() {
        assert_eq!(&p() + &q(), Poly::from_terms(&[(1, [0, 0, 1, 0]), (1, [0, 0, 0, 1])]));
        assert!((&p() - &p()).is_zero());
        assert_eq!((&p() - &p()).num_terms(), 0);
        let ns = Poly::from_terms(&[(1, [1, 1, 0, 0])]);
        let ns2 = Poly::from_terms(&[(2, [1, 1, 0, 0])]);
        assert_eq!(&ns + &ns2, Poly::from_terms(&[(3, [1, 1, 0, 0])]));
    }

    #[test]
    fn multiplication() {
        let sum = &p() + &q();
        assert_eq!(
            &sum * &sum,
            Poly::from_terms(&[(1, [0, 0, 2, 0]), (2, [0, 0, 1, 1]), (1, [0, 0, 0, 2])])
        );
        assert!((&Poly::zero() * &sum).is_zero());
        let one_minus_2p = Poly::from_terms(&[(1, [0, 0, 0, 0]), (-2, [0, 0, 1, 0])]);
        let ns = Poly::from_terms(&[(1, [1, 1, 0, 0])]);
        assert_eq!(
            &one_minus_2p * &ns,
            Poly::from_terms(&[(1, [1, 1, 0, 0]), (-2, [1, 1, 1, 0])])
        );
        // degree adds for nonzero factors
        assert_eq!((&sum * &ns).total_degree(), 3);
    }

    #[test]
    fn substitution() {
        let one_minus_p = &Poly::one() - &p();
        // p^2 q with q -> 1-p
        let p2q = Poly::from_terms(&[(1, [0, 0, 2, 1])]);
        assert_eq!(
            p2q.substitute(VarId::Q, &one_minus_p),
            Poly::from_terms(&[(1, [0, 0, 2, 0]), (-1, [0, 0, 3, 0])])
        );
        assert_eq!((&p() + &q()).substitute(VarId::Q, &one_minus_p), Poly::one());
        // variable absent: no-op
        let ns = Poly::from_terms(&[(1, [1, 1, 0, 0])]);
        assert_eq!(ns.substitute(VarId::P, &Poly::int(7)), ns);
    }

    #[test]
    fn exact_division() {
        // (q^2 - p^2) / (q - p) = q + p
        let num = &(&q() * &q()) - &(&p() * &p());
        let den = &q() - &p();
        assert_eq!(num.exact_div(&den).unwrap(), &q() + &p());

        // (n*s2 - 2*n*p*s2) / (1 - 2p) = n*s2
        let num = Poly::from_terms(&[(1, [1, 1, 0, 0]), (-2, [1, 1, 1, 0])]);
        let den = Poly::from_terms(&[(1, [0, 0, 0, 0]), (-2, [0, 0, 1, 0])]);
        assert_eq!(num.exact_div(&den).unwrap(), Poly::from_terms(&[(1, [1, 1, 0, 0])]));

        assert!(matches!(
            p().exact_div(&q()),
            Err(PolyError::NotDivisible { .. })
        ));
        assert_eq!(p().exact_div(&Poly::zero()), Err(PolyError::DivisionByZero));
        // 0 / b = 0
        assert!(Poly::zero().exact_div(&den).unwrap().is_zero());
    }

    #[test]
    fn symmetry_predicates() {
        assert!((&p() + &q()).is_symmetric_pq());
        assert!((&q() - &p()).is_antisymmetric_pq());
        let p2q = Poly::from_terms(&[(1, [0, 0, 2, 1])]);
        assert!(!p2q.is_symmetric_pq());
        assert!(!p2q.is_antisymmetric_pq());
        assert!(Poly::zero().is_symmetric_pq());
        assert!(Poly::zero().is_antisymmetric_pq());
    }

    #[test]
    fn symmetrize_classic_identities() {
        // p^2 + q^2 = e1^2 - 2 e2, i.e. 1 - 2 s2 once e1 -> 1
        let sum_sq = &(&p() * &p()) + &(&q() * &q());
        let sym = sum_sq.symmetrize_pq().unwrap();
        assert_eq!(
            sym.to_variance_poly(),
            Poly::from_terms(&[(1, [0, 0, 0, 0]), (-2, [0, 1, 0, 0])])
        );
        assert_eq!(sym.expand(), sum_sq);

        // pq = e2
        let pq = &p() * &q();
        assert_eq!(pq.symmetrize_pq().unwrap().to_variance_poly(), s());

        // pq(q+p) -> s2 after e1 -> 1
        let t = &pq * &(&q() + &p());
        assert_eq!(t.symmetrize_pq().unwrap().to_variance_poly(), s());

        // asymmetric input is rejected
        let p2q = Poly::from_terms(&[(1, [0, 0, 2, 1])]);
        assert!(matches!(p2q.symmetrize_pq(), Err(PolyError::NotSymmetric(_))));
    }

    #[test]
    fn reduce_mod_variance_rules() {
        let p2 = Poly::from_terms(&[(1, [0, 0, 2, 0])]);
        assert_eq!(
            p2.reduce_mod_variance(),
            Poly::from_terms(&[(1, [0, 0, 1, 0]), (-1, [0, 1, 0, 0])])
        );
        // p^3 -> p - s2 - p*s2 (two chained reductions)
        let p3 = Poly::from_terms(&[(1, [0, 0, 3, 0])]);
        let nf = p3.reduce_mod_variance();
        assert_eq!(
            nf,
            Poly::from_terms(&[(1, [0, 0, 1, 0]), (-1, [0, 1, 0, 0]), (-1, [0, 1, 1, 0])])
        );
        // difference is a multiple of p^2 - p + s2
        let ideal = Poly::from_terms(&[(1, [0, 0, 2, 0]), (-1, [0, 0, 1, 0]), (1, [0, 1, 0, 0])]);
        let diff = &nf - &p3;
        assert!(diff.exact_div(&ideal).is_ok());
        // already-reduced input is untouched
        let ns = Poly::from_terms(&[(1, [1, 1, 0, 0])]);
        assert_eq!(ns.reduce_mod_variance(), ns);
    }

    #[test]
    fn eval_at_binomial_point() {
        use crate::numeric::parse_rational;
        let point = VarValues::binomial_point(3, &parse_rational("1/4").unwrap());
        // n * s2 at n=3, p=1/4: 3 * 3/16 = 9/16
        let ns = Poly::from_terms(&[(1, [1, 1, 0, 0])]);
        assert_eq!(ns.eval(&point), parse_rational("9/16").unwrap());
    }

    #[test]
    fn display_is_readable() {
        let body = Poly::from_terms(&[(3, [2, 2, 0, 0]), (-6, [1, 2, 0, 0]), (1, [1, 1, 0, 0])]);
        assert_eq!(body.to_string(), "3*n^2*s2^2 - 6*n*s2^2 + n*s2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::int(-1).to_string(), "-1");
    }

    #[test]
    fn rational_fn_collapses() {
        let num = &(&q() * &q()) - &(&p() * &p());
        let den = &q() - &p();
        let rf = RationalFn::new(num, den).unwrap();
        assert_eq!(rf.into_poly().unwrap(), &q() + &p());
        assert!(RationalFn::new(p(), Poly::zero()).is_err());
    }
}
