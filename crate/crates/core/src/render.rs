//! Formula renderers: deterministic plain text (ASCII, sigma^2 spelled
//! `s2`), LaTeX, and the basis extractions behind the moment-table layouts.
//!
//! Variance-basis bodies are printed as a polynomial in n with sigma^2
//! polynomial coefficients, descending in both exponents, which reproduces
//! the published table layout byte for byte.

use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::combinatorics::{binomial_poly, falling_power_poly};
use crate::poly::{Poly, PolyError, VarId};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("polynomial does not fit the expected basis shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn coeff_str(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Joins sign-tagged magnitudes into `a + b - c` form; `neg_prefix` is the
/// leading unary minus ("-" for text, "- " for LaTeX).
fn join_signed(pieces: &[(bool, String)], neg_prefix: &str) -> String {
    let mut out = String::new();
    for (i, (neg, mag)) in pieces.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push_str(neg_prefix);
            }
        } else if *neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(mag);
    }
    out
}

/// Groups a Z[n, s2] body by descending n-exponent, each group sorted by
/// descending s2-exponent.
fn n_groups(body: &Poly) -> Vec<(u32, Vec<(u32, BigRational)>)> {
    let mut groups: std::collections::BTreeMap<u32, Vec<(u32, BigRational)>> =
        std::collections::BTreeMap::new();
    for (m, c) in body.terms() {
        groups
            .entry(m.exponent(VarId::N))
            .or_default()
            .push((m.exponent(VarId::S), c.clone()));
    }
    groups
        .into_iter()
        .rev()
        .map(|(n_e, mut terms)| {
            terms.sort_by_key(|t| std::cmp::Reverse(t.0));
            (n_e, terms)
        })
        .collect()
}

fn var_pow_text(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

/// sigma^2 power spelled for the requested flavor.
fn s2_factors_text(e: u32, p_basis: bool, factors: &mut Vec<String>) {
    if e == 0 {
        return;
    }
    if p_basis {
        factors.push(var_pow_text("p", e));
        if e == 1 {
            factors.push("(1-p)".to_string());
        } else {
            factors.push(format!("(1-p)^{e}"));
        }
    } else {
        factors.push(var_pow_text("s2", e));
    }
}

fn term_text(c_abs: &BigRational, n_e: u32, s_e: u32, p_basis: bool) -> String {
    let mut factors = Vec::new();
    if !c_abs.is_one() || (n_e == 0 && s_e == 0) {
        factors.push(coeff_str(c_abs));
    }
    if n_e > 0 {
        factors.push(var_pow_text("n", n_e));
    }
    s2_factors_text(s_e, p_basis, &mut factors);
    factors.join("*")
}

fn grouped_body_text(body: &Poly, p_basis: bool) -> String {
    if body.is_zero() {
        return "0".to_string();
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (n_e, terms) in n_groups(body) {
        if terms.len() == 1 || n_e == 0 {
            for (s_e, c) in &terms {
                pieces.push((c.is_negative(), term_text(&c.abs(), n_e, *s_e, p_basis)));
            }
        } else {
            let inner: Vec<(bool, String)> = terms
                .iter()
                .map(|(s_e, c)| (c.is_negative(), term_text(&c.abs(), 0, *s_e, p_basis)))
                .collect();
            pieces.push((
                false,
                format!("{}*({})", var_pow_text("n", n_e), join_signed(&inner, "-")),
            ));
        }
    }
    join_signed(&pieces, "-")
}

/// Plain-text rendering of a variance-basis body, with the (1-2p) odd
/// prefactor written in front when present.
pub fn variance_body_text(body: &Poly, odd_factor: bool) -> String {
    let inner = grouped_body_text(body, false);
    if odd_factor && !body.is_zero() {
        format!("(1 - 2*p)*({inner})")
    } else {
        inner
    }
}

/// Plain-text rendering of a central moment in the p basis: the variance
/// body with sigma^2 spelled out as p(1-p).
pub fn central_p_basis_text(variance_body: &Poly, odd_factor: bool) -> String {
    let inner = grouped_body_text(variance_body, true);
    if odd_factor && !variance_body.is_zero() {
        format!("(1 - 2*p)*({inner})")
    } else {
        inner
    }
}

fn var_pow_latex(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{{{e}}}")
    }
}

fn term_latex(c_abs: &BigRational, n_e: u32, s_e: u32, p_basis: bool) -> String {
    let mut factors = Vec::new();
    if !c_abs.is_one() || (n_e == 0 && s_e == 0) {
        factors.push(coeff_str(c_abs));
    }
    if n_e > 0 {
        factors.push(var_pow_latex("n", n_e));
    }
    if s_e > 0 {
        if p_basis {
            factors.push(var_pow_latex("p", s_e));
            if s_e == 1 {
                factors.push("\\left(1 - p\\right)".to_string());
            } else {
                factors.push(format!("\\left(1 - p\\right)^{{{s_e}}}"));
            }
        } else {
            factors.push(format!("\\sigma^{{{}}}", 2 * s_e));
        }
    }
    factors.join(" ")
}

fn grouped_body_latex(body: &Poly, p_basis: bool) -> String {
    if body.is_zero() {
        return "0".to_string();
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (n_e, terms) in n_groups(body) {
        if terms.len() == 1 || n_e == 0 {
            for (s_e, c) in &terms {
                pieces.push((c.is_negative(), term_latex(&c.abs(), n_e, *s_e, p_basis)));
            }
        } else {
            let inner: Vec<(bool, String)> = terms
                .iter()
                .map(|(s_e, c)| (c.is_negative(), term_latex(&c.abs(), 0, *s_e, p_basis)))
                .collect();
            pieces.push((
                false,
                format!(
                    "{} \\left({}\\right)",
                    var_pow_latex("n", n_e),
                    join_signed(&inner, "- ")
                ),
            ));
        }
    }
    join_signed(&pieces, "- ")
}

pub fn variance_body_latex(body: &Poly, odd_factor: bool) -> String {
    let inner = grouped_body_latex(body, false);
    if odd_factor && !body.is_zero() {
        format!("\\left(1 - 2 p\\right) \\left({inner}\\right)")
    } else {
        inner
    }
}

pub fn central_p_basis_latex(variance_body: &Poly, odd_factor: bool) -> String {
    let inner = grouped_body_latex(variance_body, true);
    if odd_factor && !variance_body.is_zero() {
        format!("\\left(1 - 2 p\\right) \\left({inner}\\right)")
    } else {
        inner
    }
}

/// Splits a Z[n, p] polynomial by p-exponent and divides each slice by the
/// falling power n(n-1)...(n-k+1); succeeds exactly when the polynomial has
/// the `sum_k c_k n^(falling k) p^k` shape of the raw-moment formula.
pub fn falling_basis_rows(body: &Poly) -> Result<Vec<(u32, BigRational)>, RenderError> {
    basis_rows(body, |k| falling_power_poly(&Poly::var(VarId::N), k))
}

/// Same split against binom(n, k) = n^(falling k) / k!, yielding the
/// `c_k p^k binom(n,k)` table layout.
pub fn binom_basis_rows(body: &Poly) -> Result<Vec<(u32, BigRational)>, RenderError> {
    basis_rows(body, binomial_poly)
}

fn basis_rows(
    body: &Poly,
    base: impl Fn(u32) -> Poly,
) -> Result<Vec<(u32, BigRational)>, RenderError> {
    if body.contains_var(VarId::Q) || body.contains_var(VarId::S) {
        return Err(RenderError::Shape(format!(
            "expected a polynomial in n and p only: {body}"
        )));
    }
    let mut slices: Vec<(u32, Poly)> = Vec::new();
    for (m, c) in body.terms() {
        let k = m.exponent(VarId::P);
        let n_mono = m.with_exponent(VarId::P, 0);
        let piece = Poly::monomial(n_mono, c.clone());
        match slices.iter_mut().find(|(e, _)| *e == k) {
            Some((_, acc)) => *acc = &*acc + &piece,
            None => slices.push((k, piece)),
        }
    }
    slices.sort_by_key(|(k, _)| *k);
    let mut rows = Vec::new();
    for (k, slice) in slices {
        let quotient = slice.exact_div(&base(k))?;
        let Some((mono, c)) = quotient.leading_term() else {
            continue;
        };
        if quotient.num_terms() != 1 || !mono.is_one() {
            return Err(RenderError::Shape(format!(
                "p^{k} slice is not a constant multiple of the basis element: {slice}"
            )));
        }
        rows.push((k, c.clone()));
    }
    Ok(rows)
}

/// `sum_k c_k n(n-1)...(n-k+1) p^k` in ascending k, the canonical text form
/// of raw and factorial moments.
pub fn falling_form_text(rows: &[(u32, BigRational)]) -> String {
    if rows.is_empty() {
        return "0".to_string();
    }
    let pieces: Vec<(bool, String)> = rows
        .iter()
        .map(|(k, c)| {
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || *k == 0 {
                factors.push(coeff_str(&mag));
            }
            for i in 0..*k {
                if i == 0 {
                    factors.push("n".to_string());
                } else {
                    factors.push(format!("(n-{i})"));
                }
            }
            if *k > 0 {
                factors.push(var_pow_text("p", *k));
            }
            (c.is_negative(), factors.join("*"))
        })
        .collect();
    join_signed(&pieces, "-")
}

pub fn falling_form_latex(rows: &[(u32, BigRational)]) -> String {
    if rows.is_empty() {
        return "0".to_string();
    }
    let pieces: Vec<(bool, String)> = rows
        .iter()
        .map(|(k, c)| {
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || *k == 0 {
                factors.push(coeff_str(&mag));
            }
            for i in 0..*k {
                if i == 0 {
                    factors.push("n".to_string());
                } else {
                    factors.push(format!("\\left(n - {i}\\right)"));
                }
            }
            if *k > 0 {
                factors.push(var_pow_latex("p", *k));
            }
            (c.is_negative(), factors.join(" "))
        })
        .collect();
    join_signed(&pieces, "- ")
}

/// `sum_k c_k p^k binom(n,k)` in descending k, the published table layout
/// for raw moments.
pub fn binom_form_text(rows: &[(u32, BigRational)]) -> String {
    if rows.is_empty() {
        return "0".to_string();
    }
    let pieces: Vec<(bool, String)> = rows
        .iter()
        .rev()
        .map(|(k, c)| {
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || *k == 0 {
                factors.push(coeff_str(&mag));
            }
            if *k > 0 {
                factors.push(var_pow_text("p", *k));
                factors.push(format!("binom(n,{k})"));
            }
            (c.is_negative(), factors.join("*"))
        })
        .collect();
    join_signed(&pieces, "-")
}

pub fn binom_form_latex(rows: &[(u32, BigRational)]) -> String {
    if rows.is_empty() {
        return "0".to_string();
    }
    let pieces: Vec<(bool, String)> = rows
        .iter()
        .rev()
        .map(|(k, c)| {
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || *k == 0 {
                factors.push(coeff_str(&mag));
            }
            if *k > 0 {
                factors.push(var_pow_latex("p", *k));
                factors.push(format!("\\binom{{n}}{{{k}}}"));
            }
            (c.is_negative(), factors.join(" "))
        })
        .collect();
    join_signed(&pieces, "- ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{
        central_moment_variance_form, factorial_moment, raw_moment_via_factorial, VarianceMethod,
    };

    #[test]
    fn variance_text_layout() {
        let d4 = central_moment_variance_form(4, VarianceMethod::Symmetrize).unwrap();
        assert_eq!(
            variance_body_text(&d4.body, d4.odd_factor),
            "3*n^2*s2^2 + n*(-6*s2^2 + s2)"
        );
        let d2 = central_moment_variance_form(2, VarianceMethod::Symmetrize).unwrap();
        assert_eq!(variance_body_text(&d2.body, d2.odd_factor), "n*s2");
        let d3 = central_moment_variance_form(3, VarianceMethod::Symmetrize).unwrap();
        assert_eq!(variance_body_text(&d3.body, d3.odd_factor), "(1 - 2*p)*(n*s2)");
    }

    #[test]
    fn p_basis_text_layout() {
        let d2 = central_moment_variance_form(2, VarianceMethod::Symmetrize).unwrap();
        assert_eq!(central_p_basis_text(&d2.body, d2.odd_factor), "n*p*(1-p)");
        let d4 = central_moment_variance_form(4, VarianceMethod::Symmetrize).unwrap();
        assert_eq!(
            central_p_basis_text(&d4.body, d4.odd_factor),
            "3*n^2*p^2*(1-p)^2 + n*(-6*p^2*(1-p)^2 + p*(1-p))"
        );
    }

    #[test]
    fn falling_text_layout() {
        let d2 = raw_moment_via_factorial(2);
        let rows = falling_basis_rows(&d2.body).unwrap();
        assert_eq!(falling_form_text(&rows), "n*p + n*(n-1)*p^2");
        let f2 = factorial_moment(2);
        let rows = falling_basis_rows(&f2.body).unwrap();
        assert_eq!(falling_form_text(&rows), "n*(n-1)*p^2");
        let f0 = factorial_moment(0);
        let rows = falling_basis_rows(&f0.body).unwrap();
        assert_eq!(falling_form_text(&rows), "1");
    }

    #[test]
    fn binom_text_layout() {
        let d2 = raw_moment_via_factorial(2);
        let rows = binom_basis_rows(&d2.body).unwrap();
        assert_eq!(binom_form_text(&rows), "2*p^2*binom(n,2) + p*binom(n,1)");
    }

    #[test]
    fn latex_layout() {
        let d6 = central_moment_variance_form(6, VarianceMethod::Symmetrize).unwrap();
        assert_eq!(
            variance_body_latex(&d6.body, d6.odd_factor),
            "15 n^{3} \\sigma^{6} + n^{2} \\left(- 130 \\sigma^{6} + 25 \\sigma^{4}\\right) \
             + n \\left(120 \\sigma^{6} - 30 \\sigma^{4} + \\sigma^{2}\\right)"
        );
        let d2 = raw_moment_via_factorial(2);
        let rows = binom_basis_rows(&d2.body).unwrap();
        assert_eq!(binom_form_latex(&rows), "2 p^{2} \\binom{n}{2} + p \\binom{n}{1}");
    }

    #[test]
    fn shape_errors() {
        let with_q = Poly::from_terms(&[(1, [0, 0, 1, 1])]);
        assert!(falling_basis_rows(&with_q).is_err());
        let not_basis = Poly::from_terms(&[(1, [2, 0, 1, 0])]);
        assert!(falling_basis_rows(&not_basis).is_err());
    }
}
