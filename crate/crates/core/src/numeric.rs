//! Small exact-arithmetic helpers shared across the crate: rational powers,
//! exact decimal parsing/printing, and conversions for report output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `r^e` for a non-negative integer exponent, with the convention `0^0 = 1`.
pub fn rational_pow(r: &BigRational, e: u32) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    BigRational::new_raw(r.numer().pow(e), r.denom().pow(e))
}

/// Parses an exact rational from either `a/b` or a plain decimal string.
///
/// Decimals are converted through a power-of-ten denominator, never through
/// binary floating point, so `0.3` becomes exactly `3/10`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".to_string());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator `{num}`"))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator `{den}`"))?;
        if den.is_zero() {
            return Err("zero denominator".to_string());
        }
        return Ok(BigRational::new(num, den));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("invalid number `{s}`"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(format!("invalid number `{s}`"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| format!("invalid number `{s}`"))?
    };
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(numer * sign, denom))
}

/// True when the string form carried a decimal point rather than `a/b`.
pub fn is_decimal_literal(s: &str) -> bool {
    !s.contains('/')
}

const SIG_DIGITS: u32 = 15;

/// Rounds an exact rational to 15 significant digits and renders it as a
/// decimal string (positional for moderate exponents, scientific otherwise).
///
/// All work is done in integer arithmetic with half-away-from-zero rounding,
/// so the output is reproducible across platforms.
pub fn decimal_15(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.numer().abs();
    let b = r.denom().abs();

    // decimal exponent e with 10^e <= a/b < 10^(e+1)
    let mut e = a.to_string().len() as i64 - b.to_string().len() as i64;
    while cmp_pow10(&a, &b, e) == std::cmp::Ordering::Less {
        e -= 1;
    }
    while cmp_pow10(&a, &b, e + 1) != std::cmp::Ordering::Less {
        e += 1;
    }

    // digits = round(a/b * 10^shift), half away from zero
    let shift = SIG_DIGITS as i64 - 1 - e;
    let num = &a * pow10(shift.max(0));
    let den = &b * pow10((-shift).max(0));
    let mut digits = ((2u32 * num + &den) / (2u32 * den)).to_string();
    if digits.len() as u32 > SIG_DIGITS {
        digits.truncate(SIG_DIGITS as usize);
        e += 1;
    }
    debug_assert_eq!(digits.len() as u32, SIG_DIGITS);

    let sign = if neg { "-" } else { "" };
    if (-4..15).contains(&e) {
        let body = if e >= 0 {
            let point = (e + 1) as usize;
            format!("{}.{}", &digits[..point], &digits[point..])
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), digits)
        };
        format!("{sign}{body}")
    } else {
        format!("{sign}{}.{}e{}", &digits[..1], &digits[1..], e)
    }
}

fn pow10(e: i64) -> BigInt {
    debug_assert!(e >= 0);
    BigInt::from(10u32).pow(e as u32)
}

/// Compares `a/b` with `10^e` for positive `a`, `b`.
fn cmp_pow10(a: &BigInt, b: &BigInt, e: i64) -> std::cmp::Ordering {
    let lhs = a * pow10((-e).max(0));
    let rhs = b * pow10(e.max(0));
    lhs.cmp(&rhs)
}

/// Best-effort `f64` view of an exact rational, for report columns only.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders an exact rational as `a/b` (or just `a` for integers).
pub fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
