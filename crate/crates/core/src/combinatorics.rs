//! Exact big-integer combinatorial kernels: binomial and multinomial
//! coefficients, falling powers, Stirling numbers of the second kind, the
//! "all blocks of size >= 2" Stirling variant, and lexicographic iteration
//! over integer compositions with a lower bound on the parts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{Poly, VarId};

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// Symbolic binomial coefficient binom(n, k) = n(n-1)...(n-k+1) / k! as a
/// polynomial in the variable n. The coefficients are rationals; any final
/// formula built from it clears to integers.
pub fn binomial_poly(k: u32) -> Poly {
    let falling = falling_power_poly(&Poly::var(VarId::N), k);
    falling.scale(&BigRational::new(BigInt::one(), factorial(k)))
}

pub fn factorial(k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

/// Multinomial coefficient d! / (d_1! ... d_k!) when the parts sum to `d`,
/// and 0 otherwise.
pub fn multinomial(d: u32, parts: &[u32]) -> BigInt {
    if parts.iter().map(|&x| x as u64).sum::<u64>() != d as u64 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    let mut rem = d as u64;
    for &part in parts {
        acc *= binomial(rem, part as u64);
        rem -= part as u64;
    }
    acc
}

/// Falling power x(x-1)...(x-d+1) of an integer; the empty product is 1.
pub fn falling_power(x: i64, d: u32) -> BigInt {
    falling_power_big(&BigInt::from(x), d)
}

pub fn falling_power_big(x: &BigInt, d: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..d {
        acc *= x - BigInt::from(i);
    }
    acc
}

/// Falling power of a polynomial, e.g. n(n-1)(n-2) for d = 3.
pub fn falling_power_poly(x: &Poly, d: u32) -> Poly {
    let mut acc = Poly::one();
    for i in 0..d {
        acc = &acc * &(x - &Poly::int(i as i64));
    }
    acc
}

/// Memoized tables of both Stirling variants up to a fixed row.
///
/// Rows are built eagerly at construction, so a shared table can be read
/// concurrently without synchronization.
pub struct StirlingTable {
    plain: Vec<Vec<BigInt>>,
    assoc: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(max_m: u32) -> Self {
        let max = max_m as usize;
        // S(m,j) = j S(m-1,j) + S(m-1,j-1), S(0,0) = 1
        let mut plain: Vec<Vec<BigInt>> = Vec::with_capacity(max + 1);
        // S2(m,j) = j S2(m-1,j) + (m-1) S2(m-2,j-1), S2(0,0) = 1
        let mut assoc: Vec<Vec<BigInt>> = Vec::with_capacity(max + 1);
        for m in 0..=max {
            let mut prow = vec![BigInt::zero(); m + 1];
            let mut arow = vec![BigInt::zero(); m + 1];
            if m == 0 {
                prow[0] = BigInt::one();
                arow[0] = BigInt::one();
            } else {
                for j in 1..=m {
                    let mut v = BigInt::from(j as u64) * get(&plain, m - 1, j);
                    v += get(&plain, m - 1, j - 1);
                    prow[j] = v;

                    let mut w = BigInt::from(j as u64) * get(&assoc, m - 1, j);
                    if m >= 2 {
                        w += BigInt::from((m - 1) as u64) * get(&assoc, m - 2, j - 1);
                    }
                    arow[j] = w;
                }
            }
            plain.push(prow);
            assoc.push(arow);
        }
        StirlingTable { plain, assoc }
    }

    /// Stirling number of the second kind: partitions of an m-set into j
    /// non-empty blocks.
    pub fn stirling2(&self, m: u32, j: u32) -> BigInt {
        get(&self.plain, m as usize, j as usize)
    }

    /// Partitions of an m-set into j blocks, each of size at least 2.
    pub fn assoc_stirling2(&self, m: u32, j: u32) -> BigInt {
        get(&self.assoc, m as usize, j as usize)
    }
}

fn get(rows: &[Vec<BigInt>], m: usize, j: usize) -> BigInt {
    rows.get(m)
        .and_then(|row| row.get(j))
        .cloned()
        .unwrap_or_else(BigInt::zero)
}

pub fn stirling2(m: u32, j: u32) -> BigInt {
    StirlingTable::new(m).stirling2(m, j)
}

pub fn assoc_stirling2(m: u32, j: u32) -> BigInt {
    StirlingTable::new(m).assoc_stirling2(m, j)
}

/// An ordered tuple of parts with a fixed total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The composed total d.
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// The number of parts k.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Ordered compositions of `d` into `k` parts, each part >= 2, in
/// lexicographic order. Empty when d < 2k.
pub fn compositions_min2(d: u32, k: u32) -> CompositionIter {
    CompositionIter::new(d, k, 2)
}

/// Ordered compositions of `d` into `k` strictly positive parts.
pub fn compositions_positive(d: u32, k: u32) -> CompositionIter {
    CompositionIter::new(d, k, 1)
}

pub struct CompositionIter {
    next: Option<Vec<u32>>,
    d: u32,
    min: u32,
}

impl CompositionIter {
    fn new(d: u32, k: u32, min: u32) -> Self {
        let next = if k == 0 {
            (d == 0).then(Vec::new)
        } else if d as u64 >= min as u64 * k as u64 {
            let mut first = vec![min; k as usize];
            *first.last_mut().unwrap() = d - min * (k - 1);
            Some(first)
        } else {
            None
        };
        CompositionIter { next, d, min }
    }

    fn advance(&self, parts: &[u32]) -> Option<Vec<u32>> {
        let k = parts.len();
        if k <= 1 {
            return None;
        }
        let mut prefix: u64 = parts.iter().map(|&x| x as u64).sum();
        // scan for the rightmost position (excluding the last) that can grow
        for i in (0..k - 1).rev() {
            prefix -= parts[i + 1] as u64;
            let incremented = prefix + 1;
            let rest = k - 1 - i;
            if self.d as u64 >= incremented + self.min as u64 * rest as u64 {
                let mut out = parts[..=i].to_vec();
                out[i] += 1;
                let remaining = self.d as u64 - incremented;
                for _ in 0..rest - 1 {
                    out.push(self.min);
                }
                out.push((remaining - self.min as u64 * (rest as u64 - 1)) as u32);
                return Some(out);
            }
        }
        None
    }
}

impl Iterator for CompositionIter {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let current = self.next.take()?;
        self.next = self.advance(&current);
        Some(Composition { parts: current })
    }
}
